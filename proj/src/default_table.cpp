#include "dipkit/lookup_table.hpp"

#include <cstdlib>

namespace dipkit {

namespace detail {
extern const char* const embedded_table_csv;
}

const LookupTable& embedded_table() {
    static const LookupTable table = LookupTable::from_csv_string(detail::embedded_table_csv);
    return table;
}

const LookupTable& default_table() {
    static const LookupTable table = [] {
        const char* path = std::getenv("DIPKIT_TABLE");
        if (path != nullptr && *path != '\0') return LookupTable::load(path);
        return embedded_table();
    }();
    return table;
}

}  // namespace dipkit
