#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace dipkit {

/// Bootstrapped (dip, p) pairs for a set of sample sizes.
///
/// CSV layout: optional `#key=value` metadata lines, then the header `n,dip,p`
/// and one line per pair, sorted by n then dip.
class LookupTable {
public:
    struct Row {
        std::size_t n = 0;
        std::vector<double> dip;  // strictly increasing
        std::vector<double> p;    // non-increasing
    };

    LookupTable() = default;
    /// Rows may come in any order; they are sorted by n and validated.
    explicit LookupTable(std::vector<Row> rows, std::size_t repetitions = 0, std::uint64_t seed = 0);

    static LookupTable from_csv(std::istream& in);
    static LookupTable from_csv_string(const std::string& text);
    static LookupTable load(const std::string& path);

    void write_csv(std::ostream& out) const;
    std::string to_csv_string() const;

    /// p-value with sqrt(n) interpolation between the bracketing rows.
    /// Throws OutOfRange when n exceeds the largest row.
    double pvalue(double dip, std::size_t n) const;

    const std::vector<Row>& rows() const noexcept { return rows_; }
    bool empty() const noexcept { return rows_.empty(); }
    std::size_t min_n() const;
    std::size_t max_n() const;
    std::size_t repetitions() const noexcept { return repetitions_; }
    std::uint64_t seed() const noexcept { return seed_; }
    /// Free-form description of the quantile grid, kept as metadata.
    const std::string& grid_policy() const noexcept { return grid_policy_; }
    void set_grid_policy(std::string policy) { grid_policy_ = std::move(policy); }

    /// Collapses equal dips to the first pair (largest p) and checks the row invariants.
    static Row normalize_row(Row row);

private:
    std::vector<Row> rows_;
    std::size_t repetitions_ = 0;
    std::uint64_t seed_ = 0;
    std::string grid_policy_;
};

/// p-value of a single row at `dip` by linear interpolation, clamped to 1 below
/// the grid and 0 above it.
double row_pvalue(const LookupTable::Row& row, double dip);

/// The table compiled into the library.
const LookupTable& embedded_table();

/// Table named by DIPKIT_TABLE if set, otherwise the embedded one.
const LookupTable& default_table();

}  // namespace dipkit
