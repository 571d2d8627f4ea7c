#include "dipkit/lookup_table.hpp"

#include "dipkit/errors.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

namespace dipkit {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

double parse_double(const std::string& field, std::size_t line_no) {
    double v = 0.0;
    const char* first = field.data();
    const char* last = field.data() + field.size();
    auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc() || ptr != last || !std::isfinite(v)) {
        throw InvalidInput("table line " + std::to_string(line_no) + ": bad number '" + field + "'");
    }
    return v;
}

std::string format17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace

LookupTable::Row LookupTable::normalize_row(Row row) {
    if (row.n == 0) throw InvalidInput("table row has n = 0");
    if (row.dip.size() != row.p.size() || row.dip.empty()) {
        throw InvalidInput("table row for n=" + std::to_string(row.n) + " is empty or ragged");
    }
    Row out;
    out.n = row.n;
    for (std::size_t i = 0; i < row.dip.size(); ++i) {
        const double d = row.dip[i];
        const double p = row.p[i];
        if (!(d > 0.0 && d <= 0.25 + 1e-12) || !(p >= 0.0 && p <= 1.0)) {
            throw InvalidInput("table row for n=" + std::to_string(row.n) + " has a pair out of range");
        }
        if (!out.dip.empty()) {
            if (d < out.dip.back() || p > out.p.back()) {
                throw InvalidInput("table row for n=" + std::to_string(row.n) + " is not monotone");
            }
            if (d == out.dip.back()) continue;
        }
        out.dip.push_back(d);
        out.p.push_back(p);
    }
    return out;
}

LookupTable::LookupTable(std::vector<Row> rows, std::size_t repetitions, std::uint64_t seed)
    : repetitions_(repetitions), seed_(seed) {
    std::sort(rows.begin(), rows.end(), [](const Row& a, const Row& b) { return a.n < b.n; });
    for (std::size_t i = 1; i < rows.size(); ++i) {
        if (rows[i].n == rows[i - 1].n) throw InvalidInput("duplicate table row n=" + std::to_string(rows[i].n));
    }
    rows_.reserve(rows.size());
    for (auto& r : rows) rows_.push_back(normalize_row(std::move(r)));
}

LookupTable LookupTable::from_csv(std::istream& in) {
    std::map<std::size_t, Row> rows;
    std::size_t repetitions = 0;
    std::uint64_t seed = 0;
    std::string policy;
    std::string line;
    std::size_t line_no = 0;
    bool header_seen = false;
    while (std::getline(in, line)) {
        ++line_no;
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '#') {
            const auto eq = line.find('=');
            if (eq == std::string::npos) continue;
            const std::string key = trim(line.substr(1, eq - 1));
            const std::string value = trim(line.substr(eq + 1));
            if (key == "repetitions") repetitions = static_cast<std::size_t>(parse_double(value, line_no));
            else if (key == "seed") seed = std::stoull(value);
            else if (key == "grid") policy = value;
            continue;
        }
        if (!header_seen) {
            if (line != "n,dip,p") throw InvalidInput("table header must be 'n,dip,p', got '" + line + "'");
            header_seen = true;
            continue;
        }
        std::stringstream ss(line);
        std::string f_n, f_dip, f_p;
        if (!std::getline(ss, f_n, ',') || !std::getline(ss, f_dip, ',') || !std::getline(ss, f_p)) {
            throw InvalidInput("table line " + std::to_string(line_no) + " needs three fields");
        }
        const double nd = parse_double(trim(f_n), line_no);
        if (nd < 1.0 || nd != std::floor(nd)) {
            throw InvalidInput("table line " + std::to_string(line_no) + ": n must be a positive integer");
        }
        auto& row = rows[static_cast<std::size_t>(nd)];
        row.n = static_cast<std::size_t>(nd);
        row.dip.push_back(parse_double(trim(f_dip), line_no));
        row.p.push_back(parse_double(trim(f_p), line_no));
    }
    if (!header_seen) throw InvalidInput("table has no header");
    std::vector<Row> list;
    for (auto& [n, r] : rows) list.push_back(std::move(r));
    LookupTable table(std::move(list), repetitions, seed);
    table.grid_policy_ = policy;
    return table;
}

LookupTable LookupTable::from_csv_string(const std::string& text) {
    std::istringstream in(text);
    return from_csv(in);
}

LookupTable LookupTable::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InvalidInput("cannot open table file '" + path + "'");
    return from_csv(in);
}

void LookupTable::write_csv(std::ostream& out) const {
    out << "#repetitions=" << repetitions_ << '\n';
    out << "#seed=" << seed_ << '\n';
    if (!grid_policy_.empty()) out << "#grid=" << grid_policy_ << '\n';
    out << "n,dip,p\n";
    for (const auto& row : rows_) {
        for (std::size_t i = 0; i < row.dip.size(); ++i) {
            out << row.n << ',' << format17(row.dip[i]) << ',' << format17(row.p[i]) << '\n';
        }
    }
}

std::string LookupTable::to_csv_string() const {
    std::ostringstream out;
    write_csv(out);
    return out.str();
}

std::size_t LookupTable::min_n() const {
    if (rows_.empty()) throw InvalidInput("look-up table is empty");
    return rows_.front().n;
}

std::size_t LookupTable::max_n() const {
    if (rows_.empty()) throw InvalidInput("look-up table is empty");
    return rows_.back().n;
}

double row_pvalue(const LookupTable::Row& row, double dip) {
    const auto& d = row.dip;
    if (dip < d.front()) return 1.0;
    if (dip > d.back()) return 0.0;
    const auto it = std::lower_bound(d.begin(), d.end(), dip);
    const auto j = static_cast<std::size_t>(it - d.begin());
    if (*it == dip) return row.p[j];
    const double t = (dip - d[j - 1]) / (d[j] - d[j - 1]);
    return row.p[j - 1] + t * (row.p[j] - row.p[j - 1]);
}

double LookupTable::pvalue(double dip, std::size_t n) const {
    if (rows_.empty()) throw InvalidInput("look-up table is empty");
    if (n == 0) throw InvalidInput("sample size must be at least 1");
    if (!(dip > 0.0 && dip <= 0.25 + 1e-12)) {
        throw InvalidInput("dip must lie in (0, 0.25], got " + std::to_string(dip));
    }
    if (n > rows_.back().n) {
        throw OutOfRange("sample size " + std::to_string(n) + " exceeds the largest table size " +
                         std::to_string(rows_.back().n));
    }
    if (n <= rows_.front().n) return row_pvalue(rows_.front(), dip);

    const auto hi_it = std::lower_bound(rows_.begin(), rows_.end(), n,
                                        [](const Row& r, std::size_t v) { return r.n < v; });
    if (hi_it->n == n) return row_pvalue(*hi_it, dip);
    const Row& hi = *hi_it;
    const Row& lo = *(hi_it - 1);
    const double sl = std::sqrt(static_cast<double>(lo.n));
    const double sh = std::sqrt(static_cast<double>(hi.n));
    const double t = (std::sqrt(static_cast<double>(n)) - sl) / (sh - sl);

    // Same grid on both sides: interpolate each pair, then read off the new row.
    if (lo.dip.size() == hi.dip.size() && lo.p == hi.p) {
        Row mid;
        mid.n = n;
        mid.p = lo.p;
        mid.dip.resize(lo.dip.size());
        for (std::size_t i = 0; i < lo.dip.size(); ++i) mid.dip[i] = (1.0 - t) * lo.dip[i] + t * hi.dip[i];
        return row_pvalue(mid, dip);
    }
    // Grids differ (ties collapsed at small n): interpolate the rows' p-values at this dip.
    return (1.0 - t) * row_pvalue(lo, dip) + t * row_pvalue(hi, dip);
}

}  // namespace dipkit
