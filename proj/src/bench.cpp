#include "dipkit/bench.hpp"

#include "dipkit/bootstrap.hpp"
#include "dipkit/clustering.hpp"
#include "dipkit/dip.hpp"
#include "dipkit/errors.hpp"
#include "dipkit/pvalue.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <map>
#include <ostream>

namespace dipkit {

namespace {

using Clock = std::chrono::steady_clock;

template <class F>
double timed(F&& f) {
    const auto t0 = Clock::now();
    f();
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

// Keeps results alive so the timed loops are not optimized away.
volatile double g_sink = 0.0;

}  // namespace

double BenchReport::total(const std::string& method, std::size_t n) const {
    double s = 0.0;
    for (const auto& e : entries) {
        if (e.method == method && e.n == n && e.available) s += e.seconds;
    }
    return s;
}

bool BenchReport::any_unavailable(const std::string& method, std::size_t n) const {
    return std::any_of(entries.begin(), entries.end(),
                       [&](const BenchEntry& e) { return e.method == method && e.n == n && !e.available; });
}

void BenchReport::write_csv(std::ostream& out) const {
    out << "method,n,scenario,seconds\n";
    for (const auto& e : entries) {
        out << e.method << ',' << e.n << ',' << e.scenario << ',';
        if (e.available) {
            char buf[40];
            std::snprintf(buf, sizeof buf, "%.9g", e.seconds);
            out << buf;
        } else {
            out << "NA";
        }
        out << '\n';
    }
}

void BenchReport::write_summary(std::ostream& out) const {
    std::map<std::size_t, std::map<std::string, std::pair<double, bool>>> grid;
    for (const auto& e : entries) {
        auto& cell = grid[e.n][e.method];
        if (e.available) cell.first += e.seconds;
        else cell.second = true;
    }
    for (const auto& [n, methods] : grid) {
        out << "n=" << n;
        for (const auto& [m, cell] : methods) {
            out << "  " << m << '=';
            if (cell.second) {
                out << "unavailable";
            } else {
                char buf[40];
                std::snprintf(buf, sizeof buf, "%.3es", cell.first);
                out << buf;
            }
        }
        out << '\n';
    }
}

BenchReport bench_pvalue_methods(const BenchConfig& config) {
    BenchReport report;
    if (config.repetitions_per_cell == 0) throw InvalidInput("repetitions per cell must be at least 1");
    if (config.bootstrap_reps == 0) throw InvalidInput("bootstrap repetitions must be at least 1");
    std::uint64_t cell_index = 0;
    for (const auto& spec : config.scenarios) {
        for (std::size_t n : config.sizes) {
            ++cell_index;
            std::vector<double> dips;
            dips.reserve(config.repetitions_per_cell);
            for (std::size_t r = 0; r < config.repetitions_per_cell; ++r) {
                const auto sample = generate(spec, n, stream_seed(config.seed, cell_index * 1000003 + r));
                dips.push_back(compute_dip(SortedSample::from_unsorted(sample.values)).dip);
            }
            const std::string name = spec.name();

            g_sink = g_sink + pvalue_function(dips.front(), n);
            const double t_function = timed([&] {
                double acc = 0.0;
                for (double d : dips) acc += pvalue_function(d, n);
                g_sink = g_sink + acc;
            });
            report.entries.push_back({"function", n, name, t_function, dips.size(), true});

            if (config.table != nullptr) {
                if (n > config.table->max_n()) {
                    report.entries.push_back({"table", n, name, 0.0, 0, false});
                } else {
                    g_sink = g_sink + config.table->pvalue(dips.front(), n);
                    const double t_table = timed([&] {
                        double acc = 0.0;
                        for (double d : dips) acc += config.table->pvalue(d, n);
                        g_sink = g_sink + acc;
                    });
                    report.entries.push_back({"table", n, name, t_table, dips.size(), true});
                }
            }

            g_sink = g_sink + pvalue_bootstrap(dips.front(), n, 1, config.seed);
            const double t_boot = timed([&] {
                double acc = 0.0;
                for (std::size_t r = 0; r < dips.size(); ++r) {
                    acc += pvalue_bootstrap(dips[r], n, config.bootstrap_reps, stream_seed(config.seed, r));
                }
                g_sink = g_sink + acc;
            });
            report.entries.push_back({"bootstrap", n, name, t_boot, dips.size(), true});
        }
    }
    return report;
}

double time_tailored_workload(const std::vector<std::vector<double>>& sorted_samples,
                              const SignificanceConfig& config) {
    std::vector<SortedSample> samples;
    samples.reserve(sorted_samples.size());
    for (const auto& s : sorted_samples) samples.push_back(SortedSample::from_sorted(s));
    return timed([&] {
        std::size_t k = 0;
        for (const auto& s : samples) k += static_cast<std::size_t>(tailored_dip(s, config).k);
        g_sink = g_sink + static_cast<double>(k);
    });
}

}  // namespace dipkit
