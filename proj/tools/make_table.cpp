// Builds the bootstrap look-up table shipped in data/dip_table.csv.

#include "dipkit/calibration.hpp"
#include "dipkit/lookup_table.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>

int main(int argc, char** argv) {
    CLI::App app{"Bootstrap the dip look-up table"};
    std::size_t reps = 10000;
    std::uint64_t seed = 20230101;
    std::string output = "data/dip_table.csv";
    std::size_t max_n = 0;
    app.add_option("--reps", reps, "Bootstrap repetitions per size");
    app.add_option("--seed", seed, "Base seed");
    app.add_option("--output", output, "Output CSV path");
    app.add_option("--max-n", max_n, "Only build sizes up to this n (0 = all)");
    CLI11_PARSE(app, argc, argv);

    const auto levels = dipkit::default_quantile_levels();
    std::vector<dipkit::LookupTable::Row> rows;
    for (std::size_t n : dipkit::default_table_sizes()) {
        if (max_n != 0 && n > max_n) break;
        const auto t0 = std::chrono::steady_clock::now();
        rows.push_back(dipkit::bootstrap_row(n, levels, reps, seed));
        const double sec = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        std::fprintf(stderr, "n=%zu done in %.2fs\n", n, sec);
    }
    dipkit::LookupTable table(std::move(rows), reps, seed);
    table.set_grid_policy(dipkit::default_grid_policy());

    const std::string tmp = output + ".tmp";
    {
        std::ofstream out(tmp);
        if (!out) {
            std::cerr << "cannot write " << tmp << '\n';
            return 1;
        }
        table.write_csv(out);
    }
    std::filesystem::rename(tmp, output);
    return 0;
}
