#include "dipkit/cli.hpp"

#include "dipkit/bench.hpp"
#include "dipkit/calibration.hpp"
#include "dipkit/clustering.hpp"
#include "dipkit/dip.hpp"
#include "dipkit/dipnsub.hpp"
#include "dipkit/distributions.hpp"
#include "dipkit/errors.hpp"
#include "dipkit/lookup_table.hpp"
#include "dipkit/metrics.hpp"
#include "dipkit/significance.hpp"

#include <CLI11.hpp>
#include <json.hpp>
#include <spdlog/sinks/stdout_sinks.h>
#include <spdlog/spdlog.h>

#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace dipkit::cli {

namespace {

using Json = nlohmann::ordered_json;
using Matrix = std::vector<std::vector<double>>;

struct Options {
    std::string input;
    std::string input2;
    std::string output;
    std::string table_path;
    std::string method = "function";
    std::string dist;
    std::vector<std::string> scenarios;
    std::vector<std::size_t> sizes;
    double alpha = 0.01;
    double threshold = 0.15;
    double momentum = 0.95;
    double step_size = 0.1;
    double dip = -1.0;
    std::size_t max_iters = 200;
    std::size_t reps = 0;  // 0 = command default
    std::size_t holdout_reps = 0;
    std::size_t reps_per_cell = 10;
    std::size_t n = 0;
    std::size_t column = 0;
    std::uint64_t seed = 0;
    bool keep_outliers = false;
};

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::optional<double> parse_double(const std::string& field) {
    const std::string f = trim(field);
    if (f.empty()) return std::nullopt;
    double v = 0.0;
    const char* begin = f.data();
    if (*begin == '+') ++begin;
    auto [ptr, ec] = std::from_chars(begin, f.data() + f.size(), v);
    if (ec != std::errc() || ptr != f.data() + f.size()) return std::nullopt;
    return v;
}

std::vector<std::string> split_fields(const std::string& line) {
    std::vector<std::string> out;
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, ',')) out.push_back(field);
    if (!line.empty() && line.back() == ',') out.emplace_back();
    return out;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InvalidInput("cannot read input file '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// Numeric CSV; a first row with any non-numeric field is taken as a header.
Matrix read_matrix(const std::string& path) {
    if (path.empty()) throw InvalidInput("--input is required");
    std::istringstream in(read_file(path));
    Matrix rows;
    std::string line;
    bool first = true;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        const auto fields = split_fields(line);
        std::vector<double> row;
        bool numeric = true;
        for (const auto& f : fields) {
            const auto v = parse_double(f);
            if (!v) {
                numeric = false;
                break;
            }
            row.push_back(*v);
        }
        if (!numeric) {
            if (first) {
                first = false;
                continue;
            }
            throw InvalidInput(path + ":" + std::to_string(line_no) + ": non-numeric field");
        }
        first = false;
        if (!rows.empty() && row.size() != rows.front().size()) {
            throw InvalidInput(path + ":" + std::to_string(line_no) + ": inconsistent column count");
        }
        rows.push_back(std::move(row));
    }
    if (rows.empty()) throw InvalidInput("input file '" + path + "' has no data rows");
    return rows;
}

std::vector<double> read_column(const std::string& path, std::size_t column) {
    const auto rows = read_matrix(path);
    if (column >= rows.front().size()) throw InvalidInput("column index out of range");
    std::vector<double> out;
    out.reserve(rows.size());
    for (const auto& r : rows) out.push_back(r[column]);
    return out;
}

Eigen::MatrixXd to_eigen(const Matrix& rows) {
    Eigen::MatrixXd m(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows.front().size()));
    for (std::size_t i = 0; i < rows.size(); ++i) {
        for (std::size_t j = 0; j < rows[i].size(); ++j) {
            m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
        }
    }
    return m;
}

// Either a JSON document with a "labels" array or a one-column CSV of integers.
std::vector<int> read_labels(const std::string& path) {
    if (path.empty()) throw InvalidInput("two label files are required");
    const std::string text = read_file(path);
    const auto start = text.find_first_not_of(" \t\r\n");
    if (start != std::string::npos && text[start] == '{') {
        Json doc;
        try {
            doc = Json::parse(text);
            return doc.at("labels").get<std::vector<int>>();
        } catch (const nlohmann::json::exception& e) {
            throw InvalidInput("bad label file '" + path + "': " + e.what());
        }
    }
    std::vector<int> out;
    for (double v : read_column(path, 0)) {
        if (v != static_cast<double>(static_cast<int>(v))) throw InvalidInput("labels must be integers");
        out.push_back(static_cast<int>(v));
    }
    return out;
}

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

// Writes to a temporary file and renames, so a failed command never leaves a partial file.
void emit(const Options& o, const std::string& text) {
    if (o.output.empty()) {
        std::cout << text;
        std::cout.flush();
        return;
    }
    const std::string tmp = o.output + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary);
        if (!out) throw InvalidInput("cannot write output file '" + o.output + "'");
        out << text;
        if (!out) throw Error("write to '" + tmp + "' failed");
    }
    std::filesystem::rename(tmp, o.output);
}

void emit_json(const Options& o, const Json& doc) { emit(o, doc.dump(2) + "\n"); }

struct Context {
    std::optional<LookupTable> owned_table;
    const LookupTable* table = nullptr;

    const LookupTable& load_table(const Options& o) {
        if (table != nullptr) return *table;
        if (!o.table_path.empty()) {
            owned_table = LookupTable::load(o.table_path);
            table = &*owned_table;
        } else {
            table = &default_table();
        }
        return *table;
    }
};

SignificanceConfig significance(const Options& o, Context& ctx) {
    SignificanceConfig cfg;
    cfg.alpha = o.alpha;
    cfg.calculator.method = parse_method(o.method);
    cfg.calculator.seed = o.seed;
    cfg.calculator.bootstrap_reps = o.reps == 0 ? 1000 : o.reps;
    if (cfg.calculator.method == PValueMethod::table) cfg.calculator.table = &ctx.load_table(o);
    cfg.validate();
    return cfg;
}

Json interval_json(const std::vector<Interval>& intervals, const SortedSample& s) {
    Json arr = Json::array();
    for (const auto& iv : intervals) arr.push_back({s[iv.lo], s[iv.hi]});
    return arr;
}

// Clusters a column and reports labels in input order.
Json cluster_1d(const Options& o, Context& ctx, bool tailored) {
    const auto values = read_column(o.input, o.column);
    Eigen::MatrixXd m(static_cast<Eigen::Index>(values.size()), 1);
    for (std::size_t i = 0; i < values.size(); ++i) m(static_cast<Eigen::Index>(i), 0) = values[i];
    const auto proj = project_and_sort(m, ProjectionAxis::unit(1, 0));
    const auto cfg = significance(o, ctx);
    const ClusterLabels sorted = tailored ? tailored_dip(proj.sample, cfg) : unidip(proj.sample, cfg);
    std::vector<int> labels(values.size());
    for (std::size_t i = 0; i < proj.order.size(); ++i) labels[proj.order[i]] = sorted.labels[i];
    Json doc;
    doc["labels"] = labels;
    doc["k"] = sorted.k;
    doc["axes"] = Json::array({Json::array({1.0})});
    doc["intervals"] = interval_json(sorted.intervals(), proj.sample);
    return doc;
}

int cmd_dip(const Options& o, Context&) {
    const auto sample = SortedSample::from_unsorted(read_column(o.input, o.column));
    const auto r = compute_dip(sample);
    Json doc;
    doc["n"] = sample.size();
    doc["dip"] = r.dip;
    doc["modal_interval"] = {sample[r.modal_interval.lo], sample[r.modal_interval.hi]};
    doc["modal_interval_index"] = {r.modal_interval.lo, r.modal_interval.hi};
    if (r.modal_triangle) {
        doc["modal_triangle"] = {r.modal_triangle->i1, r.modal_triangle->i2, r.modal_triangle->i3};
    } else {
        doc["modal_triangle"] = nullptr;
    }
    doc["degenerate"] = r.degenerate;
    emit_json(o, doc);
    return 0;
}

int cmd_pvalue(const Options& o, Context& ctx) {
    double dip = o.dip;
    std::size_t n = o.n;
    bool degenerate = false;
    if (!o.input.empty()) {
        const auto sample = SortedSample::from_unsorted(read_column(o.input, o.column));
        const auto r = compute_dip(sample);
        dip = r.dip;
        n = sample.size();
        degenerate = r.degenerate;
    } else if (dip < 0.0 || n == 0) {
        throw InvalidInput("pvalue needs --input, or both --dip and --n");
    }
    const auto cfg = significance(o, ctx);
    const double p = degenerate ? 1.0 : cfg.calculator.pvalue(dip, n);
    Json doc;
    doc["dip"] = dip;
    doc["n"] = n;
    doc["method"] = o.method;
    doc["p"] = p;
    emit_json(o, doc);
    return 0;
}

int cmd_bootstrap_table(const Options& o, Context&) {
    const auto sizes = o.sizes.empty() ? default_table_sizes() : o.sizes;
    auto table = bootstrap_table(sizes, default_quantile_levels(), o.reps == 0 ? 2000 : o.reps, o.seed);
    table.set_grid_policy(default_grid_policy());
    emit(o, table.to_csv_string());
    return 0;
}

Json shape_json(const SigmoidShape& s) {
    return Json{{"w", s.w}, {"h", s.h}, {"k", s.k}, {"s", s.s}, {"u", s.u}};
}

int cmd_fit(const Options& o, Context& ctx) {
    const std::string path = o.input.empty() ? o.table_path : o.input;
    const LookupTable table = path.empty() ? ctx.load_table(o) : LookupTable::load(path);
    const auto report = fit_table(table, o.holdout_reps, o.seed);
    Json doc;
    doc["b1"] = report.coeffs.b1;
    doc["b2"] = report.coeffs.b2;
    doc["shape"] = shape_json(report.frozen_shape);
    doc["mse_total"] = report.mse_total;
    doc["mse_holdout"] = report.mse_holdout;
    doc["mse_holdout_table"] = report.mse_holdout_table;
    doc["holdout_repetitions"] = o.holdout_reps;
    Json per_n = Json::array();
    for (const auto& [n, t] : report.theta_per_n) {
        per_n.push_back({{"n", n}, {"w", t.w}, {"h", t.h}, {"k", t.k}, {"q", t.q}, {"r", t.r}, {"s", t.s}, {"u", t.u}});
    }
    doc["theta_per_n"] = per_n;
    emit_json(o, doc);
    return 0;
}

int cmd_unidip(const Options& o, Context& ctx) {
    emit_json(o, cluster_1d(o, ctx, false));
    return 0;
}

int cmd_tailoreddip(const Options& o, Context& ctx) {
    emit_json(o, cluster_1d(o, ctx, true));
    return 0;
}

int cmd_dipnsub(const Options& o, Context& ctx) {
    const Eigen::MatrixXd data = to_eigen(read_matrix(o.input));
    DipnSubConfig cfg;
    cfg.significance = significance(o, ctx);
    cfg.threshold = o.threshold;
    cfg.sgd.momentum = o.momentum;
    cfg.sgd.step_size = o.step_size;
    cfg.sgd.max_iters = o.max_iters;
    cfg.keep_outliers = o.keep_outliers;
    cfg.validate();
    const auto r = dipnsub(data, cfg);
    Json doc;
    doc["labels"] = r.labels.labels;
    doc["k"] = r.labels.k;
    Json axes = Json::array();
    for (const auto& a : r.axes) axes.push_back(std::vector<double>(a.data(), a.data() + a.size()));
    doc["axes"] = axes;
    doc["costs"] = r.costs;
    Json projected = Json::array();
    for (Eigen::Index i = 0; i < r.projected.rows(); ++i) {
        Json row = Json::array();
        for (Eigen::Index j = 0; j < r.projected.cols(); ++j) row.push_back(r.projected(i, j));
        projected.push_back(row);
    }
    doc["projected"] = projected;
    emit_json(o, doc);
    return 0;
}

int cmd_gen(const Options& o, Context&) {
    if (o.dist.empty()) throw InvalidInput("gen needs --dist");
    if (o.n == 0) throw InvalidInput("gen needs --n >= 1");
    const auto sample = generate(parse_distribution(o.dist), o.n, o.seed);
    std::string text = "value,label\n";
    for (std::size_t i = 0; i < sample.values.size(); ++i) {
        text += fmt(sample.values[i]) + "," + std::to_string(sample.labels[i]) + "\n";
    }
    emit(o, text);
    return 0;
}

int cmd_nmi(const Options& o, Context&) {
    const double v = nmi(read_labels(o.input), read_labels(o.input2));
    Json doc;
    doc["nmi"] = v;
    emit_json(o, doc);
    return 0;
}

int cmd_bench(const Options& o, Context& ctx) {
    BenchConfig cfg;
    const std::vector<std::string> names =
        o.scenarios.empty() ? std::vector<std::string>{"N(4,1)", "N(4,1)+N(0,1)"} : o.scenarios;
    for (const auto& s : names) cfg.scenarios.push_back(parse_distribution(s));
    cfg.sizes = o.sizes.empty() ? std::vector<std::size_t>{100, 1000, 10000} : o.sizes;
    cfg.repetitions_per_cell = o.reps_per_cell;
    cfg.bootstrap_reps = o.reps == 0 ? 1000 : o.reps;
    cfg.seed = o.seed;
    cfg.table = &ctx.load_table(o);
    const auto report = bench_pvalue_methods(cfg);
    std::ostringstream csv;
    report.write_csv(csv);
    emit(o, csv.str());
    report.write_summary(std::cerr);
    return 0;
}

void add_common(CLI::App* sub, Options& o) {
    sub->add_option("--input", o.input, "Input CSV file");
    sub->add_option("--output", o.output, "Output file (default: stdout)");
    sub->add_option("--seed", o.seed, "Seed for all randomness");
}

void add_significance(CLI::App* sub, Options& o) {
    sub->add_option("--alpha", o.alpha, "Significance level")->check(CLI::Range(0.0, 1.0));
    sub->add_option("--method", o.method, "p-value method")
        ->check(CLI::IsMember({"function", "table", "bootstrap"}));
    sub->add_option("--reps", o.reps, "Bootstrap repetitions")->check(CLI::PositiveNumber);
    sub->add_option("--table", o.table_path, "Look-up table CSV (default: embedded or $DIPKIT_TABLE)");
}

}  // namespace

int run(int argc, char** argv) {
    // Diagnostics go to stderr so stdout carries only the command's output.
    if (!spdlog::get("dipkit")) spdlog::set_default_logger(spdlog::stderr_logger_st("dipkit"));
    CLI::App app{"Dip-test based clustering and p-value tools"};
    app.require_subcommand(1);
    Options o;
    Context ctx;
    std::function<int(const Options&, Context&)> action;
    auto bind = [&](CLI::App* sub, int (*fn)(const Options&, Context&)) {
        sub->callback([&action, fn] { action = fn; });
    };

    auto* dip = app.add_subcommand("dip", "Dip statistic of one column");
    add_common(dip, o);
    dip->add_option("--column", o.column, "Column index");
    bind(dip, cmd_dip);

    auto* pv = app.add_subcommand("pvalue", "Dip p-value of a sample or of a given dip");
    add_common(pv, o);
    add_significance(pv, o);
    pv->add_option("--column", o.column, "Column index");
    pv->add_option("--dip", o.dip, "Dip value (instead of --input)")->check(CLI::Range(0.0, 0.25));
    pv->add_option("--n", o.n, "Sample size (instead of --input)")->check(CLI::PositiveNumber);
    bind(pv, cmd_pvalue);

    auto* bt = app.add_subcommand("bootstrap-table", "Bootstrap a look-up table");
    add_common(bt, o);
    bt->add_option("--reps", o.reps, "Repetitions per size (default 2000)")->check(CLI::PositiveNumber);
    bt->add_option("--sizes", o.sizes, "Sample sizes")->delimiter(',');
    bind(bt, cmd_bootstrap_table);

    auto* fit = app.add_subcommand("fit", "Fit the sigmoid to a look-up table");
    add_common(fit, o);
    fit->add_option("--table", o.table_path, "Table CSV (same as --input)");
    fit->add_option("--holdout-reps", o.holdout_reps, "Repetitions for holdout rows (0 skips holdout)");
    bind(fit, cmd_fit);

    for (auto [name, fn, tailored] : {std::tuple{"unidip", cmd_unidip, false},
                                      std::tuple{"tailoreddip", cmd_tailoreddip, true}}) {
        auto* sub = app.add_subcommand(name, tailored ? "TailoredDip clustering of one column"
                                                      : "UniDip clustering of one column");
        add_common(sub, o);
        add_significance(sub, o);
        sub->add_option("--column", o.column, "Column index");
        bind(sub, fn);
    }

    auto* dns = app.add_subcommand("dipnsub", "Common-subspace clustering of a data matrix");
    add_common(dns, o);
    add_significance(dns, o);
    dns->add_option("--threshold", o.threshold, "Minimum multimodal fraction")->check(CLI::Range(0.0, 1.0));
    dns->add_option("--momentum", o.momentum, "SGD momentum")->check(CLI::Range(0.0, 1.0));
    dns->add_option("--step-size", o.step_size, "SGD step size")->check(CLI::PositiveNumber);
    dns->add_option("--max-iters", o.max_iters, "SGD iterations per axis");
    dns->add_flag("--keep-outliers", o.keep_outliers, "Keep noise labels instead of assigning them");
    bind(dns, cmd_dipnsub);

    auto* gen = app.add_subcommand("gen", "Draw a sample from a distribution spec");
    gen->add_option("--output", o.output, "Output file (default: stdout)");
    gen->add_option("--seed", o.seed, "Seed");
    gen->add_option("--dist", o.dist, "Distribution, e.g. N(4,1) or N(4,1)+N(0,1)")->required();
    gen->add_option("--n", o.n, "Sample size")->required()->check(CLI::PositiveNumber);
    bind(gen, cmd_gen);

    auto* nm = app.add_subcommand("nmi", "NMI between two labelings");
    nm->add_option("--output", o.output, "Output file (default: stdout)");
    nm->add_option("first", o.input, "First label file (CSV or clustering JSON)")->required();
    nm->add_option("second", o.input2, "Second label file")->required();
    bind(nm, cmd_nmi);

    auto* bench = app.add_subcommand("bench", "Time the three p-value methods");
    bench->add_option("--output", o.output, "Output CSV (default: stdout)");
    bench->add_option("--seed", o.seed, "Seed");
    bench->add_option("--reps", o.reps, "Bootstrap repetitions (default 1000)")->check(CLI::PositiveNumber);
    bench->add_option("--reps-per-cell", o.reps_per_cell, "Samples per scenario and size")
        ->check(CLI::PositiveNumber);
    bench->add_option("--sizes", o.sizes, "Sample sizes")->delimiter(',');
    bench->add_option("--scenario", o.scenarios, "Distribution specs (repeatable)");
    bench->add_option("--table", o.table_path, "Look-up table CSV");
    bind(bench, cmd_bench);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        return action(o, ctx);
    } catch (const InvalidInput& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
}

}  // namespace dipkit::cli
