#include "kcnf/checks.hpp"
#include "kcnf/harness.hpp"

#include "CLI11.hpp"

#include <fstream>
#include <iostream>
#include <sstream>

namespace {

int write_output(const std::string& text, const std::string& path) {
    if (path.empty()) {
        std::cout << text;
        return 0;
    }
    std::ofstream out(path);
    if (!out) {
        std::cerr << "error: cannot write '" << path << "'\n";
        return 1;
    }
    out << text;
    return 0;
}

std::vector<std::size_t> parse_d_list(const std::string& text) {
    std::vector<std::size_t> out;
    std::stringstream in(text);
    std::string item;
    while (std::getline(in, item, ',')) {
        if (item.empty()) continue;
        std::size_t used = 0;
        const unsigned long long v = std::stoull(item, &used);
        if (used != item.size() || v == 0) throw std::invalid_argument("bad dimension '" + item + "'");
        out.push_back(static_cast<std::size_t>(v));
    }
    if (out.empty()) throw std::invalid_argument("--d-list is empty");
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Online log-loss predictors for monotone conjunctions and k-CNF"};
    app.require_subcommand(1);

    // synthetic
    std::string algo = "alg2";
    std::string reduction = "none";
    std::string format = "csv";
    std::string out_path;
    std::size_t d = 8;
    std::size_t k = 1;
    std::uint64_t n = 8192;
    std::uint64_t repeats = 1;
    std::uint64_t seed = 0;
    std::size_t budget = kcnf::kDefaultFeatureBudget;

    auto* synthetic = app.add_subcommand("synthetic", "Random realizable trials with bound checks");
    synthetic->add_option("--algo", algo, "bayes-exact|xi-plus|memorize|alg1|alg2|madnb")->required();
    synthetic->add_option("--d", d, "Input dimension")->required();
    synthetic->add_option("--n", n, "Steps per trial")->required();
    synthetic->add_option("--repeats", repeats, "Number of trials")->required();
    synthetic->add_option("--seed", seed, "Seed")->required();
    synthetic->add_option("--reduction", reduction, "none|conj|disj|kcnf");
    synthetic->add_option("--k", k, "Clause width for kcnf");
    synthetic->add_option("--feature-budget", budget, "Largest allowed expanded dimension");
    synthetic->add_option("--format", format, "csv|json");
    synthetic->add_option("--out", out_path, "Output file (default stdout)");

    // dataset
    std::string path;
    std::string label_column;
    std::string positive_label;
    std::optional<std::uint64_t> shuffle_seed;
    auto* dataset = app.add_subcommand("dataset", "Online run over a categorical CSV file");
    dataset->add_option("--path", path, "CSV file with a header row")->required();
    dataset->add_option("--label-column", label_column, "Label column name")->required();
    dataset->add_option("--positive-label", positive_label, "Label value mapped to 1")->required();
    dataset->add_option("--shuffle-seed", shuffle_seed, "Shuffle rows with this seed");
    dataset->add_option("--algo", algo, "bayes-exact|xi-plus|memorize|alg1|alg2|madnb")->required();
    dataset->add_option("--reduction", reduction, "none|conj|disj|kcnf");
    dataset->add_option("--k", k, "Clause width for kcnf");
    dataset->add_option("--feature-budget", budget, "Largest allowed expanded dimension");
    dataset->add_option("--format", format, "csv|json");
    dataset->add_option("--out", out_path, "Output file (default stdout)");

    // oracle-check
    std::size_t check_d = 12;
    std::size_t check_trials = 100;
    std::uint64_t check_seed = 1;
    auto* oracle = app.add_subcommand("oracle-check", "Run the counting-oracle identity suites");
    oracle->add_option("--d", check_d, "Largest dimension used by the randomized suites");
    oracle->add_option("--trials", check_trials, "Random instances per suite");
    oracle->add_option("--seed", check_seed, "Seed");

    // bounds-table
    std::string d_list = "2,4,8";
    std::uint64_t table_n = 8192;
    std::uint64_t table_repeats = 1000;
    std::uint64_t table_seed = 0;
    auto* table = app.add_subcommand("bounds-table", "Empirical worst loss against the bounds");
    table->add_option("--d-list", d_list, "Comma-separated dimensions");
    table->add_option("--n", table_n, "Steps per trial");
    table->add_option("--repeats", table_repeats, "Trials per dimension");
    table->add_option("--seed", table_seed, "Seed");

    CLI11_PARSE(app, argc, argv);

    try {
        if (synthetic->parsed()) {
            kcnf::SyntheticConfig c;
            c.d = d;
            c.n = n;
            c.repeats = repeats;
            c.seed = seed;
            c.algorithm = kcnf::parse_algorithm(algo);
            c.reduction = kcnf::parse_reduction(reduction);
            c.k = k;
            c.feature_budget = budget;
            const auto fmt = kcnf::parse_format(format);
            const kcnf::RunReport r = kcnf::run_synthetic(c);
            return write_output(kcnf::emit_report(r, fmt), out_path);
        }
        if (dataset->parsed()) {
            kcnf::DatasetConfig c{path, label_column, positive_label, shuffle_seed};
            const auto fmt = kcnf::parse_format(format);
            const kcnf::RunReport r = kcnf::run_dataset(c, kcnf::parse_algorithm(algo),
                                                        kcnf::parse_reduction(reduction), k, budget);
            return write_output(kcnf::emit_report(r, fmt), out_path);
        }
        if (oracle->parsed()) {
            bool ok = true;
            for (const auto& r : kcnf::run_oracle_checks({check_d, check_trials, check_seed})) {
                std::cout << (r.passed ? "PASS " : "FAIL ") << r.name << ": " << r.detail << '\n';
                ok = ok && r.passed;
            }
            return ok ? 0 : 1;
        }
        if (table->parsed()) {
            const auto rows = kcnf::bounds_table(parse_d_list(d_list), table_n, table_repeats, table_seed);
            std::cout << kcnf::emit_bounds_table(rows);
            for (const auto& row : rows) {
                if (row.violations != 0) {
                    std::cerr << "error: " << row.violations << " bound violations for " << row.algo
                              << " at d=" << row.d << '\n';
                    return 1;
                }
            }
            return 0;
        }
    } catch (const kcnf::InvariantViolation& e) {
        std::cerr << "invariant violated: " << e.what() << '\n';
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 0;
}
