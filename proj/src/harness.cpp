#include "kcnf/harness.hpp"

#include "kcnf/madnb.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace kcnf {

std::string to_string(Algorithm algo) {
    switch (algo) {
        case Algorithm::bayes_exact: return "bayes-exact";
        case Algorithm::xi_plus: return "xi-plus";
        case Algorithm::memorize: return "memorize";
        case Algorithm::alg1: return "alg1";
        case Algorithm::alg2: return "alg2";
        case Algorithm::madnb: return "madnb";
    }
    return "alg2";
}

Algorithm parse_algorithm(const std::string& text) {
    for (Algorithm a : {Algorithm::bayes_exact, Algorithm::xi_plus, Algorithm::memorize,
                        Algorithm::alg1, Algorithm::alg2, Algorithm::madnb}) {
        if (to_string(a) == text) return a;
    }
    throw std::invalid_argument("unknown algorithm '" + text +
                                "' (expected bayes-exact|xi-plus|memorize|alg1|alg2|madnb)");
}

std::unique_ptr<Predictor> make_predictor(Algorithm algo, std::size_t d) {
    switch (algo) {
        case Algorithm::bayes_exact: return std::make_unique<BayesMixturePredictor>(d);
        case Algorithm::xi_plus: return std::make_unique<HeuristicPredictor>(d);
        case Algorithm::memorize: return std::make_unique<MemorizerPredictor>(d);
        case Algorithm::alg1: return std::make_unique<HybridPredictor>(d);
        case Algorithm::alg2: return std::make_unique<EliminationPredictor>(d);
        case Algorithm::madnb: return std::make_unique<MadnbPredictor>(d);
    }
    throw std::invalid_argument("make_predictor: bad algorithm");
}

bool has_enforced_bound(Algorithm algo) {
    return algo == Algorithm::bayes_exact || algo == Algorithm::alg1 || algo == Algorithm::alg2;
}

double realizable_bound(Algorithm algo, std::size_t d, std::uint64_t n) {
    switch (algo) {
        case Algorithm::bayes_exact: return bounds::bayes_mixture(d);
        case Algorithm::memorize: return bounds::memorizer(d);
        case Algorithm::alg1: return bounds::hybrid(d);
        case Algorithm::alg2: return bounds::elimination(d, n);
        case Algorithm::xi_plus:
        case Algorithm::madnb: return kPosInf;
    }
    return kPosInf;
}

// ---------------------------------------------------------------------------

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

std::uint64_t trial_seed(std::uint64_t seed, std::uint64_t trial) {
    return splitmix64(splitmix64(seed) ^ trial);
}

double uniform01(Rng& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

SideInfo random_side(Rng& rng, std::size_t d) {
    SideInfo side(d);
    for (auto& w : side.words()) w = rng();
    side.trim();
    return side;
}

HypothesisIndexSet sample_hypothesis_with_theta(Rng& rng, std::size_t d, double theta) {
    if (!(theta >= 0.0 && theta <= 1.0)) {
        throw std::invalid_argument("sample_hypothesis: theta must lie in [0, 1]");
    }
    std::vector<std::size_t> indices;
    for (std::size_t i = 0; i < d; ++i) {
        if (uniform01(rng) < theta) indices.push_back(i);
    }
    return HypothesisIndexSet(d, std::move(indices));
}

HypothesisIndexSet sample_hypothesis(Rng& rng, std::size_t d) {
    const double theta = uniform01(rng);
    return sample_hypothesis_with_theta(rng, d, theta);
}

// ---------------------------------------------------------------------------

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

std::unique_ptr<Predictor> make_reduced(Algorithm algo, const std::shared_ptr<const Reducer>& reducer) {
    auto inner = make_predictor(algo, reducer->output_dimension());
    if (reducer->kind() == ReductionKind::none) return inner;
    return std::make_unique<ReducedPredictor>(reducer, std::move(inner));
}

void summarize(RunReport& r) {
    r.max_bits = 0.0;
    double sum = 0.0;
    r.infinite_losses = 0;
    for (double b : r.trial_bits) {
        r.max_bits = std::max(r.max_bits, b);
        sum += b;
        if (std::isinf(b)) ++r.infinite_losses;
    }
    r.mean_bits = r.trial_bits.empty() ? 0.0 : sum / static_cast<double>(r.trial_bits.size());
    const std::uint64_t steps = r.correct + r.mistakes;
    r.accuracy = steps == 0 ? 0.0 : static_cast<double>(r.correct) / static_cast<double>(steps);
}

}  // namespace

void validate(const SyntheticConfig& c) {
    if (c.d == 0) throw std::invalid_argument("synthetic: d must be at least 1");
    if (c.repeats == 0) throw std::invalid_argument("synthetic: repeats must be at least 1");
    if (c.reduction == ReductionKind::kcnf && c.k == 0) {
        throw std::invalid_argument("synthetic: k must be at least 1");
    }
}

RunReport run_synthetic(const SyntheticConfig& config) {
    validate(config);
    const auto start = Clock::now();
    auto reducer = std::make_shared<const Reducer>(config.reduction, config.d, config.k,
                                                   config.feature_budget);
    const std::size_t d_out = reducer->output_dimension();

    RunReport report;
    report.kind = RunKind::synthetic;
    report.algo = to_string(config.algorithm);
    report.reduction = to_string(config.reduction);
    report.d = config.d;
    report.d_prime = d_out;
    report.k = reducer->k();
    report.n = config.n;
    report.repeats = config.repeats;
    report.seed = config.seed;
    report.bound_bits = realizable_bound(config.algorithm, d_out, config.n);
    report.trial_bits.reserve(config.repeats);

    const bool enforce = has_enforced_bound(config.algorithm);
    for (std::uint64_t trial = 0; trial < config.repeats; ++trial) {
        Rng rng(trial_seed(config.seed, trial));
        const HypothesisIndexSet target = sample_hypothesis(rng, d_out);
        auto predictor = make_reduced(config.algorithm, reducer);
        LossLedger ledger;
        for (std::uint64_t t = 0; t < config.n; ++t) {
            const SideInfo side = random_side(rng, config.d);
            const bool label = target.evaluate(reducer->features(side)) != reducer->flips_label();
            const Prediction p = predictor->predict(side);
            ledger.record(p, label);
            ++(p.predicted_label() == label ? report.correct : report.mistakes);
            predictor->update(side, label);
        }
        const double bits = ledger.total_bits();
        report.trial_bits.push_back(bits);
        if (enforce && (std::isinf(bits) || bits > report.bound_bits + 1e-9)) {
            ++report.violations;
            if (config.strict) {
                std::ostringstream msg;
                msg << report.algo << " lost " << bits << " bits on realizable trial " << trial
                    << " (d'=" << d_out << ", n=" << config.n << "), bound " << report.bound_bits;
                throw InvariantViolation(msg.str());
            }
        }
    }
    summarize(report);
    report.wall_time_s = seconds_since(start);
    return report;
}

// ---------------------------------------------------------------------------

namespace {

std::string trim_cell(std::string s) {
    const auto not_space = [](unsigned char c) { return !std::isspace(c); };
    s.erase(s.begin(), std::find_if(s.begin(), s.end(), not_space));
    s.erase(std::find_if(s.rbegin(), s.rend(), not_space).base(), s.end());
    if (s.size() >= 2 && s.front() == '"' && s.back() == '"') s = s.substr(1, s.size() - 2);
    return s;
}

std::vector<std::string> split_row(const std::string& line) {
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream in(line);
    while (std::getline(in, cell, ',')) cells.push_back(trim_cell(cell));
    if (!line.empty() && line.back() == ',') cells.emplace_back();
    return cells;
}

}  // namespace

Dataset ingest_dataset(const DatasetConfig& config) {
    std::ifstream in(config.path);
    if (!in) throw std::runtime_error("dataset: cannot read '" + config.path + "'");
    if (config.positive_label.empty()) throw std::invalid_argument("dataset: positive label is required");

    std::string line;
    std::vector<std::string> header;
    while (header.empty() && std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (!trim_cell(line).empty()) header = split_row(line);
    }
    if (header.empty()) throw std::runtime_error("dataset: '" + config.path + "' has no header row");
    const auto label_it = std::find(header.begin(), header.end(), config.label_column);
    if (label_it == header.end()) {
        throw std::runtime_error("dataset: no column named '" + config.label_column + "'");
    }
    const auto label_col = static_cast<std::size_t>(label_it - header.begin());

    std::vector<std::vector<std::string>> rows;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (trim_cell(line).empty()) continue;
        auto cells = split_row(line);
        if (cells.size() != header.size()) {
            throw std::runtime_error("dataset: line " + std::to_string(line_no) + " has " +
                                     std::to_string(cells.size()) + " fields, header has " +
                                     std::to_string(header.size()));
        }
        rows.push_back(std::move(cells));
    }

    std::set<std::string> labels;
    for (const auto& row : rows) labels.insert(row[label_col]);
    if (labels.size() > 2) {
        throw std::runtime_error("dataset: label column '" + config.label_column + "' has " +
                                 std::to_string(labels.size()) + " distinct values, expected 2");
    }
    if (!rows.empty() && !labels.contains(config.positive_label)) {
        throw std::runtime_error("dataset: positive label '" + config.positive_label +
                                 "' does not occur in column '" + config.label_column + "'");
    }

    Dataset data;
    std::vector<std::map<std::string, std::size_t>> index(header.size());
    for (std::size_t col = 0; col < header.size(); ++col) {
        if (col == label_col) continue;
        std::set<std::string> values;
        for (const auto& row : rows) values.insert(row[col]);
        for (const std::string& v : values) {
            index[col][v] = data.features.size();
            data.features.push_back({header[col], v});
        }
    }

    data.examples.reserve(rows.size());
    for (const auto& row : rows) {
        SideInfo side(data.features.size());
        for (std::size_t col = 0; col < header.size(); ++col) {
            if (col != label_col) side.set(index[col].at(row[col]));
        }
        data.examples.push_back({std::move(side), row[label_col] == config.positive_label});
    }

    if (config.shuffle_seed) {
        Rng rng(*config.shuffle_seed);
        for (std::size_t i = data.examples.size(); i > 1; --i) {
            std::swap(data.examples[i - 1], data.examples[rng() % i]);
        }
    }
    return data;
}

RunReport run_dataset(const Dataset& data, Algorithm algo, ReductionKind reduction, std::size_t k,
                      std::size_t feature_budget) {
    const auto start = Clock::now();
    auto reducer = std::make_shared<const Reducer>(reduction, data.dimension(), k, feature_budget);
    auto predictor = make_reduced(algo, reducer);

    RunReport report;
    report.kind = RunKind::dataset;
    report.algo = to_string(algo);
    report.reduction = to_string(reduction);
    report.d = data.dimension();
    report.d_prime = reducer->output_dimension();
    report.k = reducer->k();
    report.n = data.examples.size();
    report.repeats = 1;
    report.bound_bits = realizable_bound(algo, report.d_prime, report.n);

    LossLedger ledger;
    for (const Example& ex : data.examples) {
        const Prediction p = predictor->predict(ex.side);
        ledger.record(p, ex.label);
        ++(p.predicted_label() == ex.label ? report.correct : report.mistakes);
        predictor->update(ex.side, ex.label);
    }
    report.trial_bits = {ledger.total_bits()};
    summarize(report);
    report.wall_time_s = seconds_since(start);
    return report;
}

RunReport run_dataset(const DatasetConfig& config, Algorithm algo, ReductionKind reduction,
                      std::size_t k, std::size_t feature_budget) {
    RunReport report = run_dataset(ingest_dataset(config), algo, reduction, k, feature_budget);
    report.source = config.path;
    report.seed = config.shuffle_seed.value_or(0);
    return report;
}

// ---------------------------------------------------------------------------

std::vector<BoundsRow> bounds_table(const std::vector<std::size_t>& d_list, std::uint64_t n,
                                    std::uint64_t repeats, std::uint64_t seed) {
    std::vector<BoundsRow> rows;
    for (Algorithm algo : {Algorithm::alg1, Algorithm::alg2}) {
        for (std::size_t d : d_list) {
            SyntheticConfig c;
            c.d = d;
            c.n = n;
            c.repeats = repeats;
            c.seed = seed;
            c.algorithm = algo;
            c.strict = false;
            const RunReport r = run_synthetic(c);
            rows.push_back({r.algo, d, n, repeats, r.max_bits, r.mean_bits, r.bound_bits, r.violations});
        }
    }
    return rows;
}

}  // namespace kcnf
