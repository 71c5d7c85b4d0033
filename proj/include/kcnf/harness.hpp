#pragma once

#include "kcnf/core.hpp"
#include "kcnf/predictors.hpp"
#include "kcnf/reductions.hpp"

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace kcnf {

enum class Algorithm { bayes_exact, xi_plus, memorize, alg1, alg2, madnb };

std::string to_string(Algorithm algo);
Algorithm parse_algorithm(const std::string& text);

std::unique_ptr<Predictor> make_predictor(Algorithm algo, std::size_t d);

/// True for the predictors whose realizable-data bound is enforced.
bool has_enforced_bound(Algorithm algo);

/// Realizable-data loss bound at feature dimension d; +inf when the
/// predictor has none.
double realizable_bound(Algorithm algo, std::size_t d, std::uint64_t n);

// ---------------------------------------------------------------------------
// Random numbers

using Rng = std::mt19937_64;

std::uint64_t splitmix64(std::uint64_t x);
/// Seed of the generator for one trial; trials are independent streams.
std::uint64_t trial_seed(std::uint64_t seed, std::uint64_t trial);
/// Uniform in [0, 1) with 53 random bits.
double uniform01(Rng& rng);
SideInfo random_side(Rng& rng, std::size_t d);

/// Draws theta uniformly, then includes each index with probability theta.
HypothesisIndexSet sample_hypothesis(Rng& rng, std::size_t d);
HypothesisIndexSet sample_hypothesis_with_theta(Rng& rng, std::size_t d, double theta);

// ---------------------------------------------------------------------------
// Reports

enum class RunKind { synthetic, dataset };

struct RunReport {
    RunKind kind = RunKind::synthetic;
    std::string algo;
    std::string reduction = "none";
    std::size_t d = 0;
    std::size_t d_prime = 0;
    std::size_t k = 1;
    std::uint64_t n = 0;
    std::uint64_t repeats = 1;
    std::uint64_t seed = 0;
    std::string source;  // dataset path, empty for synthetic runs

    std::vector<double> trial_bits;
    double max_bits = 0.0;
    double mean_bits = 0.0;
    double bound_bits = kPosInf;
    std::uint64_t infinite_losses = 0;
    std::uint64_t violations = 0;

    // Summed over all trials.
    std::uint64_t correct = 0;
    std::uint64_t mistakes = 0;
    double accuracy = 0.0;

    double wall_time_s = 0.0;
};

enum class ReportFormat { csv, json };

ReportFormat parse_format(const std::string& text);

/// Column list of the CSV form of synthetic reports.
inline constexpr const char* kSyntheticCsvHeader =
    "algo,d,d_prime,k,n,repeats,seed,max_bits,mean_bits,bound_bits,infinite_losses";
inline constexpr const char* kDatasetCsvHeader =
    "algo,d,d_prime,k,n,accuracy,correct,mistakes,total_bits,bound_bits,infinite_losses";

/// Header line plus one data line (CSV) or one object (JSON). Floating
/// fields carry 6 significant digits; wall time is omitted so that equal
/// runs serialize identically.
std::string emit_report(const RunReport& report, ReportFormat format);
RunReport report_from_json(const std::string& text);

/// Rounds to 6 significant digits, the precision used in reports.
double round_report_value(double x);

// ---------------------------------------------------------------------------
// Synthetic runs

/// A realizable run had a loss above its bound or an infinite loss.
class InvariantViolation : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct SyntheticConfig {
    std::size_t d = 8;
    std::uint64_t n = 8192;
    std::uint64_t repeats = 1;
    std::uint64_t seed = 0;
    Algorithm algorithm = Algorithm::alg2;
    ReductionKind reduction = ReductionKind::none;
    std::size_t k = 1;
    std::size_t feature_budget = kDefaultFeatureBudget;
    /// Throw InvariantViolation on the first violated bound.
    bool strict = true;
};

void validate(const SyntheticConfig& config);

/// Random hypothesis over the reduced features, n uniform inputs per trial,
/// labels from the hypothesis (through the reduction).
RunReport run_synthetic(const SyntheticConfig& config);

// ---------------------------------------------------------------------------
// Datasets

struct DatasetConfig {
    std::string path;
    std::string label_column = "class";
    std::string positive_label;
    std::optional<std::uint64_t> shuffle_seed;
};

struct Feature {
    std::string attribute;
    std::string value;
};

struct Dataset {
    std::vector<Example> examples;
    std::vector<Feature> features;
    std::size_t dimension() const { return features.size(); }
};

/// Reads a comma-separated file with a header row. Every (attribute, value)
/// pair seen anywhere in the file becomes one indicator feature; attributes
/// keep header order and values within an attribute are sorted.
Dataset ingest_dataset(const DatasetConfig& config);

RunReport run_dataset(const DatasetConfig& config, Algorithm algo, ReductionKind reduction,
                      std::size_t k, std::size_t feature_budget = kDefaultFeatureBudget);
RunReport run_dataset(const Dataset& data, Algorithm algo, ReductionKind reduction,
                      std::size_t k, std::size_t feature_budget = kDefaultFeatureBudget);

// ---------------------------------------------------------------------------
// Bound table

struct BoundsRow {
    std::string algo;
    std::size_t d = 0;
    std::uint64_t n = 0;
    std::uint64_t repeats = 0;
    double max_bits = 0.0;
    double mean_bits = 0.0;
    double bound_bits = 0.0;
    std::uint64_t violations = 0;
};

/// alg1 and alg2 on synthetic data for every d in the list.
std::vector<BoundsRow> bounds_table(const std::vector<std::size_t>& d_list, std::uint64_t n,
                                    std::uint64_t repeats, std::uint64_t seed);

/// The bound column is rounded to the nearest integer; bound_exact keeps
/// the unrounded value.
std::string emit_bounds_table(const std::vector<BoundsRow>& rows);

}  // namespace kcnf
