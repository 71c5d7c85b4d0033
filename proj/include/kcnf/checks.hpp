#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace kcnf {

// Randomized and exhaustive identity checks tying the predictors to the
// counting oracles. Each returns one result; `detail` says what was checked
// or where the first mismatch occurred.

struct CheckResult {
    std::string name;
    bool passed = false;
    std::string detail;
};

/// Consistent-hypothesis count on the all-negative characteristic trace
/// equals 2^d minus the union-of-power-sets count. Universe size 1..max_d.
CheckResult check_negative_trace_identity(std::uint64_t seed, std::size_t trials, std::size_t max_d);

/// Independent sets plus the union of power sets of the edge complements
/// equals 2^|V|.
CheckResult check_independent_set_identity(std::uint64_t seed, std::size_t trials,
                                           std::size_t max_vertices);

/// On the binary-counting side information every hypothesis yields a
/// distinct label string and the uniform mixture loses exactly d bits.
CheckResult check_counting_construction(std::size_t max_d);

/// d - log2(d) - 1 <= -log2(1 - 2^(-d/2^d)) <= d over the whole range.
CheckResult check_alpha_margin(std::size_t min_d, std::size_t max_d);

/// Factored positive-data mixture equals the enumerated uniform mixture.
CheckResult check_positive_factorization(std::uint64_t seed, std::size_t trials, std::size_t max_d,
                                         std::size_t max_n);

/// The hybrid predictor equals the ratio of enumerated alpha-prior mixtures
/// over positive examples, on every input it has not memorized.
CheckResult check_hybrid_equivalence(std::uint64_t seed, std::size_t trials, std::size_t min_d,
                                     std::size_t max_d, std::size_t max_n);

/// Factored averaged naive Bayes joint equals the 2^d-term sum, and the
/// MADNB predictive equals the normalized brute-force joint.
CheckResult check_madnb_identity(std::uint64_t seed, std::size_t trials, std::size_t max_d,
                                 std::size_t max_n);

/// Every k-CNF truth table over d variables is a monotone conjunction over
/// the clause basis, and alg2 on the expanded features stays within its
/// bound when fed each such target on all 2^d inputs.
CheckResult check_kcnf_completeness(std::size_t max_d, std::size_t max_k);

struct CheckSuiteConfig {
    std::size_t max_d = 12;
    std::size_t trials = 100;
    std::uint64_t seed = 1;
};

std::vector<CheckResult> run_oracle_checks(const CheckSuiteConfig& config);

}  // namespace kcnf
