#pragma once

#include "kcnf/core.hpp"

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

namespace kcnf {

/// Largest dimension accepted by the exhaustive 2^d routines by default.
inline constexpr std::size_t kBruteForceCap = 20;
/// Hard ceiling for any configured cap (hypotheses are indexed by 32-bit masks).
inline constexpr std::size_t kBruteForceHardCap = 30;

/// Throws std::length_error naming the cap when d > cap.
void require_brute_force(std::size_t d, std::size_t cap, const char* what);

/// Prior inclusion probability of each variable, w(S) = a^|S| (1-a)^(d-|S|).
///
/// Both log2(a) and log2(1-a) are stored so that callers never form 1-a in
/// the linear domain; for the hybrid choice a = 2^(-d/2^d) the complement
/// underflows long before d reaches the dimensions used in practice.
class Alpha {
public:
    static Alpha from_value(double alpha);
    static Alpha uniform() { return from_value(0.5); }
    /// a = 2^(-d / 2^d), the setting used by the hybrid predictor.
    static Alpha hybrid(std::size_t d);

    double log2_alpha() const { return m_log2_alpha; }
    double log2_complement() const { return m_log2_complement; }
    double value() const;
    /// log2 w(S) for a set of the given size in dimension d.
    double log2_weight(std::size_t set_size, std::size_t d) const;

private:
    Alpha(double log2_alpha, double log2_complement)
        : m_log2_alpha(log2_alpha), m_log2_complement(log2_complement) {}

    double m_log2_alpha;
    double m_log2_complement;
};

/// A subset S of {0, ..., d-1} naming the variables of a monotone conjunction.
/// Indices are zero-based throughout the library.
class HypothesisIndexSet {
public:
    HypothesisIndexSet() = default;
    HypothesisIndexSet(std::size_t d, std::vector<std::size_t> indices);
    static HypothesisIndexSet full(std::size_t d);
    static HypothesisIndexSet from_mask(std::uint64_t mask, std::size_t d);
    static HypothesisIndexSet from_bits(const BitVector& members);

    std::size_t dimension() const { return m_dimension; }
    const std::vector<std::size_t>& indices() const { return m_indices; }
    std::size_t size() const { return m_indices.size(); }
    bool empty() const { return m_indices.empty(); }
    bool contains(std::size_t i) const;

    /// h_S(a): the conjunction of a^i over i in S (true for S empty).
    bool evaluate(const SideInfo& side) const;
    BitVector members() const;

    friend bool operator==(const HypothesisIndexSet&, const HypothesisIndexSet&) = default;

private:
    std::size_t m_dimension = 0;
    std::vector<std::size_t> m_indices;
};

/// log2 of sum over S of w(S) [h_S(a_t) = x_t for all t], by enumerating
/// all 2^d hypotheses.
double log2_exact_mixture_joint(const Alpha& prior, std::size_t d,
                                std::span<const Example> trace,
                                std::size_t cap = kBruteForceCap);

/// Factored product over columns, prod_i ((1-a) + a [AND_t a_t^i]), for a
/// trace whose labels are all 1. O(nd).
double log2_xi_alpha_positive(const Alpha& alpha, std::size_t d,
                              std::span<const SideInfo> positives);

struct MapModel {
    HypothesisIndexSet set;
    /// False when alpha = 1/2: then any subset of `set` is also a MAP model.
    bool unique = true;
};

/// MAP hypothesis after the given positive examples.
MapModel map_model(const Alpha& alpha, std::size_t d, std::span<const SideInfo> positives);

/// Column conjunctions over positive side information.
BitVector column_conjunction(std::size_t d, std::span<const SideInfo> positives);

/// Exact Bayesian mixture over all 2^d monotone conjunctions.
///
/// Keeps the consistent hypotheses explicitly; after a label of probability
/// zero (non-realizable data) no hypothesis survives and the predictor
/// falls back to the uniform distribution.
class BayesMixturePredictor final : public Predictor {
public:
    explicit BayesMixturePredictor(std::size_t d, Alpha prior = Alpha::uniform(),
                                   std::size_t cap = kBruteForceCap);

    std::string name() const override { return "bayes-exact"; }

    std::size_t consistent_count() const { return m_consistent.size(); }
    /// log2 of the posterior mass still carried by consistent hypotheses.
    double log2_evidence() const;

protected:
    Prediction do_predict(const SideInfo& side) const override;
    void do_update(const SideInfo& side, bool label) override;

private:
    Alpha m_prior;
    std::vector<std::uint32_t> m_consistent;
    std::vector<double> m_log2_weight_by_size;
};

/// Bayesian predictor trained only on positive examples (negatives are
/// discarded). Predicts p(1) = (1-a)^m where m counts the surviving columns
/// that are 0 in the query.
class HeuristicPredictor final : public Predictor {
public:
    explicit HeuristicPredictor(std::size_t d, Alpha alpha = Alpha::uniform());

    std::string name() const override { return "xi-plus"; }
    const BitVector& columns() const { return m_columns; }

protected:
    Prediction do_predict(const SideInfo& side) const override;
    void do_update(const SideInfo& side, bool label) override;

private:
    Alpha m_alpha;
    BitVector m_columns;
};

/// Lookup table of previously seen inputs; uniform on unseen inputs.
/// A key keeps the first label stored for it.
class MemorizerPredictor final : public Predictor {
public:
    explicit MemorizerPredictor(std::size_t d) : Predictor(d) {}

    std::string name() const override { return "memorize"; }
    std::size_t table_size() const { return m_table.size(); }

protected:
    Prediction do_predict(const SideInfo& side) const override;
    void do_update(const SideInfo& side, bool label) override;
    Prediction do_predict_keyed(const SideInfo& features, const SideInfo& key) const override;
    void do_update_keyed(const SideInfo& features, const SideInfo& key, bool label) override;

private:
    std::unordered_map<BitVector, bool> m_table;
};

/// Hybrid Bayes + memorization predictor (Algorithm 1, the zeta_d predictor).
///
/// Inputs seen with label 0 are stored and predicted 0 deterministically.
/// Otherwise p(1) = prod_i ((1-a) + a w_i a^i) / ((1-a) + a w_i) with
/// a = 2^(-d/2^d); every factor is 1 except where w_i = 1 and a^i = 0, where
/// it is 1-a, so p(1) = (1-a)^m and only m log2(1-a) is ever evaluated.
class HybridPredictor final : public Predictor {
public:
    explicit HybridPredictor(std::size_t d);

    std::string name() const override { return "alg1"; }

    const BitVector& columns() const { return m_columns; }
    std::size_t negatives_size() const { return m_negatives.size(); }
    bool is_memorized_negative(const SideInfo& key) const;
    const Alpha& alpha() const { return m_alpha; }

protected:
    Prediction do_predict(const SideInfo& side) const override;
    void do_update(const SideInfo& side, bool label) override;
    Prediction do_predict_keyed(const SideInfo& features, const SideInfo& key) const override;
    void do_update_keyed(const SideInfo& features, const SideInfo& key, bool label) override;

private:
    Alpha m_alpha;
    BitVector m_columns;
    std::unordered_set<BitVector> m_negatives;
};

/// Smoothed elimination predictor (Algorithm 2, the pi_d predictor).
///
/// Tracks the variables not yet ruled out by positive examples and puts
/// t/(t+1) on the label their conjunction produces, 1/(t+1) on the other.
/// The step counter t starts at 1 and advances on every update.
class EliminationPredictor final : public Predictor {
public:
    explicit EliminationPredictor(std::size_t d);

    std::string name() const override { return "alg2"; }

    const BitVector& surviving() const { return m_surviving; }
    std::uint64_t step() const { return m_step; }

protected:
    Prediction do_predict(const SideInfo& side) const override;
    void do_update(const SideInfo& side, bool label) override;

private:
    BitVector m_surviving;
    std::uint64_t m_step = 1;
};

namespace bounds {

/// Worst-case loss of the uniform mixture on realizable data: d bits.
double bayes_mixture(std::size_t d);
/// Memorizer on realizable data: 2^d bits.
double memorizer(std::size_t d);
/// Hybrid predictor on realizable data: 2 d^2 bits.
double hybrid(std::size_t d);
/// Elimination predictor on realizable data: (d + 1) log2(n + 1) bits.
double elimination(std::size_t d, std::uint64_t n);

}  // namespace bounds

}  // namespace kcnf
