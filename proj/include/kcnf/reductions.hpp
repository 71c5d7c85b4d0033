#pragma once

#include "kcnf/core.hpp"

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace kcnf {

/// Default ceiling on the number of expanded features a reduction may produce.
inline constexpr std::size_t kDefaultFeatureBudget = 2'000'000;

/// Literal index convention: x_i -> i, not x_i -> d + i (zero-based i).
struct Literal {
    std::uint32_t variable = 0;
    bool negated = false;

    std::uint32_t index(std::size_t d) const {
        return negated ? static_cast<std::uint32_t>(d) + variable : variable;
    }
    bool evaluate(const SideInfo& side) const { return side.test(variable) != negated; }
    friend bool operator==(const Literal&, const Literal&) = default;
};

class FeatureBudgetExceeded : public std::length_error {
public:
    FeatureBudgetExceeded(std::size_t required, std::size_t budget);
    std::size_t required() const { return m_required; }

private:
    std::size_t m_required;
};

/// Canonical set of clauses of width 1..k over d variables.
///
/// Each clause is a set of distinct literals with no complementary pair.
/// Literals are ordered x1 < ... < xd < -x1 < ... < -xd and clauses are listed
/// lexicographically by their sorted literal indices, a clause preceding its
/// own extensions. The number of clauses is sum_{j=1..k} C(d,j) 2^j.
class ClauseBasis {
public:
    /// Throws FeatureBudgetExceeded (carrying the size) when the basis would
    /// have more than `budget` clauses.
    static ClauseBasis build(std::size_t d, std::size_t k,
                             std::size_t budget = kDefaultFeatureBudget);

    /// Basis size without building it.
    static std::size_t count(std::size_t d, std::size_t k);

    std::size_t d() const { return m_d; }
    std::size_t k() const { return m_k; }
    std::size_t d_prime() const { return m_width.size(); }
    /// (2d)^k, the ordered-tuple clause count, saturating at SIZE_MAX.
    std::size_t ordered_tuple_count() const;

    /// Literal indices of clause j (sorted ascending).
    std::span<const std::uint32_t> clause_indices(std::size_t j) const;
    std::vector<Literal> clause(std::size_t j) const;
    std::string clause_to_string(std::size_t j) const;

    /// Clause-by-clause truth values of `side`.
    SideInfo expand(const SideInfo& side) const;

private:
    ClauseBasis(std::size_t d, std::size_t k) : m_d(d), m_k(k) {}

    std::size_t m_d;
    std::size_t m_k;
    std::vector<std::uint32_t> m_literals;  // stride m_k, padded past width
    std::vector<std::uint8_t> m_width;
    std::vector<std::uint32_t> m_parent;  // clause minus its last literal
    std::vector<std::uint32_t> m_last;
};

/// (a, not a): the input followed by its componentwise negation.
SideInfo conjunction_transform(const SideInfo& side);

/// De Morgan flip: (not a, 1 - label).
std::pair<SideInfo, bool> disjunction_transform(const SideInfo& side, bool label);

enum class ReductionKind { none, conj, disj, kcnf };

std::string to_string(ReductionKind kind);
ReductionKind parse_reduction(const std::string& text);

/// Maps original side information to the features a monotone-conjunction
/// learner sees, and says whether labels are flipped on the way.
class Reducer {
public:
    Reducer(ReductionKind kind, std::size_t d, std::size_t k = 1,
            std::size_t budget = kDefaultFeatureBudget);

    ReductionKind kind() const { return m_kind; }
    std::size_t input_dimension() const { return m_d; }
    std::size_t output_dimension() const { return m_output_dimension; }
    std::size_t k() const { return m_k; }
    bool flips_label() const { return m_kind == ReductionKind::disj; }
    const ClauseBasis* basis() const { return m_basis ? &*m_basis : nullptr; }

    SideInfo features(const SideInfo& side) const;

private:
    ReductionKind m_kind;
    std::size_t m_d;
    std::size_t m_k;
    std::size_t m_output_dimension;
    std::optional<ClauseBasis> m_basis;
};

/// Runs an inner predictor on reduced features. Memorizing inner predictors
/// are keyed on the original input, which the reductions map injectively.
class ReducedPredictor final : public Predictor {
public:
    ReducedPredictor(std::shared_ptr<const Reducer> reducer, std::unique_ptr<Predictor> inner);

    std::string name() const override;
    const Predictor& inner() const { return *m_inner; }
    const Reducer& reducer() const { return *m_reducer; }

protected:
    Prediction do_predict(const SideInfo& side) const override;
    void do_update(const SideInfo& side, bool label) override;

private:
    const SideInfo& cached_features(const SideInfo& side) const;

    std::shared_ptr<const Reducer> m_reducer;
    std::unique_ptr<Predictor> m_inner;
    // predict and update on the same input share one expansion
    mutable std::optional<std::pair<SideInfo, SideInfo>> m_cache;
};

namespace bounds {

/// 2^(2k+1) d^(2k): the hybrid bound over (2d)^k ordered-tuple features.
double hybrid_kcnf_cap(std::size_t d, std::size_t k);
/// (2^k d^k + 1) log2(n + 1): the elimination bound over (2d)^k features.
double elimination_kcnf_cap(std::size_t d, std::size_t k, std::uint64_t n);

}  // namespace bounds

}  // namespace kcnf
