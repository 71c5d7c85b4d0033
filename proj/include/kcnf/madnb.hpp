#pragma once

#include "kcnf/core.hpp"
#include "kcnf/predictors.hpp"

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace kcnf {

/// Zero/one counts for a Krichevsky-Trofimov estimator.
struct KtCounter {
    std::uint64_t zeros = 0;
    std::uint64_t ones = 0;

    std::uint64_t n() const { return zeros + ones; }
    void add(bool bit) { ++(bit ? ones : zeros); }
    KtCounter with(bool bit) const {
        KtCounter c = *this;
        c.add(bit);
        return c;
    }

    /// log2 of the KT probability that the next symbol is `bit`.
    double log2_predict(bool bit) const;
    /// log2 of the KT probability of any sequence with these counts,
    /// Gamma(a+1/2) Gamma(b+1/2) / (pi Gamma(n+1)).
    double log2_sequence_probability() const;
};

/// (ones + 1/2) / (n + 1).
double kt_predict(const KtCounter& counter);

/// Naive Bayes joint for the feature subset `mask`: the class sequence under
/// KT, features in the subset under class-conditional KT, the rest under a
/// single class-independent KT.
double log2_nb_joint(std::uint64_t mask, std::size_t d, std::span<const Example> trace,
                     std::size_t cap = kBruteForceCap);

/// Uniform average of the subset joints over all 2^d subsets, via the
/// per-feature product KT(x) prod_i (KT(a^i)/2 + KT_0(a^i) KT_1(a^i)/2).
double log2_nb_star_joint(std::size_t d, std::span<const Example> trace);

/// Same average by summing all 2^d subset joints.
double log2_nb_star_joint_brute(std::size_t d, std::span<const Example> trace,
                                std::size_t cap = kBruteForceCap);

/// Model-averaged discriminative naive Bayes: p(y) is proportional to the
/// averaged joint with y appended. O(d) per step.
class MadnbPredictor final : public Predictor {
public:
    explicit MadnbPredictor(std::size_t d);

    std::string name() const override { return "madnb"; }

    const KtCounter& class_counter() const { return m_class; }
    const KtCounter& marginal(std::size_t i) const { return m_marginal.at(i); }
    const KtCounter& conditional(std::size_t i, bool label) const {
        return m_conditional.at(2 * i + (label ? 1 : 0));
    }

protected:
    Prediction do_predict(const SideInfo& side) const override;
    void do_update(const SideInfo& side, bool label) override;

private:
    double log2_score(const SideInfo& side, bool label) const;

    KtCounter m_class;
    std::vector<KtCounter> m_marginal;
    std::vector<KtCounter> m_conditional;  // [2i] given label 0, [2i+1] given label 1
};

}  // namespace kcnf
