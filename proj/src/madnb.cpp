#include "kcnf/madnb.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace kcnf {

namespace {

const double kLog2Pi = std::log2(std::numbers::pi);

double log2_half_sum(double a, double b) { return log2_add_exp2(a, b) - 1.0; }

struct FeatureCounts {
    KtCounter marginal;
    KtCounter given0;
    KtCounter given1;
};

KtCounter class_counts(std::span<const Example> trace) {
    KtCounter c;
    for (const Example& ex : trace) c.add(ex.label);
    return c;
}

std::vector<FeatureCounts> feature_counts(std::size_t d, std::span<const Example> trace) {
    std::vector<FeatureCounts> counts(d);
    for (const Example& ex : trace) {
        if (ex.side.size() != d) {
            throw std::invalid_argument("naive Bayes: example dimension " +
                                        std::to_string(ex.side.size()) + ", expected " +
                                        std::to_string(d));
        }
        for (std::size_t i = 0; i < d; ++i) {
            const bool bit = ex.side.test(i);
            counts[i].marginal.add(bit);
            (ex.label ? counts[i].given1 : counts[i].given0).add(bit);
        }
    }
    return counts;
}

}  // namespace

double KtCounter::log2_predict(bool bit) const {
    const double b = static_cast<double>(bit ? ones : zeros);
    return std::log2((b + 0.5) / (static_cast<double>(n()) + 1.0));
}

double KtCounter::log2_sequence_probability() const {
    const double a = static_cast<double>(zeros);
    const double b = static_cast<double>(ones);
    const double nats = std::lgamma(a + 0.5) + std::lgamma(b + 0.5) - std::lgamma(a + b + 1.0);
    return nats / std::numbers::ln2 - kLog2Pi;
}

double kt_predict(const KtCounter& counter) {
    return (static_cast<double>(counter.ones) + 0.5) / (static_cast<double>(counter.n()) + 1.0);
}

double log2_nb_joint(std::uint64_t mask, std::size_t d, std::span<const Example> trace,
                     std::size_t cap) {
    require_brute_force(d, cap, "naive Bayes subset joint");
    if (d < 64 && (mask >> d) != 0) {
        throw std::invalid_argument("naive Bayes subset joint: mask has bits beyond d");
    }
    const auto counts = feature_counts(d, trace);
    double total = class_counts(trace).log2_sequence_probability();
    for (std::size_t i = 0; i < d; ++i) {
        if ((mask >> i) & 1u) {
            total += counts[i].given0.log2_sequence_probability() +
                     counts[i].given1.log2_sequence_probability();
        } else {
            total += counts[i].marginal.log2_sequence_probability();
        }
    }
    return total;
}

double log2_nb_star_joint(std::size_t d, std::span<const Example> trace) {
    const auto counts = feature_counts(d, trace);
    double total = class_counts(trace).log2_sequence_probability();
    for (const FeatureCounts& c : counts) {
        total += log2_half_sum(c.marginal.log2_sequence_probability(),
                               c.given0.log2_sequence_probability() +
                                   c.given1.log2_sequence_probability());
    }
    return total;
}

double log2_nb_star_joint_brute(std::size_t d, std::span<const Example> trace, std::size_t cap) {
    require_brute_force(d, cap, "naive Bayes subset average");
    std::vector<double> terms(std::size_t{1} << d);
    for (std::uint64_t mask = 0; mask < terms.size(); ++mask) {
        terms[mask] = log2_nb_joint(mask, d, trace, cap);
    }
    return log2_sum_exp2(terms) - static_cast<double>(d);
}

MadnbPredictor::MadnbPredictor(std::size_t d)
    : Predictor(d), m_marginal(d), m_conditional(2 * d) {}

double MadnbPredictor::log2_score(const SideInfo& side, bool label) const {
    double score = m_class.with(label).log2_sequence_probability();
    const std::size_t d = dimension();
    for (std::size_t i = 0; i < d; ++i) {
        const bool bit = side.test(i);
        const KtCounter& c0 = m_conditional[2 * i];
        const KtCounter& c1 = m_conditional[2 * i + 1];
        const double conditional = (label ? c0 : c0.with(bit)).log2_sequence_probability() +
                                   (label ? c1.with(bit) : c1).log2_sequence_probability();
        score += log2_half_sum(m_marginal[i].with(bit).log2_sequence_probability(), conditional);
    }
    return score;
}

Prediction MadnbPredictor::do_predict(const SideInfo& side) const {
    const double s0 = log2_score(side, false);
    const double s1 = log2_score(side, true);
    const double norm = log2_add_exp2(s0, s1);
    return Prediction{s0 - norm, s1 - norm, s1 >= s0};
}

void MadnbPredictor::do_update(const SideInfo& side, bool label) {
    m_class.add(label);
    for (std::size_t i = 0; i < dimension(); ++i) {
        const bool bit = side.test(i);
        m_marginal[i].add(bit);
        m_conditional[2 * i + (label ? 1 : 0)].add(bit);
    }
}

}  // namespace kcnf
