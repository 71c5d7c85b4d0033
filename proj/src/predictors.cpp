#include "kcnf/predictors.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace kcnf {

void require_brute_force(std::size_t d, std::size_t cap, const char* what) {
    if (cap > kBruteForceHardCap) {
        throw std::invalid_argument(std::string(what) + ": brute-force cap " + std::to_string(cap) +
                                    " exceeds the hard limit of " +
                                    std::to_string(kBruteForceHardCap));
    }
    if (d > cap) {
        throw std::length_error(std::string(what) + ": dimension " + std::to_string(d) +
                                " exceeds the brute-force cap of " + std::to_string(cap));
    }
}

// ---------------------------------------------------------------------------
// Alpha

Alpha Alpha::from_value(double alpha) {
    if (!(alpha > 0.0 && alpha < 1.0)) {
        throw std::invalid_argument("alpha must lie in (0,1), got " + std::to_string(alpha));
    }
    // 1 - alpha is exact for alpha >= 1/2.
    const double complement =
        alpha >= 0.5 ? std::log2(1.0 - alpha) : std::log1p(-alpha) / std::numbers::ln2;
    return Alpha(std::log2(alpha), complement);
}

Alpha Alpha::hybrid(std::size_t d) {
    if (d == 0) throw std::invalid_argument("Alpha::hybrid: dimension must be positive");
    const double dd = static_cast<double>(d);
    // log2(alpha) = -d / 2^d exactly (a power-of-two scaling of an integer).
    const double log2_alpha = -std::ldexp(dd, -static_cast<int>(std::min<std::size_t>(d, 4096)));
    double log2_complement;
    if (d <= 64) {
        log2_complement = log2_one_minus_exp2(log2_alpha);
    } else {
        // 1 - 2^(-x) = x ln2 (1 - x ln2 / 2 + ...) with x = d / 2^d < 2^-57:
        // the correction is below double precision, and d / 2^d itself would
        // underflow for d beyond ~1070.
        log2_complement = std::log2(dd) - dd + std::log2(std::numbers::ln2);
    }
    return Alpha(log2_alpha, log2_complement);
}

double Alpha::value() const { return std::exp2(m_log2_alpha); }

double Alpha::log2_weight(std::size_t set_size, std::size_t d) const {
    const double in = static_cast<double>(set_size);
    const double out = static_cast<double>(d - set_size);
    double w = 0.0;
    if (set_size > 0) w += in * m_log2_alpha;
    if (d > set_size) w += out * m_log2_complement;
    return w;
}

// ---------------------------------------------------------------------------
// HypothesisIndexSet

HypothesisIndexSet::HypothesisIndexSet(std::size_t d, std::vector<std::size_t> indices)
    : m_dimension(d), m_indices(std::move(indices)) {
    std::sort(m_indices.begin(), m_indices.end());
    for (std::size_t k = 0; k < m_indices.size(); ++k) {
        if (m_indices[k] >= d) {
            throw std::invalid_argument("HypothesisIndexSet: index " + std::to_string(m_indices[k]) +
                                        " out of range for dimension " + std::to_string(d));
        }
        if (k > 0 && m_indices[k] == m_indices[k - 1]) {
            throw std::invalid_argument("HypothesisIndexSet: duplicate index " +
                                        std::to_string(m_indices[k]));
        }
    }
}

HypothesisIndexSet HypothesisIndexSet::full(std::size_t d) {
    std::vector<std::size_t> all(d);
    for (std::size_t i = 0; i < d; ++i) all[i] = i;
    return HypothesisIndexSet(d, std::move(all));
}

HypothesisIndexSet HypothesisIndexSet::from_mask(std::uint64_t mask, std::size_t d) {
    return from_bits(BitVector::from_mask(mask, d));
}

HypothesisIndexSet HypothesisIndexSet::from_bits(const BitVector& members) {
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < members.size(); ++i) {
        if (members.test(i)) idx.push_back(i);
    }
    return HypothesisIndexSet(members.size(), std::move(idx));
}

bool HypothesisIndexSet::contains(std::size_t i) const {
    return std::binary_search(m_indices.begin(), m_indices.end(), i);
}

bool HypothesisIndexSet::evaluate(const SideInfo& side) const {
    if (side.size() != m_dimension) {
        throw std::invalid_argument("HypothesisIndexSet::evaluate: side has " +
                                    std::to_string(side.size()) + " components, expected " +
                                    std::to_string(m_dimension));
    }
    for (std::size_t i : m_indices) {
        if (!side.test(i)) return false;
    }
    return true;
}

BitVector HypothesisIndexSet::members() const {
    BitVector v(m_dimension);
    for (std::size_t i : m_indices) v.set(i);
    return v;
}

// ---------------------------------------------------------------------------
// Closed forms over positive data

namespace {

std::vector<double> weights_by_size(const Alpha& prior, std::size_t d) {
    std::vector<double> w(d + 1);
    for (std::size_t k = 0; k <= d; ++k) w[k] = prior.log2_weight(k, d);
    return w;
}

// log2 sum_k count[k] 2^{w[k]}
double log2_weighted_count(std::span<const std::uint64_t> count, std::span<const double> w) {
    std::vector<double> terms;
    terms.reserve(count.size());
    for (std::size_t k = 0; k < count.size(); ++k) {
        if (count[k] > 0) terms.push_back(std::log2(static_cast<double>(count[k])) + w[k]);
    }
    return log2_sum_exp2(terms);
}

}  // namespace

double log2_exact_mixture_joint(const Alpha& prior, std::size_t d, std::span<const Example> trace,
                                std::size_t cap) {
    require_brute_force(d, cap, "exact_mixture_joint");
    std::vector<std::uint32_t> sides;
    std::vector<bool> labels;
    sides.reserve(trace.size());
    for (const Example& ex : trace) {
        if (ex.side.size() != d) {
            throw std::invalid_argument("exact_mixture_joint: example has dimension " +
                                        std::to_string(ex.side.size()) + ", expected " +
                                        std::to_string(d));
        }
        sides.push_back(static_cast<std::uint32_t>(ex.side.to_mask()));
        labels.push_back(ex.label);
    }
    std::vector<std::uint64_t> count(d + 1, 0);
    const std::uint64_t total = std::uint64_t{1} << d;
    for (std::uint64_t s = 0; s < total; ++s) {
        const auto set = static_cast<std::uint32_t>(s);
        bool consistent = true;
        for (std::size_t t = 0; t < sides.size() && consistent; ++t) {
            const bool h = (set & ~sides[t]) == 0;
            consistent = h == labels[t];
        }
        if (consistent) ++count[static_cast<std::size_t>(std::popcount(set))];
    }
    return log2_weighted_count(count, weights_by_size(prior, d));
}

BitVector column_conjunction(std::size_t d, std::span<const SideInfo> positives) {
    BitVector w(d, true);
    for (const SideInfo& a : positives) w &= a;
    return w;
}

double log2_xi_alpha_positive(const Alpha& alpha, std::size_t d,
                              std::span<const SideInfo> positives) {
    const BitVector w = column_conjunction(d, positives);
    // Columns whose conjunction held contribute log2(1) = 0.
    const std::size_t failed = d - w.count();
    return failed == 0 ? 0.0 : static_cast<double>(failed) * alpha.log2_complement();
}

MapModel map_model(const Alpha& alpha, std::size_t d, std::span<const SideInfo> positives) {
    const double a = alpha.value();
    if (a < 0.5) return MapModel{HypothesisIndexSet(d, {}), true};
    const HypothesisIndexSet columns = HypothesisIndexSet::from_bits(column_conjunction(d, positives));
    return MapModel{columns, a > 0.5};
}

// ---------------------------------------------------------------------------
// BayesMixturePredictor

BayesMixturePredictor::BayesMixturePredictor(std::size_t d, Alpha prior, std::size_t cap)
    : Predictor(d), m_prior(prior), m_log2_weight_by_size(weights_by_size(prior, d)) {
    require_brute_force(d, cap, "bayes-exact");
    const std::uint64_t total = std::uint64_t{1} << d;
    m_consistent.resize(total);
    for (std::uint64_t s = 0; s < total; ++s) m_consistent[s] = static_cast<std::uint32_t>(s);
}

double BayesMixturePredictor::log2_evidence() const {
    std::vector<std::uint64_t> count(dimension() + 1, 0);
    for (std::uint32_t s : m_consistent) ++count[static_cast<std::size_t>(std::popcount(s))];
    return log2_weighted_count(count, m_log2_weight_by_size);
}

Prediction BayesMixturePredictor::do_predict(const SideInfo& side) const {
    if (m_consistent.empty()) return Prediction::uniform();
    const auto a = static_cast<std::uint32_t>(side.to_mask());
    std::vector<std::uint64_t> ones(dimension() + 1, 0);
    std::vector<std::uint64_t> zeros(dimension() + 1, 0);
    for (std::uint32_t s : m_consistent) {
        const auto k = static_cast<std::size_t>(std::popcount(s));
        ++((s & ~a) == 0 ? ones : zeros)[k];
    }
    const double log_ones = log2_weighted_count(ones, m_log2_weight_by_size);
    const double log_zeros = log2_weighted_count(zeros, m_log2_weight_by_size);
    if (log_ones == kNegInf) return Prediction::certain(false);
    if (log_zeros == kNegInf) return Prediction::certain(true);
    const double log_all = log2_add_exp2(log_ones, log_zeros);
    return Prediction{std::min(0.0, log_zeros - log_all), std::min(0.0, log_ones - log_all), false};
}

void BayesMixturePredictor::do_update(const SideInfo& side, bool label) {
    const auto a = static_cast<std::uint32_t>(side.to_mask());
    std::erase_if(m_consistent, [&](std::uint32_t s) { return ((s & ~a) == 0) != label; });
}

// ---------------------------------------------------------------------------
// HeuristicPredictor

HeuristicPredictor::HeuristicPredictor(std::size_t d, Alpha alpha)
    : Predictor(d), m_alpha(alpha), m_columns(d, true) {}

Prediction HeuristicPredictor::do_predict(const SideInfo& side) const {
    const std::size_t m = m_columns.count_and_not(side);
    if (m == 0) return Prediction::certain(true);
    return Prediction::from_log_p1(static_cast<double>(m) * m_alpha.log2_complement());
}

void HeuristicPredictor::do_update(const SideInfo& side, bool label) {
    if (label) m_columns &= side;
}

// ---------------------------------------------------------------------------
// MemorizerPredictor

Prediction MemorizerPredictor::do_predict(const SideInfo& side) const {
    return do_predict_keyed(side, side);
}

void MemorizerPredictor::do_update(const SideInfo& side, bool label) {
    do_update_keyed(side, side, label);
}

Prediction MemorizerPredictor::do_predict_keyed(const SideInfo&, const SideInfo& key) const {
    const auto it = m_table.find(key);
    if (it == m_table.end()) return Prediction::uniform();
    return Prediction::certain(it->second);
}

void MemorizerPredictor::do_update_keyed(const SideInfo&, const SideInfo& key, bool label) {
    m_table.emplace(key, label);
}

// ---------------------------------------------------------------------------
// HybridPredictor

HybridPredictor::HybridPredictor(std::size_t d)
    : Predictor(d), m_alpha(d >= 2 ? Alpha::hybrid(d) : Alpha::uniform()), m_columns(d, true) {
    if (d < 2) {
        throw std::invalid_argument("alg1: dimension must be at least 2, got " + std::to_string(d));
    }
}

bool HybridPredictor::is_memorized_negative(const SideInfo& key) const {
    return m_negatives.contains(key);
}

Prediction HybridPredictor::do_predict(const SideInfo& side) const {
    return do_predict_keyed(side, side);
}

void HybridPredictor::do_update(const SideInfo& side, bool label) {
    do_update_keyed(side, side, label);
}

Prediction HybridPredictor::do_predict_keyed(const SideInfo& features, const SideInfo& key) const {
    if (m_negatives.contains(key)) return Prediction::certain(false);
    const std::size_t m = m_columns.count_and_not(features);
    if (m == 0) return Prediction::certain(true);
    return Prediction::from_log_p1(static_cast<double>(m) * m_alpha.log2_complement());
}

void HybridPredictor::do_update_keyed(const SideInfo& features, const SideInfo& key, bool label) {
    if (label) {
        m_columns &= features;
    } else {
        m_negatives.insert(key);
    }
}

// ---------------------------------------------------------------------------
// EliminationPredictor

EliminationPredictor::EliminationPredictor(std::size_t d) : Predictor(d), m_surviving(d, true) {}

Prediction EliminationPredictor::do_predict(const SideInfo& side) const {
    const bool conjunction = side.covers(m_surviving);
    const double t = static_cast<double>(m_step);
    const double log_major = -std::log1p(1.0 / t) / std::numbers::ln2;  // log2(t/(t+1))
    const double log_minor = -std::log2(t + 1.0);                        // log2(1/(t+1))
    Prediction p;
    p.log_p1 = conjunction ? log_major : log_minor;
    p.log_p0 = conjunction ? log_minor : log_major;
    p.tie_label = conjunction;
    return p;
}

void EliminationPredictor::do_update(const SideInfo& side, bool label) {
    if (label) m_surviving &= side;
    ++m_step;
}

// ---------------------------------------------------------------------------

namespace bounds {

double bayes_mixture(std::size_t d) { return static_cast<double>(d); }

double memorizer(std::size_t d) { return std::ldexp(1.0, static_cast<int>(std::min<std::size_t>(d, 2000))); }

double hybrid(std::size_t d) {
    const double dd = static_cast<double>(d);
    return 2.0 * dd * dd;
}

double elimination(std::size_t d, std::uint64_t n) {
    return (static_cast<double>(d) + 1.0) * std::log2(static_cast<double>(n) + 1.0);
}

}  // namespace bounds

}  // namespace kcnf
