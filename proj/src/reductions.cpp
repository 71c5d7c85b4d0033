#include "kcnf/reductions.hpp"

#include "kcnf/predictors.hpp"

#include <cmath>
#include <limits>

namespace kcnf {

namespace {

constexpr std::uint32_t kNoParent = std::numeric_limits<std::uint32_t>::max();

std::size_t saturating_mul(std::size_t a, std::size_t b) {
    if (a != 0 && b > std::numeric_limits<std::size_t>::max() / a) {
        return std::numeric_limits<std::size_t>::max();
    }
    return a * b;
}

std::size_t saturating_add(std::size_t a, std::size_t b) {
    return b > std::numeric_limits<std::size_t>::max() - a ? std::numeric_limits<std::size_t>::max()
                                                           : a + b;
}

}  // namespace

FeatureBudgetExceeded::FeatureBudgetExceeded(std::size_t required, std::size_t budget)
    : std::length_error("feature expansion needs " + std::to_string(required) +
                        " features, over the budget of " + std::to_string(budget)),
      m_required(required) {}

std::size_t ClauseBasis::count(std::size_t d, std::size_t k) {
    std::size_t total = 0;
    std::size_t binom = 1;  // C(d, j)
    std::size_t pow2 = 1;   // 2^j
    for (std::size_t j = 1; j <= k && j <= d; ++j) {
        // C(d, j) = C(d, j-1) (d - j + 1) / j, exact at each step.
        const std::size_t num = saturating_mul(binom, d - j + 1);
        binom = num == std::numeric_limits<std::size_t>::max() ? num : num / j;
        pow2 = saturating_mul(pow2, 2);
        total = saturating_add(total, saturating_mul(binom, pow2));
    }
    return total;
}

std::size_t ClauseBasis::ordered_tuple_count() const {
    std::size_t total = 1;
    for (std::size_t j = 0; j < m_k; ++j) total = saturating_mul(total, 2 * m_d);
    return total;
}

ClauseBasis ClauseBasis::build(std::size_t d, std::size_t k, std::size_t budget) {
    if (d == 0) throw std::invalid_argument("clause basis: d must be at least 1");
    if (k == 0) throw std::invalid_argument("clause basis: k must be at least 1");
    const std::size_t size = count(d, k);
    if (size > budget) throw FeatureBudgetExceeded(size, budget);

    ClauseBasis basis(d, k);
    basis.m_literals.reserve(size * k);
    basis.m_width.reserve(size);
    basis.m_parent.reserve(size);
    basis.m_last.reserve(size);

    const auto literal_count = static_cast<std::uint32_t>(2 * d);
    const std::size_t width_cap = std::min(k, d);
    std::vector<std::uint32_t> prefix;
    std::vector<std::uint32_t> prefix_ids;  // clause id of each prefix length
    std::vector<bool> positive(d, false);

    // Depth-first preorder over strictly increasing literal sequences gives
    // exactly the lexicographic order with prefixes first.
    auto visit = [&](auto&& self, std::uint32_t first) -> void {
        for (std::uint32_t lit = first; lit < literal_count; ++lit) {
            if (lit >= d && positive[lit - d]) continue;  // x and not x together
            const auto id = static_cast<std::uint32_t>(basis.m_width.size());
            basis.m_parent.push_back(prefix_ids.empty() ? kNoParent : prefix_ids.back());
            basis.m_last.push_back(lit);
            prefix.push_back(lit);
            basis.m_width.push_back(static_cast<std::uint8_t>(prefix.size()));
            for (std::size_t s = 0; s < k; ++s) {
                basis.m_literals.push_back(prefix[std::min(s, prefix.size() - 1)]);
            }
            if (prefix.size() < width_cap) {
                prefix_ids.push_back(id);
                if (lit < d) positive[lit] = true;
                self(self, lit + 1);
                if (lit < d) positive[lit] = false;
                prefix_ids.pop_back();
            }
            prefix.pop_back();
        }
    };
    visit(visit, 0);

    if (basis.d_prime() != size) {
        throw std::logic_error("clause basis: enumerated " + std::to_string(basis.d_prime()) +
                               " clauses, expected " + std::to_string(size));
    }
    return basis;
}

std::span<const std::uint32_t> ClauseBasis::clause_indices(std::size_t j) const {
    return std::span<const std::uint32_t>(m_literals.data() + j * m_k, m_width.at(j));
}

std::vector<Literal> ClauseBasis::clause(std::size_t j) const {
    std::vector<Literal> out;
    for (std::uint32_t idx : clause_indices(j)) {
        out.push_back(idx < m_d ? Literal{idx, false}
                                : Literal{static_cast<std::uint32_t>(idx - m_d), true});
    }
    return out;
}

std::string ClauseBasis::clause_to_string(std::size_t j) const {
    std::string s;
    for (const Literal& lit : clause(j)) {
        if (!s.empty()) s += " | ";
        if (lit.negated) s += '~';
        s += 'x' + std::to_string(lit.variable + 1);
    }
    return s;
}

SideInfo ClauseBasis::expand(const SideInfo& side) const {
    if (side.size() != m_d) {
        throw std::invalid_argument("expand: side has " + std::to_string(side.size()) +
                                    " components, basis expects " + std::to_string(m_d));
    }
    std::vector<std::uint8_t> literal(2 * m_d);
    for (std::size_t i = 0; i < m_d; ++i) {
        literal[i] = side.test(i) ? 1 : 0;
        literal[m_d + i] = literal[i] ^ 1u;
    }
    // A clause is its prefix clause OR its last literal; prefixes come first.
    const std::size_t n = d_prime();
    std::vector<std::uint8_t> value(n);
    for (std::size_t j = 0; j < n; ++j) {
        const std::uint32_t parent = m_parent[j];
        value[j] = static_cast<std::uint8_t>((parent == kNoParent ? 0 : value[parent]) |
                                             literal[m_last[j]]);
    }
    SideInfo out(n);
    auto words = out.words();
    for (std::size_t w = 0; w < words.size(); ++w) {
        BitVector::word_type word = 0;
        const std::size_t base = w * BitVector::word_bits;
        const std::size_t end = std::min(n, base + BitVector::word_bits);
        for (std::size_t j = base; j < end; ++j) {
            word |= BitVector::word_type{value[j]} << (j - base);
        }
        words[w] = word;
    }
    return out;
}

SideInfo conjunction_transform(const SideInfo& side) { return side.concat(~side); }

std::pair<SideInfo, bool> disjunction_transform(const SideInfo& side, bool label) {
    return {~side, !label};
}

std::string to_string(ReductionKind kind) {
    switch (kind) {
        case ReductionKind::none: return "none";
        case ReductionKind::conj: return "conj";
        case ReductionKind::disj: return "disj";
        case ReductionKind::kcnf: return "kcnf";
    }
    return "none";
}

ReductionKind parse_reduction(const std::string& text) {
    if (text == "none") return ReductionKind::none;
    if (text == "conj") return ReductionKind::conj;
    if (text == "disj") return ReductionKind::disj;
    if (text == "kcnf") return ReductionKind::kcnf;
    throw std::invalid_argument("unknown reduction '" + text + "' (expected none|conj|disj|kcnf)");
}

// ---------------------------------------------------------------------------
// Reducer

Reducer::Reducer(ReductionKind kind, std::size_t d, std::size_t k, std::size_t budget)
    : m_kind(kind), m_d(d), m_k(kind == ReductionKind::kcnf ? k : 1), m_output_dimension(d) {
    switch (kind) {
        case ReductionKind::none:
            break;
        case ReductionKind::conj:
        case ReductionKind::disj:
            m_output_dimension = 2 * d;
            if (m_output_dimension > budget) throw FeatureBudgetExceeded(m_output_dimension, budget);
            break;
        case ReductionKind::kcnf:
            m_basis = ClauseBasis::build(d, k, budget);
            m_output_dimension = m_basis->d_prime();
            break;
    }
}

SideInfo Reducer::features(const SideInfo& side) const {
    switch (m_kind) {
        case ReductionKind::none: return side;
        case ReductionKind::conj: return conjunction_transform(side);
        case ReductionKind::disj: return conjunction_transform(disjunction_transform(side, false).first);
        case ReductionKind::kcnf: return m_basis->expand(side);
    }
    return side;
}

// ---------------------------------------------------------------------------
// ReducedPredictor

ReducedPredictor::ReducedPredictor(std::shared_ptr<const Reducer> reducer,
                                   std::unique_ptr<Predictor> inner)
    : Predictor(reducer->input_dimension()), m_reducer(std::move(reducer)), m_inner(std::move(inner)) {
    if (m_inner->dimension() != m_reducer->output_dimension()) {
        throw std::invalid_argument("reduced predictor: inner dimension " +
                                    std::to_string(m_inner->dimension()) + " does not match " +
                                    std::to_string(m_reducer->output_dimension()) +
                                    " reduced features");
    }
}

std::string ReducedPredictor::name() const {
    std::string s = m_inner->name() + "+" + to_string(m_reducer->kind());
    if (m_reducer->kind() == ReductionKind::kcnf) s += std::to_string(m_reducer->k());
    return s;
}

const SideInfo& ReducedPredictor::cached_features(const SideInfo& side) const {
    if (!m_cache || m_cache->first != side) {
        m_cache.emplace(side, m_reducer->features(side));
    }
    return m_cache->second;
}

Prediction ReducedPredictor::do_predict(const SideInfo& side) const {
    const Prediction p = m_inner->predict(cached_features(side), side);
    return m_reducer->flips_label() ? p.flipped() : p;
}

void ReducedPredictor::do_update(const SideInfo& side, bool label) {
    const bool inner_label = m_reducer->flips_label() ? !label : label;
    m_inner->update(cached_features(side), side, inner_label);
}

namespace bounds {

double hybrid_kcnf_cap(std::size_t d, std::size_t k) {
    const double kk = static_cast<double>(k);
    return std::exp2(2.0 * kk + 1.0) * std::pow(static_cast<double>(d), 2.0 * kk);
}

double elimination_kcnf_cap(std::size_t d, std::size_t k, std::uint64_t n) {
    const double kk = static_cast<double>(k);
    return (std::exp2(kk) * std::pow(static_cast<double>(d), kk) + 1.0) *
           std::log2(static_cast<double>(n) + 1.0);
}

}  // namespace bounds

}  // namespace kcnf
