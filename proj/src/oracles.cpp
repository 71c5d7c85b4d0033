#include "kcnf/oracles.hpp"

#include "kcnf/predictors.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>
#include <string>

namespace kcnf {

namespace {

void require_oracle(std::size_t d, const char* what) { require_brute_force(d, kOracleCap, what); }

std::uint32_t side_mask(const SideInfo& side) { return static_cast<std::uint32_t>(side.to_mask()); }

}  // namespace

SubsetList::SubsetList(std::size_t d, std::vector<std::uint32_t> sets)
    : m_d(d), m_sets(std::move(sets)) {
    require_oracle(d, "subset list");
    const std::uint64_t universe = (std::uint64_t{1} << d) - 1;
    for (std::uint32_t s : m_sets) {
        if ((s & ~universe) != 0) {
            throw std::invalid_argument("subset list: set has elements outside {0.." +
                                        std::to_string(d) + "-1}");
        }
    }
}

Graph::Graph(std::size_t vertices, std::vector<std::pair<std::uint32_t, std::uint32_t>> edges)
    : m_vertices(vertices) {
    require_oracle(vertices, "graph");
    std::set<std::pair<std::uint32_t, std::uint32_t>> seen;
    for (auto [v, w] : edges) {
        if (v >= vertices || w >= vertices) throw std::invalid_argument("graph: vertex out of range");
        if (v == w) throw std::invalid_argument("graph: self-loop on vertex " + std::to_string(v));
        if (v > w) std::swap(v, w);
        if (!seen.emplace(v, w).second) {
            throw std::invalid_argument("graph: duplicate edge " + std::to_string(v) + "-" +
                                        std::to_string(w));
        }
        m_edges.emplace_back(v, w);
    }
}

std::uint64_t upow(const SubsetList& list) {
    const std::uint64_t total = std::uint64_t{1} << list.d();
    std::uint64_t count = 0;
    for (std::uint64_t u = 0; u < total; ++u) {
        const auto sub = static_cast<std::uint32_t>(u);
        if (std::any_of(list.sets().begin(), list.sets().end(),
                        [sub](std::uint32_t s) { return (sub & ~s) == 0; })) {
            ++count;
        }
    }
    return count;
}

std::uint64_t count_consistent(std::size_t d, std::span<const Example> trace) {
    require_oracle(d, "consistent-hypothesis count");
    std::vector<std::pair<std::uint32_t, bool>> rows;
    for (const Example& ex : trace) {
        if (ex.side.size() != d) throw std::invalid_argument("count_consistent: dimension mismatch");
        rows.emplace_back(side_mask(ex.side), ex.label);
    }
    const std::uint64_t total = std::uint64_t{1} << d;
    std::uint64_t count = 0;
    for (std::uint64_t s = 0; s < total; ++s) {
        const auto mask = static_cast<std::uint32_t>(s);
        const bool ok = std::all_of(rows.begin(), rows.end(), [mask](const auto& row) {
            return ((mask & ~row.first) == 0) == row.second;
        });
        if (ok) ++count;
    }
    return count;
}

std::uint64_t independent_set_count(const Graph& g) {
    const std::uint64_t total = std::uint64_t{1} << g.vertex_count();
    std::uint64_t count = 0;
    for (std::uint64_t u = 0; u < total; ++u) {
        const bool independent = std::none_of(g.edges().begin(), g.edges().end(), [u](const auto& e) {
            return ((u >> e.first) & 1u) && ((u >> e.second) & 1u);
        });
        if (independent) ++count;
    }
    return count;
}

std::vector<Example> characteristic_trace(const SubsetList& list) {
    std::vector<Example> trace;
    trace.reserve(list.sets().size());
    for (std::uint32_t s : list.sets()) trace.push_back({SideInfo::from_mask(s, list.d()), false});
    return trace;
}

SubsetList edge_complements(const Graph& g) {
    const auto all = static_cast<std::uint32_t>((std::uint64_t{1} << g.vertex_count()) - 1);
    std::vector<std::uint32_t> sets;
    for (const auto& [v, w] : g.edges()) sets.push_back(all & ~(1u << v) & ~(1u << w));
    return SubsetList(g.vertex_count(), std::move(sets));
}

std::vector<SideInfo> counting_side_info(std::size_t d) {
    require_brute_force(d, kCountingSideInfoCap, "counting side information");
    std::vector<SideInfo> rows;
    rows.reserve(std::size_t{1} << d);
    for (std::uint64_t t = 0; t < (std::uint64_t{1} << d); ++t) rows.push_back(SideInfo::from_mask(t, d));
    return rows;
}

Lemma4Margin lemma4_margin(std::size_t d) {
    if (d < 2) throw std::invalid_argument("lemma4_margin: d must be at least 2");
    const double value = -Alpha::hybrid(d).log2_complement();
    const double dd = static_cast<double>(d);
    return Lemma4Margin{value, std::isfinite(value) && value <= dd,
                        value >= dd - std::log2(dd) - 1.0};
}

}  // namespace kcnf
