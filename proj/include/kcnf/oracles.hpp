#pragma once

#include "kcnf/core.hpp"

#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

namespace kcnf {

/// Hard ceiling on the universe size of every counting oracle.
inline constexpr std::size_t kOracleCap = 20;
inline constexpr std::size_t kCountingSideInfoCap = 16;

// Subsets and vertex sets below are bit masks over a zero-based universe:
// bit i set means element i is present.

/// Subsets S_1..S_n of {0, ..., d-1}.
class SubsetList {
public:
    SubsetList(std::size_t d, std::vector<std::uint32_t> sets);

    std::size_t d() const { return m_d; }
    const std::vector<std::uint32_t>& sets() const { return m_sets; }

private:
    std::size_t m_d;
    std::vector<std::uint32_t> m_sets;
};

/// Undirected simple graph on vertices {0, ..., size-1}.
class Graph {
public:
    Graph(std::size_t vertices, std::vector<std::pair<std::uint32_t, std::uint32_t>> edges);

    std::size_t vertex_count() const { return m_vertices; }
    const std::vector<std::pair<std::uint32_t, std::uint32_t>>& edges() const { return m_edges; }

private:
    std::size_t m_vertices;
    std::vector<std::pair<std::uint32_t, std::uint32_t>> m_edges;  // stored with first < second
};

/// |P(S_1) u ... u P(S_n)|, by checking each subset of the universe.
std::uint64_t upow(const SubsetList& list);

/// Number of S with h_S(a_t) = x_t for every example of the trace.
std::uint64_t count_consistent(std::size_t d, std::span<const Example> trace);

/// Number of independent vertex sets, the empty set included.
std::uint64_t independent_set_count(const Graph& g);

/// The all-negative trace whose side information rows are the
/// characteristic vectors of the listed sets.
std::vector<Example> characteristic_trace(const SubsetList& list);

/// One set per edge: all vertices except the edge's two endpoints.
SubsetList edge_complements(const Graph& g);

/// 2^d rows; row t (zero-based) is t written in binary, least significant
/// bit first.
std::vector<SideInfo> counting_side_info(std::size_t d);

struct Lemma4Margin {
    double value = 0.0;        // -log2(1 - 2^(-d/2^d))
    bool upper_ok = false;     // value <= d
    bool lower_ok = false;     // value >= d - log2(d) - 1
};

/// Requires d >= 2.
Lemma4Margin lemma4_margin(std::size_t d);

}  // namespace kcnf
