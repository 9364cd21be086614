#pragma once

// Brute-force reference implementations. They share no matching or search
// code with the fast paths: hosts are plain adjacency matrices and copies are
// found by straightforward extension in breadth-first pattern order.

#include "hfree/graph.hpp"
#include "hfree/patterns.hpp"
#include "hfree/process.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace hfree::oracle {

inline constexpr std::uint32_t kMaxHostVertices = 25;
inline constexpr std::uint32_t kMaxDensityFullScan = 20;
inline constexpr std::uint32_t kMaxDensityBoundedVertices = 60;
inline constexpr std::uint32_t kMaxDensityBoundedCap = 12;
inline constexpr int kMaxCountPatternVertices = 6;

/// Non-edges uv such that g + uv contains a copy of H through uv. Sorted.
std::vector<PairId> naive_closed_set(const SimpleGraph& g, const Pattern& h);

/// Edge/Open/Closed for every pair of g.
std::vector<PairClass> naive_classes(const SimpleGraph& g, const Pattern& h);

/// Open xy != uv such that g + uv + xy has an H-copy using both. Requires uv
/// to be open.
std::vector<PairId> naive_C_uv(const SimpleGraph& g, const Pattern& h, PairId uv);

/// Any copy of P in g (host limit applies).
bool naive_contains_copy(const Pattern& p, const SimpleGraph& g);

/// g is H-free and every non-edge is closed.
bool naive_is_maximal_h_free(const SimpleGraph& g, const Pattern& h);

/// |Aut(P)| by trying all v! vertex permutations.
std::uint64_t naive_automorphisms(const Pattern& p);

std::uint64_t naive_count_embeddings(const Pattern& p, const SimpleGraph& g);

/// Distinct copies = labelled embeddings / naive_automorphisms.
std::uint64_t naive_count_copies(const Pattern& f, const SimpleGraph& g);

/// Exact max e(A)/|A| over 1 <= |A| <= size_cap; lexicographically smallest
/// maximiser.
DensityResult naive_max_density(const SimpleGraph& g, std::optional<std::uint32_t> size_cap = std::nullopt);

} // namespace hfree::oracle
