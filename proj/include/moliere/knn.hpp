#pragma once

#include <span>
#include <vector>

#include "moliere/embed.hpp"
#include "moliere/network.hpp"

namespace moliere {

enum class KnnMethod { exact, approx };

KnnMethod knn_method_from(const std::string& name);
std::string knn_method_name(KnnMethod m);

// Per-point k nearest neighbors by L2 distance, as (neighbor index, distance)
// sorted ascending; ties break on the smaller index. Degenerate centroids
// must be filtered by the caller.
std::vector<std::vector<std::pair<int, double>>> knn_exact(std::span<const Centroid> points, int k);
std::vector<std::vector<std::pair<int, double>>> knn_exact_serial(std::span<const Centroid> points,
                                                                  int k);

// Candidate pruning through sorted 1-D random projections; exact distances
// are evaluated on the candidate union only.
std::vector<std::vector<std::pair<int, double>>> knn_approx(std::span<const Centroid> points, int k,
                                                            std::uint64_t seed);

// Union-symmetrized kNN edge set over the non-degenerate centroids, raw L2
// distances min-max scaled to [0,1]. Throws when fewer than k+1 usable
// centroids remain.
std::vector<Edge> knn_abstract_edges(std::span<const Centroid> centroids, int k,
                                     KnnMethod method = KnnMethod::exact, std::uint64_t seed = 0);

}  // namespace moliere
