#include "moliere/knn.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <set>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace moliere {

KnnMethod knn_method_from(const std::string& name) {
  if (name == "exact") return KnnMethod::exact;
  if (name == "approx") return KnnMethod::approx;
  throw Error("unknown knn method: " + name);
}

std::string knn_method_name(KnnMethod m) {
  return m == KnnMethod::exact ? "exact" : "approx";
}

namespace {

double l2_distance(std::span<const float> a, std::span<const float> b) {
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    double d = static_cast<double>(a[i]) - b[i];
    acc += d * d;
  }
  return std::sqrt(acc);
}

std::vector<std::pair<int, double>> nearest_of(std::span<const Centroid> points, int i, int k) {
  std::vector<std::pair<double, int>> dists;
  dists.reserve(points.size() - 1);
  auto pi = std::span<const float>(points[i].values);
  for (std::size_t j = 0; j < points.size(); ++j) {
    if (static_cast<int>(j) == i) continue;
    dists.emplace_back(l2_distance(pi, points[j].values), static_cast<int>(j));
  }
  std::partial_sort(dists.begin(), dists.begin() + k, dists.end());
  std::vector<std::pair<int, double>> out;
  out.reserve(k);
  for (int n = 0; n < k; ++n) out.emplace_back(dists[n].second, dists[n].first);
  return out;
}

}  // namespace

std::vector<std::vector<std::pair<int, double>>> knn_exact_serial(std::span<const Centroid> points,
                                                                  int k) {
  std::vector<std::vector<std::pair<int, double>>> out(points.size());
  for (std::size_t i = 0; i < points.size(); ++i)
    out[i] = nearest_of(points, static_cast<int>(i), k);
  return out;
}

std::vector<std::vector<std::pair<int, double>>> knn_exact(std::span<const Centroid> points, int k) {
  std::vector<std::vector<std::pair<int, double>>> out(points.size());
#pragma omp parallel for schedule(dynamic, 16)
  for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(points.size()); ++i)
    out[i] = nearest_of(points, static_cast<int>(i), k);
  return out;
}

std::vector<std::vector<std::pair<int, double>>> knn_approx(std::span<const Centroid> points, int k,
                                                            std::uint64_t seed) {
  const int n = static_cast<int>(points.size());
  const int dim = static_cast<int>(points[0].values.size());
  const int projections = 10;
  const int window = 50;

  // projected orderings along random unit directions
  std::mt19937_64 rng(splitmix64(seed ^ 0x9d2c5680ULL));
  std::vector<std::vector<int>> orders(projections);
  std::vector<std::vector<int>> positions(projections, std::vector<int>(n));
  for (int p = 0; p < projections; ++p) {
    std::vector<double> dir(dim);
    double norm = 0.0;
    for (int j = 0; j < dim; ++j) {
      dir[j] = rng_normal(rng);
      norm += dir[j] * dir[j];
    }
    norm = std::sqrt(norm);
    std::vector<std::pair<double, int>> keyed(n);
    for (int i = 0; i < n; ++i) {
      double dot = 0.0;
      for (int j = 0; j < dim; ++j) dot += dir[j] * points[i].values[j];
      keyed[i] = {dot / norm, i};
    }
    std::sort(keyed.begin(), keyed.end());
    orders[p].resize(n);
    for (int r = 0; r < n; ++r) {
      orders[p][r] = keyed[r].second;
      positions[p][keyed[r].second] = r;
    }
  }

  std::vector<std::vector<std::pair<int, double>>> out(points.size());
#pragma omp parallel for schedule(dynamic, 16)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    std::set<int> candidates;
    for (int p = 0; p < projections; ++p) {
      int r = positions[p][i];
      int lo = std::max(0, r - window);
      int hi = std::min(n - 1, r + window);
      for (int q = lo; q <= hi; ++q)
        if (orders[p][q] != i) candidates.insert(orders[p][q]);
    }
    std::vector<std::pair<double, int>> dists;
    dists.reserve(candidates.size());
    auto pi = std::span<const float>(points[i].values);
    for (int j : candidates) dists.emplace_back(l2_distance(pi, points[j].values), j);
    int take = std::min<int>(k, static_cast<int>(dists.size()));
    std::partial_sort(dists.begin(), dists.begin() + take, dists.end());
    out[i].reserve(take);
    for (int t = 0; t < take; ++t) out[i].emplace_back(dists[t].second, dists[t].first);
  }
  return out;
}

std::vector<Edge> knn_abstract_edges(std::span<const Centroid> centroids, int k, KnnMethod method,
                                     std::uint64_t seed) {
  if (k < 1) throw Error("k must be >= 1");
  std::vector<Centroid> usable;
  usable.reserve(centroids.size());
  for (const auto& c : centroids)
    if (!c.degenerate) usable.push_back(c);
  if (usable.size() < static_cast<std::size_t>(k) + 1)
    throw Error("need at least k+1 non-degenerate centroids, have " +
                std::to_string(usable.size()));

  auto lists = method == KnnMethod::exact ? knn_exact(usable, k) : knn_approx(usable, k, seed);

  // union symmetrization: keep an edge if either endpoint selected it
  std::map<std::pair<int, int>, double> edges;
  for (std::size_t i = 0; i < lists.size(); ++i)
    for (const auto& [j, dist] : lists[i]) {
      auto key = std::minmax(static_cast<int>(i), j);
      edges.emplace(std::make_pair(key.first, key.second), dist);
    }

  double lo = 0.0, hi = 0.0;
  bool first = true;
  for (const auto& [key, dist] : edges) {
    if (first) { lo = hi = dist; first = false; }
    lo = std::min(lo, dist);
    hi = std::max(hi, dist);
  }
  double span = hi - lo;

  std::vector<Edge> out;
  out.reserve(edges.size());
  for (const auto& [key, dist] : edges) {
    double w = span > 0.0 ? quantize9((dist - lo) / span) : 0.0;
    out.push_back({NodeId::abstract(usable[key.first].doc_id),
                   NodeId::abstract(usable[key.second].doc_id), w, EdgeClass::AA});
  }
  return out;
}

}  // namespace moliere
