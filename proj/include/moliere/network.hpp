#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "moliere/common.hpp"

namespace moliere {

enum class NodeKind { Abstract, Keyword };

struct NodeId {
  NodeKind kind = NodeKind::Abstract;
  std::string key;

  std::string serialize() const { return (kind == NodeKind::Abstract ? "a:" : "k:") + key; }
  static NodeId parse(const std::string& text);
  static NodeId abstract(std::string key) { return {NodeKind::Abstract, std::move(key)}; }
  static NodeId keyword(std::string key) { return {NodeKind::Keyword, std::move(key)}; }

  friend bool operator==(const NodeId&, const NodeId&) = default;
  friend auto operator<=>(const NodeId& a, const NodeId& b) {
    return a.serialize() <=> b.serialize();
  }
};

enum class EdgeClass { AA, KK, AK };

std::string edge_class_name(EdgeClass cls);
EdgeClass edge_class_from(const std::string& name);

struct Edge {
  NodeId u, v;
  double weight = 0.0;  // distance semantics, smaller = closer
  EdgeClass cls = EdgeClass::AA;
};

struct HalfEdge {
  int to = -1;
  double weight = 0.0;
  EdgeClass cls = EdgeClass::AA;
};

// Weighted undirected graph over abstract and keyword nodes. Nodes are held
// in canonical order (abstracts sorted by key, then keywords sorted by key);
// adjacency lists are sorted and symmetric.
class KnowledgeNetwork {
 public:
  KnowledgeNetwork() = default;

  std::size_t node_count() const { return nodes_.size(); }
  std::size_t abstract_count() const { return abstract_count_; }
  std::size_t keyword_count() const { return nodes_.size() - abstract_count_; }
  std::size_t edge_count() const { return edge_count_; }
  double sigma() const { return sigma_; }
  const std::string& config_hash() const { return config_hash_; }
  std::uint64_t seed() const { return seed_; }

  const NodeId& node(int index) const { return nodes_[index]; }
  int index_of(const NodeId& id) const;  // -1 when absent
  std::span<const HalfEdge> neighbors(int index) const { return adjacency_[index]; }
  const std::vector<NodeId>& nodes() const { return nodes_; }

  friend KnowledgeNetwork assemble(std::span<const NodeId> abstracts,
                                   std::span<const NodeId> keywords, std::span<const Edge> aa,
                                   std::span<const Edge> kk, std::span<const Edge> ak, double sigma,
                                   const std::string& config_hash, std::uint64_t seed);
  friend KnowledgeNetwork read_network(const std::string& path);

 private:
  std::vector<NodeId> nodes_;
  std::unordered_map<std::string, int> index_;
  std::vector<std::vector<HalfEdge>> adjacency_;
  std::size_t abstract_count_ = 0;
  std::size_t edge_count_ = 0;
  double sigma_ = 2.0;
  std::string config_hash_;
  std::uint64_t seed_ = 0;
};

// Merges the three edge classes into one symmetric network. Throws when an
// edge references a node outside the given node sets or violates its class
// weight range.
KnowledgeNetwork assemble(std::span<const NodeId> abstracts, std::span<const NodeId> keywords,
                          std::span<const Edge> aa, std::span<const Edge> kk,
                          std::span<const Edge> ak, double sigma, const std::string& config_hash,
                          std::uint64_t seed);

struct NetworkStats {
  std::size_t node_count = 0;
  std::size_t abstract_count = 0;
  std::size_t keyword_count = 0;
  std::size_t edge_count = 0;
  double average_degree = 0.0;
  double clustering_coefficient = 0.0;  // global transitivity
  std::size_t component_count = 0;
  std::size_t largest_component = 0;
  std::vector<std::size_t> component_sizes;  // descending
};

NetworkStats compute_stats(const KnowledgeNetwork& net);

void write_network(const std::string& path, const KnowledgeNetwork& net);
KnowledgeNetwork read_network(const std::string& path);

}  // namespace moliere
