#pragma once

#include <optional>
#include <string>
#include <vector>

#include "moliere/corpus.hpp"
#include "moliere/network.hpp"
#include "moliere/phrases.hpp"

namespace moliere {

struct PathResult {
  bool found = false;
  std::vector<NodeId> nodes;         // source..target when found
  std::vector<double> edge_weights;  // one per hop
  double total_weight = 0.0;
};

struct QueryParams {
  int cloud_size = 1000;
  int pair_cap = 150;  // per adjacent keyword pair on the path
};

struct AbstractCloud {
  std::vector<std::string> path_abstracts;                  // S, sorted by doc id
  std::vector<std::pair<std::string, double>> neighborhood; // N with distances, (distance, id) order
  std::vector<std::string> cooccurrence;                    // C, ranked
  std::vector<std::string> union_docs;                      // S then N then C, deduplicated
  bool flagged_empty = false;  // no path abstracts and no adjacent keyword pairs
};

struct QueryBundle {
  NodeId source, target;
  PathResult path;
  AbstractCloud cloud;
  std::vector<NormalizedDocument> docs;  // phrase-merged cloud documents
};

// Exact single-pair Dijkstra; the priority queue is a skew heap with lazy
// deletion. Distance ties keep the lexicographically smaller predecessor.
// An unreachable target yields found == false, not an error.
PathResult shortest_path(const KnowledgeNetwork& net, const NodeId& source, const NodeId& target);

// Multi-source Dijkstra from the path's abstracts: N is the first cloud_size
// abstracts finalized (path abstracts count, at distance 0). C collects, for
// each adjacent keyword pair on the path, abstracts adjacent to both ends,
// ranked by summed edge weight and truncated at pair_cap.
AbstractCloud extend_cloud(const KnowledgeNetwork& net, const PathResult& path,
                           const QueryParams& params);

// Full query: path, cloud, and normalized + phrase-merged documents for every
// cloud member. Throws when a cloud document is missing from the corpus.
QueryBundle run_query(const KnowledgeNetwork& net, const Corpus& corpus,
                      const StopwordSet& stopwords, const PhraseLexicon& lexicon,
                      const NodeId& source, const NodeId& target, const QueryParams& params);

void write_bundle(const std::string& dir, const QueryBundle& bundle,
                  const std::string& config_hash, std::uint64_t seed);
QueryBundle read_bundle(const std::string& dir);

}  // namespace moliere
