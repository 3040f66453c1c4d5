#pragma once

#include <vector>

#include "moliere/network.hpp"
#include "moliere/trie.hpp"

namespace moliere {

struct RawAkWeight {
  std::string doc_id;
  std::string keyword_id;
  double raw = 0.0;  // keyword's corpus-wide count / count in this abstract
};

// One raw weight per (abstract, keyword) pair with a positive count. Heavier
// in-document usage gives a smaller value.
std::vector<RawAkWeight> tfidf_raw(const TagCounts& counts);

// Raw weights min-max scaled to [0, sigma].
std::vector<Edge> tfidf_edges(const TagCounts& counts, double sigma);

}  // namespace moliere
