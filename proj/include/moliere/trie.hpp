#pragma once

#include <map>
#include <string>
#include <vector>

#include "moliere/catalog.hpp"
#include "moliere/corpus.hpp"

namespace moliere {

// Token trie over keyword synonyms. Every synonym's ids live at the node
// ending its token path; matching follows suffix links so every occurrence
// of every synonym is counted regardless of overlaps.
class SynonymTrie {
 public:
  SynonymTrie();

  void add(std::span<const std::string> tokens, const std::string& keyword_id);
  void compile();  // builds suffix/output links; called automatically by match
  bool compiled() const { return compiled_; }

  std::size_t node_count() const { return nodes_.size(); }
  std::size_t keyword_count() const { return keyword_ids_.size(); }
  const std::vector<std::string>& keyword_ids() const { return keyword_ids_; }

  // counts per keyword index over one token stream
  std::map<int, int> match(std::span<const std::string> tokens) const;

  // test access: ids stored at the node reached by a token path, empty-path = root
  std::vector<std::string> ids_at(std::span<const std::string> tokens) const;

 private:
  struct Node {
    std::map<std::string, int> children;
    std::vector<int> ids;     // keyword indices terminating here
    int suffix = 0;           // longest proper suffix node
    int output = -1;          // nearest suffix node with ids
  };
  std::vector<Node> nodes_;
  std::vector<std::string> keyword_ids_;
  std::map<std::string, int> keyword_index_;
  bool compiled_ = false;

  int next_state(int state, const std::string& token) const;
};

struct SkippedSynonym {
  std::string keyword_id;
  std::string synonym;
};

struct TrieBuildResult {
  SynonymTrie trie;
  std::vector<SkippedSynonym> skipped;  // synonyms empty after normalization
};

// Synonyms are normalized with the corpus normalizer but without stopword
// removal, matching how abstracts are tokenized for tagging.
TrieBuildResult build_synonym_trie(const KeywordCatalog& catalog);

// doc_id x keyword_id occurrence counts
struct TagCounts {
  std::vector<std::string> doc_ids;
  std::vector<std::string> keyword_ids;
  std::vector<std::vector<std::pair<int, int>>> doc_counts;  // per doc: (keyword idx, count), sorted

  std::uint64_t total_for(int keyword_idx) const;
};

// Tags title+abstract tokens (stopwords retained) of every document.
TagCounts tag_abstracts(std::span<const Document> docs, const SynonymTrie& trie);
TagCounts tag_abstracts_serial(std::span<const Document> docs, const SynonymTrie& trie);

void write_tag_counts(const std::string& path, const TagCounts& counts,
                      const std::string& config_hash, std::uint64_t seed);
TagCounts read_tag_counts(const std::string& path);

}  // namespace moliere
