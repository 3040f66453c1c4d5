#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <unordered_map>
#include <vector>

#include "moliere/corpus.hpp"

namespace moliere {

struct PhraseParams {
  int min_freq = 5;
  int max_len = 4;            // words per phrase
  double min_significance = 3.0;
};

struct PhraseEntry {
  std::vector<std::string> components;  // original corpus tokens
  std::string merged;                   // underscore-join of components
  std::uint64_t frequency = 0;
};

class PhraseLexicon {
 public:
  void add(PhraseEntry entry);
  const PhraseEntry* find(std::span<const std::string> tokens, std::size_t pos, std::size_t len) const;
  bool contains(const std::vector<std::string>& components) const;
  std::size_t size() const { return entries_.size(); }
  std::size_t max_components() const { return max_components_; }
  const std::map<std::string, PhraseEntry>& entries() const { return entries_; }

 private:
  std::map<std::string, PhraseEntry> entries_;  // keyed by space-joined components
  std::size_t max_components_ = 0;
};

// Exact counts of every contiguous n-gram with n <= max_len. Keys are
// space-joined token sequences; windows never cross document boundaries.
std::unordered_map<std::string, std::uint64_t> count_ngrams(
    std::span<const NormalizedDocument> docs, int max_len);
std::unordered_map<std::string, std::uint64_t> count_ngrams_serial(
    std::span<const NormalizedDocument> docs, int max_len);

// t-style adjacency significance: (count_ab - count_a*count_b/total) / sqrt(count_ab).
// Zero when count_ab is zero.
double significance(std::uint64_t count_ab, std::uint64_t count_a, std::uint64_t count_b,
                    std::uint64_t total_positions);

// Bottom-up merging of the most significant adjacent pair until no pair has
// frequency >= min_freq and significance >= min_significance. Ties break on
// the lexicographically smaller merged token.
PhraseLexicon mine_phrases(std::span<const NormalizedDocument> docs, const PhraseParams& params);

// Greedy longest-match left-to-right replacement of phrase occurrences.
NormalizedDocument apply_lexicon(const NormalizedDocument& doc, const PhraseLexicon& lex);
std::vector<NormalizedDocument> apply_lexicon_all(std::span<const NormalizedDocument> docs,
                                                  const PhraseLexicon& lex);

void write_lexicon(const std::string& path, const PhraseLexicon& lex,
                   const std::string& config_hash, std::uint64_t seed);
PhraseLexicon read_lexicon(const std::string& path);

}  // namespace moliere
