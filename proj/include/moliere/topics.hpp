#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "moliere/corpus.hpp"

namespace moliere {

struct LdaParams {
  int num_topics = 20;
  int iterations = 100;
  double alpha = 0.0;  // 0 means the 50/T default
  double beta = 0.01;
  std::uint64_t seed = 1;

  double effective_alpha() const { return alpha > 0.0 ? alpha : 50.0 / num_topics; }
};

struct TopicModel {
  LdaParams params;
  std::uint64_t seed = 0;
  std::vector<std::string> vocab;
  std::vector<std::string> doc_ids;
  std::vector<std::vector<double>> topic_word;  // T x V, rows sum to 1
  std::vector<std::vector<double>> doc_topic;   // D x T, rows sum to 1
  std::vector<std::vector<int>> topic_word_counts;  // T x V assignment counts
  std::vector<int> topic_counts;                    // per-topic totals
};

// Collapsed Gibbs sampler, exposed so tests can drive individual sweeps and
// inspect counts. Documents are processed in doc_id order with one RNG
// stream per document, so results do not depend on input order.
class LdaSampler {
 public:
  LdaSampler(std::span<const NormalizedDocument> docs, const LdaParams& params);

  void sweep();
  void run() { for (int i = 0; i < params_.iterations; ++i) sweep(); }
  TopicModel finalize() const;

  // unnormalized conditional (n_wt + beta)(n_dt + alpha)/(n_t + V*beta) with
  // the token at (doc, position) removed
  std::vector<double> token_conditional(int doc, int position) const;

  int total_tokens() const { return total_tokens_; }
  int doc_length(int doc) const { return static_cast<int>(doc_tokens_[doc].size()); }
  const std::vector<int>& topic_counts() const { return topic_counts_; }
  const std::vector<std::vector<int>>& doc_topic_counts() const { return doc_topic_counts_; }
  const std::vector<std::vector<int>>& assignments() const { return assignments_; }
  std::size_t vocab_size() const { return vocab_.size(); }

 private:
  LdaParams params_;
  std::vector<std::string> vocab_;
  std::vector<std::string> doc_ids_;
  std::vector<std::vector<int>> doc_tokens_;        // vocab indices
  std::vector<std::vector<int>> assignments_;       // z, aligned with doc_tokens_
  std::vector<std::vector<int>> word_topic_counts_; // V x T
  std::vector<std::vector<int>> doc_topic_counts_;  // D x T
  std::vector<int> topic_counts_;                   // T
  std::vector<std::mt19937_64> doc_rngs_;
  std::vector<int> doc_order_;                      // indices sorted by doc_id
  int total_tokens_ = 0;

  int sample_topic(int doc, int position, std::mt19937_64& rng);
};

TopicModel fit_lda(std::span<const NormalizedDocument> docs, const LdaParams& params);

// m highest-probability tokens of one topic, ties lexicographic
std::vector<std::pair<std::string, double>> top_words(const TopicModel& model, int topic, int m);

struct TermDistributionReport {
  std::string pattern;
  std::vector<double> topic_mass;       // per topic: sum of matching terms' probability
  std::vector<int> top30_match_counts;  // per topic: matching terms among its top 30 words
  std::vector<std::string> matched_terms;
};

// Substring match over the vocabulary; an absent pattern yields a zero report.
TermDistributionReport term_distribution(const TopicModel& model, const std::string& pattern);

struct QueryComparison {
  std::string pattern;
  std::vector<double> mass_a, mass_b;  // per topic
  double total_a = 0.0, total_b = 0.0;
};

// Side-by-side distribution table; both reports must share a pattern.
QueryComparison compare_queries(const TermDistributionReport& a, const TermDistributionReport& b);

void write_model(const std::string& path, const TopicModel& model, const std::string& config_hash);
TopicModel read_model(const std::string& path);

void write_report(const std::string& path, const TermDistributionReport& report,
                  const std::string& config_hash, std::uint64_t seed);
TermDistributionReport read_report(const std::string& path);

std::string format_comparison(const QueryComparison& cmp);

}  // namespace moliere
