#pragma once

#include <cmath>
#include <cstdint>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "moliere/corpus.hpp"

namespace moliere {

struct EmbeddingParams {
  int dim = 50;
  int window = 8;
  int negatives = 5;
  int epochs = 5;
  float learning_rate = 0.025f;  // linearly decayed
  int min_count = 0;
  std::uint64_t seed = 1;
  int workers = 1;  // >1 enables the nondeterministic shared-weight mode
};

class EmbeddingTable {
 public:
  EmbeddingTable() = default;
  EmbeddingTable(std::vector<std::string> tokens, int dim, std::uint64_t seed, bool deterministic);

  int dim() const { return dim_; }
  std::size_t vocab_size() const { return tokens_.size(); }
  std::uint64_t seed() const { return seed_; }
  bool deterministic() const { return deterministic_; }
  const std::vector<std::string>& tokens() const { return tokens_; }

  int index_of(const std::string& token) const;  // -1 when absent
  std::span<const float> vector_at(int index) const;
  std::span<float> vector_at(int index);

  std::vector<double> epoch_losses;  // mean pair objective per epoch, set by training

 private:
  std::vector<std::string> tokens_;
  std::unordered_map<std::string, int> index_;
  std::vector<float> data_;  // vocab x dim, row-major
  int dim_ = 0;
  std::uint64_t seed_ = 0;
  bool deterministic_ = true;
};

struct Centroid {
  std::string doc_id;
  std::vector<float> values;
  bool degenerate = false;  // no in-vocabulary tokens
};

// Loss and analytic gradient of the negative-sampling objective for a single
// (center, context, negatives) triple:
//   L = -log s(c.o) - sum_k log s(-c.n_k)
// Gradients are accumulated into the grad_* buffers (callers zero them).
// Templated so training runs in float while gradient checks run in double.
template <typename Real>
Real sgns_pair_loss_grad(std::span<const Real> center, std::span<const Real> context,
                         std::span<const std::vector<Real>> negatives, std::span<Real> grad_center,
                         std::span<Real> grad_context, std::span<std::vector<Real>> grad_negatives) {
  auto sigmoid = [](Real x) { return Real(1) / (Real(1) + std::exp(-x)); };
  const std::size_t d = center.size();
  Real loss = 0;
  {
    Real dot = 0;
    for (std::size_t i = 0; i < d; ++i) dot += center[i] * context[i];
    Real s = sigmoid(dot);
    loss -= std::log(s);
    Real g = s - Real(1);  // d(-log s(x))/dx
    for (std::size_t i = 0; i < d; ++i) {
      grad_center[i] += g * context[i];
      grad_context[i] += g * center[i];
    }
  }
  for (std::size_t k = 0; k < negatives.size(); ++k) {
    Real dot = 0;
    for (std::size_t i = 0; i < d; ++i) dot += center[i] * negatives[k][i];
    Real s = sigmoid(-dot);
    loss -= std::log(s);
    Real g = Real(1) - s;  // d(-log s(-x))/dx
    for (std::size_t i = 0; i < d; ++i) {
      grad_center[i] += g * negatives[k][i];
      grad_negatives[k][i] += g * center[i];
    }
  }
  return loss;
}

// Skip-gram training over the phrase-merged corpus. Deterministic for
// workers == 1; multi-worker mode shares weights without locking and is
// flagged nondeterministic in the table metadata.
EmbeddingTable train_skipgram(std::span<const NormalizedDocument> docs,
                              const EmbeddingParams& params);

Centroid centroid(const NormalizedDocument& doc, const EmbeddingTable& table);
std::vector<Centroid> compute_centroids(std::span<const NormalizedDocument> docs,
                                        const EmbeddingTable& table);
std::vector<Centroid> compute_centroids_serial(std::span<const NormalizedDocument> docs,
                                               const EmbeddingTable& table);

// n nearest tokens by cosine similarity, excluding the query; ties break
// lexicographically. Throws on unknown tokens.
std::vector<std::pair<std::string, double>> nearest_tokens(const EmbeddingTable& table,
                                                           const std::string& token, int n);

void write_embeddings(const std::string& path, const EmbeddingTable& table,
                      const std::string& config_hash);
EmbeddingTable read_embeddings(const std::string& path);

void write_centroids(const std::string& path, std::span<const Centroid> centroids,
                     const std::string& config_hash, std::uint64_t seed);
std::vector<Centroid> read_centroids(const std::string& path);

}  // namespace moliere
