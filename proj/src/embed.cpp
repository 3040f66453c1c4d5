#include "moliere/embed.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <numeric>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace moliere {

EmbeddingTable::EmbeddingTable(std::vector<std::string> tokens, int dim, std::uint64_t seed,
                               bool deterministic)
    : tokens_(std::move(tokens)), dim_(dim), seed_(seed), deterministic_(deterministic) {
  index_.reserve(tokens_.size());
  for (std::size_t i = 0; i < tokens_.size(); ++i) index_[tokens_[i]] = static_cast<int>(i);
  data_.assign(tokens_.size() * static_cast<std::size_t>(dim_), 0.0f);
}

int EmbeddingTable::index_of(const std::string& token) const {
  auto it = index_.find(token);
  return it == index_.end() ? -1 : it->second;
}

std::span<const float> EmbeddingTable::vector_at(int index) const {
  return {data_.data() + static_cast<std::size_t>(index) * dim_, static_cast<std::size_t>(dim_)};
}

std::span<float> EmbeddingTable::vector_at(int index) {
  return {data_.data() + static_cast<std::size_t>(index) * dim_, static_cast<std::size_t>(dim_)};
}

namespace {

struct TrainCorpus {
  std::vector<std::string> vocab;                // sorted by count desc, then token
  std::vector<std::uint64_t> counts;             // aligned with vocab
  std::vector<std::vector<int>> sentences;       // token indices, out-of-vocab dropped
  std::uint64_t total_tokens = 0;
  std::vector<double> negative_cdf;              // cumulative unigram^0.75
};

TrainCorpus build_train_corpus(std::span<const NormalizedDocument> docs, int min_count) {
  std::unordered_map<std::string, std::uint64_t> freq;
  for (const auto& doc : docs)
    for (const auto& t : doc.tokens) ++freq[t];

  TrainCorpus tc;
  std::vector<std::pair<std::string, std::uint64_t>> items;
  items.reserve(freq.size());
  for (auto& [tok, count] : freq)
    if (count >= static_cast<std::uint64_t>(min_count) || min_count <= 0)
      items.emplace_back(tok, count);
  std::sort(items.begin(), items.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });
  std::unordered_map<std::string, int> index;
  for (auto& [tok, count] : items) {
    index[tok] = static_cast<int>(tc.vocab.size());
    tc.vocab.push_back(tok);
    tc.counts.push_back(count);
  }

  tc.sentences.reserve(docs.size());
  for (const auto& doc : docs) {
    std::vector<int> sent;
    sent.reserve(doc.tokens.size());
    for (const auto& t : doc.tokens) {
      auto it = index.find(t);
      if (it != index.end()) sent.push_back(it->second);
    }
    tc.total_tokens += sent.size();
    tc.sentences.push_back(std::move(sent));
  }

  tc.negative_cdf.resize(tc.vocab.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < tc.counts.size(); ++i) {
    acc += std::pow(static_cast<double>(tc.counts[i]), 0.75);
    tc.negative_cdf[i] = acc;
  }
  return tc;
}

int sample_negative(const std::vector<double>& cdf, std::mt19937_64& rng) {
  double u = rng_unit(rng) * cdf.back();
  auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
  if (it == cdf.end()) --it;
  return static_cast<int>(it - cdf.begin());
}

struct PairScratch {
  std::vector<float> grad_center, grad_context;
  std::vector<std::vector<float>> neg_vecs, grad_negs;
  std::vector<int> neg_ids;
};

// One SGD step on a (center, context) pair; returns the pair objective before
// the update.
double train_pair(EmbeddingTable& table, std::vector<float>& context_weights, int center, int context,
                  int negatives, const std::vector<double>& cdf, float lr, std::mt19937_64& rng,
                  PairScratch& scratch) {
  const int d = table.dim();
  auto ctx_row = [&](int idx) {
    return std::span<float>(context_weights.data() + static_cast<std::size_t>(idx) * d,
                            static_cast<std::size_t>(d));
  };

  scratch.neg_ids.clear();
  for (int k = 0; k < negatives; ++k) {
    int neg = sample_negative(cdf, rng);
    if (neg == context) continue;  // skip negatives colliding with the positive
    scratch.neg_ids.push_back(neg);
  }

  const std::size_t nneg = scratch.neg_ids.size();
  scratch.grad_center.assign(d, 0.0f);
  scratch.grad_context.assign(d, 0.0f);
  scratch.neg_vecs.resize(nneg);
  scratch.grad_negs.resize(nneg);
  for (std::size_t k = 0; k < nneg; ++k) {
    auto row = ctx_row(scratch.neg_ids[k]);
    scratch.neg_vecs[k].assign(row.begin(), row.end());
    scratch.grad_negs[k].assign(d, 0.0f);
  }

  auto center_vec = table.vector_at(center);
  float loss = sgns_pair_loss_grad<float>(
      center_vec, ctx_row(context), scratch.neg_vecs, scratch.grad_center, scratch.grad_context,
      scratch.grad_negs);

  for (int i = 0; i < d; ++i) center_vec[i] -= lr * scratch.grad_center[i];
  auto ctx = ctx_row(context);
  for (int i = 0; i < d; ++i) ctx[i] -= lr * scratch.grad_context[i];
  for (std::size_t k = 0; k < nneg; ++k) {
    auto row = ctx_row(scratch.neg_ids[k]);
    for (int i = 0; i < d; ++i) row[i] -= lr * scratch.grad_negs[k][i];
  }
  return loss;
}

}  // namespace

EmbeddingTable train_skipgram(std::span<const NormalizedDocument> docs,
                              const EmbeddingParams& params) {
  if (params.dim < 2) throw Error("embedding dim must be >= 2");
  if (params.window < 1) throw Error("window must be >= 1");
  if (params.negatives < 1) throw Error("negatives must be >= 1");

  TrainCorpus tc = build_train_corpus(docs, params.min_count);
  if (tc.vocab.empty() || tc.total_tokens == 0)
    throw Error("empty effective vocabulary after min_count filtering");

  const int d = params.dim;
  bool deterministic = params.workers <= 1;
  EmbeddingTable table(tc.vocab, d, params.seed, deterministic);

  // input vectors uniform in [-0.5/d, 0.5/d), context vectors zero
  {
    std::mt19937_64 init_rng(splitmix64(params.seed));
    for (std::size_t i = 0; i < table.vocab_size(); ++i) {
      auto row = table.vector_at(static_cast<int>(i));
      for (int j = 0; j < d; ++j)
        row[j] = static_cast<float>((rng_unit(init_rng) - 0.5) / d);
    }
  }
  std::vector<float> context_weights(table.vocab_size() * static_cast<std::size_t>(d), 0.0f);

  const std::uint64_t planned = tc.total_tokens * static_cast<std::uint64_t>(params.epochs);
  table.epoch_losses.assign(params.epochs, 0.0);

  if (deterministic) {
    std::mt19937_64 rng(derive_seed(params.seed, "sgns"));
    PairScratch scratch;
    std::uint64_t processed = 0;
    for (int epoch = 0; epoch < params.epochs; ++epoch) {
      double loss_sum = 0.0;
      std::uint64_t pair_count = 0;
      for (const auto& sent : tc.sentences) {
        const int n = static_cast<int>(sent.size());
        for (int pos = 0; pos < n; ++pos) {
          float lr = params.learning_rate *
                     std::max(1e-4f, 1.0f - static_cast<float>(processed) / (planned + 1));
          ++processed;
          int reach = 1 + static_cast<int>(rng_below(rng, params.window));
          for (int off = -reach; off <= reach; ++off) {
            if (off == 0) continue;
            int ctx_pos = pos + off;
            if (ctx_pos < 0 || ctx_pos >= n) continue;
            loss_sum += train_pair(table, context_weights, sent[pos], sent[ctx_pos],
                                   params.negatives, tc.negative_cdf, lr, rng, scratch);
            ++pair_count;
          }
        }
      }
      table.epoch_losses[epoch] = pair_count ? loss_sum / pair_count : 0.0;
    }
  } else {
    // shared-weight updates without locking; fast but order-nondeterministic
    for (int epoch = 0; epoch < params.epochs; ++epoch) {
      double loss_sum = 0.0;
      std::uint64_t pair_count = 0;
#pragma omp parallel num_threads(params.workers) reduction(+ : loss_sum, pair_count)
      {
#ifdef _OPENMP
        int tid = omp_get_thread_num();
#else
        int tid = 0;
#endif
        std::mt19937_64 rng(derive_seed(params.seed, "sgns-worker-" + std::to_string(tid) + "-" +
                                                         std::to_string(epoch)));
        PairScratch scratch;
#pragma omp for schedule(dynamic, 16)
        for (std::ptrdiff_t s = 0; s < static_cast<std::ptrdiff_t>(tc.sentences.size()); ++s) {
          const auto& sent = tc.sentences[s];
          const int n = static_cast<int>(sent.size());
          for (int pos = 0; pos < n; ++pos) {
            float progress = static_cast<float>(epoch) / params.epochs;
            float lr = params.learning_rate * std::max(1e-4f, 1.0f - progress);
            int reach = 1 + static_cast<int>(rng_below(rng, params.window));
            for (int off = -reach; off <= reach; ++off) {
              if (off == 0) continue;
              int ctx_pos = pos + off;
              if (ctx_pos < 0 || ctx_pos >= n) continue;
              loss_sum += train_pair(table, context_weights, sent[pos], sent[ctx_pos],
                                     params.negatives, tc.negative_cdf, lr, rng, scratch);
              ++pair_count;
            }
          }
        }
      }
      table.epoch_losses[epoch] = pair_count ? loss_sum / pair_count : 0.0;
    }
  }
  return table;
}

Centroid centroid(const NormalizedDocument& doc, const EmbeddingTable& table) {
  Centroid c;
  c.doc_id = doc.doc_id;
  c.values.assign(table.dim(), 0.0f);
  std::size_t in_vocab = 0;
  std::vector<double> acc(table.dim(), 0.0);
  for (const auto& tok : doc.tokens) {
    int idx = table.index_of(tok);
    if (idx < 0) continue;
    auto row = table.vector_at(idx);
    for (int j = 0; j < table.dim(); ++j) acc[j] += row[j];
    ++in_vocab;
  }
  if (in_vocab == 0) {
    c.degenerate = true;
    return c;
  }
  for (int j = 0; j < table.dim(); ++j)
    c.values[j] = static_cast<float>(acc[j] / static_cast<double>(in_vocab));
  return c;
}

std::vector<Centroid> compute_centroids_serial(std::span<const NormalizedDocument> docs,
                                               const EmbeddingTable& table) {
  std::vector<Centroid> out(docs.size());
  for (std::size_t i = 0; i < docs.size(); ++i) out[i] = centroid(docs[i], table);
  return out;
}

std::vector<Centroid> compute_centroids(std::span<const NormalizedDocument> docs,
                                        const EmbeddingTable& table) {
  std::vector<Centroid> out(docs.size());
#pragma omp parallel for schedule(dynamic, 64)
  for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(docs.size()); ++i)
    out[i] = centroid(docs[i], table);
  return out;
}

std::vector<std::pair<std::string, double>> nearest_tokens(const EmbeddingTable& table,
                                                           const std::string& token, int n) {
  int q = table.index_of(token);
  if (q < 0) throw Error("unknown token: " + token);
  if (n < 0) throw Error("n must be >= 0");

  auto qv = table.vector_at(q);
  double qnorm = 0.0;
  for (float x : qv) qnorm += static_cast<double>(x) * x;
  qnorm = std::sqrt(qnorm);

  std::vector<std::pair<std::string, double>> sims;
  sims.reserve(table.vocab_size());
  for (std::size_t i = 0; i < table.vocab_size(); ++i) {
    if (static_cast<int>(i) == q) continue;
    auto v = table.vector_at(static_cast<int>(i));
    double dot = 0.0, norm = 0.0;
    for (int j = 0; j < table.dim(); ++j) {
      dot += static_cast<double>(qv[j]) * v[j];
      norm += static_cast<double>(v[j]) * v[j];
    }
    norm = std::sqrt(norm);
    double sim = (qnorm == 0.0 || norm == 0.0) ? 0.0 : dot / (qnorm * norm);
    sims.emplace_back(table.tokens()[i], sim);
  }
  std::sort(sims.begin(), sims.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });
  if (static_cast<std::size_t>(n) < sims.size()) sims.resize(n);
  return sims;
}

void write_embeddings(const std::string& path, const EmbeddingTable& table,
                      const std::string& config_hash) {
  std::string out = "dim=" + std::to_string(table.dim()) +
                    " vocab=" + std::to_string(table.vocab_size()) +
                    " seed=" + std::to_string(table.seed()) + " config=" + config_hash +
                    " deterministic=" + (table.deterministic() ? "1" : "0") + "\n";
  for (std::size_t i = 0; i < table.vocab_size(); ++i) {
    out += table.tokens()[i];
    auto row = table.vector_at(static_cast<int>(i));
    for (float x : row) {
      out += ' ';
      out += format_float(x);
    }
    out += '\n';
  }
  write_text_file(path, out);
}

EmbeddingTable read_embeddings(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open embeddings file: " + path);
  std::string header;
  if (!std::getline(in, header)) throw Error("empty embeddings file: " + path);

  int dim = -1;
  std::size_t vocab = 0;
  std::uint64_t seed = 0;
  bool deterministic = true;
  for (const auto& field : split_ws(header)) {
    auto eq = field.find('=');
    if (eq == std::string::npos) throw Error("malformed embeddings header: " + header);
    std::string key = field.substr(0, eq), value = field.substr(eq + 1);
    if (key == "dim") dim = std::stoi(value);
    else if (key == "vocab") vocab = std::stoul(value);
    else if (key == "seed") seed = std::stoull(value);
    else if (key == "deterministic") deterministic = value != "0";
  }
  if (dim < 2) throw Error("embeddings header missing dim: " + path);

  std::vector<std::string> tokens;
  std::vector<std::vector<float>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    auto parts = split_ws(line);
    if (parts.size() != static_cast<std::size_t>(dim) + 1)
      throw Error("embeddings row has wrong arity: " + path);
    tokens.push_back(parts[0]);
    std::vector<float> row(dim);
    for (int j = 0; j < dim; ++j) {
      float v = 0;
      auto& s = parts[j + 1];
      auto res = std::from_chars(s.data(), s.data() + s.size(), v);
      if (res.ec != std::errc()) throw Error("bad float in embeddings file: " + s);
      row[j] = v;
    }
    rows.push_back(std::move(row));
  }
  if (tokens.size() != vocab) throw Error("embeddings vocab count mismatch: " + path);

  EmbeddingTable table(std::move(tokens), dim, seed, deterministic);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    auto dst = table.vector_at(static_cast<int>(i));
    std::copy(rows[i].begin(), rows[i].end(), dst.begin());
  }
  return table;
}

void write_centroids(const std::string& path, std::span<const Centroid> centroids,
                     const std::string& config_hash, std::uint64_t seed) {
  std::string out =
      "# moliere-centroids v1 config=" + config_hash + " seed=" + std::to_string(seed) + "\n";
  for (const auto& c : centroids) {
    out += c.doc_id;
    out += '\t';
    out += c.degenerate ? '1' : '0';
    for (float x : c.values) {
      out += ' ';
      out += format_float(x);
    }
    out += '\n';
  }
  write_text_file(path, out);
}

std::vector<Centroid> read_centroids(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open centroids file: " + path);
  std::vector<Centroid> out;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    auto tab = line.find('\t');
    if (tab == std::string::npos) throw Error("malformed centroid row: " + path);
    Centroid c;
    c.doc_id = line.substr(0, tab);
    auto rest = split_ws(std::string_view(line).substr(tab + 1));
    if (rest.empty()) throw Error("malformed centroid row: " + path);
    c.degenerate = rest[0] == "1";
    for (std::size_t j = 1; j < rest.size(); ++j) {
      float v = 0;
      auto res = std::from_chars(rest[j].data(), rest[j].data() + rest[j].size(), v);
      if (res.ec != std::errc()) throw Error("bad float in centroids file: " + rest[j]);
      c.values.push_back(v);
    }
    out.push_back(std::move(c));
  }
  return out;
}

}  // namespace moliere
