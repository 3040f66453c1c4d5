#include "moliere/topics.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <numeric>
#include <set>

#include <nlohmann/json.hpp>

namespace moliere {

using json = nlohmann::json;

LdaSampler::LdaSampler(std::span<const NormalizedDocument> docs, const LdaParams& params)
    : params_(params) {
  if (params.num_topics < 2) throw Error("num_topics must be >= 2");
  if (params.iterations < 1) throw Error("iterations must be >= 1");
  if (params.effective_alpha() <= 0.0 || params.beta <= 0.0)
    throw Error("alpha and beta must be positive");
  if (docs.empty()) throw Error("cannot fit topics on an empty corpus");

  std::set<std::string> vocab_set;
  for (const auto& doc : docs)
    for (const auto& tok : doc.tokens) vocab_set.insert(tok);
  if (vocab_set.empty()) throw Error("cannot fit topics on an empty vocabulary");
  vocab_.assign(vocab_set.begin(), vocab_set.end());
  std::map<std::string, int> vocab_index;
  for (std::size_t i = 0; i < vocab_.size(); ++i) vocab_index[vocab_[i]] = static_cast<int>(i);

  const int T = params_.num_topics;
  const std::size_t D = docs.size();
  doc_ids_.reserve(D);
  doc_tokens_.resize(D);
  assignments_.resize(D);
  doc_topic_counts_.assign(D, std::vector<int>(T, 0));
  word_topic_counts_.assign(vocab_.size(), std::vector<int>(T, 0));
  topic_counts_.assign(T, 0);

  std::set<std::string> id_set;
  for (std::size_t d = 0; d < D; ++d) {
    doc_ids_.push_back(docs[d].doc_id);
    if (!id_set.insert(docs[d].doc_id).second)
      throw Error("duplicate doc_id in topic corpus: " + docs[d].doc_id);
    doc_tokens_[d].reserve(docs[d].tokens.size());
    for (const auto& tok : docs[d].tokens) doc_tokens_[d].push_back(vocab_index[tok]);
    total_tokens_ += static_cast<int>(doc_tokens_[d].size());
  }

  doc_order_.resize(D);
  std::iota(doc_order_.begin(), doc_order_.end(), 0);
  std::sort(doc_order_.begin(), doc_order_.end(),
            [&](int a, int b) { return doc_ids_[a] < doc_ids_[b]; });

  // one RNG stream per document keyed on its id, consumed in doc_id order;
  // input order therefore cannot influence the trajectory
  doc_rngs_.reserve(D);
  for (std::size_t d = 0; d < D; ++d)
    doc_rngs_.emplace_back(derive_seed(params_.seed, "lda-doc-" + doc_ids_[d]));

  for (int d : doc_order_) {
    auto& rng = doc_rngs_[d];
    assignments_[d].resize(doc_tokens_[d].size());
    for (std::size_t pos = 0; pos < doc_tokens_[d].size(); ++pos) {
      int topic = static_cast<int>(rng_below(rng, T));
      assignments_[d][pos] = topic;
      int w = doc_tokens_[d][pos];
      ++word_topic_counts_[w][topic];
      ++doc_topic_counts_[d][topic];
      ++topic_counts_[topic];
    }
  }
}

std::vector<double> LdaSampler::token_conditional(int doc, int position) const {
  const int T = params_.num_topics;
  const double alpha = params_.effective_alpha();
  const double beta = params_.beta;
  const double vbeta = static_cast<double>(vocab_.size()) * beta;
  int w = doc_tokens_[doc][position];
  int old_topic = assignments_[doc][position];

  std::vector<double> p(T);
  for (int t = 0; t < T; ++t) {
    int nwt = word_topic_counts_[w][t] - (t == old_topic ? 1 : 0);
    int ndt = doc_topic_counts_[doc][t] - (t == old_topic ? 1 : 0);
    int nt = topic_counts_[t] - (t == old_topic ? 1 : 0);
    p[t] = (nwt + beta) * (ndt + alpha) / (nt + vbeta);
  }
  return p;
}

int LdaSampler::sample_topic(int doc, int position, std::mt19937_64& rng) {
  const int T = params_.num_topics;
  auto p = token_conditional(doc, position);
  for (int t = 1; t < T; ++t) p[t] += p[t - 1];
  double u = rng_unit(rng) * p[T - 1];
  for (int t = 0; t < T; ++t)
    if (u < p[t]) return t;
  return T - 1;
}

void LdaSampler::sweep() {
  for (int d : doc_order_) {
    auto& rng = doc_rngs_[d];
    for (std::size_t pos = 0; pos < doc_tokens_[d].size(); ++pos) {
      int w = doc_tokens_[d][pos];
      int old_topic = assignments_[d][pos];
      int new_topic = sample_topic(d, static_cast<int>(pos), rng);
      if (new_topic == old_topic) continue;
      --word_topic_counts_[w][old_topic];
      --doc_topic_counts_[d][old_topic];
      --topic_counts_[old_topic];
      assignments_[d][pos] = new_topic;
      ++word_topic_counts_[w][new_topic];
      ++doc_topic_counts_[d][new_topic];
      ++topic_counts_[new_topic];
    }
  }
}

TopicModel LdaSampler::finalize() const {
  const int T = params_.num_topics;
  const std::size_t V = vocab_.size();
  const double alpha = params_.effective_alpha();
  const double beta = params_.beta;
  const double vbeta = static_cast<double>(V) * beta;

  TopicModel model;
  model.params = params_;
  model.seed = params_.seed;
  model.vocab = vocab_;
  model.doc_ids = doc_ids_;
  model.topic_counts = topic_counts_;
  model.topic_word_counts.assign(T, std::vector<int>(V, 0));
  for (std::size_t w = 0; w < V; ++w)
    for (int t = 0; t < T; ++t) model.topic_word_counts[t][w] = word_topic_counts_[w][t];

  model.topic_word.assign(T, std::vector<double>(V, 0.0));
  for (int t = 0; t < T; ++t) {
    double denom = topic_counts_[t] + vbeta;
    for (std::size_t w = 0; w < V; ++w)
      model.topic_word[t][w] = (word_topic_counts_[w][t] + beta) / denom;
  }
  model.doc_topic.assign(doc_ids_.size(), std::vector<double>(T, 0.0));
  for (std::size_t d = 0; d < doc_ids_.size(); ++d) {
    double denom = static_cast<double>(doc_tokens_[d].size()) + T * alpha;
    for (int t = 0; t < T; ++t)
      model.doc_topic[d][t] = (doc_topic_counts_[d][t] + alpha) / denom;
  }
  return model;
}

TopicModel fit_lda(std::span<const NormalizedDocument> docs, const LdaParams& params) {
  LdaSampler sampler(docs, params);
  sampler.run();
  return sampler.finalize();
}

std::vector<std::pair<std::string, double>> top_words(const TopicModel& model, int topic, int m) {
  if (topic < 0 || topic >= model.params.num_topics)
    throw Error("topic index out of range: " + std::to_string(topic));
  if (m < 0) throw Error("m must be >= 0");
  std::vector<std::pair<std::string, double>> out;
  out.reserve(model.vocab.size());
  for (std::size_t w = 0; w < model.vocab.size(); ++w)
    out.emplace_back(model.vocab[w], model.topic_word[topic][w]);
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });
  if (static_cast<std::size_t>(m) < out.size()) out.resize(m);
  return out;
}

TermDistributionReport term_distribution(const TopicModel& model, const std::string& pattern) {
  if (pattern.empty()) throw Error("pattern must be non-empty");
  const int T = model.params.num_topics;
  TermDistributionReport report;
  report.pattern = pattern;
  report.topic_mass.assign(T, 0.0);
  report.top30_match_counts.assign(T, 0);

  std::vector<std::size_t> matched;
  for (std::size_t w = 0; w < model.vocab.size(); ++w) {
    if (model.vocab[w].find(pattern) != std::string::npos) {
      matched.push_back(w);
      report.matched_terms.push_back(model.vocab[w]);
    }
  }
  for (int t = 0; t < T; ++t)
    for (std::size_t w : matched) report.topic_mass[t] += model.topic_word[t][w];

  for (int t = 0; t < T; ++t) {
    auto top = top_words(model, t, 30);
    int count = 0;
    for (const auto& [tok, prob] : top)
      if (tok.find(pattern) != std::string::npos) ++count;
    report.top30_match_counts[t] = count;
  }
  return report;
}

QueryComparison compare_queries(const TermDistributionReport& a, const TermDistributionReport& b) {
  if (a.pattern != b.pattern)
    throw Error("pattern mismatch: '" + a.pattern + "' vs '" + b.pattern + "'");
  QueryComparison cmp;
  cmp.pattern = a.pattern;
  cmp.mass_a = a.topic_mass;
  cmp.mass_b = b.topic_mass;
  cmp.total_a = std::accumulate(a.topic_mass.begin(), a.topic_mass.end(), 0.0);
  cmp.total_b = std::accumulate(b.topic_mass.begin(), b.topic_mass.end(), 0.0);
  return cmp;
}

void write_model(const std::string& path, const TopicModel& model, const std::string& config_hash) {
  json doc;
  doc["config"] = config_hash;
  doc["seed"] = model.seed;
  doc["params"] = {{"num_topics", model.params.num_topics},
                   {"iterations", model.params.iterations},
                   {"alpha", model.params.effective_alpha()},
                   {"beta", model.params.beta}};
  doc["vocab"] = model.vocab;
  doc["doc_ids"] = model.doc_ids;
  doc["topic_word"] = model.topic_word;
  doc["doc_topic"] = model.doc_topic;
  doc["topic_word_counts"] = model.topic_word_counts;
  doc["topic_counts"] = model.topic_counts;
  write_text_file(path, doc.dump() + "\n");
}

TopicModel read_model(const std::string& path) {
  json doc = json::parse(read_text_file(path));
  TopicModel model;
  model.seed = doc.at("seed").get<std::uint64_t>();
  model.params.seed = model.seed;
  model.params.num_topics = doc.at("params").at("num_topics").get<int>();
  model.params.iterations = doc.at("params").at("iterations").get<int>();
  model.params.alpha = doc.at("params").at("alpha").get<double>();
  model.params.beta = doc.at("params").at("beta").get<double>();
  model.vocab = doc.at("vocab").get<std::vector<std::string>>();
  model.doc_ids = doc.at("doc_ids").get<std::vector<std::string>>();
  model.topic_word = doc.at("topic_word").get<std::vector<std::vector<double>>>();
  model.doc_topic = doc.at("doc_topic").get<std::vector<std::vector<double>>>();
  model.topic_word_counts = doc.at("topic_word_counts").get<std::vector<std::vector<int>>>();
  model.topic_counts = doc.at("topic_counts").get<std::vector<int>>();
  return model;
}

void write_report(const std::string& path, const TermDistributionReport& report,
                  const std::string& config_hash, std::uint64_t seed) {
  std::string out = "# moliere-term-report v1 pattern=" + report.pattern +
                    " config=" + config_hash + " seed=" + std::to_string(seed) + "\n";
  out += "# matched_terms:";
  for (const auto& term : report.matched_terms) out += " " + term;
  out += "\ntopic\tmass\ttop30_matches\n";
  for (std::size_t t = 0; t < report.topic_mass.size(); ++t)
    out += std::to_string(t) + "\t" + format_g9(report.topic_mass[t]) + "\t" +
           std::to_string(report.top30_match_counts[t]) + "\n";
  write_text_file(path, out);
}

TermDistributionReport read_report(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open report file: " + path);
  TermDistributionReport report;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.rfind("# moliere-term-report", 0) == 0) {
      for (const auto& field : split_ws(line)) {
        if (field.rfind("pattern=", 0) == 0) report.pattern = field.substr(8);
      }
      continue;
    }
    if (line.rfind("# matched_terms:", 0) == 0) {
      auto terms = split_ws(line.substr(16));
      report.matched_terms = terms;
      continue;
    }
    if (line.empty() || line[0] == '#' || line.rfind("topic\t", 0) == 0) continue;
    auto cols = split_char(line, '\t');
    if (cols.size() != 3) throw Error(path + ":" + std::to_string(line_no) + ": expected 3 columns");
    report.topic_mass.push_back(std::strtod(cols[1].c_str(), nullptr));
    report.top30_match_counts.push_back(std::stoi(cols[2]));
  }
  if (report.pattern.empty()) throw Error("report file missing pattern header: " + path);
  return report;
}

std::string format_comparison(const QueryComparison& cmp) {
  std::string out = "pattern: " + cmp.pattern + "\n";
  out += "topic\tmass_a\tmass_b\n";
  std::size_t rows = std::max(cmp.mass_a.size(), cmp.mass_b.size());
  for (std::size_t t = 0; t < rows; ++t) {
    double a = t < cmp.mass_a.size() ? cmp.mass_a[t] : 0.0;
    double b = t < cmp.mass_b.size() ? cmp.mass_b[t] : 0.0;
    out += std::to_string(t) + "\t" + format_g9(a) + "\t" + format_g9(b) + "\n";
  }
  out += "total\t" + format_g9(cmp.total_a) + "\t" + format_g9(cmp.total_b) + "\n";
  return out;
}

}  // namespace moliere
