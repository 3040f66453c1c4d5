#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "moliere/corpus.hpp"
#include "moliere/embed.hpp"
#include "moliere/knn.hpp"
#include "moliere/phrases.hpp"
#include "moliere/query.hpp"
#include "moliere/topics.hpp"

namespace moliere {

// Flat key = value file, '#' comments, strings optionally double-quoted.
std::map<std::string, std::string> parse_flat_config(const std::string& text,
                                                     const std::string& origin);

struct PipelineConfig {
  // inputs
  std::string corpus_path;
  std::string stopwords_path;        // empty -> shipped default list
  std::string synonyms_path;
  std::string relations_path;
  std::string relation_weights_path; // empty -> shipped defaults
  std::string out_dir;

  // global
  std::uint64_t seed = 1;
  int threads = 0;  // 0 keeps the OpenMP default
  std::string ingest_mode = "strict";
  std::optional<Date> cutoff;
  bool keep_undated = false;

  PhraseParams phrase;
  EmbeddingParams embed;
  int knn_k = 10;
  std::string knn_method = "exact";
  double sigma = 2.0;
  QueryParams query;
  LdaParams lda;

  void validate() const;

  // canonical key=value rendering; its hash is the config hash embedded in
  // every artifact
  std::map<std::string, std::string> to_map() const;
  std::string config_hash() const;

  static PipelineConfig from_map(const std::map<std::string, std::string>& map,
                                 const std::string& origin);
  static PipelineConfig load(const std::string& path,
                             const std::vector<std::string>& overrides = {});
};

}  // namespace moliere
