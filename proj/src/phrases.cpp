#include "moliere/phrases.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace moliere {

namespace {

std::string join_key(std::span<const std::string> tokens, std::size_t pos, std::size_t len) {
  std::string key = tokens[pos];
  for (std::size_t i = 1; i < len; ++i) {
    key += ' ';
    key += tokens[pos + i];
  }
  return key;
}

}  // namespace

void PhraseLexicon::add(PhraseEntry entry) {
  max_components_ = std::max(max_components_, entry.components.size());
  std::string key = join(entry.components, " ");
  entries_[std::move(key)] = std::move(entry);
}

const PhraseEntry* PhraseLexicon::find(std::span<const std::string> tokens, std::size_t pos,
                                       std::size_t len) const {
  auto it = entries_.find(join_key(tokens, pos, len));
  return it == entries_.end() ? nullptr : &it->second;
}

bool PhraseLexicon::contains(const std::vector<std::string>& components) const {
  return entries_.count(join(components, " ")) > 0;
}

std::unordered_map<std::string, std::uint64_t> count_ngrams_serial(
    std::span<const NormalizedDocument> docs, int max_len) {
  std::unordered_map<std::string, std::uint64_t> counts;
  for (const auto& doc : docs) {
    const auto& t = doc.tokens;
    for (std::size_t i = 0; i < t.size(); ++i) {
      std::string key;
      for (int n = 1; n <= max_len && i + n <= t.size(); ++n) {
        if (n == 1) {
          key = t[i];
        } else {
          key += ' ';
          key += t[i + n - 1];
        }
        ++counts[key];
      }
    }
  }
  return counts;
}

std::unordered_map<std::string, std::uint64_t> count_ngrams(
    std::span<const NormalizedDocument> docs, int max_len) {
#ifdef _OPENMP
  int threads = omp_get_max_threads();
#else
  int threads = 1;
#endif
  if (threads <= 1 || docs.size() < 64) return count_ngrams_serial(docs, max_len);

  std::vector<std::unordered_map<std::string, std::uint64_t>> partial(threads);
#pragma omp parallel num_threads(threads)
  {
#ifdef _OPENMP
    int tid = omp_get_thread_num();
#else
    int tid = 0;
#endif
    auto& local = partial[tid];
#pragma omp for schedule(dynamic, 32)
    for (std::ptrdiff_t d = 0; d < static_cast<std::ptrdiff_t>(docs.size()); ++d) {
      const auto& t = docs[d].tokens;
      for (std::size_t i = 0; i < t.size(); ++i) {
        std::string key;
        for (int n = 1; n <= max_len && i + n <= t.size(); ++n) {
          if (n == 1) {
            key = t[i];
          } else {
            key += ' ';
            key += t[i + n - 1];
          }
          ++local[key];
        }
      }
    }
  }
  auto merged = std::move(partial[0]);
  for (int tnum = 1; tnum < threads; ++tnum)
    for (auto& [k, v] : partial[tnum]) merged[k] += v;
  return merged;
}

double significance(std::uint64_t count_ab, std::uint64_t count_a, std::uint64_t count_b,
                    std::uint64_t total_positions) {
  if (count_ab == 0) return 0.0;
  double mu = static_cast<double>(count_a) * static_cast<double>(count_b) /
              static_cast<double>(total_positions);
  return (static_cast<double>(count_ab) - mu) / std::sqrt(static_cast<double>(count_ab));
}

namespace {

// Working state for the merge loop: documents as sequences of units, where a
// unit carries its original word components.
struct Unit {
  std::string token;
  int words = 1;
};

struct PairStats {
  std::uint64_t count = 0;
};

}  // namespace

PhraseLexicon mine_phrases(std::span<const NormalizedDocument> docs, const PhraseParams& params) {
  if (params.min_freq < 1) throw Error("min_freq must be >= 1");
  if (params.max_len < 2) throw Error("max_len must be >= 2");

  std::vector<std::vector<Unit>> seqs(docs.size());
  for (std::size_t i = 0; i < docs.size(); ++i) {
    seqs[i].reserve(docs[i].tokens.size());
    for (const auto& t : docs[i].tokens) seqs[i].push_back({t, 1});
  }

  PhraseLexicon lexicon;
  // merged token -> original word components (plain tokens map to themselves)
  std::unordered_map<std::string, std::vector<std::string>> unit_components;
  auto components_of = [&](const std::string& tok) -> std::vector<std::string> {
    auto it = unit_components.find(tok);
    if (it != unit_components.end()) return it->second;
    return {tok};
  };
  auto words_of = [&](const std::string& tok) -> int {
    auto it = unit_components.find(tok);
    return it == unit_components.end() ? 1 : static_cast<int>(it->second.size());
  };

  while (true) {
    std::unordered_map<std::string, std::uint64_t> unigram;
    std::unordered_map<std::string, PairStats> pairs;
    std::uint64_t total_positions = 0;
    for (const auto& seq : seqs) {
      total_positions += seq.size();
      for (std::size_t i = 0; i < seq.size(); ++i) {
        ++unigram[seq[i].token];
        if (i + 1 < seq.size()) {
          std::string key = seq[i].token + ' ' + seq[i + 1].token;
          ++pairs[key].count;
        }
      }
    }
    if (total_positions == 0) break;

    // best candidate: highest significance, ties by merged token
    bool found = false;
    double best_sig = 0.0;
    std::string best_a, best_b, best_merged;
    std::uint64_t best_count = 0;
    for (const auto& [key, stats] : pairs) {
      if (stats.count < static_cast<std::uint64_t>(params.min_freq)) continue;
      auto space = key.find(' ');
      std::string a = key.substr(0, space);
      std::string b = key.substr(space + 1);
      if (words_of(a) + words_of(b) > params.max_len) continue;
      double sig = significance(stats.count, unigram[a], unigram[b], total_positions);
      if (sig < params.min_significance) continue;
      std::string merged = a + '_' + b;
      if (!found || sig > best_sig || (sig == best_sig && merged < best_merged)) {
        found = true;
        best_sig = sig;
        best_a = a;
        best_b = b;
        best_merged = merged;
        best_count = stats.count;
      }
    }
    if (!found) break;

    auto merged_components = components_of(best_a);
    {
      auto tail = components_of(best_b);
      merged_components.insert(merged_components.end(), tail.begin(), tail.end());
    }
    unit_components[best_merged] = merged_components;
    int merged_words = static_cast<int>(merged_components.size());

    // rewrite sequences left-to-right, non-overlapping
    for (auto& seq : seqs) {
      std::vector<Unit> next;
      next.reserve(seq.size());
      std::size_t i = 0;
      while (i < seq.size()) {
        if (i + 1 < seq.size() && seq[i].token == best_a && seq[i + 1].token == best_b) {
          next.push_back({best_merged, merged_words});
          i += 2;
        } else {
          next.push_back(seq[i]);
          ++i;
        }
      }
      seq = std::move(next);
    }

    PhraseEntry entry;
    entry.components = std::move(merged_components);
    entry.merged = best_merged;
    entry.frequency = best_count;
    lexicon.add(std::move(entry));
  }
  return lexicon;
}

NormalizedDocument apply_lexicon(const NormalizedDocument& doc, const PhraseLexicon& lex) {
  if (lex.size() == 0) return doc;
  NormalizedDocument out;
  out.doc_id = doc.doc_id;
  out.tokens.reserve(doc.tokens.size());
  std::size_t i = 0;
  const std::size_t n = doc.tokens.size();
  const std::size_t max_len = lex.max_components();
  while (i < n) {
    const PhraseEntry* hit = nullptr;
    std::size_t hit_len = 0;
    std::size_t longest = std::min(max_len, n - i);
    for (std::size_t len = longest; len >= 2; --len) {
      if (const PhraseEntry* e = lex.find(doc.tokens, i, len)) {
        hit = e;
        hit_len = len;
        break;
      }
    }
    if (hit) {
      out.tokens.push_back(hit->merged);
      i += hit_len;
    } else {
      out.tokens.push_back(doc.tokens[i]);
      ++i;
    }
  }
  return out;
}

std::vector<NormalizedDocument> apply_lexicon_all(std::span<const NormalizedDocument> docs,
                                                  const PhraseLexicon& lex) {
  std::vector<NormalizedDocument> out(docs.size());
#pragma omp parallel for schedule(dynamic, 64)
  for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(docs.size()); ++i)
    out[i] = apply_lexicon(docs[i], lex);
  return out;
}

void write_lexicon(const std::string& path, const PhraseLexicon& lex,
                   const std::string& config_hash, std::uint64_t seed) {
  std::string out = "# moliere-lexicon v1 config=" + config_hash + " seed=" + std::to_string(seed) + "\n";
  for (const auto& [key, entry] : lex.entries()) {
    out += key;
    out += '\t';
    out += entry.merged;
    out += '\t';
    out += std::to_string(entry.frequency);
    out += '\n';
  }
  write_text_file(path, out);
}

PhraseLexicon read_lexicon(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open lexicon file: " + path);
  PhraseLexicon lex;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    auto cols = split_char(line, '\t');
    if (cols.size() != 3) throw Error(path + ":" + std::to_string(line_no) + ": expected 3 columns");
    PhraseEntry entry;
    entry.components = split_ws(cols[0]);
    entry.merged = cols[1];
    entry.frequency = std::stoull(cols[2]);
    if (entry.components.size() < 2)
      throw Error(path + ":" + std::to_string(line_no) + ": phrase must have >= 2 components");
    if (join(entry.components, "_") != entry.merged)
      throw Error(path + ":" + std::to_string(line_no) + ": merged token does not match components");
    lex.add(std::move(entry));
  }
  return lex;
}

}  // namespace moliere
