#include "moliere/trie.hpp"

#include <algorithm>
#include <deque>
#include <fstream>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace moliere {

SynonymTrie::SynonymTrie() { nodes_.emplace_back(); }

void SynonymTrie::add(std::span<const std::string> tokens, const std::string& keyword_id) {
  if (tokens.empty()) throw Error("cannot add empty synonym for keyword " + keyword_id);
  int kw;
  auto it = keyword_index_.find(keyword_id);
  if (it == keyword_index_.end()) {
    kw = static_cast<int>(keyword_ids_.size());
    keyword_index_[keyword_id] = kw;
    keyword_ids_.push_back(keyword_id);
  } else {
    kw = it->second;
  }

  int state = 0;
  for (const auto& tok : tokens) {
    auto [pos, inserted] = nodes_[state].children.emplace(tok, 0);
    if (inserted) {
      pos->second = static_cast<int>(nodes_.size());
      nodes_.emplace_back();
    }
    state = pos->second;
  }
  auto& ids = nodes_[state].ids;
  if (std::find(ids.begin(), ids.end(), kw) == ids.end()) {
    ids.push_back(kw);
    std::sort(ids.begin(), ids.end());
  }
  compiled_ = false;
}

void SynonymTrie::compile() {
  std::deque<int> queue;
  nodes_[0].suffix = 0;
  nodes_[0].output = -1;
  for (auto& [tok, child] : nodes_[0].children) {
    nodes_[child].suffix = 0;
    nodes_[child].output = -1;
    queue.push_back(child);
  }
  while (!queue.empty()) {
    int u = queue.front();
    queue.pop_front();
    nodes_[u].output = !nodes_[nodes_[u].suffix].ids.empty()
                           ? nodes_[u].suffix
                           : nodes_[nodes_[u].suffix].output;
    for (auto& [tok, child] : nodes_[u].children) {
      // longest proper suffix of (path(u) + tok)
      int s = nodes_[u].suffix;
      while (true) {
        auto it = nodes_[s].children.find(tok);
        if (it != nodes_[s].children.end() && it->second != child) {
          nodes_[child].suffix = it->second;
          break;
        }
        if (s == 0) {
          nodes_[child].suffix = 0;
          break;
        }
        s = nodes_[s].suffix;
      }
      queue.push_back(child);
    }
  }
  compiled_ = true;
}

int SynonymTrie::next_state(int state, const std::string& token) const {
  while (true) {
    auto it = nodes_[state].children.find(token);
    if (it != nodes_[state].children.end()) return it->second;
    if (state == 0) return 0;
    state = nodes_[state].suffix;
  }
}

std::map<int, int> SynonymTrie::match(std::span<const std::string> tokens) const {
  if (!compiled_) throw Error("trie not compiled");
  std::map<int, int> counts;
  int state = 0;
  for (const auto& tok : tokens) {
    state = next_state(state, tok);
    for (int n = state; n >= 0; n = nodes_[n].output)
      for (int kw : nodes_[n].ids) ++counts[kw];
  }
  return counts;
}

std::vector<std::string> SynonymTrie::ids_at(std::span<const std::string> tokens) const {
  int state = 0;
  for (const auto& tok : tokens) {
    auto it = nodes_[state].children.find(tok);
    if (it == nodes_[state].children.end()) return {};
    state = it->second;
  }
  std::vector<std::string> out;
  for (int kw : nodes_[state].ids) out.push_back(keyword_ids_[kw]);
  return out;
}

TrieBuildResult build_synonym_trie(const KeywordCatalog& catalog) {
  TrieBuildResult result;
  StopwordSet none;
  for (const auto& [id, syns] : catalog.synonyms) {
    for (const auto& syn : syns) {
      auto tokens = normalize_text(syn, none);
      if (tokens.empty()) {
        result.skipped.push_back({id, syn});
        continue;
      }
      result.trie.add(tokens, id);
    }
  }
  result.trie.compile();
  return result;
}

std::uint64_t TagCounts::total_for(int keyword_idx) const {
  std::uint64_t total = 0;
  for (const auto& row : doc_counts)
    for (const auto& [kw, count] : row)
      if (kw == keyword_idx) total += count;
  return total;
}

namespace {

std::vector<std::pair<int, int>> tag_one(const Document& doc, const SynonymTrie& trie,
                                         const StopwordSet& none) {
  std::string combined = doc.title;
  if (!combined.empty() && !doc.abstract_text.empty()) combined += " ";
  combined += doc.abstract_text;
  auto counts = trie.match(normalize_text(combined, none));
  return {counts.begin(), counts.end()};
}

}  // namespace

TagCounts tag_abstracts_serial(std::span<const Document> docs, const SynonymTrie& trie) {
  TagCounts out;
  out.keyword_ids = trie.keyword_ids();
  out.doc_ids.reserve(docs.size());
  out.doc_counts.resize(docs.size());
  StopwordSet none;
  for (std::size_t i = 0; i < docs.size(); ++i) {
    out.doc_ids.push_back(docs[i].doc_id);
    out.doc_counts[i] = tag_one(docs[i], trie, none);
  }
  return out;
}

TagCounts tag_abstracts(std::span<const Document> docs, const SynonymTrie& trie) {
  TagCounts out;
  out.keyword_ids = trie.keyword_ids();
  out.doc_ids.resize(docs.size());
  out.doc_counts.resize(docs.size());
  StopwordSet none;
#pragma omp parallel for schedule(dynamic, 32)
  for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(docs.size()); ++i) {
    out.doc_ids[i] = docs[i].doc_id;
    out.doc_counts[i] = tag_one(docs[i], trie, none);
  }
  return out;
}

void write_tag_counts(const std::string& path, const TagCounts& counts,
                      const std::string& config_hash, std::uint64_t seed) {
  std::string out =
      "# moliere-tagcounts v1 config=" + config_hash + " seed=" + std::to_string(seed) + "\n";
  for (std::size_t d = 0; d < counts.doc_ids.size(); ++d)
    for (const auto& [kw, count] : counts.doc_counts[d])
      out += counts.doc_ids[d] + "\t" + counts.keyword_ids[kw] + "\t" + std::to_string(count) + "\n";
  write_text_file(path, out);
}

TagCounts read_tag_counts(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open tag counts file: " + path);
  TagCounts out;
  std::map<std::string, int> doc_index, kw_index;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    auto cols = split_char(line, '\t');
    if (cols.size() != 3) throw Error(path + ":" + std::to_string(line_no) + ": expected 3 columns");
    auto [dpos, dnew] = doc_index.emplace(cols[0], static_cast<int>(out.doc_ids.size()));
    if (dnew) {
      out.doc_ids.push_back(cols[0]);
      out.doc_counts.emplace_back();
    }
    auto [kpos, knew] = kw_index.emplace(cols[1], static_cast<int>(out.keyword_ids.size()));
    if (knew) out.keyword_ids.push_back(cols[1]);
    out.doc_counts[dpos->second].emplace_back(kpos->second, std::stoi(cols[2]));
  }
  for (auto& row : out.doc_counts) std::sort(row.begin(), row.end());
  return out;
}

}  // namespace moliere
