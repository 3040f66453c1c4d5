#include "moliere/catalog.hpp"

#include <algorithm>
#include <fstream>

namespace moliere {

namespace {

const char* kRelationNames[kRelationTypeCount] = {
    "AQ", "CHD", "DEL", "PAR", "QB", "RB", "RN", "RO", "RQ", "RU", "SIB", "SY", "XR", "NONE",
};

}  // namespace

std::string relation_type_name(RelationType t) {
  return kRelationNames[static_cast<int>(t)];
}

RelationType relation_type_from(const std::string& name) {
  for (int i = 0; i < kRelationTypeCount; ++i)
    if (name == kRelationNames[i]) return static_cast<RelationType>(i);
  throw Error("unknown relation type: " + name);
}

std::vector<NodeId> KeywordCatalog::keyword_nodes() const {
  std::vector<NodeId> out;
  out.reserve(keywords.size());
  for (const auto& [id, name] : keywords) out.push_back(NodeId::keyword(id));
  return out;
}

RelationWeights default_relation_weights() {
  RelationWeights w;
  for (int i = 0; i < kRelationTypeCount; ++i) w[static_cast<RelationType>(i)] = 0.8;
  w[RelationType::PAR] = 0.5;
  w[RelationType::CHD] = 0.5;
  w[RelationType::RB] = 0.6;
  w[RelationType::RN] = 0.6;
  return w;
}

KeywordCatalog load_synonyms_tsv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open synonyms file: " + path);
  KeywordCatalog catalog;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    auto cols = split_char(line, '\t');
    if (cols.size() != 2 || cols[0].empty() || cols[1].empty())
      throw Error(path + ":" + std::to_string(line_no) + ": expected 'id<TAB>synonym'");
    if (!catalog.keywords.count(cols[0])) catalog.keywords[cols[0]] = cols[1];
    catalog.synonyms[cols[0]].insert(cols[1]);
  }
  return catalog;
}

void load_relations_tsv(const std::string& path, KeywordCatalog& catalog) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open relations file: " + path);
  std::string line;
  int line_no = 0;
  std::vector<std::string> bad_rows;
  std::vector<Relation> parsed;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    auto cols = split_char(line, '\t');
    if (cols.size() != 3 || cols[0].empty() || cols[1].empty()) {
      bad_rows.push_back(std::to_string(line_no) + ": malformed row");
      continue;
    }
    try {
      parsed.push_back({cols[0], cols[1], relation_type_from(cols[2])});
    } catch (const Error&) {
      bad_rows.push_back(std::to_string(line_no) + ": unknown relation type '" + cols[2] + "'");
    }
  }
  if (!bad_rows.empty()) {
    std::string msg = path + ": " + std::to_string(bad_rows.size()) + " bad relation row(s):";
    for (const auto& r : bad_rows) msg += "\n  line " + r;
    throw Error(msg);
  }
  for (auto& rel : parsed) {
    if (!catalog.keywords.count(rel.a)) catalog.keywords[rel.a] = rel.a;
    if (!catalog.keywords.count(rel.b)) catalog.keywords[rel.b] = rel.b;
    catalog.relations.push_back(std::move(rel));
  }
}

RelationWeights load_relation_weights_tsv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open relation weights file: " + path);
  RelationWeights weights = default_relation_weights();
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    auto cols = split_char(line, '\t');
    if (cols.size() != 2)
      throw Error(path + ":" + std::to_string(line_no) + ": expected 'type<TAB>weight'");
    RelationType t = relation_type_from(cols[0]);
    double w = std::strtod(cols[1].c_str(), nullptr);
    if (w < 0.0 || w > 1.0)
      throw Error(path + ":" + std::to_string(line_no) + ": weight outside [0,1]");
    weights[t] = w;
  }
  return weights;
}

std::vector<Edge> keyword_graph_edges(const KeywordCatalog& catalog, const RelationWeights& weights,
                                      double sigma) {
  if (sigma <= 0.0) throw Error("sigma must be positive");
  std::vector<std::string> missing;
  std::map<std::pair<std::string, std::string>, double> best;
  for (std::size_t i = 0; i < catalog.relations.size(); ++i) {
    const auto& rel = catalog.relations[i];
    auto it = weights.find(rel.type);
    if (it == weights.end()) {
      missing.push_back("relation " + std::to_string(i) + " (" + rel.a + ", " + rel.b + ", " +
                        relation_type_name(rel.type) + ")");
      continue;
    }
    if (rel.a == rel.b) continue;
    auto key = std::minmax(rel.a, rel.b);
    double w = quantize9(it->second * sigma);
    auto [pos, inserted] = best.emplace(key, w);
    if (!inserted) pos->second = std::min(pos->second, w);
  }
  if (!missing.empty()) {
    std::string msg = "relation types without weights:";
    for (const auto& m : missing) msg += "\n  " + m;
    throw Error(msg);
  }
  std::vector<Edge> edges;
  edges.reserve(best.size());
  for (const auto& [key, w] : best)
    edges.push_back({NodeId::keyword(key.first), NodeId::keyword(key.second), w, EdgeClass::KK});
  return edges;
}

}  // namespace moliere
