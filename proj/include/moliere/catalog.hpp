#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "moliere/network.hpp"

namespace moliere {

// The 14 relation kinds carried by the keyword relation table (UMLS MRREL
// REL codes plus NONE for a blank field).
enum class RelationType {
  AQ, CHD, DEL, PAR, QB, RB, RN, RO, RQ, RU, SIB, SY, XR, NONE,
};

constexpr int kRelationTypeCount = 14;

std::string relation_type_name(RelationType t);
RelationType relation_type_from(const std::string& name);  // throws on unknown

struct Relation {
  std::string a, b;
  RelationType type = RelationType::RO;
};

struct KeywordCatalog {
  std::map<std::string, std::string> keywords;                 // id -> canonical name
  std::map<std::string, std::set<std::string>> synonyms;       // id -> synonym strings
  std::vector<Relation> relations;

  std::vector<NodeId> keyword_nodes() const;
};

using RelationWeights = std::map<RelationType, double>;

// parent/child 0.5, broader/narrower 0.6, everything else 0.8
RelationWeights default_relation_weights();

// synonyms TSV: keyword_id <TAB> synonym string
KeywordCatalog load_synonyms_tsv(const std::string& path);

// relations TSV: id1 <TAB> id2 <TAB> relation_type; endpoints are added to
// the catalog's keyword set when unseen (they participate via KK edges only).
void load_relations_tsv(const std::string& path, KeywordCatalog& catalog);

// relation weights TSV: relation_type <TAB> weight in [0,1]
RelationWeights load_relation_weights_tsv(const std::string& path);

// One KK edge per related keyword pair, weight = weights[type] * sigma.
// Parallel relations collapse to the minimum weight. Self-relations are
// dropped.
std::vector<Edge> keyword_graph_edges(const KeywordCatalog& catalog,
                                      const RelationWeights& weights, double sigma);

}  // namespace moliere
