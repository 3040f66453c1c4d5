#include "moliere/query.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <limits>
#include <map>
#include <set>
#include <unordered_map>

#include <nlohmann/json.hpp>

#include "moliere/skew_heap.hpp"

namespace moliere {

using json = nlohmann::json;
namespace fs = std::filesystem;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct QueueEntry {
  double dist;
  int node;
  friend bool operator<(const QueueEntry& a, const QueueEntry& b) {
    if (a.dist != b.dist) return a.dist < b.dist;
    return a.node < b.node;
  }
};

}  // namespace

PathResult shortest_path(const KnowledgeNetwork& net, const NodeId& source, const NodeId& target) {
  int s = net.index_of(source);
  int t = net.index_of(target);
  if (s < 0) throw Error("unknown node: " + source.serialize());
  if (t < 0) throw Error("unknown node: " + target.serialize());
  if (s == t) throw Error("source and target must differ");

  std::vector<double> dist(net.node_count(), kInf);
  std::vector<int> pred(net.node_count(), -1);
  std::vector<char> done(net.node_count(), 0);
  SkewHeap<QueueEntry> heap;
  dist[s] = 0.0;
  heap.push({0.0, s});

  while (!heap.empty()) {
    auto [d, u] = heap.pop();
    if (done[u]) continue;  // lazy deletion
    done[u] = 1;
    if (u == t) break;
    for (const auto& he : net.neighbors(u)) {
      if (done[he.to]) continue;
      double nd = d + he.weight;
      if (nd < dist[he.to]) {
        dist[he.to] = nd;
        pred[he.to] = u;
        heap.push({nd, he.to});
      } else if (nd == dist[he.to] && pred[he.to] >= 0 &&
                 net.node(u).serialize() < net.node(pred[he.to]).serialize()) {
        pred[he.to] = u;
      }
    }
  }

  PathResult result;
  if (dist[t] == kInf) return result;
  result.found = true;
  result.total_weight = dist[t];
  std::vector<int> chain;
  for (int v = t; v >= 0; v = pred[v]) chain.push_back(v);
  std::reverse(chain.begin(), chain.end());
  for (std::size_t i = 0; i < chain.size(); ++i) {
    result.nodes.push_back(net.node(chain[i]));
    if (i + 1 < chain.size()) {
      for (const auto& he : net.neighbors(chain[i]))
        if (he.to == chain[i + 1]) {
          result.edge_weights.push_back(he.weight);
          break;
        }
    }
  }
  return result;
}

AbstractCloud extend_cloud(const KnowledgeNetwork& net, const PathResult& path,
                           const QueryParams& params) {
  if (params.cloud_size < 0 || params.pair_cap < 0)
    throw Error("cloud_size and pair_cap must be >= 0");

  AbstractCloud cloud;

  std::vector<int> seeds;
  for (const auto& node : path.nodes) {
    int idx = net.index_of(node);
    if (idx < 0) throw Error("path node missing from network: " + node.serialize());
    if (node.kind == NodeKind::Abstract) {
      seeds.push_back(idx);
      cloud.path_abstracts.push_back(node.key);
    }
  }
  std::sort(cloud.path_abstracts.begin(), cloud.path_abstracts.end());

  // adjacent keyword pairs along the path
  std::vector<std::pair<int, int>> keyword_pairs;
  for (std::size_t i = 0; i + 1 < path.nodes.size(); ++i) {
    if (path.nodes[i].kind == NodeKind::Keyword && path.nodes[i + 1].kind == NodeKind::Keyword)
      keyword_pairs.emplace_back(net.index_of(path.nodes[i]), net.index_of(path.nodes[i + 1]));
  }

  if (seeds.empty() && keyword_pairs.empty()) {
    cloud.flagged_empty = true;
    return cloud;
  }

  // N: multi-source Dijkstra, first cloud_size abstracts finalized
  if (!seeds.empty() && params.cloud_size > 0) {
    std::vector<double> dist(net.node_count(), kInf);
    std::vector<char> done(net.node_count(), 0);
    SkewHeap<QueueEntry> heap;
    for (int s : seeds) {
      if (dist[s] == 0.0) continue;
      dist[s] = 0.0;
      heap.push({0.0, s});
    }
    int collected = 0;
    while (!heap.empty() && collected < params.cloud_size) {
      auto [d, u] = heap.pop();
      if (done[u]) continue;
      done[u] = 1;
      if (net.node(u).kind == NodeKind::Abstract) {
        cloud.neighborhood.emplace_back(net.node(u).key, d);
        ++collected;
      }
      for (const auto& he : net.neighbors(u)) {
        if (done[he.to]) continue;
        double nd = d + he.weight;
        if (nd < dist[he.to]) {
          dist[he.to] = nd;
          heap.push({nd, he.to});
        }
      }
    }
    std::sort(cloud.neighborhood.begin(), cloud.neighborhood.end(),
              [](const auto& a, const auto& b) {
                if (a.second != b.second) return a.second < b.second;
                return a.first < b.first;
              });
  }

  // C: co-occurrence abstracts per adjacent keyword pair
  std::set<std::string> c_seen;
  for (auto [alpha, beta] : keyword_pairs) {
    std::unordered_map<int, double> alpha_weight;
    for (const auto& he : net.neighbors(alpha))
      if (net.node(he.to).kind == NodeKind::Abstract) alpha_weight[he.to] = he.weight;
    std::vector<std::pair<double, std::string>> ranked;
    for (const auto& he : net.neighbors(beta)) {
      if (net.node(he.to).kind != NodeKind::Abstract) continue;
      auto it = alpha_weight.find(he.to);
      if (it == alpha_weight.end()) continue;
      ranked.emplace_back(it->second + he.weight, net.node(he.to).key);
    }
    std::sort(ranked.begin(), ranked.end());
    int taken = 0;
    for (const auto& [w, id] : ranked) {
      if (taken >= params.pair_cap) break;
      ++taken;
      if (c_seen.insert(id).second) cloud.cooccurrence.push_back(id);
    }
  }

  // union: S, then N, then C, first occurrence wins
  std::set<std::string> seen;
  for (const auto& id : cloud.path_abstracts)
    if (seen.insert(id).second) cloud.union_docs.push_back(id);
  for (const auto& [id, d] : cloud.neighborhood)
    if (seen.insert(id).second) cloud.union_docs.push_back(id);
  for (const auto& id : cloud.cooccurrence)
    if (seen.insert(id).second) cloud.union_docs.push_back(id);

  if (cloud.union_docs.empty()) cloud.flagged_empty = true;
  return cloud;
}

QueryBundle run_query(const KnowledgeNetwork& net, const Corpus& corpus,
                      const StopwordSet& stopwords, const PhraseLexicon& lexicon,
                      const NodeId& source, const NodeId& target, const QueryParams& params) {
  QueryBundle bundle;
  bundle.source = source;
  bundle.target = target;
  bundle.path = shortest_path(net, source, target);
  if (!bundle.path.found) return bundle;

  bundle.cloud = extend_cloud(net, bundle.path, params);

  std::unordered_map<std::string, const Document*> by_id;
  for (const auto& doc : corpus.documents) by_id[doc.doc_id] = &doc;
  for (const auto& id : bundle.cloud.union_docs) {
    auto it = by_id.find(id);
    if (it == by_id.end()) throw Error("cloud document missing from corpus: a:" + id);
    bundle.docs.push_back(apply_lexicon(normalize(*it->second, stopwords), lexicon));
  }
  return bundle;
}

void write_bundle(const std::string& dir, const QueryBundle& bundle,
                  const std::string& config_hash, std::uint64_t seed) {
  fs::create_directories(dir);

  json path_doc;
  path_doc["config"] = config_hash;
  path_doc["seed"] = seed;
  path_doc["source"] = bundle.source.serialize();
  path_doc["target"] = bundle.target.serialize();
  path_doc["found"] = bundle.path.found;
  path_doc["nodes"] = json::array();
  for (const auto& n : bundle.path.nodes) path_doc["nodes"].push_back(n.serialize());
  path_doc["edge_weights"] = bundle.path.edge_weights;
  path_doc["total_weight"] = bundle.path.total_weight;
  write_text_file((fs::path(dir) / "path.json").string(), path_doc.dump(2) + "\n");

  json cloud_doc;
  cloud_doc["config"] = config_hash;
  cloud_doc["seed"] = seed;
  cloud_doc["flagged_empty"] = bundle.cloud.flagged_empty;
  cloud_doc["S"] = bundle.cloud.path_abstracts;
  cloud_doc["N"] = json::array();
  for (const auto& [id, d] : bundle.cloud.neighborhood)
    cloud_doc["N"].push_back({{"id", id}, {"distance", d}});
  cloud_doc["C"] = bundle.cloud.cooccurrence;
  cloud_doc["union"] = bundle.cloud.union_docs;
  write_text_file((fs::path(dir) / "cloud.json").string(), cloud_doc.dump(2) + "\n");

  std::string docs_out =
      json{{"moliere_artifact", "bundle-docs"}, {"config", config_hash}, {"seed", seed}}.dump() +
      "\n";
  for (const auto& doc : bundle.docs) {
    docs_out += json{{"id", doc.doc_id}, {"tokens", doc.tokens}}.dump();
    docs_out += '\n';
  }
  write_text_file((fs::path(dir) / "docs.jsonl").string(), docs_out);
}

QueryBundle read_bundle(const std::string& dir) {
  QueryBundle bundle;
  json path_doc = json::parse(read_text_file((fs::path(dir) / "path.json").string()));
  bundle.source = NodeId::parse(path_doc.at("source").get<std::string>());
  bundle.target = NodeId::parse(path_doc.at("target").get<std::string>());
  bundle.path.found = path_doc.at("found").get<bool>();
  for (const auto& n : path_doc.at("nodes")) bundle.path.nodes.push_back(NodeId::parse(n));
  bundle.path.edge_weights = path_doc.at("edge_weights").get<std::vector<double>>();
  bundle.path.total_weight = path_doc.at("total_weight").get<double>();

  json cloud_doc = json::parse(read_text_file((fs::path(dir) / "cloud.json").string()));
  bundle.cloud.flagged_empty = cloud_doc.at("flagged_empty").get<bool>();
  bundle.cloud.path_abstracts = cloud_doc.at("S").get<std::vector<std::string>>();
  for (const auto& item : cloud_doc.at("N"))
    bundle.cloud.neighborhood.emplace_back(item.at("id").get<std::string>(),
                                           item.at("distance").get<double>());
  bundle.cloud.cooccurrence = cloud_doc.at("C").get<std::vector<std::string>>();
  bundle.cloud.union_docs = cloud_doc.at("union").get<std::vector<std::string>>();

  std::ifstream in((fs::path(dir) / "docs.jsonl").string());
  if (!in) throw Error("cannot open bundle docs: " + dir);
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    json rec = json::parse(line);
    if (first && rec.contains("moliere_artifact")) {
      first = false;
      continue;
    }
    first = false;
    NormalizedDocument doc;
    doc.doc_id = rec.at("id").get<std::string>();
    doc.tokens = rec.at("tokens").get<std::vector<std::string>>();
    bundle.docs.push_back(std::move(doc));
  }
  return bundle;
}

}  // namespace moliere
