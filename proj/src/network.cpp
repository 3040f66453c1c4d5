#include "moliere/network.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <set>

namespace moliere {

NodeId NodeId::parse(const std::string& text) {
  if (text.size() < 3 || text[1] != ':') throw Error("malformed node id: " + text);
  if (text[0] == 'a') return {NodeKind::Abstract, text.substr(2)};
  if (text[0] == 'k') return {NodeKind::Keyword, text.substr(2)};
  throw Error("malformed node id: " + text);
}

std::string edge_class_name(EdgeClass cls) {
  switch (cls) {
    case EdgeClass::AA: return "AA";
    case EdgeClass::KK: return "KK";
    case EdgeClass::AK: return "AK";
  }
  throw Error("bad edge class");
}

EdgeClass edge_class_from(const std::string& name) {
  if (name == "AA") return EdgeClass::AA;
  if (name == "KK") return EdgeClass::KK;
  if (name == "AK") return EdgeClass::AK;
  throw Error("unknown edge class: " + name);
}

int KnowledgeNetwork::index_of(const NodeId& id) const {
  auto it = index_.find(id.serialize());
  return it == index_.end() ? -1 : it->second;
}

KnowledgeNetwork assemble(std::span<const NodeId> abstracts, std::span<const NodeId> keywords,
                          std::span<const Edge> aa, std::span<const Edge> kk,
                          std::span<const Edge> ak, double sigma, const std::string& config_hash,
                          std::uint64_t seed) {
  KnowledgeNetwork net;
  net.sigma_ = sigma;
  net.config_hash_ = config_hash;
  net.seed_ = seed;

  std::vector<NodeId> sorted_abstracts(abstracts.begin(), abstracts.end());
  std::vector<NodeId> sorted_keywords(keywords.begin(), keywords.end());
  auto by_key = [](const NodeId& a, const NodeId& b) { return a.key < b.key; };
  std::sort(sorted_abstracts.begin(), sorted_abstracts.end(), by_key);
  std::sort(sorted_keywords.begin(), sorted_keywords.end(), by_key);

  net.abstract_count_ = sorted_abstracts.size();
  net.nodes_.reserve(sorted_abstracts.size() + sorted_keywords.size());
  for (auto& n : sorted_abstracts) net.nodes_.push_back(n);
  for (auto& n : sorted_keywords) net.nodes_.push_back(n);
  for (std::size_t i = 0; i < net.nodes_.size(); ++i) {
    if (!net.index_.emplace(net.nodes_[i].serialize(), static_cast<int>(i)).second)
      throw Error("duplicate node: " + net.nodes_[i].serialize());
  }
  net.adjacency_.resize(net.nodes_.size());

  auto check_range = [&](const Edge& e) {
    double upper = e.cls == EdgeClass::AA ? 1.0 : sigma;
    if (e.weight < 0.0 || e.weight > upper + 1e-12)
      throw Error("edge weight " + format_g9(e.weight) + " outside [0," + format_g9(upper) +
                  "] for class " + edge_class_name(e.cls));
  };

  std::set<std::pair<int, int>> seen;
  auto add_edges = [&](std::span<const Edge> edges) {
    for (const Edge& e : edges) {
      int ui = net.index_of(e.u);
      int vi = net.index_of(e.v);
      if (ui < 0) throw Error("edge references missing node: " + e.u.serialize());
      if (vi < 0) throw Error("edge references missing node: " + e.v.serialize());
      if (ui == vi) throw Error("self-loop on node: " + e.u.serialize());
      check_range(e);
      auto key = std::minmax(ui, vi);
      if (!seen.insert({key.first, key.second}).second)
        throw Error("duplicate edge: " + e.u.serialize() + " -- " + e.v.serialize());
      net.adjacency_[ui].push_back({vi, e.weight, e.cls});
      net.adjacency_[vi].push_back({ui, e.weight, e.cls});
      ++net.edge_count_;
    }
  };
  add_edges(aa);
  add_edges(kk);
  add_edges(ak);

  for (auto& list : net.adjacency_)
    std::sort(list.begin(), list.end(),
              [](const HalfEdge& a, const HalfEdge& b) { return a.to < b.to; });
  return net;
}

namespace {

std::vector<int> component_labels(const KnowledgeNetwork& net, std::size_t& count) {
  std::vector<int> label(net.node_count(), -1);
  std::vector<int> stack;
  int next = 0;
  for (std::size_t start = 0; start < net.node_count(); ++start) {
    if (label[start] >= 0) continue;
    label[start] = next;
    stack.push_back(static_cast<int>(start));
    while (!stack.empty()) {
      int u = stack.back();
      stack.pop_back();
      for (const auto& he : net.neighbors(u)) {
        if (label[he.to] < 0) {
          label[he.to] = next;
          stack.push_back(he.to);
        }
      }
    }
    ++next;
  }
  count = static_cast<std::size_t>(next);
  return label;
}

}  // namespace

NetworkStats compute_stats(const KnowledgeNetwork& net) {
  NetworkStats s;
  s.node_count = net.node_count();
  s.abstract_count = net.abstract_count();
  s.keyword_count = net.keyword_count();
  s.edge_count = net.edge_count();
  s.average_degree =
      s.node_count ? 2.0 * static_cast<double>(s.edge_count) / static_cast<double>(s.node_count)
                   : 0.0;

  // transitivity: sum over edges of common neighbors = 3 * triangles
  std::uint64_t closed = 0, triples = 0;
  std::vector<std::vector<int>> nbr(net.node_count());
  for (std::size_t u = 0; u < net.node_count(); ++u) {
    for (const auto& he : net.neighbors(static_cast<int>(u))) nbr[u].push_back(he.to);
    std::uint64_t deg = nbr[u].size();
    triples += deg * (deg - 1) / 2;
  }
  for (std::size_t u = 0; u < net.node_count(); ++u) {
    for (int v : nbr[u]) {
      if (static_cast<std::size_t>(v) <= u) continue;
      // sorted lists: count intersection
      const auto& a = nbr[u];
      const auto& b = nbr[v];
      std::size_t i = 0, j = 0;
      while (i < a.size() && j < b.size()) {
        if (a[i] == b[j]) { ++closed; ++i; ++j; }
        else if (a[i] < b[j]) ++i;
        else ++j;
      }
    }
  }
  s.clustering_coefficient = triples ? static_cast<double>(closed) / static_cast<double>(triples) : 0.0;

  std::size_t count = 0;
  auto labels = component_labels(net, count);
  s.component_count = count;
  std::vector<std::size_t> sizes(count, 0);
  for (int l : labels) ++sizes[l];
  std::sort(sizes.rbegin(), sizes.rend());
  s.component_sizes = sizes;
  s.largest_component = sizes.empty() ? 0 : sizes[0];
  return s;
}

void write_network(const std::string& path, const KnowledgeNetwork& net) {
  std::string out = "moliere-network v1\n";
  out += "nodes " + std::to_string(net.abstract_count()) + " " + std::to_string(net.keyword_count()) + "\n";
  out += "sigma " + format_g9(net.sigma()) + "\n";
  out += "config " + net.config_hash() + " seed " + std::to_string(net.seed()) + "\n";
  for (const auto& n : net.nodes()) out += n.serialize() + "\n";

  // canonical edge list: u < v by node index, rows sorted
  std::vector<std::tuple<int, int, double, EdgeClass>> edges;
  edges.reserve(net.edge_count());
  for (std::size_t u = 0; u < net.node_count(); ++u)
    for (const auto& he : net.neighbors(static_cast<int>(u)))
      if (static_cast<int>(u) < he.to) edges.emplace_back(static_cast<int>(u), he.to, he.weight, he.cls);
  std::sort(edges.begin(), edges.end());

  out += "edges " + std::to_string(edges.size()) + "\n";
  for (const auto& [u, v, w, cls] : edges) {
    out += net.node(u).serialize();
    out += ' ';
    out += net.node(v).serialize();
    out += ' ';
    out += format_g9(w);
    out += ' ';
    out += edge_class_name(cls);
    out += '\n';
  }
  write_text_file(path, out);
}

KnowledgeNetwork read_network(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open network file: " + path);
  std::string line;
  if (!std::getline(in, line) || line != "moliere-network v1")
    throw Error("network file version mismatch: " + path);

  auto expect = [&](const std::string& prefix) {
    if (!std::getline(in, line) || line.rfind(prefix, 0) != 0)
      throw Error("malformed network header near '" + prefix + "': " + path);
    return split_ws(line);
  };
  auto nodes_fields = expect("nodes ");
  if (nodes_fields.size() != 3) throw Error("malformed nodes line: " + path);
  std::size_t n_abstract = std::stoul(nodes_fields[1]);
  std::size_t n_keyword = std::stoul(nodes_fields[2]);
  auto sigma_fields = expect("sigma ");
  if (sigma_fields.size() != 2) throw Error("malformed sigma line: " + path);
  double sigma = std::strtod(sigma_fields[1].c_str(), nullptr);
  auto config_fields = expect("config ");
  if (config_fields.size() != 4 || config_fields[2] != "seed")
    throw Error("malformed config line: " + path);

  KnowledgeNetwork net;
  net.sigma_ = sigma;
  net.config_hash_ = config_fields[1];
  net.seed_ = std::stoull(config_fields[3]);
  net.abstract_count_ = n_abstract;
  std::size_t total = n_abstract + n_keyword;
  net.nodes_.reserve(total);
  for (std::size_t i = 0; i < total; ++i) {
    if (!std::getline(in, line)) throw Error("truncated node table: " + path);
    net.nodes_.push_back(NodeId::parse(line));
    net.index_[line] = static_cast<int>(i);
  }
  net.adjacency_.resize(total);

  if (!std::getline(in, line) || line.rfind("edges ", 0) != 0)
    throw Error("malformed edges line: " + path);
  std::size_t n_edges = std::stoul(split_ws(line)[1]);
  for (std::size_t e = 0; e < n_edges; ++e) {
    if (!std::getline(in, line)) throw Error("truncated edge list: " + path);
    auto f = split_ws(line);
    if (f.size() != 4) throw Error("malformed edge row: " + line);
    int u = net.index_of(NodeId::parse(f[0]));
    int v = net.index_of(NodeId::parse(f[1]));
    if (u < 0 || v < 0) throw Error("edge references missing node: " + line);
    double w = std::strtod(f[2].c_str(), nullptr);
    EdgeClass cls = edge_class_from(f[3]);
    net.adjacency_[u].push_back({v, w, cls});
    net.adjacency_[v].push_back({u, w, cls});
    ++net.edge_count_;
  }
  for (auto& list : net.adjacency_)
    std::sort(list.begin(), list.end(),
              [](const HalfEdge& a, const HalfEdge& b) { return a.to < b.to; });
  return net;
}

}  // namespace moliere
