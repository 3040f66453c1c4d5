#include "moliere/tfidf.hpp"

#include <algorithm>

namespace moliere {

std::vector<RawAkWeight> tfidf_raw(const TagCounts& counts) {
  std::vector<std::uint64_t> totals(counts.keyword_ids.size(), 0);
  for (const auto& row : counts.doc_counts)
    for (const auto& [kw, count] : row) {
      if (count < 0) throw Error("negative tag count for keyword " + counts.keyword_ids[kw]);
      totals[kw] += static_cast<std::uint64_t>(count);
    }

  std::vector<RawAkWeight> out;
  for (std::size_t d = 0; d < counts.doc_counts.size(); ++d)
    for (const auto& [kw, count] : counts.doc_counts[d]) {
      if (count == 0) continue;
      out.push_back({counts.doc_ids[d], counts.keyword_ids[kw],
                     static_cast<double>(totals[kw]) / static_cast<double>(count)});
    }
  return out;
}

std::vector<Edge> tfidf_edges(const TagCounts& counts, double sigma) {
  auto raws = tfidf_raw(counts);
  std::vector<Edge> out;
  if (raws.empty()) return out;

  double lo = raws[0].raw, hi = raws[0].raw;
  for (const auto& r : raws) {
    lo = std::min(lo, r.raw);
    hi = std::max(hi, r.raw);
  }
  double span = hi - lo;

  out.reserve(raws.size());
  for (const auto& r : raws) {
    double w = span > 0.0 ? quantize9(sigma * (r.raw - lo) / span) : 0.0;
    out.push_back({NodeId::abstract(r.doc_id), NodeId::keyword(r.keyword_id), w, EdgeClass::AK});
  }
  std::sort(out.begin(), out.end(), [](const Edge& a, const Edge& b) {
    if (a.u.key != b.u.key) return a.u.key < b.u.key;
    return a.v.key < b.v.key;
  });
  return out;
}

}  // namespace moliere
