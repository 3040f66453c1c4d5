#pragma once

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "moliere/common.hpp"

namespace moliere {

// Calendar date, day optional ("2009-12-31" or "2009-12").
struct Date {
  int year = 0;
  int month = 0;
  int day = 0;  // 0 when the day was omitted

  static Date parse(const std::string& text);  // throws Error on malformed input

  friend auto operator<=>(const Date&, const Date&) = default;
  std::string to_string() const;
};

struct Document {
  std::string doc_id;
  std::string title;
  std::string abstract_text;
  std::optional<Date> date;  // absent dates sort as oldest
};

struct Corpus {
  std::vector<Document> documents;
  std::string source_path;
  std::string ingested_at;  // ISO timestamp, informational only
};

struct NormalizedDocument {
  std::string doc_id;
  std::vector<std::string> tokens;  // lowercase, [a-z0-9_] only
};

using StopwordSet = std::set<std::string>;

enum class LoadMode { strict, skip_with_report };

struct SkippedLine {
  int line_number = 0;
  std::string reason;
};

struct LoadResult {
  Corpus corpus;
  std::vector<SkippedLine> skipped;
};

// JSON-lines corpus loader. Keys must be exactly {id,title,abstract,date?}.
// strict mode aborts on the first malformed line; skip mode records it.
// Duplicate ids abort in both modes.
LoadResult load_corpus(const std::string& path, LoadMode mode = LoadMode::strict);

// ASCII-folds, lowercases, splits on punctuation (intra-token hyphens become
// underscores), drops stopwords. Digits are kept. Pass an empty stopword set
// to keep every token.
NormalizedDocument normalize(const Document& doc, const StopwordSet& stopwords);

std::vector<std::string> normalize_text(const std::string& text, const StopwordSet& stopwords);

std::vector<NormalizedDocument> normalize_corpus(const Corpus& corpus, const StopwordSet& stopwords);
std::vector<NormalizedDocument> normalize_corpus_serial(const Corpus& corpus, const StopwordSet& stopwords);

// Keeps documents dated on or before the cutoff. Undated documents are
// dropped unless keep_undated is set.
Corpus filter_by_date(const Corpus& corpus, const Date& cutoff, bool keep_undated = false);

StopwordSet load_stopwords(const std::string& path);  // one token per line, '#' comments
StopwordSet default_stopwords();

}  // namespace moliere
