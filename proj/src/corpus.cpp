#include "moliere/corpus.hpp"

#include <algorithm>
#include <cctype>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <unordered_set>

#ifdef _OPENMP
#include <omp.h>
#endif

#include <nlohmann/json.hpp>

namespace moliere {

using json = nlohmann::json;

namespace {

int days_in_month(int year, int month) {
  static const int table[12] = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
  if (month == 2) {
    bool leap = (year % 4 == 0 && year % 100 != 0) || year % 400 == 0;
    return leap ? 29 : 28;
  }
  return table[month - 1];
}

bool parse_int(const std::string& s, int& out) {
  if (s.empty()) return false;
  for (char c : s)
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  out = std::stoi(s);
  return true;
}

// Folds one codepoint to an ASCII replacement. Returns empty for codepoints
// with no sensible fold; those are dropped.
std::string fold_codepoint(char32_t cp) {
  if (cp >= 0xC0 && cp <= 0xFF) {
    static const char* latin1 =
        "a a a a a a aec e e e e i i i i d n o o o o o * o u u u u y thss"
        "a a a a a a aec e e e e i i i i d n o o o o o * o u u u u y thy ";
    // two chars per slot, '*' marks multiplication/division signs (dropped)
    std::size_t idx = (cp - 0xC0) * 2;
    char a = latin1[idx], b = latin1[idx + 1];
    if (a == '*') return "";
    std::string out(1, a);
    if (b != ' ') out.push_back(b);
    return out;
  }
  switch (cp) {
    case 0x0100: case 0x0101: case 0x0102: case 0x0103: case 0x0104: case 0x0105: return "a";
    case 0x0106: case 0x0107: case 0x0108: case 0x0109: case 0x010A: case 0x010B:
    case 0x010C: case 0x010D: return "c";
    case 0x010E: case 0x010F: case 0x0110: case 0x0111: return "d";
    case 0x0112: case 0x0113: case 0x0114: case 0x0115: case 0x0116: case 0x0117:
    case 0x0118: case 0x0119: case 0x011A: case 0x011B: return "e";
    case 0x011C: case 0x011D: case 0x011E: case 0x011F: case 0x0120: case 0x0121:
    case 0x0122: case 0x0123: return "g";
    case 0x0124: case 0x0125: case 0x0126: case 0x0127: return "h";
    case 0x0128: case 0x0129: case 0x012A: case 0x012B: case 0x012C: case 0x012D:
    case 0x012E: case 0x012F: case 0x0130: case 0x0131: return "i";
    case 0x0134: case 0x0135: return "j";
    case 0x0136: case 0x0137: return "k";
    case 0x0139: case 0x013A: case 0x013B: case 0x013C: case 0x013D: case 0x013E:
    case 0x0141: case 0x0142: return "l";
    case 0x0143: case 0x0144: case 0x0145: case 0x0146: case 0x0147: case 0x0148: return "n";
    case 0x014C: case 0x014D: case 0x014E: case 0x014F: case 0x0150: case 0x0151: return "o";
    case 0x0152: case 0x0153: return "oe";
    case 0x0154: case 0x0155: case 0x0156: case 0x0157: case 0x0158: case 0x0159: return "r";
    case 0x015A: case 0x015B: case 0x015C: case 0x015D: case 0x015E: case 0x015F:
    case 0x0160: case 0x0161: return "s";
    case 0x0162: case 0x0163: case 0x0164: case 0x0165: case 0x0166: case 0x0167: return "t";
    case 0x0168: case 0x0169: case 0x016A: case 0x016B: case 0x016C: case 0x016D:
    case 0x016E: case 0x016F: case 0x0170: case 0x0171: case 0x0172: case 0x0173: return "u";
    case 0x0174: case 0x0175: return "w";
    case 0x0176: case 0x0177: case 0x0178: return "y";
    case 0x0179: case 0x017A: case 0x017B: case 0x017C: case 0x017D: case 0x017E: return "z";
    case 0x2010: case 0x2011: case 0x2012: case 0x2013: case 0x2014: case 0x2015:
    case 0x2212: return "-";
    case 0x2018: case 0x2019: case 0x201A: return "'";
    case 0x201C: case 0x201D: case 0x201E: return "\"";
    case 0x00A0: case 0x2026: return " ";
    default: return "";
  }
}

// Decodes UTF-8, folding each codepoint; invalid bytes are dropped.
std::string fold_to_ascii(const std::string& text) {
  std::string out;
  out.reserve(text.size());
  std::size_t i = 0;
  while (i < text.size()) {
    unsigned char c = text[i];
    if (c < 0x80) {
      out.push_back(static_cast<char>(c));
      ++i;
      continue;
    }
    int extra = 0;
    char32_t cp = 0;
    if ((c & 0xE0) == 0xC0) { cp = c & 0x1F; extra = 1; }
    else if ((c & 0xF0) == 0xE0) { cp = c & 0x0F; extra = 2; }
    else if ((c & 0xF8) == 0xF0) { cp = c & 0x07; extra = 3; }
    else { ++i; continue; }
    if (i + extra >= text.size()) { ++i; continue; }
    bool ok = true;
    for (int k = 1; k <= extra; ++k) {
      unsigned char cc = text[i + k];
      if ((cc & 0xC0) != 0x80) { ok = false; break; }
      cp = (cp << 6) | (cc & 0x3F);
    }
    if (!ok) { ++i; continue; }
    i += 1 + extra;
    out += fold_codepoint(cp);
  }
  return out;
}

}  // namespace

Date Date::parse(const std::string& text) {
  auto parts = split_char(text, '-');
  if (parts.size() != 2 && parts.size() != 3) throw Error("malformed date: " + text);
  Date d;
  if (!parse_int(parts[0], d.year) || parts[0].size() != 4)
    throw Error("malformed date year: " + text);
  if (!parse_int(parts[1], d.month) || d.month < 1 || d.month > 12)
    throw Error("malformed date month: " + text);
  if (parts.size() == 3) {
    if (!parse_int(parts[2], d.day) || d.day < 1 || d.day > days_in_month(d.year, d.month))
      throw Error("malformed date day: " + text);
  }
  return d;
}

std::string Date::to_string() const {
  char buf[16];
  if (day > 0)
    std::snprintf(buf, sizeof(buf), "%04d-%02d-%02d", year, month, day);
  else
    std::snprintf(buf, sizeof(buf), "%04d-%02d", year, month);
  return std::string(buf);
}

LoadResult load_corpus(const std::string& path, LoadMode mode) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open corpus file: " + path);

  LoadResult result;
  result.corpus.source_path = path;
  {
    auto now = std::chrono::system_clock::now();
    result.corpus.ingested_at = std::to_string(
        std::chrono::duration_cast<std::chrono::seconds>(now.time_since_epoch()).count());
  }

  std::unordered_set<std::string> seen_ids;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::string reason;
    Document doc;
    try {
      json rec = json::parse(line);
      if (!rec.is_object()) throw Error("record is not an object");
      for (auto& [key, value] : rec.items()) {
        (void)value;
        if (key != "id" && key != "title" && key != "abstract" && key != "date")
          throw Error("unexpected key '" + key + "'");
      }
      if (!rec.contains("id") || !rec["id"].is_string() || rec["id"].get<std::string>().empty())
        throw Error("missing or empty 'id'");
      if (!rec.contains("title") || !rec["title"].is_string())
        throw Error("missing 'title'");
      if (!rec.contains("abstract") || !rec["abstract"].is_string())
        throw Error("missing 'abstract'");
      doc.doc_id = rec["id"].get<std::string>();
      doc.title = rec["title"].get<std::string>();
      doc.abstract_text = rec["abstract"].get<std::string>();
      if (rec.contains("date")) {
        if (!rec["date"].is_string()) throw Error("'date' must be a string");
        doc.date = Date::parse(rec["date"].get<std::string>());
      }
    } catch (const json::exception& e) {
      reason = e.what();
    } catch (const Error& e) {
      reason = e.what();
    }
    if (!reason.empty()) {
      if (mode == LoadMode::strict)
        throw Error(path + ":" + std::to_string(line_no) + ": " + reason);
      result.skipped.push_back({line_no, reason});
      continue;
    }
    if (!seen_ids.insert(doc.doc_id).second)
      throw Error(path + ":" + std::to_string(line_no) + ": duplicate doc_id '" + doc.doc_id + "'");
    result.corpus.documents.push_back(std::move(doc));
  }
  return result;
}

std::vector<std::string> normalize_text(const std::string& text, const StopwordSet& stopwords) {
  std::string folded = fold_to_ascii(text);
  std::vector<std::string> tokens;
  std::string current;
  auto flush = [&]() {
    if (!current.empty() && !stopwords.count(current)) tokens.push_back(current);
    current.clear();
  };
  for (std::size_t i = 0; i < folded.size(); ++i) {
    unsigned char c = folded[i];
    if (std::isalnum(c)) {
      current.push_back(static_cast<char>(std::tolower(c)));
    } else if (c == '-' || c == '_') {
      // hyphen stays inside a token only when flanked by alphanumerics
      bool next_alnum = i + 1 < folded.size() && std::isalnum(static_cast<unsigned char>(folded[i + 1]));
      if (!current.empty() && next_alnum)
        current.push_back('_');
      else
        flush();
    } else {
      flush();
    }
  }
  flush();
  return tokens;
}

NormalizedDocument normalize(const Document& doc, const StopwordSet& stopwords) {
  std::string combined = doc.title;
  if (!combined.empty() && !doc.abstract_text.empty()) combined += " ";
  combined += doc.abstract_text;
  return {doc.doc_id, normalize_text(combined, stopwords)};
}

std::vector<NormalizedDocument> normalize_corpus_serial(const Corpus& corpus,
                                                        const StopwordSet& stopwords) {
  std::vector<NormalizedDocument> out(corpus.documents.size());
  for (std::size_t i = 0; i < corpus.documents.size(); ++i)
    out[i] = normalize(corpus.documents[i], stopwords);
  return out;
}

std::vector<NormalizedDocument> normalize_corpus(const Corpus& corpus, const StopwordSet& stopwords) {
  std::vector<NormalizedDocument> out(corpus.documents.size());
#pragma omp parallel for schedule(dynamic, 64)
  for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(corpus.documents.size()); ++i)
    out[i] = normalize(corpus.documents[i], stopwords);
  return out;
}

Corpus filter_by_date(const Corpus& corpus, const Date& cutoff, bool keep_undated) {
  Corpus out;
  out.source_path = corpus.source_path;
  out.ingested_at = corpus.ingested_at;
  for (const auto& doc : corpus.documents) {
    if (!doc.date.has_value()) {
      if (keep_undated) out.documents.push_back(doc);
      continue;
    }
    if (*doc.date <= cutoff) out.documents.push_back(doc);
  }
  return out;
}

StopwordSet load_stopwords(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open stopwords file: " + path);
  StopwordSet set;
  std::string line;
  while (std::getline(in, line)) {
    auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    for (const auto& token : split_ws(line)) set.insert(token);
  }
  return set;
}

StopwordSet default_stopwords() {
  static const char* words[] = {
      "a",   "an",  "and", "are", "as",   "at",   "be",   "but", "by",   "for",
      "from", "has", "have", "in", "is",   "it",   "its",  "of",  "on",   "or",
      "that", "the", "this", "to", "was",  "were", "which", "with"};
  StopwordSet set;
  for (const char* w : words) set.insert(w);
  return set;
}

}  // namespace moliere
