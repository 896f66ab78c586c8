#ifndef WIGNERLAB_CSV_HPP
#define WIGNERLAB_CSV_HPP

#include <cstdint>
#include <fstream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "wignerlab/format.hpp"

// Result tables. One fixed column set for every experiment kind:
//
//   experiment,params,observable,value,stderr,trials,run_id,version
//
// params is a semicolon-separated key=value string (no commas, so rows
// need no quoting in practice; the writer still quotes defensively).
// run_id is a 64-bit FNV-1a fingerprint of the canonical config text,
// identical across rows of one run and across reruns of the same config.

namespace wignerlab {

struct ResultRow {
  std::string experiment;
  std::string params;
  std::string observable;
  double value = 0.0;
  std::optional<double> std_error;  // empty for exact / derived quantities
  long long trials = 0;             // 0 when no sampling was involved
  std::string run_id;
  std::string version;
};

inline constexpr const char* kCsvHeader =
    "experiment,params,observable,value,stderr,trials,run_id,version";

inline std::uint64_t fnv1a64(const std::string& text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;  // 14695981039346656037
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;  // 1099511628211
  }
  return h;
}

inline std::string run_fingerprint(const std::string& canonical_text) {
  static const char* digits = "0123456789abcdef";
  std::uint64_t h = fnv1a64(canonical_text);
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i) {
    out[i] = digits[h & 0xF];
    h >>= 4;
  }
  return out;
}

namespace detail {

inline std::string csv_escape(const std::string& field) {
  if (field.find_first_of(",\"\n") == std::string::npos) return field;
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

inline std::vector<std::string> csv_split(const std::string& line, int lineno) {
  std::vector<std::string> fields;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          cur += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        cur += c;
      }
    } else if (c == '"' && cur.empty()) {
      quoted = true;
    } else if (c == ',') {
      fields.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (quoted)
    throw std::runtime_error("csv line " + std::to_string(lineno) +
                             ": unterminated quote");
  fields.push_back(cur);
  return fields;
}

}  // namespace detail

inline std::string format_row(const ResultRow& r) {
  std::string out;
  out += detail::csv_escape(r.experiment);
  out += ',';
  out += detail::csv_escape(r.params);
  out += ',';
  out += detail::csv_escape(r.observable);
  out += ',';
  out += format_double(r.value);
  out += ',';
  if (r.std_error) out += format_double(*r.std_error);
  out += ',';
  out += std::to_string(r.trials);
  out += ',';
  out += r.run_id;
  out += ',';
  out += detail::csv_escape(r.version);
  return out;
}

inline void write_csv(const std::string& path,
                      const std::vector<ResultRow>& rows) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  out << kCsvHeader << '\n';
  for (const ResultRow& r : rows) out << format_row(r) << '\n';
  if (!out) throw std::runtime_error("write failed for '" + path + "'");
}

inline std::vector<ResultRow> read_csv(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read '" + path + "'");
  std::string line;
  int lineno = 0;
  if (!std::getline(in, line))
    throw std::runtime_error("'" + path + "' is empty");
  ++lineno;
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != kCsvHeader)
    throw std::runtime_error("'" + path + "' has unexpected header '" + line +
                             "'");
  std::vector<ResultRow> rows;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const std::vector<std::string> f = detail::csv_split(line, lineno);
    if (f.size() != 8)
      throw std::runtime_error("csv line " + std::to_string(lineno) +
                               ": expected 8 fields, got " +
                               std::to_string(f.size()));
    ResultRow r;
    r.experiment = f[0];
    r.params = f[1];
    r.observable = f[2];
    r.value = parse_double(f[3]);
    if (!f[4].empty()) r.std_error = parse_double(f[4]);
    r.trials = parse_int(f[5]);
    r.run_id = f[6];
    r.version = f[7];
    rows.push_back(std::move(r));
  }
  return rows;
}

// Builds the params column. Callers push keys in a fixed order so the
// serialized text is stable.
class ParamList {
 public:
  ParamList& add(const std::string& key, const std::string& value) {
    if (!text_.empty()) text_ += ';';
    text_ += key;
    text_ += '=';
    text_ += value;
    return *this;
  }
  ParamList& add(const std::string& key, double value) {
    return add(key, format_double(value));
  }
  ParamList& add(const std::string& key, long long value) {
    return add(key, std::to_string(value));
  }
  const std::string& str() const { return text_; }

 private:
  std::string text_;
};

}  // namespace wignerlab

#endif
