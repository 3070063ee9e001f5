#include "veriq/kb/assertion.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>

#include "veriq/error.hpp"

namespace veriq::kb {

namespace {

bool IsAsciiPunct(unsigned char ch) {
  return (ch >= 33 && ch <= 47) || (ch >= 58 && ch <= 64) || (ch >= 91 && ch <= 96) ||
         (ch >= 123 && ch <= 126);
}

std::vector<std::string_view> SplitTabs(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    auto pos = line.find('\t', start);
    if (pos == std::string_view::npos) {
      fields.push_back(line.substr(start));
      break;
    }
    fields.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
  return fields;
}

std::string_view Trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

std::optional<double> ParseReal(std::string_view s) {
  s = Trim(s);
  if (s.empty()) return std::nullopt;
  if (s.front() == '+') s.remove_prefix(1);
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(value)) return std::nullopt;
  return value;
}

std::optional<int> ParsePolarity(std::string_view s) {
  s = Trim(s);
  if (s == "+" || s == "1" || s == "+1" || s == "pos") return 1;
  if (s == "-" || s == "-1" || s == "neg") return -1;
  return std::nullopt;
}

}  // namespace

bool ParseStats::malformed_warning() const {
  return lines > 0 && static_cast<double>(malformed) > 0.1 * static_cast<double>(lines);
}

std::string NormalizeConcept(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  bool pending_space = false;
  for (unsigned char ch : text) {
    if (ch == '\'') continue;
    if (std::isspace(ch) || ch == '_' || IsAsciiPunct(ch)) {
      pending_space = !out.empty();
      continue;
    }
    if (pending_space) {
      out.push_back(' ');
      pending_space = false;
    }
    out.push_back(static_cast<char>(ch < 128 ? std::tolower(ch) : ch));
  }
  return out;
}

ParseResult ParseAssertions(std::istream& in, std::string_view language_filter) {
  ParseResult result;
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::string_view view = line;
    if (Trim(view).empty() || view.front() == '#') continue;
    if (first) {
      first = false;
      if (view.substr(0, 4) == "lang") continue;
    }
    ++result.stats.lines;

    auto fields = SplitTabs(view);
    if (fields.size() != 7) {
      ++result.stats.malformed;
      continue;
    }
    Assertion a;
    a.language = NormalizeConcept(fields[0]);
    a.concept_left = NormalizeConcept(fields[1]);
    a.relation = std::string(Trim(fields[2]));
    a.concept_right = NormalizeConcept(fields[3]);
    auto strength = ParseReal(fields[4]);
    auto polarity = ParsePolarity(fields[5]);
    bool frequency_ok = Trim(fields[6]).empty() || ParseReal(fields[6]).has_value();
    if (a.concept_left.empty() || a.concept_right.empty() || a.relation.empty() || !strength ||
        !polarity || !frequency_ok) {
      ++result.stats.malformed;
      continue;
    }
    a.strength = *strength;
    a.polarity = *polarity;
    if (!language_filter.empty() && a.language != language_filter) {
      ++result.stats.filtered_language;
      continue;
    }
    ++result.stats.accepted;
    result.assertions.push_back(std::move(a));
  }
  if (in.bad()) throw Error(ErrorCode::kIo, "error while reading assertion stream");
  if (result.stats.malformed_warning()) {
    std::cerr << "warning: " << result.stats.malformed << " of " << result.stats.lines
              << " dump lines were malformed and skipped\n";
  }
  return result;
}

ParseResult ParseAssertionFile(const std::string& path, std::string_view language_filter) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, "cannot open assertion dump: " + path);
  return ParseAssertions(in, language_filter);
}

}  // namespace veriq::kb
