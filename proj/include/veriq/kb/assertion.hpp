#pragma once

#include <compare>
#include <cstddef>
#include <istream>
#include <string>
#include <string_view>
#include <vector>

namespace veriq::kb {

// One signed, weighted, directed relation triple from the knowledge dump.
struct Assertion {
  std::string concept_left;
  std::string relation;
  std::string concept_right;
  double strength = 0.0;
  int polarity = 1;  // +1 or -1
  std::string language;

  bool operator==(const Assertion&) const = default;
};

struct ParseStats {
  std::size_t lines = 0;
  std::size_t accepted = 0;
  std::size_t malformed = 0;
  std::size_t filtered_language = 0;

  // More than 10% of the non-blank lines were malformed.
  bool malformed_warning() const;
};

struct ParseResult {
  std::vector<Assertion> assertions;
  ParseStats stats;
};

// Lowercase, punctuation-stripped, whitespace-collapsed concept token.
std::string NormalizeConcept(std::string_view text);

// Reads the tab-separated dump format:
//   lang  concept_left  relation  concept_right  strength  polarity  frequency
// An optional header line starting with "lang" is skipped. Blank lines and
// lines starting with '#' are ignored. The frequency column is parsed for
// shape only and otherwise unused. An empty language filter accepts all.
ParseResult ParseAssertions(std::istream& in, std::string_view language_filter = "en");

ParseResult ParseAssertionFile(const std::string& path, std::string_view language_filter = "en");

}  // namespace veriq::kb
