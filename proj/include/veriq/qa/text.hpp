#pragma once

#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace veriq::qa {

struct TextOptions {
  // Words listed in the exception table are never lemmatized. Disabling the
  // table reproduces the "saw" -> "see" conflation of the reference tools.
  bool use_exception_table = true;
  std::set<std::string> stopwords;  // empty selects DefaultStopwords()
};

const std::set<std::string>& DefaultStopwords();

// Rule-based lemmatizer: irregular-form table, then plural and -ed/-ing rules.
std::string Lemmatize(std::string_view word, bool use_exception_table = true);

// Lowercased, punctuation-stripped words with no other processing.
std::vector<std::string> RawWords(std::string_view text);

// Lowercase, strip punctuation, lemmatize and drop stopwords. The question
// words why/where/what/how are kept for routing.
std::vector<std::string> NormalizeText(std::string_view text, const TextOptions& options = {});

}  // namespace veriq::qa
