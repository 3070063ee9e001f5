#include "veriq/qa/text.hpp"

#include <cctype>
#include <map>
#include <sstream>

#include "veriq/kb/assertion.hpp"

namespace veriq::qa {

namespace {

const std::set<std::string> kStopwords = {
    "a",     "about", "all",   "also",  "am",    "an",    "and",   "any",   "are",   "at",    "be",
    "been",  "being", "both",  "but",   "by",    "can",   "could", "did",   "do",    "does",  "each",
    "every", "for",   "from",  "had",   "has",   "have",  "he",    "her",   "here",  "hers",  "him",
    "his",   "i",     "if",    "in",    "into",  "is",    "it",    "its",   "just",  "may",   "me",
    "might", "mine",  "must",  "my",    "of",    "on",    "onto",  "or",    "our",   "ours",  "shall",
    "she",   "should", "so",   "some",  "such",  "than",  "that",  "the",   "their", "theirs", "them",
    "then",  "there", "these", "they",  "this",  "those", "to",    "too",   "us",    "very",  "was",
    "we",    "were",  "when",  "which", "who",   "whom",  "whose", "will",  "with",  "would", "you",
    "your",  "yours",
};

// Never lemmatized while the exception table is enabled.
const std::set<std::string> kExceptions = {
    "always", "anything", "bed",    "bring",     "bus",     "ceiling", "christmas", "during",  "evening",
    "everything", "gas",  "glasses", "hundred",  "king",    "lens",    "morning",   "news",    "nothing",
    "pants",  "perhaps",  "ring",   "saw",       "scissors", "series", "sing",      "something", "species",
    "spring", "string",   "swing",  "thing",     "wing",    "yes",
};

const std::map<std::string, std::string, std::less<>> kIrregular = {
    {"ate", "eat"},         {"began", "begin"},     {"bought", "buy"},      {"broke", "break"},
    {"broken", "break"},    {"brought", "bring"},   {"built", "build"},     {"calves", "calf"},
    {"came", "come"},       {"caught", "catch"},    {"children", "child"},  {"clothes", "clothes"},
    {"cookies", "cookie"},  {"did", "do"},          {"doing", "do"},        {"done", "do"},
    {"drank", "drink"},     {"drew", "draw"},       {"eaten", "eat"},       {"feet", "foot"},
    {"fell", "fall"},       {"felt", "feel"},       {"flew", "fly"},        {"found", "find"},
    {"gave", "give"},       {"geese", "goose"},     {"given", "give"},      {"goes", "go"},
    {"going", "go"},        {"gone", "go"},         {"got", "get"},         {"gotten", "get"},
    {"grew", "grow"},       {"had", "have"},        {"halves", "half"},     {"has", "have"},
    {"having", "have"},     {"heroes", "hero"},     {"hid", "hide"},        {"kept", "keep"},
    {"knew", "know"},       {"knives", "knife"},    {"known", "know"},      {"leaves", "leaf"},
    {"loaves", "loaf"},     {"made", "make"},       {"men", "man"},         {"mice", "mouse"},
    {"movies", "movie"},    {"opening", "open"},    {"potatoes", "potato"}, {"ran", "run"},
    {"rode", "ride"},       {"said", "say"},        {"sang", "sing"},       {"sat", "sit"},
    {"saw", "see"},         {"seen", "see"},        {"shelves", "shelf"},   {"shining", "shine"},
    {"slept", "sleep"},     {"spoke", "speak"},     {"stood", "stand"},     {"sung", "sing"},
    {"swam", "swim"},       {"taken", "take"},      {"teeth", "tooth"},     {"thought", "think"},
    {"threw", "throw"},     {"told", "tell"},       {"tomatoes", "tomato"}, {"took", "take"},
    {"used", "use"},        {"uses", "use"},        {"using", "use"},       {"went", "go"},
    {"wives", "wife"},      {"wolves", "wolf"},     {"women", "woman"},     {"wore", "wear"},
    {"writing", "write"},   {"wrote", "write"},
};

const std::map<std::string, std::string, std::less<>> kContractions = {
    {"can't", "can not"},   {"won't", "will not"}, {"don't", "do not"},   {"doesn't", "does not"},
    {"didn't", "did not"},  {"isn't", "is not"},   {"aren't", "are not"}, {"wasn't", "was not"},
    {"weren't", "were not"}, {"haven't", "have not"}, {"hasn't", "has not"}, {"couldn't", "could not"},
    {"wouldn't", "would not"}, {"shouldn't", "should not"},
};

bool IsVowel(char c) { return c == 'a' || c == 'e' || c == 'i' || c == 'o' || c == 'u'; }
bool IsConsonant(char c) { return c >= 'a' && c <= 'z' && !IsVowel(c); }

bool EndsWith(std::string_view s, std::string_view suffix) {
  return s.size() >= suffix.size() && s.substr(s.size() - suffix.size()) == suffix;
}

// Consonants, one vowel, one final consonant (not w/x/y), at most 4 letters:
// "mak" -> "make", "clos" -> "close".
bool NeedsSilentE(std::string_view stem) {
  if (stem.size() < 3 || stem.size() > 4) return false;
  const char last = stem.back();
  if (!IsConsonant(last) || last == 'w' || last == 'x' || last == 'y') return false;
  if (!IsVowel(stem[stem.size() - 2])) return false;
  for (std::size_t i = 0; i + 2 < stem.size(); ++i) {
    if (!IsConsonant(stem[i])) return false;
  }
  return true;
}

std::string UndoVerbSuffix(std::string_view word, std::string_view suffix) {
  std::string stem(word.substr(0, word.size() - suffix.size()));
  if (stem.size() < 3) return std::string(word);
  const char last = stem.back();
  const bool doubled = stem.size() >= 4 && last == stem[stem.size() - 2] &&
                       std::string_view("bdgmnprt").find(last) != std::string_view::npos;
  if (doubled) return stem.substr(0, stem.size() - 1);
  if (!IsConsonant(last) && !(suffix == "ing" && last == 'e')) return std::string(word);
  if (NeedsSilentE(stem)) return stem + "e";
  return stem;
}

std::string ExpandContractions(std::string_view text) {
  std::string lowered;
  lowered.reserve(text.size());
  for (unsigned char ch : text) lowered.push_back(static_cast<char>(ch < 128 ? std::tolower(ch) : ch));
  // Normalize typographic apostrophes.
  std::string out;
  for (std::size_t i = 0; i < lowered.size(); ++i) {
    if (lowered.compare(i, 3, "\xE2\x80\x99") == 0) {
      out.push_back('\'');
      i += 2;
    } else {
      out.push_back(lowered[i]);
    }
  }
  std::istringstream words(out);
  std::string word, result;
  while (words >> word) {
    std::string_view core = word;
    while (!core.empty() && std::ispunct(static_cast<unsigned char>(core.back())) && core.back() != '\'') {
      core.remove_suffix(1);
    }
    auto it = kContractions.find(core);
    result += (result.empty() ? "" : " ");
    result += it != kContractions.end() ? it->second : word;
  }
  return result;
}

}  // namespace

const std::set<std::string>& DefaultStopwords() { return kStopwords; }

std::string Lemmatize(std::string_view word, bool use_exception_table) {
  if (use_exception_table && kExceptions.count(std::string(word))) return std::string(word);
  if (auto it = kIrregular.find(word); it != kIrregular.end()) return it->second;
  if (word.size() <= 3) return std::string(word);

  if (EndsWith(word, "ies") && word.size() > 4) return std::string(word.substr(0, word.size() - 3)) + "y";
  if (EndsWith(word, "sses") || EndsWith(word, "shes") || EndsWith(word, "ches") || EndsWith(word, "xes") ||
      EndsWith(word, "zzes")) {
    return std::string(word.substr(0, word.size() - 2));
  }
  if (EndsWith(word, "ss") || EndsWith(word, "us") || EndsWith(word, "is")) return std::string(word);
  if (EndsWith(word, "s")) return std::string(word.substr(0, word.size() - 1));

  if (EndsWith(word, "ied") && word.size() > 4) return std::string(word.substr(0, word.size() - 3)) + "y";
  if (EndsWith(word, "ed")) return UndoVerbSuffix(word, "ed");
  if (EndsWith(word, "ing")) return UndoVerbSuffix(word, "ing");
  return std::string(word);
}

std::vector<std::string> RawWords(std::string_view text) {
  std::vector<std::string> words;
  std::istringstream in(kb::NormalizeConcept(ExpandContractions(text)));
  std::string w;
  while (in >> w) words.push_back(w);
  return words;
}

std::vector<std::string> NormalizeText(std::string_view text, const TextOptions& options) {
  const auto& stop = options.stopwords.empty() ? kStopwords : options.stopwords;
  std::vector<std::string> tokens;
  for (const auto& word : RawWords(text)) {
    if (stop.count(word)) continue;
    auto lemma = Lemmatize(word, options.use_exception_table);
    if (stop.count(lemma)) continue;
    tokens.push_back(std::move(lemma));
  }
  return tokens;
}

}  // namespace veriq::qa
