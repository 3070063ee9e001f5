#include "veriq/qa/plan.hpp"

#include <algorithm>

#include "veriq/error.hpp"
#include "veriq/qa/text.hpp"

namespace veriq::qa {

namespace {

const std::set<std::string> kQuestionWords = {"why", "where", "what", "how"};

bool StartsWith(const std::vector<std::string>& words, std::initializer_list<std::string_view> prefix) {
  if (words.size() < prefix.size()) return false;
  std::size_t i = 0;
  for (auto p : prefix) {
    if (words[i++] != p) return false;
  }
  return true;
}

bool ContainsSequence(const std::vector<std::string>& words, std::initializer_list<std::string_view> seq) {
  for (std::size_t i = 0; i + seq.size() <= words.size(); ++i) {
    std::size_t j = 0;
    for (auto s : seq) {
      if (words[i + j] != s) break;
      ++j;
    }
    if (j == seq.size()) return true;
  }
  return false;
}

void AddRemoved(std::vector<RemovedConcept>& removed, const std::string& name, RemovalReason reason) {
  for (const auto& r : removed) {
    if (r.name == name) return;
  }
  removed.push_back({name, reason});
}

}  // namespace

const char* RemovalReasonName(RemovalReason reason) {
  switch (reason) {
    case RemovalReason::kQuestionWord:
      return "question_word";
    case RemovalReason::kPhraseTrigger:
      return "phrase_trigger";
    case RemovalReason::kStopConcept:
      return "stop_concept";
    case RemovalReason::kSubsumed:
      return "subsumed";
    case RemovalReason::kUnknown:
      return "unknown";
  }
  return "unknown";
}

const char* SpecialFilterName(SpecialFilter filter) {
  switch (filter) {
    case SpecialFilter::kNone:
      return "none";
    case SpecialFilter::kColor:
      return "color";
    case SpecialFilter::kNumber:
      return "number";
  }
  return "none";
}

std::vector<std::string> QuestionPlan::retained_names() const {
  std::vector<std::string> names;
  for (const auto& c : retained) names.push_back(c.name);
  return names;
}

Extraction ExtractConcepts(const std::vector<std::string>& tokens, const kb::Vocabulary& vocabulary,
                           bool drop_subsumed) {
  std::vector<std::string> matched;  // in order of first appearance
  std::set<std::string> bigram_tokens;
  std::vector<bool> covered(tokens.size(), false);

  auto add = [&](const std::string& name) {
    if (std::find(matched.begin(), matched.end(), name) == matched.end()) matched.push_back(name);
  };

  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (tokens[i].empty()) continue;
    if (i + 1 < tokens.size() && !tokens[i + 1].empty()) {
      std::string bigram = tokens[i] + " " + tokens[i + 1];
      if (vocabulary.Contains(bigram)) {
        add(bigram);
        covered[i] = covered[i + 1] = true;
        bigram_tokens.insert(tokens[i]);
        bigram_tokens.insert(tokens[i + 1]);
      }
    }
    if (vocabulary.Contains(tokens[i])) {
      add(tokens[i]);
      covered[i] = true;
    }
  }

  Extraction out;
  for (const auto& name : matched) {
    const bool unigram = name.find(' ') == std::string::npos;
    if (drop_subsumed && unigram && bigram_tokens.count(name)) {
      AddRemoved(out.removed, name, RemovalReason::kSubsumed);
    } else {
      out.category.push_back({name, 1.0});
    }
  }
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (!tokens[i].empty() && !covered[i]) AddRemoved(out.removed, tokens[i], RemovalReason::kUnknown);
  }
  if (out.category.empty()) throw Error(ErrorCode::kNoConcepts, "no concepts found");
  return out;
}

Route RouteQuestion(std::string_view text, const std::vector<std::string>& tokens, const RoutingConfig& config) {
  const auto raw = RawWords(text);
  std::vector<std::string> lemmas;
  for (const auto& w : raw) lemmas.push_back(Lemmatize(w));

  Route route;
  auto& plan = route.plan;
  std::vector<std::pair<std::string, RemovalReason>> strip;

  const bool color = (StartsWith(raw, {"what", "color"}) && raw.size() > 2 && (raw[2] == "is" || raw[2] == "are")) ||
                     StartsWith(raw, {"what", "is", "the", "color", "of"});
  if (color) {
    plan.special = SpecialFilter::kColor;
    plan.allowed = config.what_relations;
    strip.emplace_back("color", RemovalReason::kPhraseTrigger);
  } else if (StartsWith(raw, {"how", "many"})) {
    plan.special = SpecialFilter::kNumber;
    strip.emplace_back("many", RemovalReason::kQuestionWord);
  } else if (StartsWith(raw, {"why"})) {
    plan.allowed = config.why_relations;
  } else if (StartsWith(raw, {"where"})) {
    plan.allowed = config.where_relations;
  } else if (StartsWith(raw, {"what"})) {
    plan.allowed = config.what_relations;
  }

  if (std::find(lemmas.begin(), lemmas.end(), "use") != lemmas.end()) {
    plan.allowed = {"UsedFor"};
    strip.emplace_back("use", RemovalReason::kPhraseTrigger);
  }
  const bool made_out_of = ContainsSequence(lemmas, {"make", "out", "of"});
  if (made_out_of || ContainsSequence(lemmas, {"make", "of"}) || ContainsSequence(lemmas, {"make", "from"})) {
    plan.allowed = {"MadeOf"};
    strip.emplace_back("make", RemovalReason::kPhraseTrigger);
    if (made_out_of) strip.emplace_back("out", RemovalReason::kPhraseTrigger);
  }

  for (const auto& q : kQuestionWords) strip.emplace_back(q, RemovalReason::kQuestionWord);

  for (const auto& token : tokens) {
    for (const auto& [word, reason] : strip) {
      if (token == word) {
        AddRemoved(plan.removed, token, reason);
        route.strip.insert(token);
        break;
      }
    }
  }
  return route;
}

}  // namespace veriq::qa
