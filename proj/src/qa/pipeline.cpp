#include "veriq/qa/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "veriq/error.hpp"
#include "veriq/kb/assertion.hpp"

namespace veriq::qa {

namespace {

using spectral::ScoredFeature;

std::vector<std::string> StripTokens(const std::vector<std::string>& tokens, const std::set<std::string>& strip) {
  std::vector<std::string> out;
  out.reserve(tokens.size());
  for (const auto& t : tokens) out.push_back(strip.count(t) ? std::string() : t);
  return out;
}

void TakeTop(std::vector<ScoredFeature>& ranked, std::size_t n = spectral::kAnswerListSize) {
  if (ranked.size() > n) ranked.resize(n);
}

// Descending score, compared on a grid far coarser than rounding noise so
// sums that are equal in exact arithmetic tie; ties go to the lower column.
void SortByScore(std::vector<ScoredFeature>& features) {
  double scale = 0.0;
  for (const auto& f : features) scale = std::max(scale, std::abs(f.score));
  const double grid = 1e-10 * scale;
  auto key = [&](const ScoredFeature& f) { return grid > 0.0 ? std::nearbyint(f.score / grid) : 0.0; };
  std::sort(features.begin(), features.end(), [&](const ScoredFeature& a, const ScoredFeature& b) {
    const double ka = key(a), kb = key(b);
    return ka != kb ? ka > kb : a.index < b.index;
  });
}

// First concept a word, short phrase or "What is a ___?" frame maps to.
std::string ResolveWord(std::string_view word, const kb::Vocabulary& vocabulary, const PipelineConfig& config) {
  // An exact concept name wins over its lemmatized form ("clothing", not "cloth").
  if (auto exact = kb::NormalizeConcept(word); vocabulary.Contains(exact)) return exact;
  auto tokens = NormalizeText(word, config.text);
  std::erase_if(tokens, [](const std::string& t) { return t == "why" || t == "where" || t == "what" || t == "how"; });
  try {
    auto extraction = ExtractConcepts(tokens, vocabulary, config.drop_subsumed);
    return extraction.category.front().name;
  } catch (const Error& e) {
    if (e.code() != ErrorCode::kNoConcepts) throw;
    throw Error(ErrorCode::kUnknownConcepts, "unknown word: " + std::string(word));
  }
}

}  // namespace

std::vector<ScoredFeature> FilterColorNumber(const std::vector<ScoredFeature>& candidates, SpecialFilter kind,
                                             const spectral::KnowledgeModel& model, const PipelineConfig& config) {
  if (kind == SpecialFilter::kNone) return candidates;
  const std::string target = kind == SpecialFilter::kColor ? "color" : "number";
  const auto& reference = kind == SpecialFilter::kColor ? config.color_reference : config.number_reference;
  const auto& vocab = model.vocabulary;
  if (!vocab.Contains(target)) throw Error(ErrorCode::kConfig, "knowledge base has no concept '" + target + "'");

  const kb::Feature is_a{kb::Direction::kRight, "IsA", target};
  double weakest = 0.0;
  bool any = false;
  for (const auto& ref : reference) {
    if (!vocab.Contains(ref)) continue;
    const double s = spectral::FeatureScore(model, ref, is_a);
    weakest = any ? std::min(weakest, s) : s;
    any = true;
  }
  if (!any) throw Error(ErrorCode::kConfig, "empty " + target + " reference set");
  const double threshold = weakest - (1.0 - config.reference_fraction) * std::abs(weakest);

  std::map<std::string, bool> passes;
  std::vector<ScoredFeature> out;
  for (const auto& c : candidates) {
    const auto& name = c.feature.concept_name;
    if (config.answer_exclusions.count(name)) continue;
    auto [it, inserted] = passes.try_emplace(name, false);
    if (inserted) it->second = spectral::FeatureScore(model, name, is_a) >= threshold;
    if (it->second) out.push_back(c);
  }
  return out;
}

Answer AnswerOpenQuestion(std::string_view text, const spectral::KnowledgeModel& model, const PipelineConfig& config,
                          SubtestKind kind) {
  const auto tokens = NormalizeText(text, config.text);
  auto route = RouteQuestion(text, tokens, config.routing);
  Answer answer;
  answer.plan = std::move(route.plan);
  answer.plan.kind = kind;

  auto extraction = ExtractConcepts(StripTokens(tokens, route.strip), model.vocabulary, config.drop_subsumed);
  answer.plan.retained = std::move(extraction.category);
  answer.plan.removed.insert(answer.plan.removed.end(), extraction.removed.begin(), extraction.removed.end());

  const bool special = answer.plan.special != SpecialFilter::kNone;
  answer.answers = spectral::PredictFeatures(model, answer.plan.retained, answer.plan.allowed,
                                             special ? spectral::kNoLimit : spectral::kAnswerListSize);
  if (special) {
    answer.answers = FilterColorNumber(answer.answers, answer.plan.special, model, config);
    TakeTop(answer.answers);
  }
  return answer;
}

Answer AnswerVocabulary(std::string_view word, const spectral::KnowledgeModel& model, const PipelineConfig& config) {
  Answer answer;
  answer.plan.kind = SubtestKind::kVocabulary;
  answer.plan.allowed = config.vocabulary_relations;
  answer.plan.retained = {{ResolveWord(word, model.vocabulary, config), 1.0}};
  answer.answers = spectral::PredictFeatures(model, answer.plan.retained, answer.plan.allowed);
  return answer;
}

ClueState::ClueState(std::vector<std::string> clues) {
  for (auto& c : clues) Add(std::move(c));
}

void ClueState::Add(std::string clue) {
  if (clues_.size() >= 3) throw Error(ErrorCode::kInvalidArgument, "word reasoning items have at most 3 clues");
  clues_.push_back(std::move(clue));
}

QuestionPlan ClueState::Plan(const kb::Vocabulary& vocabulary, const PipelineConfig& config) const {
  QuestionPlan plan;
  plan.kind = SubtestKind::kWordReasoning;
  auto remember = [&](const RemovedConcept& r) {
    if (std::find(plan.removed.begin(), plan.removed.end(), r) == plan.removed.end()) plan.removed.push_back(r);
  };
  // Clue by clue, so a later clue never changes what an earlier one contributed.
  for (const auto& clue : clues_) {
    Extraction extraction;
    try {
      extraction = ExtractConcepts(NormalizeText(clue, config.text), vocabulary, config.drop_subsumed);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kNoConcepts) throw;
      for (const auto& t : NormalizeText(clue, config.text)) remember({t, RemovalReason::kUnknown});
      continue;
    }
    for (const auto& r : extraction.removed) remember(r);
    for (const auto& c : extraction.category) {
      if (config.word_reasoning_stop_concepts.count(c.name)) {
        remember({c.name, RemovalReason::kStopConcept});
        continue;
      }
      auto same = [&](const spectral::WeightedConcept& w) { return w.name == c.name; };
      if (std::none_of(plan.retained.begin(), plan.retained.end(), same)) plan.retained.push_back(c);
    }
  }
  return plan;
}

Answer AnswerWordReasoning(const ClueState& clues, const spectral::KnowledgeModel& model,
                           const PipelineConfig& config) {
  if (clues.clues().empty()) throw Error(ErrorCode::kInvalidArgument, "word reasoning needs at least one clue");
  Answer answer;
  answer.plan = clues.Plan(model.vocabulary, config);
  if (answer.plan.retained.empty()) throw Error(ErrorCode::kNoConcepts, "no concepts found");

  auto ranked = spectral::PredictFeatures(model, answer.plan.retained, {}, spectral::kNoLimit);
  std::set<std::string> seen;
  for (auto& f : ranked) {
    if (!seen.insert(f.feature.concept_name).second) continue;
    answer.answers.push_back(std::move(f));
    if (answer.answers.size() == spectral::kAnswerListSize) break;
  }
  return answer;
}

Answer AnswerSimilarities(std::string_view word_a, std::string_view word_b, const spectral::KnowledgeModel& model,
                          const PipelineConfig& config) {
  Answer answer;
  answer.plan.kind = SubtestKind::kSimilarities;
  const std::string a = ResolveWord(word_a, model.vocabulary, config);
  const std::string b = ResolveWord(word_b, model.vocabulary, config);
  answer.plan.retained = {{a, 1.0}, {b, 1.0}};

  auto scored_set = [&](const std::string& word) {
    std::vector<std::string> concepts{word};
    if (config.similarity_neighbors > 0) {
      for (const auto& n : spectral::ConceptNeighbors(model, word, config.similarity_neighbors)) {
        concepts.push_back(n.name);
      }
    }
    std::map<std::size_t, ScoredFeature> merged;
    for (const auto& c : concepts) {
      for (auto& f : spectral::PredictFeatures(model, {{c, 1.0}}, {}, config.similarity_features)) {
        auto [it, inserted] = merged.try_emplace(f.index, f);
        if (!inserted) it->second.score = std::max(it->second.score, f.score);
      }
    }
    return merged;
  };

  const auto set_a = scored_set(a);
  const auto set_b = scored_set(b);
  std::vector<ScoredFeature> shared;
  for (const auto& [index, fa] : set_a) {
    auto it = set_b.find(index);
    if (it == set_b.end()) continue;
    ScoredFeature f = fa;
    f.score = fa.score + it->second.score;
    shared.push_back(std::move(f));
  }
  SortByScore(shared);
  TakeTop(shared);
  answer.answers = std::move(shared);
  return answer;
}

}  // namespace veriq::qa
