#include "veriq/harness/engine.hpp"

#include <chrono>
#include <cstdlib>
#include <ctime>

#include "veriq/error.hpp"

namespace veriq::harness {

using nlohmann::json;

qa::PipelineConfig EngineConfig::pipeline() const {
  qa::PipelineConfig config;
  config.drop_subsumed = drop_subsumed;
  config.routing.what_relations = what_relations;
  config.number_reference = number_reference;
  return config;
}

std::string ResolveModelPath(const std::string& explicit_path) {
  if (!explicit_path.empty()) return explicit_path;
  if (const char* env = std::getenv("VERIQ_MODEL"); env && *env) return env;
  throw Error(ErrorCode::kInvalidArgument, "no model given (use --model or set VERIQ_MODEL)");
}

spectral::KnowledgeModel BuildKnowledgeModel(std::istream& dump, const IngestOptions& options,
                                             IngestSummary* summary) {
  auto parsed = kb::ParseAssertions(dump, options.language);
  auto pruned = kb::PruneAndIndex(parsed.assertions, options.prune);
  auto built = kb::BuildMatrix(pruned.assertions, pruned.vocabulary, options.weighting);

  spectral::KnowledgeModel model;
  model.vocabulary = std::move(pruned.vocabulary);
  model.matrix = std::move(built.matrix);

  auto svd_options = options.svd;
  svd_options.k = std::min(options.svd.k, std::min(model.matrix.rows, model.matrix.cols));
  auto full = spectral::TruncatedSvd(model.matrix, svd_options);
  model.spectral = full.Truncated(std::max<std::size_t>(1, spectral::NumericalRank(full)));

  if (summary) {
    summary->parse = parsed.stats;
    summary->retained_assertions = pruned.assertions.size();
    summary->concepts = model.vocabulary.concept_count();
    summary->features = model.vocabulary.feature_count();
    summary->nonzeros = model.matrix.nonzeros();
    summary->requested_k = options.svd.k;
    summary->k = model.spectral.rank();
    summary->iterations = model.spectral.iterations;
    summary->leading_singular_values.clear();
    for (Eigen::Index i = 0; i < model.spectral.s.size() && i < 10; ++i) {
      summary->leading_singular_values.push_back(model.spectral.s[i]);
    }
  }
  return model;
}

std::vector<std::string> Presentation::candidates() const {
  std::vector<std::string> out;
  if (!answer) return out;
  for (const auto& f : answer->answers) {
    out.push_back(answer->plan.kind == SubtestKind::kWordReasoning ? f.feature.concept_name : f.feature.Render());
  }
  return out;
}

Presentation Present(const spectral::KnowledgeModel& model, const qa::PipelineConfig& config,
                     const psych::Item& item, std::size_t clue) {
  Presentation p;
  try {
    switch (item.subtest) {
      case SubtestKind::kInformation:
      case SubtestKind::kComprehension:
        p.prompt = item.prompt;
        p.answer = qa::AnswerOpenQuestion(item.prompt, model, config, item.subtest);
        break;
      case SubtestKind::kVocabulary:
        p.prompt = item.prompt;
        p.answer = qa::AnswerVocabulary(item.prompt, model, config);
        break;
      case SubtestKind::kWordReasoning: {
        if (clue < 1 || clue > item.clues.size()) {
          throw Error(ErrorCode::kInvalidArgument, "clue " + std::to_string(clue) + " out of range");
        }
        p.prompt = item.clues[clue - 1];
        qa::ClueState clues(std::vector<std::string>(item.clues.begin(), item.clues.begin() + clue));
        p.answer = qa::AnswerWordReasoning(clues, model, config);
        break;
      }
      case SubtestKind::kSimilarities:
        p.prompt = item.words[0] + " / " + item.words[1];
        p.answer = qa::AnswerSimilarities(item.words[0], item.words[1], model, config);
        break;
    }
  } catch (const Error& e) {
    if (e.code() != ErrorCode::kNoConcepts && e.code() != ErrorCode::kUnknownConcepts &&
        e.code() != ErrorCode::kConfig) {
      throw;
    }
    p.answer.reset();
    p.error = e.what();
  }
  return p;
}

json PlanToJson(const qa::QuestionPlan& plan) {
  json removed = json::array();
  for (const auto& r : plan.removed) {
    removed.push_back({{"concept", r.name}, {"reason", qa::RemovalReasonName(r.reason)}});
  }
  return {{"kind", SubtestKindName(plan.kind)},
          {"retained", plan.retained_names()},
          {"removed", removed},
          {"allowed", std::vector<std::string>(plan.allowed.begin(), plan.allowed.end())},
          {"special", qa::SpecialFilterName(plan.special)}};
}

json AnswersToJson(const spectral::AnswerList& answers, SubtestKind kind) {
  json out = json::array();
  int rank = 1;
  for (const auto& f : answers) {
    out.push_back({{"rank", rank++},
                   {"answer", kind == SubtestKind::kWordReasoning ? f.feature.concept_name : f.feature.Render()},
                   {"relation", f.feature.relation},
                   {"direction", kb::DirectionName(f.feature.direction)},
                   {"concept", f.feature.concept_name},
                   {"score", f.score}});
  }
  return out;
}

Clock FixedClock(std::string value) {
  return [value = std::move(value)]() { return value; };
}

Clock DefaultClock() {
  if (const char* fixed = std::getenv("VERIQ_FIXED_TIME"); fixed && *fixed) return FixedClock(fixed);
  return []() {
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm utc{};
    gmtime_r(&now, &utc);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &utc);
    return std::string(buf);
  };
}

}  // namespace veriq::harness
