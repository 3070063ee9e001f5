#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "veriq/kb/matrix_builder.hpp"
#include "veriq/psych/item_pool.hpp"
#include "veriq/qa/pipeline.hpp"
#include "veriq/spectral/model.hpp"
#include "veriq/spectral/svd.hpp"

namespace veriq::harness {

struct EngineConfig {
  std::string model_path;
  std::size_t k = 500;
  std::uint64_t seed = 20120301;
  bool drop_subsumed = true;
  spectral::RelationSet what_relations = qa::RoutingConfig{}.what_relations;
  std::vector<std::string> number_reference = qa::PipelineConfig{}.number_reference;
  std::size_t discontinue_run = 0;  // 0 keeps each pool's own value
  std::string listen = "127.0.0.1:8080";

  qa::PipelineConfig pipeline() const;
};

// Model path from an explicit value, else the VERIQ_MODEL environment variable.
std::string ResolveModelPath(const std::string& explicit_path);

struct IngestOptions {
  std::string language = "en";
  kb::PruneOptions prune;
  kb::StrengthWeighting weighting;
  spectral::SvdOptions svd;
};

struct IngestSummary {
  kb::ParseStats parse;
  std::size_t retained_assertions = 0;
  std::size_t concepts = 0;
  std::size_t features = 0;
  std::size_t nonzeros = 0;
  std::size_t requested_k = 0;
  std::size_t k = 0;  // min(requested, numerical rank)
  std::size_t iterations = 0;
  std::vector<double> leading_singular_values;
};

// parse -> prune -> build matrix -> truncated SVD. The stored rank is the
// requested k clipped to the matrix's numerical rank.
spectral::KnowledgeModel BuildKnowledgeModel(std::istream& dump, const IngestOptions& options,
                                             IngestSummary* summary = nullptr);

// Produces the engine's answer for one presentation of an item.
struct Presentation {
  std::string prompt;  // text passed to the pipeline
  std::optional<qa::Answer> answer;
  std::string error;   // set when the pipeline rejected the item

  // Named answers as shown to the examiner: the concept for word_reasoning,
  // otherwise the rendered feature.
  std::vector<std::string> candidates() const;
};

Presentation Present(const spectral::KnowledgeModel& model, const qa::PipelineConfig& config,
                     const psych::Item& item, std::size_t clue);

nlohmann::json PlanToJson(const qa::QuestionPlan& plan);
nlohmann::json AnswersToJson(const spectral::AnswerList& answers, SubtestKind kind);

// ISO-8601 UTC timestamps; VERIQ_FIXED_TIME pins the value for reproducible runs.
using Clock = std::function<std::string()>;
Clock DefaultClock();
Clock FixedClock(std::string value);

}  // namespace veriq::harness
