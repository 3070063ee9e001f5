#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "veriq/harness/engine.hpp"
#include "veriq/psych/session.hpp"

namespace veriq::harness {

inline constexpr const char* kTranscriptSchema = "veriq.transcript/1";
inline constexpr const char* kReportSchema = "veriq.report/1";

// One line of a transcript: a presentation, what the engine answered, and
// (once scored) the examiner's per-candidate scores.
struct TranscriptRecord {
  std::string item_id;
  SubtestKind subtest = SubtestKind::kInformation;
  std::size_t clue = 1;
  std::string prompt;
  nlohmann::json plan;     // null when the pipeline failed
  nlohmann::json answers;  // array
  std::vector<std::string> candidates;
  std::optional<std::vector<int>> scores;
  std::optional<int> strict;
  std::optional<int> relaxed;
  std::string error;
  std::string timestamp;

  nlohmann::json ToJson() const;
  static TranscriptRecord FromJson(const nlohmann::json& j);
};

struct Transcript {
  std::string pool_name;
  std::uint32_t model_checksum = 0;
  std::vector<TranscriptRecord> records;

  // Header line followed by one line per record, each newline-terminated.
  std::string Serialize() const;
  static Transcript Parse(const std::string& text);
  static Transcript Load(const std::string& path);
  // Writes through a temporary file and rename.
  void Save(const std::string& path) const;
};

TranscriptRecord MakeRecord(const psych::Item& item, std::size_t clue, const Presentation& presentation,
                            const std::string& timestamp);

// Every item and every clue, answered but unscored.
Transcript RunBatch(const spectral::KnowledgeModel& model, const qa::PipelineConfig& config,
                    const psych::ItemPool& pool, const Clock& clock);

// Replays scored records through the administration rules. Records the rules
// never reach are ignored; a reached record without scores is an error.
// Returns the session and the canonical transcript of what was administered.
struct Replay {
  psych::Session session;
  Transcript transcript;
};
Replay ReplayTranscript(const psych::ItemPool& pool, const Transcript& input);

nlohmann::json ReportToJson(const psych::Report& report);

std::vector<psych::Composition> DefaultCompositions();

}  // namespace veriq::harness
