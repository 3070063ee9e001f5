#pragma once

#include <cstddef>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <string>
#include <vector>

#include <json.hpp>

#include "veriq/harness/engine.hpp"
#include "veriq/harness/transcript.hpp"
#include "veriq/psych/norms.hpp"
#include "veriq/psych/session.hpp"

namespace veriq::harness {

struct SessionSpec {
  std::string pool_path;
  std::string norms_path;
  psych::Age age;
  std::size_t discontinue_run = 0;  // 0 keeps the default

  nlohmann::json ToJson() const;
  static SessionSpec FromJson(const nlohmann::json& j);
};

// Live administration sessions over one model. With a state directory every
// mutation rewrites <dir>/<id>.meta.json and <dir>/<id>.jsonl, and sessions
// found there at construction are resumed by replaying their transcripts.
class SessionManager {
 public:
  SessionManager(const spectral::KnowledgeModel& model, EngineConfig config, std::string state_dir = {},
                 Clock clock = DefaultClock());
  ~SessionManager();

  std::string Create(const SessionSpec& spec);
  bool Exists(const std::string& id) const;
  std::vector<std::string> ids() const;

  // Current step, the engine's answers when an item is presented, and
  // running totals for both regimens.
  nlohmann::json Current(const std::string& id);
  // Scores the presented step. `clue` (when given) must match the presented
  // clue. Returns the new current state.
  nlohmann::json Score(const std::string& id, const std::string& item_id, std::optional<std::size_t> clue,
                       const std::vector<int>& scores);
  nlohmann::json Advance(const std::string& id);
  // Defaults to the session's age and the three standard compositions.
  nlohmann::json Report(const std::string& id, std::optional<psych::Age> age,
                        std::optional<std::string> composition);
  Transcript GetTranscript(const std::string& id);

 private:
  struct Live;

  std::shared_ptr<Live> Find(const std::string& id) const;
  std::shared_ptr<Live> Open(const std::string& id, const SessionSpec& spec);
  const Presentation& Presented(Live& live);
  nlohmann::json Describe(Live& live);
  void Persist(const Live& live) const;
  void Resume();

  const spectral::KnowledgeModel& model_;
  EngineConfig config_;
  qa::PipelineConfig pipeline_;
  std::string state_dir_;
  Clock clock_;
  std::uint32_t checksum_;

  mutable std::shared_mutex mutex_;
  std::map<std::string, std::shared_ptr<Live>> sessions_;
  std::size_t next_id_ = 1;
};

}  // namespace veriq::harness
