#include "veriq/harness/sessions.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "veriq/error.hpp"

namespace veriq::harness {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

void WriteAtomically(const fs::path& path, const std::string& content) {
  const fs::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::kIo, "cannot write " + path.string());
    out << content;
    out.flush();
    if (!out) throw Error(ErrorCode::kIo, "short write on " + path.string());
  }
  fs::rename(tmp, path);
}

std::string FormatId(std::size_t n) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "s%06zu", n);
  return buf;
}

json Totals(const psych::Session& session) {
  json out = json::object();
  for (auto regimen : {psych::Regimen::kStrict, psych::Regimen::kRelaxed}) {
    json raw = json::object();
    for (const auto& [kind, value] : session.RawScores(regimen)) raw[SubtestKindName(kind)] = value;
    out[psych::RegimenName(regimen)] = raw;
  }
  return out;
}

}  // namespace

json SessionSpec::ToJson() const {
  return {{"pool", pool_path}, {"norms", norms_path}, {"age", age.ToString()}, {"discontinue_run", discontinue_run}};
}

SessionSpec SessionSpec::FromJson(const json& j) {
  if (!j.is_object()) throw Error(ErrorCode::kFormat, "session request must be a JSON object");
  SessionSpec spec;
  try {
    spec.pool_path = j.at("pool").get<std::string>();
    spec.norms_path = j.at("norms").get<std::string>();
    const auto& age = j.at("age");
    spec.age = psych::Age::Parse(age.is_number_integer() ? std::to_string(age.get<int>()) : age.get<std::string>());
    spec.discontinue_run = j.value("discontinue_run", std::size_t{0});
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kFormat, std::string("session request: ") + e.what());
  }
  return spec;
}

struct SessionManager::Live {
  std::string id;
  SessionSpec spec;
  psych::NormTable norms;
  psych::Session session;
  Transcript transcript;
  std::size_t advances = 0;
  std::optional<psych::Step> presented_step;
  Presentation presented;
  std::mutex mutex;

  Live(std::string id_, SessionSpec spec_, psych::NormTable norms_, psych::ItemPool pool)
      : id(std::move(id_)), spec(std::move(spec_)), norms(std::move(norms_)), session(std::move(pool)) {}
};

SessionManager::SessionManager(const spectral::KnowledgeModel& model, EngineConfig config, std::string state_dir,
                               Clock clock)
    : model_(model),
      config_(std::move(config)),
      pipeline_(config_.pipeline()),
      state_dir_(std::move(state_dir)),
      clock_(std::move(clock)),
      checksum_(spectral::ModelChecksum(model)) {
  if (!state_dir_.empty()) {
    fs::create_directories(state_dir_);
    Resume();
  }
}

SessionManager::~SessionManager() = default;

std::shared_ptr<SessionManager::Live> SessionManager::Open(const std::string& id, const SessionSpec& spec) {
  auto pool = psych::LoadItemPool(spec.pool_path);
  const std::size_t run = spec.discontinue_run ? spec.discontinue_run : config_.discontinue_run;
  if (run) {
    for (auto& sub : pool.subtests) sub.discontinue_run = run;
  }
  auto live = std::make_shared<Live>(id, spec, psych::LoadNormTable(spec.norms_path), std::move(pool));
  live->transcript.pool_name = live->session.pool().name;
  live->transcript.model_checksum = checksum_;
  return live;
}

std::string SessionManager::Create(const SessionSpec& spec) {
  std::unique_lock lock(mutex_);
  const std::string id = FormatId(next_id_);
  auto live = Open(id, spec);
  ++next_id_;
  Persist(*live);
  sessions_.emplace(id, std::move(live));
  return id;
}

bool SessionManager::Exists(const std::string& id) const {
  std::shared_lock lock(mutex_);
  return sessions_.count(id) > 0;
}

std::vector<std::string> SessionManager::ids() const {
  std::shared_lock lock(mutex_);
  std::vector<std::string> out;
  for (const auto& [id, _] : sessions_) out.push_back(id);
  return out;
}

std::shared_ptr<SessionManager::Live> SessionManager::Find(const std::string& id) const {
  std::shared_lock lock(mutex_);
  auto it = sessions_.find(id);
  if (it == sessions_.end()) throw Error(ErrorCode::kNotFound, "unknown session '" + id + "'");
  return it->second;
}

const Presentation& SessionManager::Presented(Live& live) {
  const auto& step = live.session.current();
  if (!live.presented_step || !(*live.presented_step == step)) {
    live.presented = Present(model_, pipeline_, *live.session.current_item(), step.clue);
    live.presented_step = step;
  }
  return live.presented;
}

json SessionManager::Describe(Live& live) {
  const auto& session = live.session;
  const auto& step = session.current();
  const auto& sub = session.pool().subtests[step.subtest_index];
  json out;
  out["session"] = live.id;
  out["state"] = psych::StepKindName(step.kind);
  out["subtest"] = SubtestKindName(sub.subtest);
  out["subtest_index"] = step.subtest_index;
  out["subtest_count"] = session.pool().subtests.size();
  out["consecutive_zeros"] = session.consecutive_zeros(step.subtest_index);
  out["discontinue_run"] = sub.discontinue_run;
  out["discontinued"] = step.kind == psych::StepKind::kSubtestComplete && step.discontinued;
  if (step.kind == psych::StepKind::kPresent) {
    const auto& item = *session.current_item();
    const auto& p = Presented(live);
    out["item"] = {{"id", item.id},
                   {"index", step.item_index},
                   {"count", sub.items.size()},
                   {"prompt", p.prompt},
                   {"clue", step.clue},
                   {"clues", item.steps()},
                   {"max_points", item.max_points},
                   {"rubric", item.rubric}};
    out["plan"] = p.answer ? PlanToJson(p.answer->plan) : json(nullptr);
    out["answers"] = p.answer ? AnswersToJson(p.answer->answers, item.subtest) : json::array();
    out["error"] = p.error.empty() ? json(nullptr) : json(p.error);
  } else {
    out["item"] = nullptr;
  }
  out["totals"] = Totals(session);
  return out;
}

json SessionManager::Current(const std::string& id) {
  auto live = Find(id);
  std::lock_guard lock(live->mutex);
  return Describe(*live);
}

json SessionManager::Score(const std::string& id, const std::string& item_id, std::optional<std::size_t> clue,
                           const std::vector<int>& scores) {
  auto live = Find(id);
  std::lock_guard lock(live->mutex);
  auto& session = live->session;
  const auto* item = session.current_item();
  if (!item || item->id != item_id || (clue && *clue != session.current().clue)) {
    throw Error(ErrorCode::kConflict, "item '" + item_id + "'" + (clue ? " clue " + std::to_string(*clue) : "") +
                                          " is not the current presentation");
  }
  const auto& p = Presented(*live);
  auto record = MakeRecord(*item, session.current().clue, p, clock_());
  session.RecordScores(item_id, record.candidates, scores);
  record.scores = scores;
  record.strict = session.records().back().strict;
  record.relaxed = session.records().back().relaxed;
  live->transcript.records.push_back(std::move(record));
  Persist(*live);
  return Describe(*live);
}

json SessionManager::Advance(const std::string& id) {
  auto live = Find(id);
  std::lock_guard lock(live->mutex);
  if (live->session.current().kind == psych::StepKind::kSubtestComplete) {
    live->session.Advance();
    ++live->advances;
    Persist(*live);
  }
  return Describe(*live);
}

json SessionManager::Report(const std::string& id, std::optional<psych::Age> age,
                            std::optional<std::string> composition) {
  auto live = Find(id);
  std::lock_guard lock(live->mutex);
  auto compositions = composition ? std::vector<psych::Composition>{psych::Composition::Parse(*composition)}
                                  : DefaultCompositions();
  try {
    auto report = psych::BuildReport(live->session, live->norms, age.value_or(live->spec.age), compositions);
    return ReportToJson(report);
  } catch (const Error& e) {
    if (e.code() == ErrorCode::kNotFound) throw Error(ErrorCode::kInvalidArgument, e.what());
    throw;
  }
}

Transcript SessionManager::GetTranscript(const std::string& id) {
  auto live = Find(id);
  std::lock_guard lock(live->mutex);
  return live->transcript;
}

void SessionManager::Persist(const Live& live) const {
  if (state_dir_.empty()) return;
  const fs::path dir(state_dir_);
  json meta = live.spec.ToJson();
  meta["id"] = live.id;
  meta["advances"] = live.advances;
  WriteAtomically(dir / (live.id + ".jsonl"), live.transcript.Serialize());
  WriteAtomically(dir / (live.id + ".meta.json"), meta.dump(2) + "\n");
}

void SessionManager::Resume() {
  std::vector<fs::path> metas;
  for (const auto& entry : fs::directory_iterator(state_dir_)) {
    const auto name = entry.path().filename().string();
    if (name.size() > 10 && name.ends_with(".meta.json")) metas.push_back(entry.path());
  }
  std::sort(metas.begin(), metas.end());
  for (const auto& path : metas) {
    std::ifstream in(path);
    std::stringstream text;
    text << in.rdbuf();
    json meta;
    try {
      meta = json::parse(text.str());
    } catch (const json::parse_error& e) {
      throw Error(ErrorCode::kFormat, "session metadata " + path.string() + ": " + e.what());
    }
    const auto id = meta.at("id").get<std::string>();
    auto live = Open(id, SessionSpec::FromJson(meta));
    const auto transcript = Transcript::Load((path.parent_path() / (id + ".jsonl")).string());
    const std::size_t advances = meta.value("advances", std::size_t{0});

    auto& session = live->session;
    for (const auto& record : transcript.records) {
      // A scored record after a completed subtest means the examiner moved on.
      if (session.current().kind == psych::StepKind::kSubtestComplete) {
        session.Advance();
        ++live->advances;
      }
      if (!record.scores) throw Error(ErrorCode::kFormat, "session " + id + ": unscored record in transcript");
      session.RecordScores(record.item_id, record.candidates, *record.scores);
      live->transcript.records.push_back(record);
    }
    while (live->advances < advances && session.current().kind == psych::StepKind::kSubtestComplete) {
      session.Advance();
      ++live->advances;
    }
    if (id.size() > 1 && id[0] == 's') {
      next_id_ = std::max(next_id_, static_cast<std::size_t>(std::stoull(id.substr(1))) + 1);
    }
    sessions_.emplace(id, std::move(live));
  }
}

}  // namespace veriq::harness
