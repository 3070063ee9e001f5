#include "veriq/harness/transcript.hpp"

#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include "veriq/error.hpp"

namespace veriq::harness {

using nlohmann::json;

json TranscriptRecord::ToJson() const {
  json j;
  j["item_id"] = item_id;
  j["subtest"] = SubtestKindName(subtest);
  j["clue"] = clue;
  j["prompt"] = prompt;
  j["plan"] = plan;
  j["answers"] = answers.is_null() ? json::array() : answers;
  j["scores"] = scores ? json(*scores) : json(nullptr);
  j["strict"] = strict ? json(*strict) : json(nullptr);
  j["relaxed"] = relaxed ? json(*relaxed) : json(nullptr);
  j["error"] = error.empty() ? json(nullptr) : json(error);
  j["timestamp"] = timestamp;
  return j;
}

TranscriptRecord TranscriptRecord::FromJson(const json& j) {
  try {
    TranscriptRecord r;
    r.item_id = j.at("item_id").get<std::string>();
    auto kind = ParseSubtestKind(j.at("subtest").get<std::string>());
    if (!kind) throw Error(ErrorCode::kFormat, "transcript: unknown subtest");
    r.subtest = *kind;
    r.clue = j.at("clue").get<std::size_t>();
    r.prompt = j.value("prompt", std::string());
    r.plan = j.value("plan", json(nullptr));
    r.answers = j.value("answers", json::array());
    for (const auto& a : r.answers) r.candidates.push_back(a.at("answer").get<std::string>());
    if (j.contains("scores") && !j.at("scores").is_null()) r.scores = j.at("scores").get<std::vector<int>>();
    if (j.contains("strict") && !j.at("strict").is_null()) r.strict = j.at("strict").get<int>();
    if (j.contains("relaxed") && !j.at("relaxed").is_null()) r.relaxed = j.at("relaxed").get<int>();
    if (j.contains("error") && !j.at("error").is_null()) r.error = j.at("error").get<std::string>();
    r.timestamp = j.value("timestamp", std::string());
    return r;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kFormat, std::string("transcript record: ") + e.what());
  }
}

std::string Transcript::Serialize() const {
  std::string out = json{{"schema", kTranscriptSchema}, {"pool", pool_name}, {"model_checksum", model_checksum}}.dump();
  out += '\n';
  for (const auto& r : records) {
    out += r.ToJson().dump();
    out += '\n';
  }
  return out;
}

Transcript Transcript::Parse(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  Transcript t;
  bool header = false;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    json j;
    try {
      j = json::parse(line);
    } catch (const json::parse_error& e) {
      throw Error(ErrorCode::kFormat, std::string("transcript: invalid JSON line: ") + e.what());
    }
    if (!header) {
      if (j.value("schema", std::string()) != kTranscriptSchema) {
        throw Error(ErrorCode::kFormat, "transcript: missing or unsupported schema header");
      }
      t.pool_name = j.value("pool", std::string());
      t.model_checksum = j.value("model_checksum", 0u);
      header = true;
      continue;
    }
    t.records.push_back(TranscriptRecord::FromJson(j));
  }
  if (!header) throw Error(ErrorCode::kFormat, "transcript: empty");
  return t;
}

Transcript Transcript::Load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, "cannot open transcript: " + path);
  std::ostringstream text;
  text << in.rdbuf();
  return Parse(text.str());
}

void Transcript::Save(const std::string& path) const {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::kIo, "cannot write transcript: " + path);
    out << Serialize();
    if (!out) throw Error(ErrorCode::kIo, "short write on transcript: " + path);
  }
  std::filesystem::rename(tmp, path);
}

TranscriptRecord MakeRecord(const psych::Item& item, std::size_t clue, const Presentation& presentation,
                            const std::string& timestamp) {
  TranscriptRecord r;
  r.item_id = item.id;
  r.subtest = item.subtest;
  r.clue = clue;
  r.prompt = presentation.prompt;
  r.timestamp = timestamp;
  if (presentation.answer) {
    r.plan = PlanToJson(presentation.answer->plan);
    r.answers = AnswersToJson(presentation.answer->answers, item.subtest);
    r.candidates = presentation.candidates();
  } else {
    r.plan = nullptr;
    r.answers = json::array();
    r.error = presentation.error;
  }
  return r;
}

Transcript RunBatch(const spectral::KnowledgeModel& model, const qa::PipelineConfig& config,
                    const psych::ItemPool& pool, const Clock& clock) {
  Transcript t;
  t.pool_name = pool.name;
  t.model_checksum = spectral::ModelChecksum(model);
  for (const auto& sub : pool.subtests) {
    for (const auto& item : sub.items) {
      for (std::size_t clue = 1; clue <= item.steps(); ++clue) {
        t.records.push_back(MakeRecord(item, clue, Present(model, config, item, clue), clock()));
      }
    }
  }
  return t;
}

Replay ReplayTranscript(const psych::ItemPool& pool, const Transcript& input) {
  std::map<std::pair<std::string, std::size_t>, const TranscriptRecord*> by_step;
  for (const auto& r : input.records) by_step[{r.item_id, r.clue}] = &r;

  Replay replay{psych::Session(pool), Transcript{}};
  replay.transcript.pool_name = input.pool_name;
  replay.transcript.model_checksum = input.model_checksum;
  auto& session = replay.session;
  while (session.current().kind != psych::StepKind::kSessionComplete) {
    if (session.current().kind == psych::StepKind::kSubtestComplete) {
      session.Advance();
      continue;
    }
    const auto* item = session.current_item();
    const auto clue = session.current().clue;
    auto it = by_step.find({item->id, clue});
    if (it == by_step.end()) {
      throw Error(ErrorCode::kFormat,
                  "transcript has no record for item '" + item->id + "' clue " + std::to_string(clue));
    }
    const auto& record = *it->second;
    if (!record.scores) {
      throw Error(ErrorCode::kInvalidArgument,
                  "item '" + item->id + "' clue " + std::to_string(clue) + " has not been scored");
    }
    session.RecordScores(item->id, record.candidates, *record.scores);
    TranscriptRecord out = record;
    out.strict = session.records().back().strict;
    out.relaxed = session.records().back().relaxed;
    replay.transcript.records.push_back(std::move(out));
  }
  return replay;
}

json ReportToJson(const psych::Report& report) {
  auto regimen = [](const psych::RegimenReport& r) {
    json raw = json::object(), scaled = json::object(), viq = json::object();
    for (const auto& [k, v] : r.raw) raw[SubtestKindName(k)] = v;
    for (const auto& [k, v] : r.scaled) scaled[SubtestKindName(k)] = v;
    for (const auto& [name, result] : r.viq) {
      viq[name] = result ? json{{"sum", result->sum}, {"viq", result->viq}, {"percentile", result->percentile}}
                         : json(nullptr);
    }
    return json{{"raw", raw}, {"scaled", scaled}, {"viq", viq}};
  };
  return {{"schema", kReportSchema},
          {"age", report.age.ToString()},
          {"regimens", {{"strict", regimen(report.strict)}, {"relaxed", regimen(report.relaxed)}}}};
}

std::vector<psych::Composition> DefaultCompositions() {
  return {psych::Composition::Standard(), psych::Composition::Best3(), psych::Composition::Worst3()};
}

}  // namespace veriq::harness
