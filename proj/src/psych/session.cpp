#include "veriq/psych/session.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include "veriq/error.hpp"

namespace veriq::psych {

const char* RegimenName(Regimen regimen) { return regimen == Regimen::kStrict ? "strict" : "relaxed"; }

const char* StepKindName(StepKind kind) {
  switch (kind) {
    case StepKind::kPresent:
      return "present";
    case StepKind::kSubtestComplete:
      return "subtest_complete";
    case StepKind::kSessionComplete:
      return "session_complete";
  }
  return "session_complete";
}

Session::Session(ItemPool pool) : pool_(std::move(pool)), state_(pool_.subtests.size()) {
  if (pool_.subtests.empty()) throw Error(ErrorCode::kInvalidArgument, "item pool has no subtests");
  current_ = Step{StepKind::kPresent, 0, 0, 1, false};
}

const Item* Session::current_item() const {
  if (current_.kind != StepKind::kPresent) return nullptr;
  return &pool_.subtests[current_.subtest_index].items[current_.item_index];
}

const Step& Session::RecordScores(const std::string& item_id, const std::vector<std::string>& candidates,
                                  const std::vector<int>& scores) {
  const Item* item = current_item();
  if (!item || item->id != item_id) {
    throw Error(ErrorCode::kConflict, "item '" + item_id + "' is not the current item");
  }
  if (scores.size() != candidates.size()) {
    throw Error(ErrorCode::kInvalidArgument, "expected " + std::to_string(candidates.size()) +
                                                 " scores, got " + std::to_string(scores.size()));
  }
  for (int s : scores) {
    if (s < 0 || s > item->max_points) {
      throw Error(ErrorCode::kInvalidArgument,
                  "score " + std::to_string(s) + " outside 0.." + std::to_string(item->max_points));
    }
  }

  ItemRecord record;
  record.item_id = item->id;
  record.subtest = item->subtest;
  record.clue = current_.clue;
  record.candidates = candidates;
  record.scores = scores;
  record.strict = scores.empty() ? 0 : scores.front();
  record.relaxed = scores.empty() ? 0 : *std::max_element(scores.begin(), scores.end());

  const auto s = current_.subtest_index;
  const auto& sub = pool_.subtests[s];
  if (record.strict == 0 && current_.clue < item->steps()) {
    records_.push_back(std::move(record));
    current_.clue += 1;
    return current_;
  }

  record.final = true;
  records_.push_back(std::move(record));
  auto& state = state_[s];
  state.consecutive_zeros = records_.back().strict == 0 ? state.consecutive_zeros + 1 : 0;
  if (state.consecutive_zeros >= sub.discontinue_run) {
    state.discontinued = true;
    current_ = Step{StepKind::kSubtestComplete, s, current_.item_index, 1, true};
  } else if (current_.item_index + 1 == sub.items.size()) {
    current_ = Step{StepKind::kSubtestComplete, s, current_.item_index, 1, false};
  } else {
    current_ = Step{StepKind::kPresent, s, current_.item_index + 1, 1, false};
  }
  return current_;
}

const Step& Session::Advance() {
  if (current_.kind != StepKind::kSubtestComplete) return current_;
  const auto next = current_.subtest_index + 1;
  if (next < pool_.subtests.size()) {
    current_ = Step{StepKind::kPresent, next, 0, 1, false};
  } else {
    current_ = Step{StepKind::kSessionComplete, current_.subtest_index, current_.item_index, 1, false};
  }
  return current_;
}

std::size_t Session::administered_items(std::size_t subtest_index) const {
  const auto kind = pool_.subtests[subtest_index].subtest;
  return static_cast<std::size_t>(std::count_if(records_.begin(), records_.end(), [&](const ItemRecord& r) {
    return r.subtest == kind && r.final;
  }));
}

std::map<SubtestKind, int> Session::RawScores(Regimen regimen) const {
  std::map<SubtestKind, int> raw;
  for (const auto& sub : pool_.subtests) raw[sub.subtest] = 0;
  std::map<std::string, int> best_relaxed;
  for (const auto& r : records_) {
    auto& best = best_relaxed[r.item_id];
    best = std::max(best, r.relaxed);
    if (!r.final) continue;
    raw[r.subtest] += regimen == Regimen::kStrict ? r.strict : best;
  }
  return raw;
}

Composition Composition::Standard() {
  return {"standard", {SubtestKind::kInformation, SubtestKind::kWordReasoning, SubtestKind::kVocabulary}};
}
Composition Composition::Best3() {
  return {"best3", {SubtestKind::kInformation, SubtestKind::kVocabulary, SubtestKind::kSimilarities}};
}
Composition Composition::Worst3() {
  return {"worst3", {SubtestKind::kInformation, SubtestKind::kWordReasoning, SubtestKind::kComprehension}};
}

Composition Composition::Parse(const std::string& text) {
  if (text == "standard") return Standard();
  if (text == "best3") return Best3();
  if (text == "worst3") return Worst3();
  std::string body = text.rfind("custom:", 0) == 0 ? text.substr(7) : text;
  std::vector<SubtestKind> parts;
  std::istringstream in(body);
  std::string name;
  while (std::getline(in, name, ',')) {
    auto kind = ParseSubtestKind(name);
    if (!kind) throw Error(ErrorCode::kInvalidArgument, "unknown composition or subtest '" + name + "'");
    parts.push_back(*kind);
  }
  if (parts.size() != 3) throw Error(ErrorCode::kInvalidArgument, "a composition needs exactly 3 subtests");
  Composition c{"custom", {parts[0], parts[1], parts[2]}};
  ValidateComposition(c);
  return c;
}

void ValidateComposition(const Composition& composition) {
  std::set<SubtestKind> distinct(composition.subtests.begin(), composition.subtests.end());
  if (distinct.size() != 3) throw Error(ErrorCode::kInvalidArgument, "composition repeats a subtest");
  const auto core = std::count_if(distinct.begin(), distinct.end(), IsCore);
  if (core < 2) {
    throw Error(ErrorCode::kInvalidArgument, "composition '" + composition.name + "' has " +
                                                 std::to_string(core) + " core subtests; at least 2 required");
  }
}

ViqResult ComposeViq(const std::map<SubtestKind, int>& scaled, const Composition& composition,
                     const NormTable& norms) {
  ValidateComposition(composition);
  ViqResult result;
  for (auto kind : composition.subtests) {
    auto it = scaled.find(kind);
    if (it == scaled.end()) {
      throw Error(ErrorCode::kInvalidArgument, std::string("no scaled score for ") + SubtestKindName(kind));
    }
    result.sum += it->second;
  }
  result.viq = norms.Viq(result.sum);
  result.percentile = ViqPercentile(result.viq);
  return result;
}

Report BuildReport(const Session& session, const NormTable& norms, Age age,
                   const std::vector<Composition>& compositions) {
  Report report;
  report.age = age;
  for (auto regimen : {Regimen::kStrict, Regimen::kRelaxed}) {
    auto& out = regimen == Regimen::kStrict ? report.strict : report.relaxed;
    out.raw = session.RawScores(regimen);
    for (const auto& [kind, raw] : out.raw) {
      out.scaled[kind] = norms.Scale(raw, kind, age);
    }
    for (const auto& c : compositions) {
      ValidateComposition(c);
      const bool complete = std::all_of(c.subtests.begin(), c.subtests.end(),
                                        [&](SubtestKind k) { return out.scaled.count(k) > 0; });
      out.viq[c.name] = complete ? std::optional(ComposeViq(out.scaled, c, norms)) : std::nullopt;
    }
  }
  return report;
}

}  // namespace veriq::psych
