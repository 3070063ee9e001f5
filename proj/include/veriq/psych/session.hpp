#pragma once

#include <array>
#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "veriq/psych/item_pool.hpp"
#include "veriq/psych/norms.hpp"

namespace veriq::psych {

enum class Regimen { kStrict, kRelaxed };
const char* RegimenName(Regimen regimen);

enum class StepKind { kPresent, kSubtestComplete, kSessionComplete };
const char* StepKindName(StepKind kind);

struct Step {
  StepKind kind = StepKind::kSessionComplete;
  std::size_t subtest_index = 0;
  std::size_t item_index = 0;
  std::size_t clue = 1;        // 1-based; always 1 outside word_reasoning
  bool discontinued = false;   // kSubtestComplete only

  bool operator==(const Step&) const = default;
};

// One scored presentation (an item, or one clue of a word_reasoning item).
struct ItemRecord {
  std::string item_id;
  SubtestKind subtest = SubtestKind::kInformation;
  std::size_t clue = 1;
  std::vector<std::string> candidates;  // rendered answers, best first
  std::vector<int> scores;              // one per candidate
  int strict = 0;                       // score of the rank-1 candidate
  int relaxed = 0;                      // best score among the candidates
  bool final = false;                   // this presentation finished the item
};

// Administration state for one examiner. Every subtest starts at item 1 and
// runs until `discontinue_run` consecutive items score zero under the strict
// regimen, or the pool is exhausted. A word_reasoning clue that scores zero
// (strict) is followed by the item's next clue before the item counts.
class Session {
 public:
  explicit Session(ItemPool pool);

  const ItemPool& pool() const { return pool_; }
  const Step& current() const { return current_; }
  const Item* current_item() const;
  const std::vector<ItemRecord>& records() const { return records_; }

  // Records examiner scores for the current presentation and moves to the
  // next step. Throws kConflict when `item_id` is not the presented item and
  // kInvalidArgument for a score outside 0..max_points or a count mismatch.
  const Step& RecordScores(const std::string& item_id, const std::vector<std::string>& candidates,
                           const std::vector<int>& scores);

  // Leaves a completed subtest for the next one. No-op while an item is
  // presented; idempotent once the session is complete.
  const Step& Advance();

  bool discontinued(std::size_t subtest_index) const { return state_[subtest_index].discontinued; }
  std::size_t consecutive_zeros(std::size_t subtest_index) const { return state_[subtest_index].consecutive_zeros; }
  std::size_t administered_items(std::size_t subtest_index) const;

  // Sum of finished item scores per subtest under the regimen. Strict takes
  // an item's final presentation; relaxed takes the best relaxed score over
  // the item's presentations.
  std::map<SubtestKind, int> RawScores(Regimen regimen) const;

 private:
  struct SubtestState {
    std::size_t consecutive_zeros = 0;
    bool discontinued = false;
  };

  ItemPool pool_;
  Step current_;
  std::vector<SubtestState> state_;
  std::vector<ItemRecord> records_;
};

struct Composition {
  std::string name;  // standard, best3, worst3 or custom
  std::array<SubtestKind, 3> subtests;

  static Composition Standard();
  static Composition Best3();
  static Composition Worst3();
  // "standard", "best3", "worst3" or a comma-separated custom triple.
  static Composition Parse(const std::string& text);
};

// Throws kInvalidArgument unless the three subtests are distinct and at
// least two of them are core.
void ValidateComposition(const Composition& composition);

struct ViqResult {
  int sum = 0;
  int viq = 0;
  double percentile = 0.0;
};

// Throws kInvalidArgument for an invalid composition or a subtest missing
// from `scaled`.
ViqResult ComposeViq(const std::map<SubtestKind, int>& scaled, const Composition& composition,
                     const NormTable& norms);

struct RegimenReport {
  std::map<SubtestKind, int> raw;
  std::map<SubtestKind, int> scaled;
  std::map<std::string, std::optional<ViqResult>> viq;  // by composition name
};

struct Report {
  Age age;
  RegimenReport strict;
  RegimenReport relaxed;
};

// Scaled scores for every subtest in the pool; a composition naming a subtest
// the pool lacks yields no VIQ. Throws kNotFound when the norms do not cover
// the age.
Report BuildReport(const Session& session, const NormTable& norms, Age age,
                   const std::vector<Composition>& compositions);

}  // namespace veriq::psych
