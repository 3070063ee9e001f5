#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "veriq/error.hpp"
#include "veriq/psych/norms.hpp"
#include "veriq/psych/session.hpp"

using namespace veriq;
using namespace veriq::psych;

namespace {

const std::string kPool = std::string(VERIQ_DATA_DIR) + "/pools/sample_pool.json";
const std::string kNorms = std::string(VERIQ_DATA_DIR) + "/norms/synthetic_norms.csv";

ErrorCode CodeOf(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("no error thrown");
  return ErrorCode::kInvalidArgument;
}

std::string MessageOf(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.what();
  }
  return {};
}

std::vector<std::string> Candidates(std::size_t n) {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < n; ++i) out.push_back("answer " + std::to_string(i + 1));
  return out;
}

// Scores the current presentation with rank-1 score `strict` and best `relaxed`.
void Score(Session& s, int strict, int relaxed) {
  std::vector<int> scores(5, 0);
  scores[0] = strict;
  scores[3] = relaxed;
  s.RecordScores(s.current_item()->id, Candidates(5), scores);
}

std::string PoolJson(const std::string& subtests) {
  return R"({"schema": "veriq.pool/1", "name": "t", "subtests": [)" + subtests + "]}";
}

}  // namespace

TEST_CASE("bundled pool") {
  auto pool = LoadItemPool(kPool);
  REQUIRE(pool.subtests.size() == 5);
  const std::vector<SubtestKind> order{SubtestKind::kInformation, SubtestKind::kVocabulary,
                                       SubtestKind::kWordReasoning, SubtestKind::kComprehension,
                                       SubtestKind::kSimilarities};
  for (std::size_t i = 0; i < 5; ++i) {
    CHECK(pool.subtests[i].subtest == order[i]);
    CHECK(pool.subtests[i].discontinue_run == 5);
    CHECK(pool.subtests[i].core() == (i < 3));
  }
  for (const auto& item : pool.subtests[2].items) CHECK((item.clues.size() >= 1 && item.clues.size() <= 3));
}

TEST_CASE("pool validation") {
  auto info = [](const std::string& items) { return R"({"subtest": "information", "items": [)" + items + "]}"; };
  const std::string ok_item = R"({"id": "i1", "prompt": "q", "max_points": 1})";
  CHECK_NOTHROW(ParseItemPool(PoolJson(info(ok_item))));

  const std::string four = R"({"subtest": "word_reasoning", "items": [{"id": "w", "max_points": 1,
      "clues": ["a", "b", "c", "d"]}]})";
  CHECK(CodeOf([&] { ParseItemPool(PoolJson(four)); }) == ErrorCode::kFormat);
  CHECK(MessageOf([&] { ParseItemPool(PoolJson(four)); }).find("clues") != std::string::npos);

  CHECK(CodeOf([&] { ParseItemPool(PoolJson(info(""))); }) == ErrorCode::kFormat);
  CHECK(MessageOf([&] { ParseItemPool(PoolJson(info(ok_item + "," + ok_item))); }).find("duplicate") !=
        std::string::npos);
  CHECK(MessageOf([&] { ParseItemPool(PoolJson(info(R"({"id": "i1", "prompt": "q", "max_points": 3})"))); })
            .find("max_points") != std::string::npos);
  CHECK(CodeOf([&] { ParseItemPool(PoolJson(R"({"subtest": "arithmetic", "items": [{"id": "x"}]})")); }) ==
        ErrorCode::kFormat);
  CHECK(CodeOf([&] { ParseItemPool(R"({"name": "t", "subtests": []})"); }) == ErrorCode::kFormat);
  CHECK(CodeOf([&] {
          ParseItemPool(PoolJson(R"({"subtest": "information", "discontinue_run": 0, "items": [)" + ok_item + "]}"));
        }) == ErrorCode::kFormat);
  CHECK(CodeOf([&] { ParseItemPool("{not json"); }) == ErrorCode::kFormat);
  CHECK(CodeOf([&] { LoadItemPool("/nonexistent/pool.json"); }) == ErrorCode::kIo);
}

TEST_CASE("five zeros in a row stop the subtest") {
  Session s(oracle::MakePool({SubtestKind::kInformation, SubtestKind::kVocabulary}, 10, 3, 1));
  for (int strict : {1, 1, 0, 0, 0, 0}) {
    Score(s, strict, strict);
    CHECK(s.current().kind == StepKind::kPresent);
  }
  CHECK(s.consecutive_zeros(0) == 4);
  Score(s, 0, 0);
  CHECK(s.current().kind == StepKind::kSubtestComplete);
  CHECK(s.current().discontinued);
  CHECK(s.discontinued(0));
  CHECK(s.administered_items(0) == 7);
  CHECK(s.current_item() == nullptr);
  CHECK(CodeOf([&] { s.RecordScores("information-8", Candidates(5), {0, 0, 0, 0, 0}); }) == ErrorCode::kConflict);
  s.Advance();
  CHECK(s.current().subtest_index == 1);
  CHECK(s.current_item()->id == "vocabulary-1");
}

TEST_CASE("a zero on a clue brings the next clue") {
  Session s(oracle::MakePool({SubtestKind::kWordReasoning}, 6, 3, 1));
  Score(s, 0, 0);
  CHECK(s.current_item()->id == "word_reasoning-1");
  CHECK(s.current().clue == 2);
  CHECK(s.consecutive_zeros(0) == 0);
  Score(s, 0, 1);
  CHECK(s.current().clue == 3);
  Score(s, 0, 0);
  // Only now does the item count, as one zero.
  CHECK(s.current_item()->id == "word_reasoning-2");
  CHECK(s.current().clue == 1);
  CHECK(s.consecutive_zeros(0) == 1);
  Score(s, 0, 0);
  Score(s, 1, 1);
  CHECK(s.current_item()->id == "word_reasoning-3");
  CHECK(s.consecutive_zeros(0) == 0);
  // Strict takes the final clue; relaxed the best over all clues.
  CHECK(s.RawScores(Regimen::kStrict).at(SubtestKind::kWordReasoning) == 1);
  CHECK(s.RawScores(Regimen::kRelaxed).at(SubtestKind::kWordReasoning) == 2);
}

TEST_CASE("strict and relaxed item scores") {
  Session s(oracle::MakePool({SubtestKind::kComprehension}, 3, 3, 2));
  s.RecordScores("comprehension-1", Candidates(5), {0, 2, 0, 0, 0});
  CHECK(s.records().back().strict == 0);
  CHECK(s.records().back().relaxed == 2);
  s.RecordScores("comprehension-2", Candidates(5), {1, 1, 1, 1, 1});
  CHECK(s.records().back().strict == 1);
  CHECK(s.records().back().relaxed == 1);
  CHECK(CodeOf([&] { s.RecordScores("comprehension-3", Candidates(5), {3, 0, 0, 0, 0}); }) ==
        ErrorCode::kInvalidArgument);
  CHECK(CodeOf([&] { s.RecordScores("comprehension-3", Candidates(5), {-1, 0, 0, 0, 0}); }) ==
        ErrorCode::kInvalidArgument);
  CHECK(CodeOf([&] { s.RecordScores("comprehension-3", Candidates(5), {1, 0}); }) == ErrorCode::kInvalidArgument);
  CHECK(CodeOf([&] { s.RecordScores("comprehension-1", Candidates(5), {1, 0, 0, 0, 0}); }) == ErrorCode::kConflict);
  // An unanswerable item has no candidates and scores zero.
  s.RecordScores("comprehension-3", {}, {});
  CHECK(s.records().back().strict == 0);
  CHECK(s.current().kind == StepKind::kSubtestComplete);
  CHECK_FALSE(s.current().discontinued);
}

TEST_CASE("advance and completion") {
  Session s(oracle::MakePool({SubtestKind::kInformation, SubtestKind::kSimilarities}, 1, 3, 1));
  CHECK(s.Advance().kind == StepKind::kPresent);
  Score(s, 1, 1);
  CHECK(s.current().kind == StepKind::kSubtestComplete);
  CHECK(s.Advance().kind == StepKind::kPresent);
  Score(s, 0, 0);
  CHECK(s.Advance().kind == StepKind::kSessionComplete);
  const Step done = s.current();
  CHECK(s.Advance() == done);
  CHECK(s.Advance() == done);
}

TEST_CASE("raw score sums") {
  Session s(oracle::MakePool({SubtestKind::kInformation, SubtestKind::kVocabulary}, 5, 3, 2));
  for (int v : {1, 2, 2, 0, 1}) Score(s, v, v);
  s.Advance();
  for (int i = 0; i < 5; ++i) Score(s, 0, 0);
  CHECK(s.RawScores(Regimen::kStrict).at(SubtestKind::kInformation) == 6);
  CHECK(s.RawScores(Regimen::kStrict).at(SubtestKind::kVocabulary) == 0);
  CHECK(s.RawScores(Regimen::kRelaxed).at(SubtestKind::kVocabulary) == 0);
}

TEST_CASE("relaxed can far exceed strict") {
  Session s(oracle::MakePool({SubtestKind::kSimilarities}, 20, 3, 2));
  // Twelve strict 2s; eight strict zeros never four in a row, whose relaxed
  // scores add 13.
  const std::vector<std::pair<int, int>> plan{{2, 2}, {0, 2}, {2, 2}, {0, 2}, {2, 2}, {0, 2}, {2, 2}, {0, 2},
                                              {2, 2}, {0, 2}, {2, 2}, {0, 1}, {2, 2}, {0, 1}, {2, 2}, {0, 1},
                                              {2, 2}, {2, 2}, {2, 2}, {2, 2}};
  for (auto [strict, relaxed] : plan) Score(s, strict, relaxed);
  CHECK(s.RawScores(Regimen::kStrict).at(SubtestKind::kSimilarities) == 24);
  CHECK(s.RawScores(Regimen::kRelaxed).at(SubtestKind::kSimilarities) == 37);
}

TEST_CASE("administered items equal the minimal zero-run prefix") {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t n = 1 + rng() % 25, run = 1 + rng() % 6;
    Session s(oracle::MakePool({SubtestKind::kInformation}, n, 3, 2, run));
    std::bernoulli_distribution zero(0.6);
    std::vector<bool> zeros(n);
    for (std::size_t i = 0; i < n; ++i) zeros[i] = zero(rng);
    std::size_t i = 0;
    while (s.current().kind == StepKind::kPresent) {
      const int v = zeros[i++] ? 0 : 1 + static_cast<int>(rng() % 2);
      Score(s, v, v);
    }
    CHECK(s.administered_items(0) == oracle::DiscontinuePrefix(zeros, run));
  }
}

TEST_CASE("synthetic norms") {
  auto norms = LoadNormTable(kNorms);
  for (auto kind : kAllSubtests) {
    for (int years : {4, 5, 6, 7}) {
      int previous = 0;
      for (int raw = 0; raw <= 20; ++raw) {
        const int scaled = norms.Scale(raw, kind, Age{years, 0});
        CHECK(scaled >= 1);
        CHECK(scaled <= 19);
        CHECK(scaled >= previous);
        previous = scaled;
      }
    }
  }
  int previous = 0;
  for (int sum = 0; sum <= 60; ++sum) {
    CHECK(norms.Viq(sum) >= previous);
    previous = norms.Viq(sum);
  }
  CHECK(norms.Viq(30) == 100);
  CHECK(norms.Scale(5, SubtestKind::kInformation, Age{4, 0}) == 11);
  CHECK(norms.Scale(5, SubtestKind::kInformation, Age{7, 5}) == 5);
  CHECK(CodeOf([&] { norms.Scale(5, SubtestKind::kInformation, Age{3, 11}); }) == ErrorCode::kNotFound);
  CHECK(CodeOf([&] { norms.Scale(5, SubtestKind::kInformation, Age{7, 6}); }) == ErrorCode::kNotFound);
  CHECK_FALSE(norms.Covers(SubtestKind::kVocabulary, Age{8, 0}));
}

TEST_CASE("age parsing") {
  CHECK(Age::Parse("4") == Age{4, 0});
  CHECK(Age::Parse("4y") == Age{4, 0});
  CHECK(Age::Parse("4y6m") == Age{4, 6});
  CHECK(Age::Parse("54m") == Age{4, 6});
  CHECK(Age{5, 11}.ToString() == "5y11m");
  for (const char* bad : {"", "x", "4y12m", "-1", "4y6"}) {
    CAPTURE(bad);
    CHECK(CodeOf([&] { Age::Parse(bad); }) == ErrorCode::kInvalidArgument);
  }
}

TEST_CASE("random valid norm tables are monotone") {
  std::mt19937_64 rng(32);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<ScaledRow> rows;
    int raw = 0, scaled = 1 + static_cast<int>(rng() % 3);
    while (raw <= 30 && scaled <= 19) {
      const int width = 1 + static_cast<int>(rng() % 3);
      rows.push_back({SubtestKind::kVocabulary, 48, 95, raw, raw + width - 1, scaled});
      raw += width;
      scaled += static_cast<int>(rng() % 3);
    }
    std::vector<ViqRow> viq;
    int sum = 3, value = 40 + static_cast<int>(rng() % 10);
    while (sum <= 57) {
      const int width = 1 + static_cast<int>(rng() % 4);
      viq.push_back({sum, sum + width - 1, value});
      sum += width;
      value += static_cast<int>(rng() % 5);
    }
    NormTable table(rows, viq);
    int prev = 0;
    for (int r = -2; r <= 40; ++r) {
      const int s = table.Scale(r, SubtestKind::kVocabulary, Age{5, 0});
      CHECK(s >= prev);
      CHECK(s >= 1);
      CHECK(s <= 19);
      prev = s;
    }
    prev = 0;
    for (int s = 0; s <= 60; ++s) {
      CHECK(table.Viq(s) >= prev);
      prev = table.Viq(s);
    }
  }
  std::vector<ScaledRow> falling{{SubtestKind::kVocabulary, 48, 59, 0, 0, 5}, {SubtestKind::kVocabulary, 48, 59, 1, 1, 4}};
  CHECK(CodeOf([&] { NormTable(falling, {{3, 57, 100}}); }) == ErrorCode::kFormat);
  CHECK(CodeOf([&] { NormTable({{SubtestKind::kVocabulary, 48, 59, 0, 0, 20}}, {{3, 57, 100}}); }) ==
        ErrorCode::kFormat);
  CHECK(CodeOf([&] { ParseNormTable("[scaled]\n"); }) == ErrorCode::kFormat);
}

TEST_CASE("compositions") {
  using K = SubtestKind;
  auto members = [](const Composition& c) { return std::set<K>(c.subtests.begin(), c.subtests.end()); };
  CHECK(members(Composition::Standard()) == std::set<K>{K::kInformation, K::kWordReasoning, K::kVocabulary});
  CHECK(members(Composition::Best3()) == std::set<K>{K::kInformation, K::kVocabulary, K::kSimilarities});
  CHECK(members(Composition::Worst3()) == std::set<K>{K::kInformation, K::kWordReasoning, K::kComprehension});
  for (const auto& c : {Composition::Standard(), Composition::Best3(), Composition::Worst3()}) {
    CHECK_NOTHROW(ValidateComposition(c));
  }
  CHECK(CodeOf([] { ValidateComposition(Composition::Parse("similarities,comprehension,vocabulary")); }) ==
        ErrorCode::kInvalidArgument);
  // Every triple: valid exactly when at least two members are core.
  for (std::size_t a = 0; a < 5; ++a) {
    for (std::size_t b = 0; b < 5; ++b) {
      for (std::size_t c = 0; c < 5; ++c) {
        Composition comp{"custom", {kAllSubtests[a], kAllSubtests[b], kAllSubtests[c]}};
        const bool distinct = a != b && b != c && a != c;
        const int core = (a < 3) + (b < 3) + (c < 3);
        bool ok = true;
        try {
          ValidateComposition(comp);
        } catch (const Error&) {
          ok = false;
        }
        CHECK(ok == (distinct && core >= 2));
      }
    }
  }
  CHECK(CodeOf([] { Composition::Parse("information,vocabulary"); }) == ErrorCode::kInvalidArgument);
  CHECK(CodeOf([] { Composition::Parse("information,vocabulary,arithmetic"); }) == ErrorCode::kInvalidArgument);
}

TEST_CASE("composite VIQ and percentile") {
  auto norms = LoadNormTable(kNorms);
  std::map<SubtestKind, int> scaled{{SubtestKind::kInformation, 10}, {SubtestKind::kVocabulary, 8},
                                    {SubtestKind::kWordReasoning, 6}, {SubtestKind::kComprehension, 12},
                                    {SubtestKind::kSimilarities, 14}};
  auto standard = ComposeViq(scaled, Composition::Standard(), norms);
  CHECK(standard.sum == 24);
  CHECK(standard.viq == 88);
  CHECK(standard.percentile == doctest::Approx(21.19).epsilon(1e-3));
  auto best = ComposeViq(scaled, Composition::Best3(), norms);
  CHECK(best.sum == 32);
  CHECK(best.viq == 104);
  scaled.erase(SubtestKind::kSimilarities);
  CHECK(CodeOf([&] { ComposeViq(scaled, Composition::Best3(), norms); }) == ErrorCode::kInvalidArgument);

  CHECK(ViqPercentile(100) == 50.0);
  CHECK(std::abs(ViqPercentile(88) - 21.2) <= 0.1);
  CHECK(std::abs(ViqPercentile(112) - 78.8) <= 0.1);
  for (int viq = 40; viq <= 160; ++viq) CHECK(std::abs(ViqPercentile(viq) - oracle::NormalPercentile(viq)) <= 1e-4);
}

TEST_CASE("relaxed never trails strict") {
  std::mt19937_64 rng(33);
  auto norms = LoadNormTable(kNorms);
  const std::vector<SubtestKind> all(kAllSubtests.begin(), kAllSubtests.end());
  for (int trial = 0; trial < 200; ++trial) {
    Session s(oracle::MakePool(all, 1 + rng() % 12, 1 + rng() % 3, 1 + static_cast<int>(rng() % 2)));
    while (s.current().kind != StepKind::kSessionComplete) {
      if (s.current().kind == StepKind::kSubtestComplete) {
        s.Advance();
        continue;
      }
      const int max = s.current_item()->max_points;
      const std::size_t n = rng() % 6;
      std::vector<int> scores(n);
      for (auto& v : scores) v = static_cast<int>(rng() % (max + 1));
      s.RecordScores(s.current_item()->id, Candidates(n), scores);
      CHECK(s.records().back().relaxed >= s.records().back().strict);
    }
    const auto report = BuildReport(s, norms, Age{4 + static_cast<int>(rng() % 4), 0},
                                    {Composition::Standard(), Composition::Best3(), Composition::Worst3()});
    for (auto kind : kAllSubtests) {
      CHECK(report.relaxed.raw.at(kind) >= report.strict.raw.at(kind));
      CHECK(report.relaxed.scaled.at(kind) >= report.strict.scaled.at(kind));
    }
    for (const auto& [name, strict] : report.strict.viq) CHECK(report.relaxed.viq.at(name)->viq >= strict->viq);
  }
}

TEST_CASE("report over a partial pool") {
  auto norms = LoadNormTable(kNorms);
  Session s(oracle::MakePool({SubtestKind::kInformation, SubtestKind::kVocabulary, SubtestKind::kWordReasoning}, 2,
                             1, 1));
  while (s.current().kind != StepKind::kSessionComplete) {
    if (s.current().kind == StepKind::kSubtestComplete) {
      s.Advance();
    } else {
      Score(s, 1, 1);
    }
  }
  auto report = BuildReport(s, norms, Age{5, 0}, {Composition::Standard(), Composition::Best3()});
  CHECK(report.strict.viq.at("standard").has_value());
  CHECK_FALSE(report.strict.viq.at("best3").has_value());
  CHECK(CodeOf([&] { BuildReport(s, norms, Age{9, 0}, {Composition::Standard()}); }) == ErrorCode::kNotFound);
  auto younger = BuildReport(s, norms, Age{4, 0}, {Composition::Standard()});
  auto older = BuildReport(s, norms, Age{7, 0}, {Composition::Standard()});
  CHECK(younger.strict.viq.at("standard")->viq > older.strict.viq.at("standard")->viq);
}
