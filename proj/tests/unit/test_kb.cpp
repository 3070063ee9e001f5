#include <doctest.h>

#include <sstream>

#include "oracles.hpp"
#include "veriq/error.hpp"
#include "veriq/kb/assertion.hpp"
#include "veriq/kb/matrix_builder.hpp"
#include "veriq/kb/vocabulary.hpp"

using namespace veriq;
using namespace veriq::kb;

namespace {

ParseResult ParseText(const std::string& text, std::string_view language = "en") {
  std::istringstream in(text);
  return ParseAssertions(in, language);
}

Assertion Make(std::string left, std::string relation, std::string right, double strength = 4.0, int polarity = 1) {
  return {std::move(left), std::move(relation), std::move(right), strength, polarity, "en"};
}

}  // namespace

TEST_CASE("parse maps fields and polarity") {
  auto r = ParseText(
      "lang\tleft\trelation\tright\tstrength\tpolarity\tfrequency\n"
      "en\tshake hand\tHasSubevent\tmeet friend\t2.0\t+\t1\n"
      "en\tPenguin\tCapableOf\tfly\t3\t-\t1\n"
      "pt\tcachorro\tIsA\tanimal\t2\t+\t1\n");
  REQUIRE(r.assertions.size() == 2);
  CHECK(r.assertions[0] == Assertion{"shake hand", "HasSubevent", "meet friend", 2.0, 1, "en"});
  CHECK(r.assertions[1].concept_left == "penguin");
  CHECK(r.assertions[1].polarity == -1);
  CHECK(r.stats.filtered_language == 1);
  CHECK(r.stats.malformed == 0);
}

TEST_CASE("parse counts malformed lines and warns past ten percent") {
  auto r = ParseText(
      "en\ta\tIsA\tb\t1\t+\t1\n"
      "en\ta\tIsA\n"
      "en\ta\tIsA\tb\tnot-a-number\t+\t1\n"
      "en\ta\tIsA\tb\t1\t?\t1\n");
  CHECK(r.assertions.size() == 1);
  CHECK(r.stats.malformed == 3);
  CHECK(r.stats.malformed_warning());
  CHECK_FALSE(ParseText("en\ta\tIsA\tb\t1\t+\t1\n").stats.malformed_warning());
}

TEST_CASE("parse ignores comments and blank lines, empty filter keeps all languages") {
  auto r = ParseText("# note\n\nfr\tchien\tIsA\tanimal\t1\t1\t1\n", "");
  REQUIRE(r.assertions.size() == 1);
  CHECK(r.assertions[0].language == "fr");
}

TEST_CASE("missing dump is an io error") {
  CHECK_THROWS_WITH_AS(ParseAssertionFile("/nonexistent/dump.tsv"), doctest::Contains("cannot open"), Error);
}

TEST_CASE("concept normalization") {
  CHECK(NormalizeConcept("  Steering   Wheel ") == "steering wheel");
  CHECK(NormalizeConcept("ice_cream!") == "ice cream");
  CHECK(NormalizeConcept("don't") == "dont");
}

TEST_CASE("degree threshold keeps one of three concepts") {
  // Degrees a:1, b:1, hub:5 (two edges to itself counted once each).
  std::vector<Assertion> as{Make("hub", "IsA", "a"),   Make("hub", "IsA", "b"),   Make("hub", "HasA", "hub"),
                            Make("hub", "UsedFor", "hub"), Make("hub", "PartOf", "hub")};
  auto pruned = PruneAndIndex(as, {1.0, 2});
  CHECK(pruned.vocabulary.concepts() == std::vector<std::string>{"hub"});
  CHECK(pruned.assertions.size() == 3);
}

TEST_CASE("pruning to nothing is an empty knowledge base") {
  std::vector<Assertion> as{Make("a", "IsA", "b", 0.5)};
  try {
    PruneAndIndex(as, {1.0, 2});
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kEmptyKnowledgeBase);
  }
}

TEST_CASE("vocabulary equals count-and-filter oracle on random dumps") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 50; ++trial) {
    auto as = oracle::RandomAssertions(rng, 30, 4, 100);
    std::uniform_real_distribution<double> s(0.0, 3.0);
    for (auto& a : as) a.strength = s(rng);
    for (std::size_t degree : {1u, 2u, 3u}) {
      const auto expected = oracle::PrunedConcepts(as, 1.0, degree);
      if (expected.empty()) continue;
      auto pruned = PruneAndIndex(as, {1.0, degree});
      CHECK(std::set<std::string>(pruned.vocabulary.concepts().begin(), pruned.vocabulary.concepts().end()) ==
            expected);
      CHECK(std::is_sorted(pruned.vocabulary.concepts().begin(), pruned.vocabulary.concepts().end()));
    }
  }
}

TEST_CASE("raising the degree threshold never adds concepts") {
  std::mt19937_64 rng(12);
  for (int trial = 0; trial < 30; ++trial) {
    auto as = oracle::RandomAssertions(rng, 25, 3, 80);
    std::set<std::string> previous;
    bool first = true;
    for (std::size_t degree = 1; degree <= 6; ++degree) {
      std::set<std::string> now;
      try {
        auto p = PruneAndIndex(as, {1.0, degree});
        now.insert(p.vocabulary.concepts().begin(), p.vocabulary.concepts().end());
      } catch (const Error&) {
      }
      if (!first) CHECK(std::includes(previous.begin(), previous.end(), now.begin(), now.end()));
      previous = now;
      first = false;
    }
  }
}

TEST_CASE("steering wheel row carries signed weights") {
  std::vector<Assertion> as{Make("steering wheel", "PartOf", "car", 4), Make("steering wheel", "HasProperty", "round", 9),
                            Make("steering wheel", "HasProperty", "alive", 1, -1), Make("tire", "PartOf", "car", 4),
                            Make("ball", "HasProperty", "round", 4), Make("dog", "HasProperty", "alive", 4)};
  auto pruned = PruneAndIndex(as, {1.0, 1});
  auto m = BuildMatrix(pruned.assertions, pruned.vocabulary).matrix;
  const auto row = *pruned.vocabulary.FindConcept("steering wheel");
  auto cell = [&](const char* rel, const char* c) {
    return m.at(row, *pruned.vocabulary.FindFeature({Direction::kRight, rel, c}));
  };
  CHECK(cell("PartOf", "car") == doctest::Approx(2.0));
  CHECK(cell("HasProperty", "round") == doctest::Approx(3.0));
  CHECK(cell("HasProperty", "alive") == doctest::Approx(-1.0));
}

TEST_CASE("five-assertion matrix equals hand-built dense matrix") {
  // Concepts: a, b, c. Features sorted by (relation, concept, direction).
  std::vector<Assertion> as{Make("a", "IsA", "b", 4), Make("b", "IsA", "c", 9), Make("c", "HasA", "a", 1, -1),
                            Make("a", "IsA", "b", 1), Make("a", "HasA", "c", 16)};
  auto pruned = PruneAndIndex(as, {1.0, 1});
  auto m = BuildMatrix(pruned.assertions, pruned.vocabulary).matrix;
  std::vector<std::string> expected_features{"a HasA", "HasA a", "c HasA", "HasA c", "a IsA", "b IsA", "IsA b", "IsA c"};
  std::vector<std::string> rendered;
  for (const auto& f : pruned.vocabulary.features()) rendered.push_back(f.Render());
  REQUIRE(rendered == expected_features);
  // Rows a, b, c.
  Eigen::MatrixXd expected(3, 8);
  expected << 0, 0, -1, 4, 0, 0, 3, 0,  //
      0, 0, 0, 0, 3, 0, 0, 3,          //
      4, -1, 0, 0, 0, 3, 0, 0;
  CHECK(oracle::ToDense(m).isApprox(expected, 1e-15));
}

TEST_CASE("matrix equals brute-force accumulation oracle and mirrored cells agree") {
  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 30; ++trial) {
    auto as = oracle::RandomAssertions(rng, 15, 3, 60);
    const auto dense = oracle::DenseMatrix(as, 1.0, 2);
    if (dense.concepts.empty()) continue;
    auto pruned = PruneAndIndex(as, {});
    auto m = BuildMatrix(pruned.assertions, pruned.vocabulary).matrix;
    REQUIRE(pruned.vocabulary.concepts() == dense.concepts);
    REQUIRE(pruned.vocabulary.feature_count() == dense.features.size());
    CHECK((oracle::ToDense(m) - dense.matrix).cwiseAbs().maxCoeff() < 1e-12);
    for (const auto& a : pruned.assertions) {
      const double right = m.at(*pruned.vocabulary.FindConcept(a.concept_left),
                                *pruned.vocabulary.FindFeature({Direction::kRight, a.relation, a.concept_right}));
      const double left = m.at(*pruned.vocabulary.FindConcept(a.concept_right),
                               *pruned.vocabulary.FindFeature({Direction::kLeft, a.relation, a.concept_left}));
      CHECK(right == left);
    }
  }
}

TEST_CASE("identity weighting and cap") {
  StrengthWeighting sqrt_capped;
  CHECK(sqrt_capped(4.0) == doctest::Approx(2.0));
  CHECK(sqrt_capped(400.0) == doctest::Approx(10.0));
  CHECK(sqrt_capped(-3.0) == 0.0);
  StrengthWeighting identity{WeightingMode::kIdentity};
  CHECK(identity(7.5) == 7.5);
}

TEST_CASE("empty assertion list gives a 0x0 matrix") {
  auto m = BuildMatrix({}, Vocabulary{}).matrix;
  CHECK(m.rows == 0);
  CHECK(m.cols == 0);
  CHECK(m.nonzeros() == 0);
}

TEST_CASE("ingest is deterministic") {
  std::mt19937_64 rng(14);
  auto as = oracle::RandomAssertions(rng, 20, 3, 90);
  auto p1 = PruneAndIndex(as, {});
  auto p2 = PruneAndIndex(as, {});
  CHECK(p1.vocabulary == p2.vocabulary);
  CHECK(BuildMatrix(p1.assertions, p1.vocabulary).matrix == BuildMatrix(p2.assertions, p2.vocabulary).matrix);
}
