#include "oracles.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

#include "veriq/kb/matrix_builder.hpp"
#include "veriq/kb/vocabulary.hpp"
#include "veriq/spectral/svd.hpp"

namespace oracle {

int DenseKb::concept_index(const std::string& name) const {
  auto it = std::find(concepts.begin(), concepts.end(), name);
  return it == concepts.end() ? -1 : static_cast<int>(it - concepts.begin());
}

int DenseKb::feature_index(const FeatureKey& key) const {
  auto it = std::find(features.begin(), features.end(), key);
  return it == features.end() ? -1 : static_cast<int>(it - features.begin());
}

std::set<std::string> PrunedConcepts(const std::vector<Assertion>& assertions, double min_strength,
                                     std::size_t min_degree) {
  std::vector<Assertion> alive;
  for (const auto& a : assertions) {
    if (a.strength >= min_strength) alive.push_back(a);
  }
  while (true) {
    std::map<std::string, std::size_t> degree;
    for (const auto& a : alive) {
      degree[a.concept_left] += 1;
      if (a.concept_right != a.concept_left) degree[a.concept_right] += 1;
    }
    std::vector<Assertion> next;
    for (const auto& a : alive) {
      if (degree[a.concept_left] >= min_degree && degree[a.concept_right] >= min_degree) next.push_back(a);
    }
    if (next.size() == alive.size()) {
      std::set<std::string> out;
      for (const auto& [name, d] : degree) out.insert(name);
      return out;
    }
    alive = std::move(next);
  }
}

DenseKb DenseMatrix(const std::vector<Assertion>& assertions, double min_strength, std::size_t min_degree,
                    double cap) {
  const auto keep = PrunedConcepts(assertions, min_strength, min_degree);
  std::vector<Assertion> used;
  for (const auto& a : assertions) {
    if (a.strength >= min_strength && keep.count(a.concept_left) && keep.count(a.concept_right)) used.push_back(a);
  }
  DenseKb kb;
  kb.concepts.assign(keep.begin(), keep.end());
  std::set<FeatureKey> features;
  for (const auto& a : used) {
    features.insert({a.relation, a.concept_right, 1});
    features.insert({a.relation, a.concept_left, 0});
  }
  kb.features.assign(features.begin(), features.end());
  kb.matrix = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(kb.concepts.size()),
                                    static_cast<Eigen::Index>(kb.features.size()));
  for (const auto& a : used) {
    const double w = a.polarity * std::min(std::sqrt(std::max(a.strength, 0.0)), cap);
    kb.matrix(kb.concept_index(a.concept_left), kb.feature_index({a.relation, a.concept_right, 1})) += w;
    kb.matrix(kb.concept_index(a.concept_right), kb.feature_index({a.relation, a.concept_left, 0})) += w;
  }
  return kb;
}

Eigen::MatrixXd ToDense(const veriq::kb::CsrMatrix& m) {
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(m.rows), static_cast<Eigen::Index>(m.cols));
  for (std::size_t r = 0; r < m.rows; ++r) {
    for (auto k = m.row_ptr[r]; k < m.row_ptr[r + 1]; ++k) {
      d(static_cast<Eigen::Index>(r), m.col_index[k]) += m.values[k];
    }
  }
  return d;
}

veriq::kb::CsrMatrix RandomSparse(std::mt19937_64& rng, std::size_t rows, std::size_t cols, double density) {
  std::bernoulli_distribution present(density);
  std::normal_distribution<double> value;
  std::vector<veriq::kb::Triplet> triplets;
  for (std::uint32_t r = 0; r < rows; ++r) {
    for (std::uint32_t c = 0; c < cols; ++c) {
      if (present(rng)) triplets.push_back({r, c, value(rng)});
    }
  }
  return veriq::kb::FromTriplets(rows, cols, std::move(triplets));
}

std::vector<Assertion> RandomAssertions(std::mt19937_64& rng, std::size_t concepts, std::size_t relations,
                                        std::size_t count, double negative_fraction) {
  std::uniform_int_distribution<std::size_t> pick_concept(0, concepts - 1);
  std::uniform_int_distribution<std::size_t> pick_relation(0, relations - 1);
  std::uniform_real_distribution<double> strength(1.0, 9.0);
  std::bernoulli_distribution negative(negative_fraction);
  auto name = [](std::size_t i) {
    char buf[8];
    std::snprintf(buf, sizeof(buf), "c%02zu", i);
    return std::string(buf);
  };
  std::vector<Assertion> out;
  for (std::size_t i = 0; i < count; ++i) {
    Assertion a;
    a.concept_left = name(pick_concept(rng));
    a.concept_right = name(pick_concept(rng));
    a.relation = "R" + std::to_string(pick_relation(rng));
    a.strength = strength(rng);
    a.polarity = negative(rng) ? -1 : 1;
    a.language = "en";
    out.push_back(a);
  }
  return out;
}

veriq::spectral::KnowledgeModel FullRankModel(const std::vector<Assertion>& assertions, std::size_t min_degree) {
  veriq::kb::PruneOptions prune;
  prune.min_concept_degree = min_degree;
  auto pruned = veriq::kb::PruneAndIndex(assertions, prune);
  auto built = veriq::kb::BuildMatrix(pruned.assertions, pruned.vocabulary);
  veriq::spectral::KnowledgeModel model;
  model.vocabulary = std::move(pruned.vocabulary);
  model.matrix = std::move(built.matrix);
  veriq::spectral::SvdOptions options;
  options.k = std::min(model.matrix.rows, model.matrix.cols);
  auto full = veriq::spectral::TruncatedSvd(model.matrix, options);
  model.spectral = full.Truncated(std::max<std::size_t>(1, veriq::spectral::NumericalRank(full)));
  return model;
}

std::vector<std::size_t> RankDescending(const std::vector<double>& values) {
  std::vector<std::size_t> order(values.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return values[a] > values[b]; });
  return order;
}

Eigen::MatrixXd DenseTruncation(const Eigen::MatrixXd& a, std::size_t k, Eigen::VectorXd* singular_values) {
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto kk = static_cast<Eigen::Index>(k);
  if (singular_values) *singular_values = svd.singularValues().head(kk);
  return svd.matrixU().leftCols(kk) * svd.singularValues().head(kk).asDiagonal() *
         svd.matrixV().leftCols(kk).transpose();
}

std::string Slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::vector<RoutingCase> LoadRoutingCases(const std::string& path) {
  static const std::map<std::string, std::set<std::string>> named{
      {"why", {"Causes", "Desires", "UsedFor", "HasPrerequisite", "CausesDesire", "MotivatedByGoal", "HasSubevent"}},
      {"where", {"AtLocation", "NearLocation"}},
      {"what", {"IsA", "HasA", "HasProperty", "UsedFor", "CapableOf", "DefinedAs", "MadeOf", "PartOf",
                "ReceivesAction", "HasSubevent", "Causes", "CreatedBy", "SymbolOf"}}};
  const auto doc = nlohmann::json::parse(Slurp(path));
  std::vector<RoutingCase> out;
  for (const auto& j : doc) {
    RoutingCase c;
    c.question = j.at("question").get<std::string>();
    const auto& allowed = j.at("allowed");
    c.allowed = allowed.is_string() ? named.at(allowed.get<std::string>()) : allowed.get<std::set<std::string>>();
    c.special = j.at("special").get<std::string>();
    for (const auto& r : j.at("removed")) c.removed.emplace_back(r.at(0).get<std::string>(), r.at(1).get<std::string>());
    out.push_back(std::move(c));
  }
  return out;
}

std::vector<Assertion> ColorKb() {
  std::vector<Assertion> out;
  auto add = [&](const char* l, const char* r, const char* rt, double s, int p = 1) {
    out.push_back({l, r, rt, s, p, "en"});
  };
  const std::vector<std::pair<const char*, double>> colors{{"black", 5}, {"white", 6}, {"red", 7},
                                                           {"orange", 4}, {"yellow", 5}, {"green", 6},
                                                           {"blue", 9},  {"indigo", 2}, {"violet", 3}};
  for (const auto& [c, s] : colors) add(c, "IsA", "color", s);
  add("snow", "HasProperty", "white", 9);
  add("snow", "HasProperty", "cold", 6);
  add("snow", "IsA", "weather", 4);
  add("snow", "AtLocation", "mountain", 3);
  add("sky", "HasProperty", "blue", 9);
  add("sky", "HasA", "cloud", 5);
  add("sky", "HasProperty", "high", 3);
  add("sea", "HasProperty", "blue", 7);
  add("jeans", "HasProperty", "blue", 6);
  add("cloud", "HasProperty", "white", 4);
  add("cloud", "IsA", "weather", 3);
  // High enough to pass the threshold, so only the exclusion list drops it.
  add("color", "IsA", "color", 8);
  add("snow", "HasProperty", "color", 8);
  add("sky", "HasProperty", "color", 8);
  add("snow", "HasProperty", "number", 1);
  add("number", "IsA", "color", 8);
  return out;
}

std::map<FeatureKey, double> SimilaritiesBySets(const DenseKb& kb, const std::string& a, const std::string& b,
                                                std::size_t neighbors, std::size_t features) {
  const auto& m = kb.matrix;
  auto cosine = [&](int i, int j) {
    const double ni = m.row(i).norm(), nj = m.row(j).norm();
    return ni > 0 && nj > 0 ? m.row(i).dot(m.row(j)) / (ni * nj) : 0.0;
  };
  auto word_set = [&](const std::string& word) {
    const int w = kb.concept_index(word);
    std::vector<int> others;
    for (int c = 0; c < static_cast<int>(kb.concepts.size()); ++c) {
      if (c != w) others.push_back(c);
    }
    std::stable_sort(others.begin(), others.end(), [&](int x, int y) { return cosine(w, x) > cosine(w, y); });
    std::vector<int> members{w};
    for (std::size_t i = 0; i < neighbors && i < others.size(); ++i) members.push_back(others[i]);
    std::map<FeatureKey, double> merged;
    for (int c : members) {
      std::vector<double> row(m.cols());
      for (Eigen::Index j = 0; j < m.cols(); ++j) row[j] = m(c, j);
      auto order = RankDescending(row);
      for (std::size_t i = 0; i < features && i < order.size(); ++i) {
        const auto& key = kb.features[order[i]];
        auto [it, inserted] = merged.try_emplace(key, row[order[i]]);
        if (!inserted) it->second = std::max(it->second, row[order[i]]);
      }
    }
    return merged;
  };
  const auto sa = word_set(a);
  const auto sb = word_set(b);
  std::map<FeatureKey, double> out;
  for (const auto& [key, score] : sa) {
    auto it = sb.find(key);
    if (it != sb.end()) out.emplace(key, score + it->second);
  }
  return out;
}

std::size_t DiscontinuePrefix(const std::vector<bool>& zero, std::size_t run) {
  for (std::size_t p = run; p <= zero.size(); ++p) {
    bool all = true;
    for (std::size_t i = p - run; i < p; ++i) all = all && zero[i];
    if (all) return p;
  }
  return zero.size();
}

veriq::psych::ItemPool MakePool(const std::vector<veriq::SubtestKind>& subtests, std::size_t items,
                                std::size_t clues, int max_points, std::size_t run) {
  veriq::psych::ItemPool pool;
  pool.name = "generated";
  for (auto kind : subtests) {
    veriq::psych::SubtestPool sub;
    sub.subtest = kind;
    sub.discontinue_run = run;
    for (std::size_t i = 0; i < items; ++i) {
      veriq::psych::Item item;
      item.id = std::string(veriq::SubtestKindName(kind)) + "-" + std::to_string(i + 1);
      item.subtest = kind;
      item.max_points = max_points;
      if (kind == veriq::SubtestKind::kWordReasoning) {
        for (std::size_t c = 0; c < clues; ++c) item.clues.push_back("clue " + std::to_string(c + 1));
      } else if (kind == veriq::SubtestKind::kSimilarities) {
        item.words = {"pen", "pencil"};
      } else {
        item.prompt = "question " + std::to_string(i + 1);
      }
      sub.items.push_back(std::move(item));
    }
    pool.subtests.push_back(std::move(sub));
  }
  return pool;
}

double NormalPercentile(double viq, double mean, double sd) {
  // Composite Simpson rule over the density from 12 SD below the mean.
  const double z = (viq - mean) / sd, lo = -12.0;
  if (z <= lo) return 0.0;
  const int n = 200000;
  const double h = (z - lo) / n;
  auto pdf = [](double x) { return std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::acos(-1.0)); };
  double sum = pdf(lo) + pdf(z);
  for (int i = 1; i < n; ++i) sum += (i % 2 ? 4.0 : 2.0) * pdf(lo + i * h);
  return 100.0 * sum * h / 3.0;
}

}  // namespace oracle
