#include "veriq/spectral/query.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <span>

namespace veriq::spectral {

namespace {

std::size_t RequireConcept(const kb::Vocabulary& vocab, const std::string& name) {
  auto index = vocab.FindConcept(name);
  if (!index) throw Error(ErrorCode::kUnknownConcepts, "unknown concept: " + name);
  return *index;
}

// Contiguous column ranges holding the allowed relations; features are sorted
// by relation first.
std::vector<std::pair<std::size_t, std::size_t>> RelationRanges(const kb::Vocabulary& vocab,
                                                                const RelationSet& allowed) {
  const auto& features = vocab.features();
  if (allowed.empty()) return {{0, features.size()}};
  std::vector<std::pair<std::size_t, std::size_t>> ranges;
  for (const auto& relation : allowed) {
    auto lo = std::lower_bound(features.begin(), features.end(), relation,
                               [](const kb::Feature& f, const std::string& r) { return f.relation < r; });
    auto hi = std::upper_bound(lo, features.end(), relation,
                               [](const std::string& r, const kb::Feature& f) { return r < f.relation; });
    if (lo != hi) {
      ranges.emplace_back(static_cast<std::size_t>(lo - features.begin()),
                          static_cast<std::size_t>(hi - features.begin()));
    }
  }
  return ranges;
}

// Reconstructed cells that are zero in exact arithmetic come back as rounding
// noise of either sign; snapping them keeps tie order lexicographic.
constexpr double kNoiseFloor = 1e-10;

void SnapNoise(std::span<double> values, std::size_t first, std::size_t last, double scale) {
  const double floor = kNoiseFloor * scale;
  for (std::size_t j = first; j < last; ++j) {
    if (std::abs(values[j]) <= floor) values[j] = 0.0;
  }
}

}  // namespace

std::vector<ScoredFeature> PredictFeatures(const KnowledgeModel& model, const Category& category,
                                           const RelationSet& allowed, std::size_t limit) {
  const auto& vocab = model.vocabulary;
  const auto& sp = model.spectral;

  std::vector<std::pair<std::size_t, double>> found;
  std::string misses;
  for (const auto& c : category) {
    if (auto index = vocab.FindConcept(c.name)) {
      found.emplace_back(*index, c.weight);
    } else {
      misses += (misses.empty() ? "" : ", ") + c.name;
    }
  }
  if (found.empty()) {
    throw Error(ErrorCode::kUnknownConcepts,
                "unknown concepts: " + (misses.empty() ? std::string("(empty category)") : misses));
  }

  double norm = 0.0;
  for (const auto& [index, weight] : found) norm += weight * weight;
  norm = std::sqrt(norm);

  Eigen::VectorXd projected = Eigen::VectorXd::Zero(sp.s.size());
  if (norm > 0.0) {
    for (const auto& [index, weight] : found) {
      projected += (weight / norm) * sp.u.row(static_cast<Eigen::Index>(index)).transpose();
    }
  }
  projected = projected.cwiseProduct(sp.s);

  std::vector<double> scores(vocab.feature_count(), 0.0);
  std::vector<std::size_t> candidates;
  for (const auto& [first, last] : RelationRanges(vocab, allowed)) {
    kernels::RowDots(sp.v, projected, first, last, scores);
    SnapNoise(scores, first, last, projected.norm());
    for (std::size_t j = first; j < last; ++j) candidates.push_back(j);
  }

  // Ranking compares scores on a grid far coarser than rounding noise, so
  // cells that are equal in exact arithmetic tie. Column order equals
  // (relation, concept, direction) order, so index breaks ties.
  const double grid = kNoiseFloor * projected.norm();
  std::vector<double> keys(scores.size(), 0.0);
  if (grid > 0.0) {
    for (std::size_t j : candidates) keys[j] = std::nearbyint(scores[j] / grid);
  }
  auto better = [&](std::size_t a, std::size_t b) { return keys[a] != keys[b] ? keys[a] > keys[b] : a < b; };
  const std::size_t keep = std::min(limit, candidates.size());
  std::partial_sort(candidates.begin(), candidates.begin() + static_cast<std::ptrdiff_t>(keep), candidates.end(),
                    better);

  std::vector<ScoredFeature> out;
  out.reserve(keep);
  for (std::size_t i = 0; i < keep; ++i) {
    const auto j = candidates[i];
    out.push_back({j, vocab.feature_at(j), scores[j]});
  }
  return out;
}

std::vector<ScoredConcept> ConceptNeighbors(const KnowledgeModel& model, const std::string& concept_name,
                                            std::size_t count) {
  const auto& vocab = model.vocabulary;
  const auto anchor = RequireConcept(vocab, concept_name);
  if (count < 1) throw Error(ErrorCode::kInvalidArgument, "neighbor count must be >= 1");

  std::vector<double> similarity(vocab.concept_count(), 0.0);
  kernels::ScaledRowCosines(model.spectral.u, model.spectral.s, anchor, similarity);

  std::vector<std::size_t> order;
  order.reserve(vocab.concept_count());
  for (std::size_t d = 0; d < vocab.concept_count(); ++d) {
    if (d != anchor) order.push_back(d);
  }
  // Cosines are ranked on the same noise grid as feature scores.
  for (auto& s : similarity) s = std::nearbyint(s / kNoiseFloor) * kNoiseFloor;
  const std::size_t keep = std::min(count, order.size());
  std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(keep), order.end(),
                    [&](std::size_t a, std::size_t b) {
                      return similarity[a] != similarity[b] ? similarity[a] > similarity[b] : a < b;
                    });
  std::vector<ScoredConcept> out;
  for (std::size_t i = 0; i < keep; ++i) out.push_back({order[i], vocab.concept_at(order[i]), similarity[order[i]]});
  return out;
}

double FeatureScore(const KnowledgeModel& model, const std::string& concept_name, const kb::Feature& feature) {
  const auto& vocab = model.vocabulary;
  const auto row = RequireConcept(vocab, concept_name);
  RequireConcept(vocab, feature.concept_name);
  auto col = vocab.FindFeature(feature);
  if (!col) return 0.0;
  const auto& sp = model.spectral;
  const Eigen::RowVectorXd scaled = sp.u.row(static_cast<Eigen::Index>(row)).cwiseProduct(sp.s.transpose());
  const double score = scaled.dot(sp.v.row(static_cast<Eigen::Index>(*col)));
  return std::abs(score) <= kNoiseFloor * scaled.norm() ? 0.0 : score;
}

}  // namespace veriq::spectral
