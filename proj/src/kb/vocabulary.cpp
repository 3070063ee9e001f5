#include "veriq/kb/vocabulary.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "veriq/error.hpp"

namespace veriq::kb {

const char* DirectionName(Direction d) { return d == Direction::kLeft ? "left" : "right"; }

std::optional<Direction> ParseDirection(std::string_view name) {
  if (name == "left") return Direction::kLeft;
  if (name == "right") return Direction::kRight;
  return std::nullopt;
}

std::string Feature::Render() const {
  if (direction == Direction::kLeft) return concept_name + " " + relation;
  return relation + " " + concept_name;
}

Vocabulary::Vocabulary(std::vector<std::string> concepts, std::vector<std::size_t> degrees,
                       std::vector<Feature> features)
    : concepts_(std::move(concepts)), degrees_(std::move(degrees)), features_(std::move(features)) {
  if (degrees_.size() != concepts_.size()) {
    throw Error(ErrorCode::kFormat, "vocabulary degree list does not match concept list");
  }
  if (!std::is_sorted(concepts_.begin(), concepts_.end()) ||
      std::adjacent_find(concepts_.begin(), concepts_.end()) != concepts_.end()) {
    throw Error(ErrorCode::kFormat, "vocabulary concepts must be sorted and unique");
  }
  if (!std::is_sorted(features_.begin(), features_.end()) ||
      std::adjacent_find(features_.begin(), features_.end()) != features_.end()) {
    throw Error(ErrorCode::kFormat, "vocabulary features must be sorted and unique");
  }
}

std::optional<std::size_t> Vocabulary::FindConcept(std::string_view concept_name) const {
  auto it = std::lower_bound(concepts_.begin(), concepts_.end(), concept_name,
                             [](const std::string& a, std::string_view b) { return a < b; });
  if (it == concepts_.end() || *it != concept_name) return std::nullopt;
  return static_cast<std::size_t>(it - concepts_.begin());
}

std::optional<std::size_t> Vocabulary::FindFeature(const Feature& feature) const {
  auto it = std::lower_bound(features_.begin(), features_.end(), feature);
  if (it == features_.end() || !(*it == feature)) return std::nullopt;
  return static_cast<std::size_t>(it - features_.begin());
}

PrunedKnowledge PruneAndIndex(const std::vector<Assertion>& assertions, const PruneOptions& options) {
  if (!(options.min_strength >= 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "min_strength must be >= 0");
  }

  std::vector<const Assertion*> kept;
  kept.reserve(assertions.size());
  for (const auto& a : assertions) {
    if (a.strength >= options.min_strength) kept.push_back(&a);
  }

  std::map<std::string_view, std::size_t> degree;
  while (true) {
    degree.clear();
    for (const Assertion* a : kept) {
      ++degree[a->concept_left];
      if (a->concept_right != a->concept_left) ++degree[a->concept_right];
    }
    auto weak = [&](const Assertion* a) {
      return degree[a->concept_left] < options.min_concept_degree ||
             degree[a->concept_right] < options.min_concept_degree;
    };
    auto before = kept.size();
    kept.erase(std::remove_if(kept.begin(), kept.end(), weak), kept.end());
    if (kept.size() == before) break;
  }

  if (kept.empty()) throw Error(ErrorCode::kEmptyKnowledgeBase, "empty knowledge base after pruning");

  std::vector<std::string> concepts;
  std::vector<std::size_t> degrees;
  for (const auto& [name, count] : degree) {
    concepts.emplace_back(name);
    degrees.push_back(count);
  }

  std::set<Feature> features;
  for (const Assertion* a : kept) {
    features.insert(Feature{Direction::kRight, a->relation, a->concept_right});
    features.insert(Feature{Direction::kLeft, a->relation, a->concept_left});
  }

  PrunedKnowledge out;
  out.vocabulary = Vocabulary(std::move(concepts), std::move(degrees),
                              std::vector<Feature>(features.begin(), features.end()));
  out.assertions.reserve(kept.size());
  for (const Assertion* a : kept) out.assertions.push_back(*a);
  return out;
}

}  // namespace veriq::kb
