#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

#include "veriq/kb/assertion.hpp"

namespace veriq::kb {

enum class Direction : unsigned char { kLeft = 0, kRight = 1 };

const char* DirectionName(Direction d);
std::optional<Direction> ParseDirection(std::string_view name);

// A matrix column: a relation together with a direction and a concept.
//
// Assertion (c, r, d) yields the right feature (r, d) on row c, rendered
// "r d", and the left feature (r, c) on row d, rendered "c r".
struct Feature {
  Direction direction = Direction::kRight;
  std::string relation;
  std::string concept_name;

  // Canonical order everywhere: (relation, concept, direction).
  friend bool operator<(const Feature& a, const Feature& b) {
    return std::tie(a.relation, a.concept_name, a.direction) <
           std::tie(b.relation, b.concept_name, b.direction);
  }
  bool operator==(const Feature&) const = default;

  std::string Render() const;
};

struct PruneOptions {
  double min_strength = 1.0;
  std::size_t min_concept_degree = 2;
};

// Dense 0-based indices over concepts and features, both sorted
// lexicographically so that they are stable for a fixed dump and thresholds.
class Vocabulary {
 public:
  Vocabulary() = default;
  Vocabulary(std::vector<std::string> concepts, std::vector<std::size_t> degrees,
             std::vector<Feature> features);

  std::size_t concept_count() const { return concepts_.size(); }
  std::size_t feature_count() const { return features_.size(); }

  const std::string& concept_at(std::size_t index) const { return concepts_[index]; }
  const Feature& feature_at(std::size_t index) const { return features_[index]; }
  std::size_t degree(std::size_t concept_index) const { return degrees_[concept_index]; }

  std::optional<std::size_t> FindConcept(std::string_view concept_name) const;
  std::optional<std::size_t> FindFeature(const Feature& feature) const;
  bool Contains(std::string_view concept_name) const { return FindConcept(concept_name).has_value(); }

  const std::vector<std::string>& concepts() const { return concepts_; }
  const std::vector<Feature>& features() const { return features_; }
  const std::vector<std::size_t>& degrees() const { return degrees_; }

  bool operator==(const Vocabulary&) const = default;

 private:
  std::vector<std::string> concepts_;
  std::vector<std::size_t> degrees_;
  std::vector<Feature> features_;
};

struct PrunedKnowledge {
  Vocabulary vocabulary;
  std::vector<Assertion> assertions;  // retained, in input order
};

// Keeps assertions with strength >= min_strength, then repeatedly drops
// concepts that take part in fewer than min_concept_degree retained
// assertions (and the assertions touching them) until nothing changes.
// Throws ErrorCode::kEmptyKnowledgeBase when no concept survives.
PrunedKnowledge PruneAndIndex(const std::vector<Assertion>& assertions, const PruneOptions& options);

}  // namespace veriq::kb
