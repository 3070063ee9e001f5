#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "veriq/subtest.hpp"

namespace veriq::psych {

inline constexpr std::string_view kPoolSchema = "veriq.pool/1";

struct Item {
  std::string id;
  SubtestKind subtest = SubtestKind::kInformation;
  std::string prompt;              // question or word; frame text for similarities
  std::vector<std::string> clues;  // word_reasoning: 1-3 clues
  std::vector<std::string> words;  // similarities: the word pair
  int max_points = 1;
  std::string rubric;

  // Number of presentations the item can take: its clue count, else 1.
  std::size_t steps() const { return subtest == SubtestKind::kWordReasoning ? clues.size() : 1; }
};

struct SubtestPool {
  SubtestKind subtest = SubtestKind::kInformation;
  std::vector<Item> items;
  std::size_t discontinue_run = 5;

  bool core() const { return IsCore(subtest); }
};

struct ItemPool {
  std::string name;
  std::vector<SubtestPool> subtests;  // administration order
};

// JSON pool format:
//   {"schema": "veriq.pool/1", "name": "...",
//    "subtests": [{"subtest": "information", "discontinue_run": 5,
//                  "items": [{"id": "...", "prompt": "...", "max_points": 1, "rubric": "..."}]}]}
// word_reasoning items carry "clues": [...]; similarities items carry
// "words": [a, b]. Throws kFormat naming the offending field.
ItemPool ParseItemPool(std::string_view json_text);
ItemPool LoadItemPool(const std::string& path);

}  // namespace veriq::psych
