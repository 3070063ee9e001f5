#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "veriq/subtest.hpp"

namespace veriq::psych {

inline constexpr std::string_view kNormsSchema = "veriq.norms/1";

struct Age {
  int years = 4;
  int months = 0;

  int total_months() const { return years * 12 + months; }
  std::string ToString() const;  // "4y0m"

  // Accepts "4", "4y", "4y6m", "54m".
  static Age Parse(std::string_view text);
  bool operator==(const Age&) const = default;
};

struct ScaledRow {
  SubtestKind subtest;
  int age_start_months;
  int age_end_months;  // inclusive
  int raw_min;
  int raw_max;  // inclusive
  int scaled;
};

struct ViqRow {
  int sum_min;
  int sum_max;  // inclusive
  int viq;
};

// Raw -> scaled maps per (subtest, age band) and a scaled-sum -> VIQ map.
// Both maps are monotone non-decreasing and scaled values lie in 1..19.
class NormTable {
 public:
  NormTable(std::vector<ScaledRow> scaled_rows, std::vector<ViqRow> viq_rows);

  // Throws kNotFound when no band for the subtest covers the age. Raw
  // scores beyond the table take the nearest row's value.
  int Scale(int raw, SubtestKind subtest, Age age) const;
  int Viq(int scaled_sum) const;

  bool Covers(SubtestKind subtest, Age age) const;
  const std::vector<ScaledRow>& scaled_rows() const { return scaled_rows_; }
  const std::vector<ViqRow>& viq_rows() const { return viq_rows_; }

 private:
  std::vector<ScaledRow> scaled_rows_;  // sorted by (subtest, age start, raw min)
  std::vector<ViqRow> viq_rows_;        // sorted by sum_min
};

// CSV blocks:
//   schema,veriq.norms/1
//   [scaled]
//   subtest,age_band_start_months,age_band_end_months,raw_min,raw_max,scaled
//   ...
//   [viq]
//   sum_min,sum_max,viq
//   ...
// Blank lines and '#' comments are ignored.
NormTable ParseNormTable(std::string_view csv_text);
NormTable LoadNormTable(const std::string& path);

// Percentile of a VIQ under the normal model (mean 100, SD 15).
double ViqPercentile(double viq);

}  // namespace veriq::psych
