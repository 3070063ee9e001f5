#include "veriq/psych/norms.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <tuple>

#include "veriq/error.hpp"

namespace veriq::psych {

namespace {

[[noreturn]] void Fail(std::size_t line, const std::string& what) {
  throw Error(ErrorCode::kFormat, "norm table line " + std::to_string(line) + ": " + what);
}

std::vector<std::string> SplitCsv(std::string_view line) {
  std::vector<std::string> fields;
  std::string field;
  std::istringstream in{std::string(line)};
  while (std::getline(in, field, ',')) {
    auto b = field.find_first_not_of(" \t");
    auto e = field.find_last_not_of(" \t\r");
    fields.push_back(b == std::string::npos ? std::string() : field.substr(b, e - b + 1));
  }
  return fields;
}

int ToInt(const std::string& s, std::size_t line) {
  int v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) Fail(line, "expected an integer, got '" + s + "'");
  return v;
}

bool ParseNumber(std::string_view& text, int& out) {
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), out);
  if (ec != std::errc() || ptr == text.data()) return false;
  text.remove_prefix(static_cast<std::size_t>(ptr - text.data()));
  return true;
}

}  // namespace

std::string Age::ToString() const { return std::to_string(years) + "y" + std::to_string(months) + "m"; }

Age Age::Parse(std::string_view text) {
  const std::string original(text);
  auto bad = [&]() { return Error(ErrorCode::kInvalidArgument, "invalid age '" + original + "'"); };
  int first = 0;
  if (!ParseNumber(text, first) || first < 0) throw bad();
  if (text.empty() || text == "y") return Age{first, 0};
  if (text == "m") return Age{first / 12, first % 12};
  if (text.front() != 'y') throw bad();
  text.remove_prefix(1);
  int months = 0;
  if (!ParseNumber(text, months) || text != "m" || months < 0 || months > 11) throw bad();
  return Age{first, months};
}

NormTable::NormTable(std::vector<ScaledRow> scaled_rows, std::vector<ViqRow> viq_rows)
    : scaled_rows_(std::move(scaled_rows)), viq_rows_(std::move(viq_rows)) {
  auto key = [](const ScaledRow& r) { return std::tuple(r.subtest, r.age_start_months, r.raw_min); };
  std::sort(scaled_rows_.begin(), scaled_rows_.end(), [&](const auto& a, const auto& b) { return key(a) < key(b); });
  std::sort(viq_rows_.begin(), viq_rows_.end(), [](const auto& a, const auto& b) { return a.sum_min < b.sum_min; });

  auto invalid = [](const std::string& what) { return Error(ErrorCode::kFormat, "norm table: " + what); };
  for (std::size_t i = 0; i < scaled_rows_.size(); ++i) {
    const auto& r = scaled_rows_[i];
    if (r.scaled < 1 || r.scaled > 19) throw invalid("scaled score outside 1..19");
    if (r.raw_min > r.raw_max || r.age_start_months > r.age_end_months) throw invalid("empty range");
    if (i == 0) continue;
    const auto& p = scaled_rows_[i - 1];
    if (p.subtest != r.subtest) continue;
    if (p.age_start_months == r.age_start_months) {
      if (p.age_end_months != r.age_end_months) throw invalid("inconsistent age band");
      if (r.raw_min <= p.raw_max) throw invalid("overlapping raw ranges");
      if (r.scaled < p.scaled) throw invalid("raw to scaled map is not monotone");
    } else if (r.age_start_months <= p.age_end_months) {
      throw invalid("overlapping age bands");
    }
  }
  for (std::size_t i = 0; i < viq_rows_.size(); ++i) {
    const auto& r = viq_rows_[i];
    if (r.sum_min > r.sum_max) throw invalid("empty sum range");
    if (i > 0 && r.sum_min <= viq_rows_[i - 1].sum_max) throw invalid("overlapping sum ranges");
    if (i > 0 && r.viq < viq_rows_[i - 1].viq) throw invalid("sum to VIQ map is not monotone");
  }
  if (viq_rows_.empty()) throw invalid("no VIQ rows");
}

bool NormTable::Covers(SubtestKind subtest, Age age) const {
  const int m = age.total_months();
  return std::any_of(scaled_rows_.begin(), scaled_rows_.end(), [&](const ScaledRow& r) {
    return r.subtest == subtest && r.age_start_months <= m && m <= r.age_end_months;
  });
}

int NormTable::Scale(int raw, SubtestKind subtest, Age age) const {
  const int m = age.total_months();
  const ScaledRow* floor_row = nullptr;
  const ScaledRow* first_row = nullptr;
  for (const auto& r : scaled_rows_) {
    if (r.subtest != subtest || m < r.age_start_months || m > r.age_end_months) continue;
    if (!first_row) first_row = &r;
    if (r.raw_min <= raw && raw <= r.raw_max) return r.scaled;
    if (r.raw_max < raw) floor_row = &r;
  }
  if (!first_row) {
    throw Error(ErrorCode::kNotFound, std::string("norm table does not cover ") + SubtestKindName(subtest) +
                                          " at age " + age.ToString());
  }
  return floor_row ? floor_row->scaled : first_row->scaled;
}

int NormTable::Viq(int scaled_sum) const {
  const ViqRow* floor_row = nullptr;
  for (const auto& r : viq_rows_) {
    if (r.sum_min <= scaled_sum && scaled_sum <= r.sum_max) return r.viq;
    if (r.sum_max < scaled_sum) floor_row = &r;
  }
  return floor_row ? floor_row->viq : viq_rows_.front().viq;
}

NormTable ParseNormTable(std::string_view csv_text) {
  std::vector<ScaledRow> scaled;
  std::vector<ViqRow> viq;
  enum class Block { kNone, kScaled, kViq } block = Block::kNone;
  bool schema_seen = false;
  bool expect_header = false;

  std::istringstream in{std::string(csv_text)};
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    auto fields = SplitCsv(line);
    if (fields.empty() || (fields.size() == 1 && fields[0].empty()) || fields[0].rfind('#', 0) == 0) continue;

    if (fields[0] == "schema") {
      if (fields.size() != 2 || fields[1] != kNormsSchema) Fail(line_no, "unsupported schema");
      schema_seen = true;
      continue;
    }
    if (fields[0] == "[scaled]" || fields[0] == "[viq]") {
      block = fields[0] == "[scaled]" ? Block::kScaled : Block::kViq;
      expect_header = true;
      continue;
    }
    if (expect_header) {
      expect_header = false;
      if (!fields.empty() && !fields[0].empty() && !std::isdigit(static_cast<unsigned char>(fields[0][0])) &&
          fields[0] != "-") {
        bool is_subtest_row = block == Block::kScaled && ParseSubtestKind(fields[0]).has_value();
        if (!is_subtest_row) continue;
      }
    }
    switch (block) {
      case Block::kNone:
        Fail(line_no, "row outside a [scaled] or [viq] block");
      case Block::kScaled: {
        if (fields.size() != 6) Fail(line_no, "expected 6 fields");
        auto kind = ParseSubtestKind(fields[0]);
        if (!kind) Fail(line_no, "unknown subtest '" + fields[0] + "'");
        scaled.push_back({*kind, ToInt(fields[1], line_no), ToInt(fields[2], line_no), ToInt(fields[3], line_no),
                          ToInt(fields[4], line_no), ToInt(fields[5], line_no)});
        break;
      }
      case Block::kViq:
        if (fields.size() != 3) Fail(line_no, "expected 3 fields");
        viq.push_back({ToInt(fields[0], line_no), ToInt(fields[1], line_no), ToInt(fields[2], line_no)});
        break;
    }
  }
  if (!schema_seen) throw Error(ErrorCode::kFormat, "norm table: missing schema line");
  return NormTable(std::move(scaled), std::move(viq));
}

NormTable LoadNormTable(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, "cannot open norm table: " + path);
  std::ostringstream text;
  text << in.rdbuf();
  return ParseNormTable(text.str());
}

double ViqPercentile(double viq) { return 50.0 * std::erfc(-(viq - 100.0) / (15.0 * std::sqrt(2.0))); }

}  // namespace veriq::psych
