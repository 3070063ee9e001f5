#include "veriq/psych/item_pool.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "veriq/error.hpp"

namespace veriq::psych {

namespace {

using nlohmann::json;

[[noreturn]] void Fail(const std::string& field, const std::string& what) {
  throw Error(ErrorCode::kFormat, "item pool: " + field + ": " + what);
}

const json& Require(const json& obj, const char* key, const std::string& where) {
  if (!obj.is_object() || !obj.contains(key)) Fail(where + "." + key, "missing");
  return obj.at(key);
}

std::string RequireString(const json& obj, const char* key, const std::string& where) {
  const auto& v = Require(obj, key, where);
  if (!v.is_string() || v.get<std::string>().empty()) Fail(where + "." + key, "expected a non-empty string");
  return v.get<std::string>();
}

std::vector<std::string> StringList(const json& v, const std::string& where) {
  if (!v.is_array()) Fail(where, "expected an array of strings");
  std::vector<std::string> out;
  for (const auto& e : v) {
    if (!e.is_string() || e.get<std::string>().empty()) Fail(where, "expected non-empty strings");
    out.push_back(e.get<std::string>());
  }
  return out;
}

}  // namespace

ItemPool ParseItemPool(std::string_view json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::kFormat, std::string("item pool: invalid JSON: ") + e.what());
  }
  if (RequireString(doc, "schema", "pool") != kPoolSchema) Fail("pool.schema", "unsupported schema");

  ItemPool pool;
  pool.name = doc.value("name", std::string("unnamed"));
  const auto& subtests = Require(doc, "subtests", "pool");
  if (!subtests.is_array() || subtests.empty()) Fail("pool.subtests", "expected a non-empty array");

  std::set<std::string> ids;
  std::set<SubtestKind> seen_subtests;
  for (std::size_t s = 0; s < subtests.size(); ++s) {
    const std::string where = "subtests[" + std::to_string(s) + "]";
    const auto& node = subtests[s];
    SubtestPool sub;
    auto kind = ParseSubtestKind(RequireString(node, "subtest", where));
    if (!kind) Fail(where + ".subtest", "unknown subtest '" + node.at("subtest").get<std::string>() + "'");
    if (!seen_subtests.insert(*kind).second) Fail(where + ".subtest", "subtest listed twice");
    sub.subtest = *kind;
    if (node.contains("discontinue_run")) {
      const auto& run = node.at("discontinue_run");
      if (!run.is_number_integer() || run.get<long long>() < 1) Fail(where + ".discontinue_run", "expected >= 1");
      sub.discontinue_run = run.get<std::size_t>();
    }
    const auto& items = Require(node, "items", where);
    if (!items.is_array() || items.empty()) Fail(where + ".items", "subtest has no items");

    for (std::size_t i = 0; i < items.size(); ++i) {
      const std::string iw = where + ".items[" + std::to_string(i) + "]";
      const auto& in = items[i];
      Item item;
      item.subtest = sub.subtest;
      item.id = RequireString(in, "id", iw);
      if (!ids.insert(item.id).second) Fail(iw + ".id", "duplicate item id '" + item.id + "'");
      item.max_points = Require(in, "max_points", iw).is_number_integer() ? in.at("max_points").get<int>() : 0;
      if (item.max_points != 1 && item.max_points != 2) Fail(iw + ".max_points", "expected 1 or 2");
      item.rubric = in.value("rubric", std::string());
      item.prompt = in.value("prompt", std::string());

      switch (sub.subtest) {
        case SubtestKind::kWordReasoning:
          item.clues = StringList(Require(in, "clues", iw), iw + ".clues");
          if (item.clues.empty() || item.clues.size() > 3) Fail(iw + ".clues", "expected 1 to 3 clues");
          break;
        case SubtestKind::kSimilarities:
          item.words = StringList(Require(in, "words", iw), iw + ".words");
          if (item.words.size() != 2) Fail(iw + ".words", "expected exactly 2 words");
          break;
        default:
          if (item.prompt.empty()) Fail(iw + ".prompt", "missing");
      }
      sub.items.push_back(std::move(item));
    }
    pool.subtests.push_back(std::move(sub));
  }
  return pool;
}

ItemPool LoadItemPool(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, "cannot open item pool: " + path);
  std::ostringstream text;
  text << in.rdbuf();
  return ParseItemPool(text.str());
}

}  // namespace veriq::psych
