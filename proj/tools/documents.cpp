#include "documents.hpp"

#include <array>
#include <fstream>
#include <sstream>
#include <string_view>

#include "qmeasure/errors.hpp"
#include "qmeasure/joint_space.hpp"

namespace qmeasure::cli {

namespace {

constexpr std::array<std::string_view, 4> kExperimentKeys{"ab", "ab'", "a'b", "a'b'"};

[[noreturn]] void fail(const std::string& path, const std::string& what) {
  throw InputError(path + ": " + what);
}

const json& member(const json& obj, const std::string& path, const char* key) {
  auto it = obj.find(key);
  if (it == obj.end()) fail(path, std::string("missing key \"") + key + "\"");
  return *it;
}

double number(const json& v, const std::string& path) {
  if (!v.is_number()) fail(path, "expected a number");
  return v.get<double>();
}

const json& array_of(const json& v, const std::string& path, std::size_t size) {
  if (!v.is_array()) fail(path, "expected an array");
  if (v.size() != size)
    fail(path, "expected " + std::to_string(size) + " elements, found " + std::to_string(v.size()));
  return v;
}

template <std::size_t N>
std::array<double, N> numbers(const json& v, const std::string& path) {
  array_of(v, path, N);
  std::array<double, N> out{};
  for (std::size_t i = 0; i < N; ++i) out[i] = number(v[i], path + "[" + std::to_string(i) + "]");
  return out;
}

std::optional<std::string> label_of(const json& doc) {
  auto it = doc.find("label");
  if (it == doc.end() || it->is_null()) return std::nullopt;
  if (!it->is_string()) fail("$.label", "expected a string");
  return it->get<std::string>();
}

void require_object(const json& doc) {
  if (!doc.is_object()) fail("$", "expected an object");
}

Behavior behavior_from_tables(const json& tables) {
  const std::string base = "$.tables";
  if (!tables.is_object()) fail(base, "expected an object");
  for (const auto& [key, value] : tables.items()) {
    (void)value;
    bool known = false;
    for (auto k : kExperimentKeys) known = known || key == k;
    if (!known) fail(base + "." + key, "unknown experiment (expected ab, ab', a'b, a'b')");
  }
  ExperimentTables out{};
  for (std::size_t e = 0; e < 4; ++e) {
    const std::string key(kExperimentKeys[e]);
    const std::string path = base + "." + key;
    const json& table = array_of(member(tables, base, key.c_str()), path, 2);
    for (int row = 0; row < 2; ++row) {
      const std::string row_path = path + "[" + std::to_string(row) + "]";
      const auto cells = numbers<2>(table[static_cast<std::size_t>(row)], row_path);
      for (int col = 0; col < 2; ++col)
        out[e].at(row == 0 ? 1 : -1, col == 0 ? 1 : -1) = cells[static_cast<std::size_t>(col)];
    }
  }
  try {
    return behavior_from_probabilities(out);
  } catch (const InputError& e) {
    fail(base, e.what());
  }
}

Behavior behavior_from_coords(const json& coords) {
  const std::string base = "$.coords";
  if (!coords.is_object()) fail(base, "expected an object");
  Behavior y;
  y.mA = numbers<2>(member(coords, base, "mA"), base + ".mA");
  y.mB = numbers<2>(member(coords, base, "mB"), base + ".mB");
  y.X = numbers<4>(member(coords, base, "X"), base + ".X");
  try {
    validate(y);
  } catch (const InputError& e) {
    fail(base, e.what());
  }
  return y;
}

Complex complex_entry(const json& v, const std::string& path) {
  if (v.is_number()) return {v.get<double>(), 0.0};
  const auto pair = numbers<2>(v, path);
  return {pair[0], pair[1]};
}

}  // namespace

json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open '" + path.string() + "'");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw InputError("'" + path.string() + "' is not valid JSON: " + e.what());
  }
}

void write_json_file(const std::filesystem::path& path, const json& doc) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write '" + path.string() + "'");
  out << doc.dump(2) << '\n';
}

BehaviorDocument parse_behavior_document(const json& doc) {
  require_object(doc);
  const bool has_tables = doc.contains("tables");
  const bool has_coords = doc.contains("coords");
  if (has_tables == has_coords) fail("$", "exactly one of \"tables\" and \"coords\" is required");
  BehaviorDocument out;
  out.label = label_of(doc);
  out.behavior = has_tables ? behavior_from_tables(doc["tables"]) : behavior_from_coords(doc["coords"]);
  return out;
}

json tables_to_json(const ExperimentTables& tables) {
  json out = json::object();
  for (std::size_t e = 0; e < 4; ++e)
    out[std::string(kExperimentKeys[e])] = {{tables[e].at(1, 1), tables[e].at(1, -1)},
                                            {tables[e].at(-1, 1), tables[e].at(-1, -1)}};
  return out;
}

json coords_to_json(const Behavior& y) {
  return {{"mA", y.mA}, {"mB", y.mB}, {"X", y.X}};
}

DecoherenceDocument parse_decoherence_document(const json& doc) {
  require_object(doc);
  const json& entries = member(doc, "$", "entries");
  if (!entries.is_array() || entries.empty()) fail("$.entries", "expected a non-empty array of rows");
  const std::size_t n = entries.size();
  if (n > static_cast<std::size_t>(kMaxHistories))
    fail("$.entries", "at most " + std::to_string(kMaxHistories) + " rows are supported");
  ComplexMatrix m(n);
  for (std::size_t r = 0; r < n; ++r) {
    const std::string row_path = "$.entries[" + std::to_string(r) + "]";
    array_of(entries[r], row_path, n);
    for (std::size_t c = 0; c < n; ++c)
      m(r, c) = complex_entry(entries[r][c], row_path + "[" + std::to_string(c) + "]");
  }
  auto label = label_of(doc);
  try {
    return DecoherenceDocument{DecoherenceFunctional(m), std::move(label)};
  } catch (const InputError& e) {
    fail("$.entries", e.what());
  }
}

json decoherence_to_json(const DecoherenceFunctional& d, const std::optional<std::string>& label) {
  json rows = json::array();
  for (int r = 0; r < d.size(); ++r) {
    json row = json::array();
    for (int c = 0; c < d.size(); ++c) row.push_back({d(r, c).real(), d(r, c).imag()});
    rows.push_back(std::move(row));
  }
  json out;
  out["convention"] = std::string(kHistoryConvention);
  if (label) out["label"] = *label;
  out["entries"] = std::move(rows);
  return out;
}

SetFunction parse_set_function_document(const json& doc) {
  require_object(doc);
  if (doc.contains("entries")) return quadratic_form_table(parse_decoherence_document(doc).functional);
  const json& measure = member(doc, "$", "measure");
  if (!measure.is_object()) fail("$.measure", "expected an object");
  const json& n_value = member(measure, "$.measure", "n");
  if (!n_value.is_number_integer()) fail("$.measure.n", "expected an integer");
  const int n = n_value.get<int>();
  if (n < 1 || n > kMaxHistories) fail("$.measure.n", "must lie in 1..16");
  const std::size_t count = std::size_t{1} << n;
  const json& values = array_of(member(measure, "$.measure", "values"), "$.measure.values", count);
  std::vector<double> table(count);
  for (std::size_t i = 0; i < count; ++i)
    table[i] = number(values[i], "$.measure.values[" + std::to_string(i) + "]");
  try {
    return SetFunction(SampleSpace(n), std::move(table));
  } catch (const InputError& e) {
    fail("$.measure.values", e.what());
  }
}

json subset_to_json(Subset s, int n) {
  json out = json::array();
  for (int h = 0; h < n; ++h) {
    if (!s.contains(h)) continue;
    if (n == kJointHistories)
      out.push_back(history_label(h));
    else
      out.push_back(h);
  }
  return out;
}

}  // namespace qmeasure::cli
