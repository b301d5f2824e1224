#pragma once

// JSON documents read and written by the command-line tool. Every parse
// failure is an InputError whose message starts with the JSON path of the
// offending value, e.g. "$.tables.ab'[1][0]: expected a number".

#include <filesystem>
#include <optional>
#include <string>

#include <json.hpp>

#include "qmeasure/behavior.hpp"
#include "qmeasure/decoherence.hpp"
#include "qmeasure/histories.hpp"

namespace qmeasure::cli {

using json = nlohmann::ordered_json;

/// Reads and parses a JSON file; unreadable or malformed files are InputErrors.
json read_json_file(const std::filesystem::path& path);

/// Writes `doc` with two-space indentation and a trailing newline.
void write_json_file(const std::filesystem::path& path, const json& doc);

struct BehaviorDocument {
  Behavior behavior;
  std::optional<std::string> label;
};

/// Accepts exactly one of
///   "tables": {"ab": [[P++, P+-], [P-+, P--]], "ab'": ..., "a'b": ..., "a'b'": ...}
///   "coords": {"mA": [2], "mB": [2], "X": [4]}
/// Rows are Alya's outcome (+, -), columns Bai's.
BehaviorDocument parse_behavior_document(const json& doc);

json tables_to_json(const ExperimentTables& tables);
json coords_to_json(const Behavior& y);

struct DecoherenceDocument {
  DecoherenceFunctional functional;
  std::optional<std::string> label;
};

/// "entries": n x n array (1 <= n <= 16) of [re, im] pairs; a bare number is
/// read as a real entry. Hermiticity and normalization are checked by the
/// DecoherenceFunctional constructor.
DecoherenceDocument parse_decoherence_document(const json& doc);

/// {"convention": ..., "label": ..., "entries": [[[re, im], ...], ...]}.
json decoherence_to_json(const DecoherenceFunctional& d, const std::optional<std::string>& label);

/// A set function given either as a decoherence document (μ(X) = D(X;X)) or
/// as {"measure": {"n": n, "values": [2^n numbers indexed by mask]}}.
SetFunction parse_set_function_document(const json& doc);

/// Sign string of each history in a subset, in index order.
json subset_to_json(Subset s, int n);

}  // namespace qmeasure::cli
