#pragma once

// The 16-history joint sample space of the two-party, two-setting,
// two-outcome experiment.
//
// A history is the outcome string (i i' j j') for settings a, a', b, b'.
// Outcome +1 is bit 0 and -1 is bit 1; the history index is
//   8*bit(i) + 4*bit(i') + 2*bit(j) + bit(j').
// Every file and table in this project uses that index order.

#include <array>
#include <string>
#include <string_view>

namespace qmeasure {

inline constexpr int kJointHistories = 16;

enum class Party { alya = 0, bai = 1 };
enum class Setting { unprimed = 0, primed = 1 };

/// Human-readable statement of the index convention, embedded in documents.
inline constexpr std::string_view kHistoryConvention =
    "history index = 8*bit(a) + 4*bit(a') + 2*bit(b) + bit(b'); outcome +1 -> bit 0, "
    "outcome -1 -> bit 1";

/// Bit position of the outcome for (party, setting) inside a history index.
constexpr int outcome_bit_position(Party p, Setting s) {
  return (p == Party::alya ? 3 : 1) - static_cast<int>(s);
}

/// Outcome (+1 or -1) of `history` for (party, setting).
constexpr int outcome(int history, Party p, Setting s) {
  return ((history >> outcome_bit_position(p, s)) & 1) ? -1 : 1;
}

/// History index from outcomes (i, i', j, j'), each +1 or -1.
constexpr int history_index(std::array<int, 4> outcomes) {
  int h = 0;
  for (int slot = 0; slot < 4; ++slot) h = 2 * h + (outcomes[slot] < 0 ? 1 : 0);
  return h;
}

/// Parses a four-character sign string such as "-+--" (a, a', b, b').
/// Throws InputError on anything else.
int parse_history(std::string_view signs);

/// Inverse of parse_history.
std::string history_label(int history);

/// Experiment index e = 2*alpha + beta, the order (ab, ab', a'b, a'b').
constexpr int experiment_index(Setting alpha, Setting beta) {
  return 2 * static_cast<int>(alpha) + static_cast<int>(beta);
}

/// Outcome-pair index within a 2x2 table: 2*bit(i) + bit(j).
constexpr int outcome_pair_index(int i, int j) { return 2 * (i < 0 ? 1 : 0) + (j < 0 ? 1 : 0); }

}  // namespace qmeasure
