#include "qmeasure/joint_space.hpp"

#include "qmeasure/errors.hpp"

namespace qmeasure {

int parse_history(std::string_view signs) {
  if (signs.size() != 4) throw InputError("history label must have four signs: " + std::string(signs));
  int h = 0;
  for (char c : signs) {
    if (c != '+' && c != '-') throw InputError("history label may only contain '+' and '-'");
    h = 2 * h + (c == '-' ? 1 : 0);
  }
  return h;
}

std::string history_label(int history) {
  std::string out(4, '+');
  for (int slot = 0; slot < 4; ++slot)
    if ((history >> (3 - slot)) & 1) out[static_cast<std::size_t>(slot)] = '-';
  return out;
}

}  // namespace qmeasure
