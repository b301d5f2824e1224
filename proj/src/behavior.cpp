#include "qmeasure/behavior.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "qmeasure/errors.hpp"

namespace qmeasure {

namespace {

constexpr std::array<Setting, 2> kSettings{Setting::unprimed, Setting::primed};
constexpr std::array<int, 2> kOutcomes{1, -1};

std::string setting_name(Party p, Setting s) {
  std::string name = p == Party::alya ? "a" : "b";
  if (s == Setting::primed) name += "'";
  return name;
}

std::string experiment_name(int e) {
  return setting_name(Party::alya, kSettings[static_cast<std::size_t>(e / 2)]) +
         setting_name(Party::bai, kSettings[static_cast<std::size_t>(e % 2)]);
}

double raw_probability(const Behavior& y, Setting alpha, Setting beta, int i, int j) {
  return (1.0 + i * y.marginal(Party::alya, alpha) + j * y.marginal(Party::bai, beta) +
          i * j * y.correlator(alpha, beta)) /
         4.0;
}

}  // namespace

double max_abs_diff(const Behavior& a, const Behavior& b) {
  double worst = 0.0;
  for (std::size_t s = 0; s < 2; ++s) {
    worst = std::max(worst, std::abs(a.mA[s] - b.mA[s]));
    worst = std::max(worst, std::abs(a.mB[s] - b.mB[s]));
  }
  for (std::size_t e = 0; e < 4; ++e) worst = std::max(worst, std::abs(a.X[e] - b.X[e]));
  return worst;
}

void validate(const Behavior& y, double tol) {
  auto check_range = [&](double v, const std::string& what) {
    if (!std::isfinite(v) || v < -1.0 - tol || v > 1.0 + tol)
      throw InvalidBehaviorError(what + " = " + std::to_string(v) + " lies outside [-1, 1]");
  };
  for (Setting s : kSettings) {
    check_range(y.marginal(Party::alya, s), "<A> at " + setting_name(Party::alya, s));
    check_range(y.marginal(Party::bai, s), "<B> at " + setting_name(Party::bai, s));
  }
  for (int e = 0; e < 4; ++e) check_range(y.X[static_cast<std::size_t>(e)], "X_" + experiment_name(e));
  for (Setting alpha : kSettings)
    for (Setting beta : kSettings)
      for (int i : kOutcomes)
        for (int j : kOutcomes) {
          const double p = raw_probability(y, alpha, beta, i, j);
          if (p < -tol)
            throw InvalidBehaviorError("P_" + experiment_name(experiment_index(alpha, beta)) + "(" +
                                       (i > 0 ? "+" : "-") + "," + (j > 0 ? "+" : "-") +
                                       ") = " + std::to_string(p) + " is negative");
        }
}

bool is_valid(const Behavior& y, double tol) {
  try {
    validate(y, tol);
    return true;
  } catch (const InvalidBehaviorError&) {
    return false;
  }
}

JointDistribution probabilities_from_behavior(const Behavior& y, Setting alpha, Setting beta) {
  JointDistribution out;
  for (int i : kOutcomes)
    for (int j : kOutcomes) {
      const double p = raw_probability(y, alpha, beta, i, j);
      if (p < -1e-12)
        throw InvalidBehaviorError("behavior yields negative probability " + std::to_string(p) +
                                   " in experiment " +
                                   experiment_name(experiment_index(alpha, beta)));
      out.at(i, j) = std::max(p, 0.0);
    }
  return out;
}

ExperimentTables tables_from_behavior(const Behavior& y) {
  ExperimentTables out;
  for (Setting alpha : kSettings)
    for (Setting beta : kSettings)
      out[static_cast<std::size_t>(experiment_index(alpha, beta))] =
          probabilities_from_behavior(y, alpha, beta);
  return out;
}

Behavior behavior_from_probabilities(const ExperimentTables& tables) {
  constexpr double kTol = 1e-9;
  for (int e = 0; e < 4; ++e) {
    const auto& t = tables[static_cast<std::size_t>(e)];
    double total = 0.0;
    for (double p : t.p) {
      if (!std::isfinite(p) || p < -kTol)
        throw InvalidBehaviorError("table " + experiment_name(e) + " has a negative entry");
      total += p;
    }
    if (std::abs(total - 1.0) > kTol)
      throw InvalidBehaviorError("table " + experiment_name(e) + " sums to " +
                                 std::to_string(total));
  }

  // ⟨A⟩ from a table: P(+,·) - P(-,·); ⟨B⟩: P(·,+) - P(·,-).
  auto alya_mean = [](const JointDistribution& t) { return t.p[0] + t.p[1] - t.p[2] - t.p[3]; };
  auto bai_mean = [](const JointDistribution& t) { return t.p[0] - t.p[1] + t.p[2] - t.p[3]; };

  Behavior y;
  for (Setting s : kSettings) {
    const auto si = static_cast<std::size_t>(s);
    const auto& a1 = tables[static_cast<std::size_t>(experiment_index(s, Setting::unprimed))];
    const auto& a2 = tables[static_cast<std::size_t>(experiment_index(s, Setting::primed))];
    const double ea1 = alya_mean(a1);
    const double ea2 = alya_mean(a2);
    // Marginal probabilities differ by half the difference of the means.
    if (std::abs(ea1 - ea2) / 2.0 > kTol)
      throw NoSignallingError("no-signalling violated: Alya's marginal at setting " +
                              setting_name(Party::alya, s) + " differs between tables (P(+) " +
                              std::to_string((1 + ea1) / 2) + " vs " +
                              std::to_string((1 + ea2) / 2) + ")");
    y.mA[si] = (ea1 + ea2) / 2.0;

    const auto& b1 = tables[static_cast<std::size_t>(experiment_index(Setting::unprimed, s))];
    const auto& b2 = tables[static_cast<std::size_t>(experiment_index(Setting::primed, s))];
    const double eb1 = bai_mean(b1);
    const double eb2 = bai_mean(b2);
    if (std::abs(eb1 - eb2) / 2.0 > kTol)
      throw NoSignallingError("no-signalling violated: Bai's marginal at setting " +
                              setting_name(Party::bai, s) + " differs between tables (P(+) " +
                              std::to_string((1 + eb1) / 2) + " vs " +
                              std::to_string((1 + eb2) / 2) + ")");
    y.mB[si] = (eb1 + eb2) / 2.0;
  }
  for (std::size_t e = 0; e < 4; ++e) {
    const auto& t = tables[e];
    y.X[e] = t.p[0] - t.p[1] - t.p[2] + t.p[3];
  }
  return y;
}

std::array<double, 4> chsh_values(const std::array<double, 4>& X) {
  std::array<double, 4> out{};
  for (std::size_t p = 0; p < 4; ++p) {
    double v = 0.0;
    for (std::size_t q = 0; q < 4; ++q) v += q == p ? -X[q] : X[q];
    out[p] = v;
  }
  return out;
}

std::array<double, 4> tsirelson2_values(const std::array<double, 4>& X) {
  std::array<double, 4> angle{};
  for (std::size_t q = 0; q < 4; ++q) angle[q] = std::asin(std::clamp(X[q], -1.0, 1.0));
  std::array<double, 4> out{};
  for (std::size_t p = 0; p < 4; ++p) {
    double v = 0.0;
    for (std::size_t q = 0; q < 4; ++q) v += q == p ? -angle[q] : angle[q];
    out[p] = std::abs(v);
  }
  return out;
}

double InequalityReport::max_chsh() const {
  double m = 0.0;
  for (double v : chsh_values) m = std::max(m, std::abs(v));
  return m;
}

double InequalityReport::max_tsirelson2() const {
  return *std::max_element(tsirelson2_lhs.begin(), tsirelson2_lhs.end());
}

int InequalityReport::worst_tsirelson2_placement() const {
  return static_cast<int>(std::max_element(tsirelson2_lhs.begin(), tsirelson2_lhs.end()) -
                          tsirelson2_lhs.begin());
}

InequalityReport inequality_report(const Behavior& y) {
  InequalityReport r;
  r.chsh_values = chsh_values(y.X);
  r.tsirelson2_lhs = tsirelson2_values(y.X);
  const double chsh = r.max_chsh();
  r.chshb_ok = chsh <= 2.0 + kInequalityTol;
  r.tsirelson1_ok = chsh <= 2.0 * std::numbers::sqrt2 + kInequalityTol;
  r.tsirelson2_ok = r.max_tsirelson2() <= std::numbers::pi + kInequalityTol;
  return r;
}

Behavior canonical_pr_box() { return Behavior{{0.0, 0.0}, {0.0, 0.0}, {1.0, 1.0, 1.0, -1.0}}; }

FlipSpec FlipSpec::from_code(int code) {
  if (code < 0 || code >= kFlipGroupOrder) throw InputError("flip code must be in [0, 63]");
  FlipSpec f;
  f.flip_a_outputs = {(code & 1) != 0, (code & 2) != 0};
  f.flip_b_outputs = {(code & 4) != 0, (code & 8) != 0};
  f.swap_a_inputs = (code & 16) != 0;
  f.swap_b_inputs = (code & 32) != 0;
  return f;
}

int FlipSpec::code() const {
  return (flip_a_outputs[0] ? 1 : 0) | (flip_a_outputs[1] ? 2 : 0) | (flip_b_outputs[0] ? 4 : 0) |
         (flip_b_outputs[1] ? 8 : 0) | (swap_a_inputs ? 16 : 0) | (swap_b_inputs ? 32 : 0);
}

FlipSpec FlipSpec::inverse() const {
  FlipSpec g = *this;
  if (swap_a_inputs) g.flip_a_outputs = {flip_a_outputs[1], flip_a_outputs[0]};
  if (swap_b_inputs) g.flip_b_outputs = {flip_b_outputs[1], flip_b_outputs[0]};
  return g;
}

namespace {

std::size_t source_setting(bool swap, std::size_t s) { return swap ? 1 - s : s; }

}  // namespace

int apply_flip_history(const FlipSpec& f, int history) {
  int out = 0;
  for (std::size_t s = 0; s < 2; ++s) {
    const Setting target = kSettings[s];
    const std::size_t sa = source_setting(f.swap_a_inputs, s);
    const std::size_t sb = source_setting(f.swap_b_inputs, s);
    int bit_a = (history >> outcome_bit_position(Party::alya, kSettings[sa])) & 1;
    int bit_b = (history >> outcome_bit_position(Party::bai, kSettings[sb])) & 1;
    bit_a ^= f.flip_a_outputs[sa] ? 1 : 0;
    bit_b ^= f.flip_b_outputs[sb] ? 1 : 0;
    out |= bit_a << outcome_bit_position(Party::alya, target);
    out |= bit_b << outcome_bit_position(Party::bai, target);
  }
  return out;
}

Behavior apply_flip(const FlipSpec& f, const Behavior& y) {
  Behavior out;
  std::array<double, 2> sign_a{}, sign_b{};
  std::array<std::size_t, 2> src_a{}, src_b{};
  for (std::size_t s = 0; s < 2; ++s) {
    src_a[s] = source_setting(f.swap_a_inputs, s);
    src_b[s] = source_setting(f.swap_b_inputs, s);
    sign_a[s] = f.flip_a_outputs[src_a[s]] ? -1.0 : 1.0;
    sign_b[s] = f.flip_b_outputs[src_b[s]] ? -1.0 : 1.0;
    out.mA[s] = sign_a[s] * y.mA[src_a[s]];
    out.mB[s] = sign_b[s] * y.mB[src_b[s]];
  }
  for (std::size_t alpha = 0; alpha < 2; ++alpha)
    for (std::size_t beta = 0; beta < 2; ++beta)
      out.X[2 * alpha + beta] = sign_a[alpha] * sign_b[beta] * y.X[2 * src_a[alpha] + src_b[beta]];
  return out;
}

DecoherenceFunctional apply_flip_D(const FlipSpec& f, const DecoherenceFunctional& d) {
  if (d.size() != kJointHistories) throw InputError("flips act on the 16-history space");
  std::array<std::size_t, kJointHistories> image{};
  for (int h = 0; h < kJointHistories; ++h)
    image[static_cast<std::size_t>(h)] = static_cast<std::size_t>(apply_flip_history(f, h));
  ComplexMatrix out(kJointHistories);
  for (std::size_t h = 0; h < kJointHistories; ++h)
    for (std::size_t k = 0; k < kJointHistories; ++k) out(image[h], image[k]) = d.entries()(h, k);
  return DecoherenceFunctional(out);
}

Marginals marginals_from_D(const DecoherenceFunctional& d) {
  if (d.size() != kJointHistories) throw InputError("marginals need the 16-history space");
  Marginals m;
  for (Setting alpha : kSettings)
    for (Setting beta : kSettings) {
      const auto e = static_cast<std::size_t>(experiment_index(alpha, beta));
      const int pa = outcome_bit_position(Party::alya, alpha);
      const int pb = outcome_bit_position(Party::bai, beta);
      auto cell = [&](int h) {
        return static_cast<std::size_t>(2 * ((h >> pa) & 1) + ((h >> pb) & 1));
      };
      auto& mat = m.matrices[e];
      for (int h = 0; h < kJointHistories; ++h)
        for (int k = 0; k < kJointHistories; ++k) mat[4 * cell(h) + cell(k)] += d(h, k);
      for (std::size_t c = 0; c < 4; ++c) {
        const double diag = mat[5 * c].real();
        if (diag < -kDecoherenceTol)
          throw PositivityError("marginal " + experiment_name(static_cast<int>(e)) +
                                " has negative probability " + std::to_string(diag));
        m.tables[e].p[c] = diag;
        for (std::size_t c2 = 0; c2 < 4; ++c2)
          if (c2 != c)
            m.decoherence_residual = std::max(m.decoherence_residual, std::abs(mat[4 * c + c2]));
      }
    }
  return m;
}

}  // namespace qmeasure
