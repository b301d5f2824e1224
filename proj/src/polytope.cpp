#include "qmeasure/polytope.hpp"

#include <algorithm>
#include <cmath>
#include <string_view>

#include "qmeasure/errors.hpp"
#include "qmeasure/simplex.hpp"

namespace qmeasure {

std::string Vertex::id() const {
  if (const auto* local = std::get_if<LocalAssignment>(&kind))
    return "local:" + history_label(history_index(local->outcomes));
  return "pr:" + std::to_string(std::get<PrLabel>(kind).id);
}

namespace {

Behavior local_behavior(const std::array<int, 4>& s) {
  Behavior y;
  y.mA = {double(s[0]), double(s[1])};
  y.mB = {double(s[2]), double(s[3])};
  for (std::size_t alpha = 0; alpha < 2; ++alpha)
    for (std::size_t beta = 0; beta < 2; ++beta)
      y.X[2 * alpha + beta] = double(s[alpha] * s[2 + beta]);
  return y;
}

std::vector<Vertex> build_catalog() {
  std::vector<Vertex> out;
  out.reserve(kVertexCount);
  for (int h = 0; h < kLocalVertexCount; ++h) {
    LocalAssignment a;
    a.outcomes = {outcome(h, Party::alya, Setting::unprimed), outcome(h, Party::alya, Setting::primed),
                  outcome(h, Party::bai, Setting::unprimed), outcome(h, Party::bai, Setting::primed)};
    out.push_back(Vertex{h, a, local_behavior(a.outcomes)});
  }
  const Behavior pr = canonical_pr_box();
  int next_id = 0;
  for (int code = 0; code < kFlipGroupOrder; ++code) {
    const FlipSpec f = FlipSpec::from_code(code);
    const Behavior image = apply_flip(f, pr);
    const bool seen = std::any_of(out.begin() + kLocalVertexCount, out.end(),
                                  [&](const Vertex& v) { return v.behavior == image; });
    if (seen) continue;
    out.push_back(Vertex{kLocalVertexCount + next_id, PrLabel{next_id, f}, image});
    ++next_id;
  }
  if (next_id != kPrVertexCount) throw InternalError("PR flip orbit does not have 8 elements");
  return out;
}

std::array<double, 8> coordinates(const Behavior& y) {
  return {y.mA[0], y.mA[1], y.mB[0], y.mB[1], y.X[0], y.X[1], y.X[2], y.X[3]};
}

}  // namespace

const std::vector<Vertex>& vertex_catalog() {
  static const std::vector<Vertex> catalog = build_catalog();
  return catalog;
}

int vertex_index(const std::string& id) {
  for (const auto& v : vertex_catalog())
    if (v.id() == id) return v.index;
  throw InputError("unknown vertex id '" + id + "'");
}

Behavior recombine(const Decomposition& d) {
  std::array<double, 8> acc{};
  const auto& catalog = vertex_catalog();
  for (std::size_t i = 0; i < kVertexCount; ++i) {
    if (d.weights[i] == 0.0) continue;
    const auto c = coordinates(catalog[i].behavior);
    for (std::size_t r = 0; r < 8; ++r) acc[r] += d.weights[i] * c[r];
  }
  return Behavior{{acc[0], acc[1]}, {acc[2], acc[3]}, {acc[4], acc[5], acc[6], acc[7]}};
}

Decomposition decompose(const Behavior& y, double tol) {
  const auto& catalog = vertex_catalog();
  StandardFormLp lp;
  lp.rows = 9;
  lp.cols = kVertexCount;
  lp.A.assign(lp.rows * lp.cols, 0.0);
  const auto target = coordinates(y);
  lp.b.assign(target.begin(), target.end());
  lp.b.push_back(1.0);
  for (std::size_t j = 0; j < kVertexCount; ++j) {
    const auto c = coordinates(catalog[j].behavior);
    for (std::size_t r = 0; r < 8; ++r) lp.A[r * lp.cols + j] = c[r];
    lp.A[8 * lp.cols + j] = 1.0;
  }
  lp.c.assign(kVertexCount, 0.0);
  for (std::size_t j = kLocalVertexCount; j < kVertexCount; ++j) lp.c[j] = 1.0;

  const LpSolution sol = solve_lp(lp, tol);
  if (sol.status != LpSolution::Status::optimal)
    throw OutsidePolytopeError(
        "behavior is not a convex combination of the 24 no-signalling vertices "
        "(phase-one residual " + std::to_string(sol.infeasibility) + ")");

  Decomposition d;
  double total = 0.0;
  for (std::size_t j = 0; j < kVertexCount; ++j) {
    d.weights[j] = std::max(sol.x[j], 0.0);
    total += d.weights[j];
  }
  d.recombination_residual = max_abs_diff(recombine(d), y);
  if (std::abs(total - 1.0) > tol || d.recombination_residual > 1e-9)
    throw OutsidePolytopeError("decomposition failed to reproduce the behavior (residual " +
                               std::to_string(d.recombination_residual) + ")");
  return d;
}

DecoherenceFunctional d_pr_canonical() {
  struct Entry {
    std::string_view row, col;
    double value;
  };
  // Upper/lower position is immaterial; each coupling is mirrored below.
  static constexpr std::array<Entry, 10> kCouplings{{
      {"-+-+", "-+--", -0.25},
      {"+++-", "++--", -0.25},
      {"---+", "----", 0.25},
      {"-+-+", "+---", 0.25},
      {"++-+", "+---", -0.25},
      {"---+", "+---", -0.25},
      {"++-+", "+++-", 0.25},
      {"++-+", "-+-+", -0.25},
      {"---+", "-+-+", -0.25},
      {"---+", "++-+", 0.25},
  }};
  static constexpr std::array<std::string_view, 4> kDiagonal{"-+--", "+++-", "++-+", "---+"};

  ComplexMatrix m(kJointHistories);
  for (auto h : kDiagonal) {
    const auto i = static_cast<std::size_t>(parse_history(h));
    m(i, i) = 0.5;
  }
  for (const auto& e : kCouplings) {
    const auto r = static_cast<std::size_t>(parse_history(e.row));
    const auto c = static_cast<std::size_t>(parse_history(e.col));
    m(r, c) = e.value;
    m(c, r) = e.value;
  }
  return DecoherenceFunctional(m);
}

DecoherenceFunctional vertex_decoherence_functional(const Vertex& v) {
  if (const auto* local = std::get_if<LocalAssignment>(&v.kind))
    return DecoherenceFunctional::delta(kJointHistories, history_index(local->outcomes));
  return apply_flip_D(std::get<PrLabel>(v.kind).flip, d_pr_canonical());
}

namespace {

const std::vector<DecoherenceFunctional>& vertex_functionals() {
  static const std::vector<DecoherenceFunctional> cache = [] {
    std::vector<DecoherenceFunctional> out;
    for (const auto& v : vertex_catalog()) out.push_back(vertex_decoherence_functional(v));
    return out;
  }();
  return cache;
}

}  // namespace

DecoherenceFunctional construct_joint_measure(const Decomposition& d) {
  const auto& functionals = vertex_functionals();
  ComplexMatrix sum(kJointHistories);
  for (std::size_t i = 0; i < kVertexCount; ++i)
    if (d.weights[i] != 0.0) sum += d.weights[i] * functionals[i].entries();
  return DecoherenceFunctional(sum);
}

DecoherenceFunctional construct_joint_measure(const Behavior& y) {
  return construct_joint_measure(decompose(y));
}

}  // namespace qmeasure
