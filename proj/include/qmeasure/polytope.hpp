#pragma once

// The no-signalling polytope of the two-party, two-setting, two-outcome
// experiment: 16 local deterministic vertices and 8 PR boxes. Every valid
// Behavior is a convex combination of them, and mixing the vertices' joint
// decoherence functionals with the same weights gives a joint quantal measure
// for the mixture.
//
// Catalog order is fixed: local vertex k (k = 0..15) assigns the outcomes of
// history k, then PR vertex r (r = 0..7) is the r-th distinct image of
// canonical_pr_box() under FlipSpec::from_code(0), from_code(1), ... .
// PR vertex 0 is the canonical box.

#include <array>
#include <string>
#include <variant>
#include <vector>

#include "qmeasure/behavior.hpp"
#include "qmeasure/decoherence.hpp"

namespace qmeasure {

inline constexpr int kLocalVertexCount = 16;
inline constexpr int kPrVertexCount = 8;
inline constexpr int kVertexCount = kLocalVertexCount + kPrVertexCount;

/// Deterministic outcomes (±1) at a, a', b, b'.
struct LocalAssignment {
  std::array<int, 4> outcomes{};
  bool operator==(const LocalAssignment&) const = default;
};

/// PR orbit element and the first flip (in code order) producing it.
struct PrLabel {
  int id = 0;
  FlipSpec flip;
  bool operator==(const PrLabel&) const = default;
};

struct Vertex {
  int index = 0;
  std::variant<LocalAssignment, PrLabel> kind;
  Behavior behavior;

  bool is_local() const { return std::holds_alternative<LocalAssignment>(kind); }
  /// Stable id: "local:+-+-" (signs for a a' b b') or "pr:3".
  std::string id() const;
};

/// The 24 vertices, built once.
const std::vector<Vertex>& vertex_catalog();

/// Catalog index for an id produced by Vertex::id(); throws InputError.
int vertex_index(const std::string& id);

struct Decomposition {
  std::array<double, kVertexCount> weights{};
  /// max over coordinates of |Σ p_i v_i - y|.
  double recombination_residual = 0.0;
};

Behavior recombine(const Decomposition& d);

/// Finds p >= 0, Σp = 1, Σ p_i v_i = y with a two-phase simplex (Bland's
/// rule). Phase one establishes feasibility; phase two minimizes the total PR
/// weight, so behaviors inside the local polytope get purely local
/// decompositions. Throws OutsidePolytopeError if phase one cannot reach
/// feasibility within `tol`, which only happens for invalid behaviors.
Decomposition decompose(const Behavior& y, double tol = 1e-10);

/// The joint decoherence functional of the canonical PR box, entry by entry:
/// diagonal 1/2 on (-+--), (+++-), (++-+), (---+), the listed ±1/4 couplings
/// and their Hermitian mirrors, zero elsewhere.
DecoherenceFunctional d_pr_canonical();

/// Local vertex: point mass on its history. PR vertex: d_pr_canonical()
/// transported by the vertex's flip.
DecoherenceFunctional vertex_decoherence_functional(const Vertex& v);

/// D = Σ p_i D_i over decompose(y). Positivity follows from convexity.
DecoherenceFunctional construct_joint_measure(const Behavior& y);
DecoherenceFunctional construct_joint_measure(const Decomposition& d);

}  // namespace qmeasure
