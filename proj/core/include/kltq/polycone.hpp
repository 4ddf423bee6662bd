// Rational polyhedral cones and polyhedra: duality by double description,
// Hilbert bases, Minkowski sums, support evaluation.
#pragma once

#include "kltq/exactlin.hpp"

#include <optional>
#include <vector>

namespace kltq {

/// Cone as a mutually consistent dual pair (generators, facet normals),
/// both primitive, irredundant and lexicographically sorted. Lineality is
/// represented by +/- generator pairs; equations likewise on the dual side.
struct Cone {
  int ambient_rank = 0;
  std::vector<IntVec> rays;
  std::vector<IntVec> ineqs;

  static Cone from_rays(int rank, const std::vector<IntVec>& gens);
  static Cone from_ineqs(int rank, const std::vector<IntVec>& normals);

  bool contains(const IntVec& v) const;
  bool contains(const RatVec& v) const;
  /// Strict containment in the relative interior.
  bool contains_relint(const RatVec& v) const;
  bool is_pointed() const;
  bool is_full_dimensional() const;
  int dim() const;
  /// Pointed, and the rays extend to a Z-basis of the ambient lattice.
  bool is_smooth() const;
  /// Irredundant facet normals (ineqs minus the +/- equation pairs).
  std::vector<IntVec> facet_normals() const;
  /// Rays of the facet cut out by the given facet normal.
  std::vector<IntVec> facet_rays(const IntVec& normal) const;

  bool operator==(const Cone&) const = default;
};

Cone dual_cone(const Cone& c);

/// Unique minimal generating set of C ∩ Z^rank for a pointed cone C.
/// work_bound caps the number of enumerated parallelepiped points; exceeding
/// it raises HilbertBasisWorkBoundExceeded rather than truncating.
std::vector<IntVec> hilbert_basis(const Cone& c, long work_bound = 1000000);

/// Polyhedron = conv(vertices) + tail, or Empty (absorbing for +).
struct Polyhedron {
  bool empty = true;
  std::vector<RatVec> vertices;
  Cone tail;

  static Polyhedron make_empty(int rank);
  static Polyhedron from_vertices_tail(std::vector<RatVec> verts, Cone tail);
  /// Vertex/tail description of {x : <a_i, x> >= b_i}. The result must be
  /// pointed (no lineality); Empty when the system is infeasible.
  static Polyhedron from_ineqs(int rank, const std::vector<RatVec>& normals,
                               const RatVec& rhs);
  int rank() const { return tail.ambient_rank; }
  bool contains(const RatVec& x) const;

  bool operator==(const Polyhedron&) const = default;
};

Polyhedron minkowski_sum(const Polyhedron& p, const Polyhedron& q);

/// min over P of <m, .>; nullopt encodes -infinity (unbounded below).
std::optional<Rat> support_min(const Polyhedron& p, const RatVec& m);

/// Least positive integer clearing the denominators of v.
Int vertex_multiplicity(const RatVec& v);

/// Lex order helpers shared by canonicalization and tests.
bool lex_less(const IntVec& a, const IntVec& b);
bool lex_less(const RatVec& a, const RatVec& b);

}  // namespace kltq
