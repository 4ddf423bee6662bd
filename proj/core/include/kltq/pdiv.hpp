// Complexity-one polyhedral divisors over P^1: downgrading toric data,
// evaluation, properness, invariant divisors, canonical and principal
// divisor calculus, and the quotient klt certificate pipeline.
#pragma once

#include "kltq/torsing.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace kltq {

/// Point of P^1: a rational number or infinity. Ordered with infinity last.
struct CurvePoint {
  bool infinite = false;
  Rat value;  // meaningful when finite

  static CurvePoint at(Rat v) {
    v.canonicalize();
    return {false, std::move(v)};
  }
  static CurvePoint inf() { return {true, Rat(0)}; }

  bool operator==(const CurvePoint& o) const {
    return infinite == o.infinite && (infinite || value == o.value);
  }
  bool operator<(const CurvePoint& o) const {
    if (infinite != o.infinite) return !infinite;
    return !infinite && value < o.value;
  }
};

/// Polyhedral divisor over P^1 with common tail cone; marked points carry
/// explicit slices (possibly Empty), unmarked points implicitly carry the
/// tail. The locus is P^1 minus the points with Empty slice.
struct PDivisorC1 {
  int lattice_rank = 0;
  Cone tail;
  std::map<CurvePoint, Polyhedron> slices;

  static PDivisorC1 make(int rank, Cone tail, std::map<CurvePoint, Polyhedron> slices);
  /// Slice at any point; unmarked points yield the tail as a polyhedron.
  Polyhedron slice_at(const CurvePoint& z) const;
  bool locus_is_affine() const;
};

/// Re-encode a toric variety as a T-variety for a corank-1 subtorus. Rows of
/// acting_sublattice span a saturated corank-1 sublattice N' of N; the fiber
/// over 0 (resp. infinity) is the q=1 (resp. q=-1) slice of the cone.
PDivisorC1 downgrade(const ToricAffine& x, const IntMat& acting_sublattice);

struct Evaluation {
  std::map<CurvePoint, Rat> coeffs;  // over marked points of the locus
  Rat degree;
};

/// D(m) = sum over Z of min <D_Z, m> [Z]; m must lie in the dual tail cone.
Evaluation evaluate(const PDivisorC1& d, const RatVec& m);

struct Properness {
  bool proper = false;
  std::string reason;
};

Properness is_proper(const PDivisorC1& d);

struct VerticalDivisor {
  CurvePoint z;
  RatVec v;  // slice vertex
  Int mu;    // least multiple making v integral
};

struct VerRayData {
  std::vector<VerticalDivisor> vertical;
  std::vector<int> horizontal;  // ray indices into tail.rays
};

/// Invariant prime divisors of X(D): vertical ones per (point, vertex) over
/// marked points, horizontal ones per tail ray whose evaluation stays big.
VerRayData ver_ray_sets(const PDivisorC1& d);

/// Divisor supported on vertical (point, vertex) pairs and tail rays.
struct InvariantDivisor {
  std::vector<VerticalDivisor> vertical;
  std::vector<Rat> vertical_coeffs;    // aligned with vertical
  std::vector<Rat> horizontal_coeffs;  // aligned with tail.rays
};

/// Canonical class representative with K_{P^1} = -[z0]-[z1].
InvariantDivisor canonical_rep(const PDivisorC1& d,
                               const CurvePoint& z0 = CurvePoint::at(Rat(0)),
                               const CurvePoint& z1 = CurvePoint::inf());

/// Witness datum: character m plus a degree-zero principal Q-divisor on P^1.
struct TCartierWitness {
  RatVec m;
  std::map<CurvePoint, Rat> f_divisor;
  Int cartier_index;
};

/// div(f (x) chi^m): <m, v_rho> on rays, mu(v)(ord_Z f + <m, v>) on
/// vertical pairs (over marked points and the support of f).
InvariantDivisor principal_divisor(const PDivisorC1& d, const TCartierWitness& w);

/// Boundary on the invariant divisors, indexed into ver_ray_sets output.
struct TBoundary {
  std::map<int, Rat> vertical;    // index into VerRayData.vertical
  std::map<int, Rat> horizontal;  // index into VerRayData.horizontal
};

struct TQGorensteinResult {
  std::optional<TCartierWitness> witness;
  std::optional<RatVec> infeasibility;
  bool feasible() const { return witness.has_value(); }
};

/// Solve for (m, f) with div(f (x) chi^m) = K_X + B on every invariant
/// divisor, with deg f = 0.
TQGorensteinResult q_gorenstein_tvar(const PDivisorC1& d, const TBoundary& b,
                                     const CurvePoint& z0 = CurvePoint::at(Rat(0)),
                                     const CurvePoint& z1 = CurvePoint::inf());

struct QuotientKltCertificate {
  bool m_interior = false;            // -m in relint of the dual tail cone
  std::map<CurvePoint, Rat> b_y;      // induced boundary on P^1
  bool coefficient_check = false;     // all coefficients < 1
  bool degree_check = false;          // sum of coefficients < 2
  bool pass = false;
  std::vector<std::string> notes;     // tie-break events etc.
};

/// The quotient-side klt check: descend (B, witness) along X(D) -> P^1 -> pt
/// and verify the induced pair on P^1 stays klt with -(K+B_Y) ample.
QuotientKltCertificate quotient_klt_certificate(const PDivisorC1& d,
                                                const TBoundary& b,
                                                const TCartierWitness& w,
                                                const CurvePoint& z0 = CurvePoint::at(Rat(0)),
                                                const CurvePoint& z1 = CurvePoint::inf());

/// dim of the degree-m piece of the section ring, locus P^1 only.
Int graded_dimension(const PDivisorC1& d, const IntVec& m);

}  // namespace kltq
