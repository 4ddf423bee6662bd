// Affine toric singularity analysis: canonical class, Q-Gorenstein
// witnesses, klt certificates, log discrepancies, star subdivisions and
// resolutions.
#pragma once

#include "kltq/polycone.hpp"

#include <map>
#include <optional>
#include <set>
#include <vector>

namespace kltq {

/// Affine toric variety given by a pointed cone with primitive rays.
struct ToricAffine {
  int lattice_rank = 0;
  Cone sigma;

  static ToricAffine make(int rank, const std::vector<IntVec>& rays);
};

/// Boundary divisor: coefficient b in [0,1) per ray index of sigma.rays,
/// missing indices mean 0.
struct ToricBoundary {
  std::map<int, Rat> coeffs;

  Rat coeff(int ray_index) const;
  static ToricBoundary validated(const ToricAffine& x, std::map<int, Rat> coeffs);
};

/// m with <m, v_rho> = b_rho - 1 on every ray; cartier_index is the least
/// k >= 1 making k*m integral.
struct CartierWitness {
  RatVec m;
  Int cartier_index;
};

struct KltCertificate {
  ToricBoundary boundary;
  CartierWitness witness;
  std::vector<Rat> ray_log_discrepancies;  // 1 - b_rho per ray, in ray order
};

/// Witness, or an infeasibility certificate over the ray equations
/// (multipliers lambda with lambda^T rays = 0, lambda^T (b-1) != 0).
struct QGorensteinResult {
  std::optional<CartierWitness> witness;
  std::optional<RatVec> infeasibility;
  bool feasible() const { return witness.has_value(); }
};

/// Coefficient -1 at every ray.
std::vector<Rat> canonical_class(const ToricAffine& x);

/// Among solutions m0 + span(kernel), the one whose denominators clear at
/// the least k > 0, together with that k.
CartierWitness minimal_index_witness(const RatVec& m0,
                                     const std::vector<RatVec>& kernel);

QGorensteinResult q_gorenstein_witness(const ToricAffine& x, const ToricBoundary& b);

/// Rational m with -1 <= <m, v_rho> < 0 on all rays; rays outside the given
/// support are pinned at exactly -1 (boundary coefficient 0). nullopt when
/// no support set means all rays may carry boundary.
std::optional<KltCertificate> klt_type_certificate(
    const ToricAffine& x, const std::optional<std::set<int>>& support);

/// -<m, v> for a primitive v in sigma.
Rat log_discrepancy(const ToricAffine& x, const CartierWitness& w, const IntVec& v);

/// Star subdivision of the fan at a primitive v inside its support.
std::vector<Cone> star_subdivide(const std::vector<Cone>& fan, const IntVec& v);

struct Resolution {
  std::vector<Cone> fan;
  std::vector<IntVec> exceptional_rays;
};

/// Iterated star subdivision until all cones are smooth. Any seeds are
/// subdivided first, in order; afterwards the heuristic picks the lex-least
/// non-smooth cone and its minimal-coordinate-sum Hilbert basis point.
Resolution resolve(const ToricAffine& x, const std::vector<IntVec>& seeds = {});

}  // namespace kltq
