// Quotients of affine space by diagonalizable groups: invariant monoids,
// toric presentation of the quotient, finite abelian quotients via lattice
// refinement, and the ramification identity for log discrepancies.
#pragma once

#include "kltq/torsing.hpp"

#include <map>
#include <optional>
#include <utility>
#include <vector>

namespace kltq {

/// Diagonal action on A^n: one weight row per 1-torus factor, plus finite
/// cyclic factors acting by roots of unity.
struct WeightAction {
  int n = 0;
  IntMat torus_weights;  // k x n
  struct FiniteFactor {
    Int order;      // >= 2
    IntVec weights;  // length n, taken mod order
  };
  std::vector<FiniteFactor> finite_factors;

  void validate() const;
};

/// Minimal generators (Hilbert basis) of the invariant-exponent monoid
/// {e in Z^n_{>=0} : W e = 0, u_j . e = 0 mod d_j}, lex-sorted.
std::vector<IntVec> invariant_monoid(const WeightAction& a);

struct QuotientPresentation {
  std::vector<IntVec> invariant_generators;  // exponent vectors in Z^n
  IntMat char_basis;                 // rows: basis of the character lattice M'
  std::vector<IntVec> generator_chars;  // generators in char_basis coordinates
  ToricAffine quotient;
  /// Per ambient coordinate i: the quotient ray carrying div(x_i) and the
  /// multiplicity, when a ray matches the vanishing pattern of x_i.
  std::vector<std::optional<std::pair<int, Int>>> coordinate_divisor_map;
};

QuotientPresentation quotient_presentation(const WeightAction& a);

/// One relation: product of generators (by index, with repetition) on each
/// side. True iff the exponent sums agree.
using BinomialRelation = std::pair<std::vector<int>, std::vector<int>>;
std::vector<bool> verify_binomial_relations(const QuotientPresentation& p,
                                            const std::vector<BinomialRelation>& rels);

/// Finite-index refinement N_sub of N_sup: rows of sub_basis express a basis
/// of N_sub in N_sup coordinates.
struct LatticeRefinement {
  IntMat sub_basis;

  Int index() const;  // |N_sup / N_sub|
};

/// Image of a toric pair under the finite abelian quotient given by passing
/// from N_sub to N_sup. Boundary coefficients may reach 1 when the upstairs
/// pair is not klt; the witness is only produced below that threshold.
struct FiniteQuotientResult {
  ToricAffine downstairs;
  std::map<int, Rat> boundary;    // per downstairs ray index
  std::vector<Int> ramification;  // r_rho per downstairs ray
  std::optional<CartierWitness> witness;
};

FiniteQuotientResult finite_quotient(const LatticeRefinement& r,
                                     const ToricAffine& up,
                                     const std::map<int, Rat>& up_boundary,
                                     const CartierWitness& up_witness);

struct RamificationCheck {
  IntVec sample;        // primitive over N_sup, inside the cone
  Int r;                // ramification index of the sample
  Rat downstairs_value; // A_down(sample) * r
  Rat upstairs_value;   // A_up(r * sample)
  bool ok;
};

std::vector<RamificationCheck> riemann_hurwitz_check(
    const LatticeRefinement& r, const ToricAffine& up,
    const std::map<int, Rat>& up_boundary, const CartierWitness& up_witness,
    const std::vector<IntVec>& samples);

}  // namespace kltq
