// Exact integer and rational linear algebra on top of GMP.
// Everything here is total-precision: no floating point anywhere.
#pragma once

#include <gmpxx.h>

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace kltq {

using Int = mpz_class;
using Rat = mpq_class;

/// Error with a stable machine-readable code ("HilbertBasisRequiresPointed", ...).
class Error : public std::runtime_error {
 public:
  Error(std::string code, const std::string& what)
      : std::runtime_error(code + ": " + what), code_(std::move(code)) {}
  const std::string& code() const { return code_; }

 private:
  std::string code_;
};

using IntVec = std::vector<Int>;
using RatVec = std::vector<Rat>;

/// Dense integer matrix, row-major, arbitrary precision entries.
struct IntMat {
  int rows = 0;
  int cols = 0;
  std::vector<Int> data;

  IntMat() = default;
  IntMat(int r, int c) : rows(r), cols(c), data(static_cast<size_t>(r) * c) {}
  IntMat(int r, int c, std::vector<Int> d) : rows(r), cols(c), data(std::move(d)) {}

  Int& at(int i, int j) { return data[static_cast<size_t>(i) * cols + j]; }
  const Int& at(int i, int j) const { return data[static_cast<size_t>(i) * cols + j]; }

  IntVec row(int i) const {
    return IntVec(data.begin() + static_cast<size_t>(i) * cols,
                  data.begin() + static_cast<size_t>(i + 1) * cols);
  }
  static IntMat from_rows(const std::vector<IntVec>& rs, int cols);
  static IntMat identity(int n);
  IntMat transposed() const;
  bool operator==(const IntMat&) const = default;
};

IntMat mat_mul(const IntMat& a, const IntMat& b);
IntVec mat_vec(const IntMat& a, const IntVec& x);
Int dot(const IntVec& a, const IntVec& b);
Rat dot(const RatVec& a, const RatVec& b);
Rat dot(const RatVec& a, const IntVec& b);

/// gcd of all entries (nonnegative); 0 for the zero vector.
Int content(const IntVec& v);
/// Divide out the content and fix the sign so the first nonzero entry is positive.
/// Used for lines; rays keep their orientation, see primitivize_ray.
IntVec primitivize_line(const IntVec& v);
/// Divide out the content, orientation preserved. Zero stays zero.
IntVec primitivize_ray(const IntVec& v);
/// Clear denominators of a rational vector, then primitivize (orientation kept).
IntVec primitivize_ray(const RatVec& v);
bool is_zero(const IntVec& v);

/// lcm of denominators (all denominators positive by mpq invariants).
Int lcm_denominators(const RatVec& v);

RatVec to_rat(const IntVec& v);

/// Canonical row Hermite normal form.
/// H = U*M with U unimodular; H upper-echelon, pivots positive,
/// entries above each pivot reduced into [0, pivot).
struct HnfResult {
  IntMat h;
  IntMat u;
  std::vector<int> pivot_cols;  // one per nonzero row of h
};
HnfResult hermite_normal_form(const IntMat& m);

/// Smith normal form D = U*M*V with U, V unimodular and D diagonal,
/// diagonal entries nonnegative with d_i | d_{i+1}.
struct SnfResult {
  IntMat d;
  IntMat u;
  IntMat v;
  IntMat u_inv;
  std::vector<Int> invariant_factors() const;
};
SnfResult smith_normal_form(const IntMat& m);

/// Saturated basis of {e in Z^cols : M*e = 0}; rows of the result.
/// Empty (0 x cols) matrix for a trivial kernel.
IntMat kernel_saturated(const IntMat& m);

/// Basis (rows) of the lattice generated by the given row vectors, in HNF.
IntMat lattice_row_basis(const IntMat& m);

/// Solve A*x = b over Z. nullopt when no integral solution exists.
std::optional<IntVec> integer_solve(const IntMat& a, const IntVec& b);

/// Outcome of a rational linear solve: either a particular solution together
/// with a basis of the solution space of A*x = 0, or a Farkas certificate
/// lambda with lambda^T A = 0 and lambda^T b != 0.
struct LinSolveResult {
  std::optional<RatVec> particular;
  std::vector<RatVec> kernel;       // valid when particular has a value
  std::optional<RatVec> certificate;  // valid when infeasible
  bool feasible() const { return particular.has_value(); }
};
LinSolveResult solve_rational(const std::vector<RatVec>& a, const RatVec& b);
LinSolveResult solve_rational(const IntMat& a, const RatVec& b);

/// Least k > 0 for which A*x = k*w has an integral solution x, together with
/// one such x. Requires rational solvability of A*x = w (checked).
struct ClearingIndex {
  Int k;
  IntVec witness;
};
ClearingIndex minimal_clearing_index(const IntMat& a, const RatVec& w);

}  // namespace kltq
