#include "kltq/diagquot.hpp"

#include <algorithm>

namespace kltq {

void WeightAction::validate() const {
  if (n <= 0) throw Error("BadAction", "ambient dimension must be positive");
  if (torus_weights.rows > 0 && torus_weights.cols != n)
    throw Error("ShapeMismatch", "torus weight rows must have length n");
  for (const auto& f : finite_factors) {
    if (f.order < 2) throw Error("BadAction", "finite factor orders must be >= 2");
    if (static_cast<int>(f.weights.size()) != n)
      throw Error("ShapeMismatch", "finite factor weights must have length n");
  }
}

namespace {

// Basis (rows) of the invariant-exponent lattice
// {e in Z^n : W e = 0 and u_j . e = 0 mod d_j}.
IntMat invariant_lattice(const WeightAction& a) {
  IntMat k = a.torus_weights.rows > 0 ? kernel_saturated(a.torus_weights)
                                      : IntMat::identity(a.n);
  if (a.finite_factors.empty() || k.rows == 0) return k;
  // In kernel coordinates c (e = c^T K), congruences become
  // (K u_j^T) . c = 0 mod d_j; solve via an auxiliary variable per factor.
  const int r = k.rows;
  const int f = static_cast<int>(a.finite_factors.size());
  IntMat sys(f, r + f);
  for (int j = 0; j < f; ++j) {
    for (int i = 0; i < r; ++i) sys.at(j, i) = dot(k.row(i), a.finite_factors[j].weights);
    sys.at(j, r + j) = a.finite_factors[j].order;
  }
  IntMat ker = kernel_saturated(sys);
  std::vector<IntVec> crows;
  for (int i = 0; i < ker.rows; ++i) {
    IntVec row = ker.row(i);
    crows.emplace_back(row.begin(), row.begin() + r);
  }
  IntMat c = lattice_row_basis(IntMat::from_rows(crows, r));
  return mat_mul(c, k);
}

}  // namespace

std::vector<IntVec> invariant_monoid(const WeightAction& a) {
  a.validate();
  IntMat l = invariant_lattice(a);
  if (l.rows == 0) return {};
  // e = y^T L >= 0 componentwise: a cone in y with normals the columns of L.
  std::vector<IntVec> normals;
  for (int j = 0; j < a.n; ++j) {
    IntVec col(l.rows);
    for (int i = 0; i < l.rows; ++i) col[i] = l.at(i, j);
    normals.push_back(std::move(col));
  }
  Cone c = Cone::from_ineqs(l.rows, normals);
  std::vector<IntVec> out;
  for (const IntVec& y : hilbert_basis(c)) {
    IntVec e(a.n, Int(0));
    for (int i = 0; i < l.rows; ++i)
      for (int j = 0; j < a.n; ++j) e[j] += y[i] * l.at(i, j);
    out.push_back(std::move(e));
  }
  std::sort(out.begin(), out.end(),
            [](const IntVec& x, const IntVec& y) { return lex_less(x, y); });
  return out;
}

QuotientPresentation quotient_presentation(const WeightAction& a) {
  QuotientPresentation p;
  p.invariant_generators = invariant_monoid(a);
  if (p.invariant_generators.empty())
    throw Error("PointQuotient", "the invariant monoid is trivial");
  // Character lattice M' = lattice generated by the invariant monoid; the
  // monoid is full-dimensional there, so the dual cone is pointed.
  p.char_basis =
      lattice_row_basis(IntMat::from_rows(p.invariant_generators, a.n));
  const int r = p.char_basis.rows;
  if (r == 0) throw Error("PointQuotient", "the invariant monoid is trivial");
  IntMat bt = p.char_basis.transposed();
  for (const IntVec& g : p.invariant_generators) {
    auto coords = integer_solve(bt, g);
    if (!coords) throw Error("Internal", "generator outside its own lattice");
    p.generator_chars.push_back(*coords);
  }
  p.quotient.lattice_rank = r;
  p.quotient.sigma = Cone::from_ineqs(r, p.generator_chars);
  if (!p.quotient.sigma.is_pointed())
    throw Error("Internal", "quotient cone must be pointed");
  // div(x_i) lands on the ray positive on exactly the generators that
  // involve x_i; multiplicity is the least such valuation.
  const auto& rays = p.quotient.sigma.rays;
  for (int i = 0; i < a.n; ++i) {
    std::vector<bool> uses(p.invariant_generators.size());
    bool any = false;
    for (size_t k = 0; k < p.invariant_generators.size(); ++k) {
      uses[k] = p.invariant_generators[k][i] > 0;
      any = any || uses[k];
    }
    std::optional<std::pair<int, Int>> hit;
    if (any) {
      for (size_t ri = 0; ri < rays.size() && !hit; ++ri) {
        Int minval = 0;
        bool match = true;
        for (size_t k = 0; k < p.generator_chars.size() && match; ++k) {
          Int val = dot(p.generator_chars[k], rays[ri]);
          if ((val > 0) != uses[k]) match = false;
          if (val > 0 && (minval == 0 || val < minval)) minval = val;
        }
        if (match) hit = {static_cast<int>(ri), minval};
      }
    }
    p.coordinate_divisor_map.push_back(hit);
  }
  return p;
}

std::vector<bool> verify_binomial_relations(const QuotientPresentation& p,
                                            const std::vector<BinomialRelation>& rels) {
  const int n = p.invariant_generators.empty()
                    ? 0
                    : static_cast<int>(p.invariant_generators[0].size());
  std::vector<bool> out;
  auto side_sum = [&](const std::vector<int>& idxs) {
    IntVec s(n, Int(0));
    for (int k : idxs) {
      if (k < 0 || k >= static_cast<int>(p.invariant_generators.size()))
        throw Error("BadGeneratorIndex", "relation names a nonexistent generator");
      for (int j = 0; j < n; ++j) s[j] += p.invariant_generators[k][j];
    }
    return s;
  };
  for (const auto& [lhs, rhs] : rels) out.push_back(side_sum(lhs) == side_sum(rhs));
  return out;
}

Int LatticeRefinement::index() const {
  if (sub_basis.rows != sub_basis.cols)
    throw Error("ShapeMismatch", "sublattice basis must be square");
  SnfResult s = smith_normal_form(sub_basis);
  Int d = 1;
  for (int i = 0; i < s.d.rows; ++i) d *= s.d.at(i, i);
  return abs(d);
}

namespace {

// Sup-coordinates of a point given in sub-coordinates.
IntVec to_sup(const IntMat& sub_basis, const IntVec& c) {
  return mat_vec(sub_basis.transposed(), c);
}

// Rational sub-coordinates of a sup-lattice point (basis is full rank).
RatVec to_sub(const IntMat& sub_basis, const IntVec& v) {
  LinSolveResult s = solve_rational(sub_basis.transposed(), to_rat(v));
  if (!s.feasible()) throw Error("Internal", "refinement basis must be invertible");
  return *s.particular;
}

}  // namespace

FiniteQuotientResult finite_quotient(const LatticeRefinement& r,
                                     const ToricAffine& up,
                                     const std::map<int, Rat>& up_boundary,
                                     const CartierWitness& up_witness) {
  if (r.sub_basis.rows != up.lattice_rank)
    throw Error("ShapeMismatch", "refinement rank mismatch");
  if (r.index() <= 1)
    throw Error("NotAProperRefinement", "the sublattice must have index > 1");
  for (const auto& [idx, b] : up_boundary) {
    if (idx < 0 || idx >= static_cast<int>(up.sigma.rays.size()))
      throw Error("BadRayIndex", "boundary coefficient on a nonexistent ray");
    if (b < 0 || b > 1)
      throw Error("BoundaryOutOfRange", "upstairs coefficients must lie in [0,1]");
  }
  FiniteQuotientResult out;
  std::vector<IntVec> down_rays;
  for (const IntVec& ru : up.sigma.rays)
    down_rays.push_back(primitivize_ray(to_sup(r.sub_basis, ru)));
  out.downstairs.lattice_rank = up.lattice_rank;
  out.downstairs.sigma = Cone::from_rays(up.lattice_rank, down_rays);
  if (!out.downstairs.sigma.is_pointed())
    throw Error("Internal", "refinement must preserve pointedness");
  // Per downstairs ray: ramification index r_rho = content of the image of
  // the matching upstairs primitive ray; b' - 1 = (b - 1) / r_rho.
  bool klt = true;
  for (size_t i = 0; i < out.downstairs.sigma.rays.size(); ++i) {
    const IntVec& v = out.downstairs.sigma.rays[i];
    int up_idx = -1;
    Int ram = 0;
    for (size_t j = 0; j < up.sigma.rays.size(); ++j) {
      IntVec img = to_sup(r.sub_basis, up.sigma.rays[j]);
      if (primitivize_ray(img) == v) {
        up_idx = static_cast<int>(j);
        ram = content(img);
        break;
      }
    }
    if (up_idx < 0) throw Error("Internal", "downstairs ray without a source ray");
    out.ramification.push_back(ram);
    auto it = up_boundary.find(up_idx);
    Rat b = it == up_boundary.end() ? Rat(0) : it->second;
    Rat bd = 1 + (b - 1) / Rat(ram);
    bd.canonicalize();
    if (bd != 0) out.boundary[static_cast<int>(i)] = bd;
    if (bd >= 1) klt = false;
  }
  if (klt) {
    // <m_down, B^T c> = <m_up, c> for all c, i.e. B m_down = m_up.
    LinSolveResult s = solve_rational(r.sub_basis, up_witness.m);
    if (!s.feasible()) throw Error("Internal", "witness transport must solve");
    RatVec m = *s.particular;
    for (Rat& c : m) c.canonicalize();
    Int idx = lcm_denominators(m);
    out.witness = CartierWitness{std::move(m), std::move(idx)};
  }
  return out;
}

std::vector<RamificationCheck> riemann_hurwitz_check(
    const LatticeRefinement& r, const ToricAffine& up,
    const std::map<int, Rat>& up_boundary, const CartierWitness& up_witness,
    const std::vector<IntVec>& samples) {
  FiniteQuotientResult q = finite_quotient(r, up, up_boundary, up_witness);
  if (!q.witness)
    throw Error("NotKlt", "ramification check requires a klt downstairs pair");
  std::vector<RamificationCheck> out;
  for (const IntVec& w : samples) {
    if (content(w) != 1) throw Error("NotPrimitive", "samples must be primitive");
    if (!q.downstairs.sigma.contains(w))
      throw Error("OutsideCone", "sample lies outside the cone");
    RatVec c = to_sub(r.sub_basis, w);
    Int rw = lcm_denominators(c);
    RamificationCheck chk;
    chk.sample = w;
    chk.r = rw;
    chk.downstairs_value = -dot(q.witness->m, w) * Rat(rw);
    chk.downstairs_value.canonicalize();
    // Upstairs value of the lattice point r_w * w, by linearity of -<m, .>.
    Rat upval = 0;
    for (size_t i = 0; i < c.size(); ++i) upval += -up_witness.m[i] * c[i] * Rat(rw);
    upval.canonicalize();
    chk.upstairs_value = upval;
    chk.ok = chk.downstairs_value == chk.upstairs_value;
    out.push_back(std::move(chk));
  }
  return out;
}

}  // namespace kltq
