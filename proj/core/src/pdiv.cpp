#include "kltq/pdiv.hpp"

#include <algorithm>
#include <set>
#include <sstream>

namespace kltq {

namespace {

Int floor_rat(const Rat& x) {
  Int f;
  mpz_fdiv_q(f.get_mpz_t(), x.get_num().get_mpz_t(), x.get_den().get_mpz_t());
  return f;
}

std::string point_label(const CurvePoint& z) {
  if (z.infinite) return "inf";
  return z.value.get_str();
}

}  // namespace

PDivisorC1 PDivisorC1::make(int rank, Cone tail, std::map<CurvePoint, Polyhedron> slices) {
  if (rank < 0) throw Error("ShapeMismatch", "negative rank");
  if (tail.ambient_rank != rank)
    throw Error("ShapeMismatch", "tail cone rank mismatch");
  if (!tail.is_pointed())
    throw Error("TailNotPointed", "tail cones with lineality are unsupported");
  for (auto& [z, s] : slices) {
    if (!s.empty && s.tail != tail)
      throw Error("SliceTailMismatch", "every slice must share the tail cone");
  }
  PDivisorC1 d;
  d.lattice_rank = rank;
  d.tail = std::move(tail);
  d.slices = std::move(slices);
  return d;
}

Polyhedron PDivisorC1::slice_at(const CurvePoint& z) const {
  auto it = slices.find(z);
  if (it != slices.end()) return it->second;
  return Polyhedron::from_vertices_tail({RatVec(lattice_rank, Rat(0))}, tail);
}

bool PDivisorC1::locus_is_affine() const {
  for (const auto& [z, s] : slices)
    if (s.empty) return true;
  return false;
}

PDivisorC1 downgrade(const ToricAffine& x, const IntMat& acting_sublattice) {
  const int rank = x.lattice_rank;
  if (acting_sublattice.cols != rank)
    throw Error("ShapeMismatch", "sublattice rows must live in the ambient lattice");
  IntMat perp = kernel_saturated(acting_sublattice);
  if (perp.rows != 1)
    throw Error("ComplexityNotOne", "the acting sublattice must have corank 1");
  IntVec q = primitivize_line(perp.row(0));
  IntMat qmat = IntMat::from_rows({q}, rank);
  IntMat basis = kernel_saturated(qmat);  // rows: basis of N'
  if (lattice_row_basis(acting_sublattice) != basis)
    throw Error("SublatticeNotSaturated", "saturate the acting sublattice first");
  auto s = integer_solve(qmat, {Int(1)});
  if (!s) throw Error("Internal", "a primitive functional attains 1");
  const int k = rank - 1;
  std::vector<IntVec> tail_normals;
  std::vector<RatVec> slice_normals;
  RatVec rhs0, rhs_inf;
  for (const IntVec& n : x.sigma.ineqs) {
    IntVec bn = mat_vec(basis, n);
    Int ns = dot(n, *s);
    tail_normals.push_back(bn);
    slice_normals.push_back(to_rat(bn));
    rhs0.push_back(Rat(-ns));
    rhs_inf.push_back(Rat(ns));
  }
  Cone tail = Cone::from_ineqs(k, tail_normals);
  std::map<CurvePoint, Polyhedron> slices;
  slices[CurvePoint::at(Rat(0))] = Polyhedron::from_ineqs(k, slice_normals, rhs0);
  slices[CurvePoint::inf()] = Polyhedron::from_ineqs(k, slice_normals, rhs_inf);
  return PDivisorC1::make(k, std::move(tail), std::move(slices));
}

Evaluation evaluate(const PDivisorC1& d, const RatVec& m) {
  if (static_cast<int>(m.size()) != d.lattice_rank)
    throw Error("ShapeMismatch", "weight has the wrong rank");
  for (const IntVec& r : d.tail.rays)
    if (dot(m, r) < 0)
      throw Error("OutsideWeightCone", "weight must lie in the dual tail cone");
  Evaluation ev;
  ev.degree = 0;
  for (const auto& [z, slice] : d.slices) {
    if (slice.empty) continue;
    auto v = support_min(slice, m);
    if (!v) throw Error("Internal", "dual-cone membership bounds the support");
    Rat c = *v;
    c.canonicalize();
    ev.degree += c;
    ev.coeffs[z] = std::move(c);
  }
  ev.degree.canonicalize();
  return ev;
}

Properness is_proper(const PDivisorC1& d) {
  if (d.locus_is_affine()) return {true, "locus is affine"};
  Cone dual = dual_cone(d.tail);
  for (const IntVec& g : dual.rays)
    if (evaluate(d, to_rat(g)).degree < 0)
      return {false, "negative degree at a dual-cone generator"};
  IntVec sample(d.lattice_rank, Int(0));
  for (const IntVec& g : dual.rays)
    for (int j = 0; j < d.lattice_rank; ++j) sample[j] += g[j];
  if (is_zero(sample) && d.lattice_rank > 0)
    return {false, "evaluation degree is not big on the weight cone"};
  if (evaluate(d, to_rat(sample)).degree <= 0)
    return {false, "evaluation degree is not big on the weight cone"};
  return {true, "evaluation degrees are nonnegative and big"};
}

VerRayData ver_ray_sets(const PDivisorC1& d) {
  Properness p = is_proper(d);
  if (!p.proper) throw Error("ImproperDivisor", p.reason);
  VerRayData out;
  for (const auto& [z, slice] : d.slices) {
    if (slice.empty) continue;
    for (const RatVec& v : slice.vertices)
      out.vertical.push_back({z, v, lcm_denominators(v)});
  }
  const bool affine = d.locus_is_affine();
  for (size_t i = 0; i < d.tail.rays.size(); ++i) {
    if (affine) {
      out.horizontal.push_back(static_cast<int>(i));
      continue;
    }
    // Horizontal iff D(m) keeps positive degree on relint(rho-perp cap dual).
    std::vector<IntVec> normals = d.tail.rays;
    normals.push_back(d.tail.rays[i]);
    IntVec neg(d.tail.rays[i].size());
    for (size_t j = 0; j < neg.size(); ++j) neg[j] = -d.tail.rays[i][j];
    normals.push_back(std::move(neg));
    Cone face = Cone::from_ineqs(d.lattice_rank, normals);
    IntVec sample(d.lattice_rank, Int(0));
    for (const IntVec& g : face.rays)
      for (int j = 0; j < d.lattice_rank; ++j) sample[j] += g[j];
    if (is_zero(sample)) continue;
    if (evaluate(d, to_rat(sample)).degree > 0)
      out.horizontal.push_back(static_cast<int>(i));
  }
  return out;
}

namespace {

// Vertical divisor index set for divisor arithmetic: all marked points plus
// any extra points carrying data, each contributing its slice vertices.
std::vector<VerticalDivisor> vertical_support(const PDivisorC1& d,
                                              const std::vector<CurvePoint>& extra) {
  std::set<CurvePoint> points;
  for (const auto& [z, s] : d.slices) points.insert(z);
  for (const CurvePoint& z : extra) points.insert(z);
  std::vector<VerticalDivisor> out;
  for (const CurvePoint& z : points) {
    Polyhedron s = d.slice_at(z);
    if (s.empty) continue;
    for (const RatVec& v : s.vertices) out.push_back({z, v, lcm_denominators(v)});
  }
  return out;
}

}  // namespace

InvariantDivisor canonical_rep(const PDivisorC1& d, const CurvePoint& z0,
                               const CurvePoint& z1) {
  if (z0 == z1)
    throw Error("BadCanonicalPoints", "the two canonical points must differ");
  for (const CurvePoint& z : {z0, z1})
    if (d.slice_at(z).empty)
      throw Error("CanonicalPointOutsideLocus",
                  "canonical divisor points must lie in the locus");
  InvariantDivisor out;
  out.vertical = vertical_support(d, {z0, z1});
  for (const VerticalDivisor& vd : out.vertical) {
    Int ky = (vd.z == z0 || vd.z == z1) ? -1 : 0;
    Rat c = Rat(vd.mu * ky + vd.mu - 1);
    out.vertical_coeffs.push_back(std::move(c));
  }
  out.horizontal_coeffs.assign(d.tail.rays.size(), Rat(-1));
  return out;
}

InvariantDivisor principal_divisor(const PDivisorC1& d, const TCartierWitness& w) {
  Rat deg = 0;
  std::vector<CurvePoint> extra;
  for (const auto& [z, c] : w.f_divisor) {
    deg += c;
    extra.push_back(z);
  }
  if (deg != 0)
    throw Error("NotDegreeZero", "f must be a principal divisor on P^1");
  InvariantDivisor out;
  out.vertical = vertical_support(d, extra);
  for (const VerticalDivisor& vd : out.vertical) {
    auto it = w.f_divisor.find(vd.z);
    Rat ord = it == w.f_divisor.end() ? Rat(0) : it->second;
    Rat c = Rat(vd.mu) * (ord + dot(w.m, vd.v));
    c.canonicalize();
    out.vertical_coeffs.push_back(std::move(c));
  }
  for (const IntVec& r : d.tail.rays) {
    Rat c = dot(w.m, r);
    c.canonicalize();
    out.horizontal_coeffs.push_back(std::move(c));
  }
  return out;
}

TQGorensteinResult q_gorenstein_tvar(const PDivisorC1& d, const TBoundary& b,
                                     const CurvePoint& z0, const CurvePoint& z1) {
  VerRayData vr = ver_ray_sets(d);
  for (const auto& [idx, c] : b.vertical)
    if (idx < 0 || idx >= static_cast<int>(vr.vertical.size()))
      throw Error("BadDivisorIndex", "boundary names a nonexistent vertical divisor");
  for (const auto& [idx, c] : b.horizontal)
    if (idx < 0 || idx >= static_cast<int>(vr.horizontal.size()))
      throw Error("BadDivisorIndex", "boundary names a nonexistent horizontal divisor");
  // Unknowns: m (lattice_rank) then one f coefficient per relevant point.
  std::vector<CurvePoint> points;
  {
    std::set<CurvePoint> ps;
    for (const auto& [z, s] : d.slices) ps.insert(z);
    ps.insert(z0);
    ps.insert(z1);
    points.assign(ps.begin(), ps.end());
  }
  auto fvar = [&](const CurvePoint& z) {
    for (size_t i = 0; i < points.size(); ++i)
      if (points[i] == z) return d.lattice_rank + static_cast<int>(i);
    throw Error("Internal", "point index lookup");
  };
  const int nvars = d.lattice_rank + static_cast<int>(points.size());
  std::vector<RatVec> rows;
  RatVec rhs;
  auto ky = [&](const CurvePoint& z) { return (z == z0 || z == z1) ? Rat(-1) : Rat(0); };
  for (size_t h = 0; h < vr.horizontal.size(); ++h) {
    const IntVec& ray = d.tail.rays[vr.horizontal[h]];
    RatVec row(nvars, Rat(0));
    for (int j = 0; j < d.lattice_rank; ++j) row[j] = Rat(ray[j]);
    rows.push_back(std::move(row));
    auto it = b.horizontal.find(static_cast<int>(h));
    rhs.push_back((it == b.horizontal.end() ? Rat(0) : it->second) - 1);
  }
  // Vertical equations over the marked points, plus implicit trivial slices
  // at unmarked canonical points.
  std::vector<VerticalDivisor> verticals = vr.vertical;
  std::vector<Rat> vbound(verticals.size(), Rat(0));
  for (const auto& [idx, c] : b.vertical) vbound[idx] = c;
  for (const CurvePoint& z : {z0, z1}) {
    if (d.slices.count(z)) continue;
    Polyhedron s = d.slice_at(z);
    for (const RatVec& v : s.vertices) {
      verticals.push_back({z, v, lcm_denominators(v)});
      vbound.push_back(Rat(0));
    }
  }
  for (size_t j = 0; j < verticals.size(); ++j) {
    const VerticalDivisor& vd = verticals[j];
    RatVec row(nvars, Rat(0));
    for (int t = 0; t < d.lattice_rank; ++t) row[t] = Rat(vd.mu) * vd.v[t];
    row[fvar(vd.z)] = Rat(vd.mu);
    rows.push_back(std::move(row));
    rhs.push_back(Rat(vd.mu) * ky(vd.z) + Rat(vd.mu) - 1 + vbound[j]);
  }
  {
    RatVec row(nvars, Rat(0));
    for (size_t i = 0; i < points.size(); ++i) row[d.lattice_rank + i] = 1;
    rows.push_back(std::move(row));
    rhs.push_back(Rat(0));
  }
  LinSolveResult sol = solve_rational(rows, rhs);
  TQGorensteinResult out;
  if (!sol.feasible()) {
    out.infeasibility = sol.certificate;
    return out;
  }
  CartierWitness min = minimal_index_witness(*sol.particular, sol.kernel);
  TCartierWitness w;
  w.m.assign(min.m.begin(), min.m.begin() + d.lattice_rank);
  for (size_t i = 0; i < points.size(); ++i) {
    Rat f = min.m[d.lattice_rank + i];
    if (f != 0) w.f_divisor[points[i]] = f;
  }
  w.cartier_index = min.cartier_index;
  out.witness = std::move(w);
  return out;
}

QuotientKltCertificate quotient_klt_certificate(const PDivisorC1& d,
                                                const TBoundary& b,
                                                const TCartierWitness& w,
                                                const CurvePoint& z0,
                                                const CurvePoint& z1) {
  if (d.locus_is_affine())
    throw Error("QuotientNotAPoint", "the pipeline requires full P^1 locus");
  for (const auto& [idx, c] : b.vertical)
    if (c < 0 || c >= 1) throw Error("NotKlt", "boundary coefficients must lie in [0,1)");
  for (const auto& [idx, c] : b.horizontal)
    if (c < 0 || c >= 1) throw Error("NotKlt", "boundary coefficients must lie in [0,1)");
  QuotientKltCertificate cert;
  cert.m_interior = true;
  for (const IntVec& r : d.tail.rays)
    if (-dot(w.m, r) <= 0) cert.m_interior = false;
  InvariantDivisor canon = canonical_rep(d, z0, z1);
  InvariantDivisor princ = principal_divisor(d, w);
  auto coeff_at = [](const InvariantDivisor& div, const CurvePoint& z,
                     const RatVec& v) {
    for (size_t i = 0; i < div.vertical.size(); ++i)
      if (div.vertical[i].z == z && div.vertical[i].v == v)
        return div.vertical_coeffs[i];
    return Rat(0);
  };
  std::set<CurvePoint> points;
  for (const auto& [z, s] : d.slices) points.insert(z);
  points.insert(z0);
  points.insert(z1);
  Rat total = 0;
  bool coeffs_ok = true;
  for (const CurvePoint& z : points) {
    Polyhedron s = d.slice_at(z);
    const RatVec* pick = nullptr;
    Rat best;
    bool tie = false;
    for (const RatVec& v : s.vertices) {
      Rat val = -dot(w.m, v);
      if (!pick || val < best) {
        pick = &v;
        best = val;
        tie = false;
      } else if (val == best) {
        tie = true;  // vertices are lex-sorted; the first minimizer stays
      }
    }
    if (!pick) throw Error("Internal", "nonempty slices have vertices");
    if (tie)
      cert.notes.push_back("tie-break at point " + point_label(z) +
                           ": lexicographically least vertex selected");
    Int mu = lcm_denominators(*pick);
    Rat e = coeff_at(princ, z, *pick) - coeff_at(canon, z, *pick);
    Rat by = Rat(mu - 1) / Rat(mu) + e / Rat(mu);
    by.canonicalize();
    total += by;
    if (by >= 1) coeffs_ok = false;
    if (by != 0) cert.b_y[z] = by;
  }
  total.canonicalize();
  cert.coefficient_check = coeffs_ok;
  cert.degree_check = total < 2;
  cert.pass = cert.m_interior && cert.coefficient_check && cert.degree_check;
  return cert;
}

Int graded_dimension(const PDivisorC1& d, const IntVec& m) {
  if (d.locus_is_affine())
    throw Error("InfiniteDimensional", "section spaces over an affine locus");
  Evaluation ev = evaluate(d, to_rat(m));
  Int deg = 0;
  for (const auto& [z, c] : ev.coeffs) deg += floor_rat(c);
  Int dim = deg + 1;
  return dim > 0 ? dim : Int(0);
}

}  // namespace kltq
