#include "kltq/polycone.hpp"

#include "kltq/lp.hpp"

#include <algorithm>
#include <cassert>
#include <map>
#include <set>

namespace kltq {

bool lex_less(const IntVec& a, const IntVec& b) {
  return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

bool lex_less(const RatVec& a, const RatVec& b) {
  return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

namespace {

const auto lex_int = [](const IntVec& a, const IntVec& b) { return lex_less(a, b); };
const auto lex_rat = [](const RatVec& a, const RatVec& b) { return lex_less(a, b); };

struct DdResult {
  std::vector<IntVec> rays;       // extreme rays mod lineality, primitive
  std::vector<IntVec> lineality;  // saturated HNF basis
};

IntVec negate(const IntVec& v) {
  IntVec w(v.size());
  for (size_t i = 0; i < v.size(); ++i) w[i] = -v[i];
  return w;
}

// Orthogonal projection of r onto the complement of span(lin), primitivized.
// Returns the zero vector when r lies in the span.
IntVec project_mod_lineality(const std::vector<IntVec>& lin, const IntVec& r) {
  if (lin.empty()) return primitivize_ray(r);
  const int k = static_cast<int>(lin.size());
  // Solve (L L^T) c = L r.
  std::vector<RatVec> g(k, RatVec(k));
  RatVec rhs(k);
  for (int i = 0; i < k; ++i) {
    for (int j = 0; j < k; ++j) g[i][j] = Rat(dot(lin[i], lin[j]));
    rhs[i] = Rat(dot(lin[i], r));
  }
  LinSolveResult s = solve_rational(g, rhs);
  assert(s.feasible());
  RatVec proj(r.size());
  for (size_t t = 0; t < r.size(); ++t) {
    proj[t] = Rat(r[t]);
    for (int i = 0; i < k; ++i) proj[t] -= (*s.particular)[i] * Rat(lin[i][t]);
  }
  return primitivize_ray(proj);
}

// Remove non-extreme rays: r goes when some other generator's zero set
// (w.r.t. the processed constraints) contains its own.
std::vector<IntVec> prune_nonextreme(std::vector<IntVec> rays,
                                     const std::vector<IntVec>& constraints) {
  std::sort(rays.begin(), rays.end(), lex_int);
  rays.erase(std::unique(rays.begin(), rays.end()), rays.end());
  const size_t n = rays.size();
  std::vector<std::vector<bool>> zero(n, std::vector<bool>(constraints.size()));
  for (size_t i = 0; i < n; ++i)
    for (size_t c = 0; c < constraints.size(); ++c)
      zero[i][c] = dot(constraints[c], rays[i]) == 0;
  std::vector<bool> drop(n, false);
  for (size_t i = 0; i < n; ++i)
    for (size_t j = 0; j < n; ++j) {
      if (i == j) continue;
      bool superset = true;
      for (size_t c = 0; c < constraints.size() && superset; ++c)
        if (zero[i][c] && !zero[j][c]) superset = false;
      if (superset) {
        drop[i] = true;
        break;
      }
    }
  std::vector<IntVec> out;
  for (size_t i = 0; i < n; ++i)
    if (!drop[i]) out.push_back(std::move(rays[i]));
  return out;
}

// Double description: generators of {y : <a, y> >= 0 for all a}.
DdResult dd_dual(int rank, const std::vector<IntVec>& constraints_in) {
  std::vector<IntVec> lin;
  for (int i = 0; i < rank; ++i) {
    IntVec e(rank, Int(0));
    e[i] = 1;
    lin.push_back(std::move(e));
  }
  std::vector<IntVec> rays;
  std::vector<IntVec> processed;

  for (const IntVec& a_raw : constraints_in) {
    IntVec a = primitivize_ray(a_raw);
    if (is_zero(a)) continue;
    int split = -1;
    for (size_t i = 0; i < lin.size(); ++i)
      if (dot(a, lin[i]) != 0) {
        split = static_cast<int>(i);
        break;
      }
    if (split >= 0) {
      IntVec l0 = lin[split];
      Int s = dot(a, l0);
      if (s < 0) {
        l0 = negate(l0);
        s = -s;
      }
      std::vector<IntVec> nlin;
      for (size_t i = 0; i < lin.size(); ++i) {
        if (static_cast<int>(i) == split) continue;
        Int d = dot(a, lin[i]);
        IntVec l(lin[i].size());
        for (size_t t = 0; t < l.size(); ++t) l[t] = lin[i][t] * s - l0[t] * d;
        nlin.push_back(primitivize_line(l));
      }
      std::vector<IntVec> nrays;
      for (const IntVec& r : rays) {
        Int d = dot(a, r);
        IntVec w(r.size());
        for (size_t t = 0; t < w.size(); ++t) w[t] = r[t] * s - l0[t] * d;
        if (!is_zero(w)) nrays.push_back(primitivize_ray(w));
      }
      nrays.push_back(primitivize_ray(l0));
      lin = std::move(nlin);
      rays = std::move(nrays);
    } else {
      std::vector<IntVec> pos, zer, neg;
      std::vector<Int> dpos, dneg;
      for (const IntVec& r : rays) {
        Int d = dot(a, r);
        if (d > 0) {
          pos.push_back(r);
          dpos.push_back(d);
        } else if (d < 0) {
          neg.push_back(r);
          dneg.push_back(d);
        } else {
          zer.push_back(r);
        }
      }
      if (!neg.empty()) {
        std::vector<IntVec> next = pos;
        next.insert(next.end(), zer.begin(), zer.end());
        for (size_t p = 0; p < pos.size(); ++p)
          for (size_t q = 0; q < neg.size(); ++q) {
            IntVec w(a.size());
            for (size_t t = 0; t < w.size(); ++t)
              w[t] = dpos[p] * neg[q][t] - dneg[q] * pos[p][t];
            if (!is_zero(w)) next.push_back(primitivize_ray(w));
          }
        rays = std::move(next);
      }
    }
    processed.push_back(std::move(a));
    // Keep representatives canonical mod lineality, then drop non-extreme.
    std::vector<IntVec> reduced;
    for (const IntVec& r : rays) {
      IntVec w = project_mod_lineality(lin, r);
      if (!is_zero(w)) reduced.push_back(std::move(w));
    }
    rays = prune_nonextreme(std::move(reduced), processed);
  }

  DdResult out;
  out.rays = std::move(rays);
  std::sort(out.rays.begin(), out.rays.end(), lex_int);
  if (processed.empty()) {
    IntMat id = IntMat::identity(rank);
    for (int i = 0; i < rank; ++i) out.lineality.push_back(id.row(i));
  } else {
    IntMat k = kernel_saturated(IntMat::from_rows(processed, rank));
    for (int i = 0; i < k.rows; ++i) out.lineality.push_back(k.row(i));
  }
  return out;
}

std::vector<IntVec> with_lineality_pairs(const DdResult& d) {
  std::vector<IntVec> out = d.rays;
  for (const IntVec& l : d.lineality) {
    out.push_back(l);
    out.push_back(negate(l));
  }
  std::sort(out.begin(), out.end(), lex_int);
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

int rank_of(const std::vector<IntVec>& vs, int cols) {
  if (vs.empty()) return 0;
  HnfResult h = hermite_normal_form(IntMat::from_rows(vs, cols));
  return static_cast<int>(h.pivot_cols.size());
}

}  // namespace

Cone Cone::from_rays(int rank, const std::vector<IntVec>& gens) {
  for (const IntVec& g : gens)
    if (static_cast<int>(g.size()) != rank)
      throw Error("ShapeMismatch", "ray has wrong ambient rank");
  Cone c;
  c.ambient_rank = rank;
  DdResult dual = dd_dual(rank, gens);
  c.ineqs = with_lineality_pairs(dual);
  DdResult primal = dd_dual(rank, c.ineqs);
  c.rays = with_lineality_pairs(primal);
  return c;
}

Cone Cone::from_ineqs(int rank, const std::vector<IntVec>& normals) {
  for (const IntVec& n : normals)
    if (static_cast<int>(n.size()) != rank)
      throw Error("ShapeMismatch", "inequality has wrong ambient rank");
  Cone c;
  c.ambient_rank = rank;
  DdResult primal = dd_dual(rank, normals);
  c.rays = with_lineality_pairs(primal);
  DdResult dual = dd_dual(rank, c.rays);
  c.ineqs = with_lineality_pairs(dual);
  return c;
}

Cone dual_cone(const Cone& c) {
  Cone d;
  d.ambient_rank = c.ambient_rank;
  d.rays = c.ineqs;
  d.ineqs = c.rays;
  return d;
}

bool Cone::contains(const IntVec& v) const {
  for (const IntVec& n : ineqs)
    if (dot(n, v) < 0) return false;
  return true;
}

bool Cone::contains(const RatVec& v) const {
  for (const IntVec& n : ineqs)
    if (dot(v, n) < 0) return false;
  return true;
}

bool Cone::contains_relint(const RatVec& v) const {
  std::vector<IntVec> facets = facet_normals();
  std::set<IntVec> facet_set(facets.begin(), facets.end());
  for (const IntVec& n : ineqs) {
    Rat d = dot(v, n);
    if (facet_set.count(n)) {
      if (d <= 0) return false;
    } else {
      if (d != 0) return false;  // equation
    }
  }
  return true;
}

bool Cone::is_pointed() const {
  std::set<IntVec> s(rays.begin(), rays.end());
  for (const IntVec& r : rays)
    if (s.count(negate(r))) return false;
  return true;
}

int Cone::dim() const { return rank_of(rays, ambient_rank); }

bool Cone::is_full_dimensional() const { return dim() == ambient_rank; }

bool Cone::is_smooth() const {
  if (!is_pointed()) return false;
  if (rays.empty()) return true;
  if (static_cast<int>(rays.size()) != dim()) return false;
  SnfResult s = smith_normal_form(IntMat::from_rows(rays, ambient_rank));
  for (const Int& f : s.invariant_factors())
    if (f != 1) return false;
  return true;
}

std::vector<IntVec> Cone::facet_normals() const {
  std::vector<IntVec> out;
  for (const IntVec& n : ineqs) {
    bool strict_somewhere = false;
    for (const IntVec& r : rays)
      if (dot(n, r) > 0) {
        strict_somewhere = true;
        break;
      }
    if (strict_somewhere) out.push_back(n);
  }
  return out;
}

std::vector<IntVec> Cone::facet_rays(const IntVec& normal) const {
  std::vector<IntVec> out;
  for (const IntVec& r : rays)
    if (dot(normal, r) == 0) out.push_back(r);
  return out;
}

namespace {

// Pulling triangulation of a pointed cone into simplicial ray subsets.
void triangulate(const Cone& c, std::vector<std::vector<IntVec>>& out) {
  const int d = c.dim();
  if (static_cast<int>(c.rays.size()) == d) {
    out.push_back(c.rays);
    return;
  }
  const IntVec& apex = c.rays.front();  // lex-least ray
  for (const IntVec& n : c.facet_normals()) {
    if (dot(n, apex) == 0) continue;  // facet contains the apex
    Cone f = Cone::from_rays(c.ambient_rank, c.facet_rays(n));
    std::vector<std::vector<IntVec>> sub;
    triangulate(f, sub);
    for (auto& s : sub) {
      s.push_back(apex);
      out.push_back(std::move(s));
    }
  }
}

}  // namespace

std::vector<IntVec> hilbert_basis(const Cone& c, long work_bound) {
  if (!c.is_pointed())
    throw Error("HilbertBasisRequiresPointed", "cone has nontrivial lineality");
  if (c.rays.empty()) return {};

  std::vector<std::vector<IntVec>> simplices;
  triangulate(c, simplices);

  std::set<IntVec> candidates(c.rays.begin(), c.rays.end());
  long work = 0;
  for (const auto& s : simplices) {
    const int d = static_cast<int>(s.size());
    const int n = c.ambient_rank;
    IntMat smat = IntMat::from_rows(s, n);
    // Saturated lattice of the simplex span.
    IntMat ortho = kernel_saturated(smat);
    IntMat lbasis =
        ortho.rows == 0 ? IntMat::identity(n) : kernel_saturated(ortho);
    assert(lbasis.rows == d);
    // Ray coordinates in the lattice basis.
    IntMat t(d, d);
    IntMat lt = lbasis.transposed();
    for (int i = 0; i < d; ++i) {
      auto coords = integer_solve(lt, s[i]);
      if (!coords) throw Error("Internal", "ray must lie in its span lattice");
      for (int j = 0; j < d; ++j) t.at(i, j) = (*coords)[j];
    }
    // Columns of T generate the sublattice spanned by the rays.
    SnfResult snf = smith_normal_form(t.transposed());
    Int vol = 1;
    for (int i = 0; i < d; ++i) vol *= snf.d.at(i, i);
    vol = abs(vol);
    if (!vol.fits_slong_p() || (work += vol.get_si()) > work_bound)
      throw Error("HilbertBasisWorkBoundExceeded",
                  "parallelepiped enumeration exceeds the work bound");
    if (vol == 1) continue;
    // Enumerate Z^d / T Z^d as Uinv * ([0, d_1) x ... x [0, d_d)).
    IntVec z(d, Int(0));
    std::vector<RatVec> raycols(d, RatVec(d));
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) raycols[i][j] = Rat(t.at(j, i));
    for (;;) {
      // y in lattice-basis coordinates, then ambient coordinates.
      IntVec y = mat_vec(snf.u_inv, z);
      IntVec x(n, Int(0));
      for (int j = 0; j < d; ++j)
        for (int k2 = 0; k2 < n; ++k2) x[k2] += y[j] * lbasis.at(j, k2);
      // Reduce into the half-open fundamental parallelepiped.
      RatVec xcoords(d);
      {
        // lambda solves sum lambda_i * ray_i = x (in lattice coordinates).
        RatVec yr = to_rat(y);
        LinSolveResult sol = solve_rational(raycols, yr);
        assert(sol.feasible());
        xcoords = *sol.particular;
      }
      for (int i = 0; i < d; ++i) {
        Int fl;
        mpz_fdiv_q(fl.get_mpz_t(), xcoords[i].get_num().get_mpz_t(),
                   xcoords[i].get_den().get_mpz_t());
        if (fl != 0)
          for (int k2 = 0; k2 < n; ++k2) x[k2] -= fl * s[i][k2];
      }
      if (!is_zero(x)) candidates.insert(x);
      // Increment the mixed-radix counter z.
      int p = 0;
      while (p < d) {
        z[p] += 1;
        if (z[p] < snf.d.at(p, p)) break;
        z[p] = 0;
        ++p;
      }
      if (p == d) break;
    }
  }

  // Minimality: h stays iff it is not a sum of two nonzero monoid elements.
  std::vector<IntVec> cand(candidates.begin(), candidates.end());
  std::vector<IntVec> basis;
  for (const IntVec& h : cand) {
    bool reducible = false;
    for (const IntVec& g : cand) {
      if (g == h) continue;
      IntVec diff(h.size());
      for (size_t i = 0; i < h.size(); ++i) diff[i] = h[i] - g[i];
      if (is_zero(diff)) continue;
      if (c.contains(diff)) {
        reducible = true;
        break;
      }
    }
    if (!reducible) basis.push_back(h);
  }
  std::sort(basis.begin(), basis.end(), lex_int);
  return basis;
}

Polyhedron Polyhedron::make_empty(int rank) {
  Polyhedron p;
  p.empty = true;
  p.tail = Cone::from_rays(rank, {});
  return p;
}

namespace {

// Membership of x in conv(verts) + cone(tailrays), exact LP feasibility.
bool in_conv_plus_cone(const RatVec& x, const std::vector<RatVec>& verts,
                       const std::vector<IntVec>& tailrays) {
  if (verts.empty()) return false;
  const int rank = static_cast<int>(x.size());
  const int nv = static_cast<int>(verts.size());
  const int nr = static_cast<int>(tailrays.size());
  LpProblem p;
  p.nvars = nv + nr;
  for (int c = 0; c < rank; ++c) {
    RatVec a(p.nvars, Rat(0));
    for (int i = 0; i < nv; ++i) a[i] = verts[i][c];
    for (int j = 0; j < nr; ++j) a[nv + j] = Rat(tailrays[j][c]);
    p.add_eq(std::move(a), x[c]);
  }
  RatVec ones(p.nvars, Rat(0));
  for (int i = 0; i < nv; ++i) ones[i] = 1;
  p.add_eq(std::move(ones), Rat(1));
  for (int i = 0; i < p.nvars; ++i) {
    RatVec a(p.nvars, Rat(0));
    a[i] = 1;
    p.add_geq(std::move(a), Rat(0));
  }
  RatVec zero(p.nvars, Rat(0));
  return lp_optimize(p, zero, false).status == LpStatus::Optimal;
}

}  // namespace

Polyhedron Polyhedron::from_vertices_tail(std::vector<RatVec> verts, Cone tail) {
  for (RatVec& v : verts)
    for (Rat& x : v) x.canonicalize();
  std::sort(verts.begin(), verts.end(), lex_rat);
  verts.erase(std::unique(verts.begin(), verts.end()), verts.end());
  Polyhedron p;
  p.tail = std::move(tail);
  if (verts.empty()) {
    p.empty = true;
    return p;
  }
  p.empty = false;
  // Drop candidates generated by the others.
  std::vector<RatVec> kept;
  for (size_t i = 0; i < verts.size(); ++i) {
    std::vector<RatVec> others;
    for (size_t j = 0; j < verts.size(); ++j)
      if (j != i) others.push_back(verts[j]);
    if (!in_conv_plus_cone(verts[i], others, p.tail.rays))
      kept.push_back(verts[i]);
  }
  p.vertices = std::move(kept);
  return p;
}

Polyhedron Polyhedron::from_ineqs(int rank, const std::vector<RatVec>& normals,
                                  const RatVec& rhs) {
  if (normals.size() != rhs.size())
    throw Error("ShapeMismatch", "normals/rhs length mismatch");
  // Homogenize: {(x, l) : <a_i, x> - b_i l >= 0, l >= 0}.
  std::vector<IntVec> cons;
  for (size_t i = 0; i < normals.size(); ++i) {
    RatVec row = normals[i];
    row.push_back(-rhs[i]);
    cons.push_back(primitivize_ray(row));
  }
  IntVec last(rank + 1, Int(0));
  last[rank] = 1;
  cons.push_back(std::move(last));
  DdResult g = dd_dual(rank + 1, cons);
  if (!g.lineality.empty())
    throw Error("PolyhedronNotPointed", "inequality system has lineality");
  std::vector<RatVec> verts;
  std::vector<IntVec> tailrays;
  for (const IntVec& r : g.rays) {
    if (r[rank] > 0) {
      RatVec v(rank);
      for (int t = 0; t < rank; ++t) {
        v[t] = Rat(r[t]) / Rat(r[rank]);
        v[t].canonicalize();
      }
      verts.push_back(std::move(v));
    } else {
      assert(r[rank] == 0);
      tailrays.push_back(IntVec(r.begin(), r.begin() + rank));
    }
  }
  Cone tail = Cone::from_rays(rank, tailrays);
  if (verts.empty()) return make_empty(rank);
  return from_vertices_tail(std::move(verts), std::move(tail));
}

bool Polyhedron::contains(const RatVec& x) const {
  if (empty) return false;
  return in_conv_plus_cone(x, vertices, tail.rays);
}

Polyhedron minkowski_sum(const Polyhedron& p, const Polyhedron& q) {
  if (p.rank() != q.rank())
    throw Error("ShapeMismatch", "Minkowski sum rank mismatch");
  if (p.empty || q.empty) return Polyhedron::make_empty(p.rank());
  std::vector<IntVec> tailgens = p.tail.rays;
  tailgens.insert(tailgens.end(), q.tail.rays.begin(), q.tail.rays.end());
  Cone tail = Cone::from_rays(p.rank(), tailgens);
  std::vector<RatVec> sums;
  for (const RatVec& a : p.vertices)
    for (const RatVec& b : q.vertices) {
      RatVec s(a.size());
      for (size_t i = 0; i < a.size(); ++i) s[i] = a[i] + b[i];
      sums.push_back(std::move(s));
    }
  return Polyhedron::from_vertices_tail(std::move(sums), std::move(tail));
}

std::optional<Rat> support_min(const Polyhedron& p, const RatVec& m) {
  if (p.empty) throw Error("EmptySlice", "support of the empty polyhedron");
  for (const IntVec& r : p.tail.rays)
    if (dot(m, r) < 0) return std::nullopt;
  std::optional<Rat> best;
  for (const RatVec& v : p.vertices) {
    Rat d = dot(m, v);
    if (!best || d < *best) best = d;
  }
  return best;
}

Int vertex_multiplicity(const RatVec& v) { return lcm_denominators(v); }

}  // namespace kltq
