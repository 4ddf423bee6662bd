#include "kltq/torsing.hpp"

#include "kltq/lp.hpp"

#include <algorithm>

namespace kltq {

ToricAffine ToricAffine::make(int rank, const std::vector<IntVec>& rays) {
  ToricAffine x;
  x.lattice_rank = rank;
  x.sigma = Cone::from_rays(rank, rays);
  if (!x.sigma.is_pointed())
    throw Error("ConeNotPointed", "toric data requires a strictly convex cone");
  return x;
}

Rat ToricBoundary::coeff(int ray_index) const {
  auto it = coeffs.find(ray_index);
  return it == coeffs.end() ? Rat(0) : it->second;
}

ToricBoundary ToricBoundary::validated(const ToricAffine& x, std::map<int, Rat> cs) {
  for (auto& [idx, b] : cs) {
    if (idx < 0 || idx >= static_cast<int>(x.sigma.rays.size()))
      throw Error("BadRayIndex", "boundary coefficient on a nonexistent ray");
    b.canonicalize();
    if (b < 0 || b >= 1)
      throw Error("BoundaryOutOfRange", "boundary coefficients must lie in [0,1)");
  }
  ToricBoundary out;
  out.coeffs = std::move(cs);
  return out;
}

std::vector<Rat> canonical_class(const ToricAffine& x) {
  return std::vector<Rat>(x.sigma.rays.size(), Rat(-1));
}

CartierWitness minimal_index_witness(const RatVec& m0,
                                     const std::vector<RatVec>& kernel) {
  const int n = static_cast<int>(m0.size());
  IntMat proj;
  if (kernel.empty()) {
    proj = IntMat::identity(n);
  } else {
    std::vector<IntVec> krows;
    for (const RatVec& k : kernel) krows.push_back(primitivize_ray(k));
    proj = kernel_saturated(IntMat::from_rows(krows, n));
  }
  RatVec w(proj.rows, Rat(0));
  for (int i = 0; i < proj.rows; ++i) {
    w[i] = dot(m0, proj.row(i));
    w[i].canonicalize();
  }
  ClearingIndex ci = minimal_clearing_index(proj, w);
  RatVec m(n);
  for (int j = 0; j < n; ++j) {
    m[j] = Rat(ci.witness[j]) / Rat(ci.k);
    m[j].canonicalize();
  }
  return {std::move(m), ci.k};
}

QGorensteinResult q_gorenstein_witness(const ToricAffine& x, const ToricBoundary& b) {
  const auto& rays = x.sigma.rays;
  std::vector<RatVec> a;
  RatVec rhs;
  for (size_t i = 0; i < rays.size(); ++i) {
    a.push_back(to_rat(rays[i]));
    rhs.push_back(b.coeff(static_cast<int>(i)) - 1);
  }
  LinSolveResult s = solve_rational(a, rhs);
  QGorensteinResult out;
  if (!s.feasible()) {
    out.infeasibility = s.certificate;
    return out;
  }
  out.witness = minimal_index_witness(*s.particular, s.kernel);
  return out;
}

std::optional<KltCertificate> klt_type_certificate(
    const ToricAffine& x, const std::optional<std::set<int>>& support) {
  const auto& rays = x.sigma.rays;
  const int n = x.lattice_rank;
  if (support)
    for (int idx : *support)
      if (idx < 0 || idx >= static_cast<int>(rays.size()))
        throw Error("BadRayIndex", "support names a nonexistent ray");
  LpProblem p;
  p.nvars = n;
  for (size_t i = 0; i < rays.size(); ++i) {
    RatVec v = to_rat(rays[i]);
    bool free_boundary = !support || support->count(static_cast<int>(i)) > 0;
    if (free_boundary) {
      p.add_geq(v, Rat(-1));  // <m,v> >= -1
      RatVec neg(v.size());
      for (size_t j = 0; j < v.size(); ++j) neg[j] = -v[j];
      p.add_gt(std::move(neg), Rat(0));  // <m,v> < 0
    } else {
      p.add_eq(std::move(v), Rat(-1));
    }
  }
  // Canonical choice: minimize the total boundary sum(1 + <m, v_rho>).
  RatVec secondary(n, Rat(0));
  for (const IntVec& r : rays)
    for (int j = 0; j < n; ++j) secondary[j] += Rat(r[j]);
  auto m = lp_feasible_strict_minimizing(p, secondary);
  if (!m) return std::nullopt;
  for (Rat& c : *m) c.canonicalize();
  KltCertificate cert;
  cert.witness.m = *m;
  cert.witness.cartier_index = lcm_denominators(*m);
  std::map<int, Rat> bs;
  for (size_t i = 0; i < rays.size(); ++i) {
    Rat bi = 1 + dot(*m, rays[i]);
    bi.canonicalize();
    cert.ray_log_discrepancies.push_back(1 - bi);
    if (bi != 0) bs[static_cast<int>(i)] = bi;
  }
  cert.boundary = ToricBoundary::validated(x, std::move(bs));
  return cert;
}

Rat log_discrepancy(const ToricAffine& x, const CartierWitness& w, const IntVec& v) {
  if (static_cast<int>(v.size()) != x.lattice_rank)
    throw Error("ShapeMismatch", "query vector has the wrong rank");
  if (content(v) != 1)
    throw Error("NotPrimitive", "query vector must be primitive");
  if (!x.sigma.contains(v))
    throw Error("OutsideCone", "query vector lies outside the cone");
  Rat d = -dot(w.m, v);
  d.canonicalize();
  return d;
}

std::vector<Cone> star_subdivide(const std::vector<Cone>& fan, const IntVec& v) {
  if (content(v) != 1)
    throw Error("NotPrimitive", "subdivision point must be primitive");
  bool inside = false;
  std::vector<Cone> out;
  for (const Cone& c : fan) {
    if (!c.contains(v)) {
      out.push_back(c);
      continue;
    }
    inside = true;
    for (const IntVec& n : c.facet_normals()) {
      if (dot(n, v) == 0) continue;  // facet contains v
      std::vector<IntVec> gens = c.facet_rays(n);
      gens.push_back(v);
      out.push_back(Cone::from_rays(c.ambient_rank, gens));
    }
  }
  if (!inside)
    throw Error("OutsideSupport", "subdivision point outside the fan support");
  std::sort(out.begin(), out.end(), [](const Cone& a, const Cone& b) {
    return std::lexicographical_compare(
        a.rays.begin(), a.rays.end(), b.rays.begin(), b.rays.end(),
        [](const IntVec& x, const IntVec& y) { return lex_less(x, y); });
  });
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

Resolution resolve(const ToricAffine& x, const std::vector<IntVec>& seeds) {
  Resolution res;
  res.fan = {x.sigma};
  auto is_fan_ray = [&](const IntVec& v) {
    for (const Cone& c : res.fan)
      for (const IntVec& r : c.rays)
        if (r == v) return true;
    return false;
  };
  auto subdivide_at = [&](const IntVec& v) {
    if (!is_fan_ray(v)) res.exceptional_rays.push_back(v);
    res.fan = star_subdivide(res.fan, v);
  };
  for (const IntVec& s : seeds) subdivide_at(primitivize_ray(s));
  for (int guard = 0; ; ++guard) {
    if (guard > 100000)
      throw Error("Internal", "resolution failed to terminate");
    const Cone* worst = nullptr;
    for (const Cone& c : res.fan)
      if (!c.is_smooth() && !worst) worst = &c;  // fan is kept sorted
    if (!worst) break;
    std::vector<IntVec> hb = hilbert_basis(*worst);
    const IntVec* pick = nullptr;
    Int best_sum;
    for (const IntVec& h : hb) {
      bool is_ray = false;
      for (const IntVec& r : worst->rays)
        if (r == h) is_ray = true;
      if (is_ray) continue;
      Int s = 0;
      for (const Int& c : h) s += c;
      if (!pick || s < best_sum || (s == best_sum && lex_less(h, *pick))) {
        pick = &h;
        best_sum = s;
      }
    }
    if (pick) {
      subdivide_at(*pick);
    } else {
      // Non-simplicial cone whose Hilbert basis is its ray set: split at an
      // interior point so every piece is a proper join.
      IntVec s(x.lattice_rank, Int(0));
      for (const IntVec& r : worst->rays)
        for (int j = 0; j < x.lattice_rank; ++j) s[j] += r[j];
      subdivide_at(primitivize_ray(s));
    }
  }
  std::sort(res.exceptional_rays.begin(), res.exceptional_rays.end(),
            [](const IntVec& a, const IntVec& b) { return lex_less(a, b); });
  return res;
}

}  // namespace kltq
