#include "kltq/io.hpp"

#include <sstream>

namespace kltq {

namespace {

[[noreturn]] void bad_input(const std::string& path, const std::string& what) {
  throw Error("InputError", path + ": " + what);
}

long get_int(const Json& j, const std::string& path) {
  if (!j.is_number_integer()) bad_input(path, "expected an integer");
  return j.get<long>();
}

IntVec get_int_vec(const Json& j, const std::string& path, int len = -1) {
  if (!j.is_array()) bad_input(path, "expected an array of integers");
  IntVec v;
  for (size_t i = 0; i < j.size(); ++i)
    v.push_back(Int(get_int(j[i], path + "[" + std::to_string(i) + "]")));
  if (len >= 0 && static_cast<int>(v.size()) != len)
    bad_input(path, "expected length " + std::to_string(len));
  return v;
}

const Json& field(const Json& j, const std::string& key, const std::string& path) {
  if (!j.is_object()) bad_input(path, "expected an object");
  auto it = j.find(key);
  if (it == j.end()) bad_input(path, "missing field \"" + key + "\"");
  return *it;
}

}  // namespace

std::string rat_str(const Rat& x) {
  Rat c = x;
  c.canonicalize();
  return c.get_str();
}

Rat parse_rat(const std::string& s) {
  size_t pos = 0;
  auto digits = [&]() {
    size_t start = pos;
    while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) ++pos;
    return pos > start;
  };
  if (pos < s.size() && s[pos] == '-') ++pos;
  bool ok = digits();
  if (ok && pos < s.size() && s[pos] == '/') {
    ++pos;
    ok = digits();
  }
  if (!ok || pos != s.size())
    throw Error("InputError", "malformed rational \"" + s + "\"");
  Rat x(s);
  if (x.get_den() == 0)
    throw Error("InputError", "zero denominator in \"" + s + "\"");
  x.canonicalize();
  return x;
}

Json point_json(const CurvePoint& z) {
  return z.infinite ? Json("inf") : Json(rat_str(z.value));
}

CurvePoint parse_point(const Json& j) {
  if (!j.is_string())
    throw Error("InputError", "curve point must be a string (\"p/q\" or \"inf\")");
  std::string s = j.get<std::string>();
  if (s == "inf") return CurvePoint::inf();
  return CurvePoint::at(parse_rat(s));
}

Json int_vec_json(const IntVec& v) {
  Json a = Json::array();
  for (const Int& x : v) {
    if (!x.fits_slong_p()) {
      a.push_back(x.get_str());
    } else {
      a.push_back(x.get_si());
    }
  }
  return a;
}

Json rat_vec_json(const RatVec& v) {
  Json a = Json::array();
  for (const Rat& x : v) a.push_back(rat_str(x));
  return a;
}

ToricAffine parse_toric(const Json& j, std::vector<std::string>& notes) {
  int rank = static_cast<int>(get_int(field(j, "rank", "$"), "$.rank"));
  if (rank < 1) bad_input("$.rank", "rank must be positive");
  const Json& jr = field(j, "rays", "$");
  if (!jr.is_array() || jr.empty()) bad_input("$.rays", "expected a nonempty array");
  std::vector<IntVec> rays;
  for (size_t i = 0; i < jr.size(); ++i) {
    std::string p = "$.rays[" + std::to_string(i) + "]";
    IntVec r = get_int_vec(jr[i], p, rank);
    if (is_zero(r)) bad_input(p, "zero ray");
    IntVec prim = primitivize_ray(r);
    if (prim != r)
      notes.push_back("ray " + std::to_string(i) + " was not primitive; divided by its content");
    rays.push_back(std::move(prim));
  }
  try {
    return ToricAffine::make(rank, rays);
  } catch (const Error& e) {
    bad_input("$.rays", e.what());
  }
}

WeightAction parse_action(const Json& j) {
  WeightAction a;
  a.n = static_cast<int>(get_int(field(j, "n", "$"), "$.n"));
  if (a.n < 1) bad_input("$.n", "n must be positive");
  const Json& jw = field(j, "weights", "$");
  if (!jw.is_array()) bad_input("$.weights", "expected an array of weight rows");
  std::vector<IntVec> rows;
  for (size_t i = 0; i < jw.size(); ++i)
    rows.push_back(get_int_vec(jw[i], "$.weights[" + std::to_string(i) + "]", a.n));
  a.torus_weights = IntMat::from_rows(rows, a.n);
  if (j.contains("finite")) {
    const Json& jf = j.at("finite");
    if (!jf.is_array()) bad_input("$.finite", "expected an array");
    for (size_t i = 0; i < jf.size(); ++i) {
      std::string p = "$.finite[" + std::to_string(i) + "]";
      WeightAction::FiniteFactor f;
      f.order = Int(get_int(field(jf[i], "order", p), p + ".order"));
      f.weights = get_int_vec(field(jf[i], "weights", p), p + ".weights", a.n);
      if (f.order < 2) bad_input(p + ".order", "finite factor order must be >= 2");
      a.finite_factors.push_back(std::move(f));
    }
  }
  try {
    a.validate();
  } catch (const Error& e) {
    bad_input("$", e.what());
  }
  return a;
}

PDivisorC1 parse_pdivisor(const Json& j) {
  int rank = static_cast<int>(get_int(field(j, "rank", "$"), "$.rank"));
  if (rank < 1) bad_input("$.rank", "rank must be positive");
  const Json& jt = field(j, "tail_rays", "$");
  if (!jt.is_array()) bad_input("$.tail_rays", "expected an array");
  std::vector<IntVec> tail;
  for (size_t i = 0; i < jt.size(); ++i) {
    std::string p = "$.tail_rays[" + std::to_string(i) + "]";
    IntVec r = get_int_vec(jt[i], p, rank);
    if (is_zero(r)) bad_input(p, "zero tail ray");
    tail.push_back(primitivize_ray(r));
  }
  Cone tc = Cone::from_rays(rank, tail);
  if (!tc.is_pointed()) bad_input("$.tail_rays", "tail cone must be strictly convex");
  std::map<CurvePoint, Polyhedron> slices;
  const Json& js = field(j, "slices", "$");
  if (!js.is_array()) bad_input("$.slices", "expected an array");
  for (size_t i = 0; i < js.size(); ++i) {
    std::string p = "$.slices[" + std::to_string(i) + "]";
    CurvePoint z;
    try {
      z = parse_point(field(js[i], "point", p));
    } catch (const Error& e) {
      bad_input(p + ".point", e.what());
    }
    if (slices.count(z)) bad_input(p + ".point", "duplicate slice point");
    bool empty = js[i].contains("empty") && js[i].at("empty").is_boolean() &&
                 js[i].at("empty").get<bool>();
    if (empty) {
      slices.emplace(z, Polyhedron::make_empty(rank));
      continue;
    }
    const Json& jv = field(js[i], "vertices", p);
    if (!jv.is_array() || jv.empty())
      bad_input(p + ".vertices", "expected a nonempty array (or \"empty\": true)");
    std::vector<RatVec> verts;
    for (size_t k = 0; k < jv.size(); ++k) {
      std::string q = p + ".vertices[" + std::to_string(k) + "]";
      if (!jv[k].is_array() || static_cast<int>(jv[k].size()) != rank)
        bad_input(q, "expected " + std::to_string(rank) + " rational strings");
      RatVec v;
      for (const Json& c : jv[k]) {
        if (!c.is_string()) bad_input(q, "coordinates must be \"p/q\" strings");
        try {
          v.push_back(parse_rat(c.get<std::string>()));
        } catch (const Error& e) {
          bad_input(q, e.what());
        }
      }
      verts.push_back(std::move(v));
    }
    slices.emplace(z, Polyhedron::from_vertices_tail(std::move(verts), tc));
  }
  try {
    return PDivisorC1::make(rank, std::move(tc), std::move(slices));
  } catch (const Error& e) {
    bad_input("$", e.what());
  }
}

Json toric_json(const ToricAffine& x) {
  Json j;
  j["rank"] = x.lattice_rank;
  Json rays = Json::array();
  for (const IntVec& r : x.sigma.rays) rays.push_back(int_vec_json(r));
  j["rays"] = rays;
  return j;
}

Json pdivisor_json(const PDivisorC1& d) {
  Json j;
  j["rank"] = d.lattice_rank;
  Json tail = Json::array();
  for (const IntVec& r : d.tail.rays) tail.push_back(int_vec_json(r));
  j["tail_rays"] = tail;
  Json slices = Json::array();
  for (const auto& [z, s] : d.slices) {
    Json js;
    js["point"] = point_json(z);
    if (s.empty) {
      js["empty"] = true;
    } else {
      Json verts = Json::array();
      for (const RatVec& v : s.vertices) verts.push_back(rat_vec_json(v));
      js["vertices"] = verts;
    }
    slices.push_back(js);
  }
  j["slices"] = slices;
  return j;
}

Json cartier_witness_json(const CartierWitness& w) {
  Json j;
  j["m"] = rat_vec_json(w.m);
  j["cartier_index"] = w.cartier_index.get_si();
  return j;
}

Json q_gorenstein_json(const QGorensteinResult& r) {
  Json j;
  j["feasible"] = r.feasible();
  if (r.witness) j["witness"] = cartier_witness_json(*r.witness);
  if (r.infeasibility) j["infeasibility_multipliers"] = rat_vec_json(*r.infeasibility);
  return j;
}

Json klt_certificate_json(const KltCertificate& c) {
  Json j;
  Json b = Json::object();
  for (const auto& [idx, coeff] : c.boundary.coeffs)
    b[std::to_string(idx)] = rat_str(coeff);
  j["boundary"] = b;
  j["witness"] = cartier_witness_json(c.witness);
  j["ray_log_discrepancies"] = rat_vec_json(c.ray_log_discrepancies);
  return j;
}

Json presentation_json(const QuotientPresentation& p) {
  Json j;
  Json gens = Json::array();
  for (const IntVec& g : p.invariant_generators) gens.push_back(int_vec_json(g));
  j["invariant_generators"] = gens;
  Json basis = Json::array();
  for (int i = 0; i < p.char_basis.rows; ++i)
    basis.push_back(int_vec_json(p.char_basis.row(i)));
  j["character_basis"] = basis;
  Json chars = Json::array();
  for (const IntVec& c : p.generator_chars) chars.push_back(int_vec_json(c));
  j["generator_characters"] = chars;
  j["quotient"] = toric_json(p.quotient);
  Json dm = Json::array();
  for (const auto& e : p.coordinate_divisor_map) {
    if (!e) {
      dm.push_back(nullptr);
    } else {
      Json m;
      m["ray"] = e->first;
      m["multiplicity"] = e->second.get_si();
      dm.push_back(m);
    }
  }
  j["coordinate_divisor_map"] = dm;
  return j;
}

Json finite_quotient_json(const FiniteQuotientResult& r) {
  Json j;
  j["downstairs"] = toric_json(r.downstairs);
  Json b = Json::object();
  for (const auto& [idx, coeff] : r.boundary) b[std::to_string(idx)] = rat_str(coeff);
  j["boundary"] = b;
  Json ram = Json::array();
  for (const Int& x : r.ramification) ram.push_back(x.get_si());
  j["ramification"] = ram;
  if (r.witness) j["witness"] = cartier_witness_json(*r.witness);
  return j;
}

Json tcartier_witness_json(const TCartierWitness& w) {
  Json j;
  j["m"] = rat_vec_json(w.m);
  Json f = Json::array();
  for (const auto& [z, ord] : w.f_divisor) {
    Json e;
    e["point"] = point_json(z);
    e["order"] = rat_str(ord);
    f.push_back(e);
  }
  j["f_divisor"] = f;
  j["cartier_index"] = w.cartier_index.get_si();
  return j;
}

Json tvar_q_gorenstein_json(const TQGorensteinResult& r) {
  Json j;
  j["feasible"] = r.feasible();
  if (r.witness) j["witness"] = tcartier_witness_json(*r.witness);
  if (r.infeasibility) j["infeasibility_multipliers"] = rat_vec_json(*r.infeasibility);
  return j;
}

Json quotient_klt_json(const QuotientKltCertificate& c) {
  Json j;
  j["m_interior"] = c.m_interior;
  Json by = Json::array();
  for (const auto& [z, coeff] : c.b_y) {
    Json e;
    e["point"] = point_json(z);
    e["coefficient"] = rat_str(coeff);
    by.push_back(e);
  }
  j["induced_boundary"] = by;
  j["coefficient_check"] = c.coefficient_check;
  j["degree_check"] = c.degree_check;
  j["pass"] = c.pass;
  if (!c.notes.empty()) j["notes"] = c.notes;
  return j;
}

Json resolution_json(const Resolution& r) {
  Json j;
  Json fan = Json::array();
  for (const Cone& c : r.fan) {
    Json rays = Json::array();
    for (const IntVec& v : c.rays) rays.push_back(int_vec_json(v));
    fan.push_back(rays);
  }
  j["fan"] = fan;
  Json ex = Json::array();
  for (const IntVec& v : r.exceptional_rays) ex.push_back(int_vec_json(v));
  j["exceptional_rays"] = ex;
  return j;
}

namespace {

void render_into(const Json& j, const std::string& prefix, std::ostringstream& out) {
  if (j.is_object()) {
    for (const auto& [k, v] : j.items())
      render_into(v, prefix.empty() ? k : prefix + "." + k, out);
  } else if (j.is_array()) {
    bool scalar = true;
    for (const Json& e : j)
      if (e.is_object() || e.is_array()) scalar = false;
    if (scalar) {
      out << prefix << " =";
      for (const Json& e : j)
        out << " " << (e.is_string() ? e.get<std::string>() : e.dump());
      out << "\n";
    } else {
      for (size_t i = 0; i < j.size(); ++i)
        render_into(j[i], prefix + "[" + std::to_string(i) + "]", out);
    }
  } else if (j.is_string()) {
    out << prefix << " = " << j.get<std::string>() << "\n";
  } else {
    out << prefix << " = " << j.dump() << "\n";
  }
}

}  // namespace

std::string render_text(const Json& j) {
  std::ostringstream out;
  render_into(j, "", out);
  return out.str();
}

}  // namespace kltq
