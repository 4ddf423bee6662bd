// kltq command line front end: reads a JSON job description, runs the exact
// certificate pipeline and prints a deterministic JSON or text document.
#include "kltq/io.hpp"
#include "kltq/selftest.hpp"

#include "CLI11.hpp"

#include <cstdio>
#include <fstream>
#include <map>
#include <iostream>
#include <optional>
#include <set>
#include <sstream>
#include <string>

namespace {

using namespace kltq;

struct Flags {
  std::string input = "-";
  bool json = false;
  bool text = false;
  std::uint64_t seed = 0;
  std::string boundary_support;
  std::string canonical_points;
};

void attach_flags(CLI::App* cmd, Flags& f) {
  cmd->add_option("--input", f.input, "input file, or - for stdin");
  cmd->add_flag("--json", f.json, "JSON output (default)");
  cmd->add_flag("--text", f.text, "flat key = value output");
  cmd->add_option("--seed", f.seed, "seed for randomized suites");
  cmd->add_option("--boundary-support", f.boundary_support,
                  "comma-separated ray indices allowed to carry boundary");
  cmd->add_option("--canonical-points", f.canonical_points,
                  "two base points z0,z1 (rationals or inf)");
}

Json read_input(const Flags& f) {
  std::string raw;
  if (f.input == "-") {
    std::ostringstream ss;
    ss << std::cin.rdbuf();
    raw = ss.str();
  } else {
    std::ifstream in(f.input);
    if (!in) throw Error("InputError", "cannot open " + f.input);
    std::ostringstream ss;
    ss << in.rdbuf();
    raw = ss.str();
  }
  try {
    return Json::parse(raw);
  } catch (const std::exception& e) {
    throw Error("InputError", std::string("malformed JSON: ") + e.what());
  }
}

std::optional<std::set<int>> parse_support(const Flags& f) {
  if (f.boundary_support.empty()) return std::nullopt;
  std::set<int> out;
  std::stringstream ss(f.boundary_support);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    try {
      size_t used = 0;
      int v = std::stoi(tok, &used);
      if (used != tok.size()) throw std::invalid_argument(tok);
      out.insert(v);
    } catch (const std::exception&) {
      throw Error("InputError", "bad ray index in --boundary-support: " + tok);
    }
  }
  if (out.empty()) throw Error("InputError", "--boundary-support lists no rays");
  return out;
}

std::pair<CurvePoint, CurvePoint> parse_canonical_points(const Flags& f) {
  if (f.canonical_points.empty())
    return {CurvePoint::at(Rat(0)), CurvePoint::inf()};
  auto comma = f.canonical_points.find(',');
  if (comma == std::string::npos)
    throw Error("InputError", "--canonical-points needs two points z0,z1");
  auto one = [](const std::string& s) {
    if (s == "inf") return CurvePoint::inf();
    return CurvePoint::at(parse_rat(s));
  };
  auto z0 = one(f.canonical_points.substr(0, comma));
  auto z1 = one(f.canonical_points.substr(comma + 1));
  if (z0 == z1) throw Error("InputError", "the two canonical points must differ");
  return {z0, z1};
}

std::vector<IntVec> parse_int_rows(const Json& j, const std::string& key, int cols) {
  if (!j.contains(key) || !j.at(key).is_array())
    throw Error("InputError", "missing array field \"" + key + "\"");
  std::vector<IntVec> rows;
  for (const Json& r : j.at(key)) {
    if (!r.is_array() || static_cast<int>(r.size()) != cols)
      throw Error("InputError", "rows of \"" + key + "\" must have length " +
                                    std::to_string(cols));
    IntVec v;
    for (const Json& e : r) {
      if (!e.is_number_integer())
        throw Error("InputError", "\"" + key + "\" entries must be integers");
      v.push_back(Int(e.get<long>()));
    }
    rows.push_back(std::move(v));
  }
  return rows;
}

void add_klt(Json& doc, const ToricAffine& x, const std::optional<std::set<int>>& support,
             std::vector<std::string>& notes, std::optional<KltCertificate>& out) {
  out = klt_type_certificate(x, support);
  Json k;
  k["certified"] = out.has_value();
  if (out) {
    Json body = klt_certificate_json(*out);
    for (auto& [key, val] : body.items()) k[key] = val;
    if (out->witness.cartier_index > 1)
      notes.push_back("witness requires index " + out->witness.cartier_index.get_str() +
                      ": the pair is " + out->witness.cartier_index.get_str() +
                      "-Cartier, not Cartier");
  }
  doc["klt_type"] = k;
}

void finish(Json& doc, std::vector<std::string>& notes, const Flags& f) {
  doc["notes"] = notes;
  if (f.text && !f.json)
    std::fputs(render_text(doc).c_str(), stdout);
  else
    std::fputs((doc.dump(2) + "\n").c_str(), stdout);
}

int cmd_toric_analyze(const Flags& f) {
  std::vector<std::string> notes;
  ToricAffine x = parse_toric(read_input(f), notes);
  Json doc;
  doc["echo"] = toric_json(x);
  doc["dimension"] = x.sigma.dim();
  doc["smooth"] = x.sigma.is_smooth();
  doc["q_gorenstein"] = q_gorenstein_json(q_gorenstein_witness(x, ToricBoundary{}));
  std::optional<KltCertificate> cert;
  add_klt(doc, x, parse_support(f), notes, cert);
  finish(doc, notes, f);
  return 0;
}

int cmd_toric_discrepancy(const Flags& f) {
  std::vector<std::string> notes;
  Json j = read_input(f);
  ToricAffine x = parse_toric(j, notes);
  auto vectors = parse_int_rows(j, "vectors", x.lattice_rank);
  Json doc;
  doc["echo"] = toric_json(x);
  std::optional<KltCertificate> cert;
  add_klt(doc, x, parse_support(f), notes, cert);
  if (!cert)
    throw Error("NoCertificate", "no klt certificate on the requested support");
  Json ds = Json::array();
  for (const IntVec& raw : vectors) {
    IntVec v = primitivize_ray(raw);
    if (is_zero(v)) throw Error("InputError", "zero query vector");
    if (v != raw)
      notes.push_back("query vector was not primitive; divided by its content");
    Json e;
    e["vector"] = int_vec_json(v);
    e["log_discrepancy"] = rat_str(log_discrepancy(x, cert->witness, v));
    ds.push_back(e);
  }
  doc["discrepancies"] = ds;
  finish(doc, notes, f);
  return 0;
}

int cmd_toric_resolve(const Flags& f) {
  std::vector<std::string> notes;
  ToricAffine x = parse_toric(read_input(f), notes);
  Json doc;
  doc["echo"] = toric_json(x);
  Resolution res = resolve(x);
  doc["resolution"] = resolution_json(res);
  std::optional<KltCertificate> cert;
  add_klt(doc, x, parse_support(f), notes, cert);
  if (cert) {
    Json ds = Json::array();
    for (const IntVec& v : res.exceptional_rays) {
      Json e;
      e["vector"] = int_vec_json(v);
      e["log_discrepancy"] = rat_str(log_discrepancy(x, cert->witness, v));
      ds.push_back(e);
    }
    doc["discrepancies"] = ds;
  }
  finish(doc, notes, f);
  return 0;
}

int cmd_quotient_torus(const Flags& f) {
  std::vector<std::string> notes;
  WeightAction a = parse_action(read_input(f));
  Json doc;
  Json echo;
  echo["n"] = a.n;
  Json w = Json::array();
  for (int i = 0; i < a.torus_weights.rows; ++i)
    w.push_back(int_vec_json(a.torus_weights.row(i)));
  echo["weights"] = w;
  Json fin = Json::array();
  for (const auto& ff : a.finite_factors) {
    Json e;
    e["order"] = ff.order.get_si();
    e["weights"] = int_vec_json(ff.weights);
    fin.push_back(e);
  }
  echo["finite"] = fin;
  doc["echo"] = echo;
  try {
    QuotientPresentation qp = quotient_presentation(a);
    doc["presentation"] = presentation_json(qp);
    doc["q_gorenstein"] =
        q_gorenstein_json(q_gorenstein_witness(qp.quotient, ToricBoundary{}));
    std::optional<KltCertificate> cert;
    add_klt(doc, qp.quotient, parse_support(f), notes, cert);
  } catch (const Error& e) {
    if (e.code() != "PointQuotient") throw;
    doc["point_quotient"] = true;
    notes.push_back("the invariant monoid is trivial: the quotient is a point");
  }
  finish(doc, notes, f);
  return 0;
}

int cmd_quotient_finite(const Flags& f) {
  std::vector<std::string> notes;
  Json j = read_input(f);
  ToricAffine up = parse_toric(j, notes);
  auto rows = parse_int_rows(j, "sub_basis", up.lattice_rank);
  if (static_cast<int>(rows.size()) != up.lattice_rank)
    throw Error("InputError", "\"sub_basis\" must be a square basis matrix");
  LatticeRefinement ref{IntMat::from_rows(rows, up.lattice_rank)};
  Json doc;
  doc["echo"] = toric_json(up);
  doc["refinement_index"] = ref.index().get_si();
  std::optional<KltCertificate> cert;
  add_klt(doc, up, parse_support(f), notes, cert);
  if (!cert)
    throw Error("NoCertificate", "no klt certificate on the requested support");
  FiniteQuotientResult fq =
      finite_quotient(ref, up, cert->boundary.coeffs, cert->witness);
  doc["finite_quotient"] = finite_quotient_json(fq);
  if (fq.witness) {
    auto checks = riemann_hurwitz_check(ref, up, cert->boundary.coeffs,
                                        cert->witness, fq.downstairs.sigma.rays);
    Json cs = Json::array();
    for (const auto& c : checks) {
      Json e;
      e["sample"] = int_vec_json(c.sample);
      e["ramification"] = c.r.get_si();
      e["downstairs_times_r"] = rat_str(c.downstairs_value);
      e["upstairs"] = rat_str(c.upstairs_value);
      e["ok"] = c.ok;
      cs.push_back(e);
    }
    doc["ramification_checks"] = cs;
  } else {
    notes.push_back("downstairs boundary reaches 1: the quotient pair is not klt");
  }
  finish(doc, notes, f);
  return 0;
}

int cmd_tvar_downgrade(const Flags& f) {
  std::vector<std::string> notes;
  Json j = read_input(f);
  ToricAffine x = parse_toric(j, notes);
  auto rows = parse_int_rows(j, "acting_sublattice", x.lattice_rank);
  PDivisorC1 d = downgrade(x, IntMat::from_rows(rows, x.lattice_rank));
  Json doc;
  doc["echo"] = toric_json(x);
  doc["divisor"] = pdivisor_json(d);
  Properness p = is_proper(d);
  doc["proper"] = p.proper;
  doc["properness_reason"] = p.reason;
  finish(doc, notes, f);
  return 0;
}

int cmd_tvar_analyze(const Flags& f) {
  std::vector<std::string> notes;
  PDivisorC1 d = parse_pdivisor(read_input(f));
  auto [z0, z1] = parse_canonical_points(f);
  Json doc;
  doc["echo"] = pdivisor_json(d);
  Properness p = is_proper(d);
  doc["proper"] = p.proper;
  doc["properness_reason"] = p.reason;
  if (p.proper) {
    VerRayData vr = ver_ray_sets(d);
    Json vert = Json::array();
    for (const auto& v : vr.vertical) {
      Json e;
      e["point"] = point_json(v.z);
      e["vertex"] = rat_vec_json(v.v);
      e["multiplicity"] = v.mu.get_si();
      vert.push_back(e);
    }
    doc["vertical_divisors"] = vert;
    doc["horizontal_rays"] = vr.horizontal;
    TQGorensteinResult tq = q_gorenstein_tvar(d, TBoundary{}, z0, z1);
    doc["q_gorenstein"] = tvar_q_gorenstein_json(tq);
    if (tq.feasible() && !d.locus_is_affine()) {
      auto qc = quotient_klt_certificate(d, TBoundary{}, *tq.witness, z0, z1);
      doc["quotient_klt"] = quotient_klt_json(qc);
    }
  }
  finish(doc, notes, f);
  return 0;
}

int cmd_selftest(const Flags& f) {
  auto results = run_acceptance(f.seed);
  int bad = 0;
  if (f.json) {
    Json arr = Json::array();
    for (const auto& r : results) {
      Json e;
      e["id"] = r.id;
      e["name"] = r.name;
      e["pass"] = r.pass;
      e["detail"] = r.detail;
      arr.push_back(e);
      if (!r.pass) ++bad;
    }
    Json doc;
    doc["seed"] = f.seed;
    doc["checks"] = arr;
    doc["failures"] = bad;
    std::fputs((doc.dump(2) + "\n").c_str(), stdout);
  } else {
    for (const auto& r : results) {
      std::printf("[%s] %2d %s\n", r.pass ? "pass" : "FAIL", r.id, r.name.c_str());
      std::printf("          %s\n", r.detail.c_str());
      if (!r.pass) ++bad;
    }
    std::printf("%d/%d checks passed\n", static_cast<int>(results.size()) - bad,
                static_cast<int>(results.size()));
  }
  return bad == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"exact klt-type certificates for toric and diagonal-quotient singularities"};
  app.require_subcommand(1);
  Flags f;
  struct Cmd {
    const char* name;
    const char* help;
    int (*run)(const Flags&);
  };
  const Cmd cmds[] = {
      {"toric-analyze", "canonical witness and klt certificate for an affine toric cone", cmd_toric_analyze},
      {"toric-discrepancy", "log discrepancies of query vectors against a klt certificate", cmd_toric_discrepancy},
      {"toric-resolve", "iterated star subdivision to a smooth fan", cmd_toric_resolve},
      {"quotient-torus", "toric presentation and certificates for a diagonal quotient of affine space", cmd_quotient_torus},
      {"quotient-finite", "finite abelian quotient with ramification bookkeeping", cmd_quotient_finite},
      {"tvar-downgrade", "re-encode a toric cone over a corank-1 subtorus", cmd_tvar_downgrade},
      {"tvar-analyze", "analyze a complexity-one polyhedral divisor", cmd_tvar_analyze},
      {"selftest", "run the built-in acceptance suite", cmd_selftest},
  };
  std::map<std::string, int (*)(const Flags&)> dispatch;
  for (const Cmd& c : cmds) {
    CLI::App* sub = app.add_subcommand(c.name, c.help);
    attach_flags(sub, f);
    dispatch[c.name] = c.run;
  }
  CLI11_PARSE(app, argc, argv);
  const std::string chosen = app.get_subcommands().front()->get_name();
  try {
    return dispatch[chosen](f);
  } catch (const kltq::Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return e.code() == "Internal" ? 3 : 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "internal error: %s\n", e.what());
    return 3;
  }
}
