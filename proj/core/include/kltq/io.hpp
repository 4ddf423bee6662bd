// JSON input parsing and certificate serialization. Rationals travel as
// reduced "p/q" strings (q > 0); the point at infinity is "inf".
#pragma once

#include "kltq/diagquot.hpp"
#include "kltq/pdiv.hpp"

#include "json.hpp"

#include <string>
#include <vector>

namespace kltq {

using Json = nlohmann::ordered_json;

std::string rat_str(const Rat& x);
Rat parse_rat(const std::string& s);

Json point_json(const CurvePoint& z);
CurvePoint parse_point(const Json& j);

Json int_vec_json(const IntVec& v);
Json rat_vec_json(const RatVec& v);

/// {"rank": int, "rays": [[int]]}; non-primitive rays are accepted with a note.
ToricAffine parse_toric(const Json& j, std::vector<std::string>& notes);

/// {"n": int, "weights": [[int]], "finite": [{"order": int, "weights": [int]}]}
WeightAction parse_action(const Json& j);

/// {"rank": int, "tail_rays": [[int]],
///  "slices": [{"point": "p/q"|"inf", "vertices": [["p/q"]], "empty": bool}]}
PDivisorC1 parse_pdivisor(const Json& j);

Json toric_json(const ToricAffine& x);
Json pdivisor_json(const PDivisorC1& d);
Json cartier_witness_json(const CartierWitness& w);
Json q_gorenstein_json(const QGorensteinResult& r);
Json klt_certificate_json(const KltCertificate& c);
Json presentation_json(const QuotientPresentation& p);
Json finite_quotient_json(const FiniteQuotientResult& r);
Json tcartier_witness_json(const TCartierWitness& w);
Json tvar_q_gorenstein_json(const TQGorensteinResult& r);
Json quotient_klt_json(const QuotientKltCertificate& c);
Json resolution_json(const Resolution& r);

/// Flat human-readable rendering of a JSON document.
std::string render_text(const Json& j);

}  // namespace kltq
