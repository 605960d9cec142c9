#pragma once

// JSON, TSV and text renderings of analysis records and predictions.

#include <json.hpp>

#include <sstream>
#include <string>

#include "eisen/analysis.hpp"
#include "eisen/predict.hpp"

namespace eisen {

using Json = nlohmann::ordered_json;

namespace detail {

template <class T>
Json opt_json(const std::optional<T>& v) {
  return v ? Json(*v) : Json("unknown");
}

inline Json relations_json(const std::vector<Polynomial>& rels, u64 p, const std::vector<std::string>& names) {
  Json out = Json::array();
  for (auto& f : rels) {
    Json terms = Json::array();
    for (auto& [c, e] : f.terms) terms.push_back(Json::array({c, e}));
    out.push_back({{"text", format_polynomial(f, p, names)}, {"terms", terms}});
  }
  return out;
}

inline std::string eps_string(const std::vector<int>& eps) {
  std::string s;
  for (size_t i = 0; i < eps.size(); ++i) s += (i ? "," : "") + std::string(eps[i] > 0 ? "+1" : "-1");
  return s;
}

}  // namespace detail

inline Json to_json(const AnalysisRecord& r) {
  const u64 p = (u64)r.setting.p;
  std::vector<std::string> xy;
  for (size_t i = 0; i < r.presentation.vars.size(); ++i) xy.push_back(var_name(i));
  std::vector<std::string> xyc;
  for (size_t i = 0; i < r.presentation_cusp_vars.size(); ++i) xyc.push_back(var_name(i));
  auto inv_json = [](const AlgebraSummary& a) {
    return Json{{"rank", a.rank},
                {"dim", a.invariants.dim},
                {"embedding_dim", a.invariants.embedding_dim},
                {"socle_dim", a.invariants.socle_dim},
                {"nilpotency_degree", a.invariants.nilpotency_degree},
                {"power_dims", a.power_dims},
                {"cotangent_exponents", a.cotangent}};
  };
  Json j;
  j["p"] = r.setting.p;
  j["N"] = r.setting.level();
  j["primes"] = r.setting.primes;
  j["eps"] = r.setting.eps;
  j["dims"] = {{"full", r.full.invariants.dim}, {"cuspidal", r.cusp.invariants.dim}};
  j["embedding_dim"] = r.full.invariants.embedding_dim;
  j["socle_dim_full"] = r.full.invariants.socle_dim;
  j["socle_dim_cuspidal"] = r.cusp.invariants.socle_dim;
  j["gorenstein_full"] = r.full.gorenstein();
  j["gorenstein_cuspidal"] = r.cusp.gorenstein();
  j["presentation"] = {{"vars", r.presentation.vars},
                       {"names", xy},
                       {"relations", detail::relations_json(r.presentation.relations, p, xy)}};
  j["presentation_cuspidal"] = {{"vars", r.presentation_cusp_vars},
                                {"names", xyc},
                                {"relations", detail::relations_json(r.presentation_cusp, p, xyc)}};
  j["congruence_number"] = {{"p", r.setting.p}, {"exponent", r.congruence_exponent}};
  j["cotangent_divisors"] = {{"full", r.full.cotangent}, {"cuspidal", r.cusp.cotangent}};
  j["u_w_equal"] = detail::opt_json(r.u_w_equal);
  j["new_rank"] = detail::opt_json(r.new_rank);
  j["full"] = inv_json(r.full);
  j["cuspidal"] = inv_json(r.cusp);
  j["sturm_cap"] = r.cap;
  j["cap_doubling_stable"] = r.stable;
  return j;
}

inline Json to_json(const PredictionReport& r) {
  Json j;
  j["p"] = r.setting.p;
  j["N"] = r.setting.level();
  j["primes"] = r.setting.primes;
  j["eps"] = r.setting.eps;
  j["permutation"] = r.order;
  j["applicable_theorem"] = case_name(r.which);
  j["constant_term_p_valuation"] = r.constant_term_valuation;
  j["s"] = detail::opt_json(r.s);
  j["delta"] = detail::opt_json(r.delta);
  j["predicted_generators"] = detail::opt_json(r.generators);
  j["predicted_cotangent_order_exponent"] = detail::opt_json(r.cotangent_order_exponent);
  j["predicted_cuspidal_cotangent"] = detail::opt_json(r.cuspidal_cotangent);
  j["full_algebra_complete_intersection"] = detail::opt_json(r.complete_intersection);
  j["cuspidal_gorenstein"] = detail::opt_json(r.cuspidal_gorenstein);
  j["multiplicity_one_dim"] = detail::opt_json(r.multiplicity_one_dim);
  j["newforms_exist"] = detail::opt_json(r.newforms_exist);
  j["notes"] = r.notes;
  return j;
}

inline std::string tsv_header() {
  return "p\tN\teps\tdim_full\tdim_cusp\tembedding_dim\tsocle_full\tsocle_cusp\tgorenstein_full\tgorenstein_cusp\t"
         "congruence_exponent\tcotangent_full\tu_w_equal\tnew_rank\trelations";
}

inline std::string tsv_row(const AnalysisRecord& r) {
  auto join = [](const std::vector<int>& v) {
    std::string s;
    for (size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
    return s;
  };
  std::string rels;
  for (auto& f : r.presentation.relations) rels += (rels.empty() ? "" : "; ") + format_polynomial(f, (u64)r.setting.p);
  std::ostringstream o;
  o << r.setting.p << '\t' << r.setting.level() << '\t' << detail::eps_string(r.setting.eps) << '\t'
    << r.full.invariants.dim << '\t' << r.cusp.invariants.dim << '\t' << r.full.invariants.embedding_dim << '\t'
    << r.full.invariants.socle_dim << '\t' << r.cusp.invariants.socle_dim << '\t' << r.full.gorenstein() << '\t'
    << r.cusp.gorenstein() << '\t' << r.congruence_exponent << '\t' << join(r.full.cotangent) << '\t'
    << (r.u_w_equal ? std::to_string(*r.u_w_equal) : "unknown") << '\t'
    << (r.new_rank ? std::to_string(*r.new_rank) : "unknown") << '\t' << rels;
  return o.str();
}

inline std::string text_report(const AnalysisRecord& r) {
  std::ostringstream o;
  o << "p=" << r.setting.p << " N=" << r.setting.level() << " eps=" << detail::eps_string(r.setting.eps) << "\n";
  auto line = [&](const char* name, const AlgebraSummary& a) {
    o << name << ": rank " << a.rank << ", dim " << a.invariants.dim << ", embedding dim " << a.invariants.embedding_dim
      << ", socle dim " << a.invariants.socle_dim << (a.gorenstein() ? " (Gorenstein)" : " (not Gorenstein)") << "\n";
  };
  line("full", r.full);
  line("cuspidal", r.cusp);
  o << "presentation on (";
  for (size_t i = 0; i < r.presentation.vars.size(); ++i) o << (i ? ", " : "") << r.presentation.vars[i];
  o << "):";
  for (auto& f : r.presentation.relations) o << "  " << format_polynomial(f, (u64)r.setting.p);
  o << "\ncongruence number " << r.setting.p << "^" << r.congruence_exponent << "\n";
  return o.str();
}

}  // namespace eisen
