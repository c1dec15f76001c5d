#include "osclab/report.hpp"

#include <map>
#include <ostream>

namespace osclab {

json to_json(const LatticeParams& lat) {
  return json{{"d", lat.d}, {"N", lat.N}, {"margin", lat.margin}, {"kmax", lat.kmax()}};
}

json to_json(const StoppingParams& p) {
  return json{{"eps", p.eps},
              {"r0", p.r0},
              {"c0", p.c0},
              {"alpha", p.alpha},
              {"alpha_from_formula", p.alpha_from_formula},
              {"C1", p.C1},
              {"C2", p.C2},
              {"m0", p.m0}};
}

json to_json(const StepFunction& M) {
  return json{{"m0", M.m0},
              {"mbar", M.mbar},
              {"cap", M.cap},
              {"s", M.s},
              {"degenerate", M.degenerate}};
}

json to_json(const LemmaReport& rep) {
  return json{{"cubes_total", rep.cubes_total},
              {"cubes_with_sequence", rep.cubes_with_sequence},
              {"cubes_with_valid_sequence", rep.cubes_with_valid_sequence},
              {"fraction_with_sequence", rep.fraction_with_sequence},
              {"headline_pass", rep.headline_pass},
              {"property_M_counts", rep.property_M_counts},
              {"property_M_all_pass", rep.property_M_all_pass},
              {"property_Q_pass", rep.property_Q_pass},
              {"claim31_threshold", rep.claim31_threshold},
              {"claim31_fraction_inner", rep.claim31_fraction_inner},
              {"claim31_fraction_all", rep.claim31_fraction_all},
              {"claim31_pass", rep.claim31_pass},
              {"claim32_weighted_sum", rep.claim32_weighted_sum},
              {"claim32_ratio", rep.claim32_ratio},
              {"claim32_pass", rep.claim32_pass},
              {"containment_pass_count", rep.containment_pass_count},
              {"density_pass_count", rep.density_pass_count},
              {"min_seq_length_observed", rep.min_seq_length_observed},
              {"max_seq_length_observed", rep.max_seq_length_observed},
              {"rho_lower_bound_pass", rep.rho_lower_bound_pass},
              {"rho_finite_inner_fraction", rep.rho_finite_inner_fraction},
              {"cover_geometry_pass", rep.cover_geometry_pass},
              {"kappa_spacing_pass", rep.kappa_spacing_pass},
              {"bound_value", rep.bound_value},
              {"fitted_c", rep.fitted_c},
              {"all_assertables_pass", rep.all_assertables_pass()}};
}

json to_json(const PsiWitness& w) {
  return json{{"set", w.set_desc},
              {"ball", w.ball_desc},
              {"ball_radius", w.ball_radius},
              {"sub_radius", w.sub_radius},
              {"lhs", w.lhs},
              {"rhs", w.rhs},
              {"lebesgue_ratio", w.lebesgue_ratio}};
}

json to_json(const MembershipVerdict& v) {
  json j{{"passed", v.passed}, {"trials", v.trials}, {"violations", v.violations}};
  if (v.worst_pair) j["worst_pair"] = to_json(*v.worst_pair);
  json arr = json::array();
  for (const auto& w : v.violating) arr.push_back(to_json(w));
  j["violating_sample"] = arr;
  return j;
}

json to_json(const CheckWitness& w) {
  return json{{"body", w.body}, {"lhs", w.lhs}, {"rhs", w.rhs}};
}

json to_json(const CheckVerdict& v) {
  json j{{"passed", v.passed},
         {"applicable", v.applicable},
         {"trials", v.trials},
         {"skipped", v.skipped},
         {"violations", v.violations}};
  if (v.worst) j["worst"] = to_json(*v.worst);
  if (!v.note.empty()) j["note"] = v.note;
  return j;
}

json to_json(const HarnackVerdict& v) {
  return json{{"applicable", v.applicable},
              {"c_hat", v.c_hat},
              {"max_principle", to_json(v.max_principle)},
              {"mean_value", to_json(v.mean_value)},
              {"passed", v.passed()}};
}

json to_json(const ChainReport& rep) {
  json steps = json::array();
  for (const auto& s : rep.steps) {
    json js{{"k_from", s.k_from},
            {"k_to", s.k_to},
            {"m_from", s.m_from},
            {"m_to", s.m_to},
            {"below_growth", s.below_growth}};
    json center = json::array();
    for (int i = 0; i < kMaxDim; ++i) center.push_back(s.center[i]);
    js["center"] = center;
    if (s.ratio) js["ratio"] = *s.ratio;
    if (s.pmr) js["positive_mass_ratio"] = *s.pmr;
    steps.push_back(js);
  }
  json j{{"c_d", rep.c_d},
         {"closure_lhs", rep.closure_lhs},
         {"closure", rep.closure},
         {"cubes_walked", rep.cubes_walked},
         {"cubes_with_multi_step", rep.cubes_with_multi_step},
         {"steps", steps},
         {"min_ratio", rep.min_ratio},
         {"monotone", rep.monotone},
         {"flagged_steps", rep.flagged_steps}};
  if (rep.delta) j["delta"] = *rep.delta;
  if (!rep.diagnostic.empty()) j["diagnostic"] = rep.diagnostic;
  return j;
}

json to_json(const GrowthCurve& curve) {
  json j{{"radii", curve.radii},
         {"maxvals", curve.maxvals},
         {"bound", curve.bound},
         {"bound_eps", curve.bound_eps}};
  if (curve.fitted_c) j["fitted_c"] = *curve.fitted_c;
  if (curve.fitted_c_eps) j["fitted_c_eps"] = *curve.fitted_c_eps;
  return j;
}

json pipeline_report(const Pipeline& pl) {
  std::map<std::string, long long> hist;
  for (const auto& [ell, n] : pl.cover.histogram) hist[std::to_string(ell)] = n;

  std::map<std::string, long long> kappa_lengths;
  for (const auto& seq : pl.kappa) kappa_lengths[std::to_string(seq.length())] += 1;

  LemmaReport rep = run_verifiers(pl);
  return json{{"lattice", to_json(pl.lat)},
              {"stopping", to_json(pl.params)},
              {"rogue_count", pl.E.size()},
              {"budget", pl.params.budget(pl.lat)},
              {"histogram", hist},
              {"step_function", to_json(pl.M)},
              {"kappa_length_distribution", kappa_lengths},
              {"cover_elements", static_cast<long long>(pl.cover.elements.size())},
              {"rho_finite_count", pl.rho.finite_count()},
              {"lemma", to_json(rep)},
              {"pipeline_hash", pl.content_hash()}};
}

json oscillation_report_json(const OscillationReport& rep) {
  long long p1_count = 0, p2_count = 0;
  for (std::size_t i = 0; i < rep.p1.size(); ++i) {
    p1_count += rep.p1[i];
    p2_count += rep.p2[i];
  }
  return json{{"lattice", to_json(rep.lat)},
              {"delta", rep.delta},
              {"budget_function", rep.f_tag},
              {"p1_count", p1_count},
              {"p2_count", p2_count},
              {"rogue_count", rep.rogue_count},
              {"invalid_count", rep.invalid_count},
              {"gamma", rep.gamma}};
}

void write_curve_csv(std::ostream& out, const GrowthCurve& curve) {
  out << "# R,Mu,boundShape,logM_over_bound\n";
  out.precision(12);
  for (std::size_t i = 0; i < curve.radii.size(); ++i) {
    double mv = curve.maxvals[i];
    double ratio = mv > 1.0 ? std::log(mv) / curve.bound[i] : 0.0;
    out << curve.radii[i] << ',' << mv << ',' << curve.bound[i] << ',' << ratio << '\n';
  }
}

}  // namespace osclab
