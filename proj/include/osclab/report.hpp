#pragma once

#include <json.hpp>

#include "osclab/fclass.hpp"
#include "osclab/growth.hpp"
#include "osclab/measure.hpp"
#include "osclab/oscillation.hpp"
#include "osclab/verify.hpp"

namespace osclab {

using json = nlohmann::json;

json to_json(const LatticeParams& lat);
json to_json(const StoppingParams& p);
json to_json(const StepFunction& M);
json to_json(const LemmaReport& rep);
json to_json(const PsiWitness& w);
json to_json(const MembershipVerdict& v);
json to_json(const CheckWitness& w);
json to_json(const CheckVerdict& v);
json to_json(const HarnackVerdict& v);
json to_json(const ChainReport& rep);
json to_json(const GrowthCurve& curve);

// construct-style report: parameters, #E, histogram, s_m, kappa length
// distribution, per-property fractions, content hash
json pipeline_report(const Pipeline& pl);
json oscillation_report_json(const OscillationReport& rep);

void write_curve_csv(std::ostream& out, const GrowthCurve& curve);

}  // namespace osclab
