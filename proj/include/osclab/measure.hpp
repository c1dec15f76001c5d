#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "osclab/grid.hpp"

namespace osclab {

// psi: [0,1] -> R_+, monotone increasing, psi(0+) = 0. Evaluation beyond t=1
// follows the family formula; an argument > 1 just means the bound is vacuous
// there.
struct PsiFunction {
  enum class Family { kLinear, kPower, kTabulated };

  Family family = Family::kLinear;
  double slope = 1.0;               // linear: psi(t) = slope * t
  double c = 1.0, q = 1.0;          // power: psi(t) = c * t^q
  std::vector<std::pair<double, double>> table;  // tabulated, sorted by t

  static PsiFunction linear(double slope);
  static PsiFunction power(double c, double q);
  static PsiFunction tabulated(std::vector<std::pair<double, double>> pts);
  // "linear:a" | "power:c,q"
  static PsiFunction parse(const std::string& spec);

  double operator()(double t) const;
  std::string describe() const;
};

struct PsiWitness {
  std::string set_desc;    // E
  std::string ball_desc;   // B
  Point ball_center{};
  double ball_radius = 0.0;
  double sub_radius = 0.0;  // when E is a concentric ball, else 0
  double lhs = 0.0;         // mu(E)/mu(B)
  double rhs = 0.0;         // psi(m(E)/m(B)) + tol
  double lebesgue_ratio = 0.0;
};

struct MembershipVerdict {
  bool passed = true;
  long long trials = 0;
  long long violations = 0;
  std::optional<PsiWitness> worst_pair;  // present iff trials > 0
  std::vector<PsiWitness> violating;     // capped sample of violations
};

// Randomized refutation search for condition mu(E)/mu(B) <= psi(m(E)/m(B)).
// E candidates per ball: concentric sub-balls, inscribed sub-boxes, annular
// slivers, and high-density cell unions; ball centers mix uniform and
// omega-weighted draws, plus deterministic probes at density spikes. Sound
// for refutation, heuristic as a certificate.
MembershipVerdict check_psi_condition(const DensityGrid& w, const PsiFunction& psi,
                                      long long trials, std::uint64_t seed);

// Randomized lower estimate of the Muckenhoupt constant
// sup_B (avg_B w) (avg_B w^{1/(1-p)})^{p-1}. Returns +inf if the negative
// power diverges on a zero sample.
double ap_constant(const DensityGrid& w, double p, long long trials, std::uint64_t seed);

struct PowerPsiFit {
  bool found = false;
  double c = 0.0, q = 0.0;
  MembershipVerdict last_verdict;  // the accepting run, or the last failure
};

// Smallest (c, q) on a fixed candidate grid such that check_psi_condition
// passes with psi(t) = c t^q; tries the boundary candidate psi(t) = t first.
// An empirical certificate, not a proof.
PowerPsiFit fit_power_psi(const DensityGrid& w, long long trials, std::uint64_t seed);

}  // namespace osclab
