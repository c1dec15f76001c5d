#pragma once

#include <cstdint>
#include <vector>

#include "osclab/stopping.hpp"

namespace osclab {

// Aggregated verdicts for one constructed instance.
struct LemmaReport {
  // headline: cubes whose sequence exists and passes 1(a) and 1(b)
  long long cubes_total = 0;
  long long cubes_with_sequence = 0;          // nonempty kappa
  long long cubes_with_valid_sequence = 0;    // nonempty and 1(a),1(b) hold
  double fraction_with_sequence = 0.0;        // valid / total
  bool headline_pass = false;                 // fraction >= 1/2

  // property (M): per-k counts #{I : k in K_I}; pass iff count >= 11/12 N^d
  std::vector<long long> property_M_counts;   // index k-1
  bool property_M_all_pass = false;

  // property (Q), exact
  bool property_Q_pass = false;

  // property (section): #kappa >= (1/60) sum 1/M(k); fraction over inner
  // cubes (Q_0, margin 2m) and over all of P — the paper is ambiguous, so
  // both are reported.
  double claim31_threshold = 0.0;
  double claim31_fraction_inner = 0.0;
  double claim31_fraction_all = 0.0;
  bool claim31_pass = false;  // inner fraction >= 10/11 (vacuous-true if no inner cubes)

  // Claim 3.2: sum_{m>=m0} 2^{md} n_m <= C1 #E / eps
  long long claim32_weighted_sum = 0;
  double claim32_ratio = 0.0;  // weighted_sum * eps / #E (0 when E empty)
  bool claim32_pass = false;

  // per-cube diagnostics
  long long containment_pass_count = 0;  // 1(a)
  long long density_pass_count = 0;      // 1(b)
  long long min_seq_length_observed = 0; // over nonempty sequences, 0 if none
  long long max_seq_length_observed = 0;

  // rho sanity
  bool rho_lower_bound_pass = false;          // rho >= ceil(r0) wherever finite
  double rho_finite_inner_fraction = 0.0;     // fraction of inner-margin cubes with finite rho
  bool cover_geometry_pass = false;           // 2 rho <= 2^order < 4 rho for the chosen hulls
  bool kappa_spacing_pass = false;            // kappa_j < kappa_{j+1} - M(kappa_{j+1})

  // property 2 shape: N * shape(#E/(eps N)) with constant 1, and the fitted
  // constant (median #kappa / bound)
  double bound_value = 0.0;
  double fitted_c = 0.0;

  bool all_assertables_pass() const;
};

// shape(x) = log^{d/(d-1)}(2 + x) / (1 + x^{1/(d-1)})
double sequence_bound_shape(int d, double x);

// property (M) for a single k: {count, pass}
std::pair<long long, bool> verify_property_M(const Pipeline& pl, int k);

// Lemma 2.1 property 1(a) for one cube: every boundary cube x of every shell
// Q_{kappa_j}(I) satisfies Q_{rho(x)}(I(x)) inside Q_{kappa_{j+1}}(I) and
// disjoint from Q_{kappa_{j-1}}(I). First/last index skip the inner/outer
// constraint. Works on a caller-supplied sequence so mutated sequences can be
// probed.
bool verify_containment(const Pipeline& pl, const BasicCube& I, const KappaSequence& seq);

// Lemma 2.1 property 1(b): #{J in E : J inside Q_{rho(x)}(I(x))} <=
// eps (2 rho(x)+1)^d for every boundary cube of every shell.
bool verify_density(const Pipeline& pl, const BasicCube& I, const KappaSequence& seq);

LemmaReport run_verifiers(const Pipeline& pl, int threads = 1);

// Hardy-Littlewood-style maximal function over centered boxes Q_j(I), j <= N.
// A diagnostic approximation: the sup over all boxes is comparable within 2^d.
std::vector<double> maximal_function_grid(const LatticeParams& lat,
                                          const std::vector<BasicCube>& set);

}  // namespace osclab
