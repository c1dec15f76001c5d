#pragma once

#include <cstdint>
#include <limits>
#include <map>
#include <stdexcept>
#include <vector>

#include "osclab/lattice.hpp"

namespace osclab {

// Thrown when a rogue set exceeds the eps*c0*N^d budget the construction
// requires.
struct BudgetError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct StoppingParams {
  double eps = 0.1;    // density threshold
  double r0 = 4.0;     // minimal scale, > 1
  double c0 = 0.05;    // rogue budget fraction
  double alpha = 0.0;  // step constant; 0 = derive from C1/C2
  double C1 = 0.0;     // 0 = default 30^d * 2^d * 3^d
  double C2 = 0.0;     // 0 = default 2^d * 6d * 3^(d-1)
  int m0 = 0;          // derived: first integer with 2^m0 > 8 r0
  bool alpha_from_formula = false;

  static StoppingParams make(int d, double eps, double r0, double c0 = 0.05,
                             double alpha_override = 0.0, double C1_override = 0.0,
                             double C2_override = 0.0);

  int rho_min() const;          // smallest admissible rho = ceil(r0)
  long long budget(const LatticeParams& lat) const;  // floor(eps*c0*N^d)
};

// rho(I): least integer j >= r0 with #{J in E : J inside Q_j(I)} <=
// (eps/2)(2j+1)^d, searching j up to N. kInfinite when no such j exists.
struct RhoField {
  static constexpr int kInfinite = std::numeric_limits<int>::max();

  LatticeParams lat;
  std::vector<int> values;

  int at(const BasicCube& c) const { return values[lat.index(c)]; }
  bool finite(const BasicCube& c) const { return at(c) != kInfinite; }
  long long finite_count() const;
};

RhoField compute_rho(const LatticeParams& lat, const RogueSet& E, const StoppingParams& p,
                     int threads = 1);

// Maximal dyadic cover M and its edge-length histogram n_ell.
struct DyadicCover {
  std::vector<DyadicCube> elements;
  std::map<int, long long> histogram;  // order -> count
  // chosen hull order per cube (only meaningful for finite-rho cubes)
  std::vector<std::int8_t> hull_order;

  long long weighted_sum_from(int m, int power_d) const;  // sum_{ell>=m} 2^(ell*power_d) n_ell
};

DyadicCover build_cover(const LatticeParams& lat, const RhoField& rho, const StoppingParams& p);

// Monotone step schedule M(k) = 2^m with breakpoints s_m. The value is
// extended below the first breakpoint, so M(k) = 2^m0 for every k <= s_m0
// including k <= 0.
struct StepFunction {
  int m0 = 0;
  int mbar = 0;           // index of the last uncapped step; s has entries for m0..mbar+1
  double cap = 0.0;       // kmax, the paper's N/(10^2 d)
  std::vector<double> s;  // s[i] = s_{m0+i}; s.back() == cap
  bool degenerate = false;  // empty histogram with nonempty E

  int exponent(int k) const;
  long long value(int k) const { return 1LL << exponent(k); }
  // exact quotient property (Q): M(k)/M(k - M(k)) <= 4 for all k in [1, cap]
  bool quotient_property_holds() const;
  double sum_inverse(int k_limit) const;  // sum_{k=1..k_limit} 1/M(k)
};

StepFunction build_step_function(const std::map<int, long long>& histogram,
                                 const StoppingParams& p, const LatticeParams& lat,
                                 long long rogue_count);

// K_I = { k in {1..kmax} : every cube of Q cap A(I,k) has finite rho <= M(k) }
std::vector<int> compute_KI(const LatticeParams& lat, const BasicCube& I, const RhoField& rho,
                            const StepFunction& M);

// kappa_last = max K_I; kappa_j = max{ k in K_I : k < kappa_{j+1} - M(kappa_{j+1}) }.
struct KappaSequence {
  BasicCube center{};
  std::vector<int> kappas;  // ascending

  bool empty() const { return kappas.empty(); }
  std::size_t length() const { return kappas.size(); }
};

KappaSequence build_kappa(const BasicCube& I, const std::vector<int>& K_I, const StepFunction& M);

// The full Lemma construction, frozen after build. Workers may read
// concurrently; nothing mutates after construct() returns.
struct Pipeline {
  LatticeParams lat;
  StoppingParams params;
  RogueSet E;
  RhoField rho;
  DyadicCover cover;
  StepFunction M;
  std::vector<std::vector<int>> K;     // per cube index
  std::vector<KappaSequence> kappa;    // per cube index

  // Enforces the budget gate #E <= eps*c0*N^d (throws BudgetError).
  static Pipeline construct(const LatticeParams& lat, RogueSet E, const StoppingParams& p,
                            int threads = 1);

  std::uint64_t content_hash() const;
};

}  // namespace osclab
