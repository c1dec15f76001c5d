#pragma once

#include <optional>
#include <vector>

#include "osclab/fclass.hpp"
#include "osclab/measure.hpp"
#include "osclab/oscillation.hpp"
#include "osclab/stopping.hpp"

namespace osclab {

// quadrature ratio of mu on {u > 0} within a ball
double positive_mass_ratio(const GridFunction& u, const DensityGrid& w, const Ball& ball);

// exact constant relating (2r+1)^d to the ball volume over r >= r0/2
double covering_constant(int d, double r0);

struct ChainStep {
  BasicCube center{};
  int k_from = 0, k_to = 0;
  double m_from = 0.0, m_to = 0.0;   // M_u over the nested shells
  std::optional<double> ratio;      // m_to/m_from when both positive
  std::optional<double> pmr;        // positive mass ratio at the located x_j
  bool below_growth = false;        // ratio < e^delta - 10 tol (when closure holds)
};

struct ChainReport {
  double c_d = 0.0;
  double closure_lhs = 0.0;        // A B (psi(c_d eps) + psi(d^{d/2} 2^d / r0) + Delta)
  bool closure = false;
  std::optional<double> delta;     // from the binary search, when closure holds
  long long cubes_walked = 0;
  long long cubes_with_multi_step = 0;
  std::vector<ChainStep> steps;
  double min_ratio = 0.0;          // over steps with a ratio; 0 when none
  bool monotone = true;            // m_to >= m_from for every step
  long long flagged_steps = 0;     // below_growth count
  std::string diagnostic;
};

// Walks the kappa shells of up to max_centers seeded center cubes and records
// the multiplicative growth chain of M_u.
ChainReport run_chain(const Pipeline& pl, const GridFunction& u, const DensityGrid& w,
                      const ClassParams& cp, const PsiFunction& psi, std::uint64_t seed,
                      long long max_centers = 200, double tol = 1e-3);

// max delta in (0,1) with A B (psi(c_d eps) + psi(d^{d/2} 2^d/r0) + Delta) < 1 - delta
std::optional<double> closure_delta(int d, double A, double B, const PsiFunction& psi, double eps,
                                    double r0, double Delta);

struct GrowthCurve {
  std::vector<double> radii;
  std::vector<double> maxvals;     // M_u(R) over samples of B(0,R)
  std::vector<double> bound;       // R * shape(f(R)/R)
  std::vector<double> bound_eps;   // R * shape(f(R)/(eps R)); the proof's variant
  std::optional<double> fitted_c;      // min over radii of log M_u / bound, when all M_u > 1
  std::optional<double> fitted_c_eps;
};

GrowthCurve growth_curve(const GridFunction& u, const BudgetFunction& f,
                         const std::vector<double>& radii, double eps = 0.1);

}  // namespace osclab
