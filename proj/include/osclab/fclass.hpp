#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "osclab/grid.hpp"

namespace osclab {

// Sampled upper-semi-continuous candidate u; -inf samples mark log
// singularities and are excluded from sups and integrals cell-wise.
struct GridFunction {
  SampleGrid grid;
  std::vector<double> u;
  double sup_finite_abs = 0.0;

  static GridFunction from(const SampleGrid& g, const std::function<double(const Point&)>& fn);
  static GridFunction load(std::istream& in);
  void save(std::ostream& out, bool binary = false) const;

  // closure operations of F(A,B,mu)
  GridFunction scaled(double lambda, double tau) const;  // lambda*u + tau
  static GridFunction pointwise_max(const GridFunction& a, const GridFunction& b);

  double quad_tol() const {
    return 10.0 * sup_finite_abs / (static_cast<double>(grid.s) * grid.s);
  }
  void refresh_stats();
};

struct ClassParams {
  double A = 1.0;      // weak maximum principle constant, >= 1
  double B = 1.0;      // mean-value constant, >= 1
  double r0_mv = 1.0;  // minimal mean-value radius
  double Delta = 0.05; // P2 threshold

  static ClassParams make(double A, double B, double r0_mv = 1.0, double Delta = 0.05);
};

struct CheckWitness {
  std::string body;
  double lhs = 0.0, rhs = 0.0;
};

struct CheckVerdict {
  bool passed = true;
  bool applicable = true;       // Harnack gate can void the verdict
  long long trials = 0;
  long long skipped = 0;        // degenerate bodies (empty boundary, zero mass)
  long long violations = 0;
  std::optional<CheckWitness> worst;
  std::string note;
};

// Eq-(2)-style weak maximum principle over random convex bodies (boxes,
// balls, halfspace-cut polytopes): sup_K u <= A sup_dK u + tol. The boundary
// is the layer of sample cells within one step of leaving K.
CheckVerdict check_weak_max(const GridFunction& u, double A, long long trials, std::uint64_t seed,
                            double tol = 1e-3);

// Eq-(3)-style weighted mean value: u(x) <= B mu(B(x,r))^{-1} int u dmu + tol
// over random centers and radii r in (r0_mv, N/4).
CheckVerdict check_mean_value(const GridFunction& u, const DensityGrid& w, double B,
                              double r0_mv, long long trials, std::uint64_t seed,
                              double tol = 1e-3);

struct HarnackVerdict {
  bool applicable = true;
  double c_hat = 1.0;  // empirical sup/inf over trial balls
  CheckVerdict max_principle;
  CheckVerdict mean_value;
  bool passed() const { return applicable && max_principle.passed && mean_value.passed; }
};

// Empirically estimates the Harnack constant of a nonnegative u, then tests
// the two memberships it implies: F(c,c,m_d).
HarnackVerdict check_harnack_implies_membership(const GridFunction& u, long long trials,
                                                std::uint64_t seed, double tol = 1e-3);

// Eq-(4) equality version: |u(x) - int u w dm / int w dm| <= tol.
CheckVerdict check_weighted_average(const GridFunction& u, const DensityGrid& w, double r0_mv,
                                    long long trials, std::uint64_t seed, double tol = 1e-3);

// Test-function families.
enum class TestFamily {
  kConstant,
  kQuadratic,            // |x|^2
  kLogSin,               // log|sin(pi (x+iy))|, d = 2
  kLogPolyZeros,         // lattice of log zeros, windowed and normalized
  kDiscreteHarmonic,     // 5-point Dirichlet extension of random boundary data
  kBoundedOscillation,   // base + amp sin(x_1)
};

TestFamily parse_family(const std::string& name);
std::string family_name(TestFamily f);

struct TestFunctionParams {
  double value = 1.0;          // constant
  double base = 2.0, amp = 0.1;  // bounded oscillation
  // log-poly-zeros: zeros at offset + spacing * Z^d clipped to the extent box
  // [-extent, extent]^d (extent <= 0 means the padded full lattice), window
  // truncation radius T, optional oscillation calibration
  double zero_offset_x = 0.32, zero_offset_y = 0.42;
  double extent = -1.0;
  int window = 8;
  bool calibrate = false;  // scale/shift so each cube has one positive sample
  double scale = 1.0, shift = 0.0;
};

GridFunction generate_test_function(TestFamily family, const TestFunctionParams& params,
                                    std::uint64_t seed, const SampleGrid& g);

}  // namespace osclab
