#pragma once

#include <string>
#include <vector>

#include "osclab/fclass.hpp"
#include "osclab/grid.hpp"

namespace osclab {

// Budget function f(t) <= t^d controlling how many rogue cubes an
// f-oscillating function may have.
struct BudgetFunction {
  enum class Kind { kPower, kLinear, kCapped };

  Kind kind = Kind::kPower;
  double beta = 1.0;
  double p = 1.0;
  double cap = 0.0;

  static BudgetFunction power(double beta, double p);
  static BudgetFunction linear(double beta);
  static BudgetFunction capped(double beta, double p, double cap);
  // "power:beta,p" | "linear:beta" | "capped:beta,p,cap"
  static BudgetFunction parse(const std::string& spec);

  double operator()(double t) const;
  std::string describe() const;
};

// P1/P2 classification of every basic cube and the resulting rogue count.
struct OscillationReport {
  LatticeParams lat;
  std::vector<std::uint8_t> p1;       // sup_I u >= 1 (samples)
  std::vector<std::uint8_t> p2;       // mu(I cap {u<=0})/mu(I) >= 1-Delta
  std::vector<std::uint8_t> rogue;    // !(p1 && p2)
  std::vector<std::uint8_t> invalid;  // mu(I) == 0
  long long rogue_count = 0;
  long long invalid_count = 0;
  double delta = 0.0;
  double gamma = 0.0;  // rogue_count / f(N)
  std::string f_tag;

  std::vector<BasicCube> rogue_cubes() const;
};

OscillationReport classify(const GridFunction& u, const DensityGrid& w, double delta,
                           const BudgetFunction& f);

// Finite-sample surrogate of limsup gamma([-N,N]^d) < 1: max over the tested
// tail (second half of the sweep) below 1.
bool is_f_oscillating(const std::vector<double>& gammas);

}  // namespace osclab
