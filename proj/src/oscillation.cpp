#include "osclab/oscillation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace osclab {

BudgetFunction BudgetFunction::power(double beta, double p) {
  if (beta <= 0.0 || p <= 0.0) throw std::invalid_argument("BudgetFunction: beta, p must be > 0");
  return BudgetFunction{Kind::kPower, beta, p, 0.0};
}

BudgetFunction BudgetFunction::linear(double beta) {
  if (beta <= 0.0) throw std::invalid_argument("BudgetFunction: beta must be > 0");
  return BudgetFunction{Kind::kLinear, beta, 1.0, 0.0};
}

BudgetFunction BudgetFunction::capped(double beta, double p, double cap) {
  if (beta <= 0.0 || p <= 0.0 || cap <= 0.0)
    throw std::invalid_argument("BudgetFunction: beta, p, cap must be > 0");
  return BudgetFunction{Kind::kCapped, beta, p, cap};
}

BudgetFunction BudgetFunction::parse(const std::string& spec) {
  auto colon = spec.find(':');
  std::string fam = spec.substr(0, colon);
  std::string args = colon == std::string::npos ? "" : spec.substr(colon + 1);
  std::vector<double> vals;
  std::istringstream is(args);
  std::string tok;
  while (std::getline(is, tok, ',')) vals.push_back(std::stod(tok));
  if (fam == "power" && vals.size() == 2) return power(vals[0], vals[1]);
  if (fam == "linear" && vals.size() == 1) return linear(vals[0]);
  if (fam == "capped" && vals.size() == 3) return capped(vals[0], vals[1], vals[2]);
  throw std::invalid_argument("unknown budget function spec: " + spec);
}

double BudgetFunction::operator()(double t) const {
  switch (kind) {
    case Kind::kPower:
      return beta * std::pow(t, p);
    case Kind::kLinear:
      return beta * t;
    case Kind::kCapped:
      return std::min(beta * std::pow(t, p), cap);
  }
  return 0.0;
}

std::string BudgetFunction::describe() const {
  std::ostringstream os;
  switch (kind) {
    case Kind::kPower:
      os << "power:" << beta << "," << p;
      break;
    case Kind::kLinear:
      os << "linear:" << beta;
      break;
    case Kind::kCapped:
      os << "capped:" << beta << "," << p << "," << cap;
      break;
  }
  return os.str();
}

std::vector<BasicCube> OscillationReport::rogue_cubes() const {
  std::vector<BasicCube> out;
  for (std::size_t i = 0; i < rogue.size(); ++i)
    if (rogue[i]) out.push_back(lat.corner_at(i));
  return out;
}

OscillationReport classify(const GridFunction& u, const DensityGrid& w, double delta,
                           const BudgetFunction& f) {
  if (!u.grid.compatible(w.grid)) throw std::invalid_argument("classify: grid mismatch");
  if (delta <= 0.0 || delta >= 1.0) throw std::invalid_argument("classify: Delta must be in (0,1)");
  const SampleGrid& g = u.grid;
  if (f(static_cast<double>(g.N)) > std::pow(static_cast<double>(g.N), g.d) + 1e-9)
    throw std::invalid_argument("classify: budget function exceeds t^d at t = N");

  OscillationReport rep;
  rep.lat = LatticeParams::make(g.d, g.N);
  rep.delta = delta;
  rep.f_tag = f.describe();
  std::size_t n = static_cast<std::size_t>(rep.lat.cube_count());
  rep.p1.assign(n, 0);
  rep.p2.assign(n, 0);
  rep.rogue.assign(n, 0);
  rep.invalid.assign(n, 0);

  // one pass over all samples, accumulating per-cube stats
  std::vector<double> sup(n, -std::numeric_limits<double>::infinity());
  std::vector<double> mass(n, 0.0), mass_z(n, 0.0);
  std::array<int, kMaxDim> mi{};
  for (std::size_t idx = 0; idx < u.u.size(); ++idx) {
    std::size_t cube = rep.lat.index(g.owner_cube(mi));
    double uv = u.u[idx];
    double wv = w.w[idx];
    sup[cube] = std::max(sup[cube], uv);
    mass[cube] += wv;
    if (uv <= 0.0) mass_z[cube] += wv;  // Z_u = {u <= 0}; -inf lands here
    int axis = g.d - 1;
    while (axis >= 0) {
      if (++mi[axis] < g.per_axis()) break;
      mi[axis] = 0;
      --axis;
    }
  }

  for (std::size_t i = 0; i < n; ++i) {
    if (mass[i] <= 0.0) {
      rep.invalid[i] = 1;
      ++rep.invalid_count;
      rep.rogue[i] = 1;  // an unclassifiable cube cannot certify oscillation
      ++rep.rogue_count;
      continue;
    }
    rep.p1[i] = sup[i] >= 1.0;
    rep.p2[i] = mass_z[i] / mass[i] >= 1.0 - delta;
    rep.rogue[i] = !(rep.p1[i] && rep.p2[i]);
    if (rep.rogue[i]) ++rep.rogue_count;
  }

  rep.gamma = static_cast<double>(rep.rogue_count) / f(static_cast<double>(g.N));
  return rep;
}

bool is_f_oscillating(const std::vector<double>& gammas) {
  if (gammas.size() < 3)
    throw std::invalid_argument("is_f_oscillating: need gamma values for >= 3 values of N");
  std::size_t tail_begin = gammas.size() / 2;
  double worst = 0.0;
  for (std::size_t i = tail_begin; i < gammas.size(); ++i) worst = std::max(worst, gammas[i]);
  return worst < 1.0;
}

}  // namespace osclab
