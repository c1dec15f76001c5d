#include "osclab/growth.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "osclab/rng.hpp"
#include "osclab/verify.hpp"

namespace osclab {

namespace {
constexpr double kNegInf = -std::numeric_limits<double>::infinity();
}

double positive_mass_ratio(const GridFunction& u, const DensityGrid& w, const Ball& ball) {
  if (!u.grid.compatible(w.grid)) throw std::invalid_argument("positive_mass_ratio: grid mismatch");
  if (!region_inside_domain(u.grid, Region{ball}))
    throw std::out_of_range("positive_mass_ratio: ball outside Q");
  double total = 0.0, positive = 0.0;
  for_each_cell(u.grid, ball, [&](std::size_t idx, double weight) {
    double cell = weight * u.grid.cell_volume();
    total += w.w[idx] * cell;
    if (u.u[idx] > 0.0) positive += w.w[idx] * cell;
  });
  if (total <= 0.0) throw std::invalid_argument("positive_mass_ratio: mu(B) = 0");
  return positive / total;
}

double covering_constant(int d, double r0) {
  // (2r+1)^d / (v_d r^d) is decreasing in r, so the sup sits at r = r0/2
  double vd = d == 2 ? M_PI : (d == 3 ? 4.0 * M_PI / 3.0 : M_PI * M_PI / 2.0);
  double r = 0.5 * r0;
  return std::pow(2.0 * r + 1.0, d) / (vd * std::pow(r, d));
}

std::optional<double> closure_delta(int d, double A, double B, const PsiFunction& psi, double eps,
                                    double r0, double Delta) {
  double cd = covering_constant(d, r0);
  double lhs = A * B * (psi(cd * eps) + psi(std::pow(d, 0.5 * d) * std::pow(2.0, d) / r0) + Delta);
  if (lhs >= 1.0) return std::nullopt;
  // binary search for the largest delta with lhs < 1 - delta
  double lo = 0.0, hi = 1.0;
  for (int it = 0; it < 60; ++it) {
    double mid = 0.5 * (lo + hi);
    if (lhs < 1.0 - mid)
      lo = mid;
    else
      hi = mid;
  }
  if (lo <= 0.0) return std::nullopt;
  return lo;
}

namespace {

// max of u over the samples of one basic cube
double cube_sample_max(const GridFunction& u, const BasicCube& c) {
  const SampleGrid& g = u.grid;
  std::array<int, kMaxDim> lo{}, mi{};
  for (int i = 0; i < g.d; ++i) lo[i] = (c[i] + g.N / 2) * g.s;
  mi = lo;
  double best = kNegInf;
  while (true) {
    double v = u.u[g.index(mi)];
    if (v != kNegInf) best = std::max(best, v);
    int axis = g.d - 1;
    while (axis >= 0) {
      if (++mi[axis] < lo[axis] + g.s) break;
      mi[axis] = lo[axis];
      --axis;
    }
    if (axis < 0) break;
  }
  return best;
}

struct LayerMax {
  double value = kNegInf;
  BasicCube arg{};
  bool any = false;
};

LayerMax layer_max(const GridFunction& u, const LatticeParams& lat, const BasicCube& center,
                   int k) {
  LayerMax lm;
  for (const BasicCube& cell : boundary_cubes(lat, center, k)) {
    double v = cube_sample_max(u, cell);
    if (v > lm.value) {
      lm.value = v;
      lm.arg = cell;
    }
    lm.any = true;
  }
  return lm;
}

}  // namespace

ChainReport run_chain(const Pipeline& pl, const GridFunction& u, const DensityGrid& w,
                      const ClassParams& cp, const PsiFunction& psi, std::uint64_t seed,
                      long long max_centers, double tol) {
  if (u.grid.N != pl.lat.N || u.grid.d != pl.lat.d)
    throw std::invalid_argument("run_chain: grid and lattice disagree");
  ChainReport rep;
  rep.c_d = covering_constant(pl.lat.d, pl.params.r0);
  rep.closure_lhs =
      cp.A * cp.B *
      (psi(rep.c_d * pl.params.eps) +
       psi(std::pow(pl.lat.d, 0.5 * pl.lat.d) * std::pow(2.0, pl.lat.d) / pl.params.r0) + cp.Delta);
  rep.delta = closure_delta(pl.lat.d, cp.A, cp.B, psi, pl.params.eps, pl.params.r0, cp.Delta);
  rep.closure = rep.delta.has_value();

  // seeded sample of center cubes with nonempty sequences
  std::vector<std::size_t> centers;
  for (std::size_t i = 0; i < pl.kappa.size(); ++i)
    if (!pl.kappa[i].empty()) centers.push_back(i);
  if (centers.empty()) {
    rep.diagnostic = "no cube has a kappa sequence";
    return rep;
  }
  if (static_cast<long long>(centers.size()) > max_centers) {
    SplitMix64 rng(seed);
    for (std::size_t i = 0; i < static_cast<std::size_t>(max_centers); ++i) {
      std::size_t j = i + static_cast<std::size_t>(
                              rng.uniform_int(0, static_cast<long long>(centers.size() - i - 1)));
      std::swap(centers[i], centers[j]);
    }
    centers.resize(static_cast<std::size_t>(max_centers));
    std::sort(centers.begin(), centers.end());
  }

  double growth_floor = rep.closure ? std::exp(*rep.delta) - 10.0 * (tol + u.quad_tol()) : 0.0;
  double min_ratio = std::numeric_limits<double>::infinity();
  const double half = 0.5 * pl.lat.N;

  for (std::size_t ci : centers) {
    const KappaSequence& seq = pl.kappa[ci];
    BasicCube I = pl.lat.corner_at(ci);
    ++rep.cubes_walked;
    if (seq.length() >= 2) ++rep.cubes_with_multi_step;

    // incremental max over nested shells Q_{kappa_j}(I) clipped to Q
    double running = kNegInf;
    int covered = -1;
    std::vector<double> shell_max(seq.length());
    std::vector<LayerMax> shell_layer(seq.length());
    for (std::size_t j = 0; j < seq.kappas.size(); ++j) {
      int k = seq.kappas[j];
      LayerMax outermost;
      for (int layer = covered + 1; layer <= k; ++layer) {
        LayerMax lm = layer_max(u, pl.lat, I, layer);
        if (lm.any && lm.value > running) running = lm.value;
        if (layer == k) outermost = lm;
      }
      covered = k;
      shell_max[j] = running;
      shell_layer[j] = outermost;
    }

    for (std::size_t j = 0; j + 1 < seq.kappas.size(); ++j) {
      ChainStep step;
      step.center = I;
      step.k_from = seq.kappas[j];
      step.k_to = seq.kappas[j + 1];
      step.m_from = shell_max[j];
      step.m_to = shell_max[j + 1];
      if (step.m_to < step.m_from) rep.monotone = false;
      if (step.m_from > 0.0 && step.m_to > 0.0) {
        step.ratio = step.m_to / step.m_from;
        min_ratio = std::min(min_ratio, *step.ratio);
        if (rep.closure && *step.ratio < growth_floor) {
          step.below_growth = true;
          ++rep.flagged_steps;
        }
      }
      // the proof's x_j: the sample maximizing u on the shell layer, probed
      // with the mean-value ball B(x_j, rho(I(x_j))/2) when it fits in Q
      const LayerMax& lm = shell_layer[j];
      if (lm.any) {
        int rho_x = pl.rho.at(lm.arg);
        if (rho_x != RhoField::kInfinite) {
          Ball b;
          double rj = 0.5 * rho_x;
          bool fits = true;
          for (int i = 0; i < pl.lat.d; ++i) {
            b.center[i] = lm.arg[i] + 0.5;
            if (b.center[i] - rj < -half || b.center[i] + rj > half) fits = false;
          }
          b.radius = rj;
          if (fits) step.pmr = positive_mass_ratio(u, w, b);
        }
      }
      rep.steps.push_back(step);
    }
  }
  rep.min_ratio = std::isfinite(min_ratio) ? min_ratio : 0.0;
  if (rep.steps.empty()) rep.diagnostic = "all sampled sequences have a single element";
  return rep;
}

GrowthCurve growth_curve(const GridFunction& u, const BudgetFunction& f,
                         const std::vector<double>& radii, double eps) {
  for (std::size_t i = 1; i < radii.size(); ++i)
    if (radii[i] <= radii[i - 1]) throw std::invalid_argument("growth_curve: radii must increase");
  if (!radii.empty() && radii.back() > 0.5 * u.grid.N + 1e-9)
    throw std::invalid_argument("growth_curve: radius beyond N/2");

  GrowthCurve curve;
  curve.radii = radii;
  const SampleGrid& g = u.grid;

  // one pass: bucket samples by |x| against the sorted radii
  std::vector<double> best(radii.size(), kNegInf);
  std::array<int, kMaxDim> mi{};
  for (std::size_t idx = 0; idx < u.u.size(); ++idx) {
    Point p = g.position(mi);
    double r2 = 0.0;
    for (int i = 0; i < g.d; ++i) r2 += p[i] * p[i];
    double r = std::sqrt(r2);
    auto it = std::lower_bound(radii.begin(), radii.end(), r);
    std::size_t bucket = static_cast<std::size_t>(it - radii.begin());
    if (bucket < radii.size() && u.u[idx] != kNegInf)
      best[bucket] = std::max(best[bucket], u.u[idx]);
    int axis = g.d - 1;
    while (axis >= 0) {
      if (++mi[axis] < g.per_axis()) break;
      mi[axis] = 0;
      --axis;
    }
  }
  // prefix max: M_u(R_i) = max over samples within R_i
  double acc = kNegInf;
  curve.maxvals.resize(radii.size());
  for (std::size_t i = 0; i < radii.size(); ++i) {
    acc = std::max(acc, best[i]);
    curve.maxvals[i] = acc;
  }

  curve.bound.resize(radii.size());
  curve.bound_eps.resize(radii.size());
  bool all_above_one = !radii.empty();
  double c_min = std::numeric_limits<double>::infinity();
  double c_min_eps = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < radii.size(); ++i) {
    double R = radii[i];
    double fr = f(R);
    curve.bound[i] = R * sequence_bound_shape(g.d, fr / R);
    curve.bound_eps[i] = R * sequence_bound_shape(g.d, fr / (eps * R));
    if (curve.maxvals[i] <= 1.0) {
      all_above_one = false;
    } else {
      c_min = std::min(c_min, std::log(curve.maxvals[i]) / curve.bound[i]);
      c_min_eps = std::min(c_min_eps, std::log(curve.maxvals[i]) / curve.bound_eps[i]);
    }
  }
  if (all_above_one) {
    curve.fitted_c = c_min;
    curve.fitted_c_eps = c_min_eps;
  }
  return curve;
}

}  // namespace osclab
