#include "osclab/measure.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "osclab/rng.hpp"

namespace osclab {

PsiFunction PsiFunction::linear(double slope) {
  if (slope <= 0.0) throw std::invalid_argument("PsiFunction: slope must be > 0");
  PsiFunction f;
  f.family = Family::kLinear;
  f.slope = slope;
  return f;
}

PsiFunction PsiFunction::power(double c, double q) {
  if (c <= 0.0 || q <= 0.0 || q > 1.0)
    throw std::invalid_argument("PsiFunction: power family needs c > 0, q in (0,1]");
  PsiFunction f;
  f.family = Family::kPower;
  f.c = c;
  f.q = q;
  return f;
}

PsiFunction PsiFunction::tabulated(std::vector<std::pair<double, double>> pts) {
  if (pts.size() < 2) throw std::invalid_argument("PsiFunction: table needs >= 2 points");
  std::sort(pts.begin(), pts.end());
  if (pts.front().first > 1e-9 && pts.front().second > 1e-9)
    throw std::invalid_argument("PsiFunction: table must approach 0 at 0");
  for (std::size_t i = 1; i < pts.size(); ++i)
    if (pts[i].second < pts[i - 1].second)
      throw std::invalid_argument("PsiFunction: table must be monotone increasing");
  PsiFunction f;
  f.family = Family::kTabulated;
  f.table = std::move(pts);
  return f;
}

PsiFunction PsiFunction::parse(const std::string& spec) {
  auto colon = spec.find(':');
  std::string fam = spec.substr(0, colon);
  std::string args = colon == std::string::npos ? "" : spec.substr(colon + 1);
  if (fam == "linear") return linear(std::stod(args));
  if (fam == "power") {
    auto comma = args.find(',');
    if (comma == std::string::npos) throw std::invalid_argument("psi power needs 'c,q'");
    return power(std::stod(args.substr(0, comma)), std::stod(args.substr(comma + 1)));
  }
  throw std::invalid_argument("unknown psi spec: " + spec);
}

double PsiFunction::operator()(double t) const {
  if (t <= 0.0) return 0.0;
  switch (family) {
    case Family::kLinear:
      return slope * t;
    case Family::kPower:
      return c * std::pow(t, q);
    case Family::kTabulated: {
      if (t <= table.front().first) return table.front().second * t / std::max(table.front().first, 1e-300);
      if (t >= table.back().first) return table.back().second;
      auto it = std::lower_bound(table.begin(), table.end(), std::make_pair(t, -1e300));
      auto [t1, v1] = *it;
      auto [t0, v0] = *std::prev(it);
      return v0 + (v1 - v0) * (t - t0) / (t1 - t0);
    }
  }
  return 0.0;
}

std::string PsiFunction::describe() const {
  std::ostringstream os;
  switch (family) {
    case Family::kLinear:
      os << "linear:" << slope;
      break;
    case Family::kPower:
      os << "power:" << c << "," << q;
      break;
    case Family::kTabulated:
      os << "tabulated[" << table.size() << "]";
      break;
  }
  return os.str();
}

namespace {

std::string point_str(const Point& p, int d) {
  std::ostringstream os;
  os << "(";
  for (int i = 0; i < d; ++i) os << (i ? "," : "") << p[i];
  os << ")";
  return os.str();
}

struct Candidate {
  Region region;
  std::string desc;
  double sub_radius = 0.0;
};

// mu and m of a candidate E relative to an enclosing ball B
struct PairEval {
  double mu_e = 0.0, m_e = 0.0;
};

double mu_cells(const DensityGrid& w, const Region& r) {
  return quadrature_sum(w.grid, r, [&](std::size_t i) { return w.w[i]; });
}

double lebesgue_cells(const SampleGrid& g, const Region& r) {
  return quadrature_sum(g, r, [](std::size_t) { return 1.0; });
}

}  // namespace

MembershipVerdict check_psi_condition(const DensityGrid& w, const PsiFunction& psi,
                                      long long trials, std::uint64_t seed) {
  if (trials < 1) throw std::invalid_argument("check_psi_condition: trials must be >= 1");
  const SampleGrid& g = w.grid;
  const double half = 0.5 * g.N;
  const double tol = w.quad_tol();
  MembershipVerdict verdict;

  // omega-weighted center sampling: cumulative mass over samples
  std::vector<double> cums(w.w.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < w.w.size(); ++i) {
    acc += w.w[i];
    cums[i] = acc;
  }
  const double mass_total = acc;

  auto eval_pair = [&](const Ball& B, double mu_b, double m_b, const Candidate& cand) {
    double mu_e = mu_cells(w, cand.region);
    double m_e;
    if (const auto* sub = std::get_if<Ball>(&cand.region))
      m_e = region_volume(g, *sub);
    else
      m_e = lebesgue_cells(g, cand.region);
    if (m_b <= 0.0 || mu_b <= 0.0) return;
    double t = std::clamp(m_e / m_b, 0.0, 1.0);
    double lhs = mu_e / mu_b;
    double rhs = psi(t) + tol;
    ++verdict.trials;
    PsiWitness wit;
    wit.set_desc = cand.desc;
    wit.ball_desc = "B(" + point_str(B.center, g.d) + "," + std::to_string(B.radius) + ")";
    wit.ball_center = B.center;
    wit.ball_radius = B.radius;
    wit.sub_radius = cand.sub_radius;
    wit.lhs = lhs;
    wit.rhs = rhs;
    wit.lebesgue_ratio = t;
    bool viol = lhs > rhs;
    if (viol) {
      ++verdict.violations;
      verdict.passed = false;
      if (verdict.violating.size() < 16) verdict.violating.push_back(wit);
    }
    double margin = lhs - rhs;
    if (!verdict.worst_pair || margin > verdict.worst_pair->lhs - verdict.worst_pair->rhs)
      verdict.worst_pair = wit;
  };

  auto run_ball = [&](const Ball& B, SplitMix64& rng, bool with_threshold_union) {
    double mu_b = mu_of_region(w, B);
    double m_b = region_volume(g, B);
    if (mu_b <= 0.0) return;

    // concentric sub-balls at dyadic fractions plus one random one
    for (double frac : {0.5, 0.25, 0.125, rng.uniform(0.05, 0.95)}) {
      Ball E{B.center, B.radius * frac};
      if (E.radius < 0.5 * g.cell()) continue;
      eval_pair(B, mu_b, m_b, {E, "subball", E.radius});
    }
    // annular sliver B \ B(r')
    {
      double frac = rng.uniform(0.6, 0.98);
      Ball inner{B.center, B.radius * frac};
      double mu_e = mu_b - mu_cells(w, inner);
      double m_e = region_volume(g, B) - region_volume(g, inner);
      double t = std::clamp(m_e / m_b, 0.0, 1.0);
      double lhs = mu_e / mu_b;
      double rhs = psi(t) + tol;
      ++verdict.trials;
      PsiWitness wit;
      wit.set_desc = "annulus(frac=" + std::to_string(frac) + ")";
      wit.ball_desc = "B(" + point_str(B.center, g.d) + "," + std::to_string(B.radius) + ")";
      wit.ball_center = B.center;
      wit.ball_radius = B.radius;
      wit.lhs = lhs;
      wit.rhs = rhs;
      wit.lebesgue_ratio = t;
      if (lhs > rhs) {
        ++verdict.violations;
        verdict.passed = false;
        if (verdict.violating.size() < 16) verdict.violating.push_back(wit);
      }
      if (!verdict.worst_pair || lhs - rhs > verdict.worst_pair->lhs - verdict.worst_pair->rhs)
        verdict.worst_pair = wit;
    }
    // random sub-box inside the inscribed box
    {
      double a = B.radius / std::sqrt(static_cast<double>(g.d));
      RealBox box;
      bool ok = true;
      for (int i = 0; i < g.d; ++i) {
        double c0 = rng.uniform(B.center[i] - a, B.center[i] + a);
        double c1 = rng.uniform(B.center[i] - a, B.center[i] + a);
        box.lo[i] = std::min(c0, c1);
        box.hi[i] = std::max(c0, c1);
        if (box.hi[i] - box.lo[i] < g.cell()) ok = false;
      }
      if (ok) eval_pair(B, mu_b, m_b, {box, "subbox", 0.0});
    }
    // union of the densest cells in B (the adversarial Borel-ish candidate)
    if (with_threshold_union) {
      std::vector<std::pair<double, std::size_t>> cells;
      for_each_cell(g, B, [&](std::size_t idx, double weight) {
        if (weight >= 1.0) cells.emplace_back(w.w[idx], idx);
      });
      if (cells.size() >= 8) {
        std::sort(cells.begin(), cells.end(), std::greater<>());
        for (double frac : {0.02, 0.1, 0.3}) {
          std::size_t k = std::max<std::size_t>(1, static_cast<std::size_t>(frac * cells.size()));
          double mu_e = 0.0;
          for (std::size_t i = 0; i < k; ++i) mu_e += cells[i].first;
          mu_e *= g.cell_volume();
          double m_e = static_cast<double>(k) * g.cell_volume();
          double t = std::clamp(m_e / m_b, 0.0, 1.0);
          double lhs = mu_e / mu_b;
          double rhs = psi(t) + tol;
          ++verdict.trials;
          PsiWitness wit;
          wit.set_desc = "dense-cells(frac=" + std::to_string(frac) + ")";
          wit.ball_desc = "B(" + point_str(B.center, g.d) + "," + std::to_string(B.radius) + ")";
          wit.ball_center = B.center;
          wit.ball_radius = B.radius;
          wit.lhs = lhs;
          wit.rhs = rhs;
          wit.lebesgue_ratio = t;
          if (lhs > rhs) {
            ++verdict.violations;
            verdict.passed = false;
            if (verdict.violating.size() < 16) verdict.violating.push_back(wit);
          }
          if (!verdict.worst_pair || lhs - rhs > verdict.worst_pair->lhs - verdict.worst_pair->rhs)
            verdict.worst_pair = wit;
        }
      }
    }
  };

  // deterministic probes: balls at the density spikes (local sup cells) and
  // one domain-scale ball; these make counterexample witnesses reproducible
  {
    SplitMix64 rng(mix_seed(seed, 0));
    // global maximum cell
    std::size_t arg = 0;
    for (std::size_t i = 1; i < w.w.size(); ++i)
      if (w.w[i] > w.w[arg]) arg = i;
    Point spike = g.position(g.multi_index(arg));
    double max_r = half;
    for (int i = 0; i < g.d; ++i) max_r = std::min(max_r, half - std::abs(spike[i]));
    for (double r : {1.0, 2.0, 0.5}) {
      if (r <= max_r && r > 2.0 * g.cell()) {
        Ball B{spike, r};
        run_ball(B, rng, true);
      }
    }
    Ball big{{}, half * 0.98};
    run_ball(big, rng, true);
  }

  for (long long t = 0; t < trials; ++t) {
    SplitMix64 rng(mix_seed(seed, static_cast<std::uint64_t>(t) + 1));
    Ball B;
    if (rng.uniform() < 0.5 && mass_total > 0.0) {
      // omega-weighted center
      double u = rng.uniform() * mass_total;
      auto it = std::lower_bound(cums.begin(), cums.end(), u);
      std::size_t idx = static_cast<std::size_t>(it - cums.begin());
      if (idx >= w.w.size()) idx = w.w.size() - 1;
      B.center = g.position(g.multi_index(idx));
      double max_r = half;
      for (int i = 0; i < g.d; ++i) max_r = std::min(max_r, half - std::abs(B.center[i]));
      if (max_r < 4.0 * g.cell()) continue;
      double lo = std::log(4.0 * g.cell()), hi = std::log(max_r);
      B.radius = std::exp(rng.uniform(lo, hi));
    } else {
      double lo = std::log(4.0 * g.cell()), hi = std::log(half * 0.98);
      B.radius = std::exp(rng.uniform(lo, hi));
      for (int i = 0; i < g.d; ++i)
        B.center[i] = rng.uniform(-(half - B.radius), half - B.radius);
    }
    // cap the expensive dense-cell scans to small balls on random trials
    bool cell_union = std::pow(2.0 * B.radius * g.s, g.d) < 4.0e5;
    run_ball(B, rng, cell_union);
  }
  return verdict;
}

double ap_constant(const DensityGrid& w, double p, long long trials, std::uint64_t seed) {
  if (p <= 1.0) throw std::invalid_argument("ap_constant: p must be > 1");
  const SampleGrid& g = w.grid;
  const double half = 0.5 * g.N;
  const double expo = 1.0 / (1.0 - p);  // negative
  double best = 0.0;
  for (long long t = 0; t < trials; ++t) {
    SplitMix64 rng(mix_seed(seed, static_cast<std::uint64_t>(t)));
    Ball B;
    double lo = std::log(4.0 * g.cell()), hi = std::log(half * 0.98);
    B.radius = std::exp(rng.uniform(lo, hi));
    for (int i = 0; i < g.d; ++i) B.center[i] = rng.uniform(-(half - B.radius), half - B.radius);
    double vol = 0.0, avg_w = 0.0, avg_neg = 0.0;
    bool unbounded = false;
    for_each_cell(g, B, [&](std::size_t idx, double weight) {
      double cell = weight * g.cell_volume();
      vol += cell;
      avg_w += w.w[idx] * cell;
      if (w.w[idx] <= 0.0)
        unbounded = true;
      else
        avg_neg += std::pow(w.w[idx], expo) * cell;
    });
    if (vol <= 0.0) continue;
    if (unbounded) return std::numeric_limits<double>::infinity();
    double value = (avg_w / vol) * std::pow(avg_neg / vol, p - 1.0);
    best = std::max(best, value);
  }
  return best;
}

PowerPsiFit fit_power_psi(const DensityGrid& w, long long trials, std::uint64_t seed) {
  PowerPsiFit fit;
  // boundary candidate psi(t) = t first, then (c, q): c ascending, q
  // descending, so the returned certificate is the strongest passing one.
  std::vector<std::pair<double, double>> candidates;
  candidates.emplace_back(1.0, 1.0);
  const double cs[] = {1.0, 1.5, 2.0, 3.0, 4.0};
  const double qs[] = {0.9, 0.75, 0.6, 0.5, 0.4, 1.0 / 3.0};
  for (double c : cs)
    for (double q : qs) candidates.emplace_back(c, q);
  std::sort(candidates.begin() + 1, candidates.end(),
            [](const auto& a, const auto& b) {
              if (a.first != b.first) return a.first < b.first;
              return a.second > b.second;
            });
  for (const auto& [c, q] : candidates) {
    PsiFunction psi = c == 1.0 && q == 1.0 ? PsiFunction::linear(1.0) : PsiFunction::power(c, q);
    MembershipVerdict v = check_psi_condition(w, psi, trials, seed);
    fit.last_verdict = v;
    if (v.passed) {
      fit.found = true;
      fit.c = c;
      fit.q = q;
      return fit;
    }
  }
  return fit;
}

}  // namespace osclab
