#include "osclab/stopping.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>

#include "osclab/parallel.hpp"

namespace osclab {

StoppingParams StoppingParams::make(int d, double eps, double r0, double c0,
                                    double alpha_override, double C1_override,
                                    double C2_override) {
  if (eps <= 0.0 || eps >= 1.0) throw std::invalid_argument("StoppingParams: eps must be in (0,1)");
  if (r0 <= 1.0) throw std::invalid_argument("StoppingParams: r0 must be > 1");
  if (c0 <= 0.0 || c0 >= 1.0) throw std::invalid_argument("StoppingParams: c0 must be in (0,1)");
  StoppingParams p;
  p.eps = eps;
  p.r0 = r0;
  p.c0 = c0;
  p.C1 = C1_override > 0.0 ? C1_override
                           : std::pow(30.0, d) * std::pow(2.0, d) * std::pow(3.0, d);
  p.C2 = C2_override > 0.0 ? C2_override
                           : std::pow(2.0, d) * 6.0 * d * std::pow(3.0, d - 1);
  p.m0 = 0;
  while ((1LL << p.m0) <= 8.0 * r0) ++p.m0;
  if (alpha_override > 0.0) {
    p.alpha = alpha_override;
    p.alpha_from_formula = false;
  } else {
    double formula = (1.0 / p.C2) * (1.0 / 12.0 - 1.0 / 50.0) - c0 * p.C1;
    if (formula > 0.0) {
      p.alpha = formula;
      p.alpha_from_formula = true;
    } else {
      // The proof's constants force c0 below any useful budget; keep the
      // budget and fall back to the c0-free half of the expression. The
      // lemma properties are then checked per instance instead of assumed.
      p.alpha = (1.0 / 12.0 - 1.0 / 50.0) / (2.0 * p.C2);
      p.alpha_from_formula = false;
    }
  }
  return p;
}

int StoppingParams::rho_min() const { return static_cast<int>(std::ceil(r0)); }

long long StoppingParams::budget(const LatticeParams& lat) const {
  return static_cast<long long>(std::floor(eps * c0 * static_cast<double>(lat.cube_count())));
}

long long RhoField::finite_count() const {
  long long n = 0;
  for (int v : values)
    if (v != kInfinite) ++n;
  return n;
}

RhoField compute_rho(const LatticeParams& lat, const RogueSet& E, const StoppingParams& p,
                     int threads) {
  RhoField rho{lat, std::vector<int>(static_cast<std::size_t>(lat.cube_count()), RhoField::kInfinite)};
  int jmin = p.rho_min();
  const double half_eps = p.eps / 2.0;
  parallel_for(rho.values.size(), threads, [&](std::size_t b, std::size_t e) {
    for (std::size_t idx = b; idx < e; ++idx) {
      BasicCube I = lat.corner_at(idx);
      // The density condition is not monotone in j, so this is a plain scan.
      for (int j = jmin; j <= lat.N; ++j) {
        long long cnt = E.count_in_box_clipped(CubeBox::centered(I, j));
        double vol = std::pow(2.0 * j + 1.0, lat.d);
        if (static_cast<double>(cnt) <= half_eps * vol) {
          rho.values[idx] = j;
          break;
        }
      }
    }
  });
  return rho;
}

long long DyadicCover::weighted_sum_from(int m, int power_d) const {
  long long total = 0;
  for (const auto& [ell, n] : histogram) {
    if (ell < m) continue;
    long long w = 1;
    for (int i = 0; i < power_d; ++i) w *= (1LL << ell);
    total += w * n;
  }
  return total;
}

namespace {

int hull_order_for_rho(int rho_value) {
  // smallest m with 2^m >= 2*rho; then 2*rho <= 2^m < 4*rho
  int m = 0;
  while ((1LL << m) < 2LL * rho_value) ++m;
  return m;
}

}  // namespace

DyadicCover build_cover(const LatticeParams& lat, const RhoField& rho, const StoppingParams& p) {
  (void)p;
  DyadicCover cover;
  std::size_t n = rho.values.size();
  cover.hull_order.assign(n, -1);

  std::vector<std::uint32_t> order;
  order.reserve(n);
  for (std::size_t i = 0; i < n; ++i)
    if (rho.values[i] != RhoField::kInfinite) order.push_back(static_cast<std::uint32_t>(i));
  // non-increasing rho; ties broken by corner lex order (= index order)
  std::stable_sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t b) {
    if (rho.values[a] != rho.values[b]) return rho.values[a] > rho.values[b];
    return a < b;
  });

  std::vector<std::uint8_t> covered(n, 0);
  for (std::uint32_t idx : order) {
    BasicCube I = lat.corner_at(idx);
    int m = hull_order_for_rho(rho.values[idx]);
    cover.hull_order[idx] = static_cast<std::int8_t>(m);
    if (covered[idx]) continue;
    DyadicCube J = dyadic_hull(I, m, lat.d);
    cover.elements.push_back(J);
    cover.histogram[m] += 1;
    CubeBox cb = J.corner_box(lat.d).clipped(lat);
    if (cb.empty(lat.d)) continue;
    BasicCube c = cb.lo;
    while (true) {
      covered[lat.index(c)] = 1;
      int axis = lat.d - 1;
      while (axis >= 0) {
        if (++c[axis] <= cb.hi[axis]) break;
        c[axis] = cb.lo[axis];
        --axis;
      }
      if (axis < 0) break;
    }
  }
  return cover;
}

StepFunction build_step_function(const std::map<int, long long>& histogram,
                                 const StoppingParams& p, const LatticeParams& lat,
                                 long long rogue_count) {
  StepFunction M;
  M.m0 = p.m0;
  M.cap = static_cast<double>(lat.kmax());
  M.degenerate = histogram.empty() && rogue_count > 0;

  auto tail_sum = [&](int m) {
    double t = 0.0;
    for (const auto& [ell, n] : histogram)
      if (ell >= m) t += std::ldexp(static_cast<double>(n), ell);  // 2^ell * n
    return t;
  };

  double Nd = std::pow(static_cast<double>(lat.N), lat.d);
  int m = p.m0;
  while (true) {
    double tail = tail_sum(m);
    double sm;
    if (tail <= 0.0) {
      sm = M.cap;
    } else {
      double raw = std::pow(p.alpha * Nd / tail, 1.0 / (lat.d - 1)) + std::ldexp(1.0, m + 2);
      sm = std::min(raw, M.cap);
    }
    M.s.push_back(sm);
    if (sm >= M.cap) break;
    ++m;
    if (m - p.m0 > 64) throw std::logic_error("build_step_function: runaway step sequence");
  }
  // s.back() is s_{mbar+1} = cap
  M.mbar = p.m0 + static_cast<int>(M.s.size()) - 2;  // == m0-1 when capped immediately
  return M;
}

int StepFunction::exponent(int k) const {
  double kd = static_cast<double>(k);
  for (std::size_t i = 0; i < s.size(); ++i)
    if (kd <= s[i]) return m0 + static_cast<int>(i);
  return m0 + static_cast<int>(s.size()) - 1;  // k beyond the cap: final step
}

bool StepFunction::quotient_property_holds() const {
  int kmax = static_cast<int>(cap);
  for (int k = 1; k <= kmax; ++k) {
    long long mk = value(k);
    long long prev = value(k - static_cast<int>(mk));
    if (mk > 4 * prev) return false;
  }
  return true;
}

double StepFunction::sum_inverse(int k_limit) const {
  double total = 0.0;
  for (int k = 1; k <= k_limit; ++k) total += 1.0 / static_cast<double>(value(k));
  return total;
}

std::vector<int> compute_KI(const LatticeParams& lat, const BasicCube& I, const RhoField& rho,
                            const StepFunction& M) {
  std::vector<int> out;
  int kmax = lat.kmax();
  for (int k = 1; k <= kmax; ++k) {
    long long mk = M.value(k);
    bool ok = true;
    for (const BasicCube& x : boundary_cubes(lat, I, k)) {
      int r = rho.at(x);
      if (r == RhoField::kInfinite || r > mk) {
        ok = false;
        break;
      }
    }
    if (ok) out.push_back(k);
  }
  return out;
}

KappaSequence build_kappa(const BasicCube& I, const std::vector<int>& K_I, const StepFunction& M) {
  KappaSequence seq;
  seq.center = I;
  if (K_I.empty()) return seq;
  std::vector<int> rev;
  int cur = K_I.back();
  rev.push_back(cur);
  while (true) {
    long long bound = static_cast<long long>(cur) - M.value(cur);
    // max{ k in K_I : k < cur - M(cur) }
    auto it = std::lower_bound(K_I.begin(), K_I.end(), bound);
    if (it == K_I.begin()) break;
    cur = *std::prev(it);
    rev.push_back(cur);
  }
  seq.kappas.assign(rev.rbegin(), rev.rend());
  return seq;
}

Pipeline Pipeline::construct(const LatticeParams& lat, RogueSet E, const StoppingParams& p,
                             int threads) {
  long long budget = p.budget(lat);
  if (E.size() > budget)
    throw BudgetError("rogue budget gate: #E = " + std::to_string(E.size()) + " exceeds eps*c0*N^d = " +
                      std::to_string(budget));

  Pipeline pl{lat, p, std::move(E), {}, {}, {}, {}, {}};
  pl.rho = compute_rho(lat, pl.E, p, threads);
  pl.cover = build_cover(lat, pl.rho, p);
  pl.M = build_step_function(pl.cover.histogram, p, lat, pl.E.size());

  std::size_t n = static_cast<std::size_t>(lat.cube_count());
  pl.K.resize(n);
  pl.kappa.resize(n);
  parallel_for(n, threads, [&](std::size_t b, std::size_t e) {
    for (std::size_t i = b; i < e; ++i) {
      BasicCube I = lat.corner_at(i);
      pl.K[i] = compute_KI(lat, I, pl.rho, pl.M);
      pl.kappa[i] = build_kappa(I, pl.K[i], pl.M);
    }
  });
  return pl;
}

namespace {

inline void fnv_mix(std::uint64_t& h, std::uint64_t v) {
  h ^= v;
  h *= 0x100000001b3ULL;
}

}  // namespace

std::uint64_t Pipeline::content_hash() const {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  fnv_mix(h, static_cast<std::uint64_t>(lat.d));
  fnv_mix(h, static_cast<std::uint64_t>(lat.N));
  fnv_mix(h, static_cast<std::uint64_t>(lat.margin));
  std::uint64_t bits;
  static_assert(sizeof(double) == sizeof(bits));
  std::memcpy(&bits, &params.eps, 8);
  fnv_mix(h, bits);
  std::memcpy(&bits, &params.r0, 8);
  fnv_mix(h, bits);
  for (int v : rho.values) fnv_mix(h, static_cast<std::uint64_t>(static_cast<std::uint32_t>(v)));
  for (const auto& J : cover.elements) {
    fnv_mix(h, static_cast<std::uint64_t>(J.order));
    for (int i = 0; i < lat.d; ++i) fnv_mix(h, static_cast<std::uint64_t>(static_cast<std::uint32_t>(J.index[i])));
  }
  for (double sv : M.s) {
    std::memcpy(&bits, &sv, 8);
    fnv_mix(h, bits);
  }
  for (const auto& ks : kappa) {
    fnv_mix(h, ks.kappas.size());
    for (int k : ks.kappas) fnv_mix(h, static_cast<std::uint64_t>(k));
  }
  return h;
}

}  // namespace osclab
