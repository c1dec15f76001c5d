#include "osclab/verify.hpp"

#include <algorithm>
#include <cmath>

#include "osclab/parallel.hpp"

namespace osclab {

bool LemmaReport::all_assertables_pass() const {
  return headline_pass && property_M_all_pass && property_Q_pass && claim31_pass &&
         claim32_pass && rho_lower_bound_pass && cover_geometry_pass && kappa_spacing_pass;
}

double sequence_bound_shape(int d, double x) {
  double p = 1.0 / (d - 1);
  double l = std::log(2.0 + x);
  return std::pow(l, static_cast<double>(d) / (d - 1)) / (1.0 + std::pow(x, p));
}

std::pair<long long, bool> verify_property_M(const Pipeline& pl, int k) {
  long long count = 0;
  for (const auto& KI : pl.K)
    if (std::binary_search(KI.begin(), KI.end(), k)) ++count;
  // count >= (11/12) N^d, exact rational comparison
  bool pass = 12 * count >= 11 * pl.lat.cube_count();
  return {count, pass};
}

bool verify_containment(const Pipeline& pl, const BasicCube& I, const KappaSequence& seq) {
  if (seq.empty()) return false;
  const auto& ks = seq.kappas;
  for (std::size_t j = 0; j < ks.size(); ++j) {
    for (const BasicCube& x : boundary_cubes(pl.lat, I, ks[j])) {
      int r = pl.rho.at(x);
      if (r == RhoField::kInfinite) return false;
      CubeBox inner_box = CubeBox::centered(x, r);
      if (j + 1 < ks.size()) {
        CubeBox outer = CubeBox::centered(I, ks[j + 1]);
        if (!outer.contains_box(inner_box, pl.lat.d)) return false;
      }
      if (j > 0) {
        CubeBox prev = CubeBox::centered(I, ks[j - 1]);
        if (!prev.disjoint(inner_box, pl.lat.d)) return false;
      }
    }
  }
  return true;
}

bool verify_density(const Pipeline& pl, const BasicCube& I, const KappaSequence& seq) {
  if (seq.empty()) return false;
  for (int k : seq.kappas) {
    for (const BasicCube& x : boundary_cubes(pl.lat, I, k)) {
      int r = pl.rho.at(x);
      if (r == RhoField::kInfinite) return false;
      long long cnt = pl.E.count_in_box_clipped(CubeBox::centered(x, r));
      double vol = std::pow(2.0 * r + 1.0, pl.lat.d);
      if (static_cast<double>(cnt) > pl.params.eps * vol) return false;
    }
  }
  return true;
}

LemmaReport run_verifiers(const Pipeline& pl, int threads) {
  LemmaReport rep;
  const auto& lat = pl.lat;
  std::size_t n = static_cast<std::size_t>(lat.cube_count());
  rep.cubes_total = static_cast<long long>(n);

  // per-cube flags computed in parallel, reduced deterministically
  std::vector<std::uint8_t> has_seq(n, 0), valid(n, 0), meets31(n, 0), contain(n, 0), dens(n, 0),
      spacing_ok(n, 1);
  rep.claim31_threshold = pl.M.sum_inverse(lat.kmax()) / 60.0;

  parallel_for(n, threads, [&](std::size_t b, std::size_t e) {
    for (std::size_t i = b; i < e; ++i) {
      const KappaSequence& seq = pl.kappa[i];
      if (seq.empty()) continue;
      has_seq[i] = 1;
      BasicCube I = lat.corner_at(i);
      bool ca = verify_containment(pl, I, seq);
      bool de = verify_density(pl, I, seq);
      contain[i] = ca;
      dens[i] = de;
      valid[i] = ca && de;
      if (static_cast<double>(seq.length()) >= rep.claim31_threshold) meets31[i] = 1;
      for (std::size_t j = 0; j + 1 < seq.kappas.size(); ++j) {
        long long gap = static_cast<long long>(seq.kappas[j + 1]) - seq.kappas[j];
        if (!(gap > pl.M.value(seq.kappas[j + 1]))) spacing_ok[i] = 0;
      }
    }
  });

  long long inner_total = 0, inner_meets = 0, all_meets = 0;
  int q0_margin = 2 * lat.margin;
  for (std::size_t i = 0; i < n; ++i) {
    rep.cubes_with_sequence += has_seq[i];
    rep.cubes_with_valid_sequence += valid[i];
    rep.containment_pass_count += contain[i];
    rep.density_pass_count += dens[i];
    all_meets += meets31[i];
    if (lat.in_inner(lat.corner_at(i), q0_margin)) {
      ++inner_total;
      inner_meets += meets31[i];
    }
    if (has_seq[i]) {
      long long len = static_cast<long long>(pl.kappa[i].length());
      if (rep.min_seq_length_observed == 0 || len < rep.min_seq_length_observed)
        rep.min_seq_length_observed = len;
      rep.max_seq_length_observed = std::max(rep.max_seq_length_observed, len);
    }
  }
  rep.fraction_with_sequence =
      static_cast<double>(rep.cubes_with_valid_sequence) / static_cast<double>(n);
  rep.headline_pass = 2 * rep.cubes_with_valid_sequence >= rep.cubes_total;

  rep.claim31_fraction_all = static_cast<double>(all_meets) / static_cast<double>(n);
  rep.claim31_fraction_inner =
      inner_total > 0 ? static_cast<double>(inner_meets) / static_cast<double>(inner_total) : 1.0;
  rep.claim31_pass = inner_total == 0 || 11 * inner_meets >= 10 * inner_total;

  rep.property_M_counts.resize(static_cast<std::size_t>(lat.kmax()));
  rep.property_M_all_pass = true;
  for (int k = 1; k <= lat.kmax(); ++k) {
    auto [count, pass] = verify_property_M(pl, k);
    rep.property_M_counts[static_cast<std::size_t>(k - 1)] = count;
    rep.property_M_all_pass = rep.property_M_all_pass && pass;
  }

  rep.property_Q_pass = pl.M.quotient_property_holds();

  rep.claim32_weighted_sum = pl.cover.weighted_sum_from(pl.params.m0, lat.d);
  if (pl.E.size() > 0) {
    rep.claim32_ratio =
        static_cast<double>(rep.claim32_weighted_sum) * pl.params.eps / static_cast<double>(pl.E.size());
    rep.claim32_pass = static_cast<double>(rep.claim32_weighted_sum) <=
                       pl.params.C1 * static_cast<double>(pl.E.size()) / pl.params.eps;
  } else {
    rep.claim32_ratio = 0.0;
    rep.claim32_pass = rep.claim32_weighted_sum == 0;
  }

  rep.rho_lower_bound_pass = true;
  int jmin = pl.params.rho_min();
  long long inner_m_total = 0, inner_m_finite = 0;
  for (std::size_t i = 0; i < n; ++i) {
    int v = pl.rho.values[i];
    if (v != RhoField::kInfinite && v < jmin) rep.rho_lower_bound_pass = false;
    if (lat.in_inner(lat.corner_at(i), lat.margin)) {
      ++inner_m_total;
      if (v != RhoField::kInfinite) ++inner_m_finite;
    }
  }
  rep.rho_finite_inner_fraction =
      inner_m_total > 0 ? static_cast<double>(inner_m_finite) / static_cast<double>(inner_m_total) : 1.0;

  rep.cover_geometry_pass = true;
  for (std::size_t i = 0; i < n; ++i) {
    int v = pl.rho.values[i];
    if (v == RhoField::kInfinite) continue;
    int m = pl.cover.hull_order[i];
    long long edge = 1LL << m;
    if (!(2LL * v <= edge && edge < 4LL * v)) rep.cover_geometry_pass = false;
  }

  rep.kappa_spacing_pass =
      std::all_of(spacing_ok.begin(), spacing_ok.end(), [](std::uint8_t v) { return v != 0; });

  double x = pl.E.size() > 0
                 ? static_cast<double>(pl.E.size()) / (pl.params.eps * static_cast<double>(lat.N))
                 : 0.0;
  rep.bound_value = static_cast<double>(lat.N) * sequence_bound_shape(lat.d, x);

  // fitted constant: median sequence length against the shape bound
  std::vector<long long> lens;
  lens.reserve(n);
  for (const auto& ks : pl.kappa) lens.push_back(static_cast<long long>(ks.length()));
  std::nth_element(lens.begin(), lens.begin() + lens.size() / 2, lens.end());
  double median = static_cast<double>(lens[lens.size() / 2]);
  rep.fitted_c = rep.bound_value > 0.0 ? median / rep.bound_value : 0.0;

  return rep;
}

std::vector<double> maximal_function_grid(const LatticeParams& lat,
                                          const std::vector<BasicCube>& set) {
  RogueSet indexed = RogueSet::build(lat, set);
  std::size_t n = static_cast<std::size_t>(lat.cube_count());
  std::vector<double> out(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    BasicCube I = lat.corner_at(i);
    double best = 0.0;
    for (int j = 0; j <= lat.N; ++j) {
      long long cnt = indexed.count_in_box_clipped(CubeBox::centered(I, j));
      double v = static_cast<double>(cnt) / std::pow(2.0 * j + 1.0, lat.d);
      best = std::max(best, v);
    }
    out[i] = best;
  }
  return out;
}

}  // namespace osclab
