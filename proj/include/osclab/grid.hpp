#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>
#include <variant>
#include <vector>

#include "osclab/lattice.hpp"

namespace osclab {

using Point = std::array<double, kMaxDim>;

// Midpoint sampling of Q = [-N/2, N/2]^d at `s` samples per unit per axis.
struct SampleGrid {
  int d = 2;
  int N = 8;
  int s = 32;

  static SampleGrid make(int d, int N, int s);

  long long per_axis() const { return static_cast<long long>(N) * s; }
  long long total() const;
  double cell() const { return 1.0 / s; }
  double cell_volume() const;
  double coord(int i) const { return -0.5 * N + (i + 0.5) / s; }
  // first sample index at or after position x (per axis)
  int cell_of(double x) const;

  std::size_t index(const std::array<int, kMaxDim>& mi) const;
  std::array<int, kMaxDim> multi_index(std::size_t idx) const;
  Point position(const std::array<int, kMaxDim>& mi) const;
  // which basic cube a sample multi-index belongs to
  BasicCube owner_cube(const std::array<int, kMaxDim>& mi) const;
  bool compatible(const SampleGrid& other) const {
    return d == other.d && N == other.N && s == other.s;
  }
};

// Quadrature regions. CubeList is a union of basic cubes (grid aligned, so
// midpoint sums are exact per cell); RealBox and Ball get boundary-straddling
// cells weighted by sub-sampled coverage fractions.
struct RealBox {
  Point lo{};
  Point hi{};
};
struct Ball {
  Point center{};
  double radius = 0.0;
};
using CubeList = std::vector<BasicCube>;
using Region = std::variant<RealBox, Ball, CubeList>;

bool region_inside_domain(const SampleGrid& g, const Region& r);
double region_volume(const SampleGrid& g, const Region& r);  // Lebesgue measure (balls exact)

// Visits every sample cell meeting the region with its coverage weight in
// (0, 1]. fn(sample_index, weight).
void for_each_cell(const SampleGrid& g, const Region& r,
                   const std::function<void(std::size_t, double)>& fn);

// sum of fn(cell) * coverage * cell_volume over the region
double quadrature_sum(const SampleGrid& g, const Region& r,
                      const std::function<double(std::size_t)>& fn);

// Sampled density omega >= 0.
struct DensityGrid {
  SampleGrid grid;
  std::vector<double> w;
  double sup = 0.0;  // max sample

  static DensityGrid from(const SampleGrid& g, const std::function<double(const Point&)>& fn);
  static DensityGrid uniform(const SampleGrid& g, double value = 1.0);
  // omega(x) = |x|^alpha
  static DensityGrid abs_power(const SampleGrid& g, double alpha);
  // the oscillating-bump counterexample: sum over k <= kmax of
  // 1_{B(2 pi k e1, pi/(2k))} cos(k |x - 2 pi k e1|) + e^{-|x|}
  static DensityGrid cos_bump(const SampleGrid& g, int kmax = 8);

  // additive quadrature tolerance folded into verdict comparisons
  double quad_tol() const { return 10.0 * sup / (static_cast<double>(grid.s) * grid.s); }

  static DensityGrid load(std::istream& in);
  void save(std::ostream& out, bool binary = false) const;
};

double mu_of_region(const DensityGrid& w, const Region& r);

}  // namespace osclab
