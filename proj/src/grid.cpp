#include "osclab/grid.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace osclab {

SampleGrid SampleGrid::make(int d, int N, int s) {
  if (d < 2 || d > kMaxDim) throw std::invalid_argument("SampleGrid: bad dimension");
  if (N < 2 || N % 2 != 0) throw std::invalid_argument("SampleGrid: N must be even and >= 2");
  if (s < 2) throw std::invalid_argument("SampleGrid: sampling rate must be >= 2");
  SampleGrid g{d, N, s};
  if (g.total() > 400'000'000LL) throw std::invalid_argument("SampleGrid: too many samples");
  return g;
}

long long SampleGrid::total() const {
  long long t = 1;
  for (int i = 0; i < d; ++i) t *= per_axis();
  return t;
}

double SampleGrid::cell_volume() const {
  double v = 1.0;
  for (int i = 0; i < d; ++i) v /= s;
  return v;
}

int SampleGrid::cell_of(double x) const {
  double rel = (x + 0.5 * N) * s;
  int i = static_cast<int>(std::floor(rel));
  return std::clamp(i, 0, static_cast<int>(per_axis()) - 1);
}

std::size_t SampleGrid::index(const std::array<int, kMaxDim>& mi) const {
  std::size_t idx = 0;
  for (int i = 0; i < d; ++i) idx = idx * static_cast<std::size_t>(per_axis()) + static_cast<std::size_t>(mi[i]);
  return idx;
}

std::array<int, kMaxDim> SampleGrid::multi_index(std::size_t idx) const {
  std::array<int, kMaxDim> mi{};
  std::size_t pa = static_cast<std::size_t>(per_axis());
  for (int i = d - 1; i >= 0; --i) {
    mi[i] = static_cast<int>(idx % pa);
    idx /= pa;
  }
  return mi;
}

Point SampleGrid::position(const std::array<int, kMaxDim>& mi) const {
  Point p{};
  for (int i = 0; i < d; ++i) p[i] = coord(mi[i]);
  return p;
}

BasicCube SampleGrid::owner_cube(const std::array<int, kMaxDim>& mi) const {
  BasicCube c{};
  for (int i = 0; i < d; ++i) c[i] = mi[i] / s - N / 2;
  return c;
}

namespace {

// coverage refinement: q^d sub-centers per straddling cell
int refine_q(int d) { return d <= 2 ? 8 : (d == 3 ? 4 : 3); }

double dist2(const Point& a, const Point& b, int d) {
  double t = 0.0;
  for (int i = 0; i < d; ++i) {
    double dx = a[i] - b[i];
    t += dx * dx;
  }
  return t;
}

struct CellRange {
  std::array<int, kMaxDim> lo{}, hi{};
  bool empty = false;
};

CellRange bounding_cells(const SampleGrid& g, const Point& lo, const Point& hi) {
  CellRange r;
  for (int i = 0; i < g.d; ++i) {
    double a = std::max(lo[i], -0.5 * g.N);
    double b = std::min(hi[i], 0.5 * g.N);
    if (a >= b) {
      r.empty = true;
      return r;
    }
    r.lo[i] = g.cell_of(a);
    r.hi[i] = g.cell_of(b);
    // cell_of clamps; make sure hi cell still meets the region
    if (g.coord(r.hi[i]) - 0.5 * g.cell() >= b) --r.hi[i];
    if (r.hi[i] < r.lo[i]) {
      r.empty = true;
      return r;
    }
  }
  return r;
}

template <typename Fn>
void odometer(const SampleGrid& g, const CellRange& r, Fn&& fn) {
  std::array<int, kMaxDim> mi = r.lo;
  while (true) {
    fn(mi);
    int axis = g.d - 1;
    while (axis >= 0) {
      if (++mi[axis] <= r.hi[axis]) break;
      mi[axis] = r.lo[axis];
      --axis;
    }
    if (axis < 0) break;
  }
}

}  // namespace

bool region_inside_domain(const SampleGrid& g, const Region& r) {
  double h = 0.5 * g.N;
  if (const auto* b = std::get_if<RealBox>(&r)) {
    for (int i = 0; i < g.d; ++i)
      if (b->lo[i] < -h || b->hi[i] > h) return false;
    return true;
  }
  if (const auto* ball = std::get_if<Ball>(&r)) {
    for (int i = 0; i < g.d; ++i)
      if (ball->center[i] - ball->radius < -h || ball->center[i] + ball->radius > h) return false;
    return true;
  }
  const auto& cubes = std::get<CubeList>(r);
  for (const auto& c : cubes)
    for (int i = 0; i < g.d; ++i)
      if (c[i] < -g.N / 2 || c[i] > g.N / 2 - 1) return false;
  return true;
}

double region_volume(const SampleGrid& g, const Region& r) {
  if (const auto* b = std::get_if<RealBox>(&r)) {
    double v = 1.0;
    for (int i = 0; i < g.d; ++i) v *= std::max(0.0, b->hi[i] - b->lo[i]);
    return v;
  }
  if (const auto* ball = std::get_if<Ball>(&r)) {
    // v_d r^d
    double vd = g.d == 2 ? M_PI
                         : (g.d == 3 ? 4.0 * M_PI / 3.0 : M_PI * M_PI / 2.0);
    return vd * std::pow(ball->radius, g.d);
  }
  return static_cast<double>(std::get<CubeList>(r).size());
}

void for_each_cell(const SampleGrid& g, const Region& r,
                   const std::function<void(std::size_t, double)>& fn) {
  const double h = 0.5 * g.cell();
  const int q = refine_q(g.d);

  if (const auto* cubes = std::get_if<CubeList>(&r)) {
    // grid-aligned: every cell of each basic cube, weight 1
    for (const auto& c : *cubes) {
      CellRange cr;
      for (int i = 0; i < g.d; ++i) {
        cr.lo[i] = (c[i] + g.N / 2) * g.s;
        cr.hi[i] = cr.lo[i] + g.s - 1;
      }
      odometer(g, cr, [&](const std::array<int, kMaxDim>& mi) { fn(g.index(mi), 1.0); });
    }
    return;
  }

  if (const auto* box = std::get_if<RealBox>(&r)) {
    CellRange cr = bounding_cells(g, box->lo, box->hi);
    if (cr.empty) return;
    odometer(g, cr, [&](const std::array<int, kMaxDim>& mi) {
      Point p = g.position(mi);
      double weight = 1.0;
      for (int i = 0; i < g.d; ++i) {
        double a = std::max(box->lo[i], p[i] - h);
        double b = std::min(box->hi[i], p[i] + h);
        if (b <= a) {
          weight = 0.0;
          break;
        }
        weight *= (b - a) / (2.0 * h);
      }
      if (weight > 0.0) fn(g.index(mi), weight);
    });
    return;
  }

  const auto& ball = std::get<Ball>(r);
  Point lo{}, hi{};
  for (int i = 0; i < g.d; ++i) {
    lo[i] = ball.center[i] - ball.radius;
    hi[i] = ball.center[i] + ball.radius;
  }
  CellRange cr = bounding_cells(g, lo, hi);
  if (cr.empty) return;
  const double r2 = ball.radius * ball.radius;
  const double halfdiag = h * std::sqrt(static_cast<double>(g.d));
  const double rin = ball.radius - halfdiag;
  const double rin2 = rin > 0.0 ? rin * rin : -1.0;
  const double rout = ball.radius + halfdiag;
  const double rout2 = rout * rout;
  const double sub = 2.0 * h / q;
  odometer(g, cr, [&](const std::array<int, kMaxDim>& mi) {
    Point p = g.position(mi);
    double d2 = dist2(p, ball.center, g.d);
    if (d2 < rin2) {
      fn(g.index(mi), 1.0);
      return;
    }
    if (d2 > rout2) return;
    // straddling: count covered sub-centers
    std::array<int, kMaxDim> sm{};
    long long covered = 0, totalsub = 1;
    for (int i = 0; i < g.d; ++i) totalsub *= q;
    while (true) {
      Point sp = p;
      for (int i = 0; i < g.d; ++i) sp[i] = p[i] - h + (sm[i] + 0.5) * sub;
      if (dist2(sp, ball.center, g.d) < r2) ++covered;
      int axis = g.d - 1;
      while (axis >= 0) {
        if (++sm[axis] < q) break;
        sm[axis] = 0;
        --axis;
      }
      if (axis < 0) break;
    }
    if (covered > 0) fn(g.index(mi), static_cast<double>(covered) / static_cast<double>(totalsub));
  });
}

double quadrature_sum(const SampleGrid& g, const Region& r,
                      const std::function<double(std::size_t)>& fn) {
  double total = 0.0;
  double cv = g.cell_volume();
  for_each_cell(g, r, [&](std::size_t idx, double weight) { total += fn(idx) * weight * cv; });
  return total;
}

DensityGrid DensityGrid::from(const SampleGrid& g, const std::function<double(const Point&)>& fn) {
  DensityGrid dg;
  dg.grid = g;
  dg.w.resize(static_cast<std::size_t>(g.total()));
  std::array<int, kMaxDim> mi{};
  for (std::size_t idx = 0; idx < dg.w.size(); ++idx) {
    double v = fn(g.position(mi));
    if (!std::isfinite(v) || v < 0.0)
      throw std::invalid_argument("DensityGrid: samples must be finite and >= 0");
    dg.w[idx] = v;
    dg.sup = std::max(dg.sup, v);
    int axis = g.d - 1;
    while (axis >= 0) {
      if (++mi[axis] < g.per_axis()) break;
      mi[axis] = 0;
      --axis;
    }
  }
  return dg;
}

DensityGrid DensityGrid::uniform(const SampleGrid& g, double value) {
  return from(g, [value](const Point&) { return value; });
}

DensityGrid DensityGrid::abs_power(const SampleGrid& g, double alpha) {
  int d = g.d;
  return from(g, [alpha, d](const Point& p) {
    double r2 = 0.0;
    for (int i = 0; i < d; ++i) r2 += p[i] * p[i];
    return std::pow(std::sqrt(r2), alpha);
  });
}

DensityGrid DensityGrid::cos_bump(const SampleGrid& g, int kmax) {
  int d = g.d;
  return from(g, [kmax, d](const Point& p) {
    double r2 = 0.0;
    for (int i = 0; i < d; ++i) r2 += p[i] * p[i];
    double v = std::exp(-std::sqrt(r2));
    for (int k = 1; k <= kmax; ++k) {
      double cx = 2.0 * M_PI * k;
      double dd = (p[0] - cx) * (p[0] - cx);
      for (int i = 1; i < d; ++i) dd += p[i] * p[i];
      double dist = std::sqrt(dd);
      if (dist < M_PI / (2.0 * k)) v += std::cos(k * dist);
    }
    return v;
  });
}

double mu_of_region(const DensityGrid& w, const Region& r) {
  if (!region_inside_domain(w.grid, r))
    throw std::out_of_range("mu_of_region: region outside Q");
  return quadrature_sum(w.grid, r, [&](std::size_t idx) { return w.w[idx]; });
}

DensityGrid DensityGrid::load(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("density file: empty");
  std::istringstream head(line);
  int d = 0, N = 0, s = 0;
  if (!(head >> d >> N >> s)) throw std::runtime_error("density file: malformed header, expected 'd N s'");
  std::string tag;
  bool binary = false;
  if (head >> tag) {
    if (tag == "bin")
      binary = true;
    else if (tag != "text")
      throw std::runtime_error("density file: unknown format tag '" + tag + "'");
  }
  SampleGrid g = SampleGrid::make(d, N, s);
  DensityGrid dg;
  dg.grid = g;
  dg.w.resize(static_cast<std::size_t>(g.total()));
  if (binary) {
    in.read(reinterpret_cast<char*>(dg.w.data()), static_cast<std::streamsize>(dg.w.size() * sizeof(double)));
    if (static_cast<std::size_t>(in.gcount()) != dg.w.size() * sizeof(double))
      throw std::runtime_error("density file: truncated binary payload");
  } else {
    for (std::size_t i = 0; i < dg.w.size(); ++i)
      if (!(in >> dg.w[i])) throw std::runtime_error("density file: truncated sample list");
  }
  for (double v : dg.w) {
    if (!std::isfinite(v) || v < 0.0) throw std::runtime_error("density file: samples must be finite and >= 0");
    dg.sup = std::max(dg.sup, v);
  }
  return dg;
}

void DensityGrid::save(std::ostream& out, bool binary) const {
  out << grid.d << ' ' << grid.N << ' ' << grid.s << (binary ? " bin" : " text") << '\n';
  if (binary) {
    out.write(reinterpret_cast<const char*>(w.data()), static_cast<std::streamsize>(w.size() * sizeof(double)));
  } else {
    out.precision(17);
    for (std::size_t i = 0; i < w.size(); ++i) out << w[i] << '\n';
  }
}

}  // namespace osclab
