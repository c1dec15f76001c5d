#include "osclab/fclass.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "osclab/rng.hpp"

namespace osclab {

namespace {
constexpr double kNegInf = -std::numeric_limits<double>::infinity();
}

GridFunction GridFunction::from(const SampleGrid& g, const std::function<double(const Point&)>& fn) {
  GridFunction f;
  f.grid = g;
  f.u.resize(static_cast<std::size_t>(g.total()));
  std::array<int, kMaxDim> mi{};
  for (std::size_t idx = 0; idx < f.u.size(); ++idx) {
    double v = fn(g.position(mi));
    if (std::isnan(v) || v == std::numeric_limits<double>::infinity())
      throw std::invalid_argument("GridFunction: samples must be finite or -inf");
    f.u[idx] = v;
    int axis = g.d - 1;
    while (axis >= 0) {
      if (++mi[axis] < g.per_axis()) break;
      mi[axis] = 0;
      --axis;
    }
  }
  f.refresh_stats();
  return f;
}

void GridFunction::refresh_stats() {
  sup_finite_abs = 0.0;
  bool any_finite = false;
  for (double v : u) {
    if (v == kNegInf) continue;
    any_finite = true;
    sup_finite_abs = std::max(sup_finite_abs, std::abs(v));
  }
  if (!any_finite) throw std::invalid_argument("GridFunction: identically -inf");
}

GridFunction GridFunction::scaled(double lambda, double tau) const {
  GridFunction f = *this;
  for (double& v : f.u)
    if (v != kNegInf) v = lambda * v + tau;
  f.refresh_stats();
  return f;
}

GridFunction GridFunction::pointwise_max(const GridFunction& a, const GridFunction& b) {
  if (!a.grid.compatible(b.grid)) throw std::invalid_argument("pointwise_max: grid mismatch");
  GridFunction f = a;
  for (std::size_t i = 0; i < f.u.size(); ++i) f.u[i] = std::max(a.u[i], b.u[i]);
  f.refresh_stats();
  return f;
}

GridFunction GridFunction::load(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("grid function file: empty");
  std::istringstream head(line);
  int d = 0, N = 0, s = 0;
  if (!(head >> d >> N >> s)) throw std::runtime_error("grid function file: malformed header");
  std::string tag;
  bool binary = false;
  if (head >> tag) binary = tag == "bin";
  SampleGrid g = SampleGrid::make(d, N, s);
  GridFunction f;
  f.grid = g;
  f.u.resize(static_cast<std::size_t>(g.total()));
  if (binary) {
    in.read(reinterpret_cast<char*>(f.u.data()), static_cast<std::streamsize>(f.u.size() * sizeof(double)));
    if (static_cast<std::size_t>(in.gcount()) != f.u.size() * sizeof(double))
      throw std::runtime_error("grid function file: truncated binary payload");
  } else {
    for (std::size_t i = 0; i < f.u.size(); ++i) {
      std::string tok;
      if (!(in >> tok)) throw std::runtime_error("grid function file: truncated sample list");
      f.u[i] = tok == "-inf" ? kNegInf : std::stod(tok);
    }
  }
  f.refresh_stats();
  return f;
}

void GridFunction::save(std::ostream& out, bool binary) const {
  out << grid.d << ' ' << grid.N << ' ' << grid.s << (binary ? " bin" : " text") << '\n';
  if (binary) {
    out.write(reinterpret_cast<const char*>(u.data()), static_cast<std::streamsize>(u.size() * sizeof(double)));
  } else {
    out.precision(17);
    for (double v : u) {
      if (v == kNegInf)
        out << "-inf\n";
      else
        out << v << '\n';
    }
  }
}

ClassParams ClassParams::make(double A, double B, double r0_mv, double Delta) {
  if (A < 1.0 || B < 1.0) throw std::invalid_argument("ClassParams: A and B must be >= 1");
  if (Delta <= 0.0 || Delta >= 1.0) throw std::invalid_argument("ClassParams: Delta must be in (0,1)");
  if (r0_mv <= 0.0) throw std::invalid_argument("ClassParams: r0_mv must be > 0");
  return ClassParams{A, B, r0_mv, Delta};
}

namespace {

// convex trial bodies
struct HalfSpace {
  Point normal{};
  double offset = 0.0;  // { x : <x - anchor, n> <= offset } with anchor the body center
};

struct ConvexBody {
  enum class Kind { kBox, kBall, kPolytope } kind = Kind::kBox;
  RealBox box;
  Ball ball;
  std::vector<HalfSpace> cuts;  // with kBall base for kPolytope
  std::string desc;

  bool contains(const Point& p, int d) const {
    switch (kind) {
      case Kind::kBox:
        for (int i = 0; i < d; ++i)
          if (p[i] < box.lo[i] || p[i] > box.hi[i]) return false;
        return true;
      case Kind::kBall:
      case Kind::kPolytope: {
        double r2 = 0.0;
        for (int i = 0; i < d; ++i) {
          double dx = p[i] - ball.center[i];
          r2 += dx * dx;
        }
        if (r2 > ball.radius * ball.radius) return false;
        for (const auto& h : cuts) {
          double dot = 0.0;
          for (int i = 0; i < d; ++i) dot += (p[i] - ball.center[i]) * h.normal[i];
          if (dot > h.offset) return false;
        }
        return true;
      }
    }
    return false;
  }

  void bounds(Point& lo, Point& hi, int d) const {
    if (kind == Kind::kBox) {
      lo = box.lo;
      hi = box.hi;
    } else {
      for (int i = 0; i < d; ++i) {
        lo[i] = ball.center[i] - ball.radius;
        hi[i] = ball.center[i] + ball.radius;
      }
    }
  }
};

ConvexBody random_body(SplitMix64& rng, const SampleGrid& g, const Point& bias_center,
                       bool use_bias) {
  const double half = 0.5 * g.N;
  ConvexBody body;
  int kind = static_cast<int>(rng.uniform_int(0, 2));
  double rmin = 4.0 * g.cell();
  double rmax = std::max(rmin * 1.5, 0.25 * g.N);
  double radius = std::exp(rng.uniform(std::log(rmin), std::log(rmax)));
  Point center{};
  if (use_bias) {
    for (int i = 0; i < g.d; ++i) {
      double m = std::min(half - radius, std::max(-(half - radius), bias_center[i]));
      center[i] = m;
    }
  } else {
    for (int i = 0; i < g.d; ++i) center[i] = rng.uniform(-(half - radius), half - radius);
  }
  std::ostringstream desc;
  if (kind == 0) {
    body.kind = ConvexBody::Kind::kBox;
    for (int i = 0; i < g.d; ++i) {
      double a = radius * rng.uniform(0.4, 1.0);
      body.box.lo[i] = center[i] - a;
      body.box.hi[i] = center[i] + a;
    }
    desc << "box@";
  } else if (kind == 1) {
    body.kind = ConvexBody::Kind::kBall;
    body.ball = {center, radius};
    desc << "ball@";
  } else {
    body.kind = ConvexBody::Kind::kPolytope;
    body.ball = {center, radius};
    int ncuts = 2 * g.d + 2;
    for (int c = 0; c < ncuts; ++c) {
      HalfSpace h;
      double norm = 0.0;
      for (int i = 0; i < g.d; ++i) {
        h.normal[i] = rng.uniform(-1.0, 1.0);
        norm += h.normal[i] * h.normal[i];
      }
      norm = std::sqrt(std::max(norm, 1e-12));
      for (int i = 0; i < g.d; ++i) h.normal[i] /= norm;
      h.offset = radius * rng.uniform(0.3, 0.95);
      body.cuts.push_back(h);
    }
    desc << "polytope@";
  }
  for (int i = 0; i < g.d; ++i) desc << (i ? "," : "(") << center[i];
  desc << ") r=" << radius;
  body.desc = desc.str();
  return body;
}

// interior and boundary-layer sups of u over a body; boundary = in-body
// sample with an axis neighbor (one sample step) outside the body
struct BodySups {
  double sup_all = kNegInf;
  double sup_boundary = kNegInf;
  bool any_inside = false;
  bool any_boundary = false;
};

BodySups body_sups(const GridFunction& u, const ConvexBody& body) {
  const SampleGrid& g = u.grid;
  Point lo{}, hi{};
  body.bounds(lo, hi, g.d);
  std::array<int, kMaxDim> clo{}, chi{};
  for (int i = 0; i < g.d; ++i) {
    clo[i] = std::max(0, g.cell_of(lo[i]) - 1);
    chi[i] = std::min(static_cast<int>(g.per_axis()) - 1, g.cell_of(hi[i]) + 1);
    if (chi[i] < clo[i]) return {};
  }
  std::array<int, kMaxDim> dims{};
  std::size_t total = 1;
  for (int i = 0; i < g.d; ++i) {
    dims[i] = chi[i] - clo[i] + 1;
    total *= static_cast<std::size_t>(dims[i]);
  }
  std::vector<std::uint8_t> inside(total, 0);
  auto local_index = [&](const std::array<int, kMaxDim>& mi) {
    std::size_t li = 0;
    for (int i = 0; i < g.d; ++i) li = li * dims[i] + static_cast<std::size_t>(mi[i] - clo[i]);
    return li;
  };

  std::array<int, kMaxDim> mi = clo;
  while (true) {
    if (body.contains(g.position(mi), g.d)) inside[local_index(mi)] = 1;
    int axis = g.d - 1;
    while (axis >= 0) {
      if (++mi[axis] <= chi[axis]) break;
      mi[axis] = clo[axis];
      --axis;
    }
    if (axis < 0) break;
  }

  BodySups sups;
  mi = clo;
  while (true) {
    std::size_t li = local_index(mi);
    if (inside[li]) {
      sups.any_inside = true;
      double v = u.u[g.index(mi)];
      if (v != kNegInf) sups.sup_all = std::max(sups.sup_all, v);
      bool on_boundary = false;
      for (int i = 0; i < g.d && !on_boundary; ++i) {
        for (int dir = -1; dir <= 1 && !on_boundary; dir += 2) {
          std::array<int, kMaxDim> nb = mi;
          nb[i] += dir;
          if (nb[i] < clo[i] || nb[i] > chi[i]) {
            on_boundary = true;  // beyond the padded bounding box: outside
          } else if (!inside[local_index(nb)]) {
            on_boundary = true;
          }
        }
      }
      if (on_boundary) {
        sups.any_boundary = true;
        if (v != kNegInf) sups.sup_boundary = std::max(sups.sup_boundary, v);
      }
    }
    int axis = g.d - 1;
    while (axis >= 0) {
      if (++mi[axis] <= chi[axis]) break;
      mi[axis] = clo[axis];
      --axis;
    }
    if (axis < 0) break;
  }
  return sups;
}

}  // namespace

CheckVerdict check_weak_max(const GridFunction& u, double A, long long trials, std::uint64_t seed,
                            double tol) {
  if (trials < 1) throw std::invalid_argument("check_weak_max: trials must be >= 1");
  CheckVerdict verdict;
  const SampleGrid& g = u.grid;
  double eff_tol = tol + u.quad_tol();

  std::size_t argmax = 0;
  for (std::size_t i = 1; i < u.u.size(); ++i)
    if (u.u[i] > u.u[argmax]) argmax = i;
  Point bias = g.position(g.multi_index(argmax));

  for (long long t = 0; t < trials; ++t) {
    SplitMix64 rng(mix_seed(seed, static_cast<std::uint64_t>(t)));
    bool use_bias = rng.uniform() < 0.25;
    ConvexBody body = random_body(rng, g, bias, use_bias);
    BodySups sups = body_sups(u, body);
    if (!sups.any_inside || !sups.any_boundary || sups.sup_boundary == kNegInf) {
      ++verdict.skipped;
      continue;
    }
    ++verdict.trials;
    double lhs = sups.sup_all;
    double rhs = A * sups.sup_boundary + eff_tol;
    bool viol = lhs > rhs;
    if (viol) {
      ++verdict.violations;
      verdict.passed = false;
    }
    if (!verdict.worst || lhs - rhs > verdict.worst->lhs - verdict.worst->rhs)
      verdict.worst = CheckWitness{body.desc, lhs, rhs};
  }
  return verdict;
}

CheckVerdict check_mean_value(const GridFunction& u, const DensityGrid& w, double B,
                              double r0_mv, long long trials, std::uint64_t seed, double tol) {
  if (!u.grid.compatible(w.grid)) throw std::invalid_argument("check_mean_value: grid mismatch");
  if (trials < 1) throw std::invalid_argument("check_mean_value: trials must be >= 1");
  CheckVerdict verdict;
  const SampleGrid& g = u.grid;
  const double half = 0.5 * g.N;
  double rmax = 0.25 * g.N;
  if (rmax <= r0_mv) throw std::invalid_argument("check_mean_value: N/4 must exceed r0_mv");
  double eff_tol = tol + (1.0 + B) * u.quad_tol();

  for (long long t = 0; t < trials; ++t) {
    SplitMix64 rng(mix_seed(seed, static_cast<std::uint64_t>(t)));
    double r = rng.uniform(r0_mv, rmax);
    Ball ball;
    ball.radius = r;
    std::array<int, kMaxDim> mi{};
    for (int i = 0; i < g.d; ++i) {
      double c = rng.uniform(-(half - r), half - r);
      mi[i] = g.cell_of(c);
      ball.center[i] = g.coord(mi[i]);
    }
    double ux = u.u[g.index(mi)];  // essential limsup surrogate: the cell sample
    double mu_b = 0.0, integral = 0.0;
    for_each_cell(g, ball, [&](std::size_t idx, double weight) {
      double cell = weight * g.cell_volume();
      mu_b += w.w[idx] * cell;
      if (u.u[idx] != kNegInf) integral += u.u[idx] * w.w[idx] * cell;
    });
    if (mu_b <= 0.0) {
      ++verdict.skipped;
      continue;
    }
    ++verdict.trials;
    double lhs = ux;
    double rhs = B * integral / mu_b + eff_tol;
    if (lhs > rhs) {
      ++verdict.violations;
      verdict.passed = false;
    }
    std::ostringstream desc;
    desc << "B((";
    for (int i = 0; i < g.d; ++i) desc << (i ? "," : "") << ball.center[i];
    desc << ")," << r << ")";
    if (!verdict.worst || lhs - rhs > verdict.worst->lhs - verdict.worst->rhs)
      verdict.worst = CheckWitness{desc.str(), lhs, rhs};
  }
  return verdict;
}

HarnackVerdict check_harnack_implies_membership(const GridFunction& u, long long trials,
                                                std::uint64_t seed, double tol) {
  HarnackVerdict out;
  const SampleGrid& g = u.grid;
  const double half = 0.5 * g.N;
  for (double v : u.u) {
    if (v < 0.0 || v == kNegInf) {
      out.applicable = false;
      return out;
    }
  }
  double c_hat = 1.0;
  for (long long t = 0; t < trials; ++t) {
    SplitMix64 rng(mix_seed(seed, static_cast<std::uint64_t>(t)));
    double rmin = 4.0 * g.cell();
    double r = std::exp(rng.uniform(std::log(rmin), std::log(0.45 * g.N)));
    Ball ball;
    ball.radius = r;
    for (int i = 0; i < g.d; ++i) ball.center[i] = rng.uniform(-(half - r), half - r);
    double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
    for_each_cell(g, ball, [&](std::size_t idx, double) {
      lo = std::min(lo, u.u[idx]);
      hi = std::max(hi, u.u[idx]);
    });
    if (!std::isfinite(lo)) continue;
    if (lo <= 0.0) {
      out.applicable = false;  // sup/inf unbounded
      return out;
    }
    c_hat = std::max(c_hat, hi / lo);
  }
  out.c_hat = c_hat;
  out.max_principle = check_weak_max(u, c_hat, trials, mix_seed(seed, 7001), tol);
  DensityGrid lebesgue = DensityGrid::uniform(g, 1.0);
  out.mean_value = check_mean_value(u, lebesgue, c_hat, 1.0, trials, mix_seed(seed, 7002), tol);
  return out;
}

CheckVerdict check_weighted_average(const GridFunction& u, const DensityGrid& w, double r0_mv,
                                    long long trials, std::uint64_t seed, double tol) {
  if (!u.grid.compatible(w.grid)) throw std::invalid_argument("check_weighted_average: grid mismatch");
  CheckVerdict verdict;
  const SampleGrid& g = u.grid;
  const double half = 0.5 * g.N;
  double rmax = 0.25 * g.N;
  double eff_tol = tol + 2.0 * u.quad_tol();

  for (long long t = 0; t < trials; ++t) {
    SplitMix64 rng(mix_seed(seed, static_cast<std::uint64_t>(t)));
    double r = rng.uniform(r0_mv, rmax);
    Ball ball;
    ball.radius = r;
    std::array<int, kMaxDim> mi{};
    for (int i = 0; i < g.d; ++i) {
      double c = rng.uniform(-(half - r), half - r);
      mi[i] = g.cell_of(c);
      ball.center[i] = g.coord(mi[i]);
    }
    double ux = u.u[g.index(mi)];
    if (ux == kNegInf) {
      ++verdict.skipped;
      continue;
    }
    double mu_b = 0.0, integral = 0.0;
    for_each_cell(g, ball, [&](std::size_t idx, double weight) {
      double cell = weight * g.cell_volume();
      mu_b += w.w[idx] * cell;
      if (u.u[idx] != kNegInf) integral += u.u[idx] * w.w[idx] * cell;
    });
    if (mu_b <= 0.0) {
      ++verdict.skipped;
      continue;
    }
    ++verdict.trials;
    double lhs = std::abs(ux - integral / mu_b);
    double rhs = eff_tol;
    if (lhs > rhs) {
      ++verdict.violations;
      verdict.passed = false;
    }
    std::ostringstream desc;
    desc << "B((";
    for (int i = 0; i < g.d; ++i) desc << (i ? "," : "") << ball.center[i];
    desc << ")," << r << ")";
    if (!verdict.worst || lhs - rhs > verdict.worst->lhs - verdict.worst->rhs)
      verdict.worst = CheckWitness{desc.str(), lhs, rhs};
  }
  return verdict;
}

TestFamily parse_family(const std::string& name) {
  if (name == "constant") return TestFamily::kConstant;
  if (name == "quadratic") return TestFamily::kQuadratic;
  if (name == "log-sin") return TestFamily::kLogSin;
  if (name == "log-poly-zeros") return TestFamily::kLogPolyZeros;
  if (name == "discrete-harmonic-extension") return TestFamily::kDiscreteHarmonic;
  if (name == "bounded-oscillation") return TestFamily::kBoundedOscillation;
  throw std::invalid_argument("unknown test-function family: " + name);
}

std::string family_name(TestFamily f) {
  switch (f) {
    case TestFamily::kConstant: return "constant";
    case TestFamily::kQuadratic: return "quadratic";
    case TestFamily::kLogSin: return "log-sin";
    case TestFamily::kLogPolyZeros: return "log-poly-zeros";
    case TestFamily::kDiscreteHarmonic: return "discrete-harmonic-extension";
    case TestFamily::kBoundedOscillation: return "bounded-oscillation";
  }
  throw std::invalid_argument("bad family");
}

namespace {

// primitive of (1/2) log(x^2 + y^2); d2G/dxdy recovers the integrand
double logdist_primitive(double x, double y) {
  double r2 = x * x + y * y;
  if (r2 == 0.0) return 0.0;
  double v = 0.5 * x * y * std::log(r2) - 1.5 * x * y;
  if (x != 0.0) v += 0.5 * x * x * std::atan(y / x);
  if (y != 0.0) v += 0.5 * y * y * std::atan(x / y);
  return v;
}

// integral of log|z - w| over the rectangle [a,b]x[c,d] in w
double boxlog_integral(double zx, double zy, double a, double b, double c, double d) {
  auto G = [&](double x, double y) { return logdist_primitive(x - zx, y - zy); };
  return G(b, d) - G(a, d) - G(b, c) + G(a, c);
}

GridFunction make_log_poly_zeros(const SampleGrid& g, const TestFunctionParams& p) {
  if (g.d != 2) throw std::invalid_argument("log-poly-zeros: d = 2 only");
  const double ox = p.zero_offset_x, oy = p.zero_offset_y;
  const int T = p.window;
  const double extent = p.extent > 0.0 ? p.extent : 0.5 * g.N + T + 1.0;

  auto raw = [&](const Point& pt) {
    double x = pt[0], y = pt[1];
    int n0 = static_cast<int>(std::ceil(std::max(x - T, -extent) - ox));
    int n1 = static_cast<int>(std::floor(std::min(x + T, extent) - ox));
    int m0 = static_cast<int>(std::ceil(std::max(y - T, -extent) - oy));
    int m1 = static_cast<int>(std::floor(std::min(y + T, extent) - oy));
    if (n0 > n1 || m0 > m1) return 0.0;
    double total = 0.0;
    bool hit_zero = false;
    for (int n = n0; n <= n1; ++n) {
      double dx = x - (n + ox);
      for (int m = m0; m <= m1; ++m) {
        double dy = y - (m + oy);
        double r2 = dx * dx + dy * dy;
        if (r2 == 0.0) {
          hit_zero = true;
          continue;
        }
        total += 0.5 * std::log(r2);
      }
    }
    if (hit_zero) return kNegInf;
    // pair every counted zero with its unit cell: subtract the smooth
    // potential of the same total mass
    total -= boxlog_integral(x, y, n0 + ox - 0.5, n1 + ox + 0.5, m0 + oy - 0.5, m1 + oy + 0.5);
    return total;
  };

  GridFunction f = GridFunction::from(g, raw);
  double scale = p.scale, shift = p.shift;
  if (p.calibrate) {
    // reference cube [0,1)^2: one positive sample per cube, scaled to +2
    double top1 = kNegInf, top2 = kNegInf;
    std::array<int, kMaxDim> mi{};
    for (int i = 0; i < g.s; ++i) {
      for (int j = 0; j < g.s; ++j) {
        mi[0] = (g.N / 2) * g.s + i;
        mi[1] = (g.N / 2) * g.s + j;
        double v = f.u[g.index(mi)];
        if (v > top1) {
          top2 = top1;
          top1 = v;
        } else if (v > top2) {
          top2 = v;
        }
      }
    }
    if (!(top1 > top2)) throw std::logic_error("log-poly-zeros calibration: degenerate top samples");
    shift = 0.5 * (top1 + top2);
    scale = 2.0 / (top1 - shift);
  }
  if (scale != 1.0 || shift != 0.0) f = f.scaled(scale, -scale * shift);
  return f;
}

GridFunction make_discrete_harmonic(const SampleGrid& g, std::uint64_t seed) {
  if (g.d != 2) throw std::invalid_argument("discrete-harmonic-extension: d = 2 only");
  int n = static_cast<int>(g.per_axis());
  std::vector<double> grid(static_cast<std::size_t>(n) * n, 0.0);
  auto at = [&](int i, int j) -> double& { return grid[static_cast<std::size_t>(i) * n + j]; };

  // smooth random boundary data: low-order trig polynomial in the boundary angle
  SplitMix64 rng(seed);
  double a[4], b[4];
  for (int k = 0; k < 4; ++k) {
    a[k] = rng.uniform(-1.0, 1.0);
    b[k] = rng.uniform(-1.0, 1.0);
  }
  auto boundary_value = [&](int i, int j) {
    double x = g.coord(i), y = g.coord(j);
    double th = std::atan2(y, x);
    double v = 0.0;
    for (int k = 0; k < 4; ++k) v += a[k] * std::cos((k + 1) * th) + b[k] * std::sin((k + 1) * th);
    return v;
  };
  for (int i = 0; i < n; ++i) {
    at(i, 0) = boundary_value(i, 0);
    at(i, n - 1) = boundary_value(i, n - 1);
    at(0, i) = boundary_value(0, i);
    at(n - 1, i) = boundary_value(n - 1, i);
  }

  // SOR on the 5-point scheme until the residual drops below 1e-8
  double omega = 2.0 / (1.0 + std::sin(M_PI / n));
  for (int iter = 0; iter < 200000; ++iter) {
    double residual = 0.0;
    for (int i = 1; i < n - 1; ++i) {
      for (int j = 1; j < n - 1; ++j) {
        double avg = 0.25 * (at(i - 1, j) + at(i + 1, j) + at(i, j - 1) + at(i, j + 1));
        double diff = avg - at(i, j);
        residual = std::max(residual, std::abs(diff));
        at(i, j) += omega * diff;
      }
    }
    if (residual < 1e-8) break;
  }

  GridFunction f;
  f.grid = g;
  f.u.resize(grid.size());
  std::array<int, kMaxDim> mi{};
  for (std::size_t idx = 0; idx < f.u.size(); ++idx) {
    f.u[idx] = at(mi[0], mi[1]);
    int axis = g.d - 1;
    while (axis >= 0) {
      if (++mi[axis] < g.per_axis()) break;
      mi[axis] = 0;
      --axis;
    }
  }
  f.refresh_stats();
  return f;
}

}  // namespace

GridFunction generate_test_function(TestFamily family, const TestFunctionParams& params,
                                    std::uint64_t seed, const SampleGrid& g) {
  switch (family) {
    case TestFamily::kConstant:
      return GridFunction::from(g, [&](const Point&) { return params.value; });
    case TestFamily::kQuadratic: {
      int d = g.d;
      return GridFunction::from(g, [d](const Point& p) {
        double r2 = 0.0;
        for (int i = 0; i < d; ++i) r2 += p[i] * p[i];
        return r2;
      });
    }
    case TestFamily::kLogSin: {
      if (g.d != 2) throw std::invalid_argument("log-sin: d = 2 only");
      return GridFunction::from(g, [](const Point& p) {
        // |sin(pi(x+iy))|^2 = sin^2(pi x) + sinh^2(pi y)
        double sx = std::sin(M_PI * p[0]);
        double sy = std::sinh(M_PI * p[1]);
        double m2 = sx * sx + sy * sy;
        return m2 == 0.0 ? kNegInf : 0.5 * std::log(m2);
      });
    }
    case TestFamily::kLogPolyZeros:
      return make_log_poly_zeros(g, params);
    case TestFamily::kDiscreteHarmonic:
      return make_discrete_harmonic(g, seed);
    case TestFamily::kBoundedOscillation:
      return GridFunction::from(
          g, [&](const Point& p) { return params.base + params.amp * std::sin(p[0]); });
  }
  throw std::invalid_argument("bad family");
}

}  // namespace osclab
