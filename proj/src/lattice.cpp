#include "osclab/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>
#include <stdexcept>

namespace osclab {

BasicCube make_cube(std::initializer_list<int> coords) {
  BasicCube c{};
  int i = 0;
  for (int v : coords) {
    if (i >= kMaxDim) throw std::invalid_argument("make_cube: too many coordinates");
    c[i++] = v;
  }
  return c;
}

LatticeParams LatticeParams::make(int d, int N, int margin) {
  if (d < 2 || d > kMaxDim) throw std::invalid_argument("LatticeParams: d must be in [2, " + std::to_string(kMaxDim) + "]");
  if (N < 2 || N % 2 != 0) throw std::invalid_argument("LatticeParams: N must be even and >= 2");
  LatticeParams p;
  p.d = d;
  p.N = N;
  p.margin = margin > 0 ? margin : std::max(1, N / (100 * d));
  if (p.margin > N / 2) throw std::invalid_argument("LatticeParams: margin must be <= N/2");
  double count = std::pow(static_cast<double>(N), d);
  if (count > 1.5e9) throw std::invalid_argument("LatticeParams: N^d too large");
  return p;
}

long long LatticeParams::cube_count() const {
  long long c = 1;
  for (int i = 0; i < d; ++i) c *= N;
  return c;
}

bool LatticeParams::contains(const BasicCube& c) const {
  for (int i = 0; i < d; ++i)
    if (c[i] < -half() || c[i] > half() - 1) return false;
  return true;
}

std::size_t LatticeParams::index(const BasicCube& c) const {
  std::size_t idx = 0;
  for (int i = 0; i < d; ++i) idx = idx * N + static_cast<std::size_t>(c[i] + half());
  return idx;
}

BasicCube LatticeParams::corner_at(std::size_t idx) const {
  BasicCube c{};
  for (int i = d - 1; i >= 0; --i) {
    c[i] = static_cast<int>(idx % N) - half();
    idx /= N;
  }
  return c;
}

bool LatticeParams::in_inner(const BasicCube& c, int m) const {
  for (int i = 0; i < d; ++i)
    if (c[i] < -half() + m || c[i] > half() - 1 - m) return false;
  return true;
}

long long LatticeParams::inner_count(int m) const {
  long long side = N - 2LL * m;
  if (side <= 0) return 0;
  long long c = 1;
  for (int i = 0; i < d; ++i) c *= side;
  return c;
}

CubeBox CubeBox::centered(const BasicCube& center, int radius) {
  CubeBox b;
  for (int i = 0; i < kMaxDim; ++i) {
    b.lo[i] = center[i] - radius;
    b.hi[i] = center[i] + radius;
  }
  return b;
}

bool CubeBox::contains_cube(const BasicCube& c, int d) const {
  for (int i = 0; i < d; ++i)
    if (c[i] < lo[i] || c[i] > hi[i]) return false;
  return true;
}

bool CubeBox::contains_box(const CubeBox& other, int d) const {
  for (int i = 0; i < d; ++i)
    if (other.lo[i] < lo[i] || other.hi[i] > hi[i]) return false;
  return true;
}

bool CubeBox::disjoint(const CubeBox& other, int d) const {
  for (int i = 0; i < d; ++i)
    if (other.hi[i] < lo[i] || other.lo[i] > hi[i]) return true;
  return false;
}

long long CubeBox::volume(int d) const {
  long long v = 1;
  for (int i = 0; i < d; ++i) {
    long long side = static_cast<long long>(hi[i]) - lo[i] + 1;
    if (side <= 0) return 0;
    v *= side;
  }
  return v;
}

CubeBox CubeBox::clipped(const LatticeParams& lat) const {
  CubeBox b = *this;
  for (int i = 0; i < lat.d; ++i) {
    b.lo[i] = std::max(b.lo[i], -lat.half());
    b.hi[i] = std::min(b.hi[i], lat.half() - 1);
  }
  return b;
}

bool CubeBox::inside(const LatticeParams& lat) const {
  for (int i = 0; i < lat.d; ++i)
    if (lo[i] < -lat.half() || hi[i] > lat.half() - 1) return false;
  return true;
}

bool CubeBox::empty(int d) const {
  for (int i = 0; i < d; ++i)
    if (hi[i] < lo[i]) return true;
  return false;
}

long long CenteredCube::volume(int d) const {
  long long v = 1;
  for (int i = 0; i < d; ++i) v *= 2LL * radius + 1;
  return v;
}

long long Annulus::full_volume(int d) const {
  long long outer = 1, inner = 1;
  for (int i = 0; i < d; ++i) {
    outer *= 2LL * layer + 1;
    inner *= 2LL * layer - 1;
  }
  return outer - inner;
}

namespace {

inline int floor_div_pow2(int x, int order) { return x >> order; }

}  // namespace

bool DyadicCube::contains(const BasicCube& cube_corner, int d) const {
  for (int i = 0; i < d; ++i)
    if (floor_div_pow2(cube_corner[i], order) != index[i]) return false;
  return true;
}

bool DyadicCube::contains(const DyadicCube& other, int d) const {
  if (other.order > order) return false;
  int shift = order - other.order;
  for (int i = 0; i < d; ++i)
    if (floor_div_pow2(other.index[i], shift) != index[i]) return false;
  return true;
}

CubeBox DyadicCube::corner_box(int d) const {
  CubeBox b;
  for (int i = 0; i < d; ++i) {
    b.lo[i] = index[i] << order;
    b.hi[i] = ((index[i] + 1) << order) - 1;
  }
  return b;
}

DyadicCube dyadic_hull(const BasicCube& cube, int order, int d) {
  if (order < 0) throw std::invalid_argument("dyadic_hull: order must be >= 0");
  DyadicCube dc;
  dc.order = order;
  for (int i = 0; i < d; ++i) dc.index[i] = floor_div_pow2(cube[i], order);
  return dc;
}

std::vector<BasicCube> boundary_cubes(const LatticeParams& lat, const BasicCube& center, int k) {
  std::vector<BasicCube> out;
  if (k == 0) {
    if (lat.contains(center)) out.push_back(center);
    return out;
  }
  // Faces of the Chebyshev sphere of radius k. Axis a is pinned to +-k; axes
  // before a range over the open extent so each cell appears once.
  int d = lat.d;
  BasicCube cell{};
  for (int a = 0; a < d; ++a) {
    for (int side = 0; side < 2; ++side) {
      int pin = side == 0 ? -k : k;
      // extents: axes < a range over [-k+1, k-1], axes > a over [-k, k]
      std::array<int, kMaxDim> lo{}, hi{};
      bool face_empty = false;
      for (int i = 0; i < d; ++i) {
        if (i == a) {
          lo[i] = hi[i] = pin;
        } else if (i < a) {
          lo[i] = -k + 1;
          hi[i] = k - 1;
          if (lo[i] > hi[i]) face_empty = true;
        } else {
          lo[i] = -k;
          hi[i] = k;
        }
      }
      if (face_empty) continue;
      std::array<int, kMaxDim> off = lo;
      while (true) {
        bool ok = true;
        for (int i = 0; i < d; ++i) {
          cell[i] = center[i] + off[i];
          int h = lat.half();
          if (cell[i] < -h || cell[i] > h - 1) ok = false;
        }
        if (ok) out.push_back(cell);
        int axis = d - 1;
        while (axis >= 0) {
          if (++off[axis] <= hi[axis]) break;
          off[axis] = lo[axis];
          --axis;
        }
        if (axis < 0) break;
      }
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<BasicCube> cube_cells(const LatticeParams& lat, const BasicCube& center, int k) {
  CubeBox box = CubeBox::centered(center, k).clipped(lat);
  std::vector<BasicCube> out;
  if (box.empty(lat.d)) return out;
  out.reserve(static_cast<std::size_t>(box.volume(lat.d)));
  BasicCube c = box.lo;
  while (true) {
    out.push_back(c);
    int axis = lat.d - 1;
    while (axis >= 0) {
      if (++c[axis] <= box.hi[axis]) break;
      c[axis] = box.lo[axis];
      --axis;
    }
    if (axis < 0) break;
  }
  return out;
}

std::size_t RogueSet::prefix_index(const std::array<int, kMaxDim>& p) const {
  // p components in [0, N], table is (N+1)^d row-major
  std::size_t idx = 0;
  for (int i = 0; i < lat_.d; ++i) idx = idx * (lat_.N + 1) + static_cast<std::size_t>(p[i]);
  return idx;
}

RogueSet RogueSet::build(const LatticeParams& lat, std::vector<BasicCube> members) {
  RogueSet rs(lat);
  std::set<BasicCube> seen;
  for (const auto& c : members) {
    if (!lat.contains(c)) throw std::invalid_argument("RogueSet: member outside Q");
    for (int i = lat.d; i < kMaxDim; ++i)
      if (c[i] != 0) throw std::invalid_argument("RogueSet: nonzero coordinate beyond dimension");
    if (!seen.insert(c).second) throw std::invalid_argument("RogueSet: duplicate cube");
  }
  rs.members_.assign(seen.begin(), seen.end());

  std::size_t table = 1;
  for (int i = 0; i < lat.d; ++i) table *= static_cast<std::size_t>(lat.N + 1);
  rs.prefix_.assign(table, 0);
  rs.member_flag_.assign(static_cast<std::size_t>(lat.cube_count()), 0);

  for (const auto& c : rs.members_) {
    rs.member_flag_[lat.index(c)] = 1;
    std::array<int, kMaxDim> p{};
    for (int i = 0; i < lat.d; ++i) p[i] = c[i] + lat.half() + 1;
    rs.prefix_[rs.prefix_index(p)] += 1;
  }

  // one prefix pass per axis
  std::size_t n1 = static_cast<std::size_t>(lat.N + 1);
  for (int axis = 0; axis < lat.d; ++axis) {
    std::size_t stride = 1;
    for (int i = axis + 1; i < lat.d; ++i) stride *= n1;
    std::size_t block = stride * n1;
    for (std::size_t base = 0; base < table; base += block) {
      for (std::size_t inner = 0; inner < stride; ++inner) {
        std::size_t idx = base + inner;
        for (std::size_t j = 1; j < n1; ++j) rs.prefix_[idx + j * stride] += rs.prefix_[idx + (j - 1) * stride];
      }
    }
  }
  return rs;
}

long long RogueSet::count_in_box(const CubeBox& box) const {
  if (box.empty(lat_.d)) return 0;
  if (!box.inside(lat_))
    throw std::out_of_range("RogueSet::count_in_box: box outside Q");
  // inclusion-exclusion over the 2^d corners of the table query
  long long total = 0;
  int d = lat_.d;
  for (unsigned mask = 0; mask < (1u << d); ++mask) {
    std::array<int, kMaxDim> p{};
    int sign = 1;
    for (int i = 0; i < d; ++i) {
      if (mask & (1u << i)) {
        p[i] = box.lo[i] + lat_.half();  // exclusive low edge
        sign = -sign;
      } else {
        p[i] = box.hi[i] + lat_.half() + 1;
      }
    }
    total += sign * static_cast<long long>(prefix_[prefix_index(p)]);
  }
  return total;
}

long long RogueSet::count_in_box_clipped(const CubeBox& box) const {
  CubeBox b = box.clipped(lat_);
  if (b.empty(lat_.d)) return 0;
  return count_in_box(b);
}

bool RogueSet::contains(const BasicCube& c) const {
  if (!lat_.contains(c)) return false;
  return member_flag_[lat_.index(c)] != 0;
}

RogueSet RogueSet::load(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("rogue set: empty file");
  std::istringstream head(line);
  int d = 0, N = 0;
  if (!(head >> d >> N)) throw std::runtime_error("rogue set: malformed header, expected 'd N'");
  std::string extra;
  if (head >> extra) throw std::runtime_error("rogue set: trailing tokens in header");
  LatticeParams lat = LatticeParams::make(d, N);
  std::vector<BasicCube> members;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::istringstream ls(line);
    BasicCube c{};
    for (int i = 0; i < d; ++i) {
      if (!(ls >> c[i]))
        throw std::runtime_error("rogue set: line " + std::to_string(lineno) + ": expected " + std::to_string(d) + " integers");
    }
    if (ls >> extra) throw std::runtime_error("rogue set: line " + std::to_string(lineno) + ": trailing tokens");
    members.push_back(c);
  }
  return build(lat, std::move(members));
}

void RogueSet::save(std::ostream& out) const {
  out << lat_.d << ' ' << lat_.N << '\n';
  for (const auto& c : members_) {
    for (int i = 0; i < lat_.d; ++i) out << (i ? " " : "") << c[i];
    out << '\n';
  }
}

}  // namespace osclab
