#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

namespace osclab {

inline constexpr int kMaxDim = 4;

// A basic cube is the half-open unit cube prod_j [c_j, c_j+1) addressed by its
// integer corner. Unused coordinates (axis >= d) are always zero, so array
// comparison doubles as the lexicographic tie-break order.
using BasicCube = std::array<int, kMaxDim>;

BasicCube make_cube(std::initializer_list<int> coords);

// The lattice cube Q = [-N/2, N/2]^d split into N^d basic cubes, plus the
// boundary margin that bounds every layer index k used downstream.
struct LatticeParams {
  int d = 2;
  int N = 64;
  int margin = 0;

  // margin == 0 picks the default max(1, floor(N/(100 d))).
  static LatticeParams make(int d, int N, int margin = 0);

  int half() const { return N / 2; }
  long long cube_count() const;
  // Largest layer index used by K_I and the step-function cap.
  int kmax() const { return margin; }

  bool contains(const BasicCube& c) const;
  std::size_t index(const BasicCube& c) const;
  BasicCube corner_at(std::size_t idx) const;
  // true if c stays when Q is shrunk by m basic cubes per side
  bool in_inner(const BasicCube& c, int m) const;
  long long inner_count(int m) const;
};

// Inclusive corner range: all basic cubes c with lo <= c <= hi componentwise.
struct CubeBox {
  BasicCube lo{};
  BasicCube hi{};

  // Q_radius(center): the cube of `radius` layers around a basic cube
  static CubeBox centered(const BasicCube& center, int radius);

  bool contains_cube(const BasicCube& c, int d) const;
  bool contains_box(const CubeBox& other, int d) const;
  bool disjoint(const CubeBox& other, int d) const;
  long long volume(int d) const;  // number of corners, 0 if empty
  CubeBox clipped(const LatticeParams& lat) const;
  bool inside(const LatticeParams& lat) const;
  bool empty(int d) const;
};

// Q_j(I): j concentric layers of basic cubes around I; edge 2j+1.
struct CenteredCube {
  BasicCube center{};
  int radius = 0;

  CubeBox box() const { return CubeBox::centered(center, radius); }
  long long volume(int d) const;  // (2j+1)^d
};

// A(I,k) = Q_k(I) \ Q_{k-1}(I), the k-th layer around I.
struct Annulus {
  BasicCube center{};
  int layer = 1;

  long long full_volume(int d) const;  // (2k+1)^d - (2k-1)^d
};

// Dyadic cube of order ell: prod_j [ i_j 2^ell, (i_j+1) 2^ell ).
struct DyadicCube {
  int order = 0;
  BasicCube index{};

  bool operator==(const DyadicCube&) const = default;
  bool contains(const BasicCube& cube_corner, int d) const;
  bool contains(const DyadicCube& other, int d) const;
  CubeBox corner_box(int d) const;  // corners covered, inclusive
  long long edge() const { return 1LL << order; }
};

// Unique dyadic cube of the given order containing the basic cube.
DyadicCube dyadic_hull(const BasicCube& cube, int order, int d);

// Basic cubes of A(I,k) clipped to Q; each touches the boundary of Q_k(I).
std::vector<BasicCube> boundary_cubes(const LatticeParams& lat, const BasicCube& center, int k);

// All basic cubes of Q_k(I) clipped to Q.
std::vector<BasicCube> cube_cells(const LatticeParams& lat, const BasicCube& center, int k);

// The collection E of rogue cubes with a d-dimensional prefix-sum table giving
// O(2^d) axis-aligned box counts.
class RogueSet {
 public:
  static RogueSet build(const LatticeParams& lat, std::vector<BasicCube> members);

  // #{ I in E : I inside box }. Throws std::out_of_range if the box reaches
  // outside Q. Empty boxes count 0.
  long long count_in_box(const CubeBox& box) const;
  // Same count with the box clipped to Q first (members all live in Q, so the
  // value agrees with the unclipped set count).
  long long count_in_box_clipped(const CubeBox& box) const;

  bool contains(const BasicCube& c) const;
  long long size() const { return static_cast<long long>(members_.size()); }
  const std::vector<BasicCube>& members() const { return members_; }
  const LatticeParams& lattice() const { return lat_; }

  // Text format: line 1 "d N", one line of d corner coordinates per cube.
  static RogueSet load(std::istream& in);
  void save(std::ostream& out) const;

 private:
  RogueSet(LatticeParams lat) : lat_(lat) {}

  LatticeParams lat_;
  std::vector<BasicCube> members_;
  std::vector<std::int32_t> prefix_;  // (N+1)^d summed table
  std::vector<std::uint8_t> member_flag_;

  std::size_t prefix_index(const std::array<int, kMaxDim>& p) const;
};

}  // namespace osclab
