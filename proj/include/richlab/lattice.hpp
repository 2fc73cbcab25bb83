#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <initializer_list>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace richlab {

/// A site of Z^d, 2 <= d <= kMaxDim.
class Point {
 public:
  static constexpr int kMaxDim = 4;

  /// Origin of Z^2.
  Point() = default;
  /// Origin of Z^dim.
  explicit Point(int dim);
  Point(std::initializer_list<std::int64_t> coords);

  static Point origin(int dim) { return Point(dim); }
  /// n * e_axis.
  static Point on_axis(int dim, std::int64_t n, int axis = 0);

  int dim() const { return dim_; }
  std::int64_t operator[](int i) const { return x_[static_cast<std::size_t>(i)]; }
  std::int64_t& operator[](int i) { return x_[static_cast<std::size_t>(i)]; }

  Point shifted(int axis, std::int64_t delta) const {
    Point p = *this;
    p.x_[static_cast<std::size_t>(axis)] += delta;
    return p;
  }

  /// max_i |x_i|
  std::int64_t linf_norm() const;
  /// max_{i >= 2} |x_i| (lateral extent relative to the first axis).
  std::int64_t lateral_norm() const;
  std::int64_t linf_distance(const Point& other) const;

  std::string to_string() const;

  friend bool operator==(const Point&, const Point&) = default;
  /// Lexicographic on coordinates; points of different dimension order by dimension.
  friend std::strong_ordering operator<=>(const Point& a, const Point& b);

 private:
  std::array<std::int64_t, kMaxDim> x_{};
  int dim_ = 2;
};

/// Canonical nearest-neighbour bond: `low` is the lexicographically smaller endpoint.
class Edge {
 public:
  /// Throws ContractViolation unless low/high are neighbours given in canonical order.
  Edge(const Point& low, const Point& high);

  const Point& low() const { return low_; }
  const Point& high() const { return high_; }
  /// The axis along which the endpoints differ.
  int axis() const { return axis_; }

  friend bool operator==(const Edge& a, const Edge& b) { return a.low_ == b.low_ && a.high_ == b.high_; }

 private:
  Point low_;
  Point high_;
  int axis_ = 0;
};

/// Order-insensitive edge constructor; throws ContractViolation if p, q are not neighbours.
Edge canonical_edge(const Point& p, const Point& q);

enum class DomainKind { Box, Tube, Slab };

/// Finite axis-aligned region of Z^d. Every kind is a hyperrectangle; sites outside
/// are never susceptible (hard walls).
class Domain {
 public:
  /// [-M, M]^d
  static Domain box(int dim, std::int64_t half_width);
  /// {x : x1 in [x1_min, x1_max], |x_i| <= b for i >= 2}
  static Domain tube(int dim, std::int64_t b, std::int64_t x1_min, std::int64_t x1_max);
  /// {x : x1 in [x1_min, x1_max], |x_i| <= W for i >= 2}; x1_min == x1_max gives a hyperplane.
  static Domain slab(int dim, std::int64_t x1_min, std::int64_t x1_max, std::int64_t lateral_half_width);

  DomainKind kind() const { return kind_; }
  int dim() const { return dim_; }
  std::int64_t lower(int axis) const { return lo_[static_cast<std::size_t>(axis)]; }
  std::int64_t upper(int axis) const { return hi_[static_cast<std::size_t>(axis)]; }
  std::int64_t volume() const { return volume_; }

  bool contains(const Point& p) const;
  /// Whether every site of this domain lies in `other`.
  bool is_subdomain_of(const Domain& other) const;
  /// Whether p touches the outer face of the hyperrectangle.
  bool on_boundary(const Point& p) const;

  /// Dense index, ordered lexicographically (x1 most significant). Requires contains(p).
  std::int64_t index(const Point& p) const {
    std::int64_t idx = 0;
    for (int i = 0; i < dim_; ++i) idx += (p[i] - lo_[static_cast<std::size_t>(i)]) * stride_[static_cast<std::size_t>(i)];
    return idx;
  }
  Point point(std::int64_t index) const;
  std::int64_t stride(int axis) const { return stride_[static_cast<std::size_t>(axis)]; }

  /// In-domain nearest neighbours of p, in axis order with the minus side first.
  /// Throws DomainError if p is outside.
  std::vector<Point> neighbors(const Point& p) const;

  /// Every site, in index order.
  std::vector<Point> sites() const;

  std::string describe() const;

  friend bool operator==(const Domain& a, const Domain& b) {
    return a.dim_ == b.dim_ && a.lo_ == b.lo_ && a.hi_ == b.hi_;
  }

 private:
  Domain(DomainKind kind, int dim, std::array<std::int64_t, Point::kMaxDim> lo,
         std::array<std::int64_t, Point::kMaxDim> hi);

  DomainKind kind_;
  int dim_;
  std::array<std::int64_t, Point::kMaxDim> lo_{};
  std::array<std::int64_t, Point::kMaxDim> hi_{};
  std::array<std::int64_t, Point::kMaxDim> stride_{};
  std::int64_t volume_ = 0;
};

/// Signed coordinate permutation: image[i] = sign[i] * p[source[i]].
class Symmetry {
 public:
  static Symmetry identity(int dim);
  static Symmetry reflect(int dim, int axis);
  static Symmetry swap(int dim, int axis_a, int axis_b);
  /// All 2^d d! signed permutations (the 8 dihedral symmetries for d = 2), identity first.
  static std::vector<Symmetry> all(int dim);

  int dim() const { return dim_; }
  Point apply(const Point& p) const;
  /// (this * other)(p) = this(other(p)).
  Symmetry compose(const Symmetry& other) const;
  Symmetry inverse() const;
  bool is_identity() const;

 private:
  Symmetry(int dim, std::array<int, Point::kMaxDim> source, std::array<int, Point::kMaxDim> sign);

  int dim_;
  std::array<int, Point::kMaxDim> source_{};
  std::array<int, Point::kMaxDim> sign_{};
};

inline Point apply_symmetry(const Point& p, const Symmetry& g) { return g.apply(p); }

/// Non-negative rational used for cone slopes.
struct Rational {
  std::int64_t num = 0;
  std::int64_t den = 1;

  friend bool operator==(const Rational&, const Rational&) = default;
};

enum class RegionKind { Origin, Hyperplane, HalfAxis, Cone, Explicit, Empty };

/// Declarative description of a seed set. The infinite sets are truncated:
///   Hyperplane(W): {x : x1 = 0, 0 < max_{i>=2} |x_i| <= W}
///   HalfAxis(L):   {(-k, 0, ..., 0) : 1 <= k <= L}
///   Cone(s, L):    {x : -L <= x1 <= -1, max_{i>=2} |x_i| <= s |x1|}
struct RegionSpec {
  RegionKind kind = RegionKind::Empty;
  std::int64_t width = 0;   // W
  std::int64_t depth = 0;   // L
  Rational slope;           // s
  std::vector<Point> points;

  static RegionSpec origin() { return {RegionKind::Origin}; }
  static RegionSpec hyperplane(std::int64_t w);
  static RegionSpec half_axis(std::int64_t l);
  static RegionSpec cone(Rational s, std::int64_t l);
  static RegionSpec explicit_points(std::vector<Point> pts);
  static RegionSpec empty() { return {RegionKind::Empty}; }

  /// Membership predicate of the (truncated) set.
  bool contains(const Point& p) const;
  /// Largest |coordinate| of any member; 0 for origin/empty.
  std::int64_t extent() const;
  /// Truncation extent for the infinite families, 0 for origin/explicit/empty.
  std::int64_t truncation() const;

  friend bool operator==(const RegionSpec&, const RegionSpec&) = default;
};

/// Parses `origin`, `hyperplane:W=<int>`, `halfaxis:L=<int>`, `cone:s=<rational>,L=<int>`,
/// `explicit:[(x1,..,xd);...]`, `empty`. Throws ConfigError with the offending position.
RegionSpec parse_region(std::string_view text);
std::string format_region(const RegionSpec& region);

/// Members of the region in Z^dim, duplicate-free, in the region's natural order.
std::vector<Point> enumerate_region(const RegionSpec& region, int dim);

struct SeedConfig {
  int dim = 2;
  RegionSpec type1;
  RegionSpec type2 = RegionSpec::origin();

  /// I(H): type 1 on the truncated hyperplane minus the origin, type 2 at the origin.
  static SeedConfig hyperplane(int dim, std::int64_t w) { return {dim, RegionSpec::hyperplane(w), RegionSpec::origin()}; }
  /// I(L): type 1 on the truncated negative half-axis, type 2 at the origin.
  static SeedConfig half_axis(int dim, std::int64_t l) { return {dim, RegionSpec::half_axis(l), RegionSpec::origin()}; }

  friend bool operator==(const SeedConfig&, const SeedConfig&) = default;
};

struct SeedLists {
  std::vector<Point> type1;
  std::vector<Point> type2;
};

/// Throws ConfigError when the two seed sets overlap.
SeedLists enumerate_seeds(const SeedConfig& cfg);

}  // namespace richlab
