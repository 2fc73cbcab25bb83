#include "richlab/lattice.hpp"

#include <algorithm>
#include <charconv>
#include <numeric>
#include <set>
#include <sstream>

#include "richlab/error.hpp"

namespace richlab {

namespace {

void check_dim(int dim) {
  if (dim < 2 || dim > Point::kMaxDim) {
    throw ContractViolation("dimension must be in [2, " + std::to_string(Point::kMaxDim) + "], got " +
                            std::to_string(dim));
  }
}

std::int64_t abs64(std::int64_t v) { return v < 0 ? -v : v; }

}  // namespace

// ---------------------------------------------------------------- Point

Point::Point(int dim) : dim_(dim) { check_dim(dim); }

Point::Point(std::initializer_list<std::int64_t> coords) : dim_(static_cast<int>(coords.size())) {
  check_dim(dim_);
  std::copy(coords.begin(), coords.end(), x_.begin());
}

Point Point::on_axis(int dim, std::int64_t n, int axis) {
  Point p(dim);
  p[axis] = n;
  return p;
}

std::int64_t Point::linf_norm() const {
  std::int64_t m = 0;
  for (int i = 0; i < dim_; ++i) m = std::max(m, abs64((*this)[i]));
  return m;
}

std::int64_t Point::lateral_norm() const {
  std::int64_t m = 0;
  for (int i = 1; i < dim_; ++i) m = std::max(m, abs64((*this)[i]));
  return m;
}

std::int64_t Point::linf_distance(const Point& other) const {
  std::int64_t m = 0;
  for (int i = 0; i < dim_; ++i) m = std::max(m, abs64((*this)[i] - other[i]));
  return m;
}

std::string Point::to_string() const {
  std::string s = "(";
  for (int i = 0; i < dim_; ++i) {
    if (i) s += ',';
    s += std::to_string((*this)[i]);
  }
  return s + ")";
}

std::strong_ordering operator<=>(const Point& a, const Point& b) {
  if (auto c = a.dim_ <=> b.dim_; c != 0) return c;
  for (int i = 0; i < a.dim_; ++i) {
    if (auto c = a[i] <=> b[i]; c != 0) return c;
  }
  return std::strong_ordering::equal;
}

// ---------------------------------------------------------------- Edge

Edge::Edge(const Point& low, const Point& high) : low_(low), high_(high) {
  if (low.dim() != high.dim()) throw ContractViolation("edge endpoints differ in dimension");
  int axis = -1;
  for (int i = 0; i < low.dim(); ++i) {
    const auto diff = high[i] - low[i];
    if (diff == 0) continue;
    if (diff != 1 || axis != -1) {
      throw ContractViolation("not a canonical nearest-neighbour edge: " + low.to_string() + " -> " +
                              high.to_string());
    }
    axis = i;
  }
  if (axis == -1) throw ContractViolation("degenerate edge at " + low.to_string());
  axis_ = axis;
}

Edge canonical_edge(const Point& p, const Point& q) { return p < q ? Edge(p, q) : Edge(q, p); }

// ---------------------------------------------------------------- Domain

Domain::Domain(DomainKind kind, int dim, std::array<std::int64_t, Point::kMaxDim> lo,
               std::array<std::int64_t, Point::kMaxDim> hi)
    : kind_(kind), dim_(dim), lo_(lo), hi_(hi) {
  check_dim(dim);
  std::int64_t stride = 1;
  for (int i = dim - 1; i >= 0; --i) {
    const auto a = static_cast<std::size_t>(i);
    if (hi_[a] < lo_[a]) throw ConfigError("empty domain along axis " + std::to_string(i + 1));
    stride_[a] = stride;
    stride *= hi_[a] - lo_[a] + 1;
  }
  volume_ = stride;
}

Domain Domain::box(int dim, std::int64_t half_width) {
  if (half_width < 0) throw ConfigError("box half-width must be >= 0");
  std::array<std::int64_t, Point::kMaxDim> lo{}, hi{};
  for (int i = 0; i < dim && i < Point::kMaxDim; ++i) {
    lo[static_cast<std::size_t>(i)] = -half_width;
    hi[static_cast<std::size_t>(i)] = half_width;
  }
  return Domain(DomainKind::Box, dim, lo, hi);
}

Domain Domain::tube(int dim, std::int64_t b, std::int64_t x1_min, std::int64_t x1_max) {
  if (b < 0) throw ConfigError("tube radius b must be >= 0");
  Domain d = slab(dim, x1_min, x1_max, b);
  d.kind_ = DomainKind::Tube;
  return d;
}

Domain Domain::slab(int dim, std::int64_t x1_min, std::int64_t x1_max, std::int64_t lateral_half_width) {
  if (lateral_half_width < 0) throw ConfigError("slab lateral half-width must be >= 0");
  std::array<std::int64_t, Point::kMaxDim> lo{}, hi{};
  lo[0] = x1_min;
  hi[0] = x1_max;
  for (int i = 1; i < dim && i < Point::kMaxDim; ++i) {
    lo[static_cast<std::size_t>(i)] = -lateral_half_width;
    hi[static_cast<std::size_t>(i)] = lateral_half_width;
  }
  return Domain(DomainKind::Slab, dim, lo, hi);
}

bool Domain::contains(const Point& p) const {
  if (p.dim() != dim_) return false;
  for (int i = 0; i < dim_; ++i) {
    const auto a = static_cast<std::size_t>(i);
    if (p[i] < lo_[a] || p[i] > hi_[a]) return false;
  }
  return true;
}

bool Domain::is_subdomain_of(const Domain& other) const {
  if (other.dim_ != dim_) return false;
  for (std::size_t a = 0; a < static_cast<std::size_t>(dim_); ++a) {
    if (lo_[a] < other.lo_[a] || hi_[a] > other.hi_[a]) return false;
  }
  return true;
}

bool Domain::on_boundary(const Point& p) const {
  for (int i = 0; i < dim_; ++i) {
    const auto a = static_cast<std::size_t>(i);
    if (p[i] == lo_[a] || p[i] == hi_[a]) return true;
  }
  return false;
}

Point Domain::point(std::int64_t index) const {
  Point p(dim_);
  for (int i = 0; i < dim_; ++i) {
    const auto a = static_cast<std::size_t>(i);
    p[i] = lo_[a] + index / stride_[a];
    index %= stride_[a];
  }
  return p;
}

std::vector<Point> Domain::neighbors(const Point& p) const {
  if (!contains(p)) throw DomainError("point " + p.to_string() + " outside domain " + describe());
  std::vector<Point> out;
  out.reserve(static_cast<std::size_t>(2 * dim_));
  for (int i = 0; i < dim_; ++i) {
    const auto a = static_cast<std::size_t>(i);
    if (p[i] > lo_[a]) out.push_back(p.shifted(i, -1));
    if (p[i] < hi_[a]) out.push_back(p.shifted(i, +1));
  }
  return out;
}

std::vector<Point> Domain::sites() const {
  std::vector<Point> out;
  out.reserve(static_cast<std::size_t>(volume_));
  for (std::int64_t i = 0; i < volume_; ++i) out.push_back(point(i));
  return out;
}

std::string Domain::describe() const {
  std::ostringstream os;
  switch (kind_) {
    case DomainKind::Box: os << "box(d=" << dim_ << ",M=" << hi_[0] << ")"; break;
    case DomainKind::Tube: os << "tube(d=" << dim_ << ",b=" << hi_[1] << ",x1=[" << lo_[0] << "," << hi_[0] << "])"; break;
    case DomainKind::Slab: os << "slab(d=" << dim_ << ",x1=[" << lo_[0] << "," << hi_[0] << "],W=" << hi_[1] << ")"; break;
  }
  return os.str();
}

// ---------------------------------------------------------------- Symmetry

Symmetry::Symmetry(int dim, std::array<int, Point::kMaxDim> source, std::array<int, Point::kMaxDim> sign)
    : dim_(dim), source_(source), sign_(sign) {}

Symmetry Symmetry::identity(int dim) {
  check_dim(dim);
  std::array<int, Point::kMaxDim> src{}, sgn{};
  for (int i = 0; i < Point::kMaxDim; ++i) {
    src[static_cast<std::size_t>(i)] = i;
    sgn[static_cast<std::size_t>(i)] = 1;
  }
  return Symmetry(dim, src, sgn);
}

Symmetry Symmetry::reflect(int dim, int axis) {
  Symmetry g = identity(dim);
  g.sign_[static_cast<std::size_t>(axis)] = -1;
  return g;
}

Symmetry Symmetry::swap(int dim, int axis_a, int axis_b) {
  Symmetry g = identity(dim);
  std::swap(g.source_[static_cast<std::size_t>(axis_a)], g.source_[static_cast<std::size_t>(axis_b)]);
  return g;
}

std::vector<Symmetry> Symmetry::all(int dim) {
  check_dim(dim);
  std::vector<int> perm(static_cast<std::size_t>(dim));
  std::iota(perm.begin(), perm.end(), 0);
  std::vector<Symmetry> out;
  do {
    for (unsigned mask = 0; mask < (1u << dim); ++mask) {
      Symmetry g = identity(dim);
      for (int i = 0; i < dim; ++i) {
        g.source_[static_cast<std::size_t>(i)] = perm[static_cast<std::size_t>(i)];
        g.sign_[static_cast<std::size_t>(i)] = (mask >> i) & 1u ? -1 : 1;
      }
      out.push_back(g);
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  return out;
}

Point Symmetry::apply(const Point& p) const {
  if (p.dim() != dim_) throw ContractViolation("symmetry dimension mismatch");
  Point q(dim_);
  for (int i = 0; i < dim_; ++i) {
    const auto a = static_cast<std::size_t>(i);
    q[i] = sign_[a] * p[source_[a]];
  }
  return q;
}

Symmetry Symmetry::compose(const Symmetry& other) const {
  // this(other(p))[i] = sign[i] * other(p)[src[i]] = sign[i] * other.sign[src[i]] * p[other.src[src[i]]]
  Symmetry g = identity(dim_);
  for (int i = 0; i < dim_; ++i) {
    const auto a = static_cast<std::size_t>(i);
    const auto s = static_cast<std::size_t>(source_[a]);
    g.source_[a] = other.source_[s];
    g.sign_[a] = sign_[a] * other.sign_[s];
  }
  return g;
}

Symmetry Symmetry::inverse() const {
  Symmetry g = identity(dim_);
  for (int i = 0; i < dim_; ++i) {
    const auto a = static_cast<std::size_t>(i);
    const auto s = static_cast<std::size_t>(source_[a]);
    g.source_[s] = i;
    g.sign_[s] = sign_[a];
  }
  return g;
}

bool Symmetry::is_identity() const {
  for (int i = 0; i < dim_; ++i) {
    const auto a = static_cast<std::size_t>(i);
    if (source_[a] != i || sign_[a] != 1) return false;
  }
  return true;
}

// ---------------------------------------------------------------- RegionSpec

RegionSpec RegionSpec::hyperplane(std::int64_t w) {
  if (w < 0) throw ConfigError("hyperplane width W must be >= 0");
  RegionSpec r{RegionKind::Hyperplane};
  r.width = w;
  return r;
}

RegionSpec RegionSpec::half_axis(std::int64_t l) {
  if (l < 0) throw ConfigError("half-axis depth L must be >= 0");
  RegionSpec r{RegionKind::HalfAxis};
  r.depth = l;
  return r;
}

RegionSpec RegionSpec::cone(Rational s, std::int64_t l) {
  if (l < 0) throw ConfigError("cone depth L must be >= 0");
  if (s.den <= 0 || s.num < 0) throw ConfigError("cone slope must be a non-negative rational with positive denominator");
  const auto g = std::gcd(s.num, s.den);
  if (g > 1) {
    s.num /= g;
    s.den /= g;
  }
  RegionSpec r{RegionKind::Cone};
  r.slope = s;
  r.depth = l;
  return r;
}

RegionSpec RegionSpec::explicit_points(std::vector<Point> pts) {
  RegionSpec r{RegionKind::Explicit};
  r.points = std::move(pts);
  return r;
}

bool RegionSpec::contains(const Point& p) const {
  switch (kind) {
    case RegionKind::Origin: return p.linf_norm() == 0;
    case RegionKind::Hyperplane: {
      const auto lat = p.lateral_norm();
      return p[0] == 0 && lat > 0 && lat <= width;
    }
    case RegionKind::HalfAxis: return p.lateral_norm() == 0 && p[0] <= -1 && p[0] >= -depth;
    case RegionKind::Cone:
      return p[0] <= -1 && p[0] >= -depth && p.lateral_norm() * slope.den <= slope.num * (-p[0]);
    case RegionKind::Explicit: return std::find(points.begin(), points.end(), p) != points.end();
    case RegionKind::Empty: return false;
  }
  return false;
}

std::int64_t RegionSpec::extent() const {
  switch (kind) {
    case RegionKind::Origin:
    case RegionKind::Empty: return 0;
    case RegionKind::Hyperplane: return width;
    case RegionKind::HalfAxis: return depth;
    case RegionKind::Cone: return std::max(depth, slope.num * depth / slope.den);
    case RegionKind::Explicit: {
      std::int64_t m = 0;
      for (const auto& p : points) m = std::max(m, p.linf_norm());
      return m;
    }
  }
  return 0;
}

std::int64_t RegionSpec::truncation() const {
  switch (kind) {
    case RegionKind::Hyperplane:
    case RegionKind::HalfAxis:
    case RegionKind::Cone: return extent();
    default: return 0;
  }
}

namespace {

class RegionParser {
 public:
  explicit RegionParser(std::string_view text) : text_(text) {}

  [[noreturn]] void fail(const std::string& what) const {
    throw ConfigError("region '" + std::string(text_) + "' at column " + std::to_string(pos_ + 1) + ": " + what);
  }

  bool eat(std::string_view token) {
    if (text_.substr(pos_, token.size()) == token) {
      pos_ += token.size();
      return true;
    }
    return false;
  }
  void expect(std::string_view token) {
    if (!eat(token)) fail("expected '" + std::string(token) + "'");
  }
  bool done() const { return pos_ == text_.size(); }

  std::int64_t integer() {
    std::int64_t v = 0;
    const char* begin = text_.data() + pos_;
    const char* end = text_.data() + text_.size();
    auto [ptr, ec] = std::from_chars(begin, end, v);
    if (ec != std::errc() || ptr == begin) fail("expected an integer");
    pos_ += static_cast<std::size_t>(ptr - begin);
    return v;
  }

  RegionSpec parse() {
    RegionSpec r;
    if (eat("origin")) {
      r = RegionSpec::origin();
    } else if (eat("empty")) {
      r = RegionSpec::empty();
    } else if (eat("hyperplane:")) {
      expect("W=");
      r = RegionSpec::hyperplane(nonneg());
    } else if (eat("halfaxis:")) {
      expect("L=");
      r = RegionSpec::half_axis(nonneg());
    } else if (eat("cone:")) {
      expect("s=");
      Rational s{nonneg(), 1};
      if (eat("/")) {
        s.den = integer();
        if (s.den <= 0) fail("slope denominator must be positive");
      }
      expect(",L=");
      r = RegionSpec::cone(s, nonneg());
    } else if (eat("explicit:")) {
      r = RegionSpec::explicit_points(point_list());
    } else {
      fail("unknown region kind");
    }
    if (!done()) fail("trailing characters");
    return r;
  }

 private:
  std::int64_t nonneg() {
    const auto v = integer();
    if (v < 0) fail("value must be >= 0");
    return v;
  }

  std::vector<Point> point_list() {
    expect("[");
    std::vector<Point> pts;
    if (eat("]")) return pts;
    int dim = -1;
    do {
      expect("(");
      std::vector<std::int64_t> c{integer()};
      while (eat(",")) c.push_back(integer());
      expect(")");
      if (c.size() < 2 || c.size() > static_cast<std::size_t>(Point::kMaxDim)) fail("point dimension out of range");
      if (dim == -1) dim = static_cast<int>(c.size());
      if (dim != static_cast<int>(c.size())) fail("mixed point dimensions");
      Point p(dim);
      for (int i = 0; i < dim; ++i) p[i] = c[static_cast<std::size_t>(i)];
      pts.push_back(p);
    } while (eat(";"));
    expect("]");
    return pts;
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

}  // namespace

RegionSpec parse_region(std::string_view text) { return RegionParser(text).parse(); }

std::string format_region(const RegionSpec& region) {
  switch (region.kind) {
    case RegionKind::Origin: return "origin";
    case RegionKind::Empty: return "empty";
    case RegionKind::Hyperplane: return "hyperplane:W=" + std::to_string(region.width);
    case RegionKind::HalfAxis: return "halfaxis:L=" + std::to_string(region.depth);
    case RegionKind::Cone: {
      std::string s = "cone:s=" + std::to_string(region.slope.num);
      if (region.slope.den != 1) s += "/" + std::to_string(region.slope.den);
      return s + ",L=" + std::to_string(region.depth);
    }
    case RegionKind::Explicit: {
      std::string s = "explicit:[";
      for (std::size_t i = 0; i < region.points.size(); ++i) {
        if (i) s += ';';
        s += region.points[i].to_string();
      }
      return s + "]";
    }
  }
  return {};
}

namespace {

// All lateral offsets (x_2..x_d) with max |x_i| <= w, lexicographic.
void lateral_offsets(int dim, std::int64_t w, std::vector<Point>& out, std::int64_t x1) {
  Point p(dim);
  p[0] = x1;
  for (int i = 1; i < dim; ++i) p[i] = -w;
  while (true) {
    out.push_back(p);
    int i = dim - 1;
    while (i >= 1 && p[i] == w) {
      p[i] = -w;
      --i;
    }
    if (i < 1) break;
    ++p[i];
  }
}

}  // namespace

std::vector<Point> enumerate_region(const RegionSpec& region, int dim) {
  check_dim(dim);
  std::vector<Point> out;
  switch (region.kind) {
    case RegionKind::Origin: out.push_back(Point::origin(dim)); break;
    case RegionKind::Empty: break;
    case RegionKind::Hyperplane: {
      std::vector<Point> all;
      lateral_offsets(dim, region.width, all, 0);
      for (const auto& p : all) {
        if (p.lateral_norm() > 0) out.push_back(p);
      }
      break;
    }
    case RegionKind::HalfAxis:
      for (std::int64_t k = 1; k <= region.depth; ++k) out.push_back(Point::on_axis(dim, -k));
      break;
    case RegionKind::Cone:
      for (std::int64_t k = region.depth; k >= 1; --k) {
        lateral_offsets(dim, region.slope.num * k / region.slope.den, out, -k);
      }
      break;
    case RegionKind::Explicit: {
      std::set<Point> seen;
      for (const auto& p : region.points) {
        if (p.dim() != dim) throw ConfigError("explicit point " + p.to_string() + " has wrong dimension");
        if (seen.insert(p).second) out.push_back(p);
      }
      break;
    }
  }
  return out;
}

SeedLists enumerate_seeds(const SeedConfig& cfg) {
  SeedLists s{enumerate_region(cfg.type1, cfg.dim), enumerate_region(cfg.type2, cfg.dim)};
  std::set<Point> type1(s.type1.begin(), s.type1.end());
  for (const auto& p : s.type2) {
    if (type1.count(p)) throw ConfigError("type 1 and type 2 seeds overlap at " + p.to_string());
  }
  return s;
}

}  // namespace richlab
