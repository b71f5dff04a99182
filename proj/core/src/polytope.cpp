#include "toricq/polytope.hpp"

#include <algorithm>
#include <map>
#include <sstream>
#include <utility>

#include "toricq/errors.hpp"

namespace toricq {

bool HalfSpace::is_zero_normal() const {
  return std::all_of(normal.begin(), normal.end(), [](const Rational& q) { return q == 0; });
}

HPolyhedron::HPolyhedron(std::size_t dim, std::vector<HalfSpace> facets)
    : dim_(dim), facets_(std::move(facets)) {
  for (const auto& f : facets_)
    if (f.normal.size() != dim_) throw InputError("half-space normal has wrong dimension");
}

bool HPolyhedron::contains(const RationalVector& x) const {
  return std::all_of(facets_.begin(), facets_.end(), [&](const HalfSpace& f) { return f.evaluate(x) >= 0; });
}

DelzantPolytope::DelzantPolytope(std::size_t dim, std::vector<Facet> facets, std::string name)
    : dim_(dim), facets_(std::move(facets)), name_(std::move(name)) {
  if (dim_ == 0) throw InputError("polytope dimension must be positive", "dim");
  if (facets_.empty()) throw InputError("polytope needs at least one facet", "facets");
  for (std::size_t r = 0; r < facets_.size(); ++r) {
    const auto& nu = facets_[r].normal;
    if (nu.size() != dim_)
      throw InputError("facet " + std::to_string(r) + " normal has length " + std::to_string(nu.size()) +
                           ", expected " + std::to_string(dim_),
                       "facets[" + std::to_string(r) + "].normal");
    if (std::all_of(nu.begin(), nu.end(), [](auto v) { return v == 0; }))
      throw InputError("facet " + std::to_string(r) + " has a zero normal", "facets[" + std::to_string(r) + "].normal");
  }
}

Rational DelzantPolytope::facet_value(std::size_t r, const RationalVector& x) const {
  return dot(facets_.at(r).normal, x) + facets_[r].offset;
}

Rational DelzantPolytope::facet_value(std::size_t r, const IntVector& m) const {
  const auto& nu = facets_.at(r).normal;
  std::int64_t s = 0;
  for (std::size_t j = 0; j < dim_; ++j) s += nu[j] * m.at(j);
  return Rational(s) + facets_[r].offset;
}

bool DelzantPolytope::contains(const IntVector& m) const {
  for (std::size_t r = 0; r < facets_.size(); ++r)
    if (facet_value(r, m) < 0) return false;
  return true;
}

HPolyhedron DelzantPolytope::as_polyhedron() const {
  std::vector<HalfSpace> hs;
  hs.reserve(facets_.size());
  for (const auto& f : facets_) hs.push_back({to_rational(f.normal), f.offset});
  return HPolyhedron(dim_, std::move(hs));
}

namespace {

// Visit every k-subset of {0..n-1} in lexicographic order.
template <typename Fn>
void for_each_subset(std::size_t n, std::size_t k, Fn&& fn) {
  if (k > n) return;
  std::vector<std::size_t> idx(k);
  for (std::size_t i = 0; i < k; ++i) idx[i] = i;
  while (true) {
    fn(idx);
    if (k == 0) return;
    std::size_t i = k;
    while (i > 0 && idx[i - 1] == n - k + i - 1) --i;
    if (i == 0) return;
    ++idx[i - 1];
    for (std::size_t j = i; j < k; ++j) idx[j] = idx[j - 1] + 1;
  }
}

std::vector<std::size_t> active_set(const HPolyhedron& poly, const RationalVector& x) {
  std::vector<std::size_t> active;
  for (std::size_t r = 0; r < poly.facets().size(); ++r)
    if (!poly.facets()[r].is_zero_normal() && poly.facets()[r].evaluate(x) == 0) active.push_back(r);
  return active;
}

std::size_t affine_rank(const std::vector<RationalVector>& points) {
  if (points.size() < 2) return 0;
  const std::size_t n = points.front().size();
  RationalMatrix diffs(points.size() - 1, n);
  for (std::size_t i = 1; i < points.size(); ++i)
    for (std::size_t j = 0; j < n; ++j) diffs(i - 1, j) = points[i][j] - points[0][j];
  return rank(std::move(diffs));
}

struct FmRow {
  RationalVector a;
  Rational b;
  bool strict;
};

// Normalize so the first nonzero coefficient has magnitude one (positive scaling only).
void normalize(FmRow& row) {
  for (const auto& v : row.a) {
    if (v != 0) {
      Rational scale = v > 0 ? v : Rational(-v);
      for (auto& w : row.a) w /= scale;
      row.b /= scale;
      return;
    }
  }
  if (row.b != 0) row.b = row.b > 0 ? Rational(1) : Rational(-1);
}

bool fourier_motzkin(std::vector<FmRow> rows, std::size_t dim) {
  for (std::size_t k = 0; k < dim; ++k) {
    std::vector<FmRow> pos, neg, next;
    for (auto& r : rows) {
      if (r.a[k] > 0)
        pos.push_back(std::move(r));
      else if (r.a[k] < 0)
        neg.push_back(std::move(r));
      else
        next.push_back(std::move(r));
    }
    for (const auto& p : pos)
      for (const auto& q : neg) {
        FmRow c{RationalVector(dim), 0, p.strict || q.strict};
        Rational wp = -q.a[k], wq = p.a[k];
        for (std::size_t j = 0; j < dim; ++j) c.a[j] = wp * p.a[j] + wq * q.a[j];
        c.a[k] = 0;
        c.b = wp * p.b + wq * q.b;
        next.push_back(std::move(c));
      }
    for (auto& r : next) normalize(r);
    std::map<std::pair<RationalVector, Rational>, std::size_t> seen;
    std::vector<FmRow> unique;
    for (auto& r : next) {
      auto [it, inserted] = seen.emplace(std::make_pair(r.a, r.b), unique.size());
      if (!inserted) {
        unique[it->second].strict = unique[it->second].strict || r.strict;
        continue;
      }
      unique.push_back(std::move(r));
    }
    rows = std::move(unique);
    for (const auto& r : rows) {
      bool constant = std::all_of(r.a.begin(), r.a.end(), [](const Rational& v) { return v == 0; });
      if (constant && (r.b < 0 || (r.strict && r.b == 0))) return false;
    }
  }
  for (const auto& r : rows)
    if (r.b < 0 || (r.strict && r.b == 0)) return false;
  return true;
}

}  // namespace

std::vector<Vertex> enumerate_vertices(const HPolyhedron& poly) {
  const std::size_t n = poly.dim();
  const auto& fs = poly.facets();
  std::vector<Vertex> out;
  if (n == 0) {
    if (poly.contains({})) out.push_back({{}, {}});
    return out;
  }
  std::vector<std::size_t> usable;
  for (std::size_t r = 0; r < fs.size(); ++r)
    if (!fs[r].is_zero_normal()) usable.push_back(r);
  std::map<RationalVector, std::size_t> seen;
  for_each_subset(usable.size(), n, [&](const std::vector<std::size_t>& subset) {
    RationalMatrix a(n, n);
    RationalVector rhs(n);
    for (std::size_t i = 0; i < n; ++i) {
      const auto& f = fs[usable[subset[i]]];
      for (std::size_t j = 0; j < n; ++j) a(i, j) = f.normal[j];
      rhs[i] = -f.offset;
    }
    auto x = solve(std::move(a), std::move(rhs));
    if (!x || !poly.contains(*x) || seen.count(*x)) return;
    seen.emplace(*x, out.size());
    out.push_back({*x, active_set(poly, *x)});
  });
  std::sort(out.begin(), out.end(), [](const Vertex& a, const Vertex& b) { return a.point < b.point; });
  return out;
}

std::vector<Vertex> enumerate_vertices(const DelzantPolytope& poly) {
  return enumerate_vertices(poly.as_polyhedron());
}

bool is_bounded(const HPolyhedron& poly) {
  const std::size_t n = poly.dim();
  std::vector<RationalVector> normals;
  for (const auto& f : poly.facets())
    if (!f.is_zero_normal()) normals.push_back(f.normal);
  if (n == 0) return true;
  if (normals.empty() || rank(RationalMatrix::from_rows(normals)) < n) return false;
  bool bounded = true;
  for_each_subset(normals.size(), n - 1, [&](const std::vector<std::size_t>& subset) {
    if (!bounded) return;
    RationalMatrix a(n - 1, n);
    for (std::size_t i = 0; i < n - 1; ++i)
      for (std::size_t j = 0; j < n; ++j) a(i, j) = normals[subset[i]][j];
    auto ns = null_space(std::move(a));
    if (ns.size() != 1) return;
    for (int sign : {1, -1}) {
      RationalVector d = ns.front();
      if (sign < 0)
        for (auto& v : d) v = -v;
      bool in_cone = std::all_of(normals.begin(), normals.end(), [&](const RationalVector& nu) { return dot(nu, d) >= 0; });
      if (in_cone) bounded = false;
    }
  });
  return bounded;
}

bool is_feasible(const HPolyhedron& poly) {
  std::vector<FmRow> rows;
  for (const auto& f : poly.facets()) rows.push_back({f.normal, f.offset, false});
  return fourier_motzkin(std::move(rows), poly.dim());
}

bool has_interior(const HPolyhedron& poly) {
  std::vector<FmRow> rows;
  for (const auto& f : poly.facets()) rows.push_back({f.normal, f.offset, !f.is_zero_normal()});
  return fourier_motzkin(std::move(rows), poly.dim());
}

std::optional<RationalVector> vertex_barycenter(const HPolyhedron& poly) {
  auto verts = enumerate_vertices(poly);
  if (verts.empty()) return std::nullopt;
  RationalVector c(poly.dim());
  for (const auto& v : verts)
    for (std::size_t j = 0; j < c.size(); ++j) c[j] += v.point[j];
  for (auto& x : c) x /= Rational(static_cast<long long>(verts.size()));
  return c;
}

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::ok: return "ok";
    case Verdict::not_delzant: return "not_delzant";
    case Verdict::redundant_facets: return "redundant_facets";
    case Verdict::non_primitive: return "non_primitive";
    case Verdict::unbounded: return "unbounded";
    case Verdict::empty: return "empty";
  }
  return "unknown";
}

ValidationReport validate_delzant(const DelzantPolytope& poly) {
  ValidationReport report;
  const std::size_t n = poly.dim();
  for (std::size_t r = 0; r < poly.facet_count(); ++r) {
    auto g = gcd_of(poly.facets()[r].normal);
    if (g != 1 && g != -1) report.non_primitive.push_back(r);
  }
  const HPolyhedron hp = poly.as_polyhedron();
  if (!is_feasible(hp)) {
    report.verdict = Verdict::empty;
    return report;
  }
  if (!is_bounded(hp)) {
    report.verdict = Verdict::unbounded;
    return report;
  }
  if (!has_interior(hp)) {
    report.verdict = Verdict::empty;
    return report;
  }

  auto verts = enumerate_vertices(hp);
  bool all_delzant = true;
  for (const auto& v : verts) {
    VertexReport vr{v.point, v.active, 0, false};
    if (v.active.size() == n) {
      std::vector<IntVector> rows;
      for (auto r : v.active) rows.push_back(poly.facets()[r].normal);
      Rational det = determinant(RationalMatrix::from_rows(rows));
      vr.determinant = boost::multiprecision::numerator(det);
      vr.delzant = vr.determinant == 1 || vr.determinant == -1;
    }
    all_delzant = all_delzant && vr.delzant;
    report.vertices.push_back(std::move(vr));
  }

  // A facet is essential iff the vertices on it span a hyperplane; among facets
  // cutting out the same face only the first is kept.
  std::vector<std::vector<std::size_t>> facet_vertices(poly.facet_count());
  for (std::size_t i = 0; i < verts.size(); ++i)
    for (auto r : verts[i].active) facet_vertices[r].push_back(i);
  std::map<std::vector<std::size_t>, std::size_t> owner;
  for (std::size_t r = 0; r < poly.facet_count(); ++r) {
    std::vector<RationalVector> pts;
    for (auto i : facet_vertices[r]) pts.push_back(verts[i].point);
    bool essential = pts.size() >= n && affine_rank(pts) + 1 == n;
    if (essential && !owner.emplace(facet_vertices[r], r).second) essential = false;
    if (!essential) report.redundant.push_back(r);
  }

  if (!report.non_primitive.empty())
    report.verdict = Verdict::non_primitive;
  else if (!report.redundant.empty())
    report.verdict = Verdict::redundant_facets;
  else if (!all_delzant)
    report.verdict = Verdict::not_delzant;
  else
    report.verdict = Verdict::ok;
  report.ok = report.verdict == Verdict::ok;
  return report;
}

std::vector<IntVector> lattice_points(const DelzantPolytope& poly) {
  const HPolyhedron hp = poly.as_polyhedron();
  if (!is_feasible(hp)) return {};
  if (!is_bounded(hp)) throw DomainError("lattice_points: polytope is unbounded");
  auto verts = enumerate_vertices(hp);
  const std::size_t n = poly.dim();
  IntVector lo(n), hi(n);
  for (std::size_t j = 0; j < n; ++j) {
    Rational mn = verts.front().point[j], mx = mn;
    for (const auto& v : verts) {
      mn = std::min(mn, v.point[j]);
      mx = std::max(mx, v.point[j]);
    }
    lo[j] = ceil_of(mn).convert_to<std::int64_t>();
    hi[j] = floor_of(mx).convert_to<std::int64_t>();
    if (lo[j] > hi[j]) return {};
  }
  std::vector<IntVector> out;
  IntVector m = lo;
  while (true) {
    if (poly.contains(m)) out.push_back(m);
    std::size_t j = n;
    while (j > 0) {
      --j;
      if (m[j] < hi[j]) {
        ++m[j];
        for (std::size_t k = j + 1; k < n; ++k) m[k] = lo[k];
        break;
      }
      if (j == 0) return out;
    }
  }
}

DelzantPolytope corrected_polytope(const DelzantPolytope& line_bundle_polytope) {
  auto report = validate_delzant(line_bundle_polytope);
  if (!report.ok)
    throw DomainError("corrected_polytope: input is not a valid Delzant polytope (" + to_string(report.verdict) + ")");
  for (const auto& v : report.vertices)
    for (const auto& x : v.vertex)
      if (boost::multiprecision::denominator(x) != 1)
        throw DomainError("corrected_polytope: input vertices must be integral");
  std::vector<Facet> shifted = line_bundle_polytope.facets();
  for (auto& f : shifted) f.offset += Rational(1, 2);
  std::string name = line_bundle_polytope.name().empty() ? "" : line_bundle_polytope.name() + "_corrected";
  return DelzantPolytope(line_bundle_polytope.dim(), std::move(shifted), std::move(name));
}

FrameChange::FrameChange(std::vector<IntVector> matrix, std::size_t p) : matrix_(std::move(matrix)), p_(p) {
  const std::size_t n = matrix_.size();
  if (n == 0) throw InputError("frame change matrix is empty", "B");
  for (const auto& row : matrix_)
    if (row.size() != n) throw InputError("frame change matrix must be square", "B");
  if (p_ < 1 || p_ > n) throw InputError("frame change needs 1 <= p <= n", "p");
  Rational det = determinant(RationalMatrix::from_rows(matrix_));
  if (det != 1) throw InputError("frame change matrix must have determinant 1, got " + to_string(det), "B");
}

FrameChange FrameChange::identity(std::size_t n, std::size_t p) {
  std::vector<IntVector> id(n, IntVector(n, 0));
  for (std::size_t i = 0; i < n; ++i) id[i][i] = 1;
  return FrameChange(std::move(id), p);
}

std::vector<IntVector> FrameChange::inverse_transpose() const {
  auto inv = inverse(RationalMatrix::from_rows(matrix_));
  const std::size_t n = dim();
  std::vector<IntVector> out(n, IntVector(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) out[i][j] = numerator((*inv)(j, i)).convert_to<std::int64_t>();
  return out;
}

RationalVector FrameChange::apply(const RationalVector& x) const {
  return RationalMatrix::from_rows(matrix_) * x;
}

DelzantPolytope apply_frame_change(const DelzantPolytope& poly, const FrameChange& fc) {
  if (fc.dim() != poly.dim()) throw InputError("frame change dimension does not match polytope", "B");
  const auto bit = fc.inverse_transpose();
  std::vector<Facet> out;
  out.reserve(poly.facet_count());
  for (const auto& f : poly.facets()) {
    IntVector nu(poly.dim(), 0);
    for (std::size_t i = 0; i < poly.dim(); ++i)
      for (std::size_t j = 0; j < poly.dim(); ++j) nu[i] += bit[i][j] * f.normal[j];
    out.push_back({std::move(nu), f.offset});
  }
  return DelzantPolytope(poly.dim(), std::move(out), poly.name());
}

RationalVector VertexChart::to_chart(const RationalVector& x) const {
  RationalVector out = RationalMatrix::from_rows(matrix) * x;
  for (std::size_t i = 0; i < out.size(); ++i) out[i] += offsets[i];
  return out;
}

VertexChart vertex_chart(const DelzantPolytope& poly, std::size_t vertex_index) {
  auto verts = enumerate_vertices(poly);
  if (vertex_index >= verts.size())
    throw std::out_of_range("vertex_chart: index " + std::to_string(vertex_index) + " out of range");
  const auto& v = verts[vertex_index];
  VertexChart chart;
  chart.vertex = v.point;
  chart.facets = v.active;
  for (auto r : v.active) {
    chart.matrix.push_back(poly.facets()[r].normal);
    chart.offsets.push_back(poly.facets()[r].offset);
  }
  Rational det = v.active.size() == poly.dim() ? determinant(RationalMatrix::from_rows(chart.matrix)) : Rational(0);
  if (det != 1 && det != -1) {
    std::ostringstream msg;
    msg << "vertex_chart: vertex " << vertex_index << " is not Delzant (" << v.active.size()
        << " active facets, determinant " << to_string(det) << ")";
    throw DomainError(msg.str());
  }
  return chart;
}

SlicePolytope affine_slice(const HPolyhedron& poly, const RationalMatrix& map, const RationalVector& origin) {
  if (map.rows() != poly.dim() || origin.size() != poly.dim())
    throw InputError("affine slice map does not match polyhedron dimension");
  SlicePolytope slice;
  slice.dim = map.cols();
  slice.level = origin;
  const RationalMatrix mt = map.transpose();
  for (std::size_t r = 0; r < poly.facets().size(); ++r) {
    const auto& f = poly.facets()[r];
    HalfSpace h{mt * f.normal, dot(f.normal, origin) + f.offset};
    slice.inherited.push_back(h);
    if (h.is_zero_normal()) {
      if (h.offset < 0) slice.empty = true;
      continue;
    }
    slice.facets.push_back(std::move(h));
    slice.source_facet.push_back(r);
  }
  if (!slice.empty) slice.empty = !is_feasible(slice.as_polyhedron());
  return slice;
}

SlicePolytope axis_slice(const HPolyhedron& poly, std::size_t p, const RationalVector& c) {
  const std::size_t n = poly.dim();
  if (p < 1 || p >= n) throw InputError("axis_slice needs 1 <= p < n", "p");
  if (c.size() != p) throw InputError("slice level must have p entries", "c");
  RationalMatrix map(n, n - p);
  for (std::size_t j = 0; j < n - p; ++j) map(p + j, j) = 1;
  RationalVector origin(n);
  for (std::size_t j = 0; j < p; ++j) origin[j] = c[j];
  SlicePolytope slice = affine_slice(poly, map, origin);
  slice.level = c;
  return slice;
}

SlicePolytope axis_slice(const DelzantPolytope& poly, std::size_t p, const RationalVector& c) {
  return axis_slice(poly.as_polyhedron(), p, c);
}

}  // namespace toricq
