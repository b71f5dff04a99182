#include "toricq/reduction.hpp"

#include <algorithm>

#include "toricq/errors.hpp"
#include "toricq/quantization.hpp"

namespace toricq {

namespace {

bool is_integral(const RationalVector& v) {
  return std::all_of(v.begin(), v.end(), [](const Rational& x) { return denominator(x) == 1; });
}

// Smallest positive multiple with coprime integer entries.
RationalVector primitive_multiple(const RationalVector& v) {
  Integer lcm = 1;
  for (const auto& x : v) lcm = boost::multiprecision::lcm(lcm, denominator(x));
  std::vector<Integer> ints;
  Integer g = 0;
  for (const auto& x : v) {
    ints.push_back(numerator(x) * (lcm / denominator(x)));
    g = boost::multiprecision::gcd(g, ints.back());
  }
  RationalVector out;
  for (const auto& i : ints) out.emplace_back(g == 0 ? Integer(0) : Integer(i / g));
  return out;
}

bool is_primitive_integral(const RationalVector& v) {
  if (!is_integral(v)) return false;
  Integer g = 0;
  for (const auto& x : v) g = boost::multiprecision::gcd(g, numerator(x));
  return g == 1;
}

ReducedStructure classify(SlicePolytope slice) {
  if (slice.empty) throw DomainError("reduce: the slice at this level is empty");
  const std::size_t k = slice.dim;
  const HPolyhedron pruned = slice.as_polyhedron();

  std::vector<VertexReport> reports;
  std::vector<std::size_t> non_primitive;
  std::vector<RationalVector> over;
  for (std::size_t r = 0; r < slice.facets.size(); ++r)
    if (is_integral(slice.facets[r].normal) && !is_primitive_integral(slice.facets[r].normal)) non_primitive.push_back(r);

  bool worse = false;
  bool unimodular = true;
  for (const auto& v : enumerate_vertices(pruned)) {
    VertexReport rep;
    rep.vertex = v.point;
    rep.active = v.active;
    if (v.active.size() > k) {
      worse = true;
      over.push_back(v.point);
    } else if (v.active.size() == k) {
      // Axis slices inherit integer normals and keep them as labels; rational normals
      // from affine slices are measured against the y-lattice after scaling.
      RationalMatrix a(k, k);
      for (std::size_t i = 0; i < k; ++i) {
        const auto& nu = slice.facets[v.active[i]].normal;
        const RationalVector row = is_integral(nu) ? nu : primitive_multiple(nu);
        for (std::size_t j = 0; j < k; ++j) a(i, j) = row[j];
      }
      const Rational det = determinant(a);
      rep.determinant = numerator(det);
      rep.delzant = det == 1 || det == -1;
    }
    unimodular = unimodular && rep.delzant;
    reports.push_back(std::move(rep));
  }

  ReducedClass cls = worse ? ReducedClass::worse : (unimodular ? ReducedClass::delzant : ReducedClass::orbifold);
  SymplecticPotential pot = SymplecticPotential::from_half_spaces(k, slice.inherited);
  return ReducedStructure{std::move(slice), std::move(pot), cls, std::move(reports), std::move(non_primitive),
                          std::move(over)};
}

}  // namespace

std::string to_string(ReducedClass c) {
  switch (c) {
    case ReducedClass::delzant: return "delzant";
    case ReducedClass::orbifold: return "orbifold";
    case ReducedClass::worse: return "worse";
  }
  return "worse";
}

ReducedStructure reduce(const DelzantPolytope& poly, std::size_t p, const RationalVector& c) {
  return classify(axis_slice(poly, p, c));
}

ReducedStructure reduce_affine(const HPolyhedron& poly, const RationalMatrix& map, const RationalVector& origin) {
  if (map.cols() == 0) throw InputError("reduce_affine needs a slice of positive dimension");
  return classify(affine_slice(poly, map, origin));
}

ReducedStructure reduce_graph(const HPolyhedron& poly, const RationalVector& a, const Rational& c) {
  const std::size_t n = poly.dim();
  if (n < 2) throw InputError("reduce_graph needs dimension >= 2");
  if (a.size() != n - 1) throw InputError("hyperplane coefficients must have n-1 entries", "alpha");
  RationalMatrix map(n, n - 1);
  for (std::size_t j = 0; j + 1 < n; ++j) {
    map(j, j) = 1;
    map(n - 1, j) = a[j];
  }
  RationalVector origin(n, Rational(0));
  origin[n - 1] = c;
  return reduce_affine(poly, map, origin);
}

double reduced_scalar_curvature(const ReducedStructure& red, const Eigen::VectorXd& y) {
  red.potential.require_interior(y, "reduced_scalar_curvature");
  return abreu_scalar_curvature(red.potential, y);
}

AuditReport reduction_dimension_audit(const DelzantPolytope& poly, std::size_t p) {
  const std::size_t n = poly.dim();
  if (p < 1 || p > n) throw InputError("audit needs 1 <= p <= n", "p");
  const auto basis = quantum_basis(poly, p);
  const auto groups = decomposition(basis, p);

  AuditReport out;
  out.basis_size = basis.size();
  const auto vertices = enumerate_vertices(poly);
  if (vertices.empty()) {
    out.consistent = out.basis_size == 0;
    return out;
  }
  IntVector lo(p), hi(p);
  for (std::size_t j = 0; j < p; ++j) {
    Rational mn = vertices[0].point[j], mx = mn;
    for (const auto& v : vertices) {
      mn = std::min(mn, v.point[j]);
      mx = std::max(mx, v.point[j]);
    }
    lo[j] = static_cast<std::int64_t>(ceil_of(mn));
    hi[j] = static_cast<std::int64_t>(floor_of(mx));
    if (lo[j] > hi[j]) {
      out.consistent = out.basis_size == 0;
      return out;
    }
  }

  IntVector c = lo;
  while (true) {
    LevelReport level;
    level.c = c;
    if (auto it = groups.find(c); it != groups.end()) level.dimension = it->second.size();
    level.trivial = level.dimension == 0;
    if (p < n) {
      const SlicePolytope slice = axis_slice(poly, p, to_rational(c));
      if (!slice.empty) level.classification = classify(slice).classification;
    } else if (poly.contains(c)) {
      level.classification = ReducedClass::delzant;  // a point
    }
    out.total += level.dimension;
    out.levels.push_back(std::move(level));

    std::size_t j = p;
    while (j > 0 && c[j - 1] == hi[j - 1]) --j;
    if (j == 0) break;
    ++c[j - 1];
    for (std::size_t k = j; k < p; ++k) c[k] = lo[k];
  }
  out.consistent = out.total == out.basis_size;
  return out;
}

}  // namespace toricq
