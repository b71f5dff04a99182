#include "toricq/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <queue>
#include <set>
#include <string>

#include <boost/math/quadrature/gauss.hpp>

#include "toricq/errors.hpp"

namespace toricq {

namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;

Rational factorial(std::size_t d) {
  Rational f = 1;
  for (std::size_t k = 2; k <= d; ++k) f *= static_cast<long long>(k);
  return f;
}

Rational simplex_volume(const std::vector<RationalVector>& v) {
  const std::size_t d = v.size() - 1;
  RationalMatrix m(d, d);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j) m(i, j) = v[i + 1][j] - v[0][j];
  Rational det = determinant(m);
  if (det < 0) det = -det;
  return det / factorial(d);
}

// Gauss-Legendre on [0, 1].
template <unsigned N>
std::vector<std::pair<double, double>> gauss_nodes_fixed() {
  using G = boost::math::quadrature::gauss<double, N>;
  const auto& a = G::abscissa();
  const auto& w = G::weights();
  std::vector<std::pair<double, double>> out;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] == 0.0) {
      out.emplace_back(0.5, 0.5 * w[i]);
    } else {
      out.emplace_back(0.5 * (1.0 - a[i]), 0.5 * w[i]);
      out.emplace_back(0.5 * (1.0 + a[i]), 0.5 * w[i]);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<std::pair<double, double>> gauss_nodes(int q) {
  switch (q) {
    case 4: return gauss_nodes_fixed<4>();
    case 5: return gauss_nodes_fixed<5>();
    case 6: return gauss_nodes_fixed<6>();
    case 7: return gauss_nodes_fixed<7>();
    default: break;
  }
  throw InputError("unsupported Gauss order " + std::to_string(q));
}

// Degree-5-exact simplex rule in collapsed coordinates: the Jacobian adds u^{d-k}
// to coordinate k, hence the extra points in higher dimension.
int rule_points_for(std::size_t d) { return std::max(4, static_cast<int>((d + 6) / 2)); }

struct SimplexRule {
  MatrixXd barycentric;  // points x (d + 1)
  VectorXd weights;      // sum to 1/d!
};

SimplexRule make_rule(std::size_t d, int q) {
  const auto nodes = gauss_nodes(q);
  const std::size_t per = nodes.size();
  std::size_t total = 1;
  for (std::size_t k = 0; k < d; ++k) total *= per;
  SimplexRule rule;
  rule.barycentric.resize(static_cast<Eigen::Index>(total), static_cast<Eigen::Index>(d + 1));
  rule.weights.resize(static_cast<Eigen::Index>(total));
  std::vector<std::size_t> idx(d, 0);
  for (std::size_t t = 0; t < total; ++t) {
    std::size_t rem = t;
    for (std::size_t k = d; k-- > 0;) {
      idx[k] = rem % per;
      rem /= per;
    }
    double w = 1.0;
    double prod = 1.0;
    for (std::size_t k = 0; k < d; ++k) {
      const double u = nodes[idx[k]].first;
      w *= nodes[idx[k]].second * std::pow(u, static_cast<double>(d - 1 - k));
      rule.barycentric(static_cast<Eigen::Index>(t), static_cast<Eigen::Index>(k)) = prod * (1.0 - u);
      prod *= u;
    }
    rule.barycentric(static_cast<Eigen::Index>(t), static_cast<Eigen::Index>(d)) = prod;
    rule.weights[static_cast<Eigen::Index>(t)] = w;
  }
  return rule;
}

struct FaceContext {
  std::vector<RationalVector> points;
  std::vector<std::vector<bool>> incident;  // [vertex][facet], nonzero-normal facets only
  std::size_t facet_count = 0;
};

std::size_t affine_dim(const FaceContext& ctx, const std::vector<std::size_t>& face) {
  if (face.size() <= 1) return 0;
  const std::size_t n = ctx.points[0].size();
  RationalMatrix m(face.size() - 1, n);
  for (std::size_t i = 1; i < face.size(); ++i)
    for (std::size_t j = 0; j < n; ++j) m(i - 1, j) = ctx.points[face[i]][j] - ctx.points[face[0]][j];
  return rank(m);
}

RationalVector centroid(const FaceContext& ctx, const std::vector<std::size_t>& face) {
  RationalVector c(ctx.points[0].size(), Rational(0));
  for (auto i : face)
    for (std::size_t j = 0; j < c.size(); ++j) c[j] += ctx.points[i][j];
  for (auto& x : c) x /= static_cast<long long>(face.size());
  return c;
}

std::vector<std::vector<std::size_t>> subfaces(const FaceContext& ctx, const std::vector<std::size_t>& face,
                                               std::size_t k) {
  std::vector<std::vector<std::size_t>> out;
  std::set<std::vector<std::size_t>> seen;
  for (std::size_t r = 0; r < ctx.facet_count; ++r) {
    std::vector<std::size_t> sub;
    for (auto i : face)
      if (ctx.incident[i][r]) sub.push_back(i);
    if (sub.size() < k || sub.size() == face.size()) continue;
    if (affine_dim(ctx, sub) != k - 1) continue;
    if (seen.insert(sub).second) out.push_back(std::move(sub));
  }
  return out;
}

void fan(const FaceContext& ctx, const std::vector<std::size_t>& face, std::size_t k,
         const RationalVector* apex_override, std::vector<Simplex>& out) {
  if (k == 0) {
    out.push_back({{ctx.points[face[0]]}});
    return;
  }
  if (k == 1) {
    out.push_back({{ctx.points[face[0]], ctx.points[face[1]]}});
    return;
  }
  const RationalVector apex = apex_override ? *apex_override : centroid(ctx, face);
  for (const auto& sub : subfaces(ctx, face, k)) {
    std::vector<Simplex> part;
    fan(ctx, sub, k - 1, nullptr, part);
    for (auto& s : part) {
      s.vertices.push_back(apex);
      out.push_back(std::move(s));
    }
  }
}

bool strictly_inside(const HPolyhedron& poly, const RationalVector& x) {
  for (const auto& h : poly.facets()) {
    const Rational v = h.evaluate(x);
    if (h.is_zero_normal() ? v < 0 : v <= 0) return false;
  }
  return true;
}

struct Cell {
  MatrixXd vertices;  // (d + 1) x d
  double value = 0.0;  // higher-order rule
  double error = 0.0;  // |low - high|
  bool alive = true;
};

// Embedded pair of conical product rules with q and q + 1 points per coordinate.
// Comparing two rules on the same cell (rather than a cell against its bisection
// children) keeps the estimate honest for integrands constant along the split edge.
class Integrator {
 public:
  Integrator(const Integrand& f, std::size_t d, int q)
      : f_(f), d_(d), low_(make_rule(d, q)), high_(make_rule(d, q + 1)) {}

  Cell make_cell(MatrixXd v) const {
    MatrixXd edges(static_cast<Eigen::Index>(d_), static_cast<Eigen::Index>(d_));
    for (std::size_t i = 0; i < d_; ++i)
      edges.row(static_cast<Eigen::Index>(i)) = v.row(static_cast<Eigen::Index>(i + 1)) - v.row(0);
    const double jac = std::abs(edges.determinant());
    Cell c;
    c.value = jac * apply(high_, v);
    c.error = std::abs(c.value - jac * apply(low_, v));
    c.vertices = std::move(v);
    return c;
  }

  void bisect(const MatrixXd& v, MatrixXd& a, MatrixXd& b) const {
    Eigen::Index bi = 0, bj = 1;
    double best = -1.0;
    for (Eigen::Index i = 0; i < v.rows(); ++i)
      for (Eigen::Index j = i + 1; j < v.rows(); ++j) {
        const double len = (v.row(i) - v.row(j)).squaredNorm();
        if (len > best) {
          best = len;
          bi = i;
          bj = j;
        }
      }
    const Eigen::RowVectorXd mid = 0.5 * (v.row(bi) + v.row(bj));
    a = v;
    b = v;
    a.row(bj) = mid;
    b.row(bi) = mid;
  }

 private:
  double apply(const SimplexRule& rule, const MatrixXd& v) const {
    const MatrixXd pts = rule.barycentric * v;
    double sum = 0.0;
    for (Eigen::Index i = 0; i < pts.rows(); ++i) {
      const VectorXd x = pts.row(i).transpose();
      const double fx = f_(x);
      if (!std::isfinite(fx)) throw DomainError("integrand is not finite at an interior node");
      sum += rule.weights[i] * fx;
    }
    return sum;
  }

  const Integrand& f_;
  std::size_t d_;
  SimplexRule low_;
  SimplexRule high_;
};

double neumaier_sum(const std::vector<Cell>& cells, double Cell::*field) {
  double sum = 0.0;
  double comp = 0.0;
  for (const auto& c : cells) {
    if (!c.alive) continue;
    const double v = c.*field;
    const double t = sum + v;
    if (std::abs(sum) >= std::abs(v))
      comp += (sum - t) + v;
    else
      comp += (v - t) + sum;
    sum = t;
  }
  return sum + comp;
}

}  // namespace

Rational Simplex::volume() const { return simplex_volume(vertices); }

Rational IntegrationRegion::volume() const {
  Rational total = 0;
  for (const auto& s : simplices) total += s.volume();
  return total;
}

IntegrationRegion triangulate(const HPolyhedron& poly, const std::optional<RationalVector>& apex) {
  if (!is_feasible(poly)) throw DomainError("triangulate: region is empty");
  if (!is_bounded(poly)) throw DomainError("triangulate: region is unbounded");
  const auto vertices = enumerate_vertices(poly);
  if (vertices.empty()) throw DomainError("triangulate: region has no vertices");

  FaceContext ctx;
  ctx.facet_count = poly.facets().size();
  for (const auto& v : vertices) {
    ctx.points.push_back(v.point);
    std::vector<bool> inc(ctx.facet_count, false);
    for (auto r : v.active)
      if (!poly.facets()[r].is_zero_normal()) inc[r] = true;
    ctx.incident.push_back(std::move(inc));
  }
  std::vector<std::size_t> all(vertices.size());
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
  const std::size_t n = poly.dim();
  if (affine_dim(ctx, all) != n) throw DomainError("triangulate: region is lower-dimensional");
  if (apex) {
    if (apex->size() != n) throw InputError("triangulate: apex has the wrong dimension", "apex");
    if (!strictly_inside(poly, *apex)) throw DomainError("triangulate: apex is not interior");
  }

  IntegrationRegion region;
  region.polytope = poly;
  region.rule_points = rule_points_for(n);
  fan(ctx, all, n, apex ? &*apex : nullptr, region.simplices);
  return region;
}

IntegrationRegion triangulate(const DelzantPolytope& poly, const std::optional<RationalVector>& apex) {
  return triangulate(poly.as_polyhedron(), apex);
}

std::size_t default_cell_budget() {
  constexpr std::size_t fallback = 200000;
  const char* env = std::getenv("TORICQ_CELL_BUDGET");
  if (env == nullptr || *env == '\0') return fallback;
  char* end = nullptr;
  const unsigned long long v = std::strtoull(env, &end, 10);
  if (end == env || *end != '\0' || v == 0) return fallback;
  return static_cast<std::size_t>(v);
}

IntegralResult integrate(const Integrand& f, const IntegrationRegion& region, const QuadratureOptions& opts) {
  if (!(opts.tolerance > 0.0)) throw InputError("quadrature tolerance must be positive", "tol");
  const std::size_t d = region.dim();
  const std::size_t budget = opts.cell_budget > 0 ? opts.cell_budget : default_cell_budget();
  Integrator integ(f, d, region.rule_points);

  std::vector<Cell> cells;
  cells.reserve(std::min<std::size_t>(budget + 2, 4 * region.simplices.size() + 1024));
  // Max-heap on error; ties go to the older cell so the order never depends on the allocator.
  using Entry = std::pair<double, long long>;
  std::priority_queue<Entry> heap;
  double total_error = 0.0;
  std::size_t alive = 0;

  auto push = [&](Cell c) {
    total_error += c.error;
    heap.emplace(c.error, -static_cast<long long>(cells.size()));
    cells.push_back(std::move(c));
    ++alive;
  };

  for (const auto& s : region.simplices) {
    MatrixXd v(static_cast<Eigen::Index>(d + 1), static_cast<Eigen::Index>(d));
    for (std::size_t i = 0; i <= d; ++i)
      for (std::size_t j = 0; j < d; ++j)
        v(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = to_double(s.vertices[i][j]);
    push(integ.make_cell(std::move(v)));
  }

  std::size_t splits = 0;
  while (total_error > opts.tolerance && alive < budget && !heap.empty()) {
    const auto idx = static_cast<std::size_t>(-heap.top().second);
    heap.pop();
    Cell& parent = cells[idx];
    parent.alive = false;
    --alive;
    total_error -= parent.error;
    MatrixXd a, b;
    integ.bisect(parent.vertices, a, b);
    push(integ.make_cell(std::move(a)));
    push(integ.make_cell(std::move(b)));
    if (++splits % 1024 == 0) total_error = neumaier_sum(cells, &Cell::error);
  }

  IntegralResult out;
  out.value = neumaier_sum(cells, &Cell::value);
  out.error_estimate = neumaier_sum(cells, &Cell::error);
  out.cells_used = alive;
  out.converged = out.error_estimate <= opts.tolerance;
  return out;
}

IntegralResult integrate_slice(const Integrand& f, const HPolyhedron& poly, std::size_t p, const RationalVector& c,
                               const QuadratureOptions& opts) {
  const std::size_t n = poly.dim();
  if (p < 1 || p > n) throw InputError("integrate_slice needs 1 <= p <= n", "p");
  if (c.size() != p) throw InputError("slice level must have p entries", "c");
  IntegralResult out;
  out.converged = true;
  if (p == n) {
    if (!poly.contains(c)) return out;
    VectorXd x(static_cast<Eigen::Index>(n));
    for (std::size_t j = 0; j < n; ++j) x[static_cast<Eigen::Index>(j)] = to_double(c[j]);
    out.value = f(x);
    return out;
  }
  const SlicePolytope slice = axis_slice(poly, p, c);
  if (slice.empty) return out;
  const HPolyhedron region_poly = slice.as_polyhedron();
  if (!is_feasible(region_poly) || !has_interior(region_poly)) return out;

  const IntegrationRegion region = triangulate(region_poly);
  VectorXd full(static_cast<Eigen::Index>(n));
  for (std::size_t j = 0; j < p; ++j) full[static_cast<Eigen::Index>(j)] = to_double(c[j]);
  const auto pe = static_cast<Eigen::Index>(p);
  const Integrand lifted = [&](const VectorXd& y) {
    full.tail(static_cast<Eigen::Index>(n) - pe) = y;
    return f(full);
  };
  return integrate(lifted, region, opts);
}

IntegralResult integrate_slice(const Integrand& f, const DelzantPolytope& poly, std::size_t p,
                               const RationalVector& c, const QuadratureOptions& opts) {
  return integrate_slice(f, poly.as_polyhedron(), p, c, opts);
}

}  // namespace toricq
