#pragma once

// Deterministic adaptive integration over convex polytopes and their axis slices.
// Regions are fan triangulations with exact rational vertices; cells are refined by
// longest-edge bisection. Nodes are always interior to a cell, so integrands only
// need to be finite on the open polytope.

#include <cstddef>
#include <functional>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "toricq/polytope.hpp"

namespace toricq {

struct Simplex {
  std::vector<RationalVector> vertices;  // dim + 1 points

  Rational volume() const;
};

struct IntegrationRegion {
  HPolyhedron polytope;
  std::vector<Simplex> simplices;
  int rule_points = 0;  // Gauss points per collapsed coordinate; the estimator pairs it with rule_points + 1

  std::size_t dim() const noexcept { return polytope.dim(); }
  Rational volume() const;
};

// Fan from the vertex barycenter over recursively triangulated facets (faces of
// dimension <= 1 are used as they are). An explicit apex must be strictly interior.
// Throws DomainError for unbounded, empty or lower-dimensional input.
IntegrationRegion triangulate(const HPolyhedron& poly, const std::optional<RationalVector>& apex = std::nullopt);
IntegrationRegion triangulate(const DelzantPolytope& poly, const std::optional<RationalVector>& apex = std::nullopt);

struct IntegralResult {
  double value = 0.0;
  double error_estimate = 0.0;
  std::size_t cells_used = 0;
  bool converged = false;
};

using Integrand = std::function<double(const Eigen::VectorXd&)>;

// 2e5 unless TORICQ_CELL_BUDGET holds a positive integer.
std::size_t default_cell_budget();

struct QuadratureOptions {
  double tolerance = 1e-10;  // absolute
  std::size_t cell_budget = 0;  // 0 means default_cell_budget()
};

IntegralResult integrate(const Integrand& f, const IntegrationRegion& region, const QuadratureOptions& opts = {});

// Integral of f(c, y) dy over the slice x_1..x_p = c. p = n returns f(c); an empty or
// lower-dimensional slice returns 0 with converged = true.
IntegralResult integrate_slice(const Integrand& f, const HPolyhedron& poly, std::size_t p, const RationalVector& c,
                               const QuadratureOptions& opts = {});
IntegralResult integrate_slice(const Integrand& f, const DelzantPolytope& poly, std::size_t p,
                               const RationalVector& c, const QuadratureOptions& opts = {});

}  // namespace toricq
