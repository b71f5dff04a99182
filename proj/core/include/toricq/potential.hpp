#pragma once

// Symplectic potentials g = g_P + h on a polytope interior and the Kähler data
// they induce. g_P is the Guillemin potential 1/2 sum_r l_r log l_r; h is an
// optional quadratic correction 1/2 x^T Q x + b^T x. All derivatives through
// third order are closed-form.

#include <cstddef>
#include <optional>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "toricq/polytope.hpp"

namespace toricq {

struct QuadraticCorrection {
  Eigen::MatrixXd q;  // symmetric
  Eigen::VectorXd b;

  static QuadraticCorrection zero(std::size_t dim);
  bool is_zero() const;
};

// "none" | "quadratic:[a1,...,an]" (diagonal Q) | "quadratic:[q11,...,qnn]" (full Q, row-major).
// Q must be symmetric positive semidefinite.
QuadraticCorrection parse_correction(std::string_view spec, std::size_t dim);

class SymplecticPotential {
 public:
  static SymplecticPotential guillemin(const DelzantPolytope& poly);
  // Guillemin-form sum over arbitrary half-spaces. Zero normals contribute constants.
  static SymplecticPotential from_half_spaces(std::size_t dim, const std::vector<HalfSpace>& half_spaces);

  SymplecticPotential with_correction(const QuadraticCorrection& h) const;

  std::size_t dim() const noexcept { return dim_; }
  const Eigen::MatrixXd& normals() const noexcept { return normals_; }  // d x n
  const Eigen::VectorXd& offsets() const noexcept { return offsets_; }
  const QuadraticCorrection& correction() const noexcept { return correction_; }
  // Exact domain (facets with nonzero normal).
  const HPolyhedron& domain() const noexcept { return domain_; }
  // Vertex barycenter of the domain; nullopt for unbounded domains without vertices.
  const std::optional<Eigen::VectorXd>& barycenter() const noexcept { return barycenter_; }

  Eigen::VectorXd facet_values(const Eigen::VectorXd& x) const;
  bool is_interior(const Eigen::VectorXd& x) const;
  // Throws DomainError unless x is interior.
  void require_interior(const Eigen::VectorXd& x, const char* who) const;

  double value(const Eigen::VectorXd& x) const;
  double guillemin_value(const Eigen::VectorXd& x) const;
  Eigen::VectorXd gradient(const Eigen::VectorXd& x) const;
  Eigen::MatrixXd hessian(const Eigen::VectorXd& x) const;
  // result[j] = d/dx_j of the Hessian.
  std::vector<Eigen::MatrixXd> hessian_derivatives(const Eigen::VectorXd& x) const;

 private:
  SymplecticPotential(std::size_t dim, Eigen::MatrixXd normals, Eigen::VectorXd offsets, HPolyhedron domain);

  std::size_t dim_ = 0;
  Eigen::MatrixXd normals_;
  Eigen::VectorXd offsets_;
  std::vector<bool> active_;  // nonzero normal
  QuadraticCorrection correction_;
  HPolyhedron domain_;
  std::optional<Eigen::VectorXd> barycenter_;
};

struct KahlerPointData {
  Eigen::VectorXd x;
  double g = 0.0;
  Eigen::VectorXd y;  // gradient of g
  Eigen::MatrixXd hessian;
  double kahler_potential = 0.0;  // x . y - g
  Eigen::MatrixXd complex_structure;
};

KahlerPointData kahler_data(const SymplecticPotential& pot, const Eigen::VectorXd& x);

Eigen::VectorXd legendre_forward(const SymplecticPotential& pot, const Eigen::VectorXd& x);

struct LegendreOptions {
  double residual_tolerance = 1e-10;
  int max_iterations = 200;
};

// Damped Newton from the barycenter; iterates stay interior. Stops at the residual tolerance or
// when the Newton step drops below double resolution of x. Throws ConvergenceError.
Eigen::VectorXd legendre_inverse(const SymplecticPotential& pot, const Eigen::VectorXd& y,
                                 const LegendreOptions& opts = {});

// (det G(x) * prod_r l_r(x))^{-1}
double regularity_delta(const SymplecticPotential& pot, const Eigen::VectorXd& x);

struct ComplexStructure {
  Eigen::MatrixXd j;  // [[0, -G^{-1}], [G, 0]]
  double condition_number = 1.0;
  bool ill_conditioned = false;  // condition number above 1e12
};

ComplexStructure complex_structure(const SymplecticPotential& pot, const Eigen::VectorXd& x);

// Abreu scalar curvature S = -1/2 sum_{j,k} d^2 (G^{-1})_{jk} / dx_j dx_k, by central
// differences of the analytic G^{-1} with two Richardson levels. With this
// normalization the reduced potential of x_3 = a(x_1 + x_2) in C^3 has
// S = 2a / ((a + 1)(x_1 + x_2)). Throws DomainError when too close to the boundary.
double abreu_scalar_curvature(const SymplecticPotential& pot, const Eigen::VectorXd& x);

}  // namespace toricq
