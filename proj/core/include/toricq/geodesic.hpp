#pragma once

// The Mabuchi ray g_s = g_0 + s H, H(x) = 1/2 sum_{j<=p} x_j^2, in coordinates
// where the chosen subtorus is the first p directions. Finite-s quantities and
// their s -> infinity limits are separate code paths; s is always finite here.

#include <cstddef>
#include <vector>

#include <Eigen/Dense>

#include "toricq/polytope.hpp"
#include "toricq/potential.hpp"

namespace toricq {

class MabuchiRay {
 public:
  MabuchiRay(SymplecticPotential base, std::size_t p);

  const SymplecticPotential& base() const noexcept { return base_; }
  std::size_t p() const noexcept { return p_; }
  std::size_t dim() const noexcept { return base_.dim(); }
  // T: identity on the top-left p x p block, zero elsewhere.
  Eigen::MatrixXd direction() const;
  double hamiltonian(const Eigen::VectorXd& x) const;

 private:
  SymplecticPotential base_;
  std::size_t p_;
};

// g_0 + s H as a potential (H enters as a quadratic correction). Requires s >= 0.
SymplecticPotential ray_potential(const MabuchiRay& ray, double s);

struct HessianBlocks {
  std::size_t p = 0;
  Eigen::MatrixXd a1;  // p x p
  Eigen::MatrixXd a2;  // p x (n-p)
  Eigen::MatrixXd a3;  // (n-p) x p
  Eigen::MatrixXd d;   // (n-p) x (n-p), positive-definite

  std::size_t dim() const noexcept { return p + static_cast<std::size_t>(d.rows()); }
  Eigen::MatrixXd assemble() const;
};

// Throws DomainError when the lower block D is not positive-definite.
HessianBlocks hessian_blocks(const Eigen::MatrixXd& g, std::size_t p);

// (G + sT)^{-1} through the Schur complement S = A1 + sI - A2 D^{-1} A3.
// Throws SingularMatrixError when S is singular.
Eigen::MatrixXd inverse_hessian_s(const HessianBlocks& blocks, double s);
// diag(0, D^{-1})
Eigen::MatrixXd inverse_hessian_limit(const HessianBlocks& blocks);

struct DetGrowth {
  double determinant = 0.0;  // det(G + sT)
  double leading = 0.0;      // s^p det D
  double ratio() const { return determinant / leading; }
};

DetGrowth det_growth_check(const HessianBlocks& blocks, double s);

// n generators in C^{2n}, coordinates ordered (d/dx_1..d/dx_n, d/dtheta_1..d/dtheta_n).
// Only the spanned subspace is meaningful.
struct PolarizationFrame {
  Eigen::VectorXd basepoint;
  Eigen::MatrixXcd generators;  // n x 2n, one generator per row
};

// Rows of [G_s^{-1} | i I].
PolarizationFrame polarization_frame_s(const MabuchiRay& ray, const Eigen::VectorXd& x, double s);
// Rows of [diag(0, D^{-1}) | i I].
PolarizationFrame polarization_frame_limit(const MabuchiRay& ray, const Eigen::VectorXd& x);

// Largest principal angle between the spanned complex subspaces. Throws on rank deficiency.
double grassmann_distance(const PolarizationFrame& f1, const PolarizationFrame& f2);
double grassmann_distance(const Eigen::MatrixXcd& rows1, const Eigen::MatrixXcd& rows2);

// max |omega(v_a, v_b)| over generator pairs, omega = sum_j dx_j ^ dtheta_j (complex bilinear).
double lagrangian_defect(const PolarizationFrame& frame);

// Theta = sum_k c_k dtheta^k; coefficients c_k.
struct ConnectionFormValue {
  Eigen::VectorXd basepoint;
  Eigen::VectorXcd coefficients;
};

// d/dx_j log det M for M(x) with M^{-1} given and dM/dx_j given, via trace(M^{-1} dM_j).
Eigen::VectorXd log_det_gradient(const Eigen::MatrixXd& inverse, const std::vector<Eigen::MatrixXd>& derivatives);

// Theta_0^s = -i x.dtheta + (i/4)(d/dx log det G_s) . G_s^{-1} dtheta
ConnectionFormValue connection_form_s(const MabuchiRay& ray, const Eigen::VectorXd& x, double s);
// Theta_0^inf: coefficients 1..p are exactly -i x_k.
ConnectionFormValue connection_form_limit(const MabuchiRay& ray, const Eigen::VectorXd& x);
// Theta_v^inf in the vertex chart, coefficients on dtheta_v. The chart must come from the
// ray's polytope; x is an interior point in the ray's own coordinates.
ConnectionFormValue connection_form_vertex_limit(const MabuchiRay& ray, const VertexChart& chart,
                                                 const Eigen::VectorXd& x);

}  // namespace toricq
