#pragma once

// Lattice-point basis of the quantization along a Mabuchi ray, its finite-s norms,
// the gCST as a diagonal map and the s -> infinity limit constants.
//
// Norms are x-integrals over the polytope (no (2 pi)^-n and no torus factor):
//   |sigma^m_s|^2 = int_P e^{-2((x - m).y_s - g_s)} (det G_s)^{1/2} dx,
// with y_s = grad g_s. Since g_s = g_0 + sH, the exponent splits into
//   -s sum_{j<=p} (x_j - m_j)^2 + 2 s H(m) - 2((x - m).y - g_0),
// so quadrature only sees the Gaussian factor and e^{2sH(m)} is applied afterwards.

#include <cstddef>
#include <map>
#include <vector>

#include "toricq/geodesic.hpp"
#include "toricq/polytope.hpp"
#include "toricq/quadrature.hpp"

namespace toricq {

struct QuantumBasisElement {
  IntVector m;
  double hamiltonian = 0.0;  // 1/2 sum_{j<=p} m_j^2
  std::size_t index = 0;     // lexicographic position
};

double hamiltonian_value(const IntVector& m, std::size_t p);
std::vector<QuantumBasisElement> quantum_basis(const DelzantPolytope& poly, std::size_t p);

struct NormValue {
  double s = 0.0;
  double norm_squared = 0.0;        // e^{2sH(m)} * tilde; may overflow to inf for huge s
  double tilde_norm_squared = 0.0;  // the integral itself
  double error_estimate = 0.0;      // of tilde_norm_squared
  std::size_t cells_used = 0;
  bool converged = false;
};

// Requires s >= 0 and m strictly inside the ray's polytope.
NormValue norm_squared(const MabuchiRay& ray, const IntVector& m, double s, const QuadratureOptions& opts = {});

// e^{-sH(m)}
double gcst_factor(const IntVector& m, std::size_t p, double s);

class GcstMap {
 public:
  GcstMap(std::vector<QuantumBasisElement> basis, double source, double target);

  double source() const noexcept { return source_; }
  double target() const noexcept { return target_; }
  const std::vector<QuantumBasisElement>& basis() const noexcept { return basis_; }
  const std::vector<double>& factors() const noexcept { return factors_; }

  // (this after first): first.target() must equal this->source().
  GcstMap compose(const GcstMap& first) const;
  GcstMap inverse() const;

 private:
  GcstMap(std::vector<QuantumBasisElement> basis, double source, double target, std::vector<double> factors);

  std::vector<QuantumBasisElement> basis_;
  double source_;
  double target_;
  std::vector<double> factors_;
};

struct LimitConstant {
  double c_m = 0.0;
  double limit = 0.0;  // c_m * pi^{p/2}
  double error_estimate = 0.0;
  std::size_t cells_used = 0;
  bool converged = false;
};

// Slice integral over x_{1..p} = m_{1..p} of e^{-2(sum_{j>p}(x_j - m_j) y_j - g)} (det D)^{1/2}.
LimitConstant limit_constant_cm(const MabuchiRay& ray, const IntVector& m, const QuadratureOptions& opts = {});

struct LimitEntry {
  IntVector m;
  LimitConstant value;
};

std::vector<LimitEntry> hermitian_limit_table(const MabuchiRay& ray, const std::vector<QuantumBasisElement>& basis,
                                              const QuadratureOptions& opts = {});

// Neville extrapolation of values(1/s) to 1/s = 0 using every point.
double richardson_extrapolate(const std::vector<double>& s, const std::vector<double>& values);

struct ConvergenceReport {
  IntVector m;
  std::vector<NormValue> values;
  double extrapolated = 0.0;
  LimitConstant target;
  bool converged = false;  // every quadrature converged
  bool pass = false;
};

// Pass iff |extrapolated - target| <= max(tol, 0.02 * target). Requires >= 3 increasing positive s.
ConvergenceReport verify_norm_limit(const MabuchiRay& ray, const IntVector& m, const std::vector<double>& s_grid,
                                    double tol, const QuadratureOptions& opts = {});

// Basis grouped by m_{1..p}; slices without lattice points have no key.
std::map<IntVector, std::vector<QuantumBasisElement>> decomposition(const std::vector<QuantumBasisElement>& basis,
                                                                    std::size_t p);
std::map<IntVector, std::vector<QuantumBasisElement>> decomposition(const DelzantPolytope& poly, std::size_t p);

}  // namespace toricq
