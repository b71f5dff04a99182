#include "toricq/geodesic.hpp"

#include <cmath>
#include <complex>
#include <string>

#include "toricq/errors.hpp"

namespace toricq {

namespace {

using Eigen::Index;
using Eigen::MatrixXd;
using Eigen::VectorXd;

constexpr std::complex<double> kI{0.0, 1.0};

Index as_index(std::size_t v) { return static_cast<Index>(v); }

MatrixXd spd_inverse(const MatrixXd& m, const char* what) {
  Eigen::LLT<MatrixXd> llt(m);
  if (llt.info() != Eigen::Success) throw DomainError(std::string(what) + " is not positive-definite");
  return llt.solve(MatrixXd::Identity(m.rows(), m.cols()));
}

}  // namespace

MabuchiRay::MabuchiRay(SymplecticPotential base, std::size_t p) : base_(std::move(base)), p_(p) {
  if (p_ < 1 || p_ > base_.dim()) throw InputError("Mabuchi ray needs 1 <= p <= n", "p");
}

MatrixXd MabuchiRay::direction() const {
  const Index n = as_index(dim());
  MatrixXd t = MatrixXd::Zero(n, n);
  t.topLeftCorner(as_index(p_), as_index(p_)).setIdentity();
  return t;
}

double MabuchiRay::hamiltonian(const VectorXd& x) const { return 0.5 * x.head(as_index(p_)).squaredNorm(); }

SymplecticPotential ray_potential(const MabuchiRay& ray, double s) {
  if (!(s >= 0.0)) throw InputError("ray_potential needs s >= 0", "s");
  QuadraticCorrection h = QuadraticCorrection::zero(ray.dim());
  h.q = s * ray.direction();
  return ray.base().with_correction(h);
}

MatrixXd HessianBlocks::assemble() const {
  const Index pp = as_index(p);
  const Index q = d.rows();
  MatrixXd g(pp + q, pp + q);
  g.topLeftCorner(pp, pp) = a1;
  g.topRightCorner(pp, q) = a2;
  g.bottomLeftCorner(q, pp) = a3;
  g.bottomRightCorner(q, q) = d;
  return g;
}

HessianBlocks hessian_blocks(const MatrixXd& g, std::size_t p) {
  const Index n = g.rows();
  if (g.cols() != n) throw InputError("hessian_blocks: matrix is not square");
  if (p < 1 || as_index(p) > n) throw InputError("hessian_blocks: need 1 <= p <= n", "p");
  const Index pp = as_index(p);
  const Index q = n - pp;
  HessianBlocks b;
  b.p = p;
  b.a1 = g.topLeftCorner(pp, pp);
  b.a2 = g.topRightCorner(pp, q);
  b.a3 = g.bottomLeftCorner(q, pp);
  b.d = g.bottomRightCorner(q, q);
  if (q > 0) {
    Eigen::LLT<MatrixXd> llt(b.d);
    if (llt.info() != Eigen::Success)
      throw DomainError("hessian_blocks: lower block D is not positive-definite");
  }
  return b;
}

MatrixXd inverse_hessian_s(const HessianBlocks& blocks, double s) {
  const Index pp = as_index(blocks.p);
  const Index q = blocks.d.rows();
  MatrixXd dinv = q > 0 ? spd_inverse(blocks.d, "D") : MatrixXd(0, 0);
  MatrixXd schur = blocks.a1 + s * MatrixXd::Identity(pp, pp);
  if (q > 0) schur -= blocks.a2 * dinv * blocks.a3;
  Eigen::PartialPivLU<MatrixXd> lu(schur);
  const double rcond = lu.rcond();
  if (!(rcond > 1e-14))
    throw SingularMatrixError("inverse_hessian_s: Schur complement is singular", rcond > 0.0 ? 1.0 / rcond : INFINITY);
  const MatrixXd sinv = lu.inverse();

  MatrixXd out(pp + q, pp + q);
  out.topLeftCorner(pp, pp) = sinv;
  if (q > 0) {
    const MatrixXd upper_right = -sinv * blocks.a2 * dinv;
    out.topRightCorner(pp, q) = upper_right;
    out.bottomLeftCorner(q, pp) = -dinv * blocks.a3 * sinv;
    out.bottomRightCorner(q, q) = dinv + dinv * blocks.a3 * sinv * blocks.a2 * dinv;
  }
  return out;
}

MatrixXd inverse_hessian_limit(const HessianBlocks& blocks) {
  const Index pp = as_index(blocks.p);
  const Index q = blocks.d.rows();
  MatrixXd out = MatrixXd::Zero(pp + q, pp + q);
  if (q > 0) out.bottomRightCorner(q, q) = spd_inverse(blocks.d, "D");
  return out;
}

DetGrowth det_growth_check(const HessianBlocks& blocks, double s) {
  if (!(s > 0.0)) throw InputError("det_growth_check needs s > 0", "s");
  MatrixXd g = blocks.assemble();
  g.topLeftCorner(as_index(blocks.p), as_index(blocks.p)).diagonal().array() += s;
  DetGrowth out;
  out.determinant = g.determinant();
  const double det_d = blocks.d.rows() > 0 ? blocks.d.determinant() : 1.0;
  out.leading = std::pow(s, static_cast<double>(blocks.p)) * det_d;
  return out;
}

namespace {

PolarizationFrame frame_from_inverse(const VectorXd& x, const MatrixXd& inverse_hessian) {
  const Index n = inverse_hessian.rows();
  PolarizationFrame f;
  f.basepoint = x;
  f.generators = Eigen::MatrixXcd::Zero(n, 2 * n);
  f.generators.leftCols(n) = inverse_hessian.cast<std::complex<double>>();
  f.generators.rightCols(n) = kI * Eigen::MatrixXcd::Identity(n, n);
  return f;
}

}  // namespace

PolarizationFrame polarization_frame_s(const MabuchiRay& ray, const VectorXd& x, double s) {
  if (!(s >= 0.0)) throw InputError("polarization_frame_s needs s >= 0", "s");
  const auto blocks = hessian_blocks(ray.base().hessian(x), ray.p());
  return frame_from_inverse(x, inverse_hessian_s(blocks, s));
}

PolarizationFrame polarization_frame_limit(const MabuchiRay& ray, const VectorXd& x) {
  const auto blocks = hessian_blocks(ray.base().hessian(x), ray.p());
  return frame_from_inverse(x, inverse_hessian_limit(blocks));
}

namespace {

Eigen::MatrixXcd orthonormal_span(const Eigen::MatrixXcd& rows) {
  const Eigen::MatrixXcd a = rows.transpose();
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(a, Eigen::ComputeThinU);
  const auto& sv = svd.singularValues();
  if (sv.size() == 0 || !(sv.minCoeff() > 1e-12 * sv.maxCoeff()))
    throw DomainError("grassmann_distance: frame is rank-deficient");
  return svd.matrixU();
}

}  // namespace

double grassmann_distance(const Eigen::MatrixXcd& rows1, const Eigen::MatrixXcd& rows2) {
  if (rows1.cols() != rows2.cols() || rows1.rows() != rows2.rows())
    throw InputError("grassmann_distance: frames have different shapes");
  const Eigen::MatrixXcd q1 = orthonormal_span(rows1);
  const Eigen::MatrixXcd q2 = orthonormal_span(rows2);
  // sin of the largest angle is the norm of the part of span(q2) outside span(q1).
  const Eigen::MatrixXcd residual = q2 - q1 * (q1.adjoint() * q2);
  Eigen::JacobiSVD<Eigen::MatrixXcd> rsvd(residual);
  const double sin_max = std::min(1.0, rsvd.singularValues().maxCoeff());
  if (sin_max < 0.7) return std::asin(sin_max);
  Eigen::JacobiSVD<Eigen::MatrixXcd> csvd(q1.adjoint() * q2);
  return std::acos(std::min(1.0, csvd.singularValues().minCoeff()));
}

double grassmann_distance(const PolarizationFrame& f1, const PolarizationFrame& f2) {
  return grassmann_distance(f1.generators, f2.generators);
}

double lagrangian_defect(const PolarizationFrame& frame) {
  const Index n = frame.generators.rows();
  const Eigen::MatrixXcd vx = frame.generators.leftCols(n);
  const Eigen::MatrixXcd vt = frame.generators.rightCols(n);
  const Eigen::MatrixXcd omega = vx * vt.transpose() - vt * vx.transpose();
  return omega.cwiseAbs().maxCoeff();
}

VectorXd log_det_gradient(const MatrixXd& inverse, const std::vector<MatrixXd>& derivatives) {
  VectorXd grad(as_index(derivatives.size()));
  for (std::size_t j = 0; j < derivatives.size(); ++j)
    grad[as_index(j)] = (inverse * derivatives[j]).trace();
  return grad;
}

ConnectionFormValue connection_form_s(const MabuchiRay& ray, const VectorXd& x, double s) {
  if (!(s >= 0.0)) throw InputError("connection_form_s needs s >= 0", "s");
  const auto blocks = hessian_blocks(ray.base().hessian(x), ray.p());
  const MatrixXd ginv = inverse_hessian_s(blocks, s);
  // sH has constant Hessian, so dG_s/dx = dG_0/dx.
  const VectorXd grad = log_det_gradient(ginv, ray.base().hessian_derivatives(x));
  const VectorXd correction = 0.25 * (ginv * grad);
  ConnectionFormValue out;
  out.basepoint = x;
  out.coefficients.resize(x.size());
  for (Index k = 0; k < x.size(); ++k) out.coefficients[k] = std::complex<double>(0.0, correction[k] - x[k]);
  return out;
}

namespace {

// d/dx_j log det D for every j = 1..n, and D^{-1}.
std::pair<VectorXd, MatrixXd> log_det_d_gradient(const MabuchiRay& ray, const VectorXd& x) {
  const auto blocks = hessian_blocks(ray.base().hessian(x), ray.p());
  const Index q = blocks.d.rows();
  const Index pp = as_index(ray.p());
  if (q == 0) return {VectorXd::Zero(x.size()), MatrixXd(0, 0)};
  const MatrixXd dinv = spd_inverse(blocks.d, "D");
  const auto dg = ray.base().hessian_derivatives(x);
  std::vector<MatrixXd> dd;
  dd.reserve(dg.size());
  for (const auto& m : dg) dd.push_back(m.bottomRightCorner(q, q));
  (void)pp;
  return {log_det_gradient(dinv, dd), dinv};
}

}  // namespace

ConnectionFormValue connection_form_limit(const MabuchiRay& ray, const VectorXd& x) {
  const Index pp = as_index(ray.p());
  const auto [grad, dinv] = log_det_d_gradient(ray, x);
  ConnectionFormValue out;
  out.basepoint = x;
  out.coefficients.resize(x.size());
  for (Index k = 0; k < pp; ++k) out.coefficients[k] = std::complex<double>(0.0, -x[k]);
  const Index q = x.size() - pp;
  if (q > 0) {
    const VectorXd correction = 0.25 * (dinv * grad.tail(q));
    for (Index k = 0; k < q; ++k)
      out.coefficients[pp + k] = std::complex<double>(0.0, correction[k] - x[pp + k]);
  }
  return out;
}

ConnectionFormValue connection_form_vertex_limit(const MabuchiRay& ray, const VertexChart& chart, const VectorXd& x) {
  const Index n = x.size();
  if (as_index(chart.matrix.size()) != n) throw InputError("vertex chart dimension does not match the ray");
  const Index pp = as_index(ray.p());
  const auto [grad, dinv] = log_det_d_gradient(ray, x);
  VectorXd correction = VectorXd::Zero(n);
  if (n > pp) correction.tail(n - pp) = 0.25 * (dinv * grad.tail(n - pp));

  MatrixXd av(n, n);
  VectorXd lambda_v(n);
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < n; ++j)
      av(i, j) = static_cast<double>(chart.matrix[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]);
    lambda_v[i] = to_double(chart.offsets[static_cast<std::size_t>(i)]);
  }
  const VectorXd xv = av * x + lambda_v;
  const VectorXd transported = av * correction;
  ConnectionFormValue out;
  out.basepoint = x;
  out.coefficients.resize(n);
  for (Index i = 0; i < n; ++i) out.coefficients[i] = std::complex<double>(0.0, transported[i] - xv[i] + 0.5);
  return out;
}

}  // namespace toricq
