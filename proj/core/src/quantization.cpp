#include "toricq/quantization.hpp"

#include <cmath>
#include <numbers>

#include "toricq/errors.hpp"

namespace toricq {

namespace {

using Eigen::Index;
using Eigen::MatrixXd;
using Eigen::VectorXd;

VectorXd to_eigen(const IntVector& m) {
  VectorXd v(static_cast<Index>(m.size()));
  for (std::size_t i = 0; i < m.size(); ++i) v[static_cast<Index>(i)] = static_cast<double>(m[i]);
  return v;
}

double half_log_det_spd(const MatrixXd& a) {
  if (a.rows() == 0) return 0.0;
  Eigen::LLT<MatrixXd> llt(a);
  if (llt.info() != Eigen::Success) throw DomainError("Hessian block is not positive-definite");
  return llt.matrixLLT().diagonal().array().log().sum();
}

void check_point(const MabuchiRay& ray, const IntVector& m) {
  if (m.size() != ray.dim()) throw InputError("lattice point has the wrong dimension", "m");
  if (!ray.base().is_interior(to_eigen(m)))
    throw DomainError("lattice point is not interior to the polytope (use the corrected polytope)");
}

}  // namespace

double hamiltonian_value(const IntVector& m, std::size_t p) {
  if (p > m.size()) throw InputError("p exceeds the dimension", "p");
  double h = 0.0;
  for (std::size_t j = 0; j < p; ++j) h += static_cast<double>(m[j]) * static_cast<double>(m[j]);
  return 0.5 * h;
}

std::vector<QuantumBasisElement> quantum_basis(const DelzantPolytope& poly, std::size_t p) {
  if (p < 1 || p > poly.dim()) throw InputError("quantum_basis needs 1 <= p <= n", "p");
  std::vector<QuantumBasisElement> out;
  for (auto& m : lattice_points(poly)) {
    QuantumBasisElement e;
    e.hamiltonian = hamiltonian_value(m, p);
    e.index = out.size();
    e.m = std::move(m);
    out.push_back(std::move(e));
  }
  return out;
}

NormValue norm_squared(const MabuchiRay& ray, const IntVector& m, double s, const QuadratureOptions& opts) {
  if (!(s >= 0.0) || !std::isfinite(s)) throw InputError("norm_squared needs finite s >= 0", "s");
  check_point(ray, m);
  const SymplecticPotential& pot = ray.base();
  const VectorXd mv = to_eigen(m);
  const auto p = static_cast<Index>(ray.p());

  const Integrand f = [&](const VectorXd& x) {
    const VectorXd d = x - mv;
    MatrixXd g = pot.hessian(x);
    g.topLeftCorner(p, p).diagonal().array() += s;
    const double e = -s * d.head(p).squaredNorm() - 2.0 * (d.dot(pot.gradient(x)) - pot.value(x)) + half_log_det_spd(g);
    return std::exp(e);
  };
  // Fanning from m puts the Gaussian peak on a shared vertex of every initial cell.
  const IntegrationRegion region = triangulate(pot.domain(), to_rational(m));
  const IntegralResult r = integrate(f, region, opts);

  NormValue out;
  out.s = s;
  out.tilde_norm_squared = r.value;
  out.norm_squared = std::exp(2.0 * s * hamiltonian_value(m, ray.p())) * r.value;
  out.error_estimate = r.error_estimate;
  out.cells_used = r.cells_used;
  out.converged = r.converged;
  return out;
}

double gcst_factor(const IntVector& m, std::size_t p, double s) {
  if (!(s >= 0.0)) throw InputError("gcst_factor needs s >= 0", "s");
  return std::exp(-s * hamiltonian_value(m, p));
}

GcstMap::GcstMap(std::vector<QuantumBasisElement> basis, double source, double target)
    : basis_(std::move(basis)), source_(source), target_(target) {
  factors_.reserve(basis_.size());
  for (const auto& e : basis_) factors_.push_back(std::exp(-(target_ - source_) * e.hamiltonian));
}

GcstMap::GcstMap(std::vector<QuantumBasisElement> basis, double source, double target, std::vector<double> factors)
    : basis_(std::move(basis)), source_(source), target_(target), factors_(std::move(factors)) {}

GcstMap GcstMap::compose(const GcstMap& first) const {
  if (first.target_ != source_) throw InputError("gCST maps do not chain: first target differs from source");
  if (first.basis_.size() != basis_.size()) throw InputError("gCST maps act on different bases");
  std::vector<double> f(factors_.size());
  for (std::size_t i = 0; i < f.size(); ++i) f[i] = factors_[i] * first.factors_[i];
  return GcstMap(basis_, first.source_, target_, std::move(f));
}

GcstMap GcstMap::inverse() const {
  std::vector<double> f(factors_.size());
  for (std::size_t i = 0; i < f.size(); ++i) f[i] = 1.0 / factors_[i];
  return GcstMap(basis_, target_, source_, std::move(f));
}

LimitConstant limit_constant_cm(const MabuchiRay& ray, const IntVector& m, const QuadratureOptions& opts) {
  check_point(ray, m);
  const SymplecticPotential& pot = ray.base();
  const VectorXd mv = to_eigen(m);
  const std::size_t pp = ray.p();
  const auto p = static_cast<Index>(pp);
  const Index q = static_cast<Index>(ray.dim()) - p;

  const Integrand f = [&](const VectorXd& x) {
    const VectorXd d = (x - mv).tail(q);
    const VectorXd y = pot.gradient(x).tail(q);
    const MatrixXd lower = pot.hessian(x).bottomRightCorner(q, q);
    return std::exp(-2.0 * (d.dot(y) - pot.value(x)) + half_log_det_spd(lower));
  };
  RationalVector level;
  for (std::size_t j = 0; j < pp; ++j) level.emplace_back(m[j]);
  const IntegralResult r = integrate_slice(f, pot.domain(), pp, level, opts);

  LimitConstant out;
  out.c_m = r.value;
  out.limit = r.value * std::pow(std::numbers::pi, 0.5 * static_cast<double>(pp));
  out.error_estimate = r.error_estimate;
  out.cells_used = r.cells_used;
  out.converged = r.converged;
  return out;
}

std::vector<LimitEntry> hermitian_limit_table(const MabuchiRay& ray, const std::vector<QuantumBasisElement>& basis,
                                              const QuadratureOptions& opts) {
  if (basis.empty()) throw InputError("hermitian_limit_table needs a nonempty basis");
  std::vector<LimitEntry> out;
  out.reserve(basis.size());
  for (const auto& e : basis) out.push_back({e.m, limit_constant_cm(ray, e.m, opts)});
  return out;
}

double richardson_extrapolate(const std::vector<double>& s, const std::vector<double>& values) {
  if (s.size() != values.size() || s.empty()) throw InputError("extrapolation needs matching nonempty grids");
  std::vector<double> h(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (!(s[i] > 0.0)) throw InputError("extrapolation grid must be positive", "s-grid");
    h[i] = 1.0 / s[i];
  }
  // Neville's tableau evaluated at h = 0.
  std::vector<double> t = values;
  for (std::size_t k = 1; k < t.size(); ++k)
    for (std::size_t i = t.size() - 1; i >= k; --i) {
      t[i] = (h[i - k] * t[i] - h[i] * t[i - 1]) / (h[i - k] - h[i]);
      if (i == k) break;
    }
  return t.back();
}

ConvergenceReport verify_norm_limit(const MabuchiRay& ray, const IntVector& m, const std::vector<double>& s_grid,
                                    double tol, const QuadratureOptions& opts) {
  if (s_grid.size() < 3) throw InputError("verify_norm_limit needs at least 3 grid points", "s-grid");
  for (std::size_t i = 0; i < s_grid.size(); ++i) {
    if (!(s_grid[i] > 0.0)) throw InputError("s-grid entries must be positive", "s-grid");
    if (i > 0 && !(s_grid[i] > s_grid[i - 1])) throw InputError("s-grid must be increasing", "s-grid");
  }
  ConvergenceReport rep;
  rep.m = m;
  rep.converged = true;
  std::vector<double> tilde;
  for (double s : s_grid) {
    rep.values.push_back(norm_squared(ray, m, s, opts));
    tilde.push_back(rep.values.back().tilde_norm_squared);
    rep.converged = rep.converged && rep.values.back().converged;
  }
  rep.extrapolated = richardson_extrapolate(s_grid, tilde);
  rep.target = limit_constant_cm(ray, m, opts);
  rep.converged = rep.converged && rep.target.converged;
  rep.pass = std::abs(rep.extrapolated - rep.target.limit) <= std::max(tol, 0.02 * rep.target.limit);
  return rep;
}

std::map<IntVector, std::vector<QuantumBasisElement>> decomposition(const std::vector<QuantumBasisElement>& basis,
                                                                    std::size_t p) {
  std::map<IntVector, std::vector<QuantumBasisElement>> out;
  for (const auto& e : basis) {
    if (p < 1 || p > e.m.size()) throw InputError("decomposition needs 1 <= p <= n", "p");
    out[IntVector(e.m.begin(), e.m.begin() + static_cast<std::ptrdiff_t>(p))].push_back(e);
  }
  return out;
}

std::map<IntVector, std::vector<QuantumBasisElement>> decomposition(const DelzantPolytope& poly, std::size_t p) {
  return decomposition(quantum_basis(poly, p), p);
}

}  // namespace toricq
