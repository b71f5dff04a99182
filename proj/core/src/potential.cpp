#include "toricq/potential.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <string>

#include "toricq/errors.hpp"

namespace toricq {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

double xlogx(double l, double scale) {
  if (l <= kEps * scale) return 0.0;
  return l * std::log(l);
}

std::string point_string(const Eigen::VectorXd& x) {
  std::ostringstream ss;
  ss.precision(17);
  ss << "(";
  for (Eigen::Index i = 0; i < x.size(); ++i) ss << (i ? ", " : "") << x[i];
  ss << ")";
  return ss.str();
}

}  // namespace

QuadraticCorrection QuadraticCorrection::zero(std::size_t dim) {
  const auto n = static_cast<Eigen::Index>(dim);
  return {Eigen::MatrixXd::Zero(n, n), Eigen::VectorXd::Zero(n)};
}

bool QuadraticCorrection::is_zero() const { return q.isZero(0.0) && b.isZero(0.0); }

QuadraticCorrection parse_correction(std::string_view spec, std::size_t dim) {
  const auto n = static_cast<Eigen::Index>(dim);
  if (spec.empty() || spec == "none") return QuadraticCorrection::zero(dim);
  constexpr std::string_view prefix = "quadratic:";
  if (spec.substr(0, prefix.size()) != prefix)
    throw InputError("unknown correction '" + std::string(spec) + "'", "correction");
  std::string body(spec.substr(prefix.size()));
  if (body.size() < 2 || body.front() != '[' || body.back() != ']')
    throw InputError("quadratic correction needs a bracketed list", "correction");
  body = body.substr(1, body.size() - 2);
  std::vector<double> coeffs;
  std::stringstream ss(body);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      coeffs.push_back(std::stod(item));
    } catch (const std::exception&) {
      throw InputError("bad coefficient '" + item + "'", "correction");
    }
  }
  QuadraticCorrection h = QuadraticCorrection::zero(dim);
  if (static_cast<Eigen::Index>(coeffs.size()) == n) {
    for (Eigen::Index i = 0; i < n; ++i) h.q(i, i) = coeffs[static_cast<std::size_t>(i)];
  } else if (static_cast<Eigen::Index>(coeffs.size()) == n * n) {
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index j = 0; j < n; ++j) h.q(i, j) = coeffs[static_cast<std::size_t>(i * n + j)];
    if (!h.q.isApprox(h.q.transpose(), 1e-14)) throw InputError("quadratic correction must be symmetric", "correction");
  } else {
    throw InputError("quadratic correction needs n or n*n coefficients", "correction");
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(h.q, Eigen::EigenvaluesOnly);
  if (es.eigenvalues().minCoeff() < -1e-14)
    throw InputError("quadratic correction must be positive semidefinite", "correction");
  return h;
}

SymplecticPotential::SymplecticPotential(std::size_t dim, Eigen::MatrixXd normals, Eigen::VectorXd offsets,
                                         HPolyhedron domain)
    : dim_(dim),
      normals_(std::move(normals)),
      offsets_(std::move(offsets)),
      correction_(QuadraticCorrection::zero(dim)),
      domain_(std::move(domain)) {
  active_.resize(static_cast<std::size_t>(normals_.rows()));
  for (Eigen::Index r = 0; r < normals_.rows(); ++r)
    active_[static_cast<std::size_t>(r)] = !normals_.row(r).isZero(0.0);
  if (is_bounded(domain_)) {
    if (auto c = vertex_barycenter(domain_)) {
      Eigen::VectorXd bc(static_cast<Eigen::Index>(dim_));
      for (std::size_t j = 0; j < dim_; ++j) bc[static_cast<Eigen::Index>(j)] = to_double((*c)[j]);
      barycenter_ = bc;
    }
  }
}

SymplecticPotential SymplecticPotential::guillemin(const DelzantPolytope& poly) {
  return from_half_spaces(poly.dim(), poly.as_polyhedron().facets());
}

SymplecticPotential SymplecticPotential::from_half_spaces(std::size_t dim, const std::vector<HalfSpace>& half_spaces) {
  const auto d = static_cast<Eigen::Index>(half_spaces.size());
  const auto n = static_cast<Eigen::Index>(dim);
  Eigen::MatrixXd normals(d, n);
  Eigen::VectorXd offsets(d);
  for (Eigen::Index r = 0; r < d; ++r) {
    const auto& h = half_spaces[static_cast<std::size_t>(r)];
    if (h.normal.size() != dim) throw InputError("half-space dimension mismatch");
    for (Eigen::Index j = 0; j < n; ++j) normals(r, j) = to_double(h.normal[static_cast<std::size_t>(j)]);
    offsets[r] = to_double(h.offset);
  }
  return SymplecticPotential(dim, std::move(normals), std::move(offsets), HPolyhedron(dim, half_spaces));
}

SymplecticPotential SymplecticPotential::with_correction(const QuadraticCorrection& h) const {
  const auto n = static_cast<Eigen::Index>(dim_);
  if (h.q.rows() != n || h.q.cols() != n || h.b.size() != n) throw InputError("correction dimension mismatch");
  SymplecticPotential out = *this;
  out.correction_.q = correction_.q + h.q;
  out.correction_.b = correction_.b + h.b;
  return out;
}

Eigen::VectorXd SymplecticPotential::facet_values(const Eigen::VectorXd& x) const {
  return normals_ * x + offsets_;
}

bool SymplecticPotential::is_interior(const Eigen::VectorXd& x) const {
  if (x.size() != static_cast<Eigen::Index>(dim_) || !x.allFinite()) return false;
  const Eigen::VectorXd l = facet_values(x);
  for (Eigen::Index r = 0; r < l.size(); ++r) {
    if (active_[static_cast<std::size_t>(r)] ? !(l[r] > 0.0) : l[r] < 0.0) return false;
  }
  return true;
}

void SymplecticPotential::require_interior(const Eigen::VectorXd& x, const char* who) const {
  if (!is_interior(x)) throw DomainError(std::string(who) + ": point " + point_string(x) + " is not interior");
}

double SymplecticPotential::guillemin_value(const Eigen::VectorXd& x) const {
  require_interior(x, "guillemin_value");
  const Eigen::VectorXd l = facet_values(x);
  double s = 0.0;
  for (Eigen::Index r = 0; r < l.size(); ++r) {
    const double scale = std::max(1.0, std::abs(offsets_[r]) + normals_.row(r).cwiseAbs().sum());
    s += xlogx(l[r], scale);
  }
  return 0.5 * s;
}

double SymplecticPotential::value(const Eigen::VectorXd& x) const {
  return guillemin_value(x) + 0.5 * x.dot(correction_.q * x) + correction_.b.dot(x);
}

Eigen::VectorXd SymplecticPotential::gradient(const Eigen::VectorXd& x) const {
  require_interior(x, "gradient");
  const Eigen::VectorXd l = facet_values(x);
  Eigen::VectorXd y = correction_.q * x + correction_.b;
  for (Eigen::Index r = 0; r < l.size(); ++r) {
    if (!active_[static_cast<std::size_t>(r)]) continue;
    y += 0.5 * (std::log(l[r]) + 1.0) * normals_.row(r).transpose();
  }
  return y;
}

Eigen::MatrixXd SymplecticPotential::hessian(const Eigen::VectorXd& x) const {
  require_interior(x, "hessian");
  const Eigen::VectorXd l = facet_values(x);
  Eigen::MatrixXd g = correction_.q;
  for (Eigen::Index r = 0; r < l.size(); ++r) {
    if (!active_[static_cast<std::size_t>(r)]) continue;
    const Eigen::VectorXd nu = normals_.row(r).transpose();
    g.noalias() += (0.5 / l[r]) * nu * nu.transpose();
  }
  return g;
}

std::vector<Eigen::MatrixXd> SymplecticPotential::hessian_derivatives(const Eigen::VectorXd& x) const {
  require_interior(x, "hessian_derivatives");
  const auto n = static_cast<Eigen::Index>(dim_);
  const Eigen::VectorXd l = facet_values(x);
  std::vector<Eigen::MatrixXd> out(dim_, Eigen::MatrixXd::Zero(n, n));
  for (Eigen::Index r = 0; r < l.size(); ++r) {
    if (!active_[static_cast<std::size_t>(r)]) continue;
    const Eigen::VectorXd nu = normals_.row(r).transpose();
    const Eigen::MatrixXd outer = nu * nu.transpose();
    const double w = -0.5 / (l[r] * l[r]);
    for (Eigen::Index j = 0; j < n; ++j)
      if (nu[j] != 0.0) out[static_cast<std::size_t>(j)] += (w * nu[j]) * outer;
  }
  return out;
}

KahlerPointData kahler_data(const SymplecticPotential& pot, const Eigen::VectorXd& x) {
  KahlerPointData d;
  d.x = x;
  d.g = pot.value(x);
  d.y = pot.gradient(x);
  d.hessian = pot.hessian(x);
  d.kahler_potential = x.dot(d.y) - d.g;
  d.complex_structure = complex_structure(pot, x).j;
  return d;
}

Eigen::VectorXd legendre_forward(const SymplecticPotential& pot, const Eigen::VectorXd& x) {
  return pot.gradient(x);
}

Eigen::VectorXd legendre_inverse(const SymplecticPotential& pot, const Eigen::VectorXd& y, const LegendreOptions& opts) {
  if (!pot.barycenter()) throw DomainError("legendre_inverse: domain is unbounded or has no vertices");
  if (y.size() != static_cast<Eigen::Index>(pot.dim()) || !y.allFinite())
    throw DomainError("legendre_inverse: target has wrong dimension or is not finite");
  Eigen::VectorXd x = *pot.barycenter();
  auto merit = [&](const Eigen::VectorXd& z) { return pot.value(z) - y.dot(z); };
  Eigen::VectorXd residual = pot.gradient(x) - y;
  double res_norm = residual.norm();
  // Near a facet the residual cannot drop below |G| * ulp(x); stop once Newton steps stall there.
  bool at_resolution = false;
  for (int it = 0; it < opts.max_iterations && res_norm > opts.residual_tolerance; ++it) {
    const Eigen::VectorXd step = -pot.hessian(x).llt().solve(residual);
    if (step.cwiseAbs().maxCoeff() <= 8.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, x.cwiseAbs().maxCoeff())) {
      at_resolution = true;
      break;
    }
    const double phi = merit(x);
    std::optional<Eigen::VectorXd> fallback;
    bool accepted = false;
    for (double t = 1.0; t > 1e-30; t *= 0.5) {
      Eigen::VectorXd trial = x + t * step;
      if (!pot.is_interior(trial)) continue;
      Eigen::VectorXd trial_res = pot.gradient(trial) - y;
      if (trial_res.norm() < res_norm) {
        x = std::move(trial);
        residual = std::move(trial_res);
        accepted = true;
        break;
      }
      if (!fallback && merit(trial) < phi) fallback = trial;
    }
    if (!accepted) {
      if (!fallback) throw ConvergenceError("legendre_inverse: line search failed", res_norm);
      x = *fallback;
      residual = pot.gradient(x) - y;
    }
    res_norm = residual.norm();
  }
  if (!(res_norm <= opts.residual_tolerance) && !at_resolution)
    throw ConvergenceError("legendre_inverse: no convergence, residual " + std::to_string(res_norm), res_norm);
  return x;
}

double regularity_delta(const SymplecticPotential& pot, const Eigen::VectorXd& x) {
  const Eigen::MatrixXd g = pot.hessian(x);
  const Eigen::VectorXd l = pot.facet_values(x);
  double prod = 1.0;
  for (Eigen::Index r = 0; r < l.size(); ++r)
    if (!pot.normals().row(r).isZero(0.0)) prod *= l[r];
  return 1.0 / (g.determinant() * prod);
}

ComplexStructure complex_structure(const SymplecticPotential& pot, const Eigen::VectorXd& x) {
  const Eigen::MatrixXd g = pot.hessian(x);
  const Eigen::Index n = g.rows();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(g, Eigen::EigenvaluesOnly);
  ComplexStructure cs;
  cs.condition_number = es.eigenvalues().maxCoeff() / es.eigenvalues().minCoeff();
  cs.ill_conditioned = !(cs.condition_number <= 1e12);
  const Eigen::MatrixXd ginv = g.llt().solve(Eigen::MatrixXd::Identity(n, n));
  cs.j = Eigen::MatrixXd::Zero(2 * n, 2 * n);
  cs.j.topRightCorner(n, n) = -ginv;
  cs.j.bottomLeftCorner(n, n) = g;
  return cs;
}

double abreu_scalar_curvature(const SymplecticPotential& pot, const Eigen::VectorXd& x) {
  pot.require_interior(x, "abreu_scalar_curvature");
  const Eigen::Index n = x.size();
  const Eigen::VectorXd l = pot.facet_values(x);
  double h_max = std::numeric_limits<double>::infinity();
  for (Eigen::Index r = 0; r < l.size(); ++r) {
    const double reach = pot.normals().row(r).cwiseAbs().maxCoeff();
    if (reach > 0.0) h_max = std::min(h_max, l[r] / (4.0 * reach));
  }
  const double h0 = std::min(1e-2 * std::max(1.0, x.cwiseAbs().maxCoeff()), h_max);
  if (!(h0 > 1e-7)) throw DomainError("abreu_scalar_curvature: finite-difference step underflows near the boundary");

  auto inverse_hessian = [&](const Eigen::VectorXd& z) {
    return Eigen::MatrixXd(pot.hessian(z).llt().solve(Eigen::MatrixXd::Identity(n, n)));
  };
  const Eigen::MatrixXd center = inverse_hessian(x);
  auto second_difference_sum = [&](double h) {
    double total = 0.0;
    for (Eigen::Index j = 0; j < n; ++j) {
      Eigen::VectorXd ej = Eigen::VectorXd::Unit(n, j) * h;
      total += (inverse_hessian(x + ej)(j, j) - 2.0 * center(j, j) + inverse_hessian(x - ej)(j, j)) / (h * h);
      for (Eigen::Index k = j + 1; k < n; ++k) {
        Eigen::VectorXd ek = Eigen::VectorXd::Unit(n, k) * h;
        const double mixed = inverse_hessian(x + ej + ek)(j, k) - inverse_hessian(x + ej - ek)(j, k) -
                             inverse_hessian(x - ej + ek)(j, k) + inverse_hessian(x - ej - ek)(j, k);
        total += 2.0 * mixed / (4.0 * h * h);
      }
    }
    return total;
  };
  const double d1 = second_difference_sum(h0);
  const double d2 = second_difference_sum(h0 / 2);
  const double d3 = second_difference_sum(h0 / 4);
  const double r1 = (4.0 * d2 - d1) / 3.0;
  const double r2 = (4.0 * d3 - d2) / 3.0;
  const double extrapolated = (16.0 * r2 - r1) / 15.0;
  return -0.5 * extrapolated;
}

}  // namespace toricq
