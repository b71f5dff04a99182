#include <gtest/gtest.h>

#include <cmath>

#include <boost/math/constants/constants.hpp>

#include "oracles.hpp"
#include "toricq/errors.hpp"
#include "toricq/polytope_io.hpp"
#include "toricq/quantization.hpp"

using namespace toricq;
using toricq::testing::data_path;

namespace {

const double kPi = boost::math::constants::pi<double>();

MabuchiRay ray_for(const char* file, std::size_t p) {
  return MabuchiRay(SymplecticPotential::guillemin(load_polytope(data_path(file))), p);
}

// Norm integral on [-1/2, 3/2] written out by hand, in the variable x = -1/2 + 2 sin^2(t)
// which removes the endpoint square-root behaviour of the half-form.
double segment_tilde_oracle(double m, double s) {
  const double half_pi = kPi / 2.0;
  auto f = [&](double t) {
    const double l1 = 2.0 * std::sin(t) * std::sin(t);
    const double l2 = 2.0 * std::cos(t) * std::cos(t);
    if (l1 <= 0.0 || l2 <= 0.0) return 0.0;
    const double x = -0.5 + l1;
    const double g = 0.5 * (l1 * std::log(l1) + l2 * std::log(l2));
    const double y = 0.5 * (std::log(l1) - std::log(l2));
    const double hess = 0.5 * (1.0 / l1 + 1.0 / l2) + s;
    const double jac = 4.0 * std::sin(t) * std::cos(t);
    return std::exp(-s * (x - m) * (x - m) - 2.0 * ((x - m) * y - g)) * std::sqrt(hess) * jac;
  };
  return toricq::testing::simpson(f, 0.0, half_pi, 200000);
}

double segment_g(double x) {
  const double l1 = x + 0.5, l2 = 1.5 - x;
  return 0.5 * (l1 * std::log(l1) + l2 * std::log(l2));
}

}  // namespace

TEST(QuantumBasis, Examples) {
  const auto seg = quantum_basis(load_polytope(data_path("cp1_corrected.json")), 1);
  ASSERT_EQ(seg.size(), 2u);
  EXPECT_EQ(seg[0].m, (IntVector{0}));
  EXPECT_EQ(seg[0].hamiltonian, 0.0);
  EXPECT_EQ(seg[1].m, (IntVector{1}));
  EXPECT_EQ(seg[1].hamiltonian, 0.5);

  const auto sq = load_polytope(data_path("square_corrected.json"));
  const auto b1 = quantum_basis(sq, 1);
  ASSERT_EQ(b1.size(), 4u);
  std::vector<double> h1;
  for (const auto& e : b1) h1.push_back(e.hamiltonian);
  EXPECT_EQ(h1, (std::vector<double>{0, 0, 0.5, 0.5}));
  const auto b2 = quantum_basis(sq, 2);
  std::vector<double> h2;
  for (const auto& e : b2) h2.push_back(e.hamiltonian);
  EXPECT_EQ(h2, (std::vector<double>{0, 0.5, 0.5, 1}));
  for (std::size_t i = 0; i < b2.size(); ++i) EXPECT_EQ(b2[i].index, i);
}

TEST(NormSquared, SegmentAtZeroMatchesSimpsonOracle) {
  const auto ray = ray_for("cp1_corrected.json", 1);
  QuadratureOptions opts;
  opts.tolerance = 1e-10;
  for (int m : {0, 1}) {
    const auto v = norm_squared(ray, {m}, 0.0, opts);
    EXPECT_TRUE(v.converged);
    EXPECT_NEAR(v.norm_squared, segment_tilde_oracle(m, 0.0), 1e-7) << m;
    EXPECT_EQ(v.norm_squared, v.tilde_norm_squared);
  }
}

TEST(NormSquared, SegmentAtPositiveSMatchesOracle) {
  const auto ray = ray_for("cp1_corrected.json", 1);
  QuadratureOptions opts;
  opts.tolerance = 1e-10;
  for (double s : {1.0, 10.0, 100.0}) {
    const auto v = norm_squared(ray, {1}, s, opts);
    EXPECT_NEAR(v.tilde_norm_squared, segment_tilde_oracle(1.0, s), 1e-7) << s;
    EXPECT_NEAR(v.norm_squared, v.tilde_norm_squared * std::exp(2.0 * s * 0.5), 1e-12 * v.norm_squared);
  }
}

TEST(NormSquared, ZeroHamiltonianLeavesNormUnscaled) {
  const auto ray = ray_for("square_corrected.json", 1);
  const auto v = norm_squared(ray, {0, 1}, 7.0);
  EXPECT_EQ(v.norm_squared, v.tilde_norm_squared);
}

TEST(NormSquared, ProductSquareFactorizes) {
  const auto sq = ray_for("square_corrected.json", 1);
  const auto seg_ray = ray_for("cp1_corrected.json", 1);
  QuadratureOptions opts;
  opts.tolerance = 1e-11;
  for (double s : {0.0, 3.0, 20.0}) {
    for (const IntVector& m : {IntVector{0, 0}, IntVector{1, 0}, IntVector{0, 1}}) {
      const double first = norm_squared(seg_ray, {m[0]}, s, opts).tilde_norm_squared;
      const double second = norm_squared(seg_ray, {m[1]}, 0.0, opts).tilde_norm_squared;
      EXPECT_NEAR(norm_squared(sq, m, s, opts).tilde_norm_squared, first * second, 1e-8) << s;
    }
  }
}

TEST(NormSquared, TildeSequencesAreMonotoneOnDoublingGrids) {
  struct Case {
    const char* file;
    std::size_t p;
    IntVector m;
  };
  for (const auto& c : {Case{"cp1_corrected.json", 1, {0}}, Case{"cp1_corrected.json", 1, {1}},
                        Case{"square_corrected.json", 1, {1, 0}}, Case{"cp2_corrected.json", 2, {0, 0}},
                        Case{"hirzebruch1_corrected.json", 1, {0, 1}}}) {
    const auto ray = ray_for(c.file, c.p);
    std::vector<double> v;
    for (double s = 2.0; s <= 64.0; s *= 2.0) v.push_back(norm_squared(ray, c.m, s).tilde_norm_squared);
    const double slack = 1e-8;
    bool up = true, down = true;
    for (std::size_t i = 1; i < v.size(); ++i) {
      up = up && v[i] >= v[i - 1] - slack;
      down = down && v[i] <= v[i - 1] + slack;
    }
    EXPECT_TRUE(up || down) << c.file;
  }
}

TEST(NormSquared, Errors) {
  const auto ray = ray_for("cp1_corrected.json", 1);
  EXPECT_THROW(norm_squared(ray, {0}, -1.0), InputError);
  EXPECT_THROW(norm_squared(ray, {0, 0}, 1.0), InputError);
  EXPECT_THROW(norm_squared(ray, {2}, 1.0), DomainError);
}

TEST(Gcst, FactorLaws) {
  EXPECT_EQ(gcst_factor({0, 5}, 1, 30.0), 1.0);
  EXPECT_NEAR(gcst_factor({1}, 1, 2.0), std::exp(-1.0), 1e-16);
  for (double s1 : {0.0, 0.3, 2.0, 11.0})
    for (double s2 : {0.1, 1.0, 5.5}) {
      const IntVector m{2, 1};
      EXPECT_NEAR(gcst_factor(m, 2, s1) * gcst_factor(m, 2, s2), gcst_factor(m, 2, s1 + s2), 1e-15);
    }
}

TEST(Gcst, MapCompositionAndInverse) {
  const auto basis = quantum_basis(load_polytope(data_path("square_corrected.json")), 2);
  const GcstMap a(basis, 0.0, 1.5), b(basis, 1.5, 4.0);
  const auto ab = b.compose(a);
  EXPECT_EQ(ab.source(), 0.0);
  EXPECT_EQ(ab.target(), 4.0);
  const GcstMap direct(basis, 0.0, 4.0);
  const auto inv = direct.inverse();
  for (std::size_t i = 0; i < basis.size(); ++i) {
    EXPECT_NEAR(ab.factors()[i], direct.factors()[i], 1e-15);
    EXPECT_NEAR(ab.factors()[i], gcst_factor(basis[i].m, 2, 4.0), 1e-15);
    EXPECT_NEAR(inv.factors()[i] * direct.factors()[i], 1.0, 1e-15);
  }
  EXPECT_THROW(a.compose(a), InputError);
}

TEST(LimitConstant, SegmentClosedForm) {
  const auto ray = ray_for("cp1_corrected.json", 1);
  const double c0 = std::sqrt(0.5) * std::pow(1.5, 1.5);
  EXPECT_NEAR(c0, 1.29904, 1e-5);
  const auto l0 = limit_constant_cm(ray, {0});
  const auto l1 = limit_constant_cm(ray, {1});
  EXPECT_NEAR(l0.c_m, c0, 1e-12);
  EXPECT_NEAR(l1.c_m, c0, 1e-12);
  EXPECT_NEAR(l0.limit, c0 * std::sqrt(kPi), 1e-12);
  EXPECT_NEAR(l0.c_m, std::exp(2.0 * segment_g(0.0)), 1e-12);
}

TEST(LimitConstant, SquareMatchesOneDimensionalOracle) {
  const auto ray = ray_for("square_corrected.json", 1);
  QuadratureOptions opts;
  opts.tolerance = 1e-11;
  const auto c = limit_constant_cm(ray, {0, 0}, opts);
  EXPECT_TRUE(c.converged);
  const double oracle = std::exp(2.0 * segment_g(0.0)) * segment_tilde_oracle(0.0, 0.0);
  EXPECT_NEAR(c.c_m, oracle, 1e-7);
}

TEST(HermitianTable, Segment) {
  const auto ray = ray_for("cp1_corrected.json", 1);
  const auto basis = quantum_basis(load_polytope(data_path("cp1_corrected.json")), 1);
  const auto table = hermitian_limit_table(ray, basis);
  ASSERT_EQ(table.size(), basis.size());
  for (const auto& e : table) EXPECT_NEAR(e.value.limit, 2.3025, 1e-4);
}

TEST(HermitianTable, PointSlicesAreClosedForm) {
  const auto poly = load_polytope(data_path("cp2_corrected.json"));
  const auto ray = MabuchiRay(SymplecticPotential::guillemin(poly), 2);
  const auto basis = quantum_basis(poly, 2);
  const auto table = hermitian_limit_table(ray, basis);
  ASSERT_EQ(table.size(), basis.size());
  for (const auto& e : table) {
    const Eigen::VectorXd m = Eigen::Vector2d(static_cast<double>(e.m[0]), static_cast<double>(e.m[1]));
    EXPECT_NEAR(e.value.limit, kPi * std::exp(2.0 * ray.base().value(m)), 1e-12);
  }
}

TEST(Richardson, RecoversPolynomialsInInverseS) {
  const std::vector<double> s{10, 20, 40, 80};
  std::vector<double> v;
  for (double si : s) v.push_back(3.0 + 2.0 / si - 5.0 / (si * si));
  EXPECT_NEAR(richardson_extrapolate(s, v), 3.0, 1e-12);
  EXPECT_THROW(richardson_extrapolate({1.0}, {1.0, 2.0}), InputError);
}

TEST(VerifyNormLimit, SegmentAndSquare) {
  const auto seg = verify_norm_limit(ray_for("cp1_corrected.json", 1), {0}, {10, 20, 40, 80}, 1e-8);
  EXPECT_TRUE(seg.pass);
  EXPECT_TRUE(seg.converged);
  EXPECT_NEAR(seg.target.limit, 2.3025, 1e-4);
  EXPECT_NEAR(seg.extrapolated, seg.target.limit, 0.02 * seg.target.limit);
  ASSERT_EQ(seg.values.size(), 4u);

  const auto sq = verify_norm_limit(ray_for("square_corrected.json", 1), {0, 0}, {10, 20, 40}, 1e-8);
  EXPECT_TRUE(sq.pass);

  const auto full = verify_norm_limit(ray_for("square_corrected.json", 2), {1, 0}, {10, 20, 40}, 1e-8);
  EXPECT_TRUE(full.pass);
  EXPECT_NEAR(full.target.limit, kPi * std::exp(2.0 * (segment_g(1.0) + segment_g(0.0))), 1e-12);
}

TEST(VerifyNormLimit, RejectsBadGrids) {
  const auto ray = ray_for("cp1_corrected.json", 1);
  EXPECT_THROW(verify_norm_limit(ray, {0}, {10, 20}, 1e-8), InputError);
  EXPECT_THROW(verify_norm_limit(ray, {0}, {10, 5, 40}, 1e-8), InputError);
  EXPECT_THROW(verify_norm_limit(ray, {0}, {0, 5, 40}, 1e-8), InputError);
}

TEST(Decomposition, Examples) {
  const auto sq = load_polytope(data_path("square_corrected.json"));
  const auto d1 = decomposition(sq, 1);
  ASSERT_EQ(d1.size(), 2u);
  EXPECT_EQ(d1.at({0}).size(), 2u);
  EXPECT_EQ(d1.at({1}).size(), 2u);
  const auto d2 = decomposition(sq, 2);
  EXPECT_EQ(d2.size(), 4u);
  for (const auto& [key, group] : d2) EXPECT_EQ(group.size(), 1u);

  // width-1/3 strip: every slice misses the lattice
  const auto strip = toricq::testing::make_polytope({{1, 0}, {-1, 0}, {0, 1}, {0, -1}}, {"0", "2", "-1/3", "2/3"});
  EXPECT_TRUE(decomposition(strip, 1).empty());
}

TEST(Decomposition, CountsAddUpToTheBasis) {
  for (const char* file : {"cp2_corrected.json", "hirzebruch1_corrected.json", "cube3_corrected.json", "simplex2.json"}) {
    const auto poly = load_polytope(data_path(file));
    for (std::size_t p = 1; p <= poly.dim(); ++p) {
      std::size_t total = 0;
      for (const auto& [key, group] : decomposition(poly, p)) {
        EXPECT_FALSE(group.empty());
        total += group.size();
      }
      EXPECT_EQ(total, quantum_basis(poly, p).size()) << file << " p=" << p;
    }
  }
}
