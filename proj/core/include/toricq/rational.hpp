#pragma once

// Exact rational arithmetic used by every combinatorial predicate on polytopes.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace toricq {

using Integer = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

using IntVector = std::vector<std::int64_t>;
using RationalVector = std::vector<Rational>;

// Accepts "p/q", integers, and decimal/scientific literals ("0.25", "-1e-3"); all exact.
Rational parse_rational(std::string_view text);
std::string to_string(const Rational& q);
double to_double(const Rational& q);

Integer floor_of(const Rational& q);
Integer ceil_of(const Rational& q);

RationalVector to_rational(const IntVector& v);
std::vector<double> to_double(const RationalVector& v);

// Dense row-major rational matrix; only what vertex enumeration and frame changes need.
class RationalMatrix {
 public:
  RationalMatrix() = default;
  RationalMatrix(std::size_t rows, std::size_t cols);
  static RationalMatrix identity(std::size_t n);
  static RationalMatrix from_rows(const std::vector<IntVector>& rows);
  static RationalMatrix from_rows(const std::vector<RationalVector>& rows);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  Rational& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const Rational& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  RationalMatrix transpose() const;
  RationalVector operator*(const RationalVector& v) const;
  RationalMatrix operator*(const RationalMatrix& other) const;
  bool operator==(const RationalMatrix& other) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Rational> data_;
};

Rational determinant(RationalMatrix a);
std::size_t rank(RationalMatrix a);
// Unique solution of a·x = b, or nullopt when a is singular.
std::optional<RationalVector> solve(RationalMatrix a, RationalVector b);
std::optional<RationalMatrix> inverse(const RationalMatrix& a);
// Basis of {x : a·x = 0}.
std::vector<RationalVector> null_space(RationalMatrix a);

Rational dot(const RationalVector& a, const RationalVector& b);
Rational dot(const IntVector& a, const RationalVector& b);

std::int64_t gcd_of(const IntVector& v);

}  // namespace toricq
