#pragma once

// Symplectic reduction at moment-map level sets. The reduced potential is the
// Guillemin-form sum over every inherited facet function, so it agrees with the
// ambient potential restricted to the slice.

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "toricq/polytope.hpp"
#include "toricq/potential.hpp"

namespace toricq {

enum class ReducedClass { delzant, orbifold, worse };
std::string to_string(ReducedClass c);

struct ReducedStructure {
  SlicePolytope slice;
  SymplecticPotential potential;
  ReducedClass classification = ReducedClass::worse;
  std::vector<VertexReport> vertices;           // of the pruned slice polytope
  std::vector<std::size_t> non_primitive;       // pruned facet indices with integral, non-primitive normals
  std::vector<RationalVector> over_vertexed;    // vertices with more active facets than the slice dimension
};

// Axis reduction x_1..x_p = c. Throws DomainError for an empty slice.
ReducedStructure reduce(const DelzantPolytope& poly, std::size_t p, const RationalVector& c);
// x = map * y + origin.
ReducedStructure reduce_affine(const HPolyhedron& poly, const RationalMatrix& map, const RationalVector& origin);
// x_n = sum_{i<n} a_i x_i + c, parametrized by y = (x_1..x_{n-1}).
ReducedStructure reduce_graph(const HPolyhedron& poly, const RationalVector& a, const Rational& c);

// Abreu curvature of the reduced potential at an interior slice point y.
double reduced_scalar_curvature(const ReducedStructure& red, const Eigen::VectorXd& y);

struct LevelReport {
  IntVector c;
  std::size_t dimension = 0;  // number of basis elements with m_{1..p} = c
  bool trivial = false;       // no lattice points on the slice
  std::optional<ReducedClass> classification;  // absent for empty slices
};

struct AuditReport {
  std::vector<LevelReport> levels;
  std::size_t basis_size = 0;
  std::size_t total = 0;
  bool consistent = false;  // total == basis_size
};

// Every integral c in the bounding box of the projection onto the first p coordinates.
AuditReport reduction_dimension_audit(const DelzantPolytope& poly, std::size_t p);

}  // namespace toricq
