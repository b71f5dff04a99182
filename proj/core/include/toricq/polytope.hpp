#pragma once

// Exact lattice and convex geometry of Delzant polytopes.
//
// A polytope is a list of facets l_r(x) = <nu_r, x> + lambda_r >= 0 with integer
// normals and rational offsets. Facet order is the input order and is never
// rearranged; every facet-indexed quantity downstream uses it.

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "toricq/rational.hpp"

namespace toricq {

struct Facet {
  IntVector normal;
  Rational offset;
};

// Half-space with a rational normal; used for slices and reductions, whose
// inherited normals need not be primitive (or even integral).
struct HalfSpace {
  RationalVector normal;
  Rational offset;

  Rational evaluate(const RationalVector& x) const { return dot(normal, x) + offset; }
  bool is_zero_normal() const;
};

class HPolyhedron {
 public:
  HPolyhedron() = default;
  HPolyhedron(std::size_t dim, std::vector<HalfSpace> facets);

  std::size_t dim() const noexcept { return dim_; }
  const std::vector<HalfSpace>& facets() const noexcept { return facets_; }
  bool contains(const RationalVector& x) const;

 private:
  std::size_t dim_ = 0;
  std::vector<HalfSpace> facets_;
};

class DelzantPolytope {
 public:
  DelzantPolytope() = default;
  // Checks only syntax: matching dimensions and nonzero normals. Use validate_delzant for the rest.
  DelzantPolytope(std::size_t dim, std::vector<Facet> facets, std::string name = {});

  std::size_t dim() const noexcept { return dim_; }
  const std::vector<Facet>& facets() const noexcept { return facets_; }
  std::size_t facet_count() const noexcept { return facets_.size(); }
  const std::string& name() const noexcept { return name_; }

  Rational facet_value(std::size_t r, const RationalVector& x) const;
  Rational facet_value(std::size_t r, const IntVector& m) const;
  bool contains(const IntVector& m) const;
  HPolyhedron as_polyhedron() const;

 private:
  std::size_t dim_ = 0;
  std::vector<Facet> facets_;
  std::string name_;
};

struct Vertex {
  RationalVector point;
  std::vector<std::size_t> active;  // facet indices with l_r(point) = 0, ascending
};

// All vertices, deduplicated and sorted lexicographically. Exact.
std::vector<Vertex> enumerate_vertices(const HPolyhedron& poly);
std::vector<Vertex> enumerate_vertices(const DelzantPolytope& poly);

bool is_bounded(const HPolyhedron& poly);
// Nonemptiness by Fourier-Motzkin elimination (works for unbounded inputs too).
bool is_feasible(const HPolyhedron& poly);
// Vertex average; nullopt when there are no vertices.
std::optional<RationalVector> vertex_barycenter(const HPolyhedron& poly);
// True when some point satisfies every facet with a nonzero normal strictly.
bool has_interior(const HPolyhedron& poly);

enum class Verdict { ok, not_delzant, redundant_facets, non_primitive, unbounded, empty };
std::string to_string(Verdict v);

struct VertexReport {
  RationalVector vertex;
  std::vector<std::size_t> active;
  Integer determinant;  // of the active normals, 0 when more or fewer than n are active
  bool delzant = false;
};

struct ValidationReport {
  bool ok = false;
  Verdict verdict = Verdict::empty;
  std::vector<VertexReport> vertices;
  std::vector<std::size_t> redundant;
  std::vector<std::size_t> non_primitive;
};

ValidationReport validate_delzant(const DelzantPolytope& poly);

// Integer points with l_r(m) >= 0, lexicographic. Throws DomainError when unbounded.
std::vector<IntVector> lattice_points(const DelzantPolytope& poly);

// Shifts every offset by 1/2. Rejects invalid or non-lattice input.
DelzantPolytope corrected_polytope(const DelzantPolytope& line_bundle_polytope);

class FrameChange {
 public:
  // Throws InputError unless matrix is n x n integer with det = 1 and 1 <= p <= n.
  FrameChange(std::vector<IntVector> matrix, std::size_t p);
  static FrameChange identity(std::size_t n, std::size_t p);

  const std::vector<IntVector>& matrix() const noexcept { return matrix_; }
  std::size_t p() const noexcept { return p_; }
  std::size_t dim() const noexcept { return matrix_.size(); }
  // (B^T)^{-1}, integral since det B = 1.
  std::vector<IntVector> inverse_transpose() const;
  // x~ = B x
  RationalVector apply(const RationalVector& x) const;

 private:
  std::vector<IntVector> matrix_;
  std::size_t p_;
};

// Normals become (B^T)^{-1} nu_r; offsets are unchanged.
DelzantPolytope apply_frame_change(const DelzantPolytope& poly, const FrameChange& fc);

struct VertexChart {
  RationalVector vertex;
  std::vector<std::size_t> facets;  // active facet indices in facet order
  std::vector<IntVector> matrix;    // A_v, rows = active normals
  RationalVector offsets;           // lambda_v
  // x_v = A_v x + lambda_v
  RationalVector to_chart(const RationalVector& x) const;
};

// vertex_index refers to enumerate_vertices order. Throws DomainError at a non-Delzant vertex.
VertexChart vertex_chart(const DelzantPolytope& poly, std::size_t vertex_index);

struct SlicePolytope {
  std::size_t dim = 0;
  std::vector<HalfSpace> facets;          // pruned: zero-normal facets removed
  std::vector<std::size_t> source_facet;  // ambient index of each kept facet
  std::vector<HalfSpace> inherited;       // every ambient facet restricted, zero normals kept
  RationalVector level;
  bool empty = false;

  HPolyhedron as_polyhedron() const { return HPolyhedron(dim, facets); }
};

// Fix x_1..x_p = c and keep y = (x_{p+1}..x_n). Requires 1 <= p < n.
SlicePolytope axis_slice(const HPolyhedron& poly, std::size_t p, const RationalVector& c);
SlicePolytope axis_slice(const DelzantPolytope& poly, std::size_t p, const RationalVector& c);

// Affine slice x = map * y + origin (map is n x k); covers non-axis reductions.
SlicePolytope affine_slice(const HPolyhedron& poly, const RationalMatrix& map, const RationalVector& origin);

}  // namespace toricq
