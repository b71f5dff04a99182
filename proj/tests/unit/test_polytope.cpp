#include <gtest/gtest.h>

#include <algorithm>
#include <random>
#include <set>

#include "oracles.hpp"
#include "toricq/errors.hpp"
#include "toricq/polytope.hpp"
#include "toricq/polytope_io.hpp"

using namespace toricq;
using toricq::testing::make_polytope;
using toricq::testing::segment;

namespace {

DelzantPolytope simplex(const std::string& size) {
  return make_polytope({{1, 0}, {0, 1}, {-1, -1}}, {"0", "0", size});
}

DelzantPolytope corrected_square() {
  return make_polytope({{1, 0}, {-1, 0}, {0, 1}, {0, -1}}, {"1/2", "3/2", "1/2", "3/2"});
}

// Brute-force scan over a generous box, independent of lattice_points' own bounds.
std::vector<IntVector> scan(const DelzantPolytope& poly, std::int64_t radius) {
  std::vector<IntVector> out;
  const std::size_t n = poly.dim();
  IntVector m(n, -radius);
  while (true) {
    if (poly.contains(m)) out.push_back(m);
    std::size_t j = n;
    while (j > 0 && m[j - 1] == radius) --j;
    if (j == 0) break;
    ++m[j - 1];
    for (std::size_t k = j; k < n; ++k) m[k] = -radius;
  }
  return out;
}

std::vector<IntVector> random_sl(std::mt19937_64& rng, std::size_t n) {
  std::uniform_int_distribution<int> d(-3, 3);
  while (true) {
    std::vector<IntVector> b(n, IntVector(n));
    for (auto& row : b)
      for (auto& e : row) e = d(rng);
    if (determinant(RationalMatrix::from_rows(b)) == 1) return b;
  }
}

}  // namespace

TEST(Validate, StandardSimplexIsDelzant) {
  const auto rep = validate_delzant(simplex("1"));
  EXPECT_TRUE(rep.ok);
  EXPECT_EQ(rep.verdict, Verdict::ok);
  ASSERT_EQ(rep.vertices.size(), 3u);
  for (const auto& v : rep.vertices) {
    EXPECT_TRUE(v.delzant);
    EXPECT_TRUE(v.determinant == 1 || v.determinant == -1);
  }
}

TEST(Validate, TriangleWithSlopeTwoFailsAtItsSteepCorner) {
  // Vertices (0,0), (0,1), (2,0). At (0,1) the active normals are (1,0) and (-1,-2): det -2.
  // At (2,0) they are (0,1) and (-1,-2): det 1.
  const auto rep = validate_delzant(make_polytope({{1, 0}, {0, 1}, {-1, -2}}, {"0", "0", "2"}));
  EXPECT_FALSE(rep.ok);
  EXPECT_EQ(rep.verdict, Verdict::not_delzant);
  int bad = 0;
  for (const auto& v : rep.vertices) {
    if (v.vertex == RationalVector{Rational(0), Rational(1)}) {
      EXPECT_FALSE(v.delzant);
      EXPECT_EQ(v.determinant, Integer(-2));
      ++bad;
    } else {
      EXPECT_TRUE(v.delzant);
    }
  }
  EXPECT_EQ(bad, 1);
}

TEST(Validate, CorrectedSquareIsDelzant) { EXPECT_TRUE(validate_delzant(corrected_square()).ok); }

TEST(Validate, VerdictsForDefectiveInputs) {
  EXPECT_EQ(validate_delzant(make_polytope({{1, 0}, {0, 1}}, {"0", "0"})).verdict, Verdict::unbounded);
  EXPECT_EQ(validate_delzant(make_polytope({{1}, {-1}}, {"-1", "0"})).verdict, Verdict::empty);
  // A single point has no interior.
  EXPECT_EQ(validate_delzant(make_polytope({{1}, {-1}}, {"0", "0"})).verdict, Verdict::empty);
  const auto np = validate_delzant(make_polytope({{2, 0}, {0, 1}, {-1, -1}}, {"0", "0", "1"}));
  EXPECT_EQ(np.verdict, Verdict::non_primitive);
  EXPECT_EQ(np.non_primitive, std::vector<std::size_t>{0});
  const auto red = validate_delzant(make_polytope({{1, 0}, {0, 1}, {-1, -1}, {1, 1}}, {"0", "0", "1", "5"}));
  EXPECT_EQ(red.verdict, Verdict::redundant_facets);
  EXPECT_EQ(red.redundant, std::vector<std::size_t>{3});
  const auto dup = validate_delzant(make_polytope({{1, 0}, {0, 1}, {-1, -1}, {1, 0}}, {"0", "0", "1", "0"}));
  EXPECT_EQ(dup.verdict, Verdict::redundant_facets);
}

TEST(Validate, SyntaxErrorsThrow) {
  EXPECT_THROW(DelzantPolytope(2, {{{1, 0}, Rational(0)}, {{0, 0}, Rational(1)}}), InputError);
  EXPECT_THROW(DelzantPolytope(2, {{{1}, Rational(0)}}), InputError);
}

TEST(LatticePoints, Examples) {
  EXPECT_EQ(lattice_points(segment("0", "3")), (std::vector<IntVector>{{0}, {1}, {2}, {3}}));
  EXPECT_EQ(lattice_points(simplex("2")).size(), 6u);
  EXPECT_EQ(lattice_points(corrected_square()), (std::vector<IntVector>{{0, 0}, {0, 1}, {1, 0}, {1, 1}}));
  EXPECT_THROW(lattice_points(make_polytope({{1, 0}, {0, 1}}, {"0", "0"})), DomainError);
}

TEST(LatticePoints, MatchBruteForceScanInLexOrder) {
  for (const auto& poly : {simplex("2"), simplex("3"), corrected_square(),
                           make_polytope({{1, 0}, {0, 1}, {-1, -1}, {0, -1}}, {"1/2", "1/2", "5/2", "3/2"})}) {
    EXPECT_EQ(lattice_points(poly), scan(poly, 6));
  }
}

TEST(Corrected, ShiftsOffsetsByOneHalf) {
  const auto c = corrected_polytope(segment("0", "1"));
  EXPECT_EQ(c.facets()[0].offset, Rational(1, 2));
  EXPECT_EQ(c.facets()[1].offset, Rational(3, 2));
  const auto sq = corrected_polytope(make_polytope({{1, 0}, {-1, 0}, {0, 1}, {0, -1}}, {"0", "1", "0", "1"}));
  for (std::size_t r = 0; r < 4; ++r) EXPECT_EQ(sq.facets()[r].offset, corrected_square().facets()[r].offset);
}

TEST(Corrected, PreservesLatticePoints) {
  EXPECT_EQ(lattice_points(corrected_polytope(segment("0", "2"))), lattice_points(segment("0", "2")));
  EXPECT_EQ(lattice_points(segment("-1/2", "5/2")), lattice_points(segment("0", "2")));
  EXPECT_EQ(lattice_points(corrected_polytope(simplex("2"))), lattice_points(simplex("2")));
}

TEST(Corrected, RejectsInvalidInput) {
  EXPECT_THROW(corrected_polytope(make_polytope({{1, 0}, {0, 1}, {-1, -2}}, {"0", "0", "2"})), DomainError);
  EXPECT_THROW(corrected_polytope(segment("0", "1/2")), DomainError);
}

TEST(FrameChange, IdentityAndShear) {
  const auto sq = make_polytope({{1, 0}, {-1, 0}, {0, 1}, {0, -1}}, {"0", "1", "0", "1"});
  const auto same = apply_frame_change(sq, FrameChange::identity(2, 1));
  for (std::size_t r = 0; r < 4; ++r) EXPECT_EQ(same.facets()[r].normal, sq.facets()[r].normal);
  const auto sheared = apply_frame_change(sq, FrameChange({{1, 1}, {0, 1}}, 1));
  EXPECT_EQ(lattice_points(sheared).size(), 4u);
  EXPECT_TRUE(validate_delzant(sheared).ok);
  EXPECT_EQ(lattice_points(apply_frame_change(simplex("1"), FrameChange({{2, 1}, {1, 1}}, 1))).size(), 3u);
}

TEST(FrameChange, RejectsBadMatrices) {
  EXPECT_THROW(FrameChange({{2, 0}, {0, 1}}, 1), InputError);
  EXPECT_THROW(FrameChange({{0, 1}, {1, 0}}, 1), InputError);  // det -1
  EXPECT_THROW(FrameChange({{1, 0}, {0, 1}}, 3), InputError);
  EXPECT_THROW(FrameChange({{1, 0}, {0, 1}}, 0), InputError);
}

TEST(FrameChange, RandomUnimodularMapsCarryLatticePointsBijectively) {
  std::mt19937_64 rng(7);
  const std::vector<DelzantPolytope> polys = {
      simplex("2"), corrected_square(),
      make_polytope({{1, 0, 0}, {0, 1, 0}, {0, 0, 1}, {-1, -1, -1}}, {"0", "0", "0", "2"})};
  for (int trial = 0; trial < 12; ++trial) {
    const auto& poly = polys[static_cast<std::size_t>(trial) % polys.size()];
    const std::size_t n = poly.dim();
    const FrameChange fc(random_sl(rng, n), 1);
    const auto moved = apply_frame_change(poly, fc);
    std::set<IntVector> expected;
    for (const auto& m : lattice_points(poly)) {
      IntVector bm(n, 0);
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) bm[i] += fc.matrix()[i][j] * m[j];
      expected.insert(bm);
    }
    const auto got = lattice_points(moved);
    EXPECT_EQ(std::set<IntVector>(got.begin(), got.end()), expected);
    EXPECT_TRUE(validate_delzant(moved).ok);
  }
}

TEST(VertexChart, Examples) {
  const auto s = simplex("1");
  const auto c0 = vertex_chart(s, 0);  // (0,0)
  EXPECT_EQ(c0.matrix, (std::vector<IntVector>{{1, 0}, {0, 1}}));
  const auto vs = enumerate_vertices(s);
  ASSERT_EQ(vs[2].point, (RationalVector{Rational(1), Rational(0)}));
  const auto c2 = vertex_chart(s, 2);
  EXPECT_EQ(c2.matrix, (std::vector<IntVector>{{0, 1}, {-1, -1}}));
  for (const auto& v : c2.to_chart(vs[2].point)) EXPECT_EQ(v, Rational(0));

  const auto sq = corrected_square();
  const auto corner = vertex_chart(sq, 0);
  EXPECT_EQ(corner.vertex, (RationalVector{Rational(-1, 2), Rational(-1, 2)}));
  EXPECT_EQ(corner.matrix, (std::vector<IntVector>{{1, 0}, {0, 1}}));
  EXPECT_EQ(corner.offsets, (RationalVector{Rational(1, 2), Rational(1, 2)}));
}

TEST(VertexChart, ErrorsCarryTheDeterminant) {
  const auto tri = make_polytope({{1, 0}, {0, 1}, {-1, -2}}, {"0", "0", "2"});
  try {
    vertex_chart(tri, 1);  // (0,1)
    FAIL() << "expected DomainError";
  } catch (const DomainError& e) {
    EXPECT_NE(std::string(e.what()).find("-2"), std::string::npos);
  }
  EXPECT_THROW(vertex_chart(tri, 17), std::out_of_range);
}

TEST(VertexChart, ChartsAreUnimodularAndSendThePolytopeIntoTheOrthant) {
  for (const auto& poly : {simplex("2"), corrected_square(),
                           make_polytope({{1, 0}, {0, 1}, {-1, -1}, {0, -1}}, {"1/2", "1/2", "5/2", "3/2"})}) {
    const auto vs = enumerate_vertices(poly);
    for (std::size_t i = 0; i < vs.size(); ++i) {
      const auto chart = vertex_chart(poly, i);
      const Rational det = determinant(RationalMatrix::from_rows(chart.matrix));
      EXPECT_TRUE(det == 1 || det == -1);
      for (const auto& w : vs)
        for (const auto& coord : chart.to_chart(w.point)) EXPECT_GE(coord, 0);
    }
  }
}

TEST(AxisSlice, Examples) {
  const auto a = axis_slice(corrected_square(), 1, {Rational(0)});
  EXPECT_FALSE(a.empty);
  EXPECT_EQ(a.dim, 1u);
  const auto av = enumerate_vertices(a.as_polyhedron());
  ASSERT_EQ(av.size(), 2u);
  EXPECT_EQ(av[0].point[0], Rational(-1, 2));
  EXPECT_EQ(av[1].point[0], Rational(3, 2));

  const auto b = axis_slice(simplex("2"), 1, {Rational(1)});
  EXPECT_FALSE(b.empty);
  const auto bv = enumerate_vertices(b.as_polyhedron());
  ASSERT_EQ(bv.size(), 2u);
  EXPECT_EQ(bv[0].point[0], Rational(0));
  EXPECT_EQ(bv[1].point[0], Rational(1));
  EXPECT_EQ(b.inherited.size(), 3u);
  EXPECT_EQ(b.facets.size(), 2u);  // x >= 0 became the constant 1

  EXPECT_TRUE(axis_slice(simplex("2"), 1, {Rational(3)}).empty);
  EXPECT_TRUE(axis_slice(simplex("2"), 1, {Rational(-1)}).empty);
}

TEST(AxisSlice, CommutesWithLatticeEnumeration) {
  const auto poly = make_polytope({{1, 0, 0}, {0, 1, 0}, {0, 0, 1}, {-1, -1, -1}}, {"0", "0", "0", "3"});
  const auto all = lattice_points(poly);
  for (std::int64_t c = -1; c <= 4; ++c) {
    const auto slice = axis_slice(poly, 1, {Rational(c)});
    std::vector<IntVector> expected;
    for (const auto& m : all)
      if (m[0] == c) expected.push_back({m[1], m[2]});
    std::vector<IntVector> got;
    if (!slice.empty) {
      for (std::int64_t y = -5; y <= 5; ++y)
        for (std::int64_t z = -5; z <= 5; ++z)
          if (slice.as_polyhedron().contains({Rational(y), Rational(z)})) got.push_back({y, z});
    }
    EXPECT_EQ(got, expected) << "c = " << c;
  }
}

TEST(PolytopeJson, ParsesExactOffsetsAndReportsFields) {
  const auto p = parse_polytope_json(
      R"({"dim": 1, "facets": [{"normal": [1], "offset": "1/2"}, {"normal": [-1], "offset": 1.5}], "name": "s"})");
  EXPECT_EQ(p.facets()[0].offset, Rational(1, 2));
  EXPECT_EQ(p.facets()[1].offset, Rational(3, 2));
  EXPECT_EQ(p.name(), "s");
  const auto again = parse_polytope_json(polytope_to_json(p));
  EXPECT_EQ(again.facets()[1].offset, Rational(3, 2));

  auto field_of = [](const char* text) {
    try {
      parse_polytope_json(text);
    } catch (const InputError& e) {
      return e.field();
    }
    return std::string("<none>");
  };
  EXPECT_EQ(field_of(R"({"dim": 2})"), "facets");
  EXPECT_EQ(field_of(R"({"facets": []})"), "dim");
  EXPECT_EQ(field_of(R"({"dim": 1, "facets": [{"normal": [1], "offset": 0}, {"normal": ["a"], "offset": 0}]})"),
            "facets[1].normal");
  EXPECT_EQ(field_of(R"({"dim": 1, "facets": [{"normal": [1], "offset": "x/y"}]})"), "facets[0].offset");
  EXPECT_EQ(field_of("{not json"), "<document>");
}

TEST(PolytopeJson, ShippedFilesLoad) {
  for (const char* name : {"cp1_corrected.json", "square_corrected.json", "cp2_corrected.json",
                           "hirzebruch1_corrected.json", "cube3_corrected.json", "simplex.json", "simplex2.json"}) {
    const auto p = load_polytope(toricq::testing::data_path(name));
    EXPECT_TRUE(validate_delzant(p).ok) << name;
  }
  EXPECT_FALSE(validate_delzant(load_polytope(toricq::testing::data_path("triangle_nondelzant.json"))).ok);
  EXPECT_THROW(load_polytope("/nonexistent/file.json"), InputError);
}
