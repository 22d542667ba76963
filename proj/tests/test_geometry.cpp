#include "symcap/geometry.hpp"
#include "symcap/io.hpp"
#include "symcap/lp.hpp"

#include "test_support.hpp"

#include <gtest/gtest.h>

#include <vector>

using namespace symcap;
using symcap::testing::random_symmetric_vertices;

namespace {

// Gauge by bisection on the membership test (x - c)^T M (x - c) <= 1.
double ellipsoid_gauge_oracle(const Mat& M, const Vec& c, const Vec& x) {
  double lo = 0.0, hi = 1.0;
  auto inside = [&](double t) { return (t * x - c).dot(M * (t * x - c)) <= 1.0; };
  while (inside(hi)) hi *= 2.0;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    (inside(mid) ? lo : hi) = mid;
  }
  return 1.0 / lo;
}

std::vector<ConvexBody> sample_bodies() {
  Rng rng(5);
  Mat A(4, 4);
  for (Eigen::Index i = 0; i < 4; ++i)
    for (Eigen::Index j = 0; j < 4; ++j) A(i, j) = rng.normal();
  const Mat M = A * A.transpose() + 0.5 * Mat::Identity(4, 4);
  Vec c(4);
  c << 0.1, -0.2, 0.05, 0.1;
  Mat normals(4, 10);
  for (int k = 0; k < 5; ++k) {
    normals.col(k) = rng.normal_vector(4);
    normals.col(k + 5) = -normals.col(k);
  }
  normals.leftCols(4) += 3.0 * Mat::Identity(4, 4);
  normals.middleCols(5, 4) -= 3.0 * Mat::Identity(4, 4);
  return {ConvexBody::ball(4, 1.5),
          ConvexBody::ellipsoid(M),
          ConvexBody::ellipsoid(Mat::Identity(4, 4), c),
          ConvexBody::lp_ball(4, 3.0, Vec::LinSpaced(4, 0.5, 2.0)),
          ConvexBody::lp_ball(4, 1.5),
          ConvexBody::cube(4),
          ConvexBody::cross_polytope(4),
          ConvexBody::polytope_v(random_symmetric_vertices(rng, 4, 6)),
          ConvexBody::polytope_h(normals, Vec::Constant(10, 1.0))};
}

}  // namespace

TEST(Gauge, BallAndEllipsoidMatchMembershipBisection) {
  const ConvexBody ball = ConvexBody::ball(4, 2.0);
  Rng rng(1);
  for (int k = 0; k < 100; ++k) {
    const Vec x = rng.normal_vector(4);
    EXPECT_NEAR(gauge(ball, x), x.norm() / 2.0, 1e-14);
    EXPECT_NEAR(support(ball, x), 2.0 * x.norm(), 1e-13);
  }
  Mat M = Mat::Identity(4, 4);
  M.diagonal() << 1.0, 0.25, 2.0, 0.5;
  Vec c(4);
  c << 0.3, -0.5, 0.2, 0.1;
  const ConvexBody e = ConvexBody::ellipsoid(M, c);
  for (int k = 0; k < 100; ++k) {
    const Vec x = rng.normal_vector(4);
    EXPECT_NEAR(gauge(e, x), ellipsoid_gauge_oracle(M, c, x), 1e-12 * gauge(e, x));
  }
}

TEST(Gauge, CubeAndCrossPolytopeAreLInfAndL1) {
  const ConvexBody cube = ConvexBody::cube(4);
  const ConvexBody cross = ConvexBody::cross_polytope(4);
  Rng rng(2);
  for (int k = 0; k < 100; ++k) {
    const Vec x = rng.normal_vector(4);
    EXPECT_NEAR(gauge(cube, x), x.lpNorm<Eigen::Infinity>(), 1e-14);
    EXPECT_NEAR(gauge(cross, x), x.lpNorm<1>(), 1e-13);
    EXPECT_NEAR(support(cube, x), x.lpNorm<1>(), 1e-13);
    EXPECT_NEAR(support(cross, x), x.lpNorm<Eigen::Infinity>(), 1e-14);
  }
}

TEST(Gauge, LpBallMatchesDirectFormula) {
  Vec w(4);
  w << 1.0, 2.0, 0.5, 1.5;
  const ConvexBody b = ConvexBody::lp_ball(4, 3.0, w);
  Rng rng(3);
  for (int k = 0; k < 100; ++k) {
    const Vec x = rng.normal_vector(4);
    double acc = 0.0;
    for (int i = 0; i < 4; ++i) acc += std::pow(std::abs(x(i) / w(i)), 3.0);
    EXPECT_NEAR(gauge(b, x), std::cbrt(acc), 1e-13);
  }
}

TEST(Gauge, LinearProgramAgreesWithEnumeratedFacets) {
  Rng rng(4);
  for (int trial = 0; trial < 20; ++trial) {
    const Eigen::Index d = trial % 2 == 0 ? 3 : 4;
    const Mat v = random_symmetric_vertices(rng, d, 5 + trial % 4);
    const auto facets = enumerate_facets(v);
    ASSERT_TRUE(facets.has_value());
    for (int k = 0; k < 30; ++k) {
      const Vec x = rng.normal_vector(d);
      const auto lp_value = lp::conic_scaling(v, x);
      ASSERT_TRUE(lp_value.feasible);
      EXPECT_NEAR(lp_value.value, (facets->transpose() * x).maxCoeff(), 1e-9 * lp_value.value);
    }
  }
}

TEST(Gauge, CubeFacetsAreCoordinateNormals) {
  Mat v(3, 8);
  for (int k = 0; k < 8; ++k)
    for (int i = 0; i < 3; ++i) v(i, k) = (k >> i) & 1 ? 1.0 : -1.0;
  const auto facets = enumerate_facets(v);
  ASSERT_TRUE(facets.has_value());
  ASSERT_EQ(facets->cols(), 6);
  EXPECT_NEAR(facets->cwiseAbs().colwise().sum().maxCoeff(), 1.0, 1e-14);
}

TEST(Polar, SupportOfBodyIsGaugeOfPolar) {
  Rng rng(6);
  for (const ConvexBody& body : sample_bodies()) {
    const ConvexBody dual = polar(body);
    for (int k = 0; k < 40; ++k) {
      const Vec u = rng.normal_vector(4);
      EXPECT_NEAR(support(body, u), gauge(dual, u), 1e-9 * support(body, u)) << to_string(body.kind());
      EXPECT_NEAR(gauge(body, u), support(dual, u), 1e-9 * gauge(body, u)) << to_string(body.kind());
    }
  }
}

TEST(Gauge, HomogeneityTriangleAndFenchelInequality) {
  Rng rng(7);
  for (const ConvexBody& body : sample_bodies()) {
    for (int k = 0; k < 50; ++k) {
      const Vec x = rng.normal_vector(4), y = rng.normal_vector(4);
      const double s = rng.uniform(0.1, 5.0);
      EXPECT_NEAR(gauge(body, s * x), s * gauge(body, x), 1e-10 * s * gauge(body, x));
      EXPECT_LE(gauge(body, x + y), gauge(body, x) + gauge(body, y) + 1e-10);
      EXPECT_LE(x.dot(y), gauge(body, x) * support(body, y) + 1e-10);
    }
  }
}

TEST(Gauge, GradientSatisfiesEulerAndFiniteDifferences) {
  Rng rng(8);
  for (const ConvexBody& body : sample_bodies()) {
    for (int k = 0; k < 30; ++k) {
      const Vec x = rng.normal_vector(4);
      const Vec g = gauge_gradient(body, x);
      EXPECT_NEAR(g.dot(x), gauge(body, x), 1e-9 * gauge(body, x));
      if (!body.is_smooth()) continue;
      for (int i = 0; i < 4; ++i) {
        const double h = 1e-6;
        const Vec e = Vec::Unit(4, i);
        const double fd = (gauge(body, x + h * e) - gauge(body, x - h * e)) / (2 * h);
        EXPECT_NEAR(g(i), fd, 1e-6 * std::max(1.0, std::abs(fd)));
      }
    }
  }
}

TEST(Support, PointAttainsValueOnBoundary) {
  Rng rng(9);
  for (const ConvexBody& body : sample_bodies()) {
    for (int k = 0; k < 30; ++k) {
      const Vec u = rng.normal_vector(4);
      const Vec s = support_point(body, u);
      EXPECT_NEAR(u.dot(s), support(body, u), 1e-9 * support(body, u));
      EXPECT_NEAR(gauge(body, s), 1.0, 1e-9);
      const Vec b = boundary_point(body, rng.normal_vector(4));
      EXPECT_NEAR(gauge(body, b), 1.0, 1e-12);
    }
  }
}

TEST(Body, SymmetryDetection) {
  const auto bodies = sample_bodies();
  EXPECT_TRUE(bodies[0].is_symmetric());
  EXPECT_TRUE(bodies[1].is_symmetric());
  EXPECT_FALSE(bodies[2].is_symmetric());
  EXPECT_TRUE(bodies[5].is_symmetric());
  EXPECT_TRUE(bodies[7].is_symmetric());
  Mat v(2, 3);
  v << 1, -1, 0, 0, 1, -1;
  EXPECT_FALSE(ConvexBody::polytope_v(v).is_symmetric());
}

TEST(Body, RadiusBoundsEveryPoint) {
  Rng rng(10);
  for (const ConvexBody& body : sample_bodies())
    for (int k = 0; k < 100; ++k)
      EXPECT_LE(boundary_point(body, rng.normal_vector(4)).norm(), body.euclidean_radius() * (1 + 1e-12));
}

TEST(Body, InvalidParametersAreRejected) {
  auto code = [](auto&& f) {
    try {
      f();
    } catch (const Error& e) {
      return e.code();
    }
    return ErrorCode::InvalidArgument;
  };
  EXPECT_EQ(code([] { ConvexBody::lp_ball(4, 0.5); }), ErrorCode::NonConvexParameters);
  EXPECT_EQ(code([] { ConvexBody::ellipsoid(-Mat::Identity(2, 2)); }), ErrorCode::NonConvexParameters);
  EXPECT_EQ(code([] { ConvexBody::ellipsoid(Mat::Identity(2, 2), Vec::Constant(2, 2.0)); }),
            ErrorCode::OriginNotInterior);
  Mat v(2, 3);
  v << 1, 2, 1, 0, 1, 1;
  EXPECT_EQ(code([&] { ConvexBody::polytope_v(v); }), ErrorCode::OriginNotInterior);
  EXPECT_EQ(code([] { gauge(ConvexBody::ball(4), Vec::Ones(3)); }), ErrorCode::DimensionMismatch);
  EXPECT_EQ(code([] { gauge_gradient(ConvexBody::ball(2), Vec::Zero(2)); }), ErrorCode::GradientUndefinedAtZero);
}

TEST(BodyJson, RoundTripPreservesGauge) {
  Rng rng(12);
  for (const ConvexBody& body : sample_bodies()) {
    const ConvexBody back = body_from_json(parse_json_text(body_to_json(body).dump()));
    for (int k = 0; k < 10; ++k) {
      const Vec x = rng.normal_vector(4);
      EXPECT_NEAR(gauge(back, x), gauge(body, x), 1e-12 * gauge(body, x));
    }
  }
}

TEST(BodyJson, RadiiPairComplexCoordinates) {
  const ConvexBody e = body_from_json(parse_json_text(R"({"kind":"ellipsoid","dim":4,"params":{"radii":[1,2]}})"));
  Vec x = Vec::Zero(4);
  x(1) = 2.0;  // q_2
  EXPECT_NEAR(gauge(e, x), 1.0, 1e-15);
  x.setZero();
  x(3) = 2.0;  // p_2
  EXPECT_NEAR(gauge(e, x), 1.0, 1e-15);
}

TEST(BodyJson, ParseErrorsReportLineAndColumn) {
  try {
    parse_json_text("{\n  \"kind\": \"lp\",\n  \"dim\": 4,,\n}");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::SpecParseError);
    EXPECT_NE(std::string(e.what()).find("line 3"), std::string::npos) << e.what();
  }
  EXPECT_THROW(body_from_json(parse_json_text(R"({"kind":"torus","dim":4})")), Error);
  EXPECT_TRUE(parse_json_text("  \n").is_null());
}

TEST(Gauge, ReferenceValues) {
  EXPECT_DOUBLE_EQ(gauge(ConvexBody::ball(4), Vec::Unit(4, 0)), 1.0);
  EXPECT_DOUBLE_EQ(gauge(ConvexBody::cube(4), Vec::Constant(4, 0.5)), 0.5);
  Vec axes(2);
  axes << 1.0, 2.0;
  const ConvexBody e = ConvexBody::ellipsoid_axes(axes);
  Vec x(2);
  x << 0.0, 2.0;
  EXPECT_NEAR(gauge(e, x), 1.0, 1e-15);
  x << 0.0, 1.0;
  EXPECT_NEAR((boundary_point(e, x) - Vec::Unit(2, 1) * 2.0).norm(), 0.0, 1e-15);
  EXPECT_NEAR((boundary_point(ConvexBody::ball(4), 2.0 * Vec::Unit(4, 0)) - Vec::Unit(4, 0)).norm(), 0.0, 1e-15);
  EXPECT_NEAR((boundary_point(ConvexBody::cube(4), Vec::Ones(4)) - Vec::Ones(4)).norm(), 0.0, 1e-15);
  EXPECT_NEAR((gauge_gradient(ConvexBody::ball(4), Vec::Unit(4, 0)) - Vec::Unit(4, 0)).norm(), 0.0, 1e-15);
  Vec facet_point(4);
  facet_point << 1.0, 0.2, -0.3, 0.5;
  EXPECT_NEAR((gauge_gradient(ConvexBody::cube(4), facet_point) - Vec::Unit(4, 0)).norm(), 0.0, 1e-15);
}

TEST(Polar, BallAndCubeDuals) {
  Rng rng(13);
  const ConvexBody pb = polar(ConvexBody::ball(4, 2.0));
  const ConvexBody pc = polar(ConvexBody::cube(4));
  for (int k = 0; k < 50; ++k) {
    const Vec x = rng.normal_vector(4);
    EXPECT_NEAR(gauge(pb, x), 2.0 * x.norm(), 1e-13);
    EXPECT_NEAR(gauge(pc, x), x.lpNorm<1>(), 1e-13);
  }
}

TEST(Polar, IsAnInvolution) {
  Rng rng(14);
  for (const ConvexBody& body : sample_bodies()) {
    const ConvexBody back = polar(polar(body));
    for (int k = 0; k < 1000; ++k) {
      const Vec x = rng.normal_vector(4);
      ASSERT_NEAR(gauge(back, x), gauge(body, x), 1e-9 * gauge(body, x)) << to_string(body.kind());
    }
  }
}
