#include <gtest/gtest.h>

#include "genproj/genproj.hpp"
#include "oracles.hpp"

using namespace genproj;

namespace {

PolyMap map_of(std::size_t n, std::initializer_list<const char*> comps) {
  std::vector<Polynomial> ps;
  for (const char* c : comps) ps.push_back(parse_poly(c, n));
  return PolyMap(n, std::move(ps));
}

// Immersive parametrization: identity-like linear part plus random quadratic
// and cubic terms in every component.
ParamVariety random_param(std::size_t n, Rng& rng) {
  std::uniform_int_distribution<int> c(-3, 3);
  std::vector<Polynomial> comps;
  for (std::size_t i = 0; i < 2 * n; ++i) {
    Polynomial p(n);
    p = p + Polynomial::variable(n, i % n) * Polynomial::constant(n, GaussRational(1 + int(i / n)));
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = a; b < n; ++b) {
        p = p + Polynomial::variable(n, a) * Polynomial::variable(n, b) * Polynomial::constant(n, GaussRational(c(rng)));
        p = p + Polynomial::variable(n, a).pow(2) * Polynomial::variable(n, b) *
                    Polynomial::constant(n, GaussRational(Rational(c(rng), 4)));
      }
    comps.push_back(p);
  }
  return ParamVariety(PolyMap(n, std::move(comps)));
}

}  // namespace

TEST(GraphVariety, NormalizationIsExact) {
  EXPECT_TRUE(GraphVariety(map_of(2, {"u1^2", "u1*u2"})).is_normalized());
  EXPECT_FALSE(GraphVariety(map_of(1, {"u1^2 + 1/1000000"})).is_normalized());
  EXPECT_FALSE(GraphVariety(map_of(2, {"u1^2", "u2^2 + u1"})).is_normalized());
  EXPECT_TRUE(GraphVariety(map_of(1, {"0"})).is_normalized());
}

TEST(GraphVariety, RejectsWrongShape) {
  EXPECT_THROW(GraphVariety(map_of(2, {"u1^2"})), DimensionMismatch);
  EXPECT_THROW(GraphVariety(map_of(1, {"u1^2", "u1^3"})), DimensionMismatch);
}

TEST(GraphVariety, HessianAtOriginIsExact) {
  GraphVariety g(map_of(2, {"u1^2", "3/2*u1*u2 + u2^3"}));
  auto h = g.hessian_at_origin();
  ASSERT_EQ(h.size(), 2u);
  EXPECT_EQ(h[0](0, 0), GaussRational(2));
  EXPECT_EQ(h[0](1, 1), GaussRational(0));
  EXPECT_EQ(h[1](0, 1), GaussRational(Rational(3, 2)));
  EXPECT_EQ(h[1](1, 0), GaussRational(Rational(3, 2)));
  EXPECT_EQ(h[1](1, 1), GaussRational(0));
}

TEST(Recenter, ProducesNormalizedTaylorRemainder) {
  GraphVariety g(map_of(2, {"u1^3 + u2 + 1", "u1*u2^2 - 2*u1"}));
  QVec u0{GaussRational(Rational(1, 2)), GaussRational(-1)};
  GraphVariety r = recenter(g, u0);
  EXPECT_TRUE(r.is_normalized());
  auto j0 = g.jet<GaussRational>(u0);
  Rng rng = stream_rng(31, 0);
  for (int t = 0; t < 20; ++t) {
    QVec v = random_rational_point(2, 10, rng);
    QVec w{u0[0] + v[0], u0[1] + v[1]};
    QVec expect = g.map().eval(w);
    QVec lin = j0.jacobian * v;
    QVec got = r.map().eval(v);
    for (std::size_t i = 0; i < 2; ++i) EXPECT_EQ(got[i], expect[i] - j0.value[i] - lin[i]);
  }
}

TEST(ParamVariety, RejectsNonImmersive) {
  EXPECT_THROW(ParamVariety(map_of(2, {"u1", "u1", "u1^2", "u1^3"})), RankDeficientJacobian);
  EXPECT_THROW(ParamVariety(map_of(1, {"u1", "u1^2", "u1^3"})), DimensionMismatch);
  EXPECT_NO_THROW(ParamVariety(map_of(1, {"u1", "u1^2"})));
}

TEST(Chart, ParabolaThroughUnitBasePoint) {
  ParamVariety v(map_of(1, {"u1", "u1^2"}));
  NormalizedChart c = normalize_at(v, CVec{1.0});
  EXPECT_NEAR(std::abs(c.hessian_at_origin()[0](0, 0) - 2.0), 0.0, 1e-12);
  for (double x : {-0.4, 0.1, 0.3}) EXPECT_NEAR(std::abs(c.eval(CVec{x})[0] - x * x), 0.0, 1e-12);
  EXPECT_GT(c.trust_radius(), 0.0);
  auto h = chart_hessian_exact(v, QVec{GaussRational(1)});
  EXPECT_EQ(h[0](0, 0), GaussRational(2));
}

TEST(Chart, RejectsSingularBasePoint) {
  ParamVariety v(map_of(1, {"u1^2", "u1^3"}));
  EXPECT_THROW(normalize_at(v, CVec{0.0}), RankDeficientJacobian);
  EXPECT_THROW(chart_hessian_exact(v, QVec{GaussRational(0)}), RankDeficientJacobian);
}

TEST(Chart, WrappedGraphAtOriginIsTheGraph) {
  GraphVariety g(map_of(2, {"u1^2 + u2^3", "u1*u2"}));
  NormalizedChart c = normalize_at(wrap(g), CVec(2));
  auto exact = g.hessian_at_origin();
  auto h = c.hessian_at_origin();
  for (std::size_t i = 0; i < 2; ++i) EXPECT_LT(norm_fro(h[i] - to_complex(exact[i])), 1e-13);
  CVec v{0.05, -0.02};
  EXPECT_LT(norm2(c.eval(v) - g.map().eval<cplx>(v)), 1e-13);
}

// Chart invariants: f~(0) = 0, f~_v(0) = 0, points lie on the variety, exact
// and float Hessians agree, and the chain-rule jet matches finite differences.
TEST(ChartProperty, Invariants) {
  for (std::uint64_t trial = 0; trial < 30; ++trial) {
    Rng rng = stream_rng(32, trial);
    const std::size_t n = 1 + trial % 2;
    ParamVariety pv = random_param(n, rng);
    QVec u0q = random_rational_point(n, 2, rng);
    CVec u0 = to_complex(u0q);
    NormalizedChart c = normalize_at(pv, u0);

    auto j0 = c.jet(CVec(n));
    EXPECT_LT(norm2(j0.value), 1e-12);
    EXPECT_LT(norm_fro(j0.jacobian), 1e-10);

    auto hq = chart_hessian_exact(pv, u0q);
    auto hf = c.hessian_at_origin();
    for (std::size_t i = 0; i < n; ++i) {
      EXPECT_LT(norm_fro(hf[i] - to_complex(hq[i])), 1e-9 * (1.0 + norm_fro(hf[i])));
      EXPECT_LT(norm_fro(j0.hessian[i] - hf[i]), 1e-9 * (1.0 + norm_fro(hf[i])));
    }

    const double r = std::min(0.05, 0.5 * c.trust_radius());
    CVec v = random_point(n, r, rng);
    CVec w = c.lift(v, c.config());
    CVec phi = c.forward(w);
    for (std::size_t i = 0; i < n; ++i) EXPECT_LT(std::abs(phi[i] - v[i]), 1e-11);

    auto value = [&](const CVec& x) { return c.eval(x); };
    CMat fd = oracle::central_jacobian(value, v, 1e-6);
    auto jv = c.jet(v);
    EXPECT_LT(norm_fro(fd - jv.jacobian), 1e-6 * (1.0 + norm_fro(jv.jacobian)));
    for (std::size_t i = 0; i < n; ++i) {
      auto grad = [&](const CVec& x) { return c.jet(x).jacobian.row_vec(i); };
      CMat hfd = oracle::central_jacobian(grad, v, 1e-5);
      EXPECT_LT(norm_fro(hfd - jv.hessian[i]), 1e-5 * (1.0 + norm_fro(jv.hessian[i])));
    }
  }
}
