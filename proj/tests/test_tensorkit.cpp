#include <gtest/gtest.h>

#include <cmath>

#include "gravlink/tensorkit.hpp"
#include "support.hpp"

using namespace gravlink;
using gravlink::testing::make_rng;
using gravlink::testing::uniform;

namespace {

double max_abs(const Eigen::Matrix4d& m) { return m.cwiseAbs().maxCoeff(); }

}  // namespace

TEST(Boost, ZeroVelocityIsIdentity) {
  const LorentzTransform l = boost({0.0, 0.0, 0.0});
  EXPECT_EQ(max_abs(l.matrix() - Eigen::Matrix4d::Identity()), 0.0);
  EXPECT_EQ(l.gamma(), 1.0);
}

TEST(Boost, GammaAtPointSix) {
  // (1 - 0.36)^(-1/2) = 1/0.8
  const long double expected = gravlink::testing::oracle::gamma(0.6L);
  const LorentzTransform l = boost({0.6, 0.0, 0.0});
  EXPECT_NEAR(l.gamma(), static_cast<double>(expected), 1e-15);
  EXPECT_NEAR(l.gamma(), 1.25, 1e-15);
  EXPECT_NEAR(l.matrix()(0, 0), 1.25, 1e-15);
  EXPECT_NEAR(l.matrix()(0, 1), -0.75, 1e-15);
  EXPECT_NEAR(l.matrix()(1, 0), -0.75, 1e-15);
}

TEST(Boost, InverseBoostComposesToIdentity) {
  const Vec3 b{0.3, -0.2, 0.5};
  const LorentzTransform l = boost(b) * boost({-b[0], -b[1], -b[2]});
  EXPECT_LE(max_abs(l.matrix() - Eigen::Matrix4d::Identity()), 1e-12);
}

TEST(Boost, InverseMatrixIsInverse) {
  const LorentzTransform l = boost({0.1, 0.4, -0.3});
  EXPECT_LE(max_abs(l.matrix() * l.inverse_matrix() - Eigen::Matrix4d::Identity()), 1e-12);
}

TEST(Boost, RejectsSuperluminal) {
  EXPECT_THROW(boost({1.0, 0.0, 0.0}), DomainError);
  EXPECT_THROW(boost({0.8, 0.7, 0.0}), DomainError);
  try {
    boost_x(1.5);
  } catch (const DomainError& e) {
    EXPECT_NE(std::string(e.what()).find("superluminal boost"), std::string::npos);
  }
}

TEST(Transform, MetricIsInvariant) {
  const Rank2Tensor eta = Rank2Tensor::minkowski(Variance::covariant);
  const Rank2Tensor out = transform_rank2(eta, boost({0.5, 0.1, -0.2}));
  EXPECT_LE(max_abs(out.components() - minkowski_matrix()), 1e-12);
  const Rank2Tensor eta_up = Rank2Tensor::minkowski(Variance::contravariant);
  EXPECT_LE(max_abs(transform_rank2(eta_up, boost_x(0.7)).components() - minkowski_matrix()), 1e-12);
}

TEST(Transform, DustAlongX) {
  const double rho = 2.5;
  const double beta = 0.4;
  const double g2 = 1.0 / (1.0 - beta * beta);
  const Rank2Tensor t = Rank2Tensor::diagonal(rho, 0.0, 0.0, 0.0, Variance::contravariant);
  const Rank2Tensor out = transform_rank2(t, boost_x(beta));
  EXPECT_NEAR(out(0, 0), g2 * rho, 1e-12);
  EXPECT_NEAR(out(0, 1), -beta * g2 * rho, 1e-12);
  EXPECT_NEAR(out(1, 0), -beta * g2 * rho, 1e-12);
  EXPECT_NEAR(out(1, 1), beta * beta * g2 * rho, 1e-12);
  EXPECT_NEAR(out(0, 0) * out(1, 1), out(0, 1) * out(0, 1), 1e-12);
  EXPECT_TRUE(out.is_symmetric());
}

TEST(Transform, CovariantScalarComponentSign) {
  const double beta = 0.2;
  const Rank2Tensor h = Rank2Tensor::diagonal(1.0, 0.0, 0.0, 0.0, Variance::covariant);
  const Rank2Tensor out = transform_rank2(h, boost_x(beta));
  EXPECT_NEAR(out(0, 0), 1.0 / 0.96, 1e-14);
  EXPECT_NEAR(out(0, 1), 0.2 / 0.96, 1e-14);
}

TEST(TraceReverse, Zero) {
  const Rank2Tensor z = trace_reverse(Rank2Tensor::zero(Variance::covariant));
  EXPECT_EQ(max_abs(z.components()), 0.0);
}

TEST(TraceReverse, DiagonalGolden) {
  // trace = eta^{00} h_00 = -2, so hbar = h + eta: diag(2 - 1, 1, 1, 1).
  const Rank2Tensor h = Rank2Tensor::diagonal(2.0, 0.0, 0.0, 0.0, Variance::covariant);
  const Rank2Tensor hb = trace_reverse(h);
  Eigen::Matrix4d expected = Eigen::Matrix4d::Identity();
  EXPECT_LE(max_abs(hb.components() - expected), 1e-15);
}

TEST(TraceReverse, RejectsAsymmetric) {
  Eigen::Matrix4d m = Eigen::Matrix4d::Zero();
  m(0, 1) = 1.0;
  EXPECT_THROW(trace_reverse(Rank2Tensor(m, Variance::covariant)), ContractViolation);
}

TEST(MinkowskiTrace, Examples) {
  EXPECT_DOUBLE_EQ(minkowski_trace(Rank2Tensor::minkowski()), 4.0);
  EXPECT_DOUBLE_EQ(minkowski_trace(Rank2Tensor::zero(Variance::covariant)), 0.0);
  EXPECT_DOUBLE_EQ(minkowski_trace(Rank2Tensor::diagonal(1.0, 2.0, 3.0, 4.0, Variance::covariant)), -1.0 + 9.0);
}

TEST(Rank2, RejectsNonFinite) {
  Eigen::Matrix4d m = Eigen::Matrix4d::Zero();
  m(2, 2) = NAN;
  EXPECT_THROW(Rank2Tensor(m, Variance::covariant), DomainError);
}

TEST(Rank2, LowerRaiseRoundTrip) {
  auto rng = make_rng(11);
  const Rank2Tensor t = Rank2Tensor::symmetric(gravlink::testing::random_symmetric(rng), Variance::contravariant);
  const Rank2Tensor back = raise_indices(lower_indices(t));
  EXPECT_EQ(back.variance(), Variance::contravariant);
  EXPECT_LE(max_abs(back.components() - t.components()), 1e-15);
}

TEST(Constants, Validation) {
  EXPECT_NO_THROW((PhysicalConstants{}.validate()));
  EXPECT_THROW((PhysicalConstants{1.0, 0.0, 1.0}.validate()), DomainError);
  EXPECT_THROW((PhysicalConstants{1.0, 1.0, -1.0}.validate()), DomainError);
}

// ---- properties, fixed seeds ----

TEST(TensorProperty, BoostPreservesMetric) {
  auto rng = make_rng(1001);
  const Eigen::Matrix4d eta = minkowski_matrix();
  for (int i = 0; i < 1000; ++i) {
    const LorentzTransform l = boost(gravlink::testing::random_velocity(rng, 0.99));
    const Eigen::Matrix4d m = l.matrix();
    ASSERT_LE(max_abs(m.transpose() * eta * m - eta), 1e-10) << "case " << i;
    const Vec3 b = l.beta();
    ASSERT_NEAR(l.gamma(), 1.0 / std::sqrt(1.0 - dot(b, b)), 1e-12 * l.gamma());
  }
}

TEST(TensorProperty, VelocityAddition) {
  auto rng = make_rng(1002);
  for (int i = 0; i < 1000; ++i) {
    const double b1 = uniform(rng, -0.95, 0.95);
    const double b2 = uniform(rng, -0.95, 0.95);
    const double b12 = (b1 + b2) / (1.0 + b1 * b2);
    const Eigen::Matrix4d lhs = (boost_x(b1) * boost_x(b2)).matrix();
    const Eigen::Matrix4d rhs = boost_x(b12).matrix();
    ASSERT_LE(max_abs(lhs - rhs), 1e-10) << b1 << " " << b2;
  }
}

TEST(TensorProperty, TraceReversalInvolution) {
  auto rng = make_rng(1003);
  for (int i = 0; i < 1000; ++i) {
    const Rank2Tensor h = Rank2Tensor::symmetric(gravlink::testing::random_symmetric(rng, 5.0), Variance::covariant);
    ASSERT_LE(max_abs(trace_reverse(trace_reverse(h)).components() - h.components()), 1e-12);
  }
}

TEST(TensorProperty, ContractionIsLorentzScalar) {
  auto rng = make_rng(1004);
  for (int i = 0; i < 1000; ++i) {
    const Rank2Tensor h = Rank2Tensor::symmetric(gravlink::testing::random_symmetric(rng), Variance::covariant);
    const Rank2Tensor t = Rank2Tensor::symmetric(gravlink::testing::random_symmetric(rng), Variance::contravariant);
    const LorentzTransform l = boost(gravlink::testing::random_velocity(rng, 0.9));
    const double before = contract(h, t);
    const double after = contract(transform_rank2(h, l), transform_rank2(t, l));
    ASSERT_LE(std::abs(after - before), 1e-10) << "case " << i;
  }
}

TEST(TensorProperty, TransformPreservesSymmetry) {
  auto rng = make_rng(1005);
  for (int i = 0; i < 200; ++i) {
    const Rank2Tensor t = Rank2Tensor::symmetric(gravlink::testing::random_symmetric(rng), Variance::contravariant);
    ASSERT_TRUE(transform_rank2(t, boost(gravlink::testing::random_velocity(rng, 0.9))).is_symmetric(1e-10));
  }
}
