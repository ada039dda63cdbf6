#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "obd/adversary.hpp"
#include "obd/cost_function.hpp"
#include "obd/environment.hpp"
#include "obd/errors.hpp"
#include "obd/instance.hpp"
#include "oracles.hpp"

using namespace obd;

namespace {

Vector vec(std::initializer_list<double> v) {
  Vector x(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double e : v) x(i++) = e;
  return x;
}

void expect_convex_on_segments(const CostFunction& f, std::mt19937_64& rng, double scale) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const Eigen::Index d = f.dimension();
  for (int k = 0; k < 5; ++k) {
    const Vector x = f.minimizer() + oracle::gaussian(rng, d, scale);
    const Vector y = f.minimizer() + oracle::gaussian(rng, d, scale);
    const double l = u(rng);
    EXPECT_LE(f(l * x + (1 - l) * y), l * f(x) + (1 - l) * f(y) + 1e-9);
  }
}

}  // namespace

TEST(Quadratic, IdentityExample) {
  const CostFunction f = make_quadratic(Matrix::Identity(2, 2), Vector::Zero(2));
  EXPECT_DOUBLE_EQ(f(vec({1, 1})), 2.0);
  EXPECT_EQ(f.gradient(vec({1, 1})), vec({2, 2}));
  EXPECT_EQ(f.minimizer(), Vector::Zero(2));
  EXPECT_TRUE(f.smooth());
  EXPECT_FALSE(f.alpha().has_value());
  EXPECT_EQ(f.min_value(), 0.0);
}

TEST(Quadratic, DiagonalMinimizerHitsZero) {
  const CostFunction f = make_quadratic(vec({2, 1}).asDiagonal().toDenseMatrix(), vec({2, 1}));
  EXPECT_NEAR((f.minimizer() - vec({1, 1})).norm(), 0.0, 1e-15);
  EXPECT_NEAR(f(f.minimizer()), 0.0, 1e-15);
}

TEST(Quadratic, GradientMatchesFiniteDifferences) {
  std::mt19937_64 rng(101);
  const CostFunction f = make_quadratic(vec({3, 1}).asDiagonal().toDenseMatrix(), oracle::gaussian(rng, 2));
  for (int k = 0; k < 5; ++k) {
    const Vector x = oracle::gaussian(rng, 2, 2.0);
    const Vector fd = oracle::finite_difference_gradient([&](const Vector& z) { return f(z); }, x, 1e-5);
    EXPECT_LE((fd - f.gradient(x)).norm(), 1e-6 * (1 + fd.norm()));
  }
}

TEST(Quadratic, RejectsRankDeficient) {
  Matrix a(2, 2);
  a << 1, 2, 2, 4;
  EXPECT_THROW(make_quadratic(a, Vector::Zero(2)), InvalidArgument);
}

TEST(NormTracking, L2Example) {
  const CostFunction f = make_norm_tracking(Vector::Zero(2), Norm::l2());
  EXPECT_DOUBLE_EQ(f(vec({3, 4})), 5.0);
  EXPECT_LE((f.gradient(vec({3, 4})) - vec({0.6, 0.8})).norm(), 1e-15);
  EXPECT_EQ(f(Vector::Zero(2)), 0.0);
  EXPECT_EQ(f.gradient(Vector::Zero(2)), Vector::Zero(2));
  EXPECT_FALSE(f.smooth());
}

TEST(NormTracking, L1AlphaAgainstL2Switching) {
  const Vector v = vec({0.5, -1});
  const CostFunction f = make_norm_tracking(v, Norm::l1(), Norm::l2());
  ASSERT_TRUE(f.alpha().has_value());
  // ||u||_1 >= ||u||_2 so the tight modulus is 1, which also exceeds 1/sqrt(2).
  EXPECT_DOUBLE_EQ(*f.alpha(), 1.0);
  EXPECT_GE(*f.alpha(), 1.0 / std::sqrt(2.0));
  std::mt19937_64 rng(1);
  for (int k = 0; k < 10000; ++k) {
    const Vector x = v + oracle::gaussian(rng, 2, 3.0);
    EXPECT_GE(f(x) - f.min_value(), *f.alpha() * (x - v).norm() - 1e-12);
  }
}

TEST(NormTracking, AlphaForEveryPair) {
  std::mt19937_64 rng(2);
  const Norm norms[] = {Norm::l2(), Norm::l1(), Norm::linf()};
  for (const Norm& a : norms) {
    for (const Norm& s : norms) {
      const Vector v = oracle::gaussian(rng, 3);
      const CostFunction f = make_norm_tracking(v, a, s, 2.0, 0.5);
      double worst = 1e300;
      for (int k = 0; k < 1000; ++k) {
        const Vector u = oracle::gaussian(rng, 3);
        worst = std::min(worst, (f(v + u) - f.min_value()) / s(u));
      }
      EXPECT_LE(*f.alpha(), worst * (1 + 1e-12)) << a.name() << "/" << s.name();
      EXPECT_GE(*f.alpha(), 0.9 * worst) << a.name() << "/" << s.name();
      EXPECT_DOUBLE_EQ(f(v), 0.5);
    }
  }
}

TEST(Composite, L1PlusQuadraticExample) {
  const CostFunction g = make_norm_tracking(Vector::Zero(2), Norm::l1(), Norm::l1());
  const CostFunction h = make_quadratic_form(Matrix::Identity(2, 2), Vector::Zero(2));
  const CostFunction f = make_composite(g, h);
  EXPECT_DOUBLE_EQ(f(vec({1, 0})), 2.0);
  EXPECT_EQ(*f.alpha(), 1.0);
  std::mt19937_64 rng(3);
  for (int k = 0; k < 1000; ++k) {
    const Vector x = oracle::gaussian(rng, 2, 2.0);
    EXPECT_GE(f(x) - f(f.minimizer()), x.lpNorm<1>() - 1e-12);
  }
  expect_convex_on_segments(f, rng, 2.0);
}

TEST(Composite, ZeroSecondTermEqualsFirst) {
  const CostFunction g = make_norm_tracking(vec({1, 2}), Norm::linf());
  const CostFunction h = make_quadratic_form(Matrix::Identity(2, 2), vec({1, 2}), 0.0);
  const CostFunction f = make_composite(g, h);
  std::mt19937_64 rng(4);
  for (int k = 0; k < 100; ++k) {
    const Vector x = vec({1, 2}) + 1e-9 * oracle::gaussian(rng, 2);
    EXPECT_NEAR(f(x), g(x), 1e-15);
  }
  EXPECT_EQ(f(vec({1, 2})), g(vec({1, 2})));
}

TEST(Composite, RejectsMinimizerMismatch) {
  const CostFunction g = make_norm_tracking(Vector::Zero(2), Norm::l1());
  const CostFunction h = make_quadratic_form(Matrix::Identity(2, 2), vec({0.1, 0}));
  EXPECT_THROW(make_composite(g, h), InvalidArgument);
}

TEST(Adversary, OriginPicksMinusOne) {
  const CostFunction f = adversary_step(Vector::Zero(3), 1);
  ASSERT_TRUE(f.is_indicator());
  const FeasibleSet& s = f.as<IndicatorCost>()->set();
  EXPECT_EQ(s.kind(), SetKind::kHyperplane);
  EXPECT_TRUE(s.contains(vec({-1, 5, 7})));
  EXPECT_FALSE(s.contains(vec({1, 0, 0})));
  EXPECT_EQ(f(vec({-1, 0, 0})), 0.0);
  EXPECT_TRUE(std::isinf(f(vec({0, 0, 0}))));
}

TEST(Adversary, NegativeCoordinatePicksPlusOne) {
  const CostFunction f = adversary_step(vec({0, -0.5, 0}), 2);
  const FeasibleSet& s = f.as<IndicatorCost>()->set();
  EXPECT_TRUE(s.contains(vec({0, 1, 0})));
  EXPECT_FALSE(s.contains(vec({0, -1, 0})));
  EXPECT_THROW(adversary_step(Vector::Zero(3), 4), InvalidArgument);
  EXPECT_THROW(adversary_step(Vector::Zero(3), 0), InvalidArgument);
}

TEST(Adversary, ProjectionResponderMovesOneEachRound) {
  HyperplaneAdversary env(4);
  Vector x = Vector::Zero(4);
  double moved = 0.0;
  for (int t = 1; t <= 4; ++t) {
    const CostFunction f = env.reveal(t, x);
    const Vector next = f.as<IndicatorCost>()->set().project(x);
    EXPECT_NEAR((next - x).norm(), 1.0, 1e-15);
    moved += (next - x).norm();
    x = next;
  }
  EXPECT_DOUBLE_EQ(moved, 4.0);
  // The offline player jumps straight to the final corner.
  EXPECT_DOUBLE_EQ(x.norm(), 2.0);
  EXPECT_EQ(x.cwiseAbs(), Vector::Ones(4));
}

TEST(Generator, Deterministic) {
  InstanceSpec spec;
  spec.d = 3;
  spec.T = 6;
  spec.seed = 77;
  for (CostFamily fam : {CostFamily::kQuadratic, CostFamily::kNormTracking, CostFamily::kComposite}) {
    spec.family = fam;
    const auto a = generate_instance(spec);
    const auto b = generate_instance(spec);
    ASSERT_EQ(a.size(), 6u);
    for (std::size_t t = 0; t < a.size(); ++t) {
      EXPECT_EQ(a[t].minimizer(), b[t].minimizer());
      const Vector x = Vector::LinSpaced(3, -1.0, 2.0);
      EXPECT_EQ(a[t](x), b[t](x));
    }
  }
  spec.family = CostFamily::kHyperplaneChase;
  EXPECT_THROW(generate_instance(spec), InvalidArgument);
}

TEST(Generator, ConditionNumberIsExact) {
  InstanceSpec spec;
  spec.d = 5;
  spec.T = 20;
  spec.cond = 10.0;
  spec.seed = 3;
  for (const CostFunction& f : generate_instance(spec)) {
    const QuadraticCost* q = f.as<QuadraticCost>();
    ASSERT_NE(q, nullptr);
    ASSERT_TRUE(q->has_factor());
    const Vector s = Eigen::JacobiSVD<Matrix>(q->a()).singularValues();
    EXPECT_NEAR(s.maxCoeff() / s.minCoeff(), 10.0, 1e-8);
    // Q = A^T A so its eigenvalue ratio is the square.
    const Vector ev = Eigen::SelfAdjointEigenSolver<Matrix>(q->q()).eigenvalues();
    EXPECT_NEAR(std::sqrt(ev.maxCoeff() / ev.minCoeff()), 10.0, 1e-8);
  }
}

TEST(Generator, TargetsWithinDiameter) {
  InstanceSpec spec;
  spec.d = 4;
  spec.T = 60;
  spec.diameter = 3.0;
  spec.family = CostFamily::kNormTracking;
  spec.seed = 8;
  const auto costs = generate_instance(spec);
  for (std::size_t i = 0; i < costs.size(); ++i) {
    for (std::size_t j = i + 1; j < costs.size(); ++j) {
      EXPECT_LE((costs[i].minimizer() - costs[j].minimizer()).norm(), 3.0);
    }
  }
}

TEST(Generator, PropertiesOfGeneratedCosts) {
  std::mt19937_64 rng(13);
  InstanceSpec spec;
  spec.d = 3;
  spec.T = 10;
  spec.offset_max = 1.0;
  for (CostFamily fam : {CostFamily::kQuadratic, CostFamily::kNormTracking, CostFamily::kComposite}) {
    for (NormKind sw : {NormKind::kL2, NormKind::kL1, NormKind::kLInf}) {
      spec.family = fam;
      spec.switching_norm = sw;
      spec.tracking_norm = sw == NormKind::kL2 ? NormKind::kL1 : NormKind::kL2;
      spec.seed = static_cast<std::uint64_t>(fam) * 10 + static_cast<std::uint64_t>(sw);
      const Norm s = switching_norm(spec);
      for (const CostFunction& f : generate_instance(spec)) {
        EXPECT_NEAR(f(f.minimizer()), f.min_value(), 1e-12);
        expect_convex_on_segments(f, rng, 2.0);
        for (int k = 0; k < 5; ++k) {
          const Vector x = f.minimizer() + oracle::gaussian(rng, 3, 2.0);
          EXPECT_GE(f(x), f.min_value() - 1e-12);
          if (f.smooth()) {
            const Vector fd = oracle::finite_difference_gradient([&](const Vector& z) { return f(z); }, x, 1e-5);
            EXPECT_LE((fd - f.gradient(x)).norm(), 1e-6 * (1 + fd.norm()));
          }
        }
        if (f.alpha()) {
          for (int k = 0; k < 1000; ++k) {
            const Vector u = oracle::gaussian(rng, 3, 2.0);
            EXPECT_GE(f(f.minimizer() + u) - f.min_value(), *f.alpha() * s(u) - 1e-9);
          }
        }
      }
    }
  }
}

TEST(Generator, ValidationNamesField) {
  InstanceSpec spec;
  spec.cond = 0.5;
  try {
    validate(spec);
    FAIL();
  } catch (const InvalidArgument& e) {
    EXPECT_NE(std::string(e.what()).find("cond"), std::string::npos);
  }
}
