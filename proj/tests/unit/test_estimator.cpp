#include <Eigen/SVD>
#include <cmath>

#include "doctest.h"
#include "hawkesdp/errors.hpp"
#include "hawkesdp/estimator.hpp"
#include "test_util.hpp"

using namespace hawkesdp;
using hawkesdp::test::brute_force_design;
using hawkesdp::test::poisson;
using hawkesdp::test::random_bins;

namespace {

DesignMatrices random_design(Rng& rng, int n, int d, int p, double mean) {
  return build_design(random_bins(rng, n, d, p, mean), DenseStorage::always);
}

ParamMatrix random_param(Rng& rng, int d, int cols) {
  ParamMatrix u(d, cols);
  for (int r = 0; r < d; ++r)
    for (int c = 0; c < cols; ++c) u(r, c) = rng.normal();
  return u;
}

// Sample a matrix with nuclear norm <= radius via rescaled random factors.
ParamMatrix random_in_nuclear_ball(Rng& rng, int rows, int cols,
                                   double radius) {
  const ParamMatrix m = random_param(rng, rows, cols);
  return m * (radius * rng.uniform() / nuclear_norm(m));
}

}  // namespace

TEST_SUITE_BEGIN("estimator");

TEST_CASE("loss values") {
  Rng rng(1);
  const DesignMatrices design = random_design(rng, 60, 2, 3, 1.0);
  const int cols = static_cast<int>(design.gram.rows());

  SUBCASE("zero point gives half the squared cross norm") {
    CHECK(loss(ParamMatrix::Zero(2, cols), design) ==
          doctest::Approx(0.5 * design.cross.squaredNorm()));
  }
  SUBCASE("closed form fits exactly") {
    const ParamMatrix theta = cls_closed_form(design);
    CHECK(loss(theta, design) <= 1e-16 * design.cross.squaredNorm());
  }
  SUBCASE("matches the unnormalized residual on Z and Y") {
    const double m = static_cast<double>(design.cols);
    for (int trial = 0; trial < 20; ++trial) {
      const ParamMatrix u = random_param(rng, 2, cols);
      const double naive =
          0.5 *
          (u * design.Z * design.Z.transpose() -
           design.Y * design.Z.transpose())
              .squaredNorm() /
          (m * m);
      CHECK(loss(u, design) == doctest::Approx(naive).epsilon(1e-10));
    }
  }
  SUBCASE("shape mismatch throws") {
    CHECK_THROWS_AS(loss(ParamMatrix::Zero(2, cols + 1), design),
                    std::invalid_argument);
  }
}

TEST_CASE("loss is convex") {
  Rng rng(2);
  const DesignMatrices design = random_design(rng, 50, 2, 2, 1.0);
  const int cols = static_cast<int>(design.gram.rows());
  for (int trial = 0; trial < 100; ++trial) {
    const ParamMatrix u = random_param(rng, 2, cols);
    const ParamMatrix v = random_param(rng, 2, cols);
    const double a = rng.uniform();
    CHECK(loss(a * u + (1.0 - a) * v, design) <=
          a * loss(u, design) + (1.0 - a) * loss(v, design) + 1e-10);
  }
}

TEST_CASE("gradient") {
  Rng rng(3);
  const DesignMatrices design = random_design(rng, 60, 2, 3, 1.0);
  const int cols = static_cast<int>(design.gram.rows());

  SUBCASE("zero at the closed form") {
    const ParamMatrix theta = cls_closed_form(design);
    CHECK(gradient(theta, design).norm() <=
          1e-8 * (design.cross * design.gram).norm());
  }
  SUBCASE("linear term at zero") {
    CHECK(gradient(ParamMatrix::Zero(2, cols), design)
              .isApprox(-design.cross * design.gram, 1e-14));
  }
  SUBCASE("matches central finite differences") {
    const double h = 1e-5;
    for (int trial = 0; trial < 20; ++trial) {
      ParamMatrix u = random_param(rng, 2, cols);
      const ParamMatrix g = gradient(u, design);
      for (int probe = 0; probe < 5; ++probe) {
        const int r = static_cast<int>(rng.next_u64() % 2);
        const int c = static_cast<int>(rng.next_u64() % cols);
        const double saved = u(r, c);
        u(r, c) = saved + h;
        const double up = loss(u, design);
        u(r, c) = saved - h;
        const double down = loss(u, design);
        u(r, c) = saved;
        CHECK(std::abs(g(r, c) - (up - down) / (2.0 * h)) < 1e-5);
      }
    }
  }
}

TEST_CASE("closed-form least squares") {
  Rng rng(4);
  SUBCASE("globally optimal among random points") {
    const DesignMatrices design = random_design(rng, 80, 2, 2, 1.2);
    const ParamMatrix theta = cls_closed_form(design);
    const double best = loss(theta, design);
    const int cols = static_cast<int>(design.gram.rows());
    for (int trial = 0; trial < 100; ++trial)
      CHECK(best <= loss(random_param(rng, 2, cols), design) + 1e-12);
  }
  SUBCASE("recovers INAR coefficients") {
    // X_t = thin(X_{t-1}, alpha) + Poisson(mu): E[X_t | X_{t-1}] = alpha X + mu
    const double alpha = 0.5, mu = 1.0;
    const int n = 10000;
    BinSeries bins;
    bins.config = BinConfig{1.0, static_cast<double>(n), 1};
    bins.counts = CountMatrix::Zero(n, 1);
    std::uint32_t prev = 2;
    for (int k = 0; k < n; ++k) {
      std::uint32_t next = 0;
      for (std::uint32_t i = 0; i < prev; ++i)
        if (rng.uniform() <= alpha) ++next;
      next += static_cast<std::uint32_t>(poisson(rng, mu));
      bins.counts(k, 0) = next;
      prev = next;
    }
    const ParamMatrix theta = cls_closed_form(build_design(bins));
    CHECK(std::abs(theta(0, 0) - alpha) < 0.05);
    CHECK(std::abs(theta(0, 1) - mu) < 0.05);
  }
  SUBCASE("singular gram is reported with its condition number") {
    // constant counts make the lag rows collinear with the intercept
    BinSeries bins;
    bins.config = BinConfig{1.0, 12.0, 2};
    bins.counts = CountMatrix::Constant(12, 1, 3);
    try {
      cls_closed_form(build_design(bins));
      FAIL("expected numerical_error");
    } catch (const numerical_error& e) {
      CHECK(std::string(e.what()).find("condition number") !=
            std::string::npos);
    }
  }
}

TEST_CASE("Frobenius projection") {
  Rng rng(5);
  SUBCASE("radial scaling") {
    ParamMatrix u(1, 2);
    u << 2.0, 0.0;
    CHECK(project_frobenius(u, 1.0)(0, 0) == doctest::Approx(1.0));
  }
  SUBCASE("identity inside the ball") {
    const ParamMatrix u = 0.1 * random_param(rng, 2, 3);
    CHECK(project_frobenius(u, 1.0) == u);
    CHECK(project_frobenius(project_frobenius(u * 100.0, 1.0), 1.0)
              .isApprox(project_frobenius(u * 100.0, 1.0)));
  }
  SUBCASE("non-expansive") {
    for (int trial = 0; trial < 100; ++trial) {
      const ParamMatrix x = 2.0 * random_param(rng, 2, 4);
      const ParamMatrix y = 2.0 * random_param(rng, 2, 4);
      CHECK((project_frobenius(x, 1.0) - project_frobenius(y, 1.0)).norm() <=
            (x - y).norm() + 1e-12);
    }
  }
}

TEST_CASE("top singular pair") {
  Rng rng(6);
  SUBCASE("hand 2x2") {
    Eigen::MatrixXd g = Eigen::Vector2d(2.0, 1.0).asDiagonal();
    const SingularTriple top = top_singular_pair(g, 1e-9, 1000, rng);
    CHECK(top.sigma == doctest::Approx(2.0));
    CHECK(std::abs(top.u(0)) == doctest::Approx(1.0));
    CHECK(top.u(0) > 0.0);  // sign convention
    CHECK(std::abs(top.v(0)) == doctest::Approx(1.0));
  }
  SUBCASE("rank one") {
    Eigen::VectorXd a(3), b(4);
    a << 1.0, -2.0, 2.0;
    b << 0.5, 0.5, -1.0, 1.0;
    const SingularTriple top =
        top_singular_pair(a * b.transpose(), 1e-9, 1000, rng);
    CHECK(top.sigma == doctest::Approx(a.norm() * b.norm()));
  }
  SUBCASE("random tall matrices match a dense SVD") {
    for (int trial = 0; trial < 20; ++trial) {
      const Eigen::MatrixXd g = random_param(rng, 5, 9);
      const SingularTriple top = top_singular_pair(g, 1e-10, 20000, rng);
      REQUIRE(top.converged);
      Eigen::JacobiSVD<Eigen::MatrixXd> svd(g);
      CHECK(std::abs(top.sigma - svd.singularValues()(0)) <=
            1e-8 * svd.singularValues()(0));
    }
  }
  SUBCASE("zero matrix is rejected") {
    CHECK_THROWS_AS(top_singular_pair(Eigen::MatrixXd::Zero(3, 5), 1e-9, 10, rng),
                    std::invalid_argument);
  }
}

TEST_CASE("nuclear linear minimization oracle") {
  Rng rng(7);
  SUBCASE("hand 2x2") {
    Eigen::MatrixXd g = Eigen::Vector2d(2.0, 1.0).asDiagonal();
    const LmoResult lmo = nuclear_lmo(g, 1.0, rng);
    CHECK_FALSE(lmo.zero_gradient);
    CHECK(lmo.vertex(0, 0) == doctest::Approx(-1.0));
    CHECK((lmo.vertex * g.transpose()).trace() == doctest::Approx(-2.0));
  }
  SUBCASE("beats sampled feasible points") {
    for (int trial = 0; trial < 20; ++trial) {
      const Eigen::MatrixXd g = random_param(rng, 3, 7);
      const double radius = 0.5 + rng.uniform();
      const LmoResult lmo = nuclear_lmo(g, radius, rng);
      const double value = (lmo.vertex.array() * g.array()).sum();
      for (int s = 0; s < 200; ++s) {
        const ParamMatrix u = random_in_nuclear_ball(rng, 3, 7, radius);
        CHECK(value <= (u.array() * g.array()).sum() + 1e-9);
      }
      CHECK(nuclear_norm(lmo.vertex) == doctest::Approx(radius).epsilon(1e-9));
    }
  }
  SUBCASE("invariant under positive scaling of the gradient") {
    const Eigen::MatrixXd g = random_param(rng, 6, 11);
    Rng ra(123), rb(123);
    const LmoResult a = nuclear_lmo(g, 2.0, ra);
    const LmoResult b = nuclear_lmo(3.7 * g, 2.0, rb);
    CHECK(a.vertex.isApprox(b.vertex, 1e-7));
  }
  SUBCASE("zero gradient is flagged") {
    const LmoResult lmo = nuclear_lmo(Eigen::MatrixXd::Zero(2, 5), 1.0, rng);
    CHECK(lmo.zero_gradient);
    CHECK(lmo.vertex == Eigen::MatrixXd::Zero(2, 5));
  }
}

TEST_CASE("empirical gradient sensitivity stays below the Lipschitz bound") {
  Rng rng(8);
  const double rho = 1.0;
  for (int trial = 0; trial < 30; ++trial) {
    const BinSeries bins = random_bins(rng, 25, 2, 3, 1.0);
    const int bin = static_cast<int>(rng.next_u64() % 25);
    const int dim = static_cast<int>(rng.next_u64() % 2);
    const BinSeries other = perturb_neighbor(bins, bin, dim, +1);
    const DesignMatrices da = build_design(bins);
    const DesignMatrices db = build_design(other);
    const double r_emp = std::max(estimate_R(da), estimate_R(db));
    const double l2 = 2.0 * rho * r_emp;
    const ParamMatrix u = project_frobenius(
        random_param(rng, 2, static_cast<int>(da.gram.rows())), rho);
    CHECK((gradient(u, da) - gradient(u, db)).norm() <= 2.0 * l2);
  }
}

TEST_SUITE_END();
