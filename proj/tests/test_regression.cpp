#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "watt/regression.hpp"

using namespace watt;

namespace {

Eigen::MatrixXd to_eigen(const oracle::Matrix& x) {
  Eigen::MatrixXd out(static_cast<Eigen::Index>(x.size()), static_cast<Eigen::Index>(x.front().size()));
  for (Eigen::Index i = 0; i < out.rows(); ++i) {
    for (Eigen::Index j = 0; j < out.cols(); ++j) out(i, j) = x[i][j];
  }
  return out;
}

Eigen::VectorXd to_eigen(const std::vector<double>& v) {
  return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

double max_relative(const Eigen::VectorXd& got, const std::vector<double>& want) {
  double worst = 0;
  for (std::size_t i = 0; i < want.size(); ++i) {
    worst = std::max(worst, oracle::relative_error(got(static_cast<Eigen::Index>(i)), want[i]));
  }
  return worst;
}

}  // namespace

TEST_CASE("oracle sanity: t quadrature reproduces the textbook 5% point") {
  // t_{0.975, 10} = 2.228 in standard tables.
  CHECK(oracle::t_two_sided_by_quadrature(2.228, 10) == doctest::Approx(0.05).epsilon(0.02));
}

TEST_CASE("student_t_sf") {
  CHECK(student_t_sf(0.0, 1.0) == 1.0);
  CHECK(student_t_sf(0.0, 37.0) == 1.0);

  const double p = student_t_sf(2.228, 10.0);
  CHECK(std::abs(p - 0.05) <= 1e-3);
  CHECK(p == doctest::Approx(oracle::t_two_sided_by_quadrature(2.228, 10)).epsilon(1e-9));

  CHECK(student_t_sf(20.0, 1000.0) < 2e-16);
  CHECK(student_t_sf(20.0, 1000.0) > 0.0);

  // Cauchy closed form for df = 1: p = 1 - 2 atan(t) / pi.
  for (double t : {0.1, 1.0, 3.0, 50.0}) {
    CHECK(student_t_sf(t, 1.0) == doctest::Approx(1.0 - 2.0 * std::atan(t) / std::numbers::pi).epsilon(1e-12));
  }
  CHECK_THROWS_AS(student_t_sf(1.0, 0.5), InvalidArgument);
  CHECK(student_t_sf(std::numeric_limits<double>::max(), 5.0) == 0.0);
}

TEST_CASE("student_t_sf agrees with quadrature across df") {
  for (double df : {1.0, 2.0, 5.0, 30.0, 200.0}) {
    for (double t : {0.3, 1.0, 2.0, 4.0}) {
      CHECK(student_t_sf(t, df) == doctest::Approx(oracle::t_two_sided_by_quadrature(t, df)).epsilon(1e-8));
    }
  }
}

TEST_CASE("student_t_sf is symmetric, bounded and monotone") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> ut(-40.0, 40.0);
  std::uniform_int_distribution<int> udf(1, 5000);
  for (int i = 0; i < 2000; ++i) {
    const double t = ut(rng);
    const double df = udf(rng);
    const double p = student_t_sf(t, df);
    CHECK(student_t_sf(-t, df) == p);
    CHECK(p >= 0.0);
    CHECK(p <= 1.0);
    CHECK(student_t_sf(std::abs(t) + 0.5, df) <= p);
  }
}

TEST_CASE("Householder QR factors the input") {
  std::mt19937_64 rng(5);
  const auto x = to_eigen(oracle::random_design(rng, 12, 4));
  const HouseholderQr<double> qr(x);
  const Eigen::MatrixXd r = qr.r();
  CHECK((x.transpose() * x - r.transpose() * r).norm() <= 1e-12 * (x.transpose() * x).norm());
  const Eigen::VectorXd b = to_eigen(oracle::gaussian_vector(rng, 12));
  CHECK(qr.apply_qt(b).norm() == doctest::Approx(b.norm()).epsilon(1e-14));
}

TEST_CASE("fit_ols recovers an exact linear relation") {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(0.0, 100.0);
  const double cpu_levels[] = {0.0, 0.25, 0.5, 0.75, 1.0};
  const int n = 40;
  Eigen::MatrixXd x(n, 5);
  Eigen::VectorXd y(n);
  for (int i = 0; i < n; ++i) {
    const double cpu = cpu_levels[i % 5];
    x.row(i) << 1.0, cpu, u(rng), u(rng), u(rng);
    y(i) = 107.5 + 124.9 * cpu;
  }
  const auto fit = fit_ols<double>(x, y);
  CHECK(oracle::relative_error(fit.coefficients(0), 107.5) <= 1e-8);
  CHECK(oracle::relative_error(fit.coefficients(1), 124.9) <= 1e-8);
  for (int j = 2; j < 5; ++j) CHECK(std::abs(fit.coefficients(j)) <= 1e-8);
  CHECK(fit.diagnostics.r_squared == doctest::Approx(1.0));
}

TEST_CASE("fit_ols rejects degenerate designs") {
  SUBCASE("every row identical") {
    Eigen::MatrixXd x(10, 5);
    for (int i = 0; i < 10; ++i) x.row(i) << 1.0, 0.3, 5.0, 7.0, 11.0;
    const Eigen::VectorXd y = Eigen::VectorXd::Constant(10, 120.0);
    try {
      fit_ols<double>(x, y, power_model_column_names());
      FAIL("expected RankDeficientError");
    } catch (const RankDeficientError& e) {
      CHECK(e.column() == 1);
      CHECK(e.column_name() == "cpu");
    }
  }
  SUBCASE("all-zero column") {
    std::mt19937_64 rng(1);
    Eigen::MatrixXd x = to_eigen(oracle::random_design(rng, 10, 5));
    x.col(3).setZero();
    const Eigen::VectorXd y = to_eigen(oracle::gaussian_vector(rng, 10));
    CHECK_THROWS_AS(fit_ols<double>(x, y), RankDeficientError);
  }
  SUBCASE("duplicated column") {
    std::mt19937_64 rng(2);
    Eigen::MatrixXd x = to_eigen(oracle::random_design(rng, 10, 5));
    x.col(4) = 3.0 * x.col(2);
    const Eigen::VectorXd y = to_eigen(oracle::gaussian_vector(rng, 10));
    try {
      fit_ols<double>(x, y, power_model_column_names());
      FAIL("expected RankDeficientError");
    } catch (const RankDeficientError& e) {
      CHECK(e.column_name() == "net");
    }
  }
  SUBCASE("ill-scaled but full rank is accepted") {
    std::mt19937_64 rng(4);
    Eigen::MatrixXd x = to_eigen(oracle::random_design(rng, 30, 5));
    x.col(2) *= 1e7;
    x.col(4) *= 1e-6;
    const Eigen::VectorXd y = to_eigen(oracle::gaussian_vector(rng, 30));
    CHECK_NOTHROW(fit_ols<double>(x, y));
  }
  SUBCASE("too few rows") {
    DesignMatrix<double> d{Eigen::MatrixXd::Ones(5, 5), Eigen::VectorXd::Ones(5)};
    CHECK_THROWS_AS(fit_ols(d), InsufficientRowsError);
  }
}

TEST_CASE("fit_ols matches the normal-equations oracle on a random 20x5 design") {
  std::mt19937_64 rng(20);
  const auto x = oracle::random_design(rng, 20, 5);
  const auto y = oracle::gaussian_vector(rng, 20, 100.0, 10.0);
  const auto want = oracle::normal_equations(x, y);
  const auto fit = fit_ols<double>(to_eigen(x), to_eigen(y));
  CHECK(max_relative(fit.coefficients, want) <= 1e-8);
}

TEST_CASE("QR agrees with the normal-equations oracle on 100 random designs") {
  std::mt19937_64 rng(100);
  std::uniform_int_distribution<std::size_t> rows(8, 60);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = rows(rng);
    const auto x = oracle::random_design(rng, n, 5);
    const auto y = oracle::gaussian_vector(rng, n);
    const auto fit = fit_ols<double>(to_eigen(x), to_eigen(y));
    CHECK(max_relative(fit.coefficients, oracle::normal_equations(x, y)) <= 1e-8);
  }
}

TEST_CASE("regression invariants") {
  std::mt19937_64 rng(42);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t n = 30 + static_cast<std::size_t>(trial);
    const Eigen::MatrixXd x = to_eigen(oracle::random_design(rng, n, 5));
    Eigen::VectorXd y = to_eigen(oracle::gaussian_vector(rng, n));
    y += x * (Eigen::VectorXd(5) << 50.0, 3.0, -2.0, 1.0, 0.5).finished();
    const auto fit = fit_ols<double>(x, y);

    // Residuals orthogonal to every column.
    for (Eigen::Index j = 0; j < 5; ++j) {
      CHECK(std::abs(fit.residuals.dot(x.col(j))) <= 1e-6 * y.norm() * x.col(j).norm());
    }

    // Prediction at the column means equals mean(y).
    const Eigen::RowVectorXd means = x.colwise().mean();
    CHECK(oracle::relative_error(means * fit.coefficients, y.mean()) <= 1e-8);

    // Scale equivariance.
    const double c = trial % 2 ? 1e4 : -3e-3;
    const Eigen::Index j = 1 + trial % 4;
    Eigen::MatrixXd xs = x;
    xs.col(j) *= c;
    const auto scaled = fit_ols<double>(xs, y);
    CHECK(oracle::relative_error(scaled.coefficients(j), fit.coefficients(j) / c) <= 1e-8);
    CHECK(((xs * scaled.coefficients) - (x * fit.coefficients)).norm() <= 1e-8 * y.norm());
    CHECK(oracle::relative_error(scaled.diagnostics.r_squared, fit.diagnostics.r_squared) <= 1e-8);
    for (Eigen::Index k = 0; k < 5; ++k) {
      const double want_t = k == j && c < 0 ? -fit.diagnostics.t_stats(k) : fit.diagnostics.t_stats(k);
      CHECK(oracle::relative_error(scaled.diagnostics.t_stats(k), want_t) <= 1e-8);
      CHECK(oracle::relative_error(scaled.diagnostics.p_values(k), fit.diagnostics.p_values(k)) <= 1e-8);
    }

    // Shift of the response moves only the intercept.
    const double k = 17.25;
    const auto shifted = fit_ols<double>(x, (y.array() + k).matrix());
    CHECK(oracle::relative_error(shifted.coefficients(0), fit.coefficients(0) + k) <= 1e-8);
    CHECK((shifted.coefficients.tail(4) - fit.coefficients.tail(4)).cwiseAbs().maxCoeff() <= 1e-8);
  }
}

TEST_CASE("diagnostics are well formed") {
  std::mt19937_64 rng(8);
  const Eigen::MatrixXd x = to_eigen(oracle::random_design(rng, 200, 5));
  const Eigen::VectorXd y = to_eigen(oracle::gaussian_vector(rng, 200));
  const auto fit = fit_ols<double>(x, y);
  const auto& d = fit.diagnostics;
  CHECK(d.df == 195);
  CHECK(d.n_samples == 200);
  CHECK(d.r_squared >= 0.0);
  CHECK(d.r_squared <= 1.0);
  CHECK(d.std_errors.allFinite());
  CHECK((d.p_values.array() >= 0.0).all());
  CHECK((d.p_values.array() <= 1.0).all());
  for (Eigen::Index j = 0; j < 5; ++j) {
    CHECK(d.t_stats(j) == doctest::Approx(fit.coefficients(j) / d.std_errors(j)));
    CHECK(d.p_values(j) == doctest::Approx(student_t_sf(d.t_stats(j), 195.0)));
  }
  // Residual sigma squared is RSS / df.
  CHECK(d.residual_sigma * d.residual_sigma == doctest::Approx(fit.residuals.squaredNorm() / 195.0));
}

TEST_CASE("standard errors match sigma^2 (X^T X)^{-1} from the oracle path") {
  std::mt19937_64 rng(81);
  const auto xo = oracle::random_design(rng, 25, 5);
  const Eigen::MatrixXd x = to_eigen(xo);
  const Eigen::VectorXd y = to_eigen(oracle::gaussian_vector(rng, 25));
  const auto fit = fit_ols<double>(x, y);
  const Eigen::MatrixXd gram_inv = (x.transpose() * x).inverse();
  for (Eigen::Index j = 0; j < 5; ++j) {
    const double want = fit.diagnostics.residual_sigma * std::sqrt(gram_inv(j, j));
    CHECK(fit.diagnostics.std_errors(j) == doctest::Approx(want).epsilon(1e-9));
  }
}

TEST_CASE("fit_ols works in single precision") {
  std::mt19937_64 rng(6);
  Eigen::MatrixXf x(50, 3);
  Eigen::VectorXf y(50);
  std::uniform_real_distribution<float> u(0.0f, 1.0f);
  for (int i = 0; i < 50; ++i) {
    x.row(i) << 1.0f, u(rng), u(rng);
    y(i) = 2.0f + 3.0f * x(i, 1) - 1.0f * x(i, 2);
  }
  const auto fit = fit_ols<float>(x, y);
  CHECK(fit.coefficients(0) == doctest::Approx(2.0f).epsilon(1e-4));
  CHECK(fit.coefficients(1) == doctest::Approx(3.0f).epsilon(1e-4));
  CHECK(fit.coefficients(2) == doctest::Approx(-1.0f).epsilon(1e-4));
}
