#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>
#include <Eigen/Dense>

#include "watt/error.hpp"
#include "watt/trace.hpp"

namespace watt {

template <typename Scalar>
using VectorX = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
template <typename Scalar>
using MatrixX = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

/// Columns whose R diagonal falls below this fraction of the column norm are rank deficient.
inline constexpr double kRankTolerance = 1e-10;

/// p-values smaller than this are reported as exactly zero.
inline constexpr double kPValueFloor = 1e-300;

namespace detail {

// Continued fraction for the incomplete beta function, modified Lentz.
template <typename Scalar>
Scalar beta_continued_fraction(Scalar a, Scalar b, Scalar x) {
  constexpr int kMaxIterations = 100000;
  const Scalar eps = std::numeric_limits<Scalar>::epsilon();
  const Scalar tiny = std::numeric_limits<Scalar>::min() / eps;

  const Scalar qab = a + b;
  const Scalar qap = a + 1;
  const Scalar qam = a - 1;
  Scalar c = 1;
  Scalar d = 1 - qab * x / qap;
  if (std::abs(d) < tiny) d = tiny;
  d = 1 / d;
  Scalar h = d;
  for (int m = 1; m <= kMaxIterations; ++m) {
    const Scalar m2 = Scalar(2 * m);
    Scalar aa = Scalar(m) * (b - Scalar(m)) * x / ((qam + m2) * (a + m2));
    d = 1 + aa * d;
    if (std::abs(d) < tiny) d = tiny;
    c = 1 + aa / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1 / d;
    h *= d * c;
    aa = -(a + Scalar(m)) * (qab + Scalar(m)) * x / ((a + m2) * (qap + m2));
    d = 1 + aa * d;
    if (std::abs(d) < tiny) d = tiny;
    c = 1 + aa / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1 / d;
    const Scalar del = d * c;
    h *= del;
    if (std::abs(del - 1) <= eps) return h;
  }
  throw NumericalError("incomplete beta continued fraction did not converge");
}

}  // namespace detail

/// Regularized incomplete beta I_x(a, b). `one_minus_x` is passed separately so callers
/// that know 1-x more accurately than the subtraction can supply it.
template <typename Scalar>
Scalar regularized_beta(Scalar a, Scalar b, Scalar x, Scalar one_minus_x) {
  if (x <= 0) return 0;
  if (one_minus_x <= 0) return 1;
  const Scalar log_front = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) + a * std::log(x) +
                           b * std::log(one_minus_x);
  if (x < (a + 1) / (a + b + 2)) {
    return std::exp(log_front) * detail::beta_continued_fraction(a, b, x) / a;
  }
  return 1 - std::exp(log_front) * detail::beta_continued_fraction(b, a, one_minus_x) / b;
}

template <typename Scalar>
Scalar regularized_beta(Scalar a, Scalar b, Scalar x) {
  return regularized_beta(a, b, x, Scalar(1) - x);
}

/// Two-sided Student-t tail probability P(|T| >= |t|) with `df` degrees of freedom.
template <typename Scalar>
Scalar student_t_sf(Scalar t, Scalar df) {
  if (!(df >= 1)) throw InvalidArgument("student_t_sf needs df >= 1");
  if (std::isnan(t)) throw InvalidArgument("student_t_sf needs a finite t");
  if (t == 0) return 1;
  const Scalar t2 = t * t;
  if (!std::isfinite(t2)) return 0;
  const Scalar denom = df + t2;
  const Scalar p = regularized_beta(df / 2, Scalar(0.5), df / denom, t2 / denom);
  return std::clamp(p, Scalar(0), Scalar(1));
}

/// Householder QR of a tall matrix, A = QR. Reflectors are kept in packed form
/// (essential parts below the diagonal, unit leading entry implied).
template <typename Scalar>
class HouseholderQr {
 public:
  HouseholderQr() = default;

  template <typename Derived>
  explicit HouseholderQr(const Eigen::MatrixBase<Derived>& a) {
    compute(a);
  }

  template <typename Derived>
  HouseholderQr& compute(const Eigen::MatrixBase<Derived>& a) {
    packed_ = a;
    const Eigen::Index rows = packed_.rows();
    const Eigen::Index cols = packed_.cols();
    if (rows < cols) throw InvalidArgument("HouseholderQr needs rows >= cols");
    tau_.resize(cols);
    diag_.resize(cols);

    for (Eigen::Index j = 0; j < cols; ++j) {
      auto x = packed_.col(j).tail(rows - j);
      const Scalar norm = x.norm();
      if (norm == 0) {
        tau_(j) = 0;
        diag_(j) = 0;
        continue;
      }
      const Scalar x0 = x(0);
      const Scalar alpha = x0 >= 0 ? -norm : norm;
      // v = x - alpha e1, scaled so v(0) == 1.
      const Scalar v0 = x0 - alpha;
      x.tail(rows - j - 1) /= v0;
      tau_(j) = -v0 / alpha;
      diag_(j) = alpha;
      x(0) = alpha;

      // Apply H = I - tau v v^T to the trailing columns.
      for (Eigen::Index k = j + 1; k < cols; ++k) {
        auto col = packed_.col(k).tail(rows - j);
        const Scalar s = col(0) + x.tail(rows - j - 1).dot(col.tail(rows - j - 1));
        col(0) -= tau_(j) * s;
        col.tail(rows - j - 1) -= tau_(j) * s * x.tail(rows - j - 1);
      }
    }
    return *this;
  }

  Eigen::Index rows() const { return packed_.rows(); }
  Eigen::Index cols() const { return packed_.cols(); }

  /// Upper-triangular factor, cols x cols.
  MatrixX<Scalar> r() const {
    MatrixX<Scalar> out = packed_.topRows(cols()).template triangularView<Eigen::Upper>();
    return out;
  }

  const VectorX<Scalar>& r_diagonal() const { return diag_; }

  /// Returns Q^T b.
  template <typename Derived>
  VectorX<Scalar> apply_qt(const Eigen::MatrixBase<Derived>& b) const {
    if (b.size() != rows()) throw InvalidArgument("apply_qt: size mismatch");
    VectorX<Scalar> out = b;
    const Eigen::Index n = rows();
    for (Eigen::Index j = 0; j < cols(); ++j) {
      if (tau_(j) == 0) continue;
      auto v = packed_.col(j).tail(n - j - 1);
      auto seg = out.tail(n - j);
      const Scalar s = seg(0) + v.dot(seg.tail(n - j - 1));
      seg(0) -= tau_(j) * s;
      seg.tail(n - j - 1) -= tau_(j) * s * v;
    }
    return out;
  }

  /// Least-squares solution of min ||A x - b||. Assumes A has full column rank.
  template <typename Derived>
  VectorX<Scalar> solve(const Eigen::MatrixBase<Derived>& b) const {
    const VectorX<Scalar> qtb = apply_qt(b);
    return packed_.topRows(cols()).template triangularView<Eigen::Upper>().solve(qtb.head(cols()));
  }

  /// diag((R^T R)^{-1}), i.e. squared row norms of R^{-1}.
  VectorX<Scalar> inverse_gram_diagonal() const {
    const MatrixX<Scalar> identity = MatrixX<Scalar>::Identity(cols(), cols());
    const MatrixX<Scalar> r_inv =
        packed_.topRows(cols()).template triangularView<Eigen::Upper>().solve(identity);
    return r_inv.rowwise().squaredNorm();
  }

 private:
  MatrixX<Scalar> packed_;
  VectorX<Scalar> tau_;
  VectorX<Scalar> diag_;
};

template <typename Scalar>
struct BasicFitDiagnostics {
  Scalar r_squared = 0;
  Scalar residual_sigma = 0;
  VectorX<Scalar> std_errors;
  VectorX<Scalar> t_stats;
  VectorX<Scalar> p_values;
  std::size_t df = 0;
  std::size_t n_samples = 0;

  friend bool operator==(const BasicFitDiagnostics& a, const BasicFitDiagnostics& b) {
    return a.r_squared == b.r_squared && a.residual_sigma == b.residual_sigma &&
           a.std_errors == b.std_errors && a.t_stats == b.t_stats && a.p_values == b.p_values &&
           a.df == b.df && a.n_samples == b.n_samples;
  }
};

using FitDiagnostics = BasicFitDiagnostics<double>;

template <typename Scalar>
struct OlsFit {
  VectorX<Scalar> coefficients;
  VectorX<Scalar> residuals;
  BasicFitDiagnostics<Scalar> diagnostics;
};

/// Design matrix for the power model: intercept column of ones, then cpu, mem, disk, net.
template <typename Scalar>
struct DesignMatrix {
  MatrixX<Scalar> x;
  VectorX<Scalar> y;

  Eigen::Index rows() const { return x.rows(); }
};

inline const std::vector<std::string>& power_model_column_names() {
  static const std::vector<std::string> names{"intercept", "cpu", "mem", "disk", "net"};
  return names;
}

template <typename Scalar = double>
DesignMatrix<Scalar> make_design(const AlignedTrace& trace) {
  const auto n = static_cast<Eigen::Index>(trace.rows.size());
  DesignMatrix<Scalar> d{MatrixX<Scalar>(n, 5), VectorX<Scalar>(n)};
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto& r = trace.rows[static_cast<std::size_t>(i)];
    d.x.row(i) << Scalar(1), Scalar(r.cpu), Scalar(r.mem), Scalar(r.disk), Scalar(r.net);
    d.y(i) = Scalar(r.power_w);
  }
  return d;
}

/// Ordinary least squares via Householder QR with t-test diagnostics.
///
/// Column j is rejected as rank deficient when |R_jj| < kRankTolerance * ||X_j||.
/// `names` labels columns in error messages. R^2 is measured against the mean-only
/// model, so `x` is expected to carry an intercept column.
template <typename Scalar, typename DerivedX, typename DerivedY>
OlsFit<Scalar> fit_ols(const Eigen::MatrixBase<DerivedX>& x, const Eigen::MatrixBase<DerivedY>& y,
                       std::span<const std::string> names = {}) {
  const Eigen::Index n = x.rows();
  const Eigen::Index p = x.cols();
  if (y.size() != n) throw InvalidArgument("fit_ols: response length does not match design rows");
  if (n < p + 1) throw InsufficientRowsError(static_cast<std::size_t>(n), static_cast<std::size_t>(p + 1));
  if (!x.allFinite() || !y.allFinite()) throw InvalidArgument("fit_ols: non-finite entry in design");

  const HouseholderQr<Scalar> qr(x);
  const VectorX<Scalar> column_norms = x.colwise().norm().transpose().template cast<Scalar>();
  for (Eigen::Index j = 0; j < p; ++j) {
    if (!(std::abs(qr.r_diagonal()(j)) >= Scalar(kRankTolerance) * column_norms(j)) ||
        column_norms(j) == 0) {
      const auto idx = static_cast<std::size_t>(j);
      throw RankDeficientError(idx, idx < names.size() ? names[idx] : "x" + std::to_string(j));
    }
  }

  OlsFit<Scalar> fit;
  fit.coefficients = qr.solve(y);
  fit.residuals = y - x * fit.coefficients;

  auto& diag = fit.diagnostics;
  diag.n_samples = static_cast<std::size_t>(n);
  diag.df = static_cast<std::size_t>(n - p);
  const Scalar df = Scalar(diag.df);
  const Scalar rss = fit.residuals.squaredNorm();
  const Scalar tss = (y.array() - y.mean()).matrix().squaredNorm();
  diag.r_squared = tss > 0 ? std::clamp(Scalar(1) - rss / tss, Scalar(0), Scalar(1)) : Scalar(1);
  diag.residual_sigma = std::sqrt(rss / df);

  diag.std_errors = diag.residual_sigma * qr.inverse_gram_diagonal().array().sqrt();
  diag.t_stats.resize(p);
  diag.p_values.resize(p);
  for (Eigen::Index j = 0; j < p; ++j) {
    const Scalar b = fit.coefficients(j);
    const Scalar se = diag.std_errors(j);
    Scalar t;
    if (se > 0) {
      t = b / se;
    } else {
      // Exact fit: no residual variance. Saturate instead of producing inf/nan.
      t = b == 0 ? Scalar(0) : std::copysign(std::numeric_limits<Scalar>::max(), b);
    }
    if (!std::isfinite(t)) t = std::copysign(std::numeric_limits<Scalar>::max(), t);
    diag.t_stats(j) = t;
    Scalar pv = student_t_sf(t, df);
    if (pv < Scalar(kPValueFloor)) pv = 0;
    diag.p_values(j) = pv;
  }
  return fit;
}

template <typename Scalar>
OlsFit<Scalar> fit_ols(const DesignMatrix<Scalar>& design) {
  if (design.rows() < 6) throw InsufficientRowsError(static_cast<std::size_t>(design.rows()), 6);
  return fit_ols<Scalar>(design.x, design.y, power_model_column_names());
}

}  // namespace watt
