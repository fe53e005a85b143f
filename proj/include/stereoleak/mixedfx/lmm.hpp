// include/stereoleak/mixedfx/lmm.hpp

// Copyright 2026 The stereoleak Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#ifndef STEREOLEAK_MIXEDFX_LMM_HPP_
#define STEREOLEAK_MIXEDFX_LMM_HPP_

#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <vector>

#include "stereoleak/mixedfx/design.hpp"
#include "stereoleak/mixedfx/ols.hpp"
#include "stereoleak/mixedfx/wald.hpp"

namespace stereoleak::mixedfx {

// Random-intercept model
//
//   y = X beta + Z u + e,   u ~ N(0, sigma_u2 I_q),   e ~ N(0, sigma_e2 I_n),
//
// profiled over lambda = sigma_u2 / sigma_e2. With V(lambda) = I + lambda Z Z',
// beta(lambda) is the GLS estimate and sigma_e2(lambda) = r'V^-1 r / (n or n - p).

/// How V(lambda)^-1 is applied. kBlock uses the closed-form inverse of each
/// per-group block I + lambda 1 1'; kDense factors the full n x n V and
/// exists as a cross-check.
enum class GlsPath { kBlock, kDense };

struct LmmOptions {
  Method method = Method::kReml;
  double log_lambda_min = -12.0;
  double log_lambda_max = 12.0;
  double tolerance = 1e-8;  // on log lambda
  int max_iterations = 200;
  /// Skip the search and evaluate at this lambda (0 allowed).
  std::optional<double> fixed_lambda;
  GlsPath path = GlsPath::kBlock;
};

template <typename Scalar>
struct GlsEvaluation {
  Scalar log_likelihood = -std::numeric_limits<Scalar>::infinity();
  Vector<Scalar> beta;
  Matrix<Scalar> xtvx_inverse;  // (X' V^-1 X)^-1
  Scalar rss = 0;               // r' V^-1 r
  Scalar sigma_e2 = 0;
};

/// Profiled (RE)ML log-likelihood of a random-intercept model as a function
/// of lambda. Rows are put in a canonical order (group, then values) before
/// any summation, so results do not depend on the input row order.
template <typename Scalar>
class ProfiledLikelihood {
 public:
  ProfiledLikelihood(const DesignMatrix<Scalar> &d, Method method, GlsPath path = GlsPath::kBlock)
      : method_(method), path_(path) {
    if (method == Method::kOls) {
      throw Error(ErrorKind::kUsage, "profiled likelihood needs REML or ML");
    }
    const GroupIndex idx = IndexGroups(d.groups);
    const Eigen::Index n = d.rows();
    const Eigen::Index p = d.cols();
    std::vector<Eigen::Index> order(n);
    std::iota(order.begin(), order.end(), Eigen::Index(0));
    std::sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
      if (idx.of_row[a] != idx.of_row[b]) return idx.of_row[a] < idx.of_row[b];
      if (d.y(a) != d.y(b)) return d.y(a) < d.y(b);
      for (Eigen::Index j = 0; j < p; ++j) {
        if (d.X(a, j) != d.X(b, j)) return d.X(a, j) < d.X(b, j);
      }
      return false;
    });
    X_.resize(n, p);
    y_.resize(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      X_.row(i) = d.X.row(order[i]);
      y_(i) = d.y(order[i]);
    }
    sizes_ = idx.sizes;
    starts_.resize(sizes_.size());
    Eigen::Index start = 0;
    for (std::size_t g = 0; g < sizes_.size(); ++g) {
      starts_[g] = start;
      start += sizes_[g];
    }
    xtx_ = X_.transpose() * X_;
    xty_ = X_.transpose() * y_;
    group_x_.resize(p, static_cast<Eigen::Index>(sizes_.size()));
    group_y_.resize(static_cast<Eigen::Index>(sizes_.size()));
    for (std::size_t g = 0; g < sizes_.size(); ++g) {
      group_x_.col(g) = X_.middleRows(starts_[g], sizes_[g]).colwise().sum().transpose();
      group_y_(g) = y_.segment(starts_[g], sizes_[g]).sum();
    }
  }

  Eigen::Index n() const { return X_.rows(); }
  Eigen::Index p() const { return X_.cols(); }
  int n_groups() const { return static_cast<int>(sizes_.size()); }

  GlsEvaluation<Scalar> Evaluate(Scalar lambda) const {
    return path_ == GlsPath::kBlock ? EvaluateBlock(lambda) : EvaluateDense(lambda);
  }

  Scalar LogLikelihoodAtLog(Scalar log_lambda) const {
    using std::exp;
    return Evaluate(exp(log_lambda)).log_likelihood;
  }

  /// d loglik / d log(lambda) at the GLS solution. With s_g the residual sum
  /// and t_g the column sums of group g, and m_g its size,
  ///   d rss / d lambda      = -sum_g s_g^2 / (1 + lambda m_g)^2
  ///   d log|V| / d lambda   =  sum_g m_g / (1 + lambda m_g)
  ///   d log|A| / d lambda   = -sum_g t_g' A^-1 t_g / (1 + lambda m_g)^2  (REML)
  Scalar DerivativeAtLog(Scalar log_lambda) const {
    using std::exp;
    const Scalar lambda = exp(log_lambda);
    const GlsEvaluation<Scalar> ev = Evaluate(lambda);
    if (ev.beta.size() == 0 || !(ev.rss > Scalar(0))) {
      return std::numeric_limits<Scalar>::quiet_NaN();
    }
    const Vector<Scalar> r = y_ - X_ * ev.beta;
    const Scalar dof = Scalar(method_ == Method::kReml ? n() - p() : n());
    Scalar d_rss = 0, d_logdet_v = 0, d_logdet_a = 0;
    for (std::size_t g = 0; g < sizes_.size(); ++g) {
      const Scalar m = Scalar(sizes_[g]);
      const Scalar h = Scalar(1) / (Scalar(1) + lambda * m);
      const Scalar sg = r.segment(starts_[g], sizes_[g]).sum();
      d_rss -= sg * sg * h * h;
      d_logdet_v += m * h;
      if (method_ == Method::kReml) {
        const auto t = group_x_.col(static_cast<Eigen::Index>(g));
        d_logdet_a -= t.dot(ev.xtvx_inverse * t) * h * h;
      }
    }
    return Scalar(-0.5) * lambda * (dof * d_rss / ev.rss + d_logdet_v + d_logdet_a);
  }

 private:
  // Completes an evaluation from X'V^-1X, X'V^-1y and a way to form r'V^-1 r.
  template <typename Quadratic>
  GlsEvaluation<Scalar> Finish(const Matrix<Scalar> &A, const Vector<Scalar> &b,
                               Scalar log_det_v, Quadratic &&quadratic) const {
    using std::log;
    GlsEvaluation<Scalar> ev;
    Eigen::LLT<Matrix<Scalar>> llt(A);
    if (llt.info() != Eigen::Success) return ev;
    ev.beta = llt.solve(b);
    ev.xtvx_inverse = llt.solve(Matrix<Scalar>::Identity(p(), p()));
    const Vector<Scalar> r = y_ - X_ * ev.beta;
    ev.rss = quadratic(r);
    const Scalar dof = Scalar(method_ == Method::kReml ? n() - p() : n());
    ev.sigma_e2 = ev.rss / dof;
    if (!(ev.sigma_e2 > Scalar(0))) return ev;
    const Scalar two_pi = Scalar(2) * std::numbers::pi_v<Scalar>;
    Scalar ll = dof * (log(two_pi) + log(ev.sigma_e2) + Scalar(1)) + log_det_v;
    if (method_ == Method::kReml) {
      ll += Scalar(2) * llt.matrixLLT().diagonal().array().log().sum();
    }
    ev.log_likelihood = Scalar(-0.5) * ll;
    if (!std::isfinite(static_cast<double>(ev.log_likelihood))) {
      ev.log_likelihood = -std::numeric_limits<Scalar>::infinity();
    }
    return ev;
  }

  GlsEvaluation<Scalar> EvaluateBlock(Scalar lambda) const {
    using std::log1p;
    const Eigen::Index q = static_cast<Eigen::Index>(sizes_.size());
    // Block g of V^-1 is I - w_g 1 1'.
    Vector<Scalar> w(q);
    Scalar log_det_v = 0;
    for (Eigen::Index g = 0; g < q; ++g) {
      const Scalar ng = Scalar(sizes_[g]);
      w(g) = lambda / (Scalar(1) + lambda * ng);
      log_det_v += log1p(lambda * ng);
    }
    const Matrix<Scalar> A = xtx_ - group_x_ * w.asDiagonal() * group_x_.transpose();
    const Vector<Scalar> b = xty_ - group_x_ * (w.array() * group_y_.array()).matrix();
    return Finish(A, b, log_det_v, [&](const Vector<Scalar> &r) {
      Scalar s = r.squaredNorm();
      for (Eigen::Index g = 0; g < q; ++g) {
        const Scalar rg = r.segment(starts_[g], sizes_[g]).sum();
        s -= w(g) * rg * rg;
      }
      return s;
    });
  }

  GlsEvaluation<Scalar> EvaluateDense(Scalar lambda) const {
    const Eigen::Index n_rows = n();
    Matrix<Scalar> V = Matrix<Scalar>::Identity(n_rows, n_rows);
    for (std::size_t g = 0; g < sizes_.size(); ++g) {
      V.block(starts_[g], starts_[g], sizes_[g], sizes_[g]).array() += lambda;
    }
    Eigen::LLT<Matrix<Scalar>> chol(V);
    if (chol.info() != Eigen::Success) return {};
    const Matrix<Scalar> vinv_x = chol.solve(X_);
    const Matrix<Scalar> A = X_.transpose() * vinv_x;
    const Vector<Scalar> b = vinv_x.transpose() * y_;
    const Scalar log_det_v = Scalar(2) * chol.matrixLLT().diagonal().array().log().sum();
    return Finish(A, b, log_det_v,
                  [&](const Vector<Scalar> &r) { return r.dot(chol.solve(r)); });
  }

  Method method_;
  GlsPath path_;
  Matrix<Scalar> X_;
  Vector<Scalar> y_;
  std::vector<int> sizes_;
  std::vector<Eigen::Index> starts_;
  Matrix<Scalar> xtx_;
  Vector<Scalar> xty_;
  Matrix<Scalar> group_x_;  // p x q column sums per group
  Vector<Scalar> group_y_;
};

namespace detail {

template <typename Scalar>
MixedFit<Scalar> Assemble(const ProfiledLikelihood<Scalar> &lik, const GlsEvaluation<Scalar> &ev,
                          Scalar lambda, Method method) {
  MixedFit<Scalar> fit;
  fit.method = method;
  fit.n = lik.n();
  fit.p = lik.p();
  fit.n_groups = lik.n_groups();
  fit.beta = ev.beta;
  fit.sigma_e2 = ev.sigma_e2;
  fit.sigma_u2 = lambda * ev.sigma_e2;
  fit.lambda = lambda;
  using std::log;
  fit.log_lambda = lambda > Scalar(0) ? log(lambda) : -std::numeric_limits<Scalar>::infinity();
  fit.log_likelihood = ev.log_likelihood;
  fit.covariance = ev.xtvx_inverse * ev.sigma_e2;
  fit.se = fit.covariance.diagonal().cwiseSqrt();
  fit.p_values.resize(fit.p);
  for (Eigen::Index j = 0; j < fit.p; ++j) fit.p_values(j) = WaldPValue(fit.beta(j), fit.se(j));
  return fit;
}

}  // namespace detail

/// Fits the random-intercept model by maximising the profiled (RE)ML
/// log-likelihood over log lambda in [log_lambda_min, log_lambda_max]: a
/// unit-step scan locates the best bracket, golden-section search refines it
/// to `tolerance`. A maximum at the lower end collapses to lambda = 0
/// (sigma_u2 = 0); both ends are reported through `boundary`.
template <typename Scalar>
MixedFit<Scalar> FitLmm(const DesignMatrix<Scalar> &d, const LmmOptions &opt = {}) {
  if (opt.method == Method::kOls) return FitOls(d);
  ValidateDesign(d);
  ProfiledLikelihood<Scalar> lik(d, opt.method, opt.path);
  if (lik.n_groups() < 1) throw Error(ErrorKind::kNumeric, "fit_lmm: no groups");

  if (opt.fixed_lambda) {
    const Scalar lambda = Scalar(*opt.fixed_lambda);
    if (!(lambda >= Scalar(0))) throw Error(ErrorKind::kUsage, "fit_lmm: fixed lambda must be >= 0");
    GlsEvaluation<Scalar> ev = lik.Evaluate(lambda);
    if (!std::isfinite(static_cast<double>(ev.log_likelihood))) {
      throw Error(ErrorKind::kNumeric, "fit_lmm: likelihood is not finite at the fixed lambda");
    }
    MixedFit<Scalar> fit = detail::Assemble(lik, ev, lambda, opt.method);
    fit.converged = true;
    fit.column_names = d.column_names;
    return fit;
  }

  const Scalar lo = Scalar(opt.log_lambda_min);
  const Scalar hi = Scalar(opt.log_lambda_max);
  if (!(hi > lo)) throw Error(ErrorKind::kUsage, "fit_lmm: empty log-lambda interval");

  // Coarse scan, unit steps (plus the far end).
  const int steps = std::max(2, static_cast<int>(std::ceil(static_cast<double>(hi - lo))));
  std::vector<Scalar> grid(steps + 1);
  std::vector<Scalar> values(steps + 1);
  int best = -1;
  for (int k = 0; k <= steps; ++k) {
    grid[k] = k == steps ? hi : lo + (hi - lo) * Scalar(k) / Scalar(steps);
    values[k] = lik.LogLikelihoodAtLog(grid[k]);
    if (std::isfinite(static_cast<double>(values[k])) && (best < 0 || values[k] > values[best])) {
      best = k;
    }
  }
  if (best < 0) throw Error(ErrorKind::kNumeric, "fit_lmm: likelihood not finite anywhere");

  // Golden-section refinement inside the neighbouring grid cells.
  Scalar a = grid[std::max(best - 1, 0)];
  Scalar b = grid[std::min(best + 1, steps)];
  const Scalar inv_phi = (std::sqrt(Scalar(5)) - Scalar(1)) / Scalar(2);
  Scalar c = b - inv_phi * (b - a);
  Scalar e = a + inv_phi * (b - a);
  Scalar fc = lik.LogLikelihoodAtLog(c);
  Scalar fe = lik.LogLikelihoodAtLog(e);
  int iterations = 0;
  while (b - a > Scalar(opt.tolerance) && iterations < opt.max_iterations) {
    ++iterations;
    if (fc >= fe) {
      b = e;
      e = c;
      fe = fc;
      c = b - inv_phi * (b - a);
      fc = lik.LogLikelihoodAtLog(c);
    } else {
      a = c;
      c = e;
      fc = fe;
      e = a + inv_phi * (b - a);
      fe = lik.LogLikelihoodAtLog(e);
    }
  }
  const bool converged = b - a <= Scalar(opt.tolerance);

  Scalar theta = fc >= fe ? c : e;
  Scalar f_theta = std::max(fc, fe);
  const Scalar mid = (a + b) / Scalar(2);
  const Scalar f_mid = lik.LogLikelihoodAtLog(mid);
  if (f_mid > f_theta) {
    theta = mid;
    f_theta = f_mid;
  }
  // Polish: bisect on the sign of the derivative so the optimum does not
  // depend on the evaluation path or on the golden-section trajectory.
  if (theta > lo && theta < hi) {
    auto slope = [&](Scalar t) { return lik.DerivativeAtLog(t); };
    // Near the top the likelihood is flat to rounding, so the golden-section
    // point can sit well outside its nominal tolerance; widen until the
    // derivative changes sign.
    Scalar left = theta, right = theta;
    bool bracketed = false;
    for (Scalar w : {Scalar(1e-6), Scalar(1e-4), Scalar(1e-2), Scalar(1)}) {
      left = std::max(lo, theta - w);
      right = std::min(hi, theta + w);
      if (slope(left) > Scalar(0) && slope(right) < Scalar(0)) {
        bracketed = true;
        break;
      }
    }
    if (bracketed) {
      for (int k = 0; k < 200; ++k) {
        const Scalar m = left + (right - left) / Scalar(2);
        if (m <= left || m >= right) break;
        const Scalar dm = slope(m);
        if (!std::isfinite(static_cast<double>(dm))) break;
        (dm > Scalar(0) ? left : right) = m;
      }
      const Scalar root = left + (right - left) / Scalar(2);
      const Scalar f_root = lik.LogLikelihoodAtLog(root);
      using std::abs;
      if (f_root >= f_theta - Scalar(1e-12) * (Scalar(1) + abs(f_theta))) {
        theta = root;
        f_theta = f_root;
      }
    }
  }
  // The endpoints were scanned; never return something worse than either.
  if (values[0] >= f_theta) {
    theta = lo;
    f_theta = values[0];
  }
  if (values[steps] > f_theta) {
    theta = hi;
    f_theta = values[steps];
  }

  Boundary boundary = Boundary::kNone;
  using std::exp;
  Scalar lambda = exp(theta);
  GlsEvaluation<Scalar> ev;
  if (theta <= lo + Scalar(opt.tolerance)) {
    boundary = Boundary::kLower;
    GlsEvaluation<Scalar> at_zero = lik.Evaluate(Scalar(0));
    if (at_zero.log_likelihood >= f_theta) {
      lambda = Scalar(0);
      ev = std::move(at_zero);
    }
  } else if (theta >= hi - Scalar(opt.tolerance)) {
    boundary = Boundary::kUpper;
  }
  if (ev.beta.size() == 0) ev = lik.Evaluate(lambda);

  MixedFit<Scalar> fit = detail::Assemble(lik, ev, lambda, opt.method);
  fit.boundary = boundary;
  fit.iterations = iterations;
  fit.converged = converged || boundary != Boundary::kNone;
  fit.column_names = d.column_names;
  return fit;
}

}  // namespace stereoleak::mixedfx

#endif  // STEREOLEAK_MIXEDFX_LMM_HPP_
