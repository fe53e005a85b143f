// include/stereoleak/mixedfx/ols.hpp

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

#ifndef STEREOLEAK_MIXEDFX_OLS_HPP_
#define STEREOLEAK_MIXEDFX_OLS_HPP_

#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "stereoleak/mixedfx/design.hpp"
#include "stereoleak/mixedfx/wald.hpp"

namespace stereoleak::mixedfx {

enum class Method { kReml, kMl, kOls };

inline const char *MethodName(Method m) {
  switch (m) {
    case Method::kReml: return "REML";
    case Method::kMl: return "ML";
    case Method::kOls: return "OLS";
  }
  return "?";
}

inline Method ParseMethod(const std::string &s) {
  if (s == "REML" || s == "reml") return Method::kReml;
  if (s == "ML" || s == "ml") return Method::kMl;
  if (s == "OLS" || s == "ols") return Method::kOls;
  throw Error(ErrorKind::kUsage, "unknown fit method '" + s + "'");
}

enum class Boundary { kNone, kLower, kUpper };

inline const char *BoundaryName(Boundary b) {
  switch (b) {
    case Boundary::kNone: return "none";
    case Boundary::kLower: return "lower";
    case Boundary::kUpper: return "upper";
  }
  return "?";
}

template <typename Scalar>
struct MixedFit {
  Vector<Scalar> beta;
  Vector<Scalar> se;
  Vector<Scalar> p_values;
  Matrix<Scalar> covariance;  // of beta
  Scalar sigma_u2 = 0;
  Scalar sigma_e2 = 0;
  Scalar log_likelihood = 0;
  Method method = Method::kReml;
  bool converged = false;
  Eigen::Index n = 0;
  Eigen::Index p = 0;
  int n_groups = 0;

  // Variance-ratio search metadata.
  Scalar lambda = 0;      // sigma_u2 / sigma_e2
  Scalar log_lambda = 0;  // -inf when the lower boundary collapsed to lambda = 0
  Boundary boundary = Boundary::kNone;
  int iterations = 0;
  std::vector<std::string> column_names;
};

/// Ordinary least squares via column-pivoted QR.
template <typename Scalar>
MixedFit<Scalar> FitOls(const DesignMatrix<Scalar> &d) {
  ValidateDesign(d);
  const Eigen::Index n = d.rows();
  const Eigen::Index p = d.cols();
  Eigen::ColPivHouseholderQR<Matrix<Scalar>> qr(d.X);
  MixedFit<Scalar> fit;
  fit.method = Method::kOls;
  fit.n = n;
  fit.p = p;
  fit.n_groups = static_cast<int>(IndexGroups(d.groups).labels.size());
  fit.column_names = d.column_names;
  fit.beta = qr.solve(d.y);
  const Vector<Scalar> r = d.y - d.X * fit.beta;
  const Scalar rss = r.squaredNorm();
  fit.sigma_e2 = rss / Scalar(n - p);
  const Matrix<Scalar> xtx = d.X.transpose() * d.X;
  fit.covariance = xtx.ldlt().solve(Matrix<Scalar>::Identity(p, p)) * fit.sigma_e2;
  fit.se = fit.covariance.diagonal().cwiseSqrt();
  fit.p_values.resize(p);
  for (Eigen::Index j = 0; j < p; ++j) {
    fit.p_values(j) = fit.se(j) > Scalar(0) ? WaldPValue(fit.beta(j), fit.se(j)) : Scalar(0);
  }
  using std::log;
  const Scalar two_pi = Scalar(2) * std::numbers::pi_v<Scalar>;
  const Scalar s2_ml = rss / Scalar(n);
  fit.log_likelihood = s2_ml > Scalar(0)
                           ? Scalar(-0.5) * Scalar(n) * (log(two_pi) + log(s2_ml) + Scalar(1))
                           : std::numeric_limits<Scalar>::infinity();
  fit.converged = true;
  return fit;
}

}  // namespace stereoleak::mixedfx

#endif  // STEREOLEAK_MIXEDFX_OLS_HPP_
