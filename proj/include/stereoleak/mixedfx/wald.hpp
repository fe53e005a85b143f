// include/stereoleak/mixedfx/wald.hpp

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

#ifndef STEREOLEAK_MIXEDFX_WALD_HPP_
#define STEREOLEAK_MIXEDFX_WALD_HPP_

#include <cmath>

#include "stereoleak/error.hpp"

namespace stereoleak::mixedfx {

template <typename Scalar>
Scalar NormalCdf(Scalar z) {
  using std::erfc;
  using std::sqrt;
  return Scalar(0.5) * erfc(-z / sqrt(Scalar(2)));
}

/// Two-sided normal-approximation p-value of beta / se.
template <typename Scalar>
Scalar WaldPValue(Scalar beta, Scalar se) {
  using std::abs;
  using std::erfc;
  using std::sqrt;
  if (!(se > Scalar(0))) throw Error(ErrorKind::kNumeric, "wald_test: standard error must be > 0");
  // erfc(|z|/sqrt 2) == 2 (1 - Phi(|z|)) without the cancellation.
  return erfc(abs(beta / se) / sqrt(Scalar(2)));
}

/// A predictor counts as a significant effect only when it is positive.
template <typename Scalar>
bool SignificantPositive(Scalar coefficient, Scalar p_value, Scalar alpha) {
  return coefficient > Scalar(0) && p_value < alpha;
}

}  // namespace stereoleak::mixedfx

#endif  // STEREOLEAK_MIXEDFX_WALD_HPP_
