// include/stereoleak/mixedfx/correlation.hpp

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

#ifndef STEREOLEAK_MIXEDFX_CORRELATION_HPP_
#define STEREOLEAK_MIXEDFX_CORRELATION_HPP_

#include <Eigen/Core>

#include <algorithm>
#include <cmath>

#include "stereoleak/error.hpp"

namespace stereoleak::mixedfx {

/// Sample Pearson correlation of two equally long vectors, clamped to [-1, 1].
template <typename DerivedX, typename DerivedY>
typename DerivedX::Scalar Pearson(const Eigen::MatrixBase<DerivedX> &x,
                                  const Eigen::MatrixBase<DerivedY> &y) {
  using Scalar = typename DerivedX::Scalar;
  if (x.size() != y.size()) throw Error(ErrorKind::kUsage, "pearson: length mismatch");
  if (x.size() < 2) throw Error(ErrorKind::kUsage, "pearson: need at least 2 observations");
  const auto xc = (x.array() - x.mean()).matrix().eval();
  const auto yc = (y.array() - y.mean()).matrix().eval();
  const Scalar sxx = xc.squaredNorm();
  const Scalar syy = yc.squaredNorm();
  if (!(sxx > Scalar(0)) || !(syy > Scalar(0))) {
    throw Error(ErrorKind::kNumeric, "pearson: zero variance");
  }
  using std::sqrt;
  const Scalar r = xc.dot(yc) / sqrt(sxx * syy);
  return std::clamp(r, Scalar(-1), Scalar(1));
}

}  // namespace stereoleak::mixedfx

#endif  // STEREOLEAK_MIXEDFX_CORRELATION_HPP_
