// include/stereoleak/mixedfx/design.hpp

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

#ifndef STEREOLEAK_MIXEDFX_DESIGN_HPP_
#define STEREOLEAK_MIXEDFX_DESIGN_HPP_

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <string>
#include <vector>

#include "stereoleak/error.hpp"

namespace stereoleak::mixedfx {

template <typename Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
template <typename Scalar>
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

/// Provenance of one design row.
struct RowMeta {
  std::string group;
  std::string pair;
};

/// Response, fixed-effect design (leading intercept column included) and the
/// random-intercept factor of a linear mixed model.
template <typename Scalar>
struct DesignMatrix {
  Vector<Scalar> y;
  Matrix<Scalar> X;
  std::vector<std::string> groups;        // grouping label per row
  std::vector<std::string> column_names;  // one per column of X
  std::vector<RowMeta> row_meta;          // optional, one per row when present

  Eigen::Index rows() const { return X.rows(); }
  Eigen::Index cols() const { return X.cols(); }
};

/// Dense group numbering, ordered by label so it does not depend on row order.
struct GroupIndex {
  std::vector<int> of_row;
  std::vector<std::string> labels;
  std::vector<int> sizes;
};

inline GroupIndex IndexGroups(const std::vector<std::string> &groups) {
  GroupIndex idx;
  std::map<std::string, int> number;
  for (const auto &g : groups) number.emplace(g, 0);
  for (auto &[label, n] : number) {
    n = static_cast<int>(idx.labels.size());
    idx.labels.push_back(label);
  }
  idx.sizes.assign(idx.labels.size(), 0);
  idx.of_row.reserve(groups.size());
  for (const auto &g : groups) {
    int k = number[g];
    idx.of_row.push_back(k);
    ++idx.sizes[k];
  }
  return idx;
}

/// Indices of the columns taking part in a linear dependency: every column
/// the column-pivoted QR (relative threshold `tol`) leaves out of the basis,
/// plus the basis columns that combine into it. Empty iff X has full column
/// rank.
template <typename Scalar>
std::vector<Eigen::Index> CollinearColumns(const Matrix<Scalar> &X, double tol = 1e-10) {
  Eigen::ColPivHouseholderQR<Matrix<Scalar>> qr(X);
  qr.setThreshold(static_cast<Scalar>(tol));
  const Eigen::Index rank = qr.rank();
  std::vector<Eigen::Index> out;
  if (rank == X.cols()) return out;
  const auto &perm = qr.colsPermutation().indices();
  Matrix<Scalar> basis(X.rows(), rank);
  for (Eigen::Index k = 0; k < rank; ++k) basis.col(k) = X.col(perm(k));
  for (Eigen::Index k = rank; k < X.cols(); ++k) {
    out.push_back(perm(k));
    if (rank == 0) continue;
    const Vector<Scalar> c = basis.colPivHouseholderQr().solve(X.col(perm(k)));
    const Scalar scale = c.cwiseAbs().maxCoeff();
    for (Eigen::Index b = 0; b < rank; ++b) {
      if (std::abs(c(b)) > Scalar(1e-8) * scale) out.push_back(perm(b));
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

template <typename Scalar>
std::string ColumnName(const DesignMatrix<Scalar> &d, Eigen::Index j) {
  if (j < static_cast<Eigen::Index>(d.column_names.size())) return d.column_names[j];
  return "column " + std::to_string(j);
}

/// Throws unless n >= p + 2, the shapes agree, every value is finite and X
/// has full column rank.
template <typename Scalar>
void ValidateDesign(const DesignMatrix<Scalar> &d) {
  const Eigen::Index n = d.rows();
  const Eigen::Index p = d.cols();
  if (d.y.size() != n) {
    throw Error(ErrorKind::kUsage, "design: y has " + std::to_string(d.y.size()) +
                                       " rows but X has " + std::to_string(n));
  }
  if (static_cast<Eigen::Index>(d.groups.size()) != n) {
    throw Error(ErrorKind::kUsage, "design: group labels do not match the number of rows");
  }
  if (!d.row_meta.empty() && static_cast<Eigen::Index>(d.row_meta.size()) != n) {
    throw Error(ErrorKind::kUsage, "design: row metadata does not match the number of rows");
  }
  if (!d.column_names.empty() && static_cast<Eigen::Index>(d.column_names.size()) != p) {
    throw Error(ErrorKind::kUsage, "design: column names do not match the number of columns");
  }
  if (p < 1 || n < p + 2) {
    throw Error(ErrorKind::kNumeric, "design: need n >= p + 2 (n = " + std::to_string(n) +
                                         ", p = " + std::to_string(p) + ")");
  }
  if (!d.X.allFinite() || !d.y.allFinite()) {
    throw Error(ErrorKind::kNumeric, "design: non-finite values in X or y");
  }
  auto bad = CollinearColumns<Scalar>(d.X);
  if (!bad.empty()) {
    std::string names;
    for (auto j : bad) names += (names.empty() ? "" : ", ") + ColumnName(d, j);
    throw Error(ErrorKind::kNumeric, "design: X is rank deficient; collinear columns: " + names);
  }
}

}  // namespace stereoleak::mixedfx

#endif  // STEREOLEAK_MIXEDFX_DESIGN_HPP_
