// include/stereoleak/mixedfx/simulate.hpp

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

#ifndef STEREOLEAK_MIXEDFX_SIMULATE_HPP_
#define STEREOLEAK_MIXEDFX_SIMULATE_HPP_

#include <cmath>
#include <cstdint>
#include <random>
#include <string>

#include "stereoleak/mixedfx/lmm.hpp"

namespace stereoleak::mixedfx {

// Synthetic data drawn from the random-intercept model itself; used by the
// Monte-Carlo checks and the `simulate` subcommand. Every draw takes an
// explicit seed.

struct SimulationSpec {
  int n_groups = 30;
  int rows_per_group = 16;
  Vector<double> beta;  // intercept first
  double sigma_u2 = 1.0;
  double sigma_e2 = 1.0;
  /// Equicorrelation among the non-intercept predictors.
  double predictor_correlation = 0.0;
};

inline std::mt19937_64 SeededEngine(std::uint64_t seed, std::uint64_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)};
  return std::mt19937_64(seq);
}

inline DesignMatrix<double> SimulateDesign(const SimulationSpec &spec, std::mt19937_64 &rng) {
  const Eigen::Index p = spec.beta.size();
  if (p < 1) throw Error(ErrorKind::kUsage, "simulate: beta must include the intercept");
  if (spec.predictor_correlation < 0.0 || spec.predictor_correlation >= 1.0) {
    throw Error(ErrorKind::kUsage, "simulate: predictor correlation must lie in [0, 1)");
  }
  const Eigen::Index n = Eigen::Index(spec.n_groups) * spec.rows_per_group;
  std::normal_distribution<double> normal(0.0, 1.0);
  const double shared = std::sqrt(spec.predictor_correlation);
  const double own = std::sqrt(1.0 - spec.predictor_correlation);

  DesignMatrix<double> d;
  d.X.resize(n, p);
  d.y.resize(n);
  d.groups.resize(n);
  d.column_names.push_back("(intercept)");
  for (Eigen::Index j = 1; j < p; ++j) d.column_names.push_back("x" + std::to_string(j));
  Eigen::Index row = 0;
  for (int g = 0; g < spec.n_groups; ++g) {
    const double u = std::sqrt(spec.sigma_u2) * normal(rng);
    std::string label = "g" + std::to_string(g);
    for (int k = 0; k < spec.rows_per_group; ++k, ++row) {
      d.X(row, 0) = 1.0;
      const double common = normal(rng);
      for (Eigen::Index j = 1; j < p; ++j) d.X(row, j) = shared * common + own * normal(rng);
      d.y(row) = d.X.row(row).dot(spec.beta) + u + std::sqrt(spec.sigma_e2) * normal(rng);
      d.groups[row] = label;
      d.row_meta.push_back({label, "r" + std::to_string(k)});
    }
  }
  return d;
}

struct MonteCarloReport {
  int reps = 0;
  Vector<double> planted;
  Vector<double> mean_beta;
  Vector<double> coverage;     // share of 95% Wald intervals holding the planted value
  Vector<double> reject_rate;  // share with p < alpha
  Vector<double> flag_rate;    // share with beta > 0 and p < alpha
  int lower_boundary_fits = 0;
  int nonconverged = 0;
};

/// Repeats simulate-then-fit `reps` times; rep r draws from stream r of
/// `seed`.
inline MonteCarloReport RunMonteCarlo(const SimulationSpec &spec, std::uint64_t seed, int reps,
                                      const LmmOptions &options = {}, double alpha = 0.05) {
  if (reps < 1) throw Error(ErrorKind::kUsage, "simulate: reps must be >= 1");
  const Eigen::Index p = spec.beta.size();
  constexpr double kZ975 = 1.959963984540054;
  MonteCarloReport rep;
  rep.reps = reps;
  rep.planted = spec.beta;
  rep.mean_beta = Vector<double>::Zero(p);
  rep.coverage = Vector<double>::Zero(p);
  rep.reject_rate = Vector<double>::Zero(p);
  rep.flag_rate = Vector<double>::Zero(p);
  for (int r = 0; r < reps; ++r) {
    auto rng = SeededEngine(seed, static_cast<std::uint64_t>(r));
    const MixedFit<double> fit = FitLmm(SimulateDesign(spec, rng), options);
    rep.mean_beta += fit.beta;
    for (Eigen::Index j = 0; j < p; ++j) {
      if (std::abs(fit.beta(j) - spec.beta(j)) <= kZ975 * fit.se(j)) rep.coverage(j) += 1.0;
      if (fit.p_values(j) < alpha) rep.reject_rate(j) += 1.0;
      if (SignificantPositive(fit.beta(j), fit.p_values(j), alpha)) rep.flag_rate(j) += 1.0;
    }
    if (fit.boundary == Boundary::kLower) ++rep.lower_boundary_fits;
    if (!fit.converged) ++rep.nonconverged;
  }
  rep.mean_beta /= reps;
  rep.coverage /= reps;
  rep.reject_rate /= reps;
  rep.flag_rate /= reps;
  return rep;
}

}  // namespace stereoleak::mixedfx

#endif  // STEREOLEAK_MIXEDFX_SIMULATE_HPP_
