// Copyright 2026 The gaussrdp Authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Sampling check of the per-component joint Gaussian construction.

#ifndef RDP_MONTECARLO_H_
#define RDP_MONTECARLO_H_

#include <array>
#include <cstdint>
#include <optional>
#include <vector>

#include "rdp/model.h"

namespace rdp {

struct JointGaussianPair {
  double lambda = 0.0;
  double gamma = 0.0;
  double lambda_hat = 0.0;
  // [[lambda, c], [c, lambda_hat]] with c = sqrt(lambda_hat (lambda - gamma)).
  std::array<std::array<double, 2>, 2> cov{};

  double Determinant() const;
};

// Throws DomainError unless 0 < gamma <= lambda and lambda_hat >= 0.
JointGaussianPair BuildPair(double lambda, double gamma, double lambda_hat);

struct SampleReport {
  std::int64_t n_samples = 0;
  std::uint64_t seed = 0;
  double empirical_distortion = 0.0;
  double analytic_distortion = 0.0;
  double standard_error = 0.0;  // of empirical_distortion
  // Gaussian MI from the sample correlation; empty when Z-hat is degenerate.
  std::optional<double> empirical_mi_estimate;
  double empirical_hat_variance = 0.0;
  double hat_variance_standard_error = 0.0;
  bool pass = false;  // distortion within 4 standard errors
};

inline constexpr int kSampleStreams = 16;

// Draws n pairs from 16 counter-based streams keyed by `seed` and merges
// their moments in a fixed order, so the report is bit-identical for a
// given (pair, n, seed). Throws DomainError for n < 1000.
SampleReport SampleAndMeasure(const JointGaussianPair& pair, std::int64_t n,
                              std::uint64_t seed);

struct ComponentStats {
  double mi = 0.0;  // nats
  double kl = 0.0;  // +inf when lambda_hat = 0
  double w2 = 0.0;
};

ComponentStats AnalyticComponentStats(const JointGaussianPair& pair);

struct VerificationReport {
  std::vector<SampleReport> components;
  std::vector<ComponentStats> stats;
  double analytic_distortion = 0.0;
  double analytic_perception = 0.0;
  double empirical_distortion = 0.0;
  double pooled_standard_error = 0.0;
  bool analytic_matches = false;  // both totals within 1e-10 of the solution
  bool empirical_pass = false;    // total within 4 pooled standard errors
};

// Samples every component of `sol` with seeds derived from `seed`.
VerificationReport VerifySolution(const SourceSpectrum& s,
                                  const RdpSolution& sol, std::int64_t n,
                                  std::uint64_t seed);

}  // namespace rdp

#endif  // RDP_MONTECARLO_H_
