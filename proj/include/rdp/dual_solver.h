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

// Rate-distortion-perception function of a Gaussian vector source.

#ifndef RDP_DUAL_SOLVER_H_
#define RDP_DUAL_SOLVER_H_

#include "rdp/classic_rd.h"
#include "rdp/model.h"

namespace rdp {

struct SolverConfig {
  double distortion_tol = 1e-9;  // relative to sum lambda
  double perception_tol = 1e-9;
  int max_dual_iterations = 500;
  double dual_step_init = 1.0;  // initial log-step when bracketing a multiplier

  // Throws DomainError unless every tolerance and step is positive.
  void Validate() const;
};

// Evaluates R(D, P). Cases are tried in the order
//   kDistortionInactive: the zero-rate set reaches distortion D,
//   kDistortionOnly:     the reverse water-filling solution meets P,
//   kBothActive:         both constraints bind; (nu1, nu2) solved for.
// P = 0 takes the perfect-perception path and reports nu2 = +inf.
// Throws NonPositiveDistortion / InfeasibleQuery / DomainError for invalid
// queries and ConvergenceFailure if the multiplier search misses either
// constraint by more than its tolerance.
RdpSolution Solve(const SourceSpectrum& s, const TradeoffQuery& q,
                  const SolverConfig& cfg = {});

// R(D, 0) with lambda_hat = lambda. Throws OutOfRange unless
// 0 < D < 2 sum lambda.
RdpSolution SolvePerfectPerception(const SourceSpectrum& s, double distortion,
                                   const SolverConfig& cfg = {});

// R(2 sum lambda - eps, 0) ~ eps^2 / (8 sum lambda^2).
AsymptoticEstimate HighDistortionP0Estimate(const SourceSpectrum& s,
                                            double eps);

// R(eps, 0) ~ 0.5 sum log(L lambda / eps) + eps / (8 L) sum 1 / lambda.
AsymptoticEstimate LowDistortionP0Estimate(const SourceSpectrum& s,
                                           double eps);

// Stationarity residuals of the Lagrangian at `sol`, each divided by the
// magnitude of its largest term. Components on the boundary gamma = lambda
// report zero stationarity and carry the multiplier in xi / eta.
KktResiduals ComputeKktResiduals(const SourceSpectrum& s,
                                 const TradeoffQuery& q,
                                 const RdpSolution& sol);

}  // namespace rdp

#endif  // RDP_DUAL_SOLVER_H_
