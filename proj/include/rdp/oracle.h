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

// Direct minimization of the primal rate-distortion-perception program by a
// log-barrier interior-point method. Shares no code with the dual solver
// beyond the per-component loss formulas.

#ifndef RDP_ORACLE_H_
#define RDP_ORACLE_H_

#include <optional>
#include <vector>

#include "rdp/model.h"

namespace rdp {

struct PrimalPoint {
  std::vector<double> gammas;       // each in (0, lambda_l)
  std::vector<double> lambda_hats;  // each > 0
};

struct OracleResult {
  double rate = 0.0;  // nats
  PrimalPoint point;
  double barrier_mu_final = 0.0;
  double gradient_norm_final = 0.0;  // of the last barrier subproblem
  double duality_gap = 0.0;          // m * mu, bounds rate - optimum
  int newton_steps = 0;
};

struct OracleOptions {
  double mu_initial = 1.0;
  double mu_final = 1e-8;
  double mu_factor = 0.1;
  int max_newton_steps = 200;  // per barrier stage
};

// Minimizes 0.5 sum log(lambda / gamma) subject to sum D_l <= D,
// sum P_l <= P and the box constraints. Requires P > 0 for kKL / kW2 (use
// MinimizePrimalP0 for P = 0). Throws InfeasibleSeed when neither
// `seed_point` nor the default probe sequence is strictly feasible, and
// LineSearchFailure / ConvergenceFailure when a Newton stage stalls.
OracleResult MinimizePrimal(const SourceSpectrum& s, const TradeoffQuery& q,
                            const std::optional<PrimalPoint>& seed_point = {},
                            const OracleOptions& opt = {});

// P = 0 program: lambda_hat = lambda fixed, minimization over gamma only.
// Throws OutOfRange unless 0 < D < 2 sum lambda.
OracleResult MinimizePrimalP0(const SourceSpectrum& s, double distortion,
                              const OracleOptions& opt = {});

// Largest relative discrepancy, |fd - analytic| / max(|analytic|, 1), between
// central differences and the analytic partials of the rate, the total
// distortion and (for kKL / kW2) the total perception, over all 2L
// coordinates. Throws DomainError unless `point` is strictly interior.
double CheckGradients(const SourceSpectrum& s, const TradeoffQuery& q,
                      const PrimalPoint& point);

}  // namespace rdp

#endif  // RDP_ORACLE_H_
