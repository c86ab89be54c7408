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

// Reverse water-filling for the rate-distortion function of a Gaussian
// vector source, with the small- and large-distortion asymptotic laws.

#ifndef RDP_CLASSIC_RD_H_
#define RDP_CLASSIC_RD_H_

#include <vector>

#include "rdp/model.h"

namespace rdp {

struct WaterLevel {
  double nu = 0.0;
  std::vector<double> per_component;  // min(nu, lambda_l)
};

// Solves sum_l [lambda_l - nu]^+ = [sum_l lambda_l - D]^+ by scanning the
// sorted breakpoints. For D >= sum lambda, nu = max lambda.
// Throws NonPositiveDistortion for D <= 0.
WaterLevel ComputeWaterLevel(const SourceSpectrum& s, double distortion);

// Rate-distortion solution with lambda_hat = lambda - gamma. The case tag is
// kDistortionInactive when D >= sum lambda (all rates zero), otherwise
// kDistortionOnly. dual.nu1 = 1 / (2 nu), dual.nu2 = 0.
RdpSolution ReverseWaterfill(const SourceSpectrum& s, double distortion);

struct AsymptoticEstimate {
  double rate_estimate = 0.0;
  std::vector<double> water_levels;
};

// Rate near D = sum lambda - eps: eps / (2 lambda_max), with eps split
// evenly over the components attaining lambda_max.
AsymptoticEstimate HighDistortionRdEstimate(const SourceSpectrum& s,
                                            double eps);

// Rate at D = eps below saturation: 0.5 sum log(L lambda_l / eps). Exact
// whenever eps / L <= min lambda.
AsymptoticEstimate LowDistortionRdEstimate(const SourceSpectrum& s,
                                           double eps);

}  // namespace rdp

#endif  // RDP_CLASSIC_RD_H_
