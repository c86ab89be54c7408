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

#include "rdp/classic_rd.h"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "kernel_math.h"
#include "rdp/errors.h"

namespace rdp {

namespace {

void RequirePositive(double distortion) {
  if (!(distortion > 0.0)) {
    std::ostringstream msg;
    msg << "distortion must be positive, got " << distortion;
    throw NonPositiveDistortion(msg.str());
  }
}

}  // namespace

WaterLevel ComputeWaterLevel(const SourceSpectrum& s, double distortion) {
  RequirePositive(distortion);
  const auto lambdas = s.lambdas();  // descending
  const double total = s.TotalVariance();
  WaterLevel out;
  if (distortion >= total) {
    out.nu = s.MaxLambda();
  } else {
    // With the k largest components active and the rest saturated at
    // gamma = lambda, nu_k = (D - tail_k) / k where tail_k sums the saturated
    // variances. Scanning k downward, the first nu_k <= lambda_k is the root.
    double tail = 0.0;
    out.nu = lambdas.front();
    for (std::size_t k = lambdas.size(); k >= 1; --k) {
      const double nu = (distortion - tail) / static_cast<double>(k);
      if (nu <= lambdas[k - 1]) {
        out.nu = nu;
        break;
      }
      tail += lambdas[k - 1];
    }
  }
  out.per_component.reserve(lambdas.size());
  for (double lambda : lambdas) {
    out.per_component.push_back(std::min(out.nu, lambda));
  }
  return out;
}

RdpSolution ReverseWaterfill(const SourceSpectrum& s, double distortion) {
  const WaterLevel level = ComputeWaterLevel(s, distortion);
  RdpSolution sol;
  sol.metric = PerceptionMetric::kUnconstrained;
  sol.case_tag = distortion >= s.TotalVariance()
                     ? ActiveCase::kDistortionInactive
                     : ActiveCase::kDistortionOnly;
  sol.dual = {0.5 / level.nu, 0.0};
  double achieved = 0.0;
  for (std::size_t i = 0; i < s.dim(); ++i) {
    const double lambda = s.lambda(i);
    const double gamma = level.per_component[i];
    ComponentAllocation a;
    a.gamma = gamma;
    a.lambda_hat = lambda - gamma;
    a.rate = gamma < lambda ? internal::RateFromFractions(
                                  gamma / lambda, (lambda - gamma) / lambda)
                            : 0.0;
    sol.total_rate += a.rate;
    achieved += gamma;
    sol.allocations.push_back(a);
  }
  sol.achieved_distortion = achieved;
  sol.achieved_perception = 0.0;
  return sol;
}

AsymptoticEstimate HighDistortionRdEstimate(const SourceSpectrum& s,
                                            double eps) {
  const double lmax = s.MaxLambda();
  const auto count = static_cast<double>(
      std::count(s.lambdas().begin(), s.lambdas().end(), lmax));
  AsymptoticEstimate out;
  out.rate_estimate = eps / (2.0 * lmax);
  for (double lambda : s.lambdas()) {
    out.water_levels.push_back(lambda == lmax ? lmax - eps / count : lambda);
  }
  return out;
}

AsymptoticEstimate LowDistortionRdEstimate(const SourceSpectrum& s,
                                           double eps) {
  const auto n = static_cast<double>(s.dim());
  AsymptoticEstimate out;
  for (double lambda : s.lambdas()) {
    out.rate_estimate += 0.5 * std::log(n * lambda / eps);
    out.water_levels.push_back(eps / n);
  }
  return out;
}

}  // namespace rdp
