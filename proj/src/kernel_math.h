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

// Cancellation-free forms of the component loss formulas.

#ifndef RDP_SRC_KERNEL_MATH_H_
#define RDP_SRC_KERNEL_MATH_H_

#include <cmath>

namespace rdp::internal {

// (t - log(1 + t)) / 2 with t = lambda_hat / lambda - 1; the KL loss.
inline double KlFromRelative(double t) {
  if (t <= -1.0) return INFINITY;
  if (std::abs(t) < 1e-3) {
    const double t2 = t * t;
    return 0.5 * t2 *
           (0.5 - t / 3.0 + t2 / 4.0 - t2 * t / 5.0 + t2 * t2 / 6.0 -
            t2 * t2 * t / 7.0);
  }
  return 0.5 * (t - std::log1p(t));
}

// (sqrt(lambda) - sqrt(lambda_hat))^2 with t = lambda_hat / lambda - 1.
inline double W2FromRelative(double lambda, double t) {
  const double d = t / (std::sqrt(1.0 + t) + 1.0);
  return lambda * d * d;
}

// lambda - 2 sqrt(lambda_hat (lambda - gamma)) + lambda_hat, regrouped as
// gamma + (sqrt(lambda_hat) - sqrt(lambda - gamma))^2.
inline double DistortionFromGap(double gamma, double gap, double lambda_hat) {
  const double d = std::sqrt(lambda_hat) - std::sqrt(gap);
  return gamma + d * d;
}

// log(lambda / gamma) / 2 from u = gamma / lambda and w = 1 - u.
inline double RateFromFractions(double u, double w) {
  return w < 0.5 ? -0.5 * std::log1p(-w) : -0.5 * std::log(u);
}

}  // namespace rdp::internal

#endif  // RDP_SRC_KERNEL_MATH_H_
