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

// Per-component loss kernels and the closed-form stationary maps of the
// Lagrangian for fixed multipliers (nu1, nu2).
//
// For one decorrelated component with variance lambda, the reconstruction is
// parametrized by the water level gamma in (0, lambda] (MMSE of Z given
// Z-hat) and the reconstruction variance lambda_hat >= 0:
//
//   distortion  D(gamma, lambda_hat) = lambda - 2 sqrt(lambda_hat (lambda - gamma)) + lambda_hat
//   KL          P(lambda_hat)        = (lambda_hat / lambda - 1 + log(lambda / lambda_hat)) / 2
//   W2          P(lambda_hat)        = (sqrt(lambda) - sqrt(lambda_hat))^2
//   rate                             = log(lambda / gamma) / 2
//
// Near zero rate lambda - gamma is tiny and near high rate gamma is tiny, so
// the stationary maps solve for both gamma / lambda and (lambda - gamma) /
// lambda and return them separately.

#ifndef RDP_RDP_CORE_H_
#define RDP_RDP_CORE_H_

#include <optional>

#include "rdp/model.h"

namespace rdp {

class ComponentKernel {
 public:
  // Throws DomainError unless lambda is positive and finite.
  explicit ComponentKernel(double lambda);
  double lambda() const { return lambda_; }

 private:
  double lambda_;
};

// Throws DomainError unless 0 < gamma <= lambda and lambda_hat >= 0.
double DistortionComponent(const ComponentKernel& k, double gamma,
                           double lambda_hat);

// +inf for lambda_hat == 0. Throws DomainError for negative lambda_hat.
double PerceptionComponentKl(const ComponentKernel& k, double lambda_hat);
double PerceptionComponentW2(const ComponentKernel& k, double lambda_hat);
// Dispatches on the metric; 0 for kUnconstrained.
double PerceptionComponent(const ComponentKernel& k, PerceptionMetric metric,
                           double lambda_hat);

// Everything the solvers need about one component at a stationary point.
struct StationaryPoint {
  double gamma = 0.0;
  double gap = 0.0;  // lambda - gamma
  double lambda_hat = 0.0;
  double distortion = 0.0;
  double perception = 0.0;
  double rate = 0.0;
};

// Unique root in (0, lambda) of
//   nu1 (1 - 2 nu1 gamma) = nu2 / 2 (4 gamma^2 nu1^2 / (lambda - gamma) - 1 / lambda)
// found by bisection. Throws DualDegenerate unless nu1, nu2 > 0 and finite.
double StationaryGammaKl(const ComponentKernel& k, const DualPoint& dual);

// (lambda - gamma) / (4 gamma^2 nu1^2). Throws DomainError unless
// 0 < gamma < lambda and nu1 > 0.
double StationaryLambdaHatKl(const ComponentKernel& k, double gamma,
                             const DualPoint& dual);

// 2 lambda / (1 + sqrt(1 + 16 lambda lambda_hat nu1^2)); inverse of
// StationaryLambdaHatKl in gamma.
double GammaFromLambdaHat(const ComponentKernel& k, double lambda_hat,
                          double nu1);

// Root of the same stationarity equation from the quadratic formula, written
// as 2C / (-B + sqrt(B^2 - 4AC)) so that it stays finite at nu2 = 1. Used as
// an algebraic cross-check of StationaryGammaKl. Returns nullopt when the
// discriminant is negative or the root falls outside (0, lambda).
std::optional<double> ClosedFormGammaKl(const ComponentKernel& k,
                                        const DualPoint& dual);

// Full KL stationary point for nu1, nu2 > 0.
StationaryPoint KlStationaryPoint(const ComponentKernel& k,
                                  const DualPoint& dual);

struct ThetaFixedPoint {
  double theta = 0.0;
  double residual = 0.0;  // LHS - RHS of the defining equation at theta
};

// Unique root of theta / (1 + (1 - theta) nu1 / nu2) = sqrt(1 - theta / (2 nu1 lambda)).
// Throws DualDegenerate unless nu1, nu2 > 0 and finite.
ThetaFixedPoint ThetaFixedPointW2(const ComponentKernel& k,
                                  const DualPoint& dual);

struct GammaLambdaHat {
  double gamma = 0.0;
  double lambda_hat = 0.0;
};

// gamma = theta / (2 nu1), lambda_hat = lambda / (1 + (1 - theta) nu1 / nu2)^2.
GammaLambdaHat StationaryPairW2(const ComponentKernel& k,
                                const DualPoint& dual);

// Full W2 stationary point for nu1, nu2 > 0.
StationaryPoint W2StationaryPoint(const ComponentKernel& k,
                                  const DualPoint& dual);

// Water level under perfect perception (lambda_hat = lambda):
// 2 lambda / (1 + sqrt(1 + 16 nu1^2 lambda^2)). Throws DualDegenerate unless
// nu1 > 0.
double PerfectPerceptionGamma(const ComponentKernel& k, double nu1);
StationaryPoint PerfectPerceptionPoint(const ComponentKernel& k, double nu1);

}  // namespace rdp

#endif  // RDP_RDP_CORE_H_
