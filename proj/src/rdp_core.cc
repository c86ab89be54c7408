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

#include "rdp/rdp_core.h"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "bisection.h"
#include "kernel_math.h"
#include "rdp/errors.h"

namespace rdp {

namespace {

using internal::Bisect;

void RequirePositiveDuals(const DualPoint& dual, const char* what) {
  if (!(dual.nu1 > 0.0) || !(dual.nu2 > 0.0) || !std::isfinite(dual.nu1) ||
      !std::isfinite(dual.nu2)) {
    std::ostringstream msg;
    msg << what << " needs finite nu1, nu2 > 0 (got " << dual.nu1 << ", "
        << dual.nu2 << ")";
    throw DualDegenerate(msg.str());
  }
}

// Fractions u = gamma / lambda and w = 1 - u, each accurate to full relative
// precision.
struct Fractions {
  double u;
  double w;
};

// Solves f(u, 1 - u) = 0 for f increasing in u on (0, u_max) with a sign
// change there. Bisects on whichever of u and w is below one half at the
// root.
template <class F>
Fractions SolveFraction(F&& f, double u_max, const char* what) {
  if (u_max > 0.5 && f(0.5, 0.5) < 0.0) {
    const double w = Bisect(
        [&](double w) { return -f(1.0 - w, w); }, 1.0 - u_max, 0.5, what);
    return {1.0 - w, w};
  }
  const double hi = std::min(u_max, 0.5);
  const double u =
      Bisect([&](double u) { return f(u, 1.0 - u); }, 0.0, hi, what);
  return {u, 1.0 - u};
}

StationaryPoint Assemble(double lambda, Fractions fr, double lambda_hat,
                         double perception) {
  StationaryPoint p;
  p.gamma = lambda * fr.u;
  p.gap = lambda * fr.w;
  p.lambda_hat = lambda_hat;
  p.distortion = internal::DistortionFromGap(p.gamma, p.gap, lambda_hat);
  p.perception = perception;
  p.rate = internal::RateFromFractions(fr.u, fr.w);
  return p;
}

// u = gamma / lambda at the KL stationary point. With a = 2 nu1 lambda and
// c = nu2 / a the stationarity equation divided by nu1 reads
//   1 - a u - c (a^2 u^2 / w - 1) = 0,
// whose left side decreases in u.
Fractions KlFractions(double lambda, const DualPoint& dual) {
  const double a = 2.0 * dual.nu1 * lambda;
  const double c = dual.nu2 / a;
  auto f = [a, c](double u, double w) {
    return -(1.0 - a * u - c * (a * a * u * u / w - 1.0));
  };
  return SolveFraction(f, 1.0, "KL stationary water level");
}

// The W2 fixed point theta / (1 + eps r) = sqrt(w) with theta = a u = 1 - eps,
// a = 2 nu1 lambda and r = nu1 / nu2. Bisects on whichever of u, w and eps is
// small at the root so all three keep full relative precision.
struct W2Root {
  Fractions fr;
  double eps;  // 1 - theta
};

W2Root W2Fractions(double lambda, const DualPoint& dual) {
  const double a = 2.0 * dual.nu1 * lambda;
  const double one_minus_a = 1.0 - a;
  const double r = dual.nu1 / dual.nu2;
  auto f = [r](double theta, double eps, double w) {
    return theta / (1.0 + eps * r) - std::sqrt(w);
  };
  // Increasing in u, decreasing in w and eps.
  auto by_u = [&](double u) { return f(a * u, 1.0 - a * u, 1.0 - u); };
  auto by_w = [&](double w) {
    return f(a * (1.0 - w), one_minus_a + a * w, w);
  };
  auto by_eps = [&](double eps) {
    return f(1.0 - eps, eps, (eps - one_minus_a) / a);
  };

  const double u_max = std::min(1.0, 1.0 / a);
  const bool u_small = u_max <= 0.5 || by_u(0.5) > 0.0;
  const bool eps_small = one_minus_a < 0.5 && by_eps(0.5) < 0.0;
  const char* what = "W2 theta fixed point";
  if (eps_small && (a >= 1.0 || u_small)) {
    const double eps = Bisect(by_eps, std::max(0.0, one_minus_a), 0.5, what);
    return {{(1.0 - eps) / a, (eps - one_minus_a) / a}, eps};
  }
  if (!u_small) {
    const double w = Bisect([&](double w) { return -by_w(w); },
                            std::max(0.0, 1.0 - 1.0 / a), 0.5, what);
    return {{1.0 - w, w}, one_minus_a + a * w};
  }
  const double u = Bisect(by_u, 0.0, std::min(u_max, 0.5), what);
  return {{u, 1.0 - u}, 1.0 - a * u};
}

}  // namespace

ComponentKernel::ComponentKernel(double lambda) : lambda_(lambda) {
  if (!(lambda > 0.0) || !std::isfinite(lambda)) {
    std::ostringstream msg;
    msg << "component variance must be positive and finite, got " << lambda;
    throw DomainError(msg.str());
  }
}

double DistortionComponent(const ComponentKernel& k, double gamma,
                           double lambda_hat) {
  if (!(gamma > 0.0 && gamma <= k.lambda())) {
    std::ostringstream msg;
    msg << "gamma " << gamma << " outside (0, " << k.lambda() << "]";
    throw DomainError(msg.str());
  }
  if (!(lambda_hat >= 0.0)) throw DomainError("lambda_hat must be >= 0");
  return internal::DistortionFromGap(gamma, k.lambda() - gamma, lambda_hat);
}

double PerceptionComponentKl(const ComponentKernel& k, double lambda_hat) {
  if (!(lambda_hat >= 0.0)) throw DomainError("lambda_hat must be >= 0");
  if (lambda_hat == 0.0) return kInfinity;
  return internal::KlFromRelative((lambda_hat - k.lambda()) / k.lambda());
}

double PerceptionComponentW2(const ComponentKernel& k, double lambda_hat) {
  if (!(lambda_hat >= 0.0)) throw DomainError("lambda_hat must be >= 0");
  const double d = std::sqrt(k.lambda()) - std::sqrt(lambda_hat);
  return d * d;
}

double PerceptionComponent(const ComponentKernel& k, PerceptionMetric metric,
                           double lambda_hat) {
  switch (metric) {
    case PerceptionMetric::kKL:
      return PerceptionComponentKl(k, lambda_hat);
    case PerceptionMetric::kW2:
      return PerceptionComponentW2(k, lambda_hat);
    case PerceptionMetric::kUnconstrained:
      break;
  }
  return 0.0;
}

double StationaryGammaKl(const ComponentKernel& k, const DualPoint& dual) {
  RequirePositiveDuals(dual, "StationaryGammaKl");
  return k.lambda() * KlFractions(k.lambda(), dual).u;
}

double StationaryLambdaHatKl(const ComponentKernel& k, double gamma,
                             const DualPoint& dual) {
  if (!(gamma > 0.0 && gamma < k.lambda())) {
    std::ostringstream msg;
    msg << "gamma " << gamma << " outside (0, " << k.lambda() << ")";
    throw DomainError(msg.str());
  }
  if (!(dual.nu1 > 0.0)) throw DomainError("nu1 must be positive");
  const double s = 2.0 * gamma * dual.nu1;
  return (k.lambda() - gamma) / (s * s);
}

double GammaFromLambdaHat(const ComponentKernel& k, double lambda_hat,
                          double nu1) {
  if (!(lambda_hat > 0.0) || !(nu1 > 0.0)) {
    throw DomainError("GammaFromLambdaHat needs lambda_hat > 0 and nu1 > 0");
  }
  const double lambda = k.lambda();
  return 2.0 * lambda /
         (1.0 + std::sqrt(1.0 + 16.0 * lambda * lambda_hat * nu1 * nu1));
}

std::optional<double> ClosedFormGammaKl(const ComponentKernel& k,
                                        const DualPoint& dual) {
  RequirePositiveDuals(dual, "ClosedFormGammaKl");
  const double lambda = k.lambda();
  const double nu1 = dual.nu1;
  const double nu2 = dual.nu2;
  // A gamma^2 + B gamma + C = 0 after clearing denominators.
  const double a = 4.0 * nu1 * nu1 * lambda * (1.0 - nu2);
  const double b = -2.0 * nu1 * lambda * (1.0 + 2.0 * nu1 * lambda) - nu2;
  const double c = lambda * (2.0 * nu1 * lambda + nu2);
  const double disc = b * b - 4.0 * a * c;
  if (disc < 0.0) return std::nullopt;
  const double gamma = 2.0 * c / (-b + std::sqrt(disc));
  if (!(gamma > 0.0 && gamma < lambda)) return std::nullopt;
  return gamma;
}

StationaryPoint KlStationaryPoint(const ComponentKernel& k,
                                  const DualPoint& dual) {
  RequirePositiveDuals(dual, "KlStationaryPoint");
  const double lambda = k.lambda();
  const Fractions fr = KlFractions(lambda, dual);
  const double au = 2.0 * dual.nu1 * lambda * fr.u;
  const double rel = fr.w / (au * au) - 1.0;  // lambda_hat / lambda - 1
  return Assemble(lambda, fr, lambda * (1.0 + rel),
                  internal::KlFromRelative(rel));
}

ThetaFixedPoint ThetaFixedPointW2(const ComponentKernel& k,
                                  const DualPoint& dual) {
  RequirePositiveDuals(dual, "ThetaFixedPointW2");
  const double lambda = k.lambda();
  const W2Root root = W2Fractions(lambda, dual);
  ThetaFixedPoint out;
  out.theta = 2.0 * dual.nu1 * lambda * root.fr.u;
  out.residual = out.theta / (1.0 + root.eps * dual.nu1 / dual.nu2) -
                 std::sqrt(root.fr.w);
  return out;
}

GammaLambdaHat StationaryPairW2(const ComponentKernel& k,
                                const DualPoint& dual) {
  const StationaryPoint p = W2StationaryPoint(k, dual);
  return {p.gamma, p.lambda_hat};
}

StationaryPoint W2StationaryPoint(const ComponentKernel& k,
                                  const DualPoint& dual) {
  RequirePositiveDuals(dual, "W2StationaryPoint");
  const double lambda = k.lambda();
  const W2Root root = W2Fractions(lambda, dual);
  const Fractions fr = root.fr;
  const double excess = root.eps * dual.nu1 / dual.nu2;  // q - 1
  const double q = 1.0 + excess;
  const double shrink = excess / q;  // 1 - sqrt(lambda_hat / lambda)
  return Assemble(lambda, fr, lambda / (q * q), lambda * shrink * shrink);
}

double PerfectPerceptionGamma(const ComponentKernel& k, double nu1) {
  return PerfectPerceptionPoint(k, nu1).gamma;
}

StationaryPoint PerfectPerceptionPoint(const ComponentKernel& k, double nu1) {
  if (!(nu1 > 0.0) || !std::isfinite(nu1)) {
    throw DualDegenerate("perfect-perception water level needs finite nu1 > 0");
  }
  const double lambda = k.lambda();
  const double a = 2.0 * nu1 * lambda;
  const double x = 4.0 * a * a;  // 16 nu1^2 lambda^2
  const double s = std::sqrt(1.0 + x);
  StationaryPoint p;
  p.gamma = 2.0 * lambda / (1.0 + s);
  p.gap = lambda * x / ((1.0 + s) * (1.0 + s));
  p.lambda_hat = lambda;
  // 2 lambda - 2 sqrt(lambda gap) = 2 gamma / (1 + sqrt(gap / lambda)).
  p.distortion = 2.0 * p.gamma / (1.0 + std::sqrt(p.gap / lambda));
  p.perception = 0.0;
  p.rate = 0.5 * std::log1p(x / (2.0 * (s + 1.0)));
  return p;
}

}  // namespace rdp
