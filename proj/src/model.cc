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

#include "rdp/model.h"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <sstream>

#include "bisection.h"
#include "kernel_math.h"
#include "rdp/errors.h"

namespace rdp {

std::string_view MetricName(PerceptionMetric metric) {
  switch (metric) {
    case PerceptionMetric::kKL:
      return "kl";
    case PerceptionMetric::kW2:
      return "w2";
    case PerceptionMetric::kUnconstrained:
      return "none";
  }
  return "none";
}

PerceptionMetric ParseMetric(std::string_view name) {
  if (name == "kl" || name == "KL") return PerceptionMetric::kKL;
  if (name == "w2" || name == "W2") return PerceptionMetric::kW2;
  if (name == "none" || name == "unconstrained") {
    return PerceptionMetric::kUnconstrained;
  }
  throw DomainError("unknown perception metric '" + std::string(name) +
                    "' (expected kl, w2 or none)");
}

std::string_view CaseName(ActiveCase c) {
  switch (c) {
    case ActiveCase::kBothActive:
      return "both_active";
    case ActiveCase::kDistortionOnly:
      return "distortion_only";
    case ActiveCase::kDistortionInactive:
      return "distortion_inactive";
  }
  return "both_active";
}

ActiveCase ParseCase(std::string_view name) {
  if (name == "both_active") return ActiveCase::kBothActive;
  if (name == "distortion_only") return ActiveCase::kDistortionOnly;
  if (name == "distortion_inactive") return ActiveCase::kDistortionInactive;
  throw DomainError("unknown case tag '" + std::string(name) + "'");
}

SourceSpectrum SourceSpectrum::FromEigenvalues(std::vector<double> lambdas) {
  if (lambdas.empty()) throw DomainError("source spectrum is empty");
  for (std::size_t i = 0; i < lambdas.size(); ++i) {
    if (!(lambdas[i] > 0.0) || !std::isfinite(lambdas[i])) {
      std::ostringstream msg;
      msg << "eigenvalue " << i << " must be positive and finite, got "
          << lambdas[i];
      throw DomainError(msg.str());
    }
  }
  std::stable_sort(lambdas.begin(), lambdas.end(), std::greater<>());
  SourceSpectrum s;
  s.lambdas_ = std::move(lambdas);
  return s;
}

SourceSpectrum SourceSpectrum::FromCovariance(const SymMatrix& m,
                                              std::optional<double> null_tol) {
  const EigenDecomposition e = Decompose(m);
  double tol = 0.0;
  if (null_tol) {
    tol = *null_tol;
  } else {
    for (double v : e.eigenvalues) tol = std::max(tol, std::abs(v));
    tol *= 1e-12;
  }
  EigenDecomposition kept = StripNullComponents(e, tol);
  SourceSpectrum s;
  s.lambdas_ = std::move(kept.eigenvalues);
  s.basis_ = std::move(kept.basis);
  return s;
}

double SourceSpectrum::TotalVariance() const {
  return std::accumulate(lambdas_.begin(), lambdas_.end(), 0.0);
}

void ValidateQuery(const TradeoffQuery& q) {
  if (std::isnan(q.distortion)) throw DomainError("distortion budget is NaN");
  if (std::isnan(q.perception)) throw DomainError("perception budget is NaN");
  if (!(q.distortion > 0.0)) {
    std::ostringstream msg;
    msg << "distortion budget must be positive, got " << q.distortion;
    throw NonPositiveDistortion(msg.str());
  }
  if (!std::isfinite(q.distortion)) {
    throw DomainError("distortion budget must be finite");
  }
  if (q.perception < 0.0) {
    std::ostringstream msg;
    msg << "perception budget must be nonnegative, got " << q.perception;
    throw InfeasibleQuery(msg.str());
  }
  const bool unconstrained = q.metric == PerceptionMetric::kUnconstrained;
  if (unconstrained != std::isinf(q.perception)) {
    throw DomainError(
        unconstrained
            ? "metric 'none' requires an infinite perception budget"
            : "a finite perception budget is required with metric kl or w2");
  }
}

double KktResiduals::MaxStationarity() const {
  double m = 0.0;
  for (double v : stationarity_gamma) m = std::max(m, std::abs(v));
  for (double v : stationarity_lambda_hat) m = std::max(m, std::abs(v));
  return m;
}

namespace {

// Zero-rate reconstruction variances as a function of the scaled multiplier
// s of the perception constraint. Minimizing lambda_hat + P(lambda_hat) / s
// per component gives lambda_hat = lambda / (1 + s lambda) for KL and
// lambda / (1 + s)^2 for W2.
double ZeroRateLambdaHat(PerceptionMetric metric, double lambda, double s) {
  if (metric == PerceptionMetric::kKL) return lambda / (1.0 + s * lambda);
  return lambda / ((1.0 + s) * (1.0 + s));
}

double ZeroRatePerception(PerceptionMetric metric, double lambda, double s) {
  if (metric == PerceptionMetric::kKL) {
    const double sl = s * lambda;
    return internal::KlFromRelative(-sl / (1.0 + sl));
  }
  const double f = s / (1.0 + s);
  return lambda * f * f;
}

}  // namespace

std::vector<double> ZeroRateReconstruction(const SourceSpectrum& s,
                                           PerceptionMetric metric,
                                           double perception) {
  if (std::isnan(perception) || perception < 0.0) {
    throw DomainError("perception budget must be nonnegative");
  }
  const std::size_t n = s.dim();
  if (metric == PerceptionMetric::kUnconstrained || std::isinf(perception)) {
    return std::vector<double>(n, 0.0);
  }
  std::vector<double> out(s.lambdas().begin(), s.lambdas().end());
  if (perception == 0.0) return out;
  if (metric == PerceptionMetric::kW2 && perception >= s.TotalVariance()) {
    return std::vector<double>(n, 0.0);
  }
  auto total = [&](double mult) {
    double sum = 0.0;
    for (double lambda : s.lambdas()) {
      sum += ZeroRatePerception(metric, lambda, mult);
    }
    return sum - perception;
  };
  double hi = 1.0 / s.MaxLambda();
  for (int i = 0; i < 2000 && total(hi) < 0.0; ++i) hi *= 2.0;
  const double mult = internal::Bisect(total, 0.0, hi, "zero-rate multiplier");
  for (std::size_t i = 0; i < n; ++i) {
    out[i] = ZeroRateLambdaHat(metric, s.lambda(i), mult);
  }
  return out;
}

double MaxZeroRateDistortion(const SourceSpectrum& s, PerceptionMetric metric,
                             double perception) {
  const std::vector<double> lh = ZeroRateReconstruction(s, metric, perception);
  return s.TotalVariance() + std::accumulate(lh.begin(), lh.end(), 0.0);
}

}  // namespace rdp
