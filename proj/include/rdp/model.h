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

// Domain types shared by the solvers: the decorrelated source spectrum, the
// (D, P, metric) query, and the solution record.
//
// Units: variances and distortions are in the source's squared units; rates
// are in nats throughout the library and only converted at output time.

#ifndef RDP_MODEL_H_
#define RDP_MODEL_H_

#include <cstddef>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "rdp/symmetric_eigen.h"

namespace rdp {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

enum class PerceptionMetric { kKL, kW2, kUnconstrained };

// "kl", "w2", "none".
std::string_view MetricName(PerceptionMetric metric);
// Throws DomainError on an unknown name.
PerceptionMetric ParseMetric(std::string_view name);

// Eigenvalues of the source covariance, strictly positive and sorted in
// descending order, plus the eigenbasis when the source came from a matrix.
class SourceSpectrum {
 public:
  // Throws DomainError for an empty list or a non-positive / non-finite
  // entry. Values are sorted descending.
  static SourceSpectrum FromEigenvalues(std::vector<double> lambdas);

  // Decomposes `m` and strips null components. `null_tol` is absolute; when
  // absent it defaults to 1e-12 * (largest |eigenvalue|). Propagates
  // NotSymmetric, NotPSD, AllComponentsNull, DimensionZero.
  static SourceSpectrum FromCovariance(const SymMatrix& m,
                                       std::optional<double> null_tol = {});

  std::size_t dim() const { return lambdas_.size(); }
  std::span<const double> lambdas() const { return lambdas_; }
  double lambda(std::size_t i) const { return lambdas_[i]; }
  const std::optional<DenseMatrix>& basis() const { return basis_; }

  double TotalVariance() const;
  double MaxLambda() const { return lambdas_.front(); }
  double MinLambda() const { return lambdas_.back(); }

 private:
  SourceSpectrum() = default;

  std::vector<double> lambdas_;
  std::optional<DenseMatrix> basis_;
};

struct TradeoffQuery {
  double distortion = 0.0;   // D, total squared error across components
  double perception = kInfinity;  // P; +inf iff metric is kUnconstrained
  PerceptionMetric metric = PerceptionMetric::kUnconstrained;

  friend bool operator==(const TradeoffQuery&, const TradeoffQuery&) = default;
};

// Checks the query invariants. Throws NonPositiveDistortion for D <= 0,
// InfeasibleQuery for P < 0, DomainError for NaN values or a metric/budget
// mismatch (Unconstrained must come with P = +inf and vice versa).
void ValidateQuery(const TradeoffQuery& q);

struct ComponentAllocation {
  double gamma = 0.0;       // water level, MMSE of Z given Z-hat; in (0, lambda]
  double lambda_hat = 0.0;  // reconstruction variance
  double rate = 0.0;        // nats, 0.5 * log(lambda / gamma)

  friend bool operator==(const ComponentAllocation&,
                         const ComponentAllocation&) = default;
};

// Multipliers of the distortion and perception constraints. nu2 is +inf for
// perfect-perception solutions, where the perception budget pins lambda_hat.
struct DualPoint {
  double nu1 = 0.0;
  double nu2 = 0.0;

  friend bool operator==(const DualPoint&, const DualPoint&) = default;
};

enum class ActiveCase { kBothActive, kDistortionOnly, kDistortionInactive };

// "both_active", "distortion_only", "distortion_inactive".
std::string_view CaseName(ActiveCase c);
// Throws DomainError on an unknown name.
ActiveCase ParseCase(std::string_view name);

struct RdpSolution {
  PerceptionMetric metric = PerceptionMetric::kUnconstrained;
  double total_rate = 0.0;
  std::vector<ComponentAllocation> allocations;
  DualPoint dual;
  ActiveCase case_tag = ActiveCase::kDistortionOnly;
  double kkt_residual = 0.0;
  double achieved_distortion = 0.0;
  double achieved_perception = 0.0;

  friend bool operator==(const RdpSolution&, const RdpSolution&) = default;
};

// Per-component stationarity residuals of the Lagrangian in gamma and
// lambda_hat, with the box multipliers xi (gamma <= lambda) and
// eta (lambda_hat >= 0) that close them.
struct KktResiduals {
  std::vector<double> stationarity_gamma;
  std::vector<double> stationarity_lambda_hat;
  std::vector<double> xi;
  std::vector<double> eta;
  double complementarity = 0.0;

  double MaxStationarity() const;
};

// Smallest total distortion reachable at zero rate (gamma = lambda, Z-hat
// independent of Z) under the perception budget: min over lambda_hat >= 0 of
// sum(lambda + lambda_hat) subject to sum P(lambda_hat) <= P.
double MaxZeroRateDistortion(const SourceSpectrum& s, PerceptionMetric metric,
                             double perception);

// The minimizing lambda_hat vector of MaxZeroRateDistortion.
std::vector<double> ZeroRateReconstruction(const SourceSpectrum& s,
                                           PerceptionMetric metric,
                                           double perception);

}  // namespace rdp

#endif  // RDP_MODEL_H_
