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

#include <catch_amalgamated.hpp>
#include <cmath>
#include <random>

#include "rdp/errors.h"
#include "rdp/rdp_core.h"
#include "reference.h"

namespace rdp {
namespace {

using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

TEST_CASE("spectrum from covariance") {
  const std::vector<double> d{3, 2, 5, 4, 1};
  SourceSpectrum s = SourceSpectrum::FromCovariance(SymMatrix::Diagonal(d));
  REQUIRE(s.dim() == 5);
  for (std::size_t i = 0; i < 5; ++i) CHECK(s.lambda(i) == 5.0 - i);
  CHECK(s.basis().has_value());
  CHECK(s.TotalVariance() == 15.0);

  const std::vector<double> ones{1, 1};
  s = SourceSpectrum::FromCovariance(SymMatrix::Diagonal(ones));
  CHECK(s.dim() == 2);

  s = SourceSpectrum::FromCovariance(SymMatrix::FromRows({{1, 1}, {1, 1}}));
  REQUIRE(s.dim() == 1);
  CHECK_THAT(s.lambda(0), WithinAbs(2.0, 1e-14));

  CHECK_THROWS_AS(
      SourceSpectrum::FromCovariance(SymMatrix::FromRows({{1, 0}, {0, -1}})),
      NotPSD);
}

TEST_CASE("spectrum from eigenvalues sorts and validates") {
  const SourceSpectrum s = SourceSpectrum::FromEigenvalues({1, 3, 2});
  CHECK(s.MaxLambda() == 3.0);
  CHECK(s.MinLambda() == 1.0);
  CHECK_FALSE(s.basis().has_value());
  CHECK_THROWS_AS(SourceSpectrum::FromEigenvalues({}), DomainError);
  CHECK_THROWS_AS(SourceSpectrum::FromEigenvalues({1, 0}), DomainError);
  CHECK_THROWS_AS(SourceSpectrum::FromEigenvalues({1, INFINITY}), DomainError);
}

TEST_CASE("query validation") {
  using M = PerceptionMetric;
  CHECK_NOTHROW(ValidateQuery({1.0, kInfinity, M::kUnconstrained}));
  CHECK_NOTHROW(ValidateQuery({1.0, 0.0, M::kKL}));
  CHECK_THROWS_AS(ValidateQuery({0.0, 0.1, M::kKL}), NonPositiveDistortion);
  CHECK_THROWS_AS(ValidateQuery({-1.0, 0.1, M::kKL}), InfeasibleQuery);
  CHECK_THROWS_AS(ValidateQuery({1.0, -0.1, M::kW2}), InfeasibleQuery);
  CHECK_THROWS_AS(ValidateQuery({1.0, 0.1, M::kUnconstrained}), DomainError);
  CHECK_THROWS_AS(ValidateQuery({1.0, kInfinity, M::kKL}), DomainError);
  CHECK_THROWS_AS(ValidateQuery({NAN, 0.1, M::kKL}), DomainError);
}

TEST_CASE("names round trip") {
  for (auto m : {PerceptionMetric::kKL, PerceptionMetric::kW2,
                 PerceptionMetric::kUnconstrained}) {
    CHECK(ParseMetric(MetricName(m)) == m);
  }
  for (auto c : {ActiveCase::kBothActive, ActiveCase::kDistortionOnly,
                 ActiveCase::kDistortionInactive}) {
    CHECK(ParseCase(CaseName(c)) == c);
  }
  CHECK_THROWS_AS(ParseMetric("tv"), DomainError);
}

TEST_CASE("zero-rate distortion examples") {
  const SourceSpectrum one = SourceSpectrum::FromEigenvalues({1});
  const SourceSpectrum two = SourceSpectrum::FromEigenvalues({1, 2});
  CHECK(MaxZeroRateDistortion(one, PerceptionMetric::kKL, 0.0) == 2.0);
  for (auto m : {PerceptionMetric::kKL, PerceptionMetric::kW2}) {
    CHECK(MaxZeroRateDistortion(two, m, 0.0) == 6.0);
  }
  CHECK_THAT(MaxZeroRateDistortion(one, PerceptionMetric::kW2, 1.0),
             WithinAbs(1.0, 1e-15));
  CHECK(MaxZeroRateDistortion(two, PerceptionMetric::kUnconstrained,
                              kInfinity) == 3.0);
}

TEST_CASE("W2 zero-rate distortion matches its closed form") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 100; ++trial) {
    const auto lambdas = testing::RandomLambdas(rng, 1 + trial % 5);
    const SourceSpectrum s = SourceSpectrum::FromEigenvalues(lambdas);
    const double total = s.TotalVariance();
    const double p = total * std::uniform_real_distribution<>(0.0, 1.2)(rng);
    CHECK_THAT(MaxZeroRateDistortion(s, PerceptionMetric::kW2, p),
               WithinRel(testing::W2ZeroRateDistortionReference(lambdas, p),
                         1e-12));
  }
}

TEST_CASE("KL zero-rate reconstruction is optimal and meets the budget") {
  std::mt19937_64 rng(12);
  for (int trial = 0; trial < 50; ++trial) {
    const int dim = 1 + trial % 4;
    const SourceSpectrum s =
        SourceSpectrum::FromEigenvalues(testing::RandomLambdas(rng, dim));
    const double p = std::exp(std::uniform_real_distribution<>(-6, 2)(rng));
    const auto hat = ZeroRateReconstruction(s, PerceptionMetric::kKL, p);
    double used = 0.0;
    double sum_hat = 0.0;
    for (int i = 0; i < dim; ++i) {
      used += PerceptionComponentKl(ComponentKernel(s.lambda(i)), hat[i]);
      sum_hat += hat[i];
    }
    CHECK_THAT(used, WithinRel(p, 1e-10));
    // Stationarity of sum lambda_hat + mu P: 1 + mu (1/lambda - 1/hat) / 2
    // must vanish with one common mu.
    std::vector<double> mu;
    for (int i = 0; i < dim; ++i) {
      mu.push_back(2.0 / (1.0 / hat[i] - 1.0 / s.lambda(i)));
    }
    for (double m : mu) CHECK_THAT(m, WithinRel(mu[0], 1e-9));
    // No feasible random perturbation does better.
    std::normal_distribution<double> n(0.0, 0.05);
    for (int k = 0; k < 20; ++k) {
      std::vector<double> alt(hat);
      double alt_p = 0.0;
      double alt_sum = 0.0;
      for (int i = 0; i < dim; ++i) {
        alt[i] *= std::exp(n(rng));
        alt_p += PerceptionComponentKl(ComponentKernel(s.lambda(i)), alt[i]);
        alt_sum += alt[i];
      }
      if (alt_p <= p) CHECK(alt_sum >= sum_hat * (1.0 - 1e-12));
    }
  }
}

TEST_CASE("zero-rate distortion is nonincreasing in P") {
  const SourceSpectrum s = SourceSpectrum::FromEigenvalues({3, 2, 5, 4, 1});
  for (auto m : {PerceptionMetric::kKL, PerceptionMetric::kW2}) {
    double prev = MaxZeroRateDistortion(s, m, 0.0);
    CHECK(prev == 30.0);
    for (double p = 1e-4; p < 100.0; p *= 1.7) {
      const double d = MaxZeroRateDistortion(s, m, p);
      CHECK(d <= prev);
      CHECK(d >= 15.0);
      prev = d;
    }
  }
}

}  // namespace
}  // namespace rdp
