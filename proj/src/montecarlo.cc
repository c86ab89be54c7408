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

#include "rdp/montecarlo.h"

#include <cmath>
#include <numbers>
#include <sstream>

#include "kernel_math.h"
#include "rdp/errors.h"

namespace rdp {

namespace {

std::uint64_t Mix(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;

// Uniform in (0, 1] from the counter-th output of the keyed stream.
double Uniform(std::uint64_t key, std::uint64_t counter) {
  const std::uint64_t bits = Mix(key + (counter + 1) * kGolden) >> 11;
  return (static_cast<double>(bits) + 1.0) * 0x1.0p-53;
}

struct Moments {
  double n = 0.0;
  double mean = 0.0;
  double m2 = 0.0;

  void Add(double x) {
    n += 1.0;
    const double d = x - mean;
    mean += d / n;
    m2 += d * (x - mean);
  }

  void Merge(const Moments& o) {
    if (o.n == 0.0) return;
    const double total = n + o.n;
    const double d = o.mean - mean;
    mean += d * o.n / total;
    m2 += o.m2 + d * d * n * o.n / total;
    n = total;
  }

  double StandardError() const {
    return n > 1.0 ? std::sqrt(m2 / (n - 1.0) / n) : 0.0;
  }
};

struct StreamMoments {
  Moments err;  // (z - z_hat)^2
  Moments zz;   // z^2
  Moments hh;   // z_hat^2
  Moments zh;   // z z_hat

  void Merge(const StreamMoments& o) {
    err.Merge(o.err);
    zz.Merge(o.zz);
    hh.Merge(o.hh);
    zh.Merge(o.zh);
  }
};

}  // namespace

double JointGaussianPair::Determinant() const { return gamma * lambda_hat; }

JointGaussianPair BuildPair(double lambda, double gamma, double lambda_hat) {
  if (!(lambda > 0.0) || !std::isfinite(lambda) || !(gamma > 0.0) ||
      !(gamma <= lambda) || !(lambda_hat >= 0.0) ||
      !std::isfinite(lambda_hat)) {
    std::ostringstream msg;
    msg << "invalid pair parameters lambda " << lambda << ", gamma " << gamma
        << ", lambda_hat " << lambda_hat;
    throw DomainError(msg.str());
  }
  JointGaussianPair p;
  p.lambda = lambda;
  p.gamma = gamma;
  p.lambda_hat = lambda_hat;
  const double c = std::sqrt(lambda_hat * (lambda - gamma));
  p.cov = {{{lambda, c}, {c, lambda_hat}}};
  return p;
}

SampleReport SampleAndMeasure(const JointGaussianPair& pair, std::int64_t n,
                              std::uint64_t seed) {
  if (n < 1000) throw DomainError("at least 1000 samples are required");
  // Lower-triangular factor [[sqrt(lambda), 0], [c / sqrt(lambda), r]] with
  // r^2 = lambda_hat - c^2 / lambda = lambda_hat gamma / lambda.
  const double a = std::sqrt(pair.lambda);
  const double b = pair.cov[0][1] / a;
  const double r = std::sqrt(pair.lambda_hat * pair.gamma / pair.lambda);

  StreamMoments total;
  const std::int64_t per_stream = n / kSampleStreams;
  const std::int64_t extra = n % kSampleStreams;
  for (int stream = 0; stream < kSampleStreams; ++stream) {
    const std::int64_t count = per_stream + (stream < extra ? 1 : 0);
    const std::uint64_t key =
        Mix(seed ^ Mix(static_cast<std::uint64_t>(stream) + kGolden));
    StreamMoments m;
    for (std::int64_t i = 0; i < count; ++i) {
      const auto ctr = static_cast<std::uint64_t>(i) * 2;
      const double rad = std::sqrt(-2.0 * std::log(Uniform(key, ctr)));
      const double ang = 2.0 * std::numbers::pi * Uniform(key, ctr + 1);
      const double n1 = rad * std::cos(ang);
      const double n2 = rad * std::sin(ang);
      const double z = a * n1;
      const double zh = b * n1 + r * n2;
      const double e = z - zh;
      m.err.Add(e * e);
      m.zz.Add(z * z);
      m.hh.Add(zh * zh);
      m.zh.Add(z * zh);
    }
    total.Merge(m);
  }

  SampleReport rep;
  rep.n_samples = n;
  rep.seed = seed;
  rep.empirical_distortion = total.err.mean;
  rep.analytic_distortion = internal::DistortionFromGap(
      pair.gamma, pair.lambda - pair.gamma, pair.lambda_hat);
  rep.standard_error = total.err.StandardError();
  rep.empirical_hat_variance = total.hh.mean;
  rep.hat_variance_standard_error = total.hh.StandardError();
  if (total.hh.mean > 0.0) {
    const double rho2 =
        total.zh.mean * total.zh.mean / (total.zz.mean * total.hh.mean);
    if (rho2 < 1.0) rep.empirical_mi_estimate = -0.5 * std::log1p(-rho2);
  }
  rep.pass = std::abs(rep.empirical_distortion - rep.analytic_distortion) <=
             4.0 * rep.standard_error;
  return rep;
}

ComponentStats AnalyticComponentStats(const JointGaussianPair& pair) {
  ComponentStats st;
  const double lambda = pair.lambda;
  st.mi = internal::RateFromFractions(pair.gamma / lambda,
                                      (lambda - pair.gamma) / lambda);
  st.kl = pair.lambda_hat > 0.0
              ? internal::KlFromRelative((pair.lambda_hat - lambda) / lambda)
              : kInfinity;
  st.w2 = internal::W2FromRelative(lambda, (pair.lambda_hat - lambda) / lambda);
  return st;
}

VerificationReport VerifySolution(const SourceSpectrum& s,
                                  const RdpSolution& sol, std::int64_t n,
                                  std::uint64_t seed) {
  if (sol.allocations.size() != s.dim()) {
    throw DomainError("solution and spectrum dimensions differ");
  }
  VerificationReport out;
  double variance = 0.0;
  for (std::size_t i = 0; i < s.dim(); ++i) {
    const ComponentAllocation& a = sol.allocations[i];
    const JointGaussianPair pair = BuildPair(s.lambda(i), a.gamma, a.lambda_hat);
    const SampleReport rep =
        SampleAndMeasure(pair, n, Mix(seed + (i + 1) * kGolden));
    const ComponentStats st = AnalyticComponentStats(pair);
    out.analytic_distortion += rep.analytic_distortion;
    out.empirical_distortion += rep.empirical_distortion;
    variance += rep.standard_error * rep.standard_error;
    switch (sol.metric) {
      case PerceptionMetric::kKL:
        out.analytic_perception += st.kl;
        break;
      case PerceptionMetric::kW2:
        out.analytic_perception += st.w2;
        break;
      case PerceptionMetric::kUnconstrained:
        break;
    }
    out.components.push_back(rep);
    out.stats.push_back(st);
  }
  out.pooled_standard_error = std::sqrt(variance);
  auto close = [](double x, double y) {
    return std::abs(x - y) <= 1e-10 * std::max(1.0, std::abs(y));
  };
  out.analytic_matches =
      close(out.analytic_distortion, sol.achieved_distortion) &&
      close(out.analytic_perception, sol.achieved_perception);
  out.empirical_pass =
      std::abs(out.empirical_distortion - out.analytic_distortion) <=
      4.0 * out.pooled_standard_error;
  return out;
}

}  // namespace rdp
