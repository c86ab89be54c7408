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

#include "rdp/dual_solver.h"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <vector>

#include "bisection.h"
#include "kernel_math.h"
#include "rdp/errors.h"
#include "rdp/rdp_core.h"

namespace rdp {

namespace {

struct Evaluation {
  std::vector<StationaryPoint> points;
  double distortion = 0.0;
  double perception = 0.0;
};

Evaluation EvaluateDual(const SourceSpectrum& s, PerceptionMetric metric,
                        const DualPoint& dual) {
  Evaluation e;
  e.points.reserve(s.dim());
  for (double lambda : s.lambdas()) {
    const ComponentKernel k(lambda);
    StationaryPoint p;
    if (std::isinf(dual.nu2)) {
      p = PerfectPerceptionPoint(k, dual.nu1);
    } else if (metric == PerceptionMetric::kKL) {
      p = KlStationaryPoint(k, dual);
    } else {
      p = W2StationaryPoint(k, dual);
    }
    e.distortion += p.distortion;
    e.perception += p.perception;
    e.points.push_back(p);
  }
  return e;
}

// Brackets the root of a decreasing function of a positive multiplier by
// stepping x0 geometrically, then bisects. `g` > 0 means x is too small.
template <class G>
double SolveMultiplier(G&& g, double x0, const SolverConfig& cfg,
                       const char* what) {
  const double factor = std::exp(cfg.dual_step_init);
  double lo = x0;
  double hi = x0;
  int steps = 0;
  if (g(x0) > 0.0) {
    do {
      lo = hi;
      hi *= factor;
      if (++steps > cfg.max_dual_iterations || !std::isfinite(hi)) {
        std::ostringstream msg;
        msg << what << ": no upper bracket found after " << steps
            << " steps (last " << lo << ")";
        throw ConvergenceFailure(msg.str());
      }
    } while (g(hi) > 0.0);
  } else {
    do {
      hi = lo;
      lo /= factor;
      if (++steps > cfg.max_dual_iterations || !(lo > 0.0)) {
        std::ostringstream msg;
        msg << what << ": no lower bracket found after " << steps
            << " steps (last " << hi << ")";
        throw ConvergenceFailure(msg.str());
      }
    } while (g(lo) <= 0.0);
  }
  if (lo == hi) return lo;
  internal::BisectionOptions opt;
  opt.max_iter = std::max(cfg.max_dual_iterations, 1);
  return internal::Bisect(g, lo, hi, what, opt);
}

RdpSolution Assemble(PerceptionMetric metric, const DualPoint& dual,
                     const Evaluation& e) {
  RdpSolution sol;
  sol.metric = metric;
  sol.case_tag = ActiveCase::kBothActive;
  sol.dual = dual;
  sol.achieved_distortion = e.distortion;
  sol.achieved_perception = e.perception;
  for (const StationaryPoint& p : e.points) {
    sol.allocations.push_back({p.gamma, p.lambda_hat, p.rate});
    sol.total_rate += p.rate;
  }
  return sol;
}

// Every component of a both-active solution carries positive rate. The check
// uses the stationary point itself: gamma can round to lambda when the rate
// is below the resolution of lambda.
void RequireStrictlyActive(const Evaluation& e) {
  for (std::size_t i = 0; i < e.points.size(); ++i) {
    const StationaryPoint& p = e.points[i];
    if (!(p.gap > 0.0) || !(p.rate > 0.0)) {
      std::ostringstream msg;
      msg << "multiplier search produced a saturated component " << i
          << " (gamma " << p.gamma << ", rate " << p.rate << ")";
      throw ConvergenceFailure(msg.str());
    }
  }
}

void CheckTolerance(double achieved, double target, double tol,
                    const char* name) {
  if (!(std::abs(achieved - target) <= tol)) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "multiplier search stalled: " << name << " " << achieved
        << " vs budget " << target << " (tolerance " << tol << ")";
    throw ConvergenceFailure(msg.str());
  }
}

double TotalPerception(const SourceSpectrum& s, PerceptionMetric metric,
                       const std::vector<ComponentAllocation>& allocations) {
  double sum = 0.0;
  for (std::size_t i = 0; i < s.dim(); ++i) {
    sum += PerceptionComponent(ComponentKernel(s.lambda(i)), metric,
                               allocations[i].lambda_hat);
  }
  return sum;
}

RdpSolution ZeroRateSolution(const SourceSpectrum& s, const TradeoffQuery& q) {
  const std::vector<double> lh =
      ZeroRateReconstruction(s, q.metric, q.perception);
  RdpSolution sol;
  sol.metric = q.metric;
  sol.case_tag = ActiveCase::kDistortionInactive;
  sol.dual = {0.0, 0.0};
  for (std::size_t i = 0; i < s.dim(); ++i) {
    sol.allocations.push_back({s.lambda(i), lh[i], 0.0});
    sol.achieved_distortion += s.lambda(i) + lh[i];
  }
  sol.achieved_perception = TotalPerception(s, q.metric, sol.allocations);
  return sol;
}

RdpSolution SolveBothActive(const SourceSpectrum& s, const TradeoffQuery& q,
                            const SolverConfig& cfg) {
  const double target_d = q.distortion;
  const double nu1_init =
      static_cast<double>(s.dim()) / (2.0 * target_d);
  auto nu1_for = [&](double nu2) {
    return SolveMultiplier(
        [&](double nu1) {
          return EvaluateDual(s, q.metric, {nu1, nu2}).distortion - target_d;
        },
        nu1_init, cfg, "distortion multiplier");
  };
  const double nu2 = SolveMultiplier(
      [&](double nu2) {
        const double nu1 = nu1_for(nu2);
        return EvaluateDual(s, q.metric, {nu1, nu2}).perception -
               q.perception;
      },
      1.0, cfg, "perception multiplier");
  const DualPoint dual{nu1_for(nu2), nu2};
  const Evaluation e = EvaluateDual(s, q.metric, dual);
  CheckTolerance(e.distortion, target_d, cfg.distortion_tol * s.TotalVariance(),
                 "distortion");
  CheckTolerance(e.perception, q.perception, cfg.perception_tol, "perception");
  RequireStrictlyActive(e);
  return Assemble(q.metric, dual, e);
}

}  // namespace

void SolverConfig::Validate() const {
  if (!(distortion_tol > 0.0) || !(perception_tol > 0.0) ||
      !(dual_step_init > 0.0) || max_dual_iterations < 1) {
    throw DomainError(
        "solver tolerances, step and iteration budget must be positive");
  }
}

RdpSolution Solve(const SourceSpectrum& s, const TradeoffQuery& q,
                  const SolverConfig& cfg) {
  ValidateQuery(q);
  cfg.Validate();
  RdpSolution sol;
  if (MaxZeroRateDistortion(s, q.metric, q.perception) <= q.distortion) {
    sol = ZeroRateSolution(s, q);
  } else {
    RdpSolution rd = ReverseWaterfill(s, q.distortion);
    const double rd_perception = TotalPerception(s, q.metric, rd.allocations);
    if (rd_perception <= q.perception) {
      sol = std::move(rd);
      sol.metric = q.metric;
      sol.case_tag = ActiveCase::kDistortionOnly;
      sol.achieved_perception = rd_perception;
    } else if (q.perception == 0.0) {
      sol = SolvePerfectPerception(s, q.distortion, cfg);
      sol.metric = q.metric;
    } else {
      sol = SolveBothActive(s, q, cfg);
    }
  }
  sol.kkt_residual = ComputeKktResiduals(s, q, sol).MaxStationarity();
  return sol;
}

RdpSolution SolvePerfectPerception(const SourceSpectrum& s, double distortion,
                                   const SolverConfig& cfg) {
  cfg.Validate();
  const double limit = 2.0 * s.TotalVariance();
  if (!(distortion > 0.0) || !(distortion < limit)) {
    std::ostringstream msg;
    msg << "perfect-perception distortion must lie in (0, " << limit
        << "), got " << distortion;
    throw OutOfRange(msg.str());
  }
  const double nu1 = SolveMultiplier(
      [&](double nu1) {
        return EvaluateDual(s, PerceptionMetric::kKL, {nu1, kInfinity})
                   .distortion -
               distortion;
      },
      static_cast<double>(s.dim()) / (2.0 * distortion), cfg,
      "perfect-perception multiplier");
  const DualPoint dual{nu1, kInfinity};
  const Evaluation e = EvaluateDual(s, PerceptionMetric::kKL, dual);
  CheckTolerance(e.distortion, distortion, cfg.distortion_tol * s.TotalVariance(),
                 "distortion");
  RdpSolution sol = Assemble(PerceptionMetric::kKL, dual, e);
  TradeoffQuery q{distortion, 0.0, PerceptionMetric::kKL};
  sol.kkt_residual = ComputeKktResiduals(s, q, sol).MaxStationarity();
  return sol;
}

AsymptoticEstimate HighDistortionP0Estimate(const SourceSpectrum& s,
                                            double eps) {
  double sum_sq = 0.0;
  for (double lambda : s.lambdas()) sum_sq += lambda * lambda;
  AsymptoticEstimate out;
  out.rate_estimate = eps * eps / (8.0 * sum_sq);
  for (double lambda : s.lambdas()) {
    out.water_levels.push_back(lambda - eps * eps * lambda * lambda * lambda /
                                            (4.0 * sum_sq * sum_sq));
  }
  return out;
}

AsymptoticEstimate LowDistortionP0Estimate(const SourceSpectrum& s,
                                           double eps) {
  const auto n = static_cast<double>(s.dim());
  double sum_inv = 0.0;
  for (double lambda : s.lambdas()) sum_inv += 1.0 / lambda;
  AsymptoticEstimate out;
  for (double lambda : s.lambdas()) {
    out.rate_estimate += 0.5 * std::log(n * lambda / eps);
    out.water_levels.push_back(eps / n - eps * eps / (2.0 * n * n * lambda) +
                               eps * eps * sum_inv / (4.0 * n * n * n));
  }
  out.rate_estimate += eps / (8.0 * n) * sum_inv;
  return out;
}

KktResiduals ComputeKktResiduals(const SourceSpectrum& s,
                                 const TradeoffQuery& q,
                                 const RdpSolution& sol) {
  const std::size_t n = s.dim();
  if (sol.allocations.size() != n) {
    throw DomainError("solution and spectrum dimensions differ");
  }
  KktResiduals r;
  r.stationarity_gamma.assign(n, 0.0);
  r.stationarity_lambda_hat.assign(n, 0.0);
  r.xi.assign(n, 0.0);
  r.eta.assign(n, 0.0);
  const double nu1 = sol.dual.nu1;
  const double nu2 = sol.dual.nu2;
  const bool perception_terms =
      sol.metric != PerceptionMetric::kUnconstrained && std::isfinite(nu2);
  double slack = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double lambda = s.lambda(i);
    const ComponentAllocation& a = sol.allocations[i];
    // lambda - gamma recovered from the rate keeps full relative precision
    // when gamma is within rounding of lambda.
    const double gap = a.rate > 0.0 ? -lambda * std::expm1(-2.0 * a.rate)
                                    : lambda - a.gamma;
    if (!(gap > 0.0) || !(a.lambda_hat > 0.0)) {
      // Zero-rate component: the derivative in gamma is absorbed by xi.
      r.xi[i] = std::max(0.0, 0.5 / lambda - nu1);
      continue;
    }
    const double ratio = std::sqrt(a.lambda_hat / gap);
    const double g_rate = 0.5 / a.gamma;
    const double g_dist = nu1 * ratio;
    r.stationarity_gamma[i] = (g_rate - g_dist) / std::max(g_rate, g_dist);
    // lambda_hat is pinned to lambda when nu2 is infinite.
    if (std::isinf(nu2)) continue;

    // d/d lambda_hat of nu1 D + nu2 P.
    const double d1 = nu1;
    const double d2 = nu1 / ratio;
    double p1 = 0.0;
    double p2 = 0.0;
    if (perception_terms && sol.metric == PerceptionMetric::kKL) {
      p1 = 0.5 * nu2 / lambda;
      p2 = 0.5 * nu2 / a.lambda_hat;
    } else if (perception_terms) {
      p1 = nu2;
      p2 = nu2 * std::sqrt(lambda / a.lambda_hat);
    }
    const double scale = std::max({d1, d2, p1, p2});
    if (scale > 0.0) {
      r.stationarity_lambda_hat[i] = ((d1 - d2) + (p1 - p2)) / scale;
    }
  }
  if (std::isfinite(q.distortion) && nu1 > 0.0) {
    slack = std::max(slack, nu1 * std::abs(sol.achieved_distortion -
                                           q.distortion) /
                                std::max(q.distortion, 1.0));
  }
  if (perception_terms && nu2 > 0.0 && std::isfinite(q.perception)) {
    slack = std::max(slack, nu2 * std::abs(sol.achieved_perception -
                                           q.perception) /
                                std::max(q.perception, 1.0));
  }
  r.complementarity = slack;
  return r;
}

}  // namespace rdp
