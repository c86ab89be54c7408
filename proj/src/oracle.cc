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

#include "rdp/oracle.h"

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>

#include "rdp/errors.h"

namespace rdp {

namespace {

// Dense symmetric matrix in row-major order.
using Matrix = std::vector<double>;

// In-place Cholesky factorization; returns false if not positive definite.
bool Cholesky(Matrix& a, std::size_t n) {
  for (std::size_t j = 0; j < n; ++j) {
    double d = a[j * n + j];
    for (std::size_t k = 0; k < j; ++k) d -= a[j * n + k] * a[j * n + k];
    if (!(d > 0.0)) return false;
    d = std::sqrt(d);
    a[j * n + j] = d;
    for (std::size_t i = j + 1; i < n; ++i) {
      double v = a[i * n + j];
      for (std::size_t k = 0; k < j; ++k) v -= a[i * n + k] * a[j * n + k];
      a[i * n + j] = v / d;
    }
  }
  return true;
}

std::vector<double> CholeskySolve(const Matrix& l, std::size_t n,
                                  std::vector<double> b) {
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = 0; k < i; ++k) b[i] -= l[i * n + k] * b[k];
    b[i] /= l[i * n + i];
  }
  for (std::size_t i = n; i-- > 0;) {
    for (std::size_t k = i + 1; k < n; ++k) b[i] -= l[k * n + i] * b[k];
    b[i] /= l[i * n + i];
  }
  return b;
}

// Per-component partial derivatives of the loss formulas.
struct DistortionDerivs {
  double value, d_gamma, d_hat, h_gg, h_gh, h_hh;
};

DistortionDerivs DistortionAt(double lambda, double gamma, double hat) {
  const double gap = lambda - gamma;
  const double sg = std::sqrt(gap);
  const double sh = std::sqrt(hat);
  DistortionDerivs d;
  d.value = gamma + (sh - sg) * (sh - sg);
  d.d_gamma = sh / sg;
  d.d_hat = 1.0 - sg / sh;
  d.h_gg = 0.5 * sh / (gap * sg);
  d.h_gh = 0.5 / (sh * sg);
  d.h_hh = 0.5 * sg / (hat * sh);
  return d;
}

struct PerceptionDerivs {
  double value, d_hat, h_hh;
};

PerceptionDerivs PerceptionAt(PerceptionMetric metric, double lambda,
                              double hat) {
  PerceptionDerivs p{0.0, 0.0, 0.0};
  if (metric == PerceptionMetric::kKL) {
    const double t = (hat - lambda) / lambda;
    p.value = 0.5 * (t - std::log1p(t));
    p.d_hat = 0.5 * (hat - lambda) / (lambda * hat);
    p.h_hh = 0.5 / (hat * hat);
  } else if (metric == PerceptionMetric::kW2) {
    const double d = std::sqrt(lambda) - std::sqrt(hat);
    p.value = d * d;
    p.d_hat = -d / std::sqrt(hat);
    p.h_hh = 0.5 * std::sqrt(lambda) / (hat * std::sqrt(hat));
  }
  return p;
}

// Barrier subproblem  rate(x) + mu * barrier(x)  over x = (gamma, lambda_hat)
// or x = gamma when lambda_hat is pinned to lambda.
class BarrierProblem {
 public:
  BarrierProblem(const SourceSpectrum& s, double distortion, double perception,
                 PerceptionMetric metric, bool pinned)
      : lambdas_(s.lambdas().begin(), s.lambdas().end()),
        distortion_(distortion),
        perception_(perception),
        metric_(metric),
        pinned_(pinned),
        dim_(pinned ? lambdas_.size() : 2 * lambdas_.size()) {}

  std::size_t dim() const { return dim_; }

  bool HasPerceptionConstraint() const {
    return !pinned_ && metric_ != PerceptionMetric::kUnconstrained &&
           std::isfinite(perception_);
  }

  // Number of inequality constraints, for the duality-gap bound.
  double ConstraintCount() const {
    const double n = static_cast<double>(lambdas_.size());
    return (pinned_ ? 2.0 * n : 3.0 * n) + 1.0 +
           (HasPerceptionConstraint() ? 1.0 : 0.0);
  }

  double Hat(const std::vector<double>& x, std::size_t i) const {
    return pinned_ ? lambdas_[i] : x[lambdas_.size() + i];
  }

  double Rate(const std::vector<double>& x) const {
    double r = 0.0;
    for (std::size_t i = 0; i < lambdas_.size(); ++i) {
      r += 0.5 * std::log(lambdas_[i] / x[i]);
    }
    return r;
  }

  bool StrictlyFeasible(const std::vector<double>& x) const {
    double sum_d = 0.0;
    double sum_p = 0.0;
    for (std::size_t i = 0; i < lambdas_.size(); ++i) {
      const double hat = Hat(x, i);
      if (!(x[i] > 0.0) || !(x[i] < lambdas_[i]) || !(hat > 0.0)) return false;
      sum_d += DistortionAt(lambdas_[i], x[i], hat).value;
      sum_p += PerceptionAt(metric_, lambdas_[i], hat).value;
    }
    if (!(sum_d < distortion_)) return false;
    return !HasPerceptionConstraint() || sum_p < perception_;
  }

  // Value of the barrier objective; +inf outside the domain. Fills gradient
  // and Hessian when non-null.
  double Evaluate(const std::vector<double>& x, double mu,
                  std::vector<double>* grad, Matrix* hess) const {
    if (!StrictlyFeasible(x)) return INFINITY;
    const std::size_t n = lambdas_.size();
    const std::size_t m = dim_;
    std::vector<double> gd(m, 0.0), gp(m, 0.0);
    Matrix hd(m * m, 0.0), hp(m * m, 0.0);
    double sum_d = 0.0;
    double sum_p = 0.0;
    double value = 0.0;
    std::vector<double> g(m, 0.0);
    Matrix h(m * m, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      const double lambda = lambdas_[i];
      const double gamma = x[i];
      const double hat = Hat(x, i);
      const double gap = lambda - gamma;
      const DistortionDerivs d = DistortionAt(lambda, gamma, hat);
      sum_d += d.value;
      value += 0.5 * std::log(lambda / gamma) -
               mu * (std::log(gamma) + std::log(gap));
      g[i] += -0.5 / gamma + mu * (-1.0 / gamma + 1.0 / gap);
      h[i * m + i] += 0.5 / (gamma * gamma) +
                      mu * (1.0 / (gamma * gamma) + 1.0 / (gap * gap));
      gd[i] = d.d_gamma;
      hd[i * m + i] = d.h_gg;
      if (!pinned_) {
        const std::size_t j = n + i;
        value -= mu * std::log(hat);
        g[j] += -mu / hat;
        h[j * m + j] += mu / (hat * hat);
        gd[j] = d.d_hat;
        hd[i * m + j] = hd[j * m + i] = d.h_gh;
        hd[j * m + j] = d.h_hh;
        const PerceptionDerivs p = PerceptionAt(metric_, lambda, hat);
        sum_p += p.value;
        gp[j] = p.d_hat;
        hp[j * m + j] = p.h_hh;
      }
    }
    AddLogSlack(distortion_ - sum_d, gd, hd, mu, &value, &g, &h);
    if (HasPerceptionConstraint()) {
      AddLogSlack(perception_ - sum_p, gp, hp, mu, &value, &g, &h);
    }
    if (grad) *grad = std::move(g);
    if (hess) *hess = std::move(h);
    return value;
  }

 private:
  // Adds -mu log(slack) where slack = budget - f(x), given grad/hess of f.
  void AddLogSlack(double slack, const std::vector<double>& gf,
                   const Matrix& hf, double mu, double* value,
                   std::vector<double>* g, Matrix* h) const {
    const std::size_t m = dim_;
    *value -= mu * std::log(slack);
    for (std::size_t a = 0; a < m; ++a) {
      (*g)[a] += mu * gf[a] / slack;
      for (std::size_t b = 0; b < m; ++b) {
        (*h)[a * m + b] +=
            mu * (gf[a] * gf[b] / (slack * slack) + hf[a * m + b] / slack);
      }
    }
  }

  std::vector<double> lambdas_;
  double distortion_;
  double perception_;
  PerceptionMetric metric_;
  bool pinned_;
  std::size_t dim_;
};

double Norm(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

// Damped Newton minimization of one barrier stage. Returns the number of
// steps taken and leaves the final gradient norm in `grad_norm`.
int Centre(const BarrierProblem& prob, double mu, int max_steps,
           std::vector<double>& x, double* grad_norm) {
  constexpr double kArmijo = 0.25;
  constexpr double kDecrementTol = 1e-13;
  const std::size_t m = prob.dim();
  std::vector<double> g;
  Matrix h;
  for (int step = 0; step < max_steps; ++step) {
    const double f = prob.Evaluate(x, mu, &g, &h);
    *grad_norm = Norm(g);
    // Levenberg shift if the Hessian is numerically indefinite.
    Matrix l = h;
    double shift = 0.0;
    while (!Cholesky(l, m)) {
      double diag = 0.0;
      for (std::size_t i = 0; i < m; ++i) diag = std::max(diag, h[i * m + i]);
      shift = shift == 0.0 ? 1e-12 * std::max(diag, 1.0) : shift * 10.0;
      l = h;
      for (std::size_t i = 0; i < m; ++i) l[i * m + i] += shift;
      if (!std::isfinite(shift)) throw ConvergenceFailure("Hessian not finite");
    }
    std::vector<double> neg_g(m);
    for (std::size_t i = 0; i < m; ++i) neg_g[i] = -g[i];
    const std::vector<double> dx = CholeskySolve(l, m, neg_g);
    double slope = 0.0;
    for (std::size_t i = 0; i < m; ++i) slope += g[i] * dx[i];
    const double decrement_sq = -slope;
    if (decrement_sq / 2.0 <= kDecrementTol) return step;
    double t = 1.0;
    std::vector<double> trial(m);
    for (;;) {
      for (std::size_t i = 0; i < m; ++i) trial[i] = x[i] + t * dx[i];
      const double ft = prob.Evaluate(trial, mu, nullptr, nullptr);
      if (ft <= f + kArmijo * t * slope) break;
      t *= 0.5;
      if (t < 1e-20) {
        // Rounding floor: the decrement is already tiny relative to f.
        if (decrement_sq <= 1e-9 * std::max(std::abs(f), 1.0)) return step;
        std::ostringstream msg;
        msg << "barrier line search failed at mu " << mu
            << " (Newton decrement^2 " << decrement_sq << ")";
        throw LineSearchFailure(msg.str());
      }
    }
    x = trial;
  }
  std::ostringstream msg;
  msg << "barrier stage at mu " << mu << " did not converge in " << max_steps
      << " Newton steps";
  throw ConvergenceFailure(msg.str());
}

OracleResult RunBarrier(const BarrierProblem& prob, std::vector<double> x,
                        const OracleOptions& opt, std::size_t n) {
  OracleResult out;
  double mu = opt.mu_initial;
  for (;;) {
    out.newton_steps += Centre(prob, mu, opt.max_newton_steps, x,
                               &out.gradient_norm_final);
    out.barrier_mu_final = mu;
    if (mu <= opt.mu_final * (1.0 + 1e-12)) break;
    mu = std::max(mu * opt.mu_factor, opt.mu_final);
  }
  out.duality_gap = prob.ConstraintCount() * out.barrier_mu_final;
  out.rate = prob.Rate(x);
  out.point.gammas.assign(x.begin(), x.begin() + static_cast<long>(n));
  if (prob.dim() == 2 * n) {
    out.point.lambda_hats.assign(x.begin() + static_cast<long>(n), x.end());
  }
  return out;
}

void ValidateOptions(const OracleOptions& opt) {
  if (!(opt.mu_initial > 0.0) || !(opt.mu_final > 0.0) ||
      !(opt.mu_factor > 0.0 && opt.mu_factor < 1.0) ||
      opt.max_newton_steps < 1) {
    throw DomainError("invalid barrier schedule");
  }
}

}  // namespace

OracleResult MinimizePrimal(const SourceSpectrum& s, const TradeoffQuery& q,
                            const std::optional<PrimalPoint>& seed_point,
                            const OracleOptions& opt) {
  ValidateQuery(q);
  ValidateOptions(opt);
  if (q.metric != PerceptionMetric::kUnconstrained && q.perception == 0.0) {
    throw DomainError("barrier oracle needs P > 0; use MinimizePrimalP0");
  }
  const std::size_t n = s.dim();
  const BarrierProblem prob(s, q.distortion, q.perception, q.metric, false);
  std::vector<double> x(2 * n);
  if (seed_point) {
    if (seed_point->gammas.size() != n || seed_point->lambda_hats.size() != n) {
      throw DomainError("seed point has the wrong dimension");
    }
    std::copy(seed_point->gammas.begin(), seed_point->gammas.end(), x.begin());
    std::copy(seed_point->lambda_hats.begin(), seed_point->lambda_hats.end(),
              x.begin() + static_cast<long>(n));
    if (!prob.StrictlyFeasible(x)) {
      throw InfeasibleSeed("supplied seed point is not strictly feasible");
    }
  } else {
    for (std::size_t i = 0; i < n; ++i) {
      x[i] = 0.5 * s.lambda(i);
      x[n + i] = s.lambda(i);
    }
    int halvings = 0;
    while (!prob.StrictlyFeasible(x)) {
      if (++halvings > 20) {
        throw InfeasibleSeed("no strictly feasible seed after 20 halvings");
      }
      for (std::size_t i = 0; i < n; ++i) x[i] *= 0.5;
    }
  }
  OracleResult out = RunBarrier(prob, std::move(x), opt, n);
  return out;
}

OracleResult MinimizePrimalP0(const SourceSpectrum& s, double distortion,
                              const OracleOptions& opt) {
  ValidateOptions(opt);
  const double limit = 2.0 * s.TotalVariance();
  if (!(distortion > 0.0) || !(distortion < limit)) {
    std::ostringstream msg;
    msg << "distortion must lie in (0, " << limit << "), got " << distortion;
    throw OutOfRange(msg.str());
  }
  const std::size_t n = s.dim();
  const BarrierProblem prob(s, distortion, 0.0, PerceptionMetric::kKL, true);
  std::vector<double> x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = 0.5 * s.lambda(i);
  int halvings = 0;
  while (!prob.StrictlyFeasible(x)) {
    if (++halvings > 20) {
      throw InfeasibleSeed("no strictly feasible seed after 20 halvings");
    }
    for (std::size_t i = 0; i < n; ++i) x[i] *= 0.5;
  }
  OracleResult out = RunBarrier(prob, std::move(x), opt, n);
  out.point.lambda_hats.assign(s.lambdas().begin(), s.lambdas().end());
  return out;
}

double CheckGradients(const SourceSpectrum& s, const TradeoffQuery& q,
                      const PrimalPoint& point) {
  const std::size_t n = s.dim();
  if (point.gammas.size() != n || point.lambda_hats.size() != n) {
    throw DomainError("point has the wrong dimension");
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (!(point.gammas[i] > 0.0 && point.gammas[i] < s.lambda(i)) ||
        !(point.lambda_hats[i] > 0.0)) {
      throw DomainError("gradient check needs a strictly interior point");
    }
  }
  // Three scalar functions of (gamma, lambda_hat) with analytic partials.
  auto values = [&](std::size_t i, double gamma, double hat) {
    const double lambda = s.lambda(i);
    return std::array<double, 3>{
        0.5 * std::log(lambda / gamma),
        DistortionAt(lambda, gamma, hat).value,
        PerceptionAt(q.metric, lambda, hat).value};
  };
  double worst = 0.0;
  auto record = [&worst](double fd, double analytic) {
    worst = std::max(worst, std::abs(fd - analytic) /
                                std::max(std::abs(analytic), 1.0));
  };
  for (std::size_t i = 0; i < n; ++i) {
    const double lambda = s.lambda(i);
    const double gamma = point.gammas[i];
    const double hat = point.lambda_hats[i];
    const DistortionDerivs d = DistortionAt(lambda, gamma, hat);
    const PerceptionDerivs p = PerceptionAt(q.metric, lambda, hat);

    double h = 1e-6 * std::min(gamma, lambda - gamma);
    auto up = values(i, gamma + h, hat);
    auto dn = values(i, gamma - h, hat);
    record((up[0] - dn[0]) / (2.0 * h), -0.5 / gamma);
    record((up[1] - dn[1]) / (2.0 * h), d.d_gamma);
    record((up[2] - dn[2]) / (2.0 * h), 0.0);

    h = 1e-6 * hat;
    up = values(i, gamma, hat + h);
    dn = values(i, gamma, hat - h);
    record((up[0] - dn[0]) / (2.0 * h), 0.0);
    record((up[1] - dn[1]) / (2.0 * h), d.d_hat);
    record((up[2] - dn[2]) / (2.0 * h), p.d_hat);
  }
  return worst;
}

}  // namespace rdp
