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

// Acceptance suite: one [PASS]/[FAIL] line per criterion. Exits non-zero if
// any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "cli.h"
#include "rdp/classic_rd.h"
#include "rdp/dual_solver.h"
#include "rdp/errors.h"
#include "rdp/montecarlo.h"
#include "rdp/oracle.h"
#include "reference.h"

namespace rdp {
namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

double Seconds(Clock::time_point since) {
  return std::chrono::duration<double>(Clock::now() - since).count();
}

std::string Fmt(const char* fmt, double a, double b = 0, double c = 0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, fmt, a, b, c);
  return buf;
}

const std::vector<double> kFiveComponents = {3, 2, 5, 4, 1};

SourceSpectrum Spec(std::vector<double> l) {
  return SourceSpectrum::FromEigenvalues(std::move(l));
}

Outcome Ac1() {
  const auto t0 = Clock::now();
  const double a = ReverseWaterfill(Spec({1, 1}), 1.0).total_rate;
  const double b = ReverseWaterfill(Spec({2, 0.5}), 1.2).total_rate;
  const double secs = Seconds(t0);
  const double ea = std::abs(a - testing::kLog2);
  const double eb = std::abs(b - testing::kHalfLog2Over07);
  return {ea <= 1e-12 && eb <= 1e-12 && secs < 1e-3,
          Fmt("errors %.2g, %.2g; %.3f ms", ea, eb, secs * 1e3)};
}

struct Instance {
  SourceSpectrum s;
  TradeoffQuery q;
};

std::vector<Instance> OracleInstances() {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> frac(0.05, 0.95);
  std::uniform_real_distribution<double> logp(std::log(1e-3), std::log(1.0));
  std::vector<Instance> out;
  for (int i = 0; i < 50; ++i) {
    SourceSpectrum s = Spec(testing::RandomLambdas(rng, 1 + i % 4));
    const auto m = i % 2 ? PerceptionMetric::kW2 : PerceptionMetric::kKL;
    const double d = s.TotalVariance() * frac(rng);
    const double p = std::exp(logp(rng));
    out.push_back({std::move(s), {d, p, m}});
  }
  return out;
}

Outcome Ac2And3(Outcome& kkt) {
  const auto t0 = Clock::now();
  const SolverConfig cfg;
  double worst_ratio = 0.0;
  int failures = 0;
  int both_active = 0;
  double worst_stat = 0.0;
  double worst_d = 0.0;
  double worst_p = 0.0;
  kkt.pass = true;
  for (const Instance& in : OracleInstances()) {
    const RdpSolution sol = Solve(in.s, in.q, cfg);
    const double oracle = MinimizePrimal(in.s, in.q).rate;
    const double tol = std::max(1e-4, 1e-3 * sol.total_rate);
    const double diff = std::abs(sol.total_rate - oracle);
    worst_ratio = std::max(worst_ratio, diff / tol);
    if (diff > tol) ++failures;
    if (sol.case_tag != ActiveCase::kBothActive) continue;
    ++both_active;
    const double stat = ComputeKktResiduals(in.s, in.q, sol).MaxStationarity();
    const double dd = std::abs(sol.achieved_distortion - in.q.distortion);
    const double dp = std::abs(sol.achieved_perception - in.q.perception);
    worst_stat = std::max(worst_stat, stat);
    worst_d = std::max(worst_d, dd / (cfg.distortion_tol * in.s.TotalVariance()));
    worst_p = std::max(worst_p, dp / cfg.perception_tol);
    if (stat > 1e-8 || dd > cfg.distortion_tol * in.s.TotalVariance() ||
        dp > cfg.perception_tol) {
      kkt.pass = false;
    }
  }
  const double secs = Seconds(t0);
  kkt.pass = kkt.pass && both_active > 0;
  kkt.detail = Fmt("%.0f both-active instances; max stationarity %.2g", both_active,
                   worst_stat) +
               Fmt("; constraint misses %.2g, %.2g of tolerance", worst_d, worst_p);
  return {failures == 0 && secs < 60.0,
          Fmt("%.0f/50 within tolerance; worst |diff|/tol %.2g; %.2f s",
              50 - failures, worst_ratio, secs)};
}

Outcome Ac4() {
  std::mt19937_64 rng(404);
  std::uniform_real_distribution<double> frac(0.05, 0.95);
  std::uniform_real_distribution<double> logp(std::log(1e-4), std::log(1.0));
  int found = 0;
  int tries = 0;
  double worst_gap = kInfinity;
  double worst_rate = kInfinity;
  bool pass = true;
  while (found < 100 && tries < 10000) {
    ++tries;
    const SourceSpectrum s = Spec(testing::RandomLambdas(rng, 1 + tries % 6));
    const auto m = tries % 2 ? PerceptionMetric::kW2 : PerceptionMetric::kKL;
    const TradeoffQuery q{s.TotalVariance() * frac(rng), std::exp(logp(rng)), m};
    const RdpSolution sol = Solve(s, q);
    if (sol.case_tag != ActiveCase::kBothActive) continue;
    ++found;
    for (std::size_t i = 0; i < s.dim(); ++i) {
      const double gap = (s.lambda(i) - sol.allocations[i].gamma) / s.lambda(i);
      worst_gap = std::min(worst_gap, gap);
      worst_rate = std::min(worst_rate, sol.allocations[i].rate);
      if (!(gap > 1e-12) || !(sol.allocations[i].rate > 0.0)) pass = false;
    }
  }
  return {pass && found == 100,
          Fmt("%.0f instances; min (lambda-gamma)/lambda %.3g; min rate %.3g",
              found, worst_gap, worst_rate)};
}

Outcome Ac5() {
  Outcome o;
  for (auto m : {PerceptionMetric::kKL, PerceptionMetric::kW2}) {
    const RdpSolution sol = Solve(Spec({1}), {1.0, 0.0, m});
    const double eg = std::abs(sol.allocations[0].gamma - 0.75);
    const double er = std::abs(sol.total_rate - testing::kHalfLog4Over3);
    o.pass = o.pass && eg <= 1e-9 && er <= 1e-9;
    o.detail += std::string(o.detail.empty() ? "" : "; ") +
                std::string(MetricName(m)) +
                Fmt(" gamma err %.2g, rate err %.2g", eg, er);
  }
  return o;
}

Outcome Ac6() {
  std::mt19937_64 rng(606);
  std::uniform_real_distribution<double> u(0.01, 0.99);
  double worst = 0.0;
  for (int i = 0; i < 20; ++i) {
    const double lambda = std::exp(6.0 * u(rng) - 3.0);
    const double d = 2.0 * lambda * u(rng);
    const auto m = i % 2 ? PerceptionMetric::kW2 : PerceptionMetric::kKL;
    const double r0 = Solve(Spec({lambda}), {d, 0.0, m}).total_rate;
    const double rd =
        ReverseWaterfill(Spec({lambda}), d - d * d / (4.0 * lambda)).total_rate;
    worst = std::max(worst, std::abs(r0 - rd));
  }
  return {worst <= 1e-8, Fmt("20 points; max |diff| %.2g nats", worst)};
}

Outcome Ac7() {
  const auto t0 = Clock::now();
  const SourceSpectrum s = Spec(kFiveComponents);
  const double total = s.TotalVariance();
  const double lmax = s.MaxLambda();
  const double n = static_cast<double>(s.dim());
  double sum_sq = 0.0;
  double sum_inv = 0.0;
  for (double l : kFiveComponents) {
    sum_sq += l * l;
    sum_inv += 1.0 / l;
  }
  const TradeoffQuery none{0, kInfinity, PerceptionMetric::kUnconstrained};
  auto rd = [&](double d) {
    TradeoffQuery q = none;
    q.distortion = d;
    return Solve(s, q).total_rate;
  };
  auto p0 = [&](double d) {
    return Solve(s, {d, 0.0, PerceptionMetric::kKL}).total_rate;
  };

  double eps = 1e-3 * lmax;
  const double a = rd(total - eps) * 2.0 * lmax / eps;

  // Below L * min lambda every component sits at D / L.
  double b_err = 0.0;
  for (double d : {0.01, 0.5, 2.0, n * s.MinLambda()}) {
    double exact = 0.0;
    for (double l : kFiveComponents) exact += 0.5 * std::log(n * l / d);
    b_err = std::max(b_err, std::abs(rd(d) - exact));
  }

  eps = 1e-2 * total;
  const double c1 = p0(2.0 * total - eps) * 8.0 * sum_sq / (eps * eps);
  eps = 1e-3 * total;
  const double c2 = p0(2.0 * total - eps) * 8.0 * sum_sq / (eps * eps);

  eps = 1e-3 * n * s.MinLambda();
  const double d = (p0(eps) - rd(eps)) * 8.0 * n / (eps * sum_inv);
  const double secs = Seconds(t0);

  const bool pass = a >= 0.99 && a <= 1.01 && b_err <= 1e-12 && c1 >= 0.95 &&
                    c1 <= 1.05 && c2 >= 0.99 && c2 <= 1.01 && d >= 0.95 &&
                    d <= 1.05 && secs < 5.0;
  return {pass, Fmt("(a) %.5f (b) max err %.2g", a, b_err) +
                    Fmt(" (c) %.5f, %.5f", c1, c2) +
                    Fmt(" (d) %.5f; %.3f s", d, secs)};
}

Outcome Ac8() {
  const SourceSpectrum s = Spec(kFiveComponents);
  const double total = s.TotalVariance();
  const double n = static_cast<double>(s.dim());
  Outcome o;

  RdpSolution sol =
      Solve(s, {total - 0.01, kInfinity, PerceptionMetric::kUnconstrained});
  int below = 0;
  bool five = false;
  for (std::size_t i = 0; i < s.dim(); ++i) {
    if (sol.allocations[i].gamma < s.lambda(i)) {
      ++below;
      five = s.lambda(i) == 5.0;
    }
  }
  const bool part1 = below == 1 && five;

  sol = Solve(s, {2.0 * total - 0.1, 0.0, PerceptionMetric::kKL});
  int below0 = 0;
  for (std::size_t i = 0; i < s.dim(); ++i) {
    if (sol.allocations[i].gamma < s.lambda(i)) ++below0;
  }
  const bool part2 = below0 == 5;

  sol = Solve(s, {0.05, kInfinity, PerceptionMetric::kUnconstrained});
  double flat = 0.0;
  for (const auto& a : sol.allocations) {
    flat = std::max(flat, std::abs(a.gamma - 0.05 / n));
  }
  const bool part3 = flat <= 1e-12;

  const double eps = 0.05;
  double sum_inv = 0.0;
  for (double l : kFiveComponents) sum_inv += 1.0 / l;
  sol = Solve(s, {eps, 0.0, PerceptionMetric::kKL});
  double dev = 0.0;
  for (std::size_t i = 0; i < s.dim(); ++i) {
    const double l = s.lambda(i);
    const double expansion = eps / n - eps * eps / (2.0 * n * n * l) +
                             eps * eps * sum_inv / (4.0 * n * n * n);
    dev = std::max(dev, std::abs(sol.allocations[i].gamma - expansion));
  }
  const bool part4 = dev <= 1e-4;

  o.pass = part1 && part2 && part3 && part4;
  o.detail = Fmt("near sum: %.0f component(s) below lambda; near 2 sum at P=0: %.0f",
                 below, below0) +
             Fmt("; low-D flat err %.2g; low-D P=0 expansion dev %.2g", flat, dev);
  return o;
}

Outcome Ac9() {
  std::mt19937_64 rng(909);
  std::uniform_real_distribution<double> u(0.01, 1.2);
  double worst = 0.0;
  for (int i = 0; i < 20; ++i) {
    const SourceSpectrum s = Spec(testing::RandomLambdas(rng, 1 + i % 6));
    const double d = s.TotalVariance() * u(rng);
    const RdpSolution a =
        Solve(s, {d, kInfinity, PerceptionMetric::kUnconstrained});
    const RdpSolution b = ReverseWaterfill(s, d);
    for (std::size_t k = 0; k < s.dim(); ++k) {
      worst = std::max(worst,
                       std::abs(a.allocations[k].gamma - b.allocations[k].gamma));
    }
  }
  return {worst <= 1e-10, Fmt("20 instances; max |gamma diff| %.2g", worst)};
}

Outcome Ac10() {
  const auto t0 = Clock::now();
  std::mt19937_64 rng(1010);
  std::uniform_real_distribution<double> u(0.05, 0.95);
  int pass = 0;
  bool identical = true;
  double worst = 0.0;
  for (int i = 0; i < 10; ++i) {
    const double lambda = std::exp(4.0 * u(rng) - 2.0);
    const JointGaussianPair p =
        BuildPair(lambda, lambda * u(rng), 2.0 * lambda * u(rng));
    const std::uint64_t seed = 77 + i;
    const SampleReport a = SampleAndMeasure(p, 1'000'000, seed);
    const double z =
        std::abs(a.empirical_distortion - a.analytic_distortion) / a.standard_error;
    worst = std::max(worst, z);
    if (z <= 4.0) ++pass;
    if (i < 3) {
      const SampleReport b = SampleAndMeasure(p, 1'000'000, seed);
      identical = identical && a.empirical_distortion == b.empirical_distortion &&
                  a.standard_error == b.standard_error;
    }
  }
  const double secs = Seconds(t0);
  return {pass == 10 && identical && secs < 30.0,
          Fmt("%.0f/10 within 4 SE (max %.2f SE); reruns identical: ", pass,
              worst) +
              (identical ? "yes" : "no") + Fmt("; %.2f s", secs)};
}

Outcome Ac11() {
  std::mt19937_64 rng(1111);
  std::uniform_real_distribution<double> u(0.02, 0.98);
  double worst = 0.0;
  for (int i = 0; i < 20; ++i) {
    const SourceSpectrum s = Spec(testing::RandomLambdas(rng, 1 + i % 4));
    PrimalPoint p;
    for (double l : s.lambdas()) {
      p.gammas.push_back(l * u(rng));
      p.lambda_hats.push_back(2.0 * l * u(rng));
    }
    const auto m = i % 2 ? PerceptionMetric::kW2 : PerceptionMetric::kKL;
    worst = std::max(worst, CheckGradients(s, {1.0, 1.0, m}, p));
  }
  return {worst <= 1e-5, Fmt("20 points; max relative error %.2g", worst)};
}

Outcome Ac12() {
  auto run = [](const char* jobs) {
    std::ostringstream out;
    std::ostringstream err;
    const int code = cli::RunCli(
        {"curve", "--lambdas", "3,2,5,4,1", "--metric", "kl", "--distortion",
         "0.5:29:10", "--perception", "0:2:10", "--jobs", jobs},
        out, err);
    return std::pair{code, out.str()};
  };
  const auto [c1, a] = run("1");
  const auto [c4, b] = run("4");
  const bool same = c1 == 0 && c4 == 0 && a == b;
  return {same, Fmt("exit codes %.0f, %.0f; %.0f bytes", c1, c4,
                    static_cast<double>(a.size())) +
                    (a == b ? ", identical" : ", different")};
}

int RunAll() {
  struct Entry {
    const char* name;
    std::function<Outcome()> run;
  };
  Outcome kkt;
  Outcome oracle;
  const std::vector<Entry> entries = {
      {"AC1 classic RD exactness", Ac1},
      {"AC2 oracle equivalence",
       [&] {
         oracle = Ac2And3(kkt);
         return oracle;
       }},
      {"AC3 KKT certification", [&] { return kkt; }},
      {"AC4 positive rates when both constraints bind", Ac4},
      {"AC5 perfect-perception scalar point", Ac5},
      {"AC6 scalar P=0 reduction", Ac6},
      {"AC7 asymptotic ratio laws", Ac7},
      {"AC8 water levels for lambda=(3,2,5,4,1)", Ac8},
      {"AC9 degeneration to reverse water-filling", Ac9},
      {"AC10 Monte Carlo distortion", Ac10},
      {"AC11 gradient check", Ac11},
      {"AC12 curve determinism across --jobs", Ac12},
  };
  int failed = 0;
  for (const Entry& e : entries) {
    Outcome o;
    try {
      o = e.run();
    } catch (const std::exception& ex) {
      o = {false, std::string("exception: ") + ex.what()};
    }
    if (!o.pass) ++failed;
    std::printf("[%s] %s: %s\n", o.pass ? "PASS" : "FAIL", e.name,
                o.detail.c_str());
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(entries.size()) - failed,
              entries.size());
  return failed == 0 ? 0 : 1;
}

}  // namespace
}  // namespace rdp

int main() { return rdp::RunAll(); }
