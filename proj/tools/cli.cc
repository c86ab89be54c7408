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

#include "cli.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "rdp/dual_solver.h"
#include "rdp/errors.h"
#include "rdp/montecarlo.h"
#include "rdp/oracle.h"
#include "rdp/sweep_io.h"

namespace rdp::cli {

namespace {

struct Options {
  std::string lambdas;
  std::string covariance;
  std::string metric = "none";
  std::string distortion;
  std::string perception;
  std::string format;
  std::string unit = "nats";
  std::string output;
  int jobs = 1;
  std::uint64_t seed = 1;
  std::int64_t samples = 100000;
  SolverConfig solver;
};

std::string Real(double x) {
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

double ParseNumber(const std::string& text, const std::string& where) {
  const GridSpec g = ParseGridSpec(text, where);
  if (g.count != 1 || g.min != g.max) {
    throw ParseError("--" + where + ": expected a single number, got '" +
                     text + "'");
  }
  return g.min;
}

std::vector<double> ParseLambdaList(const std::string& text) {
  std::vector<double> out;
  std::size_t start = 0;
  int index = 1;
  for (;;) {
    const std::size_t pos = text.find(',', start);
    const std::string item = text.substr(start, pos - start);
    char* end = nullptr;
    const double v = std::strtod(item.c_str(), &end);
    if (item.empty() || end != item.c_str() + item.size()) {
      throw ParseError("--lambdas entry " + std::to_string(index) +
                       ": cannot parse '" + item + "' as a number");
    }
    if (!(v > 0.0) || !std::isfinite(v)) {
      throw ParseError("--lambdas entry " + std::to_string(index) +
                       ": eigenvalue must be positive and finite");
    }
    out.push_back(v);
    if (pos == std::string::npos) break;
    start = pos + 1;
    ++index;
  }
  return out;
}

// Plain text: L on the first line, then L rows of L reals.
SymMatrix ReadCovarianceFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("--covariance: cannot open '" + path + "'");
  std::string line;
  int line_no = 0;
  auto next_line = [&]() -> bool {
    while (std::getline(in, line)) {
      ++line_no;
      if (line.find_first_not_of(" \t\r") != std::string::npos) return true;
    }
    return false;
  };
  auto fail = [&](const std::string& what) {
    return ParseError(path + ":" + std::to_string(line_no) + ": " + what);
  };
  if (!next_line()) throw fail("empty covariance file");
  std::istringstream head(line);
  long dim = 0;
  std::string rest;
  if (!(head >> dim) || (head >> rest) || dim < 1 || dim > 4096) {
    throw fail("first line must hold the dimension L >= 1");
  }
  const auto n = static_cast<std::size_t>(dim);
  SymMatrix m(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (!next_line()) throw fail("expected " + std::to_string(n) + " rows");
    std::istringstream row(line);
    for (std::size_t j = 0; j < n; ++j) {
      std::string tok;
      if (!(row >> tok)) {
        throw fail("row " + std::to_string(i + 1) + " has fewer than " +
                   std::to_string(n) + " entries");
      }
      char* end = nullptr;
      const double v = std::strtod(tok.c_str(), &end);
      if (end != tok.c_str() + tok.size() || !std::isfinite(v)) {
        throw fail("column " + std::to_string(j + 1) + ": cannot parse '" +
                   tok + "'");
      }
      m(i, j) = v;
    }
    std::string extra;
    if (row >> extra) {
      throw fail("row " + std::to_string(i + 1) + " has more than " +
                 std::to_string(n) + " entries");
    }
  }
  if (next_line()) throw fail("unexpected content after the last row");
  return m;
}

struct Source {
  SourceSpectrum spectrum;
  std::string description;
};

Source LoadSource(const Options& o) {
  if (o.lambdas.empty() == o.covariance.empty()) {
    throw ParseError("exactly one of --lambdas and --covariance is required");
  }
  if (!o.lambdas.empty()) {
    return {SourceSpectrum::FromEigenvalues(ParseLambdaList(o.lambdas)),
            "lambdas"};
  }
  return {SourceSpectrum::FromCovariance(ReadCovarianceFile(o.covariance)),
          "covariance:" + o.covariance};
}

PerceptionMetric LoadMetric(const Options& o) {
  try {
    return ParseMetric(o.metric);
  } catch (const DomainError& e) {
    throw ParseError(std::string("--metric: ") + e.what());
  }
}

// Perception grid: +inf for metric none, required otherwise.
GridSpec PerceptionGrid(const Options& o, PerceptionMetric metric) {
  if (metric == PerceptionMetric::kUnconstrained) {
    if (!o.perception.empty()) {
      const GridSpec g = ParseGridSpec(o.perception, "perception");
      if (!(std::isinf(g.min) && std::isinf(g.max))) {
        throw ParseError("--perception: metric none takes no finite budget");
      }
    }
    GridSpec g;
    g.min = g.max = kInfinity;
    return g;
  }
  if (o.perception.empty()) {
    throw ParseError("--perception is required with metric kl or w2");
  }
  GridSpec g = ParseGridSpec(o.perception, "perception");
  if (std::isinf(g.max)) {
    throw ParseError("--perception: use --metric none for an infinite budget");
  }
  return g;
}

class OutputSink {
 public:
  OutputSink(const std::string& path, std::ostream& fallback)
      : path_(path), out_(fallback) {}

  std::ostream& stream() { return path_.empty() ? out_ : buffer_; }

  void Flush() {
    if (path_.empty()) return;
    std::ofstream f(path_, std::ios::binary);
    if (!f) throw ParseError("--output: cannot open '" + path_ + "'");
    f << buffer_.str();
    if (!f) throw ParseError("--output: write to '" + path_ + "' failed");
  }

 private:
  std::string path_;
  std::ostream& out_;
  std::ostringstream buffer_;
};

int RunPoint(const Options& o, std::ostream& out) {
  const Source src = LoadSource(o);
  const PerceptionMetric metric = LoadMetric(o);
  const RateUnit unit = ParseRateUnit(o.unit);
  TradeoffQuery q;
  q.metric = metric;
  q.distortion = ParseNumber(o.distortion, "distortion");
  const GridSpec pg = PerceptionGrid(o, metric);
  if (pg.count != 1 || pg.min != pg.max) {
    throw ParseError("--perception: point takes a single number");
  }
  q.perception = pg.min;
  SweepPoint p;
  p.query = q;
  p.solution = Solve(src.spectrum, q, o.solver);
  OutputSink sink(o.output, out);
  const std::string format = o.format.empty() ? "json" : o.format;
  if (format == "json") {
    sink.stream() << PointToJson(p, src.spectrum, unit);
  } else if (format == "csv") {
    CurveSweep sweep;
    sweep.metadata.source = src.description;
    sweep.metadata.lambdas.assign(src.spectrum.lambdas().begin(),
                                  src.spectrum.lambdas().end());
    sweep.metadata.rate_unit = unit;
    sweep.points.push_back(p);
    WriteCsv(sink.stream(), sweep);
  } else {
    throw ParseError("--format: expected json or csv, got '" + format + "'");
  }
  sink.Flush();
  return kExitOk;
}

int RunCurve(const Options& o, std::ostream& out, std::ostream& err) {
  const Source src = LoadSource(o);
  const PerceptionMetric metric = LoadMetric(o);
  const RateUnit unit = ParseRateUnit(o.unit);
  const std::string format = o.format.empty() ? "csv" : o.format;
  if (format != "csv" && format != "json") {
    throw ParseError("--format: expected csv or json, got '" + format + "'");
  }
  if (o.jobs < 1) throw ParseError("--jobs: must be at least 1");
  const std::vector<double> ds =
      ExpandGrid(ParseGridSpec(o.distortion, "distortion"));
  const std::vector<double> ps = ExpandGrid(PerceptionGrid(o, metric));
  std::vector<TradeoffQuery> queries;
  for (double d : ds) {
    for (double p : ps) queries.push_back({d, p, metric});
  }
  CurveSweep sweep;
  sweep.metadata.source = src.description;
  sweep.metadata.lambdas.assign(src.spectrum.lambdas().begin(),
                                src.spectrum.lambdas().end());
  sweep.metadata.rate_unit = unit;
  sweep.points = RunSweep(src.spectrum, queries, o.solver, o.jobs);
  std::size_t failed = 0;
  for (const SweepPoint& p : sweep.points) {
    if (p.status == PointStatus::kNotConverged) ++failed;
  }
  if (failed) {
    err << "warning: " << failed << " grid point(s) did not converge\n";
  }
  OutputSink sink(o.output, out);
  if (format == "csv") {
    WriteCsv(sink.stream(), sweep);
  } else {
    sink.stream() << SweepToJson(sweep);
  }
  sink.Flush();
  return kExitOk;
}

int RunVerify(const Options& o, std::ostream& out, std::ostream& err) {
  const Source src = LoadSource(o);
  const SourceSpectrum& s = src.spectrum;
  const PerceptionMetric metric = LoadMetric(o);
  const RateUnit unit = ParseRateUnit(o.unit);
  TradeoffQuery q;
  q.metric = metric;
  q.distortion = ParseNumber(o.distortion, "distortion");
  const GridSpec pg = PerceptionGrid(o, metric);
  if (pg.count != 1 || pg.min != pg.max) {
    throw ParseError("--perception: verify takes a single number");
  }
  q.perception = pg.min;
  if (o.samples < 1000) throw ParseError("--samples: must be at least 1000");

  const RdpSolution sol = Solve(s, q, o.solver);
  double oracle_rate = 0.0;
  if (q.perception == 0.0) {
    if (q.distortion < 2.0 * s.TotalVariance()) {
      oracle_rate = MinimizePrimalP0(s, q.distortion).rate;
    }
  } else {
    oracle_rate = MinimizePrimal(s, q).rate;
  }
  const double delta = std::abs(sol.total_rate - oracle_rate);
  const double rate_tol = std::max(1e-4, 1e-3 * sol.total_rate);
  const bool rate_ok = delta <= rate_tol;
  const bool kkt_ok = sol.kkt_residual <= 1e-8;
  const VerificationReport mc = VerifySolution(s, sol, o.samples, o.seed);
  bool mc_ok = mc.analytic_matches && mc.empirical_pass;
  for (const SampleReport& r : mc.components) mc_ok = mc_ok && r.pass;
  const bool all_ok = rate_ok && kkt_ok && mc_ok;

  OutputSink sink(o.output, out);
  const std::string format = o.format.empty() ? "json" : o.format;
  if (format == "json") {
    nlohmann::json j;
    j["metric"] = std::string(MetricName(metric));
    j["distortion"] = Real(q.distortion);
    j["perception"] = Real(q.perception);
    j["rate_unit"] = std::string(RateUnitName(unit));
    j["case_tag"] = std::string(CaseName(sol.case_tag));
    j["solver_rate"] = ConvertRate(sol.total_rate, unit);
    j["oracle_rate"] = ConvertRate(oracle_rate, unit);
    j["rate_difference"] = ConvertRate(delta, unit);
    j["rate_check"] = rate_ok;
    j["kkt_residual"] = sol.kkt_residual;
    j["kkt_check"] = kkt_ok;
    j["samples"] = o.samples;
    j["seed"] = o.seed;
    nlohmann::json comps = nlohmann::json::array();
    for (std::size_t i = 0; i < mc.components.size(); ++i) {
      const SampleReport& r = mc.components[i];
      comps.push_back({{"lambda", s.lambda(i)},
                       {"analytic_distortion", r.analytic_distortion},
                       {"empirical_distortion", r.empirical_distortion},
                       {"standard_error", r.standard_error},
                       {"pass", r.pass}});
    }
    j["monte_carlo"] = {{"components", comps},
                        {"analytic_distortion", mc.analytic_distortion},
                        {"empirical_distortion", mc.empirical_distortion},
                        {"pooled_standard_error", mc.pooled_standard_error},
                        {"analytic_matches_solution", mc.analytic_matches},
                        {"pass", mc_ok}};
    j["pass"] = all_ok;
    sink.stream() << j.dump(2) << "\n";
  } else if (format == "text") {
    std::ostream& t = sink.stream();
    t << "case " << CaseName(sol.case_tag) << "\n";
    t << "solver rate  " << Real(ConvertRate(sol.total_rate, unit)) << " "
      << RateUnitName(unit) << "\n";
    t << "oracle rate  " << Real(ConvertRate(oracle_rate, unit)) << " "
      << RateUnitName(unit) << "\n";
    t << "difference   " << Real(ConvertRate(delta, unit))
      << (rate_ok ? "  ok" : "  FAIL") << "\n";
    t << "kkt residual " << Real(sol.kkt_residual)
      << (kkt_ok ? "  ok" : "  FAIL") << "\n";
    for (std::size_t i = 0; i < mc.components.size(); ++i) {
      const SampleReport& r = mc.components[i];
      t << "component " << i + 1 << " distortion " << Real(r.analytic_distortion)
        << " empirical " << Real(r.empirical_distortion) << " se "
        << Real(r.standard_error) << (r.pass ? "  ok" : "  FAIL") << "\n";
    }
    t << (all_ok ? "PASS" : "FAIL") << "\n";
  } else {
    throw ParseError("--format: expected json or text, got '" + format + "'");
  }
  sink.Flush();
  if (!all_ok) err << "verification failed\n";
  return all_ok ? kExitOk : kExitVerifyFailed;
}

void AddSourceOptions(CLI::App* cmd, Options& o) {
  auto* lam = cmd->add_option("--lambdas", o.lambdas,
                              "Comma-separated eigenvalues, e.g. 3,2,5");
  auto* cov = cmd->add_option("--covariance", o.covariance,
                              "Covariance file: L, then L rows of L reals");
  lam->excludes(cov);
  cmd->add_option("--metric", o.metric, "Perception metric: kl, w2 or none")
      ->capture_default_str();
  cmd->add_option("--unit", o.unit, "Rate unit: nats or bits")
      ->capture_default_str();
  cmd->add_option("--output", o.output, "Write results to this file");
  cmd->add_option("--tol-distortion", o.solver.distortion_tol,
                  "Distortion tolerance relative to the total variance")
      ->capture_default_str();
  cmd->add_option("--tol-perception", o.solver.perception_tol,
                  "Absolute perception tolerance")
      ->capture_default_str();
  cmd->add_option("--max-iter", o.solver.max_dual_iterations,
                  "Iteration budget of the multiplier search")
      ->capture_default_str();
}

}  // namespace

int RunCli(const std::vector<std::string>& args, std::ostream& out,
           std::ostream& err) {
  CLI::App app{"Rate-distortion-perception function of Gaussian vector sources",
               "gaussrdp"};
  app.set_version_flag("--version", std::string(RDP_VERSION));
  app.require_subcommand(1);
  Options o;

  CLI::App* point = app.add_subcommand("point", "Evaluate R(D, P) at one point");
  AddSourceOptions(point, o);
  point->add_option("--distortion", o.distortion, "Distortion budget D")
      ->required();
  point->add_option("--perception", o.perception,
                    "Perception budget P (omit for metric none)");
  point->add_option("--format", o.format, "json (default) or csv");

  CLI::App* curve = app.add_subcommand("curve", "Sweep R(D, P) over a grid");
  AddSourceOptions(curve, o);
  curve->add_option("--distortion", o.distortion,
                    "D value or grid min:max:count[:linear|log]")
      ->required();
  curve->add_option("--perception", o.perception,
                    "P value or grid min:max:count[:linear|log]");
  curve->add_option("--format", o.format, "csv (default) or json");
  curve->add_option("--jobs", o.jobs, "Worker threads")->capture_default_str();

  CLI::App* verify =
      app.add_subcommand("verify", "Cross-check one point against the oracle "
                                   "and Monte Carlo sampling");
  AddSourceOptions(verify, o);
  verify->add_option("--distortion", o.distortion, "Distortion budget D")
      ->required();
  verify->add_option("--perception", o.perception, "Perception budget P");
  verify->add_option("--format", o.format, "json (default) or text");
  verify->add_option("--seed", o.seed, "Sampling seed")->capture_default_str();
  verify->add_option("--samples", o.samples, "Samples per component")
      ->capture_default_str();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitInputError;
  }

  try {
    if (*point) return RunPoint(o, out);
    if (*curve) return RunCurve(o, out, err);
    return RunVerify(o, out, err);
  } catch (const InfeasibleQuery& e) {
    err << "infeasible: " << e.what() << "\n";
    return kExitInfeasible;
  } catch (const ConvergenceFailure& e) {
    err << "convergence failure: " << e.what() << "\n";
    return kExitConvergence;
  } catch (const InfeasibleSeed& e) {
    err << "oracle: " << e.what() << "\n";
    return kExitConvergence;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitInputError;
  }
}

}  // namespace rdp::cli
