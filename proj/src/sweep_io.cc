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

#include "rdp/sweep_io.h"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <istream>
#include <mutex>
#include <numbers>
#include <ostream>
#include <sstream>
#include <thread>

#include "json.hpp"
#include "rdp/errors.h"

namespace rdp {

namespace {

std::string FormatReal(double x) {
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  if (std::isnan(x)) return "nan";
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

std::vector<std::string> Split(std::string_view text, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (;;) {
    const std::size_t pos = text.find(sep, start);
    out.emplace_back(text.substr(start, pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

// Parses a real; accepts "inf". Throws ParseError mentioning `where`.
double ParseReal(const std::string& text, const std::string& where) {
  if (text.empty()) throw ParseError(where + ": empty number");
  char* end = nullptr;
  const double v = std::strtod(text.c_str(), &end);
  if (end != text.c_str() + text.size()) {
    throw ParseError(where + ": cannot parse '" + text + "' as a number");
  }
  return v;
}

nlohmann::json JsonReal(double x) {
  if (std::isfinite(x)) return x;
  return FormatReal(x);
}

nlohmann::json PointJson(const SweepPoint& p, std::span<const double> lambdas,
                         RateUnit unit) {
  nlohmann::json j;
  j["distortion"] = JsonReal(p.query.distortion);
  j["perception"] = JsonReal(p.query.perception);
  j["metric"] = std::string(MetricName(p.query.metric));
  j["rate_unit"] = std::string(RateUnitName(unit));
  if (p.status != PointStatus::kSolved) {
    j["case_tag"] = std::string(StatusName(p.status));
    return j;
  }
  const RdpSolution& sol = p.solution;
  j["case_tag"] = std::string(CaseName(sol.case_tag));
  j["total_rate"] = JsonReal(ConvertRate(sol.total_rate, unit));
  j["dual"] = {{"nu1", JsonReal(sol.dual.nu1)}, {"nu2", JsonReal(sol.dual.nu2)}};
  j["kkt_residual"] = JsonReal(sol.kkt_residual);
  j["achieved_distortion"] = JsonReal(sol.achieved_distortion);
  j["achieved_perception"] = JsonReal(sol.achieved_perception);
  nlohmann::json comps = nlohmann::json::array();
  for (std::size_t i = 0; i < sol.allocations.size(); ++i) {
    const ComponentAllocation& a = sol.allocations[i];
    nlohmann::json c;
    if (i < lambdas.size()) c["lambda"] = JsonReal(lambdas[i]);
    c["gamma"] = JsonReal(a.gamma);
    c["lambda_hat"] = JsonReal(a.lambda_hat);
    c["rate"] = JsonReal(ConvertRate(a.rate, unit));
    comps.push_back(c);
  }
  j["components"] = comps;
  return j;
}

}  // namespace

std::string_view RateUnitName(RateUnit unit) {
  return unit == RateUnit::kBits ? "bits" : "nats";
}

RateUnit ParseRateUnit(std::string_view name) {
  if (name == "nats") return RateUnit::kNats;
  if (name == "bits") return RateUnit::kBits;
  throw ParseError("unknown rate unit '" + std::string(name) +
                   "' (expected nats or bits)");
}

double ConvertRate(double nats, RateUnit unit) {
  return unit == RateUnit::kBits ? nats / std::numbers::ln2 : nats;
}

std::string_view StatusName(PointStatus status) {
  switch (status) {
    case PointStatus::kSolved:
      return "solved";
    case PointStatus::kInfeasible:
      return "infeasible";
    case PointStatus::kNotConverged:
      return "not_converged";
  }
  return "solved";
}

std::vector<double> ExpandGrid(const GridSpec& spec) {
  if (spec.count < 1) throw DomainError("grid count must be at least 1");
  if (!(spec.min <= spec.max)) throw DomainError("grid min exceeds max");
  if (spec.spacing == GridSpacing::kLog && !(spec.min > 0.0)) {
    throw DomainError("log grid needs a positive minimum");
  }
  if (spec.count == 1) return {spec.min};
  std::vector<double> out;
  const double steps = spec.count - 1;
  for (int i = 0; i < spec.count; ++i) {
    const double t = i / steps;
    if (i == spec.count - 1) {
      out.push_back(spec.max);
    } else if (spec.spacing == GridSpacing::kLog) {
      out.push_back(spec.min * std::pow(spec.max / spec.min, t));
    } else {
      out.push_back(spec.min + (spec.max - spec.min) * t);
    }
  }
  return out;
}

GridSpec ParseGridSpec(std::string_view text, std::string_view field) {
  const std::string where = "--" + std::string(field);
  const std::vector<std::string> parts = Split(text, ':');
  GridSpec g;
  if (parts.size() == 1) {
    g.min = g.max = ParseReal(parts[0], where);
    return g;
  }
  if (parts.size() < 3 || parts.size() > 4) {
    throw ParseError(where + ": expected a number or min:max:count[:linear|log]"
                             ", got '" + std::string(text) + "'");
  }
  g.min = ParseReal(parts[0], where + " min");
  g.max = ParseReal(parts[1], where + " max");
  const double count = ParseReal(parts[2], where + " count");
  if (!(count >= 1.0) || count != std::floor(count) || count > 1e7) {
    throw ParseError(where + " count: must be a positive integer, got '" +
                     parts[2] + "'");
  }
  g.count = static_cast<int>(count);
  if (parts.size() == 4) {
    if (parts[3] == "linear") {
      g.spacing = GridSpacing::kLinear;
    } else if (parts[3] == "log") {
      g.spacing = GridSpacing::kLog;
    } else {
      throw ParseError(where + " spacing: expected linear or log, got '" +
                       parts[3] + "'");
    }
  }
  if (!(g.min <= g.max)) {
    throw ParseError(where + ": min exceeds max");
  }
  if (g.spacing == GridSpacing::kLog && !(g.min > 0.0)) {
    throw ParseError(where + ": log spacing needs a positive minimum");
  }
  return g;
}

SweepPoint SolvePoint(const SourceSpectrum& s, const TradeoffQuery& q,
                      const SolverConfig& cfg) {
  SweepPoint p;
  p.query = q;
  try {
    p.solution = Solve(s, q, cfg);
  } catch (const InfeasibleQuery&) {
    p.status = PointStatus::kInfeasible;
  } catch (const ConvergenceFailure&) {
    p.status = PointStatus::kNotConverged;
  }
  return p;
}

std::vector<SweepPoint> RunSweep(const SourceSpectrum& s,
                                 const std::vector<TradeoffQuery>& queries,
                                 const SolverConfig& cfg, int jobs) {
  std::vector<SweepPoint> out(queries.size());
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mu;
  auto worker = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= queries.size()) return;
      try {
        out[i] = SolvePoint(s, queries[i], cfg);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mu);
        if (!error) error = std::current_exception();
      }
    }
  };
  const std::size_t threads =
      std::min<std::size_t>(std::max(jobs, 1), std::max<std::size_t>(queries.size(), 1));
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (std::thread& t : pool) t.join();
  }
  if (error) std::rethrow_exception(error);
  return out;
}

void WriteCsv(std::ostream& out, const CurveSweep& sweep) {
  const SweepMetadata& md = sweep.metadata;
  const std::size_t n = md.lambdas.size();
  const RateUnit unit = md.rate_unit;
  out << "# source=" << md.source << "\n";
  out << "# lambdas=";
  for (std::size_t i = 0; i < n; ++i) {
    out << (i ? "," : "") << FormatReal(md.lambdas[i]);
  }
  out << "\n# rate_unit=" << RateUnitName(unit) << "\n";
  out << "# version=" << md.version << "\n";
  out << "D,P,metric,rate_" << RateUnitName(unit) << ",case_tag";
  for (const char* prefix : {"gamma_", "lambda_hat_", "rate_"}) {
    for (std::size_t i = 1; i <= n; ++i) out << "," << prefix << i;
  }
  out << ",nu1,nu2,kkt_residual,achieved_distortion,achieved_perception\n";
  for (const SweepPoint& p : sweep.points) {
    out << FormatReal(p.query.distortion) << ","
        << FormatReal(p.query.perception) << "," << MetricName(p.query.metric);
    if (p.status != PointStatus::kSolved) {
      out << "," << "," << StatusName(p.status);
      for (std::size_t i = 0; i < 3 * n + 5; ++i) out << ",";
      out << "\n";
      continue;
    }
    const RdpSolution& sol = p.solution;
    if (sol.allocations.size() != n) {
      throw DomainError("sweep point dimension differs from metadata");
    }
    out << "," << FormatReal(ConvertRate(sol.total_rate, unit)) << ","
        << CaseName(sol.case_tag);
    for (const auto& a : sol.allocations) out << "," << FormatReal(a.gamma);
    for (const auto& a : sol.allocations) out << "," << FormatReal(a.lambda_hat);
    for (const auto& a : sol.allocations) {
      out << "," << FormatReal(ConvertRate(a.rate, unit));
    }
    out << "," << FormatReal(sol.dual.nu1) << "," << FormatReal(sol.dual.nu2)
        << "," << FormatReal(sol.kkt_residual) << ","
        << FormatReal(sol.achieved_distortion) << ","
        << FormatReal(sol.achieved_perception) << "\n";
  }
}

CurveSweep ReadCsv(std::istream& in) {
  CurveSweep sweep;
  std::string line;
  int line_no = 0;
  bool have_header = false;
  bool have_lambdas = false;
  std::size_t n = 0;
  auto where = [&line_no](const std::string& field) {
    return "line " + std::to_string(line_no) + ", field " + field;
  };
  auto from_unit = [&sweep](double r) {
    return sweep.metadata.rate_unit == RateUnit::kBits ? r * std::numbers::ln2
                                                       : r;
  };
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line[0] == '#') {
      const std::size_t eq = line.find('=');
      if (eq == std::string::npos || line.size() < 2 || line[1] != ' ') {
        throw ParseError("line " + std::to_string(line_no) +
                         ": metadata must read '# key=value'");
      }
      const std::string key = line.substr(2, eq - 2);
      const std::string value = line.substr(eq + 1);
      if (key == "source") {
        sweep.metadata.source = value;
      } else if (key == "lambdas") {
        sweep.metadata.lambdas.clear();
        for (const std::string& v : Split(value, ',')) {
          sweep.metadata.lambdas.push_back(ParseReal(v, where("lambdas")));
        }
        n = sweep.metadata.lambdas.size();
        have_lambdas = true;
      } else if (key == "rate_unit") {
        try {
          sweep.metadata.rate_unit = ParseRateUnit(value);
        } catch (const ParseError& e) {
          throw ParseError(where("rate_unit") + ": " + e.what());
        }
      } else if (key == "version") {
        sweep.metadata.version = value;
      }
      continue;
    }
    const std::vector<std::string> cells = Split(line, ',');
    if (!have_header) {
      if (!have_lambdas) {
        throw ParseError("line " + std::to_string(line_no) +
                         ": header reached before '# lambdas=' metadata");
      }
      if (cells.size() != 3 * n + 10 || cells[0] != "D") {
        throw ParseError("line " + std::to_string(line_no) +
                         ": header does not match " + std::to_string(n) +
                         " components");
      }
      have_header = true;
      continue;
    }
    if (cells.size() != 3 * n + 10) {
      throw ParseError("line " + std::to_string(line_no) + ": expected " +
                       std::to_string(3 * n + 10) + " fields, got " +
                       std::to_string(cells.size()));
    }
    SweepPoint p;
    p.query.distortion = ParseReal(cells[0], where("D"));
    p.query.perception = ParseReal(cells[1], where("P"));
    try {
      p.query.metric = ParseMetric(cells[2]);
    } catch (const DomainError& e) {
      throw ParseError(where("metric") + ": " + e.what());
    }
    const std::string& tag = cells[4];
    if (tag == StatusName(PointStatus::kInfeasible)) {
      p.status = PointStatus::kInfeasible;
    } else if (tag == StatusName(PointStatus::kNotConverged)) {
      p.status = PointStatus::kNotConverged;
    } else {
      RdpSolution& sol = p.solution;
      try {
        sol.case_tag = ParseCase(tag);
      } catch (const DomainError& e) {
        throw ParseError(where("case_tag") + ": " + e.what());
      }
      sol.metric = p.query.metric;
      sol.total_rate = from_unit(ParseReal(cells[3], where("rate")));
      sol.allocations.resize(n);
      for (std::size_t i = 0; i < n; ++i) {
        const std::string k = std::to_string(i + 1);
        sol.allocations[i].gamma = ParseReal(cells[5 + i], where("gamma_" + k));
        sol.allocations[i].lambda_hat =
            ParseReal(cells[5 + n + i], where("lambda_hat_" + k));
        sol.allocations[i].rate =
            from_unit(ParseReal(cells[5 + 2 * n + i], where("rate_" + k)));
      }
      const std::size_t t = 5 + 3 * n;
      sol.dual.nu1 = ParseReal(cells[t], where("nu1"));
      sol.dual.nu2 = ParseReal(cells[t + 1], where("nu2"));
      sol.kkt_residual = ParseReal(cells[t + 2], where("kkt_residual"));
      sol.achieved_distortion =
          ParseReal(cells[t + 3], where("achieved_distortion"));
      sol.achieved_perception =
          ParseReal(cells[t + 4], where("achieved_perception"));
    }
    sweep.points.push_back(std::move(p));
  }
  if (!have_header) throw ParseError("no CSV header found");
  return sweep;
}

std::string PointToJson(const SweepPoint& point, const SourceSpectrum& s,
                        RateUnit unit) {
  return PointJson(point, s.lambdas(), unit).dump(2) + "\n";
}

std::string SweepToJson(const CurveSweep& sweep) {
  nlohmann::json j;
  j["metadata"] = {{"source", sweep.metadata.source},
                   {"lambdas", sweep.metadata.lambdas},
                   {"rate_unit", std::string(RateUnitName(sweep.metadata.rate_unit))},
                   {"version", sweep.metadata.version}};
  nlohmann::json pts = nlohmann::json::array();
  for (const SweepPoint& p : sweep.points) {
    pts.push_back(PointJson(p, sweep.metadata.lambdas, sweep.metadata.rate_unit));
  }
  j["points"] = pts;
  return j.dump(2) + "\n";
}

}  // namespace rdp
