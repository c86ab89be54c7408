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

#include <catch_amalgamated.hpp>
#include <cmath>
#include <sstream>
#include <string>

#include "json.hpp"
#include "rdp/errors.h"

namespace rdp {
namespace {

using Catch::Matchers::ContainsSubstring;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

SourceSpectrum Spec(std::vector<double> l) {
  return SourceSpectrum::FromEigenvalues(std::move(l));
}

CurveSweep MakeSweep(const SourceSpectrum& s, PerceptionMetric metric,
                     const std::vector<double>& ds,
                     const std::vector<double>& ps, RateUnit unit, int jobs) {
  std::vector<TradeoffQuery> qs;
  for (double d : ds) {
    for (double p : ps) qs.push_back({d, p, metric});
  }
  CurveSweep sweep;
  sweep.metadata.source = "test";
  sweep.metadata.lambdas.assign(s.lambdas().begin(), s.lambdas().end());
  sweep.metadata.rate_unit = unit;
  sweep.points = RunSweep(s, qs, {}, jobs);
  return sweep;
}

std::string ToCsv(const CurveSweep& sweep) {
  std::ostringstream out;
  WriteCsv(out, sweep);
  return out.str();
}

CurveSweep FromCsv(const std::string& text) {
  std::istringstream in(text);
  return ReadCsv(in);
}

TEST_CASE("rate units") {
  CHECK(ConvertRate(std::log(2.0), RateUnit::kBits) == 1.0);
  CHECK(ConvertRate(0.25, RateUnit::kNats) == 0.25);
  CHECK(ParseRateUnit("bits") == RateUnit::kBits);
  CHECK(RateUnitName(RateUnit::kNats) == "nats");
  CHECK_THROWS_AS(ParseRateUnit("bytes"), DomainError);
}

TEST_CASE("grid specs") {
  GridSpec g = ParseGridSpec("0.5", "distortion");
  CHECK(g.count == 1);
  CHECK(ExpandGrid(g) == std::vector<double>{0.5});

  g = ParseGridSpec("1:3:5", "distortion");
  CHECK(ExpandGrid(g) == std::vector<double>{1, 1.5, 2, 2.5, 3});

  g = ParseGridSpec("0.01:100:5:log", "perception");
  const std::vector<double> v = ExpandGrid(g);
  REQUIRE(v.size() == 5);
  CHECK(v.front() == 0.01);
  CHECK(v.back() == 100.0);
  CHECK_THAT(v[2], WithinRel(1.0, 1e-14));

  CHECK(std::isinf(ParseGridSpec("inf", "perception").min));

  CHECK_THROWS_AS(ParseGridSpec("1:2", "distortion"), ParseError);
  CHECK_THROWS_AS(ParseGridSpec("1:2:0", "distortion"), ParseError);
  CHECK_THROWS_AS(ParseGridSpec("1:2:2.5", "distortion"), ParseError);
  CHECK_THROWS_AS(ParseGridSpec("3:2:4", "distortion"), ParseError);
  CHECK_THROWS_AS(ParseGridSpec("0:2:4:log", "distortion"), ParseError);
  CHECK_THROWS_AS(ParseGridSpec("1:2:4:cubic", "distortion"), ParseError);
  CHECK_THROWS_WITH(ParseGridSpec("abc", "perception"),
                    ContainsSubstring("--perception"));
  CHECK_THROWS_AS(ExpandGrid({1, 2, 0, GridSpacing::kLinear}), DomainError);
}

TEST_CASE("solve point maps failures onto the status") {
  const SourceSpectrum s = Spec({1, 2});
  CHECK(SolvePoint(s, {0.0, kInfinity, PerceptionMetric::kUnconstrained}, {})
            .status == PointStatus::kInfeasible);
  CHECK(SolvePoint(s, {1.0, -1.0, PerceptionMetric::kKL}, {}).status ==
        PointStatus::kInfeasible);
  const SweepPoint ok =
      SolvePoint(s, {1.0, 0.1, PerceptionMetric::kKL}, {});
  CHECK(ok.status == PointStatus::kSolved);
  CHECK(ok.solution == Solve(s, {1.0, 0.1, PerceptionMetric::kKL}));
  SolverConfig tight;
  tight.max_dual_iterations = 1;
  CHECK(SolvePoint(s, {1.0, 0.1, PerceptionMetric::kKL}, tight).status ==
        PointStatus::kNotConverged);
  CHECK(StatusName(PointStatus::kInfeasible) == "infeasible");
  CHECK(StatusName(PointStatus::kNotConverged) == "not_converged");
}

TEST_CASE("CSV layout") {
  const SourceSpectrum s = Spec({2, 1});
  const CurveSweep sweep = MakeSweep(s, PerceptionMetric::kKL, {0.0, 1.0},
                                     {0.05}, RateUnit::kNats, 1);
  const std::string csv = ToCsv(sweep);
  std::istringstream in(csv);
  std::string line;
  std::vector<std::string> lines;
  while (std::getline(in, line)) lines.push_back(line);
  REQUIRE(lines.size() == 7);
  CHECK(lines[0] == "# source=test");
  CHECK(lines[1] == "# lambdas=2,1");
  CHECK(lines[2] == "# rate_unit=nats");
  CHECK(lines[3] == std::string("# version=") + RDP_VERSION);
  CHECK(lines[4] ==
        "D,P,metric,rate_nats,case_tag,gamma_1,gamma_2,lambda_hat_1,"
        "lambda_hat_2,rate_1,rate_2,nu1,nu2,kkt_residual,achieved_distortion,"
        "achieved_perception");
  CHECK(lines[5] == "0,0.050000000000000003,kl,,infeasible,,,,,,,,,,,");
  CHECK(lines[6].rfind("1,0.050000000000000003,kl,1.0500638", 0) == 0);
  CHECK_THAT(lines[6], ContainsSubstring(",both_active,"));
}

TEST_CASE("CSV round trip") {
  const SourceSpectrum s = Spec({3, 2, 5, 4, 1});
  for (auto metric : {PerceptionMetric::kKL, PerceptionMetric::kW2}) {
    const CurveSweep sweep =
        MakeSweep(s, metric, {0.0, 0.5, 3.0, 7.5, 14.0, 40.0},
                  {0.0, 1e-3, 0.1, 2.0}, RateUnit::kNats, 2);
    const CurveSweep back = FromCsv(ToCsv(sweep));
    CHECK(back == sweep);
    CHECK(ToCsv(back) == ToCsv(sweep));
  }
  const CurveSweep rd = MakeSweep(s, PerceptionMetric::kUnconstrained,
                                  {1.0, 10.0, 20.0}, {kInfinity},
                                  RateUnit::kNats, 1);
  CHECK(FromCsv(ToCsv(rd)) == rd);

  // Bits pass through one multiply by log 2 on the way back.
  const CurveSweep bits = MakeSweep(s, PerceptionMetric::kKL, {2.0, 6.0},
                                    {0.05}, RateUnit::kBits, 1);
  const CurveSweep back = FromCsv(ToCsv(bits));
  REQUIRE(back.points.size() == bits.points.size());
  for (std::size_t k = 0; k < bits.points.size(); ++k) {
    const RdpSolution& a = bits.points[k].solution;
    const RdpSolution& b = back.points[k].solution;
    CHECK_THAT(b.total_rate, WithinRel(a.total_rate, 1e-15));
    CHECK(b.allocations.size() == a.allocations.size());
    CHECK(b.dual == a.dual);
    CHECK(b.allocations[0].gamma == a.allocations[0].gamma);
  }
}

TEST_CASE("CSV parse errors name the line") {
  const SourceSpectrum s = Spec({2, 1});
  const std::string good = ToCsv(MakeSweep(s, PerceptionMetric::kKL, {1.0},
                                           {0.05}, RateUnit::kNats, 1));
  CHECK_THROWS_AS(FromCsv(""), ParseError);

  std::string bad = good;
  bad.replace(bad.rfind("both_active"), 11, "sideways");
  CHECK_THROWS_WITH(FromCsv(bad), ContainsSubstring("line 6"));

  bad = good;
  bad.replace(bad.rfind("\n1,"), 3, "\nx,");
  CHECK_THROWS_WITH(FromCsv(bad), ContainsSubstring("line 6"));

  bad = good;
  bad.pop_back();
  bad += ",7\n";
  CHECK_THROWS_AS(FromCsv(bad), ParseError);

  bad = good + "1,2\n";
  CHECK_THROWS_WITH(FromCsv(bad), ContainsSubstring("line 7"));
}

TEST_CASE("sweeps are independent of the thread count") {
  const SourceSpectrum s = Spec({3, 2, 5, 4, 1});
  std::vector<double> ds;
  std::vector<double> ps;
  for (int i = 0; i < 8; ++i) ds.push_back(0.5 + 3.0 * i);
  for (int i = 0; i < 5; ++i) ps.push_back(0.02 * i);
  const CurveSweep one =
      MakeSweep(s, PerceptionMetric::kW2, ds, ps, RateUnit::kNats, 1);
  const CurveSweep four =
      MakeSweep(s, PerceptionMetric::kW2, ds, ps, RateUnit::kNats, 4);
  CHECK(one == four);
  CHECK(ToCsv(one) == ToCsv(four));
  CHECK(SweepToJson(one) == SweepToJson(four));
}

TEST_CASE("JSON mirrors the CSV fields") {
  const SourceSpectrum s = Spec({1, 1});
  const SweepPoint p =
      SolvePoint(s, {1.0, kInfinity, PerceptionMetric::kUnconstrained}, {});
  const nlohmann::json j = nlohmann::json::parse(PointToJson(p, s, RateUnit::kNats));
  CHECK_THAT(j["total_rate"].get<double>(), WithinAbs(std::log(2.0), 1e-12));
  CHECK(j["perception"] == "inf");
  CHECK(j["case_tag"] == "distortion_only");
  REQUIRE(j["components"].size() == 2);
  CHECK(j["components"][0]["gamma"] == 0.5);

  const nlohmann::json bits =
      nlohmann::json::parse(PointToJson(p, s, RateUnit::kBits));
  CHECK_THAT(bits["total_rate"].get<double>(), WithinAbs(1.0, 1e-15));

  const SweepPoint bad =
      SolvePoint(s, {-1.0, kInfinity, PerceptionMetric::kUnconstrained}, {});
  const nlohmann::json jb = nlohmann::json::parse(PointToJson(bad, s, RateUnit::kNats));
  CHECK(jb["case_tag"] == "infeasible");
  CHECK(!jb.contains("total_rate"));

  const nlohmann::json sweep = nlohmann::json::parse(SweepToJson(
      MakeSweep(s, PerceptionMetric::kKL, {0.5, 1.0}, {0.1}, RateUnit::kNats, 1)));
  CHECK(sweep["points"].size() == 2);
}

}  // namespace
}  // namespace rdp
