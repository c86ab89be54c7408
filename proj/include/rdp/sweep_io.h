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

// Curve sweeps over (D, P) grids and their CSV / JSON serialization.

#ifndef RDP_SWEEP_IO_H_
#define RDP_SWEEP_IO_H_

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "rdp/dual_solver.h"
#include "rdp/model.h"

namespace rdp {

enum class RateUnit { kNats, kBits };

std::string_view RateUnitName(RateUnit unit);
RateUnit ParseRateUnit(std::string_view name);

// Converts a rate in nats to `unit`.
double ConvertRate(double nats, RateUnit unit);

enum class PointStatus { kSolved, kInfeasible, kNotConverged };

// "infeasible" / "not_converged"; solved points use the case tag instead.
std::string_view StatusName(PointStatus status);

struct SweepPoint {
  TradeoffQuery query;
  PointStatus status = PointStatus::kSolved;
  RdpSolution solution;  // meaningful only when status is kSolved

  friend bool operator==(const SweepPoint&, const SweepPoint&) = default;
};

struct SweepMetadata {
  std::string source;
  std::vector<double> lambdas;
  RateUnit rate_unit = RateUnit::kNats;
  std::string version = RDP_VERSION;

  friend bool operator==(const SweepMetadata&, const SweepMetadata&) = default;
};

struct CurveSweep {
  SweepMetadata metadata;
  std::vector<SweepPoint> points;

  friend bool operator==(const CurveSweep&, const CurveSweep&) = default;
};

enum class GridSpacing { kLinear, kLog };

struct GridSpec {
  double min = 0.0;
  double max = 0.0;
  int count = 1;
  GridSpacing spacing = GridSpacing::kLinear;
};

// Grid values from min to max inclusive. Throws DomainError for count < 1,
// min > max, or a log grid with min <= 0.
std::vector<double> ExpandGrid(const GridSpec& spec);

// "x" or "min:max:count[:linear|log]". Throws ParseError naming `field`.
GridSpec ParseGridSpec(std::string_view text, std::string_view field);

// Solves one query, mapping InfeasibleQuery and ConvergenceFailure onto the
// point status.
SweepPoint SolvePoint(const SourceSpectrum& s, const TradeoffQuery& q,
                      const SolverConfig& cfg);

// Solves every query on up to `jobs` threads; results keep query order.
std::vector<SweepPoint> RunSweep(const SourceSpectrum& s,
                                 const std::vector<TradeoffQuery>& queries,
                                 const SolverConfig& cfg, int jobs);

// CSV: "# key=value" metadata lines, a header, one row per point. Reals use
// 17 significant digits; rates are written in metadata.rate_unit.
void WriteCsv(std::ostream& out, const CurveSweep& sweep);

// Inverse of WriteCsv. Throws ParseError with the offending line number.
CurveSweep ReadCsv(std::istream& in);

std::string PointToJson(const SweepPoint& point, const SourceSpectrum& s,
                        RateUnit unit);
std::string SweepToJson(const CurveSweep& sweep);

}  // namespace rdp

#endif  // RDP_SWEEP_IO_H_
