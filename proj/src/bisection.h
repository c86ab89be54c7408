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

// Safeguarded bisection shared by the kernel and dual solvers.

#ifndef RDP_SRC_BISECTION_H_
#define RDP_SRC_BISECTION_H_

#include <algorithm>
#include <cmath>
#include <sstream>

#include "rdp/errors.h"

namespace rdp::internal {

struct BisectionOptions {
  double rel_tol = 1e-14;
  int max_iter = 200;
};

// Locates the sign change of a monotone `f` on [lo, hi], 0 <= lo < hi.
// While the bracket spans more than a factor of four the split point is the
// geometric mean, which resolves roots near zero to full relative precision;
// afterwards it is the arithmetic midpoint. Throws ConvergenceFailure when
// the ends do not bracket a sign change or the iteration budget runs out.
template <class F>
double Bisect(F&& f, double lo, double hi, const char* what,
              BisectionOptions opt = {}) {
  double f_lo = f(lo);
  const double f_hi = f(hi);
  if (f_lo == 0.0) return lo;
  if (f_hi == 0.0) return hi;
  if (std::signbit(f_lo) == std::signbit(f_hi)) {
    std::ostringstream msg;
    msg << what << ": no sign change on [" << lo << ", " << hi
        << "] (f = " << f_lo << ", " << f_hi << ")";
    throw ConvergenceFailure(msg.str());
  }
  const double floor = hi * 1e-300;
  for (int iter = 0; iter < opt.max_iter; ++iter) {
    const double mid = hi > 4.0 * lo ? std::sqrt(std::max(lo, floor) * hi)
                                     : lo + 0.5 * (hi - lo);
    if (hi - lo <= opt.rel_tol * hi || mid <= lo || mid >= hi) {
      return lo + 0.5 * (hi - lo);
    }
    const double f_mid = f(mid);
    if (f_mid == 0.0) return mid;
    if (std::signbit(f_mid) == std::signbit(f_lo)) {
      lo = mid;
      f_lo = f_mid;
    } else {
      hi = mid;
    }
    if (hi <= floor) return hi;
  }
  std::ostringstream msg;
  msg << what << ": bracket [" << lo << ", " << hi << "] not within "
      << opt.rel_tol << " relative after " << opt.max_iter << " iterations";
  throw ConvergenceFailure(msg.str());
}

}  // namespace rdp::internal

#endif  // RDP_SRC_BISECTION_H_
