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

#ifndef RDP_ERRORS_H_
#define RDP_ERRORS_H_

#include <stdexcept>
#include <string>

namespace rdp {

// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

#define RDP_DEFINE_ERROR(Name, Base)   \
  class Name : public Base {           \
   public:                             \
    using Base::Base;                  \
  }

// Argument outside the domain of a formula (e.g. gamma > lambda).
RDP_DEFINE_ERROR(DomainError, Error);

// Matrix input errors.
RDP_DEFINE_ERROR(NotSymmetric, Error);
RDP_DEFINE_ERROR(DimensionZero, Error);
RDP_DEFINE_ERROR(NotPSD, Error);
RDP_DEFINE_ERROR(AllComponentsNull, Error);

// The (D, P) budget admits no reconstruction at finite rate. Every D > 0,
// P >= 0 pair is feasible (lambda_hat = lambda, gamma -> 0), so this is raised
// only for D <= 0 or P < 0.
RDP_DEFINE_ERROR(InfeasibleQuery, Error);
RDP_DEFINE_ERROR(NonPositiveDistortion, InfeasibleQuery);

// Dual multiplier of zero where a strictly positive one is required.
RDP_DEFINE_ERROR(DualDegenerate, DomainError);

// Distortion budget outside the range an operation is defined on.
RDP_DEFINE_ERROR(OutOfRange, DomainError);

// Iterative method failed to meet its tolerance. what() carries diagnostics.
RDP_DEFINE_ERROR(ConvergenceFailure, Error);

// Barrier oracle failures.
RDP_DEFINE_ERROR(InfeasibleSeed, Error);
RDP_DEFINE_ERROR(LineSearchFailure, ConvergenceFailure);

// Malformed text input; what() names the line or field.
RDP_DEFINE_ERROR(ParseError, DomainError);

#undef RDP_DEFINE_ERROR

}  // namespace rdp

#endif  // RDP_ERRORS_H_
