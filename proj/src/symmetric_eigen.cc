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

#include "rdp/symmetric_eigen.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "rdp/errors.h"

namespace rdp {

namespace {

constexpr int kMaxSweeps = 100;
constexpr double kOffDiagonalTolerance = 1e-14;

double OffDiagonalNorm(const DenseMatrix& a) {
  double sum = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) {
      if (i != j) sum += a(i, j) * a(i, j);
    }
  }
  return std::sqrt(sum);
}

double FrobeniusNorm(const DenseMatrix& a) {
  double sum = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) sum += a(i, j) * a(i, j);
  }
  return std::sqrt(sum);
}

// Applies the rotation that annihilates a(p, q) to both a (as J^T a J) and
// the accumulated eigenvector columns v (as v J).
void Rotate(DenseMatrix& a, DenseMatrix& v, std::size_t p, std::size_t q) {
  const double apq = a(p, q);
  if (apq == 0.0) return;
  const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
  const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                   (std::abs(theta) + std::sqrt(theta * theta + 1.0));
  const double c = 1.0 / std::sqrt(t * t + 1.0);
  const double s = t * c;
  const std::size_t n = a.rows();
  for (std::size_t k = 0; k < n; ++k) {
    if (k == p || k == q) continue;
    const double akp = a(k, p);
    const double akq = a(k, q);
    a(k, p) = a(p, k) = c * akp - s * akq;
    a(k, q) = a(q, k) = s * akp + c * akq;
  }
  a(p, p) -= t * apq;
  a(q, q) += t * apq;
  a(p, q) = a(q, p) = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    const double vkp = v(k, p);
    const double vkq = v(k, q);
    v(k, p) = c * vkp - s * vkq;
    v(k, q) = s * vkp + c * vkq;
  }
}

}  // namespace

DenseMatrix DenseMatrix::Identity(std::size_t n) {
  DenseMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

double DenseMatrix::MaxAbs() const {
  double best = 0.0;
  for (double x : data_) best = std::max(best, std::abs(x));
  return best;
}

SymMatrix SymMatrix::FromRows(const std::vector<std::vector<double>>& rows) {
  SymMatrix m(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != rows.size()) {
      std::ostringstream msg;
      msg << "row " << i << " has " << rows[i].size() << " entries, expected "
          << rows.size();
      throw DomainError(msg.str());
    }
    for (std::size_t j = 0; j < rows.size(); ++j) m(i, j) = rows[i][j];
  }
  return m;
}

SymMatrix SymMatrix::Diagonal(std::span<const double> diag) {
  SymMatrix m(diag.size());
  for (std::size_t i = 0; i < diag.size(); ++i) m(i, i) = diag[i];
  return m;
}

EigenDecomposition Decompose(const SymMatrix& m) {
  const std::size_t n = m.dim();
  if (n == 0) throw DimensionZero("matrix has dimension 0");

  const double scale = m.entries().MaxAbs();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i; j < n; ++j) {
      if (!std::isfinite(m(i, j)) || !std::isfinite(m(j, i))) {
        throw DomainError("matrix has non-finite entries");
      }
      if (std::abs(m(i, j) - m(j, i)) > kSymmetryTolerance * scale) {
        std::ostringstream msg;
        msg << "entries (" << i << "," << j << ") and (" << j << "," << i
            << ") differ: " << m(i, j) << " vs " << m(j, i);
        throw NotSymmetric(msg.str());
      }
    }
  }

  // Work on the exactly symmetrized copy.
  DenseMatrix a(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) a(i, j) = 0.5 * (m(i, j) + m(j, i));
  }
  DenseMatrix v = DenseMatrix::Identity(n);
  const double threshold = kOffDiagonalTolerance * FrobeniusNorm(a);

  int sweep = 0;
  while (OffDiagonalNorm(a) > threshold) {
    if (++sweep > kMaxSweeps) {
      std::ostringstream msg;
      msg << "Jacobi eigensolver: off-diagonal norm " << OffDiagonalNorm(a)
          << " above " << threshold << " after " << kMaxSweeps << " sweeps";
      throw ConvergenceFailure(msg.str());
    }
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) Rotate(a, v, p, q);
    }
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t i,
                                                   std::size_t j) {
    return a(i, i) > a(j, j);
  });

  EigenDecomposition out;
  out.eigenvalues.resize(n);
  out.basis = DenseMatrix(n, n);
  for (std::size_t r = 0; r < n; ++r) {
    const std::size_t k = order[r];
    out.eigenvalues[r] = a(k, k);
    for (std::size_t j = 0; j < n; ++j) out.basis(r, j) = v(j, k);
  }
  return out;
}

EigenDecomposition StripNullComponents(const EigenDecomposition& e,
                                       double tol) {
  if (!(tol >= 0.0)) throw DomainError("null-component tolerance must be >= 0");
  std::vector<std::size_t> keep;
  for (std::size_t i = 0; i < e.eigenvalues.size(); ++i) {
    const double lambda = e.eigenvalues[i];
    if (lambda < -tol) {
      std::ostringstream msg;
      msg << "eigenvalue " << lambda << " is below -" << tol;
      throw NotPSD(msg.str());
    }
    if (lambda > tol) keep.push_back(i);
  }
  if (keep.empty()) {
    throw AllComponentsNull("every eigenvalue is at or below the null tolerance");
  }
  EigenDecomposition out;
  out.basis = DenseMatrix(keep.size(), e.basis.cols());
  for (std::size_t r = 0; r < keep.size(); ++r) {
    out.eigenvalues.push_back(e.eigenvalues[keep[r]]);
    for (std::size_t j = 0; j < e.basis.cols(); ++j) {
      out.basis(r, j) = e.basis(keep[r], j);
    }
  }
  return out;
}

}  // namespace rdp
