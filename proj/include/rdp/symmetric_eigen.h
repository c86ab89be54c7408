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

// Dense symmetric eigendecomposition by cyclic Jacobi rotations. Intended for
// covariance matrices of modest dimension (tens of components).

#ifndef RDP_SYMMETRIC_EIGEN_H_
#define RDP_SYMMETRIC_EIGEN_H_

#include <cstddef>
#include <span>
#include <vector>

namespace rdp {

// Row-major dense matrix.
class DenseMatrix {
 public:
  DenseMatrix() = default;
  DenseMatrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), data_(rows * cols, 0.0) {}

  static DenseMatrix Identity(std::size_t n);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  double operator()(std::size_t i, std::size_t j) const {
    return data_[i * cols_ + j];
  }
  double& operator()(std::size_t i, std::size_t j) {
    return data_[i * cols_ + j];
  }

  std::span<const double> row(std::size_t i) const {
    return {data_.data() + i * cols_, cols_};
  }

  // Largest absolute entry; 0 for an empty matrix.
  double MaxAbs() const;

  friend bool operator==(const DenseMatrix&, const DenseMatrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

// Square matrix expected to be symmetric. Symmetry is checked by Decompose,
// not on construction, so that malformed user input can be reported there.
class SymMatrix {
 public:
  explicit SymMatrix(std::size_t dim) : entries_(dim, dim) {}

  // Throws DomainError if `rows` is not square.
  static SymMatrix FromRows(const std::vector<std::vector<double>>& rows);
  static SymMatrix Diagonal(std::span<const double> diag);

  std::size_t dim() const { return entries_.rows(); }
  double operator()(std::size_t i, std::size_t j) const {
    return entries_(i, j);
  }
  double& operator()(std::size_t i, std::size_t j) { return entries_(i, j); }
  const DenseMatrix& entries() const { return entries_; }

 private:
  DenseMatrix entries_;
};

// m = basis^T * diag(eigenvalues) * basis. Rows of `basis` are the
// eigenvectors; eigenvalues are sorted in descending order.
struct EigenDecomposition {
  std::vector<double> eigenvalues;
  DenseMatrix basis;
};

// Relative tolerance on |m(i,j) - m(j,i)| / max|m|.
inline constexpr double kSymmetryTolerance = 1e-12;

// Throws DimensionZero for an empty matrix, NotSymmetric when the symmetry
// tolerance is violated, ConvergenceFailure if 100 sweeps do not suffice.
EigenDecomposition Decompose(const SymMatrix& m);

// Drops eigenpairs with eigenvalue <= tol (absolute). Eigenvalues below -tol
// raise NotPSD; those in [-tol, 0] are treated as zero and dropped. Throws
// AllComponentsNull when nothing survives.
EigenDecomposition StripNullComponents(const EigenDecomposition& e,
                                       double tol);

}  // namespace rdp

#endif  // RDP_SYMMETRIC_EIGEN_H_
