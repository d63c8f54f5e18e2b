// Copyright 2026 The sqw Authors
//
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

#pragma once

#include <complex>
#include <cstddef>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace sqw {

using Complex = std::complex<double>;
using Vertex = std::size_t;

// Dense operator on the vertex space. Unitarity/Hermiticity are checked by the
// predicates below rather than carried as flags.
using Operator = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealMatrix = Eigen::MatrixXd;

namespace tol {
// Construction-time numeric tolerance (normalization, Gram identity).
inline constexpr double kConstruct = 1e-12;
// Verification tolerance (unitarity, involution, oracle comparisons).
inline constexpr double kVerify = 1e-10;
// Eigenvalue clustering when extracting the +1 eigenspace.
inline constexpr double kEigenCluster = 1e-8;
// Singular-value classification into {0}, (0,1), {1}.
inline constexpr double kSingular = 1e-9;
}  // namespace tol

class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& message) : std::runtime_error(message) {}
};

// Precondition violations and malformed input.
class InvalidArgument : public Error {
 public:
  explicit InvalidArgument(const std::string& message) : Error(message) {}
};

// A structural or numeric invariant of a domain object does not hold.
class ValidationError : public Error {
 public:
  explicit ValidationError(const std::string& message) : Error(message) {}
};

// Numerical routine produced something outside its guaranteed envelope.
class NumericError : public Error {
 public:
  explicit NumericError(const std::string& message) : Error(message) {}
};

inline double max_abs(const Operator& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

inline double max_abs_diff(const Operator& a, const Operator& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw InvalidArgument("max_abs_diff: shape mismatch");
  }
  return max_abs(a - b);
}

inline bool is_unitary(const Operator& u, double tolerance = tol::kVerify) {
  if (u.rows() != u.cols()) return false;
  const auto n = u.rows();
  return max_abs(u.adjoint() * u - Operator::Identity(n, n)) <= tolerance;
}

inline bool is_hermitian(const Operator& u, double tolerance = tol::kConstruct) {
  if (u.rows() != u.cols()) return false;
  return max_abs(u - u.adjoint()) <= tolerance;
}

}  // namespace sqw
