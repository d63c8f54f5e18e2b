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

#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "sqw/types.hpp"

namespace sqw {

/// Complex amplitude per vertex with unit 2-norm.
class StateVector {
 public:
  StateVector() = default;

  /// Renormalizes; throws InvalidArgument on a zero or non-finite vector.
  explicit StateVector(ComplexVector amplitudes) : amplitudes_(std::move(amplitudes)) {
    const double norm = amplitudes_.norm();
    if (!(norm > 0.0) || !std::isfinite(norm)) {
      throw InvalidArgument("state vector cannot be normalized");
    }
    amplitudes_ /= norm;
  }

  static StateVector basis(std::size_t n, Vertex k) {
    if (k >= n) throw InvalidArgument("basis state index out of range");
    ComplexVector v = ComplexVector::Zero(static_cast<Eigen::Index>(n));
    v(static_cast<Eigen::Index>(k)) = 1.0;
    return StateVector(std::move(v));
  }

  /// Wraps an already-unit vector without rescaling it, so that norm drift
  /// stays observable. Throws NumericError beyond tol::kVerify.
  static StateVector assume_unit(ComplexVector amplitudes) {
    const double drift = std::abs(amplitudes.norm() - 1.0);
    if (drift > tol::kVerify) {
      throw NumericError("state norm drifted by " + std::to_string(drift));
    }
    StateVector s;
    s.amplitudes_ = std::move(amplitudes);
    return s;
  }

  const ComplexVector& amplitudes() const { return amplitudes_; }
  std::size_t size() const { return static_cast<std::size_t>(amplitudes_.size()); }
  Complex operator[](std::size_t k) const { return amplitudes_(static_cast<Eigen::Index>(k)); }

 private:
  ComplexVector amplitudes_;
};

inline StateVector uniform_state(std::size_t n) {
  if (n == 0) throw InvalidArgument("uniform_state: n must be positive");
  const auto dim = static_cast<Eigen::Index>(n);
  return StateVector::assume_unit(
      ComplexVector::Constant(dim, Complex(1.0 / std::sqrt(static_cast<double>(n)), 0.0)));
}

/// psi(0..steps) by repeated application of u. Unitarity is checked once.
inline std::vector<StateVector> evolve(const Operator& u, const StateVector& psi0,
                                       std::size_t steps) {
  if (u.rows() != u.cols() || static_cast<std::size_t>(u.rows()) != psi0.size()) {
    throw InvalidArgument("evolve: operator and state dimensions differ");
  }
  if (!is_unitary(u)) throw InvalidArgument("evolve: operator is not unitary");
  std::vector<StateVector> out;
  out.reserve(steps + 1);
  out.push_back(psi0);
  ComplexVector current = psi0.amplitudes();
  for (std::size_t t = 0; t < steps; ++t) {
    current = u * current;
    out.push_back(StateVector::assume_unit(current));
  }
  return out;
}

/// Born-rule probabilities |psi_k|^2 of a unit vector; throws InvalidArgument
/// if the norm is off by more than 1e-12.
inline std::vector<double> vertex_distribution(const ComplexVector& psi) {
  std::vector<double> p(static_cast<std::size_t>(psi.size()));
  double total = 0.0;
  for (Eigen::Index k = 0; k < psi.size(); ++k) {
    p[static_cast<std::size_t>(k)] = std::norm(psi(k));
    total += p[static_cast<std::size_t>(k)];
  }
  if (std::abs(total - 1.0) > tol::kConstruct) {
    throw InvalidArgument("vertex_distribution: state is not normalized");
  }
  return p;
}

inline std::vector<double> vertex_distribution(const StateVector& psi) {
  return vertex_distribution(psi.amplitudes());
}

struct HittingTimeResult {
  // Smallest qualifying step count; empty when no T <= t_max qualifies.
  std::optional<std::size_t> T;
  // trace[t] = (1/(t+1)) sum_{s<=t} ||psi(s) - psi(0)||^2 for t = 0..T, or
  // 0..t_max when not converged.
  std::vector<double> trace;
  double threshold = 0.0;
  bool converged = false;
};

inline std::size_t default_t_max(std::size_t n) { return 10 * n * n; }

/// Smallest T with (1/(T+1)) sum_{t=0}^{T} ||psi(t) - psi(0)||^2 >= 1 - |M|/N,
/// psi(t) = U_M^t psi(0). The running sum uses Neumaier compensation.
inline HittingTimeResult hitting_time(const Operator& u_m, const StateVector& psi0,
                                      std::size_t marked_count, std::size_t n,
                                      std::size_t t_max) {
  if (marked_count == 0 || marked_count > n) {
    throw InvalidArgument("hitting_time: need 0 < |M| <= N");
  }
  if (u_m.rows() != u_m.cols() || static_cast<std::size_t>(u_m.rows()) != psi0.size()) {
    throw InvalidArgument("hitting_time: operator and state dimensions differ");
  }
  if (!is_unitary(u_m)) throw InvalidArgument("hitting_time: operator is not unitary");

  HittingTimeResult result;
  result.threshold = 1.0 - static_cast<double>(marked_count) / static_cast<double>(n);
  const ComplexVector& start = psi0.amplitudes();
  ComplexVector current = start;
  double sum = 0.0;
  double compensation = 0.0;
  for (std::size_t t = 0; t <= t_max; ++t) {
    if (t > 0) current = u_m * current;
    const double term = (current - start).squaredNorm();
    const double next = sum + term;
    compensation += std::abs(sum) >= std::abs(term) ? (sum - next) + term
                                                    : (term - next) + sum;
    sum = next;
    const double average = (sum + compensation) / static_cast<double>(t + 1);
    result.trace.push_back(average);
    if (average >= result.threshold) {
      result.T = t;
      result.converged = true;
      break;
    }
  }
  return result;
}

}  // namespace sqw
