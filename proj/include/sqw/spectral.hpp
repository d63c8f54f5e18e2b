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

#include <algorithm>
#include <cmath>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/SVD>

#include "sqw/staggered.hpp"
#include "sqw/tessellation.hpp"
#include "sqw/types.hpp"

namespace sqw {

/// D_{kk'} = <alpha_k|beta'_k'>.
inline Operator discriminant(const Tessellation& alpha, const Tessellation& beta_prime) {
  Operator d(static_cast<Eigen::Index>(alpha.size()),
             static_cast<Eigen::Index>(beta_prime.size()));
  for (std::size_t k = 0; k < alpha.size(); ++k) {
    for (std::size_t l = 0; l < beta_prime.size(); ++l) {
      d(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(l)) =
          alpha.polygons[k].inner(beta_prime.polygons[l]);
    }
  }
  return d;
}

enum class SpectralClass { kComplex, kMinusOne, kPlusOne, kResidual };

inline const char* to_string(SpectralClass c) {
  switch (c) {
    case SpectralClass::kComplex: return "complex";
    case SpectralClass::kMinusOne: return "minus_one";
    case SpectralClass::kPlusOne: return "plus_one";
    case SpectralClass::kResidual: return "residual";
  }
  return "unknown";
}

struct EigenPair {
  Complex value;
  ComplexVector vector;
  SpectralClass kind;
  std::optional<double> angle;  // theta_j for the complex pairs
};

/// Eigensystem of U_M = U'_1 U_0 reconstructed from the SVD of the
/// discriminant. The subspace orthogonal to both polygon spans (eigenvalue
/// +1) is reported by dimension only.
struct SpectralDecomposition {
  std::size_t dimension = 0;
  Operator d;
  Operator a_basis;  // N x m, columns alpha_k
  Operator b_basis;  // N x n, columns beta'_k'
  Eigen::VectorXd singular_values;  // descending
  Operator left;   // m x m, columns mu_j
  Operator right;  // n x n, columns nu_j
  std::vector<double> angles;  // theta_j in (0, pi/2), j = 1..s
  std::size_t zero_left = 0;   // dim of A ∩ B^perp
  std::size_t zero_right = 0;  // dim of A^perp ∩ B
  std::size_t unit = 0;        // dim of A ∩ B
  std::vector<EigenPair> pairs;
  std::size_t residual_subspace_dim = 0;

  /// Every eigenvalue with multiplicity, residual +1's included.
  std::vector<Complex> eigenvalues() const {
    std::vector<Complex> out;
    out.reserve(pairs.size() + residual_subspace_dim);
    for (const auto& p : pairs) out.push_back(p.value);
    out.insert(out.end(), residual_subspace_dim, Complex(1.0, 0.0));
    return out;
  }
};

namespace detail {

// Modified Gram-Schmidt over pairs sharing (numerically) one eigenvalue.
inline void orthonormalize_degenerate(std::vector<EigenPair>& pairs, std::size_t first) {
  for (std::size_t i = first; i < pairs.size(); ++i) {
    for (std::size_t j = first; j < i; ++j) {
      if (std::abs(pairs[i].value - pairs[j].value) > tol::kEigenCluster) continue;
      pairs[i].vector -= pairs[j].vector.dot(pairs[i].vector) * pairs[j].vector;
    }
    const double norm = pairs[i].vector.norm();
    if (norm < 1e-6) throw NumericError("degenerate eigenvector block lost rank");
    pairs[i].vector /= norm;
  }
}

}  // namespace detail

/// Spectrum of U_M for two tessellations and a marked set. Singular values
/// sigma >= 1 - tol are unit, sigma <= tol are zero, the rest interior with
/// cos(theta_j) = sigma_j.
inline SpectralDecomposition spectral_decomposition(const Tessellation& alpha,
                                                    const Tessellation& beta,
                                                    const std::vector<Vertex>& marked,
                                                    std::size_t n,
                                                    double tolerance = tol::kSingular) {
  if (!(tolerance > 0.0)) throw InvalidArgument("spectral_decomposition: tol must be > 0");
  require_disjoint(alpha, n);
  require_disjoint(beta, n);
  const auto m = normalize_marked(marked, n);
  // With no marks beta' = -beta; the projectors agree, so raw beta is used.
  const Tessellation beta_prime = m.empty() ? beta : modified_beta(beta, m);

  SpectralDecomposition dec;
  dec.dimension = n;
  dec.d = discriminant(alpha, beta_prime);
  dec.a_basis = alpha.basis_matrix(n);
  dec.b_basis = beta_prime.basis_matrix(n);
  const Operator& a = dec.a_basis;
  const Operator& b = dec.b_basis;
  const Eigen::Index rows = dec.d.rows(), cols = dec.d.cols();

  Eigen::JacobiSVD<Operator> svd(dec.d, Eigen::ComputeFullU | Eigen::ComputeFullV);
  dec.singular_values = svd.singularValues();
  dec.left = svd.matrixU();
  dec.right = svd.matrixV();
  const Eigen::Index rank_slots = std::min(rows, cols);

  auto sigma = [&](Eigen::Index j) {
    return j < rank_slots ? dec.singular_values(j) : 0.0;
  };
  if (rank_slots > 0 && dec.singular_values(0) > 1.0 + tol::kVerify) {
    throw NumericError("discriminant singular value exceeds 1");
  }

  // Interior: e^{+-2i theta_j}, (A mu_j - e^{+-i theta_j} B nu_j) / (sqrt2 sin theta_j).
  for (Eigen::Index j = 0; j < rank_slots; ++j) {
    const double s = sigma(j);
    if (s >= 1.0 - tolerance || s <= tolerance) continue;
    const double theta = std::acos(s);
    dec.angles.push_back(theta);
    const ComplexVector a_mu = a * dec.left.col(j);
    const ComplexVector b_nu = b * dec.right.col(j);
    const double scale = std::sqrt(2.0) * std::sin(theta);
    for (double sign : {1.0, -1.0}) {
      const Complex half = std::polar(1.0, sign * theta);
      dec.pairs.push_back({std::polar(1.0, 2.0 * sign * theta),
                           (a_mu - half * b_nu) / scale, SpectralClass::kComplex,
                           theta});
    }
  }
  detail::orthonormalize_degenerate(dec.pairs, 0);

  // -1 from zero singular values on either side.
  for (Eigen::Index j = 0; j < rows; ++j) {
    if (sigma(j) <= tolerance) {
      dec.pairs.push_back({Complex(-1.0, 0.0), a * dec.left.col(j),
                           SpectralClass::kMinusOne, std::nullopt});
      ++dec.zero_left;
    }
  }
  for (Eigen::Index j = 0; j < cols; ++j) {
    if (sigma(j) <= tolerance) {
      dec.pairs.push_back({Complex(-1.0, 0.0), b * dec.right.col(j),
                           SpectralClass::kMinusOne, std::nullopt});
      ++dec.zero_right;
    }
  }
  // +1 on A ∩ B from unit singular values.
  for (Eigen::Index j = 0; j < rank_slots; ++j) {
    if (sigma(j) >= 1.0 - tolerance) {
      dec.pairs.push_back({Complex(1.0, 0.0), a * dec.left.col(j),
                           SpectralClass::kPlusOne, std::nullopt});
      ++dec.unit;
    }
  }

  if (dec.pairs.size() > n) {
    throw NumericError("reconstructed more eigenvectors than the dimension");
  }
  dec.residual_subspace_dim = n - dec.pairs.size();
  return dec;
}

inline SpectralDecomposition spectral_decomposition(std::span<const Tessellation> tessellations,
                                                    const std::vector<Vertex>& marked,
                                                    std::size_t n,
                                                    double tolerance = tol::kSingular) {
  if (tessellations.size() != 2) {
    throw InvalidArgument(
        "spectral decomposition is defined for exactly two tessellations; for "
        "more, diagonalize the evolution operator directly");
  }
  return spectral_decomposition(tessellations[0], tessellations[1], marked, n, tolerance);
}

struct EigensystemReport {
  double max_residual = 0.0;    // max ||U v - lambda v||
  double max_norm_error = 0.0;  // max | ||v|| - 1 |
  // dim(A^perp ∩ B^perp) from the rank of [A B], independent of the SVD
  // bookkeeping.
  std::size_t residual_dim_from_rank = 0;
  bool dimension_consistent = false;
  std::vector<std::string> failures;

  bool ok() const { return failures.empty(); }
};

inline EigensystemReport verify_eigensystem(const Operator& u_m,
                                            const SpectralDecomposition& dec,
                                            double tolerance) {
  EigensystemReport report;
  if (static_cast<std::size_t>(u_m.rows()) != dec.dimension || u_m.rows() != u_m.cols()) {
    report.failures.push_back("operator dimension differs from the decomposition");
    return report;
  }
  for (std::size_t i = 0; i < dec.pairs.size(); ++i) {
    const auto& p = dec.pairs[i];
    const double residual = (u_m * p.vector - p.value * p.vector).norm();
    const double norm_error = std::abs(p.vector.norm() - 1.0);
    report.max_residual = std::max(report.max_residual, residual);
    report.max_norm_error = std::max(report.max_norm_error, norm_error);
    if (residual > tolerance) {
      report.failures.push_back("pair " + std::to_string(i) + " residual " +
                                std::to_string(residual));
    }
    if (norm_error > tolerance) {
      report.failures.push_back("pair " + std::to_string(i) + " is not normalized");
    }
  }
  const std::size_t n = dec.dimension;
  Operator span(static_cast<Eigen::Index>(n), dec.a_basis.cols() + dec.b_basis.cols());
  span << dec.a_basis, dec.b_basis;
  Eigen::ColPivHouseholderQR<Operator> qr(span);
  qr.setThreshold(1e-9);
  const auto rank = static_cast<std::size_t>(qr.rank());
  report.residual_dim_from_rank = n - rank;
  report.dimension_consistent =
      dec.pairs.size() + dec.residual_subspace_dim == n &&
      report.residual_dim_from_rank == dec.residual_subspace_dim;
  if (!report.dimension_consistent) {
    report.failures.push_back("reconstructed dimension " + std::to_string(dec.pairs.size()) +
                              " + residual " + std::to_string(dec.residual_subspace_dim) +
                              " does not account for N = " + std::to_string(n) +
                              " (rank-based residual " +
                              std::to_string(report.residual_dim_from_rank) + ")");
  }
  return report;
}

}  // namespace sqw
