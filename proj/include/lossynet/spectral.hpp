#pragma once

#include <vector>

#include "lossynet/graph.hpp"

namespace lossynet {

struct SpectralSummary {
  double lambda2 = 0.0;   // smallest non-zero Laplacian eigenvalue
  double lambda_n = 0.0;  // largest Laplacian eigenvalue
  double ratio = 0.0;     // lambda2 / lambda_n^2

  bool operator==(const SpectralSummary&) const = default;
};

/// Eigenvalues of a symmetric matrix in ascending order, by cyclic Jacobi
/// rotations. Sweeps until the off-diagonal Frobenius norm drops below
/// 1e-12 * ||A||_F. Throws DomainError if `a` is not symmetric and
/// NumericError if the sweep budget is exhausted.
std::vector<double> symmetric_eigenvalues(DenseMatrix a);

/// Ascending eigenvalues of the weighted Laplacian of `g`.
std::vector<double> laplacian_spectrum(const WeightedGraph& g);

/// Number of Laplacian eigenvalues that are zero up to the solver accuracy.
/// Equals the number of connected components.
std::size_t zero_eigenvalue_multiplicity(const WeightedGraph& g);

/// lambda2 and lambda_n of the weighted Laplacian. Throws DomainError when
/// the zero eigenvalue is not simple (disconnected graph).
SpectralSummary spectral_bounds(const WeightedGraph& g);

}  // namespace lossynet
