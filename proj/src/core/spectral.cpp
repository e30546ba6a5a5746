#include "lossynet/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "lossynet/errors.hpp"

namespace lossynet {

namespace {

constexpr int kMaxSweeps = 100;
constexpr double kOffDiagonalTolerance = 1e-12;

double off_diagonal_norm(const DenseMatrix& a) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < a.size(); ++j) {
      if (i != j) s += a(i, j) * a(i, j);
    }
  }
  return std::sqrt(s);
}

void rotate(DenseMatrix& a, std::size_t p, std::size_t q) {
  const double apq = a(p, q);
  if (apq == 0.0) return;
  const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
  // tan of the rotation angle; the smaller root keeps the rotation stable.
  double t = 0.0;
  if (std::abs(theta) > 1e150) {
    t = 0.5 / theta;
  } else {
    t = (theta >= 0.0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
  }
  const double c = 1.0 / std::sqrt(t * t + 1.0);
  const double s = t * c;
  const std::size_t n = a.size();
  const double app = a(p, p);
  const double aqq = a(q, q);
  for (std::size_t k = 0; k < n; ++k) {
    if (k == p || k == q) continue;
    const double akp = a(k, p);
    const double akq = a(k, q);
    const double new_kp = c * akp - s * akq;
    const double new_kq = s * akp + c * akq;
    a(k, p) = new_kp;
    a(p, k) = new_kp;
    a(k, q) = new_kq;
    a(q, k) = new_kq;
  }
  a(p, p) = app - t * apq;
  a(q, q) = aqq + t * apq;
  a(p, q) = 0.0;
  a(q, p) = 0.0;
}

}  // namespace

std::vector<double> symmetric_eigenvalues(DenseMatrix a) {
  const std::size_t n = a.size();
  const double scale = a.norm();
  if (!a.is_symmetric(1e-12 * std::max(scale, 1.0))) {
    throw DomainError("symmetric_eigenvalues: matrix is not symmetric");
  }
  const double target = kOffDiagonalTolerance * scale;
  int sweep = 0;
  while (off_diagonal_norm(a) > target) {
    if (++sweep > kMaxSweeps) {
      throw NumericError("Jacobi eigensolver did not converge in " + std::to_string(kMaxSweeps) +
                         " sweeps");
    }
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) rotate(a, p, q);
    }
  }
  std::vector<double> values(n);
  for (std::size_t i = 0; i < n; ++i) values[i] = a(i, i);
  std::sort(values.begin(), values.end());
  return values;
}

std::vector<double> laplacian_spectrum(const WeightedGraph& g) {
  return symmetric_eigenvalues(laplacian(g));
}

namespace {

std::size_t count_zeros(const std::vector<double>& values) {
  if (values.empty()) return 0;
  const double tol = 1e-9 * std::max(1.0, std::abs(values.back()));
  return static_cast<std::size_t>(
      std::count_if(values.begin(), values.end(), [tol](double v) { return std::abs(v) <= tol; }));
}

}  // namespace

std::size_t zero_eigenvalue_multiplicity(const WeightedGraph& g) {
  return count_zeros(laplacian_spectrum(g));
}

SpectralSummary spectral_bounds(const WeightedGraph& g) {
  if (g.node_count() < 2) throw DomainError("spectral_bounds: need at least two nodes");
  const auto values = laplacian_spectrum(g);
  const auto zeros = count_zeros(values);
  if (zeros != 1) {
    throw DomainError("spectral_bounds: graph is disconnected (zero eigenvalue multiplicity " +
                      std::to_string(zeros) + ")");
  }
  SpectralSummary s;
  s.lambda2 = values[1];
  s.lambda_n = values.back();
  s.ratio = s.lambda2 / (s.lambda_n * s.lambda_n);
  return s;
}

}  // namespace lossynet
