#include "bayesmi/pca.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace bayesmi {
namespace {

// Cyclic Jacobi eigendecomposition of a symmetric matrix. Returns
// eigenvalues in `values`; eigenvectors are the columns of `vectors`.
void jacobi_eigen(Matrix a, std::vector<double>& values, Matrix& vectors) {
  const std::size_t n = a.rows();
  vectors = Matrix(n, n);
  for (std::size_t i = 0; i < n; ++i) vectors(i, i) = 1.0;

  double frob2 = 0.0;
  for (double x : a.data()) frob2 += x * x;
  const double tol = 1e-28 * std::max(frob2, 1e-300);

  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    for (std::size_t p = 0; p < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) off += a(p, q) * a(p, q);
    }
    if (off < tol) break;

    for (std::size_t p = 0; p < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        if (a(p, q) == 0.0) continue;
        const double theta = (a(q, q) - a(p, p)) / (2.0 * a(p, q));
        const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                         (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (std::size_t i = 0; i < n; ++i) {
          const double aip = a(i, p);
          const double aiq = a(i, q);
          a(i, p) = c * aip - s * aiq;
          a(i, q) = s * aip + c * aiq;
        }
        for (std::size_t i = 0; i < n; ++i) {
          const double api = a(p, i);
          const double aqi = a(q, i);
          a(p, i) = c * api - s * aqi;
          a(q, i) = s * api + c * aqi;
        }
        for (std::size_t i = 0; i < n; ++i) {
          const double vip = vectors(i, p);
          const double viq = vectors(i, q);
          vectors(i, p) = c * vip - s * viq;
          vectors(i, q) = s * vip + c * viq;
        }
      }
    }
  }
  values.resize(n);
  for (std::size_t i = 0; i < n; ++i) values[i] = a(i, i);
}

}  // namespace

Matrix pca_projection(const Matrix& features) {
  const std::size_t n = features.rows();
  const std::size_t d = features.cols();
  if (n < 2 || d < 2) {
    throw std::invalid_argument("pca_projection: need at least 2 rows and 2 columns");
  }

  Matrix centered(n, d);
  for (std::size_t j = 0; j < d; ++j) {
    double mean = 0.0;
    for (std::size_t i = 0; i < n; ++i) mean += features(i, j);
    mean /= static_cast<double>(n);
    for (std::size_t i = 0; i < n; ++i) centered(i, j) = features(i, j) - mean;
  }

  Matrix cov(d, d);
  for (std::size_t j = 0; j < d; ++j) {
    for (std::size_t k = j; k < d; ++k) {
      double sum = 0.0;
      for (std::size_t i = 0; i < n; ++i) sum += centered(i, j) * centered(i, k);
      cov(j, k) = cov(k, j) = sum / static_cast<double>(n);
    }
  }

  std::vector<double> eigenvalues;
  Matrix eigenvectors;
  jacobi_eigen(cov, eigenvalues, eigenvectors);

  // Indices of the two largest eigenvalues.
  std::size_t top[2] = {0, 0};
  for (std::size_t j = 1; j < d; ++j) {
    if (eigenvalues[j] > eigenvalues[top[0]]) top[0] = j;
  }
  top[1] = top[0] == 0 ? 1 : 0;
  for (std::size_t j = 0; j < d; ++j) {
    if (j != top[0] && eigenvalues[j] > eigenvalues[top[1]]) top[1] = j;
  }

  const double leading = std::max(eigenvalues[top[0]], 0.0);
  Matrix projection(n, 2);
  for (int comp = 0; comp < 2; ++comp) {
    const std::size_t j = top[comp];
    // Rank deficiency: zero-fill the component instead of projecting noise.
    if (eigenvalues[j] <= 1e-12 * leading || eigenvalues[j] <= 0.0) continue;

    double axis_sign = 1.0;
    double best = 0.0;
    for (std::size_t i = 0; i < d; ++i) {
      if (std::abs(eigenvectors(i, j)) > best) {
        best = std::abs(eigenvectors(i, j));
        axis_sign = eigenvectors(i, j) >= 0.0 ? 1.0 : -1.0;
      }
    }
    for (std::size_t i = 0; i < n; ++i) {
      double dot = 0.0;
      for (std::size_t k = 0; k < d; ++k) dot += centered(i, k) * eigenvectors(k, j);
      projection(i, comp) = axis_sign * dot;
    }
  }
  return projection;
}

}  // namespace bayesmi
