#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <random>
#include <stdexcept>
#include <string>

namespace interact {

using cplx = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;

struct Tolerance {
  double eps = 1e-9;

  Tolerance() = default;
  explicit Tolerance(double e) : eps(e) {
    if (!(e > 0.0)) throw std::invalid_argument("tolerance must be positive");
  }
};

class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DescriptorMismatch : public std::invalid_argument {
 public:
  DescriptorMismatch() : std::invalid_argument("algebra descriptors differ") {}
  using std::invalid_argument::invalid_argument;
};

namespace detail {

inline double rel(double residual, double scale) {
  return residual / std::max(1.0, scale);
}

inline double op_norm(const Mat& m) {
  if (m.size() == 0) return 0.0;
  Eigen::JacobiSVD<Mat> svd(m);
  return svd.singularValues()(0);
}

inline double min_singular(const Mat& m) {
  if (m.cols() == 0) return std::numeric_limits<double>::infinity();
  if (m.rows() < m.cols()) return 0.0;
  Eigen::JacobiSVD<Mat> svd(m);
  return svd.singularValues()(m.cols() - 1);
}

inline double min_eigenvalue(const Mat& h) {
  if (h.size() == 0) return 0.0;
  Mat herm = 0.5 * (h + h.adjoint());
  Eigen::SelfAdjointEigenSolver<Mat> es(herm, Eigen::EigenvaluesOnly);
  return es.eigenvalues()(0);
}

// Orthonormal basis (as columns) for the span of the columns of m, keeping
// singular directions above rel_tol * sigma_max.
inline Mat column_basis(const Mat& m, double rel_tol) {
  if (m.cols() == 0 || m.rows() == 0) return Mat(m.rows(), 0);
  Eigen::JacobiSVD<Mat> svd(m, Eigen::ComputeThinU);
  const auto& s = svd.singularValues();
  double smax = s.size() ? s(0) : 0.0;
  if (!(smax > 0.0)) return Mat(m.rows(), 0);
  Eigen::Index k = 0;
  while (k < s.size() && s(k) > rel_tol * smax) ++k;
  return svd.matrixU().leftCols(k);
}

// Rotate each column so that its first entry of maximal modulus is real and positive.
inline void fix_phases(Mat& u) {
  for (Eigen::Index k = 0; k < u.cols(); ++k) {
    double big = u.col(k).cwiseAbs().maxCoeff();
    if (!(big > 0.0)) continue;
    Eigen::Index i = 0;
    while (std::abs(u(i, k)) < big - 1e-9) ++i;
    u.col(k) *= std::conj(u(i, k)) / std::abs(u(i, k));
  }
}

// Re-express the span of the orthonormal columns of u by greedily projecting
// the standard basis vectors, so that coordinate-aligned subspaces come out as
// plain standard vectors. Deterministic: ties go to the lowest index.
inline Mat canonical_basis(const Mat& u) {
  const Eigen::Index n = u.rows(), k = u.cols();
  if (k == 0) return u;
  Mat cand = u * u.adjoint();
  Mat out(n, k);
  for (Eigen::Index c = 0; c < k; ++c) {
    Eigen::Index best = -1;
    double best_norm = -1.0;
    for (Eigen::Index j = 0; j < n; ++j) {
      double nj = cand.col(j).norm();
      if (nj > best_norm * (1.0 + 1e-12) + 1e-15) {
        best = j;
        best_norm = nj;
      }
    }
    Vec v = cand.col(best) / best_norm;
    out.col(c) = v;
    cand -= v * (v.adjoint() * cand);
  }
  return out;
}

inline Mat null_space(const Mat& m, double rel_tol) {
  const Eigen::Index n = m.cols();
  if (n == 0) return Mat(0, 0);
  if (m.rows() == 0) return Mat::Identity(n, n);
  Eigen::JacobiSVD<Mat> svd(m, Eigen::ComputeFullV);
  const auto& s = svd.singularValues();
  double smax = s.size() ? s(0) : 0.0;
  Eigen::Index rank = 0;
  if (smax > 0.0)
    while (rank < s.size() && s(rank) > rel_tol * smax) ++rank;
  return svd.matrixV().rightCols(n - rank);
}

// Null space keeping singular values at or below an absolute threshold.
inline Mat null_space_abs(const Mat& m, double thresh) {
  const Eigen::Index n = m.cols();
  if (n == 0) return Mat(0, 0);
  if (m.rows() == 0) return Mat::Identity(n, n);
  Eigen::JacobiSVD<Mat> svd(m, Eigen::ComputeFullV);
  const auto& s = svd.singularValues();
  Eigen::Index rank = 0;
  while (rank < s.size() && s(rank) > thresh) ++rank;
  return svd.matrixV().rightCols(n - rank);
}

// Least-squares solution of minimum norm.
inline Vec lstsq(const Mat& a, const Vec& b, double rel_tol = 1e-12) {
  Eigen::CompleteOrthogonalDecomposition<Mat> cod(a);
  cod.setThreshold(rel_tol);
  return cod.solve(b);
}

inline Vec vec(const Mat& m) {
  return Eigen::Map<const Vec>(m.data(), m.size());
}

inline Mat unvec(const Vec& v, Eigen::Index rows, Eigen::Index cols) {
  return Eigen::Map<const Mat>(v.data(), rows, cols);
}

inline Mat random_matrix(Eigen::Index rows, Eigen::Index cols,
                         std::mt19937_64& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  Mat m(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j)
    for (Eigen::Index i = 0; i < rows; ++i) {
      double re = g(rng);
      double im = g(rng);
      m(i, j) = cplx(re, im);
    }
  return m;
}

}  // namespace detail
}  // namespace interact
