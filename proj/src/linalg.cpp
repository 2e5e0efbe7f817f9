#include "planewave/linalg.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <cmath>

#include "planewave/error.hpp"

namespace planewave {

bool is_symmetric(const Mat& m, double tol) {
  return m.rows() == m.cols() && max_abs(m - m.transpose()) <= tol * (1.0 + max_abs(m));
}

bool is_skew(const Mat& m, double tol) {
  return m.rows() == m.cols() && max_abs(m + m.transpose()) <= tol * (1.0 + max_abs(m));
}

std::vector<Mat> skew_basis(int n) {
  std::vector<Mat> basis;
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b) {
      Mat e = Mat::Zero(n, n);
      e(a, b) = 1.0;
      e(b, a) = -1.0;
      basis.push_back(std::move(e));
    }
  return basis;
}

Mat skew_from_coords(const Vec& coords, int n) {
  Mat w = Mat::Zero(n, n);
  int k = 0;
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b, ++k) {
      w(a, b) = coords(k);
      w(b, a) = -coords(k);
    }
  return w;
}

Vec coords_from_skew(const Mat& w) {
  const int n = static_cast<int>(w.rows());
  Vec c(n * (n - 1) / 2);
  int k = 0;
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b, ++k) c(k) = 0.5 * (w(a, b) - w(b, a));
  return c;
}

Vec symmetric_entries(const Mat& m) {
  const int n = static_cast<int>(m.rows());
  Vec out(n * (n + 1) / 2);
  int k = 0;
  for (int a = 0; a < n; ++a)
    for (int b = a; b < n; ++b, ++k) out(k) = m(a, b);
  return out;
}

NullSpace null_space(const Mat& a, double rel_tol) {
  const auto cols = a.cols();
  NullSpace out;
  if (cols == 0) {
    out.basis = Mat::Zero(0, 0);
    return out;
  }
  // Pad so the SVD always exposes a full set of right singular vectors.
  Mat padded = a;
  if (a.rows() < cols) {
    padded = Mat::Zero(cols, cols);
    padded.topRows(a.rows()) = a;
  }
  Eigen::JacobiSVD<Mat> svd(padded, Eigen::ComputeFullV);
  out.singular_values = svd.singularValues();
  const double largest = out.singular_values.size() ? out.singular_values(0) : 0.0;
  int rank = 0;
  for (Eigen::Index i = 0; i < out.singular_values.size(); ++i)
    if (largest > 0.0 && out.singular_values(i) >= rel_tol * largest) ++rank;
  out.basis = svd.matrixV().rightCols(cols - rank);
  const double smallest = out.singular_values(out.singular_values.size() - 1);
  out.smallest_ratio = largest > 0.0 ? smallest / largest : 0.0;
  return out;
}

Mat spd_sqrt(const Mat& m) {
  Eigen::SelfAdjointEigenSolver<Mat> es(symmetric_part(m));
  require(es.eigenvalues().minCoeff() > 0.0, ErrorCode::kPrecondition,
          "matrix is not positive definite");
  return es.eigenvectors() * es.eigenvalues().cwiseSqrt().asDiagonal() *
         es.eigenvectors().transpose();
}

Mat orthogonal_polar_factor(const Mat& m) {
  Eigen::JacobiSVD<Mat> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
  return svd.matrixU() * svd.matrixV().transpose();
}

Mat expm(const Mat& m) { return m.exp(); }

double min_eigenvalue(const Mat& m) {
  Eigen::SelfAdjointEigenSolver<Mat> es(symmetric_part(m), Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

}  // namespace planewave
