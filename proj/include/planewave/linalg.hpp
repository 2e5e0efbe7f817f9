#pragma once

#include <Eigen/Dense>

#include <vector>

namespace planewave {

using Mat = Eigen::MatrixXd;
using Vec = Eigen::VectorXd;

inline double max_abs(const Mat& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

inline Mat symmetric_part(const Mat& m) { return 0.5 * (m + m.transpose()); }
inline Mat skew_part(const Mat& m) { return 0.5 * (m - m.transpose()); }

inline Mat commutator(const Mat& a, const Mat& b) { return a * b - b * a; }

bool is_symmetric(const Mat& m, double tol = 1e-10);
bool is_skew(const Mat& m, double tol = 1e-10);

/// Basis E_ab = e_a e_bᵀ − e_b e_aᵀ (a < b) of so(n), in lexicographic order.
std::vector<Mat> skew_basis(int n);
Mat skew_from_coords(const Vec& coords, int n);
Vec coords_from_skew(const Mat& w);

/// Upper-triangular entries (diagonal included) of a symmetric matrix, stacked.
Vec symmetric_entries(const Mat& m);

/// Right null space of `a` by SVD; singular values below `rel_tol` times the
/// largest count as zero. Columns are orthonormal.
struct NullSpace {
  Mat basis;
  Vec singular_values;
  double smallest_ratio = 0.0;
};
NullSpace null_space(const Mat& a, double rel_tol);

/// Principal square root of a symmetric positive definite matrix.
Mat spd_sqrt(const Mat& m);

/// Orthogonal factor Q of the polar decomposition M = Q·S.
Mat orthogonal_polar_factor(const Mat& m);

/// Matrix exponential for small dense matrices.
Mat expm(const Mat& m);

/// Smallest eigenvalue of a symmetric matrix.
double min_eigenvalue(const Mat& m);

}  // namespace planewave
