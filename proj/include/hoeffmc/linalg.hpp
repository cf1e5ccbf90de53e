#pragma once

// Dense helpers for L2(pi) geometry on a finite state space. Every pi-weighted
// quantity goes through the isometry h -> diag(sqrt(pi)) h onto Euclidean space.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <span>
#include <vector>

namespace hoeffmc {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

inline Vector to_vector(std::span<const double> xs) {
    Vector v(static_cast<Eigen::Index>(xs.size()));
    for (std::size_t i = 0; i < xs.size(); ++i) v(static_cast<Eigen::Index>(i)) = xs[i];
    return v;
}

inline std::vector<double> to_std(const Vector& v) { return {v.data(), v.data() + v.size()}; }

/// Rank-one projection Pi = 1 pi^T.
inline Matrix projection_kernel(const Vector& pi) {
    return Vector::Ones(pi.size()) * pi.transpose();
}

/// D T D^{-1} with D = diag(sqrt(pi)); the Euclidean image of an operator on L2(pi).
inline Matrix pi_similarity(const Vector& pi, const Matrix& op) {
    const Vector s = pi.cwiseSqrt();
    return s.asDiagonal() * op * s.cwiseInverse().asDiagonal();
}

/// Operator norm on L2(pi).
inline double pi_operator_norm(const Vector& pi, const Matrix& op) {
    if (op.size() == 0) return 0.0;
    Eigen::JacobiSVD<Matrix> svd(pi_similarity(pi, op));
    return svd.singularValues()(0);
}

inline double pi_inner(const Vector& pi, const Vector& h1, const Vector& h2) {
    return (pi.array() * h1.array() * h2.array()).sum();
}

inline double pi_norm(const Vector& pi, const Vector& h) { return std::sqrt(pi_inner(pi, h, h)); }

/// Orthonormal basis (columns) of the Euclidean complement of sqrt(pi), i.e. the
/// image of the mean-zero subspace L2_0(pi).
inline Matrix mean_zero_basis(const Vector& pi) {
    const Eigen::Index d = pi.size();
    Matrix a(d, 1);
    a.col(0) = pi.cwiseSqrt();
    Eigen::HouseholderQR<Matrix> qr(a);
    Matrix q = qr.householderQ() * Matrix::Identity(d, d);
    return q.rightCols(d - 1);
}

inline Matrix symmetrize(const Matrix& m) { return 0.5 * (m + m.transpose()); }

/// Spectral (l2-induced) norm.
inline double spectral_norm(const Matrix& m) {
    if (m.size() == 0) return 0.0;
    Eigen::JacobiSVD<Matrix> svd(m);
    return svd.singularValues()(0);
}

/// Maximum absolute column sum; equals the l1-induced norm.
inline double l1_operator_norm(const Matrix& m) {
    if (m.size() == 0) return 0.0;
    return m.cwiseAbs().colwise().sum().maxCoeff();
}

}  // namespace hoeffmc
