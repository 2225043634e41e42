#pragma once

#include <Eigen/Dense>
#include <complex>

namespace rff {

using Complex = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;
using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;

inline constexpr double kAlgebraTol = 1e-12;  // absolute, for 8/16-dim products

inline Mat kron(const Mat& a, const Mat& b) {
  Mat out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

inline Mat commutator(const Mat& a, const Mat& b) { return a * b - b * a; }
inline Mat anticommutator(const Mat& a, const Mat& b) { return a * b + b * a; }

inline double max_abs(const Mat& a) { return a.cwiseAbs().maxCoeff(); }

inline bool is_hermitian(const Mat& a, double tol = kAlgebraTol) {
  return max_abs(a - a.adjoint()) < tol;
}

inline bool is_projector(const Mat& p, double tol = kAlgebraTol) {
  return is_hermitian(p, tol) && max_abs(p * p - p) < tol;
}

inline bool is_unit_vector(const Vec& v, double tol = kAlgebraTol) {
  return std::abs(v.norm() - 1.0) < tol;
}

// Trace-one, Hermitian, eigenvalues >= -eig_tol.
inline bool is_density_matrix(const Mat& rho, double tol = kAlgebraTol,
                              double eig_tol = 1e-10) {
  if (!is_hermitian(rho, tol)) return false;
  if (std::abs(rho.trace().real() - 1.0) > tol) return false;
  Eigen::SelfAdjointEigenSolver<Mat> es(rho, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff() >= -eig_tol;
}

inline double real_trace(const Mat& a) { return a.trace().real(); }

inline double expectation(const Mat& op, const Mat& rho) {
  return (op * rho).trace().real();
}

inline Complex expectation_c(const Mat& op, const Mat& rho) {
  return (op * rho).trace();
}

}  // namespace rff
