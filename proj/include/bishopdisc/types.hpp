#pragma once

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace bishopdisc {

using cplx = std::complex<double>;

// Point-wise linear algebra lives in ℝ^{2n} / ℂ^n with n ≤ 6, so the small
// types carry a compile-time upper bound and never touch the heap.
inline constexpr int kMaxComplexDim = 6;
inline constexpr int kMaxRealDim = 2 * kMaxComplexDim;

using RVec = Eigen::Matrix<double, Eigen::Dynamic, 1, 0, kMaxRealDim, 1>;
using RMat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, 0, kMaxRealDim, kMaxRealDim>;
using CVec = Eigen::Matrix<cplx, Eigen::Dynamic, 1, 0, kMaxComplexDim, 1>;
using CMat = Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic, 0, kMaxComplexDim, kMaxComplexDim>;

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An iterative solver stopped without meeting its tolerance.
class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, double residual, int iterations)
      : Error(what), residual_(residual), iterations_(iterations) {}
  double residual() const { return residual_; }
  int iterations() const { return iterations_; }

 private:
  double residual_;
  int iterations_;
};

// Real coordinates are ordered (x1, y1, ..., xn, yn) with z_k = x_k + i y_k.
inline RVec to_real(const CVec& z) {
  RVec x(2 * z.size());
  for (Eigen::Index k = 0; k < z.size(); ++k) {
    x[2 * k] = z[k].real();
    x[2 * k + 1] = z[k].imag();
  }
  return x;
}

inline CVec to_complex(const RVec& x) {
  CVec z(x.size() / 2);
  for (Eigen::Index k = 0; k < z.size(); ++k) z[k] = cplx(x[2 * k], x[2 * k + 1]);
  return z;
}

/// J_st: block diagonal [[0,-1],[1,0]], i.e. multiplication by i.
inline RMat standard_structure_matrix(int n) {
  RMat j = RMat::Zero(2 * n, 2 * n);
  for (int k = 0; k < n; ++k) {
    j(2 * k, 2 * k + 1) = -1.0;
    j(2 * k + 1, 2 * k) = 1.0;
  }
  return j;
}

/// Real 2n×2n matrix of the complex-linear map v ↦ a v.
inline RMat realify_linear(const CMat& a) {
  RMat r(2 * a.rows(), 2 * a.cols());
  for (Eigen::Index p = 0; p < a.rows(); ++p)
    for (Eigen::Index q = 0; q < a.cols(); ++q) {
      const double re = a(p, q).real(), im = a(p, q).imag();
      r(2 * p, 2 * q) = re;
      r(2 * p, 2 * q + 1) = -im;
      r(2 * p + 1, 2 * q) = im;
      r(2 * p + 1, 2 * q + 1) = re;
    }
  return r;
}

/// Real 2n×2n matrix of the anti-linear map v ↦ a v̄.
/// Each 2×2 block of a_pq = α + iβ is [[α, β], [β, -α]].
inline RMat realify_antilinear(const CMat& a) {
  RMat r(2 * a.rows(), 2 * a.cols());
  for (Eigen::Index p = 0; p < a.rows(); ++p)
    for (Eigen::Index q = 0; q < a.cols(); ++q) {
      const double al = a(p, q).real(), be = a(p, q).imag();
      r(2 * p, 2 * q) = al;
      r(2 * p, 2 * q + 1) = be;
      r(2 * p + 1, 2 * q) = be;
      r(2 * p + 1, 2 * q + 1) = -al;
    }
  return r;
}

/// Inverse of realify_antilinear on the anti-linear part of a real matrix
/// (the J_st-commuting part is discarded). α = (p - s)/2, β = (q + r)/2 per block.
inline CMat complexify_antilinear(const RMat& r) {
  CMat a(r.rows() / 2, r.cols() / 2);
  for (Eigen::Index p = 0; p < a.rows(); ++p)
    for (Eigen::Index q = 0; q < a.cols(); ++q) {
      const double al = 0.5 * (r(2 * p, 2 * q) - r(2 * p + 1, 2 * q + 1));
      const double be = 0.5 * (r(2 * p, 2 * q + 1) + r(2 * p + 1, 2 * q));
      a(p, q) = cplx(al, be);
    }
  return a;
}

/// Projection of a real matrix onto its J_st-anti-linear part, (L + J L J)/2.
inline RMat antilinear_part(const RMat& l) {
  const RMat j = standard_structure_matrix(static_cast<int>(l.rows() / 2));
  return 0.5 * (l + j * l * j);
}

inline double max_abs(const RMat& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

}  // namespace bishopdisc
