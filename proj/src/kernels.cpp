#include "encdec/kernels.hpp"

#include <vector>

namespace encdec::kernels {

namespace {

// Row of c = row of a times b, ikj order so the inner loop streams b rows.
inline void accumulate_row(const CMatrix& a, const CMatrix& b, CMatrix& c, int i) {
  const int k_dim = a.cols();
  const int n = b.cols();
  cplx* crow = &c(i, 0);
  for (int k = 0; k < k_dim; ++k) {
    const cplx aik = a(i, k);
    if (aik == cplx(0.0)) continue;
    const cplx* brow = &b(k, 0);
    for (int j = 0; j < n; ++j) crow[j] += aik * brow[j];
  }
}

inline void check_shapes(const CMatrix& a, const CMatrix& b) {
  if (a.cols() != b.rows()) throw DimensionMismatch("matmul: inner dimensions differ");
}

/// Planar (split real/imaginary) copy of a matrix, which the optimized kernel
/// uses so the inner loop is vectorizable real arithmetic.
struct Planar {
  std::vector<double> re, im;

  void load(const CMatrix& m) {
    const int sz = m.rows() * m.cols();
    re.resize(sz);
    im.resize(sz);
    const cplx* p = &m(0, 0);
    for (int i = 0; i < sz; ++i) {
      re[i] = p[i].real();
      im[i] = p[i].imag();
    }
  }
};

}  // namespace

CMatrix matmul_serial(const CMatrix& a, const CMatrix& b) {
  check_shapes(a, b);
  CMatrix c(a.rows(), b.cols());
  for (int i = 0; i < a.rows(); ++i) accumulate_row(a, b, c, i);
  return c;
}

CMatrix matmul_omp(const CMatrix& a, const CMatrix& b) {
  check_shapes(a, b);
  const int m = a.rows(), kd = a.cols(), n = b.cols();
  static thread_local Planar pa, pb;
  pa.load(a);
  pb.load(b);
  CMatrix c(m, n);
#pragma omp parallel
  {
    std::vector<double> cr(n), ci(n);
#pragma omp for schedule(static)
    for (int i = 0; i < m; ++i) {
      std::fill(cr.begin(), cr.end(), 0.0);
      std::fill(ci.begin(), ci.end(), 0.0);
      for (int k = 0; k < kd; ++k) {
        const double ar = pa.re[i * kd + k];
        const double ai = pa.im[i * kd + k];
        if (ar == 0.0 && ai == 0.0) continue;
        const double* __restrict br = &pb.re[k * n];
        const double* __restrict bi = &pb.im[k * n];
        double* __restrict crp = cr.data();
        double* __restrict cip = ci.data();
        for (int j = 0; j < n; ++j) {
          crp[j] += ar * br[j] - ai * bi[j];
          cip[j] += ar * bi[j] + ai * br[j];
        }
      }
      cplx* crow = &c(i, 0);
      for (int j = 0; j < n; ++j) crow[j] = cplx(cr[j], ci[j]);
    }
  }
  return c;
}

CMatrix matmul(const CMatrix& a, const CMatrix& b) {
  if (a.rows() >= kParallelCutoff && b.cols() >= kParallelCutoff) return matmul_omp(a, b);
  return matmul_serial(a, b);
}

}  // namespace encdec::kernels
