#pragma once

#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

namespace encdec {

using cplx = std::complex<double>;

struct DimensionMismatch : std::runtime_error {
  explicit DimensionMismatch(const std::string& what) : std::runtime_error(what) {}
};

struct NonHermitian : std::runtime_error {
  explicit NonHermitian(const std::string& what) : std::runtime_error(what) {}
};

/// Dense complex matrix, row-major storage.
class CMatrix {
 public:
  CMatrix() : rows_(0), cols_(0) {}
  CMatrix(int rows, int cols) : rows_(rows), cols_(cols), data_(static_cast<size_t>(rows) * cols) {}
  CMatrix(int rows, int cols, std::vector<cplx> data);

  static CMatrix identity(int n);
  static CMatrix zero(int rows, int cols);

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  bool square() const { return rows_ == cols_; }

  cplx& operator()(int r, int c) { return data_[static_cast<size_t>(r) * cols_ + c]; }
  const cplx& operator()(int r, int c) const { return data_[static_cast<size_t>(r) * cols_ + c]; }

  const std::vector<cplx>& data() const { return data_; }
  std::vector<cplx>& data() { return data_; }

  CMatrix adjoint() const;
  CMatrix conj() const;
  CMatrix transpose() const;

  cplx trace() const;
  double frob_norm() const;

  CMatrix& operator+=(const CMatrix& other);
  CMatrix& operator-=(const CMatrix& other);
  CMatrix& operator*=(cplx s);

  /// this += s * other, without allocating a temporary.
  CMatrix& add_scaled(const CMatrix& other, cplx s);

  /// ||M - M^dag||_F <= tol * max(1, ||M||_F)
  bool is_hermitian(double tol = 1e-12) const;
  void require_hermitian(double tol = 1e-12) const;
  void require_square() const;

 private:
  int rows_, cols_;
  std::vector<cplx> data_;
};

CMatrix operator+(CMatrix a, const CMatrix& b);
CMatrix operator-(CMatrix a, const CMatrix& b);
CMatrix operator*(cplx s, CMatrix a);
CMatrix operator*(const CMatrix& a, const CMatrix& b);

/// Kronecker product, row-major convention: (a ox b)((i1,i2),(j1,j2)) = a(i1,j1) b(i2,j2).
CMatrix kron(const CMatrix& a, const CMatrix& b);

/// Hilbert-Schmidt inner product tr(a^dag b).
cplx hs_inner(const CMatrix& a, const CMatrix& b);

/// Frobenius distance ||a - b||_F.
double frob_dist(const CMatrix& a, const CMatrix& b);

}  // namespace encdec
