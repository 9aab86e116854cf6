#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "encdec/linalg.hpp"

namespace encdec {

struct NotClosed : std::runtime_error {
  explicit NotClosed(const std::string& what) : std::runtime_error(what) {}
};

struct CenterDegenerate : std::runtime_error {
  explicit CenterDegenerate(const std::string& what) : std::runtime_error(what) {}
};

struct NotSemisimple : std::runtime_error {
  explicit NotSemisimple(const std::string& what) : std::runtime_error(what) {}
};

struct SpecMismatch : std::runtime_error {
  explicit SpecMismatch(const std::string& what) : std::runtime_error(what) {}
};

/// A finite-dimensional *-algebra given as a direct sum of full matrix blocks.
struct StarAlgebraSpec {
  std::vector<int> block_dims;

  int num_blocks() const { return static_cast<int>(block_dims.size()); }
  int total_dim() const;  // sum of n_i^2, complex dimension
  int real_dim() const { return 2 * total_dim(); }
  bool operator==(const StarAlgebraSpec&) const = default;
};

/// Element of a direct sum of matrix blocks.
struct AlgebraElement {
  StarAlgebraSpec spec;
  std::vector<CMatrix> blocks;

  static AlgebraElement zero(const StarAlgebraSpec& spec);
  static AlgebraElement identity(const StarAlgebraSpec& spec);

  AlgebraElement adjoint() const;
  AlgebraElement conj() const;
  double frob_norm() const;
  cplx trace() const;
  bool is_hermitian(double tol = kHermTol) const;

  AlgebraElement& operator+=(const AlgebraElement& o);
  AlgebraElement& operator-=(const AlgebraElement& o);
  AlgebraElement& operator*=(cplx s);

  /// this += s * o, without allocating temporaries.
  AlgebraElement& add_scaled(const AlgebraElement& o, cplx s);
};

AlgebraElement operator+(AlgebraElement a, const AlgebraElement& b);
AlgebraElement operator-(AlgebraElement a, const AlgebraElement& b);
AlgebraElement operator*(cplx s, AlgebraElement a);
AlgebraElement operator*(const AlgebraElement& a, const AlgebraElement& b);
double frob_dist(const AlgebraElement& a, const AlgebraElement& b);

/// Distinct eigenvalues of a Hermitian element, pooled over blocks.
std::vector<double> element_spectrum(const AlgebraElement& a,
                                     double cluster_tol = kDefaultClusterTol);

/// Orthonormal (Hilbert-Schmidt) basis of a subalgebra of M_N.
struct SpannedSubalgebra {
  int ambient_dim = 0;
  std::vector<CMatrix> basis;
  bool contains_unit = false;

  int dim() const { return static_cast<int>(basis.size()); }
};

/// Orthonormal Hermitian basis of a real Jordan subalgebra of Herm_N.
struct JordanBasis {
  int ambient_dim = 0;
  std::vector<CMatrix> basis;

  int dim() const { return static_cast<int>(basis.size()); }
};

/// Incremental orthonormal span of matrices under the complex HS inner product.
/// Modified Gram-Schmidt with one re-orthogonalization pass.
class SpanBuilder {
 public:
  explicit SpanBuilder(double drop_tol = 1e-10) : drop_tol_(drop_tol) {}

  /// Returns true if m contributed a new direction.
  bool add(const CMatrix& m);
  /// Residual norm of m after projecting onto the current span.
  double residual(const CMatrix& m) const;
  /// Complex coefficients of the projection of m onto the span.
  std::vector<cplx> coefficients(const CMatrix& m) const;

  const std::vector<CMatrix>& basis() const { return basis_; }
  int dim() const { return static_cast<int>(basis_.size()); }

 private:
  double drop_tol_;
  std::vector<CMatrix> basis_;
};

/// Same, over the reals: inner product Re tr(x^dag y).
class RealSpanBuilder {
 public:
  explicit RealSpanBuilder(double drop_tol = 1e-10) : drop_tol_(drop_tol) {}

  bool add(const CMatrix& m);
  double residual(const CMatrix& m) const;
  std::vector<double> coefficients(const CMatrix& m) const;

  const std::vector<CMatrix>& basis() const { return basis_; }
  int dim() const { return static_cast<int>(basis_.size()); }

 private:
  double drop_tol_;
  std::vector<CMatrix> basis_;
};

/// (ab + ba) / 2
CMatrix jordan_product(const CMatrix& a, const CMatrix& b);
AlgebraElement jordan_product(const AlgebraElement& a, const AlgebraElement& b);

/// Smallest real span containing the generators (and the unit, if requested)
/// closed under the Jordan product.
JordanBasis jordan_closure(const std::vector<CMatrix>& generators, bool include_unit);

/// Smallest complex span containing the generators, their adjoints (and the
/// unit, if requested) closed under multiplication.
SpannedSubalgebra algebra_closure(const std::vector<CMatrix>& generators, bool include_unit);

/// Multiplicative-closure residual of a claimed subalgebra basis.
double closure_residual(const SpannedSubalgebra& alg);
void require_closed(const SpannedSubalgebra& alg, double tol = 1e-8);

/// Basis of {x in alg : xb = bx for every basis element b}.
SpannedSubalgebra center(const SpannedSubalgebra& alg);

/// Pairwise orthogonal central Hermitian idempotents summing to the unit,
/// each minimal in the center. Deterministic for a fixed seed.
std::vector<CMatrix> minimal_central_projections(const SpannedSubalgebra& alg, uint64_t seed);

/// Unital *-isomorphism of a semisimple subalgebra of M_N onto its
/// Wedderburn block form, carried by systems of matrix units.
struct WedderburnIso {
  StarAlgebraSpec spec;
  std::vector<int> multiplicities;  // m_i: ambient rank of block i = n_i * m_i
  // matrix_units[i][r * n_i + s] realizes the (r,s) unit of block i in M_N.
  std::vector<std::vector<CMatrix>> matrix_units;

  AlgebraElement forward(const CMatrix& x) const;
  CMatrix backward(const AlgebraElement& x) const;
};

WedderburnIso wedderburn_decompose(const SpannedSubalgebra& alg, uint64_t seed);

/// a = sum_i lambda_i p_i with pairwise orthogonal projections summing to 1.
std::vector<std::pair<double, CMatrix>> jordan_spectral_decompose(
    const CMatrix& a, double cluster_tol = kDefaultClusterTol);

/// a + bi + cj + dk -> [[a+bi, c+di], [-c+di, a-bi]]; a real-algebra
/// homomorphism from the quaternions into M_2(C).
CMatrix quaternion_embed(double a, double b, double c, double d);

}  // namespace encdec
