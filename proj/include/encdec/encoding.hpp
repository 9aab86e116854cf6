#pragma once

#include <functional>
#include <string>
#include <vector>

#include "encdec/algebra.hpp"

namespace encdec {

struct NotJordanHom : std::runtime_error {
  explicit NotJordanHom(const std::string& what) : std::runtime_error(what) {}
};
struct NotHomomorphism : std::runtime_error {
  explicit NotHomomorphism(const std::string& what) : std::runtime_error(what) {}
};
struct AmbiguousExtension : std::runtime_error {
  explicit AmbiguousExtension(const std::string& what) : std::runtime_error(what) {}
};
struct BadSquareRoot : std::runtime_error {
  explicit BadSquareRoot(const std::string& what) : std::runtime_error(what) {}
};
struct MultiplicityNonInteger : std::runtime_error {
  explicit MultiplicityNonInteger(const std::string& what) : std::runtime_error(what) {}
};
struct IntertwinerRankMismatch : std::runtime_error {
  explicit IntertwinerRankMismatch(const std::string& what) : std::runtime_error(what) {}
};
struct AccountingMismatch : std::runtime_error {
  explicit AccountingMismatch(const std::string& what) : std::runtime_error(what) {}
};
struct BadUnitary : std::runtime_error {
  explicit BadUnitary(const std::string& what) : std::runtime_error(what) {}
};

/// Canonical real basis of a block-sum algebra: per block, the Hermitian unit
/// basis {E_rr, (E_rs+E_sr)/sqrt2, i(E_rs-E_sr)/sqrt2} followed by i times
/// each of those elements. Orthonormal under Re tr(x^dag y).
std::vector<AlgebraElement> canonical_real_basis(const StarAlgebraSpec& spec);

/// Just the Hermitian half, in the same per-block order.
std::vector<AlgebraElement> canonical_hermitian_basis(const StarAlgebraSpec& spec);

/// Re sum_blocks tr(a^dag b): the real HS inner product on a block sum.
double element_real_inner(const AlgebraElement& a, const AlgebraElement& b);

/// Real-linear map between block-sum algebras, stored as images of the
/// canonical real basis of the source.
struct RealLinearMap {
  StarAlgebraSpec source;
  StarAlgebraSpec target;
  std::vector<AlgebraElement> images;  // one per canonical_real_basis element

  static RealLinearMap identity(const StarAlgebraSpec& spec);
  static RealLinearMap conjugation(const StarAlgebraSpec& spec);
  static RealLinearMap from_function(
      const StarAlgebraSpec& source, const StarAlgebraSpec& target,
      const std::function<AlgebraElement(const AlgebraElement&)>& f);
};

AlgebraElement apply(const RealLinearMap& map, const AlgebraElement& x);

/// Random Hermitian element with Gaussian coordinates on the canonical basis.
AlgebraElement random_hermitian_element(const StarAlgebraSpec& spec, Rng& rng);
AlgebraElement random_element(const StarAlgebraSpec& spec, Rng& rng);

struct CheckItem {
  std::string name;
  double residual;
  bool pass;
};

struct CheckReport {
  std::string check;
  double tol = 0.0;
  std::vector<CheckItem> items;

  double max_residual() const;
  bool passed() const;
};

/// Encoding axiom (i): clustered spectra of a and gamma(a) agree as sets.
CheckReport check_spectrum_preserving(const RealLinearMap& map, int samples, uint64_t seed,
                                      double tol);

/// Encoding axiom (ii) plus real homogeneity, validating stored image tables.
CheckReport check_convexity(const RealLinearMap& map, int samples, uint64_t seed, double tol);

/// gamma(a o b) = gamma(a) o gamma(b), plus the orthogonal-projection
/// anticommutator identity.
CheckReport check_jordan_hom(const RealLinearMap& map, int samples, uint64_t seed, double tol);

/// Additivity, multiplicativity, unitality, real homogeneity, *-preservation.
CheckReport check_associative_hom(const RealLinearMap& map, int samples, uint64_t seed,
                                  double tol);

enum class WordOrder { Forward, Reversed };

/// Unique associative extension of a Jordan homomorphism given by images of
/// the canonical Hermitian basis. Every source block must have dimension >= 2.
RealLinearMap extend_jordan_hom(const std::vector<AlgebraElement>& herm_images,
                                const StarAlgebraSpec& source, const StarAlgebraSpec& target,
                                WordOrder order = WordOrder::Forward);

struct LinearSplit {
  AlgebraElement k;                // Gamma(i 1), with k^2 = -1, k^* = -k
  AlgebraElement plus_projector;   // selects the complex-linear part
  AlgebraElement minus_projector;  // selects the complex-antilinear part
};

LinearSplit split_linear_antilinear(const RealLinearMap& map, double tol = 1e-8);

/// Multiplicity data and intertwining unitaries of an associative extension:
/// on target block j the map acts as U_j (+_i alpha_i^{p_ij} + conj(alpha_i)^{q_ij}) U_j^dag.
struct CanonicalForm {
  std::vector<std::vector<int>> p;  // [source block][target block]
  std::vector<std::vector<int>> q;
  std::vector<CMatrix> unitary;  // one per target block
};

CanonicalForm canonical_decompose(const RealLinearMap& map);

RealLinearMap build_from_canonical(const CanonicalForm& form, const StarAlgebraSpec& source,
                                   const StarAlgebraSpec& target);

/// Max residual of apply(map, x) against the canonical-form map on samples.
double assert_canonical_equivalence(const RealLinearMap& map, const CanonicalForm& form,
                                    int samples, double tol);

struct CompareResult {
  bool equivalent = false;
  CanonicalForm form_a;
  CanonicalForm form_b;
  std::vector<CMatrix> witness;  // per target block, when equivalent
  double residual = 0.0;
};

/// Decompose both maps; equal multiplicity signatures yield a witness unitary
/// W with b(x) = W a(x) W^dag.
CompareResult compare_encodings(const RealLinearMap& a, const RealLinearMap& b);

}  // namespace encdec
