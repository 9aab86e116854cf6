#pragma once

#include <string>

#include "encdec/encoding.hpp"

namespace encdec {

struct TooManyModes : std::runtime_error {
  explicit TooManyModes(const std::string& what) : std::runtime_error(what) {}
};
struct BadCar : std::runtime_error {
  explicit BadCar(const std::string& what) : std::runtime_error(what) {}
};
struct ClosureDeficient : std::runtime_error {
  explicit ClosureDeficient(const std::string& what) : std::runtime_error(what) {}
};

/// Mode caps: dense 2^n x 2^n matrices. Encoding construction additionally
/// stores images of the full real basis (4^n of them), hence the lower cap.
inline constexpr int kMaxModes = 10;
inline constexpr int kMaxEncodingModes = 5;

/// A concrete representation of the n-mode CAR algebra on (C^2)^(x n):
/// annihilators a_k with a_j a_k* + a_k* a_j = delta_jk 1 and
/// a_j a_k + a_k a_j = 0.
struct CarRep {
  int modes = 0;
  std::string name;
  std::vector<CMatrix> annihilators;

  int dim() const { return 1 << modes; }
};

/// Max Frobenius residual of both anticommutator families over all (j, k).
double car_residual(const CarRep& rep);
void require_car(const CarRep& rep, double tol = 1e-12);

/// a_k = Z^(k-1) x sigma^- x 1^(n-k), sigma^- = [[0,1],[0,0]].
CarRep jordan_wigner(int modes);

/// Update/parity/flip index-set construction on the binary-tree encoding,
/// padded to the next power of two; coincides with jordan_wigner at one mode.
CarRep bravyi_kitaev(int modes);

/// Self-adjoint unitary P = prod_k (1 - 2 a_k* a_k) implementing a -> -a on
/// the generators, with its spectral projections e_pm = (1 pm P)/2.
struct ParityData {
  CMatrix parity;
  CMatrix e_plus;
  CMatrix e_minus;
};

ParityData parity_operator(const CarRep& rep);

/// Closure of all degree-2 monomials {a_j a_k, a_j* a_k, a_j* a_k*} and the
/// unit: the parity-even subalgebra, of dimension 2^(2n-1).
SpannedSubalgebra even_subalgebra(const CarRep& rep);

/// Wedderburn data of the even subalgebra: two blocks of dimension 2^(n-1)
/// whose minimal central projections coincide with (1 pm P)/2.
struct EvenDecomposition {
  SpannedSubalgebra even;
  ParityData parity;
  WedderburnIso iso;
  double projection_match;  // max distance of recovered central projections to {e_pm}
};

EvenDecomposition even_decompose(const CarRep& rep, uint64_t seed);

/// The encoding of the abstract CAR algebra (Jordan-Wigner reference copy of
/// M_{2^n}) into the rep's matrix algebra, a_k(JW) -> a_k(rep). Unitary
/// conjugation by the intertwiner built on the vacuum orbit.
RealLinearMap rep_as_encoding(const CarRep& rep);

/// Encoding of the even algebra M_d + M_d (d = 2^(modes-1)) whose two
/// superselection sectors carry prescribed multiplicities: sector + maps into
/// one target block with (p_pp linear, q_pp antilinear) copies, sector - into
/// the other with (p_mm, q_mm); swap_sectors routes + to the second block.
RealLinearMap sector_encoding_demo(int modes, int p_pp, int q_pp, int p_mm, int q_mm,
                                   uint64_t seed, bool swap_sectors = false);

}  // namespace encdec
