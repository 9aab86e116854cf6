#include "encdec/fermions.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>

namespace encdec {

namespace {

CMatrix pauli1(char c) {
  CMatrix m(2, 2);
  switch (c) {
    case 'I':
      m(0, 0) = 1.0;
      m(1, 1) = 1.0;
      break;
    case 'X':
      m(0, 1) = 1.0;
      m(1, 0) = 1.0;
      break;
    case 'Y':
      m(0, 1) = cplx(0.0, -1.0);
      m(1, 0) = cplx(0.0, 1.0);
      break;
    case 'Z':
      m(0, 0) = 1.0;
      m(1, 1) = -1.0;
      break;
    case '-':  // sigma^- = (X + iY)/2
      m(0, 1) = 1.0;
      break;
    default:
      throw std::invalid_argument("unknown Pauli letter");
  }
  return m;
}

/// Tensor product of single-qubit letters, qubit 0 leftmost.
CMatrix pauli_string(const std::string& letters) {
  CMatrix out = pauli1(letters.at(0));
  for (size_t i = 1; i < letters.size(); ++i) out = kron(out, pauli1(letters[i]));
  return out;
}

void check_modes(int modes) {
  if (modes < 1 || modes > kMaxModes)
    throw TooManyModes("mode count must be between 1 and " + std::to_string(kMaxModes));
}

/// Shape sanity of a CarRep; returns the (square) matrix size.
int rep_size(const CarRep& rep) {
  if (rep.modes < 1) throw BadCar("representation has no modes");
  if (static_cast<int>(rep.annihilators.size()) != rep.modes)
    throw BadCar("annihilator count does not match the number of modes");
  const int n = rep.annihilators[0].rows();
  for (const CMatrix& a : rep.annihilators)
    if (!a.square() || a.rows() != n) throw BadCar("annihilators are not same-size square matrices");
  return n;
}

}  // namespace

double car_residual(const CarRep& rep) {
  const int n = rep_size(rep);
  const CMatrix unit = CMatrix::identity(n);
  std::vector<CMatrix> dag;
  dag.reserve(rep.annihilators.size());
  for (const CMatrix& a : rep.annihilators) dag.push_back(a.adjoint());

  double worst = 0.0;
  for (int j = 0; j < rep.modes; ++j)
    for (int k = 0; k < rep.modes; ++k) {
      CMatrix mixed = rep.annihilators[j] * dag[k] + dag[k] * rep.annihilators[j];
      if (j == k) mixed -= unit;
      worst = std::max(worst, mixed.frob_norm());
      if (k >= j) {
        const CMatrix plain =
            rep.annihilators[j] * rep.annihilators[k] + rep.annihilators[k] * rep.annihilators[j];
        worst = std::max(worst, plain.frob_norm());
      }
    }
  return worst;
}

void require_car(const CarRep& rep, double tol) {
  const double r = car_residual(rep);
  if (r > tol)
    throw BadCar("canonical anticommutation residual " + std::to_string(r) +
                 " exceeds tolerance in representation '" + rep.name + "'");
}

CarRep jordan_wigner(int modes) {
  check_modes(modes);
  CarRep rep{modes, "jordan-wigner", {}};
  for (int j = 0; j < modes; ++j) {
    std::string letters(modes, 'I');
    for (int k = 0; k < j; ++k) letters[k] = 'Z';
    letters[j] = '-';
    rep.annihilators.push_back(pauli_string(letters));
  }
  return rep;
}

namespace {

using Gf2 = std::vector<std::vector<int>>;

/// Lower unitriangular transform of the binary-tree encoding:
/// beta_1 = [1]; beta_{2m} = [[beta_m, 0], [A, beta_m]] with A's bottom row all ones.
Gf2 tree_matrix(int size) {
  Gf2 b{{1}};
  while (static_cast<int>(b.size()) < size) {
    const int m = static_cast<int>(b.size());
    Gf2 big(2 * m, std::vector<int>(2 * m, 0));
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j) {
        big[i][j] = b[i][j];
        big[m + i][m + j] = b[i][j];
      }
    for (int j = 0; j < m; ++j) big[2 * m - 1][j] = 1;
    b = std::move(big);
  }
  return b;
}

Gf2 gf2_inverse(const Gf2& mat) {
  const int n = static_cast<int>(mat.size());
  Gf2 a = mat;
  Gf2 inv(n, std::vector<int>(n, 0));
  for (int i = 0; i < n; ++i) inv[i][i] = 1;
  for (int col = 0; col < n; ++col) {
    int pivot = -1;
    for (int r = col; r < n; ++r)
      if (a[r][col]) {
        pivot = r;
        break;
      }
    if (pivot < 0) throw std::logic_error("tree matrix is singular over GF(2)");
    std::swap(a[col], a[pivot]);
    std::swap(inv[col], inv[pivot]);
    for (int r = 0; r < n; ++r)
      if (r != col && a[r][col])
        for (int c = 0; c < n; ++c) {
          a[r][c] ^= a[col][c];
          inv[r][c] ^= inv[col][c];
        }
  }
  return inv;
}

}  // namespace

CarRep bravyi_kitaev(int modes) {
  check_modes(modes);
  int padded = 1;
  while (padded < modes) padded *= 2;
  const Gf2 beta = tree_matrix(padded);
  const Gf2 beta_inv = gf2_inverse(beta);

  CarRep rep{modes, "bravyi-kitaev", {}};
  for (int j = 0; j < modes; ++j) {
    std::vector<int> update, flip, parity;
    for (int k = j + 1; k < modes; ++k)
      if (beta[k][j]) update.push_back(k);
    for (int k = 0; k < j; ++k)
      if (beta_inv[j][k]) flip.push_back(k);
    for (int t = 0; t < j; ++t) {
      int s = 0;
      for (int k = 0; k < j; ++k) s ^= beta_inv[k][t];
      if (s) parity.push_back(t);
    }
    std::vector<int> remainder;  // parity with the flip set removed, for odd j
    if (j % 2 == 0) {
      remainder = parity;
    } else {
      for (int t : parity)
        if (std::find(flip.begin(), flip.end(), t) == flip.end()) remainder.push_back(t);
    }

    // a_j = (1/2) X_U(j) (X_j Z_P(j) + i Y_j Z_R(j))
    std::string s1(modes, 'I');
    std::string s2(modes, 'I');
    for (int k : update) {
      s1[k] = 'X';
      s2[k] = 'X';
    }
    for (int t : parity) s1[t] = 'Z';
    for (int t : remainder) s2[t] = 'Z';
    s1[j] = 'X';
    s2[j] = 'Y';
    CMatrix a = pauli_string(s1);
    a *= 0.5;
    a.add_scaled(pauli_string(s2), cplx(0.0, 0.5));
    rep.annihilators.push_back(std::move(a));
  }
  require_car(rep, 1e-12);
  return rep;
}

ParityData parity_operator(const CarRep& rep) {
  const int n = rep_size(rep);
  const CMatrix unit = CMatrix::identity(n);
  CMatrix p = unit;
  for (const CMatrix& a : rep.annihilators) {
    CMatrix factor = unit;
    factor.add_scaled(a.adjoint() * a, -2.0);
    p = p * factor;
  }
  for (const CMatrix& a : rep.annihilators) {
    CMatrix anti = p * a + a * p;
    if (anti.frob_norm() > 1e-10 * std::max(1.0, a.frob_norm()))
      throw BadCar("parity operator fails to anticommute with an annihilator");
  }
  ParityData out;
  out.e_plus = unit;
  out.e_plus.add_scaled(p, 1.0);
  out.e_plus *= 0.5;
  out.e_minus = unit;
  out.e_minus.add_scaled(p, -1.0);
  out.e_minus *= 0.5;
  out.parity = std::move(p);
  return out;
}

SpannedSubalgebra even_subalgebra(const CarRep& rep) {
  require_car(rep, 1e-12);
  const ParityData pd = parity_operator(rep);

  // Degree-2 monomials; closure adds adjoints, which covers a*a* and aa*.
  std::vector<CMatrix> gens;
  for (int j = 0; j < rep.modes; ++j) {
    const CMatrix dag_j = rep.annihilators[j].adjoint();
    for (int k = 0; k < rep.modes; ++k) {
      if (j < k) gens.push_back(rep.annihilators[j] * rep.annihilators[k]);
      gens.push_back(dag_j * rep.annihilators[k]);
    }
  }
  SpannedSubalgebra alg = algebra_closure(gens, /*include_unit=*/true);

  const int expected = 1 << (2 * rep.modes - 1);
  if (alg.dim() != expected)
    throw BadCar("even subalgebra has dimension " + std::to_string(alg.dim()) + ", expected " +
                 std::to_string(expected));
  for (const CMatrix& b : alg.basis) {
    const double comm = frob_dist(pd.parity * b, b * pd.parity);
    if (comm > 1e-10 * std::max(1.0, b.frob_norm()))
      throw BadCar("even subalgebra basis element fails to commute with parity");
  }
  return alg;
}

EvenDecomposition even_decompose(const CarRep& rep, uint64_t seed) {
  EvenDecomposition out;
  out.even = even_subalgebra(rep);
  out.parity = parity_operator(rep);
  out.iso = wedderburn_decompose(out.even, seed);

  const int d = 1 << (rep.modes - 1);
  const auto& dims = out.iso.spec.block_dims;
  if (dims.size() != 2 || dims[0] != d || dims[1] != d)
    throw NotSemisimple("even subalgebra does not split into two blocks of dimension 2^(n-1)");

  // Central projection of each block: sum of its diagonal matrix units.
  std::vector<CMatrix> central;
  for (int i = 0; i < 2; ++i) {
    CMatrix c = out.iso.matrix_units[i][0];
    for (int r = 1; r < d; ++r) c += out.iso.matrix_units[i][r * d + r];
    central.push_back(std::move(c));
  }
  const double straight = std::max(frob_dist(central[0], out.parity.e_plus),
                                   frob_dist(central[1], out.parity.e_minus));
  const double crossed = std::max(frob_dist(central[0], out.parity.e_minus),
                                  frob_dist(central[1], out.parity.e_plus));
  out.projection_match = std::min(straight, crossed);
  if (out.projection_match > 1e-8 * std::max(1.0, out.parity.e_plus.frob_norm()))
    throw BadCar("recovered central projections do not match the parity projections");
  if (crossed < straight) {
    // Fix block 0 as the even-parity sector.
    std::swap(out.iso.multiplicities[0], out.iso.multiplicities[1]);
    std::swap(out.iso.matrix_units[0], out.iso.matrix_units[1]);
  }
  return out;
}

RealLinearMap rep_as_encoding(const CarRep& rep) {
  if (rep.modes > kMaxEncodingModes)
    throw TooManyModes("encoding construction supports at most " +
                       std::to_string(kMaxEncodingModes) + " modes");
  require_car(rep, 1e-12);
  const int dim_ref = 1 << rep.modes;
  const CarRep reference = jordan_wigner(rep.modes);

  // Orthonormal orbit of the vacuum under ordered creation words.
  const auto orbit = [](const CarRep& r) {
    const int n = rep_size(r);
    CMatrix vac = CMatrix::identity(n);
    for (const CMatrix& a : r.annihilators) vac = vac * (a * a.adjoint());
    if (std::abs(vac.trace() - cplx(1.0)) > 1e-8)
      throw ClosureDeficient("vacuum sector of '" + r.name + "' is not one-dimensional");

    int best = 0;
    double best_norm = -1.0;
    for (int c = 0; c < n; ++c) {
      double s = 0.0;
      for (int i = 0; i < n; ++i) s += std::norm(vac(i, c));
      if (s > best_norm) {
        best_norm = s;
        best = c;
      }
    }
    CMatrix x0(n, 1);
    for (int i = 0; i < n; ++i) x0(i, 0) = vac(i, best) / std::sqrt(best_norm);

    std::vector<CMatrix> dag;
    for (const CMatrix& a : r.annihilators) dag.push_back(a.adjoint());
    std::vector<CMatrix> xs;
    xs.reserve(1 << r.modes);
    for (int word = 0; word < (1 << r.modes); ++word) {
      CMatrix x = x0;
      for (int k = r.modes - 1; k >= 0; --k)
        if ((word >> k) & 1) x = dag[k] * x;
      xs.push_back(std::move(x));
    }
    return xs;
  };

  const std::vector<CMatrix> xref = orbit(reference);
  const std::vector<CMatrix> xrep = orbit(rep);
  const int dim_rep = xrep[0].rows();

  CMatrix v(dim_rep, dim_ref);
  for (int r = 0; r < dim_ref; ++r)
    for (int p = 0; p < dim_rep; ++p) {
      const cplx xv = xrep[r](p, 0);
      if (xv == cplx(0.0)) continue;
      for (int q = 0; q < dim_ref; ++q) v(p, q) += xv * std::conj(xref[r](q, 0));
    }
  const CMatrix vdag = v.adjoint();
  if (dim_rep != dim_ref ||
      frob_dist(vdag * v, CMatrix::identity(dim_ref)) > 1e-8 * dim_ref ||
      frob_dist(v * vdag, CMatrix::identity(dim_rep)) > 1e-8 * dim_ref)
    throw ClosureDeficient("generators of '" + rep.name + "' do not generate the full matrix algebra");

  const StarAlgebraSpec spec{{dim_ref}};
  return RealLinearMap::from_function(spec, spec, [v, vdag](const AlgebraElement& x) {
    AlgebraElement out = x;
    out.blocks[0] = v * x.blocks[0] * vdag;
    return out;
  });
}

RealLinearMap sector_encoding_demo(int modes, int p_pp, int q_pp, int p_mm, int q_mm,
                                   uint64_t seed, bool swap_sectors) {
  if (modes < 2 || modes > kMaxEncodingModes)
    throw TooManyModes("sector demo needs between 2 and " + std::to_string(kMaxEncodingModes) +
                       " modes");
  if (p_pp < 0 || q_pp < 0 || p_mm < 0 || q_mm < 0)
    throw AccountingMismatch("multiplicities must be nonnegative");
  const int copies_plus = p_pp + q_pp;
  const int copies_minus = p_mm + q_mm;
  if (copies_plus <= 0 || copies_minus <= 0)
    throw AccountingMismatch("each sector needs at least one copy");

  const int d = 1 << (modes - 1);
  const StarAlgebraSpec source{{d, d}};
  const int j_plus = swap_sectors ? 1 : 0;
  const int j_minus = 1 - j_plus;

  CanonicalForm form;
  form.p.assign(2, std::vector<int>(2, 0));
  form.q.assign(2, std::vector<int>(2, 0));
  form.p[0][j_plus] = p_pp;
  form.q[0][j_plus] = q_pp;
  form.p[1][j_minus] = p_mm;
  form.q[1][j_minus] = q_mm;

  std::vector<int> target_dims(2);
  target_dims[j_plus] = copies_plus * d;
  target_dims[j_minus] = copies_minus * d;
  form.unitary.push_back(random_unitary(target_dims[0], seed ^ 0x9e3779b97f4a7c15ULL));
  form.unitary.push_back(random_unitary(target_dims[1], seed ^ 0xd1b54a32d192ed03ULL));

  const StarAlgebraSpec target{{target_dims[0], target_dims[1]}};
  return build_from_canonical(form, source, target);
}

}  // namespace encdec
