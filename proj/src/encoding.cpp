#include "encdec/encoding.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace encdec {

namespace {

const double kSqrtHalf = std::sqrt(0.5);

/// Hermitian unit basis of M_n: E_rr, then (E_rs+E_sr)/sqrt2, i(E_rs-E_sr)/sqrt2
/// for r < s in lexicographic order.
std::vector<CMatrix> herm_unit_basis(int n) {
  std::vector<CMatrix> out;
  out.reserve(static_cast<size_t>(n) * n);
  for (int r = 0; r < n; ++r) {
    CMatrix e(n, n);
    e(r, r) = 1.0;
    out.push_back(std::move(e));
  }
  for (int r = 0; r < n; ++r)
    for (int s = r + 1; s < n; ++s) {
      CMatrix sym(n, n);
      sym(r, s) = kSqrtHalf;
      sym(s, r) = kSqrtHalf;
      out.push_back(std::move(sym));
      CMatrix asym(n, n);
      asym(r, s) = cplx(0, kSqrtHalf);
      asym(s, r) = cplx(0, -kSqrtHalf);
      out.push_back(std::move(asym));
    }
  return out;
}

AlgebraElement block_element(const StarAlgebraSpec& spec, int block, CMatrix m) {
  AlgebraElement e = AlgebraElement::zero(spec);
  e.blocks[block] = std::move(m);
  return e;
}

/// Real coordinates of x on the canonical real basis, computed in closed form
/// (no basis materialization): entrywise formulas per block.
std::vector<double> real_coordinates(const AlgebraElement& x) {
  std::vector<double> out;
  out.reserve(static_cast<size_t>(x.spec.real_dim()));
  for (size_t bi = 0; bi < x.blocks.size(); ++bi) {
    const CMatrix& m = x.blocks[bi];
    const int n = m.rows();
    // Hermitian half: E_rr, then (sym, asym) per pair r < s
    for (int r = 0; r < n; ++r) out.push_back(m(r, r).real());
    for (int r = 0; r < n; ++r)
      for (int s = r + 1; s < n; ++s) {
        out.push_back((m(r, s).real() + m(s, r).real()) * kSqrtHalf);
        out.push_back((m(r, s).imag() - m(s, r).imag()) * kSqrtHalf);
      }
    // i times the Hermitian half, in the same order
    for (int r = 0; r < n; ++r) out.push_back(m(r, r).imag());
    for (int r = 0; r < n; ++r)
      for (int s = r + 1; s < n; ++s) {
        out.push_back((m(r, s).imag() + m(s, r).imag()) * kSqrtHalf);
        out.push_back((m(s, r).real() - m(r, s).real()) * kSqrtHalf);
      }
  }
  return out;
}

/// Index bookkeeping for the canonical real basis of one block.
struct BlockIndex {
  int offset;  // index of the block's first Hermitian basis element
  int n;       // block dimension

  int herm_count() const { return n * n; }
  int diag(int r) const { return offset + r; }
  int pair_base(int r, int s) const {  // r < s
    const int pair_rank = (r * (2 * n - r - 1)) / 2 + (s - r - 1);
    return offset + n + 2 * pair_rank;
  }
  /// Index of i times the Hermitian element at absolute index `abs`.
  int ipart(int abs) const { return abs + herm_count(); }
};

BlockIndex block_index(const StarAlgebraSpec& spec, int block) {
  int off = 0;
  for (int b = 0; b < block; ++b) off += 2 * spec.block_dims[b] * spec.block_dims[b];
  return BlockIndex{off, spec.block_dims[block]};
}

/// Gamma(E_rs) for a source matrix unit, assembled from the stored images.
AlgebraElement image_of_unit(const RealLinearMap& map, const BlockIndex& ix, int r, int s) {
  if (r == s) return map.images[ix.diag(r)];
  AlgebraElement out = AlgebraElement::zero(map.target);
  if (r < s) {  // E_rs = (sym - i*asym)/sqrt2
    const int sym = ix.pair_base(r, s);
    out.add_scaled(map.images[sym], kSqrtHalf);
    out.add_scaled(map.images[ix.ipart(sym + 1)], -kSqrtHalf);
  } else {  // E_rs = (sym + i*asym)/sqrt2 for the pair (s, r)
    const int sym = ix.pair_base(s, r);
    out.add_scaled(map.images[sym], kSqrtHalf);
    out.add_scaled(map.images[ix.ipart(sym + 1)], kSqrtHalf);
  }
  return out;
}

void fix_copy_phase(CMatrix& v) {
  int br = 0, bc = 0;
  double best = -1.0;
  for (int r = 0; r < v.rows(); ++r)
    for (int c = 0; c < v.cols(); ++c)
      if (std::abs(v(r, c)) > best) {
        best = std::abs(v(r, c));
        br = r;
        bc = c;
      }
  if (best <= 0.0) return;
  cplx phase = v(br, bc) / best;
  v *= std::conj(phase);
}

}  // namespace

std::vector<AlgebraElement> canonical_hermitian_basis(const StarAlgebraSpec& spec) {
  std::vector<AlgebraElement> out;
  for (int b = 0; b < spec.num_blocks(); ++b)
    for (auto& h : herm_unit_basis(spec.block_dims[b])) out.push_back(block_element(spec, b, h));
  return out;
}

std::vector<AlgebraElement> canonical_real_basis(const StarAlgebraSpec& spec) {
  std::vector<AlgebraElement> out;
  for (int b = 0; b < spec.num_blocks(); ++b) {
    auto herm = herm_unit_basis(spec.block_dims[b]);
    for (const auto& h : herm) out.push_back(block_element(spec, b, h));
    for (const auto& h : herm) {
      CMatrix ih = h;
      ih *= cplx(0, 1);
      out.push_back(block_element(spec, b, ih));
    }
  }
  return out;
}

double element_real_inner(const AlgebraElement& a, const AlgebraElement& b) {
  if (a.spec != b.spec) throw SpecMismatch("element_real_inner: spec mismatch");
  double s = 0.0;
  for (size_t i = 0; i < a.blocks.size(); ++i) s += hs_inner(a.blocks[i], b.blocks[i]).real();
  return s;
}

RealLinearMap RealLinearMap::from_function(
    const StarAlgebraSpec& source, const StarAlgebraSpec& target,
    const std::function<AlgebraElement(const AlgebraElement&)>& f) {
  RealLinearMap map{source, target, {}};
  for (const auto& b : canonical_real_basis(source)) map.images.push_back(f(b));
  return map;
}

RealLinearMap RealLinearMap::identity(const StarAlgebraSpec& spec) {
  return from_function(spec, spec, [](const AlgebraElement& x) { return x; });
}

RealLinearMap RealLinearMap::conjugation(const StarAlgebraSpec& spec) {
  return from_function(spec, spec, [](const AlgebraElement& x) { return x.conj(); });
}

AlgebraElement apply(const RealLinearMap& map, const AlgebraElement& x) {
  if (x.spec != map.source) throw SpecMismatch("apply: element not in the source algebra");
  const std::vector<double> coords = real_coordinates(x);
  if (coords.size() != map.images.size())
    throw SpecMismatch("apply: image table has the wrong length");
  AlgebraElement out = AlgebraElement::zero(map.target);
  for (size_t k = 0; k < coords.size(); ++k)
    if (coords[k] != 0.0) out.add_scaled(map.images[k], coords[k]);
  return out;
}

AlgebraElement random_hermitian_element(const StarAlgebraSpec& spec, Rng& rng) {
  AlgebraElement e{spec, {}};
  for (int n : spec.block_dims) e.blocks.push_back(rng.hermitian(n));
  return e;
}

AlgebraElement random_element(const StarAlgebraSpec& spec, Rng& rng) {
  AlgebraElement e{spec, {}};
  for (int n : spec.block_dims) e.blocks.push_back(rng.matrix(n, n));
  return e;
}

double CheckReport::max_residual() const {
  double m = 0.0;
  for (const auto& it : items) m = std::max(m, it.residual);
  return m;
}

bool CheckReport::passed() const {
  for (const auto& it : items)
    if (!it.pass) return false;
  return true;
}

CheckReport check_spectrum_preserving(const RealLinearMap& map, int samples, uint64_t seed,
                                      double tol) {
  CheckReport rep{"spectrum_preserving", tol, {}};
  Rng rng(seed);
  for (int s = 0; s < samples; ++s) {
    AlgebraElement a = random_hermitian_element(map.source, rng);
    AlgebraElement ga = apply(map, a);
    double d;
    if (!ga.is_hermitian(1e-8)) {
      d = std::numeric_limits<double>::infinity();
    } else {
      d = hausdorff(element_spectrum(a), element_spectrum(ga));
    }
    rep.items.push_back({"sample_" + std::to_string(s), d, d <= tol});
  }
  return rep;
}

CheckReport check_convexity(const RealLinearMap& map, int samples, uint64_t seed, double tol) {
  CheckReport rep{"convexity", tol, {}};
  Rng rng(seed);
  for (int s = 0; s < samples; ++s) {
    AlgebraElement a1 = random_hermitian_element(map.source, rng);
    AlgebraElement a2 = random_hermitian_element(map.source, rng);
    const double lam = rng.uniform();
    AlgebraElement lhs = apply(map, cplx(lam) * a1 + cplx(1.0 - lam) * a2);
    AlgebraElement rhs = cplx(lam) * apply(map, a1) + cplx(1.0 - lam) * apply(map, a2);
    double d1 = frob_dist(lhs, rhs) / std::max(1.0, a1.frob_norm() + a2.frob_norm());
    rep.items.push_back({"convex_" + std::to_string(s), d1, d1 <= tol});

    const double mu = rng.gaussian();
    double d2 = frob_dist(apply(map, cplx(mu) * a1), cplx(mu) * apply(map, a1)) /
                std::max(1.0, std::abs(mu) * a1.frob_norm());
    rep.items.push_back({"homogeneous_" + std::to_string(s), d2, d2 <= tol});
  }
  return rep;
}

namespace {

/// Pooled spectral projections of a Hermitian element, as elements.
std::vector<AlgebraElement> element_projections(const AlgebraElement& a) {
  auto pooled = element_spectrum(a);
  std::vector<AlgebraElement> projs(pooled.size(), AlgebraElement::zero(a.spec));
  for (size_t b = 0; b < a.blocks.size(); ++b) {
    for (const auto& [lam, pr] : jordan_spectral_decompose(a.blocks[b])) {
      // attach to the nearest pooled eigenvalue
      size_t best = 0;
      for (size_t i = 1; i < pooled.size(); ++i)
        if (std::abs(pooled[i] - lam) < std::abs(pooled[best] - lam)) best = i;
      projs[best].blocks[b] += pr;
    }
  }
  return projs;
}

}  // namespace

CheckReport check_jordan_hom(const RealLinearMap& map, int samples, uint64_t seed, double tol) {
  CheckReport rep{"jordan_hom", tol, {}};
  Rng rng(seed);
  for (int s = 0; s < samples; ++s) {
    AlgebraElement a = random_hermitian_element(map.source, rng);
    AlgebraElement b = random_hermitian_element(map.source, rng);
    double d = frob_dist(apply(map, jordan_product(a, b)),
                         jordan_product(apply(map, a), apply(map, b))) /
               std::max(1.0, a.frob_norm() * b.frob_norm());
    rep.items.push_back({"product_" + std::to_string(s), d, d <= tol});
    // a Jordan homomorphism lands in the self-adjoint part
    const AlgebraElement ga = apply(map, a);
    const double dh = frob_dist(ga, ga.adjoint()) / std::max(1.0, a.frob_norm());
    rep.items.push_back({"hermitian_image_" + std::to_string(s), dh, dh <= tol});
  }
  // orthogonal projection pairs: gamma(p)gamma(q) + gamma(q)gamma(p) = 0
  for (int s = 0; s < std::max(1, samples / 4); ++s) {
    auto projs = element_projections(random_hermitian_element(map.source, rng));
    if (projs.size() < 2) continue;
    for (size_t i = 0; i + 1 < projs.size(); ++i) {
      const AlgebraElement gp = apply(map, projs[i]);
      const AlgebraElement gq = apply(map, projs[i + 1]);
      double d = (gp * gq + gq * gp).frob_norm();
      rep.items.push_back({"proj_anticomm_" + std::to_string(s) + "_" + std::to_string(i), d,
                           d <= tol});
    }
  }
  return rep;
}

CheckReport check_associative_hom(const RealLinearMap& map, int samples, uint64_t seed,
                                  double tol) {
  CheckReport rep{"associative_hom", tol, {}};
  Rng rng(seed);

  double du = frob_dist(apply(map, AlgebraElement::identity(map.source)),
                        AlgebraElement::identity(map.target));
  rep.items.push_back({"unital", du, du <= tol});

  for (int s = 0; s < samples; ++s) {
    AlgebraElement x = random_element(map.source, rng);
    AlgebraElement y = random_element(map.source, rng);
    const double scale = std::max(1.0, x.frob_norm() * y.frob_norm());

    double da = frob_dist(apply(map, x + y), apply(map, x) + apply(map, y)) / scale;
    rep.items.push_back({"additive_" + std::to_string(s), da, da <= tol});

    double dm = frob_dist(apply(map, x * y), apply(map, x) * apply(map, y)) / scale;
    rep.items.push_back({"multiplicative_" + std::to_string(s), dm, dm <= tol});

    const double mu = rng.gaussian();
    double dh = frob_dist(apply(map, cplx(mu) * x), cplx(mu) * apply(map, x)) /
                std::max(1.0, std::abs(mu) * x.frob_norm());
    rep.items.push_back({"real_homogeneous_" + std::to_string(s), dh, dh <= tol});

    double ds = frob_dist(apply(map, x.adjoint()), apply(map, x).adjoint()) /
                std::max(1.0, x.frob_norm());
    rep.items.push_back({"star_" + std::to_string(s), ds, ds <= tol});
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Extension of Jordan homomorphisms

RealLinearMap extend_jordan_hom(const std::vector<AlgebraElement>& herm_images,
                                const StarAlgebraSpec& source, const StarAlgebraSpec& target,
                                WordOrder order) {
  for (int n : source.block_dims)
    if (n < 2)
      throw AmbiguousExtension(
          "source block of dimension 1: both a linear and an antilinear extension exist");

  auto hbasis = canonical_hermitian_basis(source);
  if (herm_images.size() != hbasis.size())
    throw SpecMismatch("extend_jordan_hom: image table has the wrong length");

  auto gamma = [&](const AlgebraElement& a) {
    AlgebraElement out = AlgebraElement::zero(target);
    for (size_t k = 0; k < hbasis.size(); ++k) {
      double c = element_real_inner(hbasis[k], a);
      if (c != 0.0) out += cplx(c) * herm_images[k];
    }
    return out;
  };

  {  // precondition: the data is a Jordan homomorphism
    Rng rng(12021);
    for (int s = 0; s < 20; ++s) {
      AlgebraElement a = random_hermitian_element(source, rng);
      AlgebraElement b = random_hermitian_element(source, rng);
      double d = frob_dist(gamma(jordan_product(a, b)), jordan_product(gamma(a), gamma(b))) /
                 std::max(1.0, a.frob_norm() * b.frob_norm());
      if (d > 1e-8) throw NotJordanHom("jordan-product residual " + std::to_string(d));
    }
  }

  // Per source block, express i*1 as a real combination of words of length <= 3
  // in the block's Hermitian basis, then push the words through gamma.
  std::vector<AlgebraElement> k_ops;  // Gamma(i 1_b) per block
  int herm_offset = 0;
  for (int b = 0; b < source.num_blocks(); ++b) {
    const int n = source.block_dims[b];
    const int nb = n * n;
    auto hunits = herm_unit_basis(n);

    // candidate words: (a,b) pairs, greedily keeping the independent ones
    struct Word {
      std::vector<int> letters;
      CMatrix value;  // product in the source block
    };
    std::vector<Word> words;
    RealSpanBuilder span;
    auto consider = [&](std::vector<int> letters) {
      if (span.dim() == 2 * nb) return;
      CMatrix v = hunits[letters[0]];
      for (size_t i = 1; i < letters.size(); ++i) v = v * hunits[letters[i]];
      if (span.add(v)) words.push_back({std::move(letters), std::move(v)});
    };
    std::vector<int> idx(nb);
    for (int i = 0; i < nb; ++i) idx[i] = (order == WordOrder::Forward) ? i : nb - 1 - i;
    for (int a : idx) consider({a});
    for (int a : idx)
      for (int c : idx) consider({a, c});
    if (span.dim() < 2 * nb)
      for (int a : idx)
        for (int c : idx)
          for (int d : idx) consider({a, c, d});

    CMatrix iunit = CMatrix::identity(n);
    iunit *= cplx(0, 1);
    if (span.residual(iunit) > 1e-8)
      throw AmbiguousExtension("i*1 is not spanned by words of length <= 3");

    // least squares for the word coefficients (real, via the Gram matrix)
    const int w = static_cast<int>(words.size());
    CMatrix gram(w, w);
    std::vector<double> rhs(w);
    for (int a = 0; a < w; ++a) {
      rhs[a] = hs_inner(words[a].value, iunit).real();
      for (int c = 0; c < w; ++c) gram(a, c) = hs_inner(words[a].value, words[c].value).real();
    }
    auto eig = herm_eig(gram, 1e-6);
    std::vector<double> coeff(w, 0.0);
    const double thresh = 1e-10 * std::max(1.0, eig.eigenvalues.back());
    for (int c = 0; c < w; ++c) {
      if (eig.eigenvalues[c] <= thresh) continue;
      double proj = 0.0;
      for (int a = 0; a < w; ++a) proj += eig.vectors(a, c).real() * rhs[a];
      proj /= eig.eigenvalues[c];
      for (int a = 0; a < w; ++a) coeff[a] += proj * eig.vectors(a, c).real();
    }

    AlgebraElement k = AlgebraElement::zero(target);
    for (int a = 0; a < w; ++a) {
      if (coeff[a] == 0.0) continue;
      AlgebraElement g = gamma(block_element(source, b, hunits[words[a].letters[0]]));
      for (size_t i = 1; i < words[a].letters.size(); ++i)
        g = g * gamma(block_element(source, b, hunits[words[a].letters[i]]));
      k += cplx(coeff[a]) * g;
    }
    k_ops.push_back(std::move(k));
    herm_offset += nb;
  }

  RealLinearMap out{source, target, {}};
  int off = 0;
  for (int b = 0; b < source.num_blocks(); ++b) {
    const int nb = source.block_dims[b] * source.block_dims[b];
    for (int k = 0; k < nb; ++k) out.images.push_back(herm_images[off + k]);
    for (int k = 0; k < nb; ++k) out.images.push_back(k_ops[b] * herm_images[off + k]);
    off += nb;
  }

  auto rep = check_associative_hom(out, 20, 771, 1e-8);
  if (!rep.passed())
    throw NotHomomorphism("extension failed associative check, residual " +
                          std::to_string(rep.max_residual()));
  return out;
}

LinearSplit split_linear_antilinear(const RealLinearMap& map, double tol) {
  auto rep = check_associative_hom(map, 20, 4452, tol);
  if (!rep.passed())
    throw NotHomomorphism("split: map is not an associative homomorphism (residual " +
                          std::to_string(rep.max_residual()) + ")");

  AlgebraElement iunit = cplx(0, 1) * AlgebraElement::identity(map.source);
  LinearSplit split{apply(map, iunit), {}, {}};
  const AlgebraElement unit = AlgebraElement::identity(map.target);
  if (frob_dist(split.k * split.k, cplx(-1) * unit) > tol * unit.frob_norm())
    throw BadSquareRoot("Gamma(i1)^2 deviates from -1");
  if (frob_dist(split.k.adjoint(), cplx(-1) * split.k) > tol * unit.frob_norm())
    throw BadSquareRoot("Gamma(i1) is not anti-Hermitian");
  for (const auto& im : map.images)
    if (frob_dist(split.k * im, im * split.k) > tol * std::max(1.0, im.frob_norm()))
      throw NotHomomorphism("Gamma(i1) does not commute with the image algebra");

  split.plus_projector = cplx(0.5) * (unit - cplx(0, 1) * split.k);
  split.minus_projector = cplx(0.5) * (unit + cplx(0, 1) * split.k);
  return split;
}

// ---------------------------------------------------------------------------
// Canonical form

CanonicalForm canonical_decompose(const RealLinearMap& map) {
  {
    auto rep = check_associative_hom(map, 20, 9107, 1e-8);
    if (!rep.passed()) {
      std::string worst;
      double worst_r = -1.0;
      for (const auto& it : rep.items)
        if (!it.pass && it.residual > worst_r) {
          worst_r = it.residual;
          worst = it.name;
        }
      throw NotHomomorphism("not an associative homomorphism: " + worst + " residual " +
                            std::to_string(worst_r));
    }
  }

  const int nsrc = map.source.num_blocks();
  const int ntgt = map.target.num_blocks();
  CanonicalForm form;
  form.p.assign(nsrc, std::vector<int>(ntgt, 0));
  form.q.assign(nsrc, std::vector<int>(ntgt, 0));

  std::vector<AlgebraElement> eplus, eminus;
  for (int i = 0; i < nsrc; ++i) {
    AlgebraElement z = block_element(map.source, i, CMatrix::identity(map.source.block_dims[i]));
    AlgebraElement zi = apply(map, z);
    AlgebraElement iz = cplx(0, 1) * z;
    AlgebraElement ki = apply(map, iz);
    if (frob_dist(ki * ki, cplx(-1) * zi) > 1e-8 * std::max(1.0, zi.frob_norm()))
      throw BadSquareRoot("Gamma(i z)^2 deviates from -Gamma(z)");
    eplus.push_back(cplx(0.5) * (zi - cplx(0, 1) * ki));
    eminus.push_back(cplx(0.5) * (zi + cplx(0, 1) * ki));
  }

  for (int i = 0; i < nsrc; ++i) {
    CMatrix e11(map.source.block_dims[i], map.source.block_dims[i]);
    e11(0, 0) = 1.0;
    AlgebraElement fe = apply(map, block_element(map.source, i, e11));
    for (int j = 0; j < ntgt; ++j) {
      double pt = (eplus[i] * fe).blocks[j].trace().real();
      double qt = (eminus[i] * fe).blocks[j].trace().real();
      long pr = std::lround(pt), qr = std::lround(qt);
      if (std::abs(pt - pr) > 1e-6 || std::abs(qt - qr) > 1e-6 || pr < 0 || qr < 0)
        throw MultiplicityNonInteger("multiplicity traces " + std::to_string(pt) + ", " +
                                     std::to_string(qt) + " are not integers");
      form.p[i][j] = static_cast<int>(pr);
      form.q[i][j] = static_cast<int>(qr);
    }
  }

  for (int j = 0; j < ntgt; ++j) {
    int acc = 0;
    for (int i = 0; i < nsrc; ++i)
      acc += (form.p[i][j] + form.q[i][j]) * map.source.block_dims[i];
    if (acc != map.target.block_dims[j])
      throw AccountingMismatch("multiplicities do not account for target block " +
                               std::to_string(j));
  }

  for (int j = 0; j < ntgt; ++j) {
    const int mj = map.target.block_dims[j];
    CMatrix u(mj, mj);
    int col = 0;
    for (int i = 0; i < nsrc; ++i) {
      const int ni = map.source.block_dims[i];
      const BlockIndex ix = block_index(map.source, i);

      // Images of the source matrix units, projected to target block j. These
      // drive the averaging construction below: for random Y,
      //   V = sum_{r,s} P Gamma(E_rs) Y E_sr
      // satisfies P Gamma(B) V = V B for every B (and the conjugated variant
      // in the antilinear sector), so orthonormalized random draws span the
      // intertwiner space without a large nullspace solve.
      std::vector<CMatrix> unit_images(static_cast<size_t>(ni) * ni);
      for (int r = 0; r < ni; ++r)
        for (int s = 0; s < ni; ++s)
          unit_images[static_cast<size_t>(r) * ni + s] = image_of_unit(map, ix, r, s).blocks[j];

      auto solve_part = [&](const AlgebraElement& proj, int expected, uint64_t salt,
                            const char* what) {
        std::vector<CMatrix> vs;
        if (expected == 0) return vs;
        std::vector<CMatrix> projected(unit_images.size());
        for (size_t k = 0; k < unit_images.size(); ++k)
          projected[k] = proj.blocks[j] * unit_images[k];
        Rng rng(0xa076'1d64'78bd'642fULL ^ (salt * 1315423911ULL));
        SpanBuilder span;
        for (int draw = 0; draw < expected + 6 && span.dim() < expected; ++draw) {
          CMatrix y = rng.matrix(mj, ni);
          CMatrix v(mj, ni);
          for (int r = 0; r < ni; ++r)
            for (int s = 0; s < ni; ++s) {
              const CMatrix& g = projected[static_cast<size_t>(r) * ni + s];
              for (int a = 0; a < mj; ++a) {
                cplx acc = 0.0;
                for (int b = 0; b < mj; ++b) acc += g(a, b) * y(b, s);
                v(a, r) += acc;
              }
            }
          if (span.add(v)) vs.push_back(span.basis().back());
        }
        if (static_cast<int>(vs.size()) != expected)
          throw IntertwinerRankMismatch(std::string(what) + ": intertwiner space dimension " +
                                        std::to_string(vs.size()) + " < multiplicity " +
                                        std::to_string(expected));
        return vs;
      };

      auto emit = [&](std::vector<CMatrix> vs, const char* what) {
        for (auto& v : vs) {
          fix_copy_phase(v);
          v *= cplx(std::sqrt(static_cast<double>(ni)));
          if (frob_dist(v.adjoint() * v, CMatrix::identity(ni)) > 1e-6 * ni)
            throw IntertwinerRankMismatch(std::string(what) +
                                          ": scaled intertwiner is not an isometry");
          for (int r = 0; r < mj; ++r)
            for (int c = 0; c < ni; ++c) u(r, col + c) = v(r, c);
          col += ni;
        }
      };

      emit(solve_part(eplus[i], form.p[i][j], 2 * (static_cast<uint64_t>(i) * ntgt + j),
                      "linear part"),
           "linear part");
      // The antilinear sector intertwines with the entrywise conjugate of the
      // source: Delta(B) = E_minus Gamma(conj(B)) is linear and multiplicative,
      // and matrix units are real, so the same construction applies.
      emit(solve_part(eminus[i], form.q[i][j], 2 * (static_cast<uint64_t>(i) * ntgt + j) + 1,
                      "antilinear part"),
           "antilinear part");
    }
    if (frob_dist(u * u.adjoint(), CMatrix::identity(mj)) > 1e-7 * mj)
      throw IntertwinerRankMismatch("assembled intertwiners are not unitary on target block " +
                                    std::to_string(j));
    form.unitary.push_back(std::move(u));
  }
  return form;
}

RealLinearMap build_from_canonical(const CanonicalForm& form, const StarAlgebraSpec& source,
                                   const StarAlgebraSpec& target) {
  const int nsrc = source.num_blocks();
  const int ntgt = target.num_blocks();
  if (static_cast<int>(form.p.size()) != nsrc || static_cast<int>(form.q.size()) != nsrc)
    throw SpecMismatch("canonical form has the wrong multiplicity shape");
  for (int j = 0; j < ntgt; ++j) {
    int acc = 0;
    for (int i = 0; i < nsrc; ++i) acc += (form.p[i][j] + form.q[i][j]) * source.block_dims[i];
    if (acc != target.block_dims[j])
      throw AccountingMismatch("sum_i (p_ij + q_ij) n_i != m_j for target block " +
                               std::to_string(j));
  }
  if (static_cast<int>(form.unitary.size()) != ntgt)
    throw SpecMismatch("canonical form needs one unitary per target block");
  for (int j = 0; j < ntgt; ++j) {
    const CMatrix& u = form.unitary[j];
    if (u.rows() != target.block_dims[j] || u.cols() != target.block_dims[j])
      throw SpecMismatch("unitary block shape mismatch");
    if (frob_dist(u * u.adjoint(), CMatrix::identity(u.rows())) > 1e-12 * std::max(1, u.rows()))
      throw BadUnitary("canonical-form block is not unitary within 1e-12");
  }

  auto build_image = [&](const AlgebraElement& x) {
    AlgebraElement out = AlgebraElement::zero(target);
    for (int j = 0; j < ntgt; ++j) {
      const int mj = target.block_dims[j];
      CMatrix middle(mj, mj);
      int off = 0;
      for (int i = 0; i < nsrc; ++i) {
        const int ni = source.block_dims[i];
        for (int copy = 0; copy < form.p[i][j]; ++copy) {
          for (int r = 0; r < ni; ++r)
            for (int c = 0; c < ni; ++c) middle(off + r, off + c) = x.blocks[i](r, c);
          off += ni;
        }
        CMatrix cj = x.blocks[i].conj();
        for (int copy = 0; copy < form.q[i][j]; ++copy) {
          for (int r = 0; r < ni; ++r)
            for (int c = 0; c < ni; ++c) middle(off + r, off + c) = cj(r, c);
          off += ni;
        }
      }
      out.blocks[j] = form.unitary[j] * middle * form.unitary[j].adjoint();
    }
    return out;
  };
  return RealLinearMap::from_function(source, target, build_image);
}

double assert_canonical_equivalence(const RealLinearMap& map, const CanonicalForm& form,
                                    int samples, double tol) {
  (void)tol;
  RealLinearMap rebuilt = build_from_canonical(form, map.source, map.target);
  Rng rng(20260823);
  double worst = 0.0;
  for (int s = 0; s < samples; ++s) {
    AlgebraElement x = random_element(map.source, rng);
    worst = std::max(worst, frob_dist(apply(map, x), apply(rebuilt, x)) /
                                std::max(1.0, x.frob_norm()));
  }
  return worst;
}

CompareResult compare_encodings(const RealLinearMap& a, const RealLinearMap& b) {
  if (a.source != b.source || a.target != b.target)
    throw SpecMismatch("compare_encodings: source/target specs differ");
  CompareResult res;
  res.form_a = canonical_decompose(a);
  res.form_b = canonical_decompose(b);
  if (res.form_a.p != res.form_b.p || res.form_a.q != res.form_b.q) {
    res.equivalent = false;
    return res;
  }
  res.equivalent = true;
  for (size_t j = 0; j < res.form_a.unitary.size(); ++j)
    res.witness.push_back(res.form_b.unitary[j] * res.form_a.unitary[j].adjoint());

  Rng rng(5150);
  for (int s = 0; s < 20; ++s) {
    AlgebraElement x = random_element(a.source, rng);
    AlgebraElement ya = apply(a, x);
    AlgebraElement yb = apply(b, x);
    for (size_t j = 0; j < res.witness.size(); ++j) {
      double d = frob_dist(yb.blocks[j],
                           res.witness[j] * ya.blocks[j] * res.witness[j].adjoint()) /
                 std::max(1.0, x.frob_norm());
      res.residual = std::max(res.residual, d);
    }
  }
  return res;
}

}  // namespace encdec
