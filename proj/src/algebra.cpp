#include "encdec/algebra.hpp"

#include <algorithm>
#include <cmath>

namespace encdec {

int StarAlgebraSpec::total_dim() const {
  int d = 0;
  for (int n : block_dims) d += n * n;
  return d;
}

AlgebraElement AlgebraElement::zero(const StarAlgebraSpec& spec) {
  AlgebraElement e{spec, {}};
  for (int n : spec.block_dims) e.blocks.push_back(CMatrix::zero(n, n));
  return e;
}

AlgebraElement AlgebraElement::identity(const StarAlgebraSpec& spec) {
  AlgebraElement e{spec, {}};
  for (int n : spec.block_dims) e.blocks.push_back(CMatrix::identity(n));
  return e;
}

AlgebraElement AlgebraElement::adjoint() const {
  AlgebraElement e{spec, {}};
  for (const auto& b : blocks) e.blocks.push_back(b.adjoint());
  return e;
}

AlgebraElement AlgebraElement::conj() const {
  AlgebraElement e{spec, {}};
  for (const auto& b : blocks) e.blocks.push_back(b.conj());
  return e;
}

double AlgebraElement::frob_norm() const {
  double s = 0.0;
  for (const auto& b : blocks) {
    double f = b.frob_norm();
    s += f * f;
  }
  return std::sqrt(s);
}

cplx AlgebraElement::trace() const {
  cplx t = 0.0;
  for (const auto& b : blocks) t += b.trace();
  return t;
}

bool AlgebraElement::is_hermitian(double tol) const {
  for (const auto& b : blocks)
    if (!b.is_hermitian(tol)) return false;
  return true;
}

AlgebraElement& AlgebraElement::operator+=(const AlgebraElement& o) {
  if (spec != o.spec) throw SpecMismatch("element add: spec mismatch");
  for (size_t i = 0; i < blocks.size(); ++i) blocks[i] += o.blocks[i];
  return *this;
}

AlgebraElement& AlgebraElement::operator-=(const AlgebraElement& o) {
  if (spec != o.spec) throw SpecMismatch("element sub: spec mismatch");
  for (size_t i = 0; i < blocks.size(); ++i) blocks[i] -= o.blocks[i];
  return *this;
}

AlgebraElement& AlgebraElement::operator*=(cplx s) {
  for (auto& b : blocks) b *= s;
  return *this;
}

AlgebraElement& AlgebraElement::add_scaled(const AlgebraElement& o, cplx s) {
  if (spec != o.spec) throw SpecMismatch("element add_scaled: spec mismatch");
  for (size_t i = 0; i < blocks.size(); ++i) blocks[i].add_scaled(o.blocks[i], s);
  return *this;
}

AlgebraElement operator+(AlgebraElement a, const AlgebraElement& b) { return a += b; }
AlgebraElement operator-(AlgebraElement a, const AlgebraElement& b) { return a -= b; }
AlgebraElement operator*(cplx s, AlgebraElement a) { return a *= s; }

AlgebraElement operator*(const AlgebraElement& a, const AlgebraElement& b) {
  if (a.spec != b.spec) throw SpecMismatch("element mul: spec mismatch");
  AlgebraElement out{a.spec, {}};
  for (size_t i = 0; i < a.blocks.size(); ++i) out.blocks.push_back(a.blocks[i] * b.blocks[i]);
  return out;
}

double frob_dist(const AlgebraElement& a, const AlgebraElement& b) {
  if (a.spec != b.spec) throw SpecMismatch("element dist: spec mismatch");
  double s = 0.0;
  for (size_t i = 0; i < a.blocks.size(); ++i) {
    double d = frob_dist(a.blocks[i], b.blocks[i]);
    s += d * d;
  }
  return std::sqrt(s);
}

std::vector<double> element_spectrum(const AlgebraElement& a, double cluster_tol) {
  std::vector<double> vals;
  for (const auto& b : a.blocks) {
    auto e = herm_eig(b);
    vals.insert(vals.end(), e.eigenvalues.begin(), e.eigenvalues.end());
  }
  return cluster_values(std::move(vals), cluster_tol);
}

// ---------------------------------------------------------------------------
// Span builders

bool SpanBuilder::add(const CMatrix& m) {
  const double scale = std::max(1.0, m.frob_norm());
  CMatrix v = m;
  for (int pass = 0; pass < 2; ++pass) {
    for (const auto& b : basis_) v.add_scaled(b, -hs_inner(b, v));
    // the projected norm only shrinks in the second pass, so a candidate that
    // is already below the drop tolerance can be rejected after one pass
    if (v.frob_norm() <= drop_tol_ * scale) return false;
  }
  const double nrm = v.frob_norm();
  v *= cplx(1.0 / nrm);
  basis_.push_back(std::move(v));
  return true;
}

double SpanBuilder::residual(const CMatrix& m) const {
  CMatrix v = m;
  for (const auto& b : basis_) v.add_scaled(b, -hs_inner(b, v));
  return v.frob_norm();
}

std::vector<cplx> SpanBuilder::coefficients(const CMatrix& m) const {
  std::vector<cplx> c;
  c.reserve(basis_.size());
  for (const auto& b : basis_) c.push_back(hs_inner(b, m));
  return c;
}

bool RealSpanBuilder::add(const CMatrix& m) {
  const double scale = std::max(1.0, m.frob_norm());
  CMatrix v = m;
  for (int pass = 0; pass < 2; ++pass) {
    for (const auto& b : basis_) v.add_scaled(b, -hs_inner(b, v).real());
    if (v.frob_norm() <= drop_tol_ * scale) return false;
  }
  const double nrm = v.frob_norm();
  v *= cplx(1.0 / nrm);
  basis_.push_back(std::move(v));
  return true;
}

double RealSpanBuilder::residual(const CMatrix& m) const {
  CMatrix v = m;
  for (const auto& b : basis_) v.add_scaled(b, -hs_inner(b, v).real());
  return v.frob_norm();
}

std::vector<double> RealSpanBuilder::coefficients(const CMatrix& m) const {
  std::vector<double> c;
  c.reserve(basis_.size());
  for (const auto& b : basis_) c.push_back(hs_inner(b, m).real());
  return c;
}

// ---------------------------------------------------------------------------
// Products and closures

CMatrix jordan_product(const CMatrix& a, const CMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols() || !a.square())
    throw DimensionMismatch("jordan_product: shape mismatch");
  CMatrix out = a * b + b * a;
  out *= 0.5;
  return out;
}

AlgebraElement jordan_product(const AlgebraElement& a, const AlgebraElement& b) {
  AlgebraElement out = a * b + b * a;
  out *= 0.5;
  return out;
}

JordanBasis jordan_closure(const std::vector<CMatrix>& generators, bool include_unit) {
  if (generators.empty() && !include_unit) return {};
  const int n = include_unit && generators.empty() ? 0 : generators.front().rows();
  for (const auto& g : generators) {
    g.require_hermitian();
    if (g.rows() != n) throw DimensionMismatch("jordan_closure: mixed ambient dimensions");
  }
  RealSpanBuilder sb;
  if (include_unit) sb.add(CMatrix::identity(n));
  for (const auto& g : generators) sb.add(g);

  // Jordan multiplication is non-associative, so close under products of all
  // current basis pairs, not just basis x generators.
  bool grew = true;
  while (grew) {
    grew = false;
    const auto snapshot = sb.basis();
    const int d = static_cast<int>(snapshot.size());
    std::vector<CMatrix> candidates;
    candidates.reserve(static_cast<size_t>(d) * (d + 1) / 2);
    for (int i = 0; i < d; ++i)
      for (int j = i; j < d; ++j) candidates.push_back(CMatrix());
#pragma omp parallel for schedule(dynamic)
    for (int i = 0; i < d; ++i)
      for (int j = i; j < d; ++j) {
        CMatrix p = jordan_product(snapshot[i], snapshot[j]);
        // re-symmetrize rounding noise
        CMatrix h(n, n);
        for (int r = 0; r < n; ++r)
          for (int c = 0; c < n; ++c) h(r, c) = 0.5 * (p(r, c) + std::conj(p(c, r)));
        candidates[static_cast<size_t>(i) * d - i * (i + 1) / 2 + j] = std::move(h);
      }
    for (auto& cand : candidates)
      if (sb.add(cand)) grew = true;
  }
  return JordanBasis{n, sb.basis()};
}

SpannedSubalgebra algebra_closure(const std::vector<CMatrix>& generators, bool include_unit) {
  if (generators.empty() && !include_unit)
    throw DimensionMismatch("algebra_closure: empty generator set without unit");
  const int n = generators.empty() ? 0 : generators.front().rows();
  std::vector<CMatrix> gens;
  for (const auto& g : generators) {
    g.require_square();
    if (g.rows() != n) throw DimensionMismatch("algebra_closure: mixed ambient dimensions");
    gens.push_back(g);
  }
  // close the generator set under the involution
  const size_t ngen = gens.size();
  for (size_t i = 0; i < ngen; ++i) gens.push_back(gens[i].adjoint());

  SpanBuilder sb;
  if (include_unit) sb.add(CMatrix::identity(n));
  std::vector<CMatrix> frontier;
  for (const auto& g : gens)
    if (sb.add(g)) frontier.push_back(sb.basis().back());

  // Multiplication is bilinear, so closing against an orthonormal basis of the
  // generator span is equivalent to (and much cheaper than) closing against a
  // redundant generator list.
  const std::vector<CMatrix> gen_span = sb.basis();

  auto close_against = [&sb](const std::vector<CMatrix>& mult_set,
                             std::vector<CMatrix> frontier_set) {
    while (!frontier_set.empty()) {
      const int f = static_cast<int>(frontier_set.size());
      const int gcount = static_cast<int>(mult_set.size());
      std::vector<CMatrix> candidates(static_cast<size_t>(f) * gcount);
#pragma omp parallel for schedule(dynamic) collapse(2)
      for (int i = 0; i < f; ++i)
        for (int j = 0; j < gcount; ++j)
          candidates[static_cast<size_t>(i) * gcount + j] = frontier_set[i] * mult_set[j];
      std::vector<CMatrix> next;
      for (auto& cand : candidates)
        if (sb.add(cand)) next.push_back(sb.basis().back());
      frontier_set = std::move(next);
    }
  };

  auto random_combo = [](const std::vector<CMatrix>& basis, Rng& rng) {
    CMatrix z = CMatrix::zero(basis.front().rows(), basis.front().cols());
    for (const auto& b : basis) z.add_scaled(b, rng.gaussian_cplx());
    return z;
  };

  if (gen_span.size() <= 6) {
    close_against(gen_span, std::move(frontier));
  } else {
    // Shortcut for wide generator spans: two generic elements of the span
    // almost surely generate the same algebra, and closing against them needs
    // far fewer products. Verified on random pairs, with the exhaustive
    // closure as fallback.
    Rng rng(0x5e630aa2d9a56bbbULL);
    std::vector<CMatrix> mult_set;
    for (int t = 0; t < 2; ++t) {
      CMatrix z = random_combo(gen_span, rng);
      mult_set.push_back(z.adjoint());
      mult_set.push_back(std::move(z));
    }
    close_against(mult_set, std::move(frontier));
    bool closed = true;
    for (int t = 0; t < 8 && closed; ++t) {
      CMatrix p = random_combo(sb.basis(), rng) * random_combo(sb.basis(), rng);
      if (sb.residual(p) > 1e-8 * std::max(1.0, p.frob_norm())) closed = false;
    }
    if (!closed) close_against(gen_span, sb.basis());
  }

  SpannedSubalgebra alg;
  alg.ambient_dim = n;
  alg.basis = sb.basis();
  alg.contains_unit = include_unit || sb.residual(CMatrix::identity(n)) <= 1e-8 * std::sqrt(n);
  return alg;
}

double closure_residual(const SpannedSubalgebra& alg) {
  const int d = alg.dim();
  SpanBuilder sb;
  for (const auto& b : alg.basis) sb.add(b);
  double worst = 0.0;
#pragma omp parallel for schedule(dynamic) reduction(max : worst) collapse(2)
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) {
      CMatrix p = alg.basis[i] * alg.basis[j];
      double r = sb.residual(p) / std::max(1.0, p.frob_norm());
      worst = std::max(worst, r);
    }
  return worst;
}

void require_closed(const SpannedSubalgebra& alg, double tol) {
  for (int i = 0; i < alg.dim(); ++i)
    for (int j = i + 1; j < alg.dim(); ++j)
      if (std::abs(hs_inner(alg.basis[i], alg.basis[j])) > 1e-8)
        throw NotClosed("subalgebra basis is not orthonormal");
  if (closure_residual(alg) > tol)
    throw NotClosed("subalgebra basis is not closed under multiplication");
}

// ---------------------------------------------------------------------------
// Center and central projections

namespace {

CMatrix basis_combo(const std::vector<CMatrix>& basis, Rng& rng) {
  CMatrix z = CMatrix::zero(basis.front().rows(), basis.front().cols());
  for (const auto& b : basis) z.add_scaled(b, rng.gaussian_cplx());
  return z;
}

/// Finish a center computation: re-orthonormalize and detect the unit.
SpannedSubalgebra finish_center(std::vector<CMatrix> raw, int ambient) {
  SpanBuilder orth;
  for (const auto& b : raw) orth.add(b);
  SpannedSubalgebra cen;
  cen.ambient_dim = ambient;
  cen.basis = orth.basis();
  cen.contains_unit = orth.residual(CMatrix::identity(ambient)) <= 1e-8 * std::sqrt(ambient);
  return cen;
}

/// Exhaustive center computation via the Gram matrix of the commutator map.
SpannedSubalgebra center_via_gram(const SpannedSubalgebra& alg) {
  const int d = alg.dim();
  const int n = alg.ambient_dim;

  // Gram matrix of the stacked commutator map x -> ([x, b_j])_j over the basis.
  CMatrix gram(d, d);
#pragma omp parallel
  {
    CMatrix local(d, d);
#pragma omp for schedule(dynamic)
    for (int j = 0; j < d; ++j) {
      std::vector<CMatrix> comms(d);
      for (int k = 0; k < d; ++k)
        comms[k] = alg.basis[k] * alg.basis[j] - alg.basis[j] * alg.basis[k];
      for (int k = 0; k < d; ++k)
        for (int l = k; l < d; ++l) {
          cplx v = hs_inner(comms[k], comms[l]);
          local(k, l) += v;
          if (l != k) local(l, k) += std::conj(v);
        }
    }
#pragma omp critical(center_gram)
    gram += local;
  }

  auto eig = herm_eig(gram, 1e-8);
  const double thresh = 1e-12 * std::max(1.0, eig.eigenvalues.back());
  std::vector<CMatrix> raw;
  for (int c = 0; c < d; ++c) {
    if (eig.eigenvalues[c] > thresh) continue;
    CMatrix x = CMatrix::zero(n, n);
    for (int k = 0; k < d; ++k) x.add_scaled(alg.basis[k], eig.vectors(k, c));
    raw.push_back(std::move(x));
  }
  return finish_center(std::move(raw), n);
}

/// Center as the iterated centralizer of random algebra elements. Far fewer
/// commutators than the exhaustive Gram for large algebras; the result is
/// verified against fresh random elements and falls back to the Gram on doubt.
SpannedSubalgebra center_via_centralizer(const SpannedSubalgebra& alg) {
  const int n = alg.ambient_dim;
  Rng rng(0x2545f4914f6cdd1dULL);
  std::vector<CMatrix> cand = alg.basis;
  int stable = 0;
  for (int round = 0; round < 24 && stable < 2 && !cand.empty(); ++round) {
    const CMatrix z = basis_combo(alg.basis, rng);
    const int c = static_cast<int>(cand.size());
    std::vector<CMatrix> comm(c);
#pragma omp parallel for schedule(static)
    for (int u = 0; u < c; ++u) comm[u] = cand[u] * z - z * cand[u];
    CMatrix gram(c, c);
    for (int u = 0; u < c; ++u)
      for (int v = u; v < c; ++v) {
        const cplx g = hs_inner(comm[u], comm[v]);
        gram(u, v) = g;
        if (v != u) gram(v, u) = std::conj(g);
      }
    auto eig = herm_eig(gram, 1e-6);
    const double thresh = 1e-12 * std::max(1.0, eig.eigenvalues.back());
    int null_dim = 0;
    while (null_dim < c && eig.eigenvalues[null_dim] <= thresh) ++null_dim;
    if (null_dim == c) {
      ++stable;
      continue;
    }
    stable = 0;
    std::vector<CMatrix> next(null_dim, CMatrix::zero(n, n));
    for (int v = 0; v < null_dim; ++v)
      for (int u = 0; u < c; ++u) next[v].add_scaled(cand[u], eig.vectors(u, v));
    cand = std::move(next);
  }
  // verify each candidate really commutes with the whole algebra
  for (int t = 0; t < 5; ++t) {
    const CMatrix z = basis_combo(alg.basis, rng);
    for (const auto& x : cand)
      if (frob_dist(x * z, z * x) > 1e-8 * std::max(1.0, z.frob_norm())) return center_via_gram(alg);
  }
  return finish_center(std::move(cand), n);
}

/// Closure spot-check for large algebras: residuals of a few random products,
/// using Parseval on the (orthonormal) basis instead of a full product table.
void require_closed_sampled(const SpannedSubalgebra& alg, double tol) {
  const int d = alg.dim();
  for (int i = 0; i < d; ++i)
    for (int j = i; j < d; ++j) {
      const cplx g = hs_inner(alg.basis[i], alg.basis[j]);
      if (std::abs(g - (i == j ? cplx(1.0) : cplx(0.0))) > 1e-8)
        throw NotClosed("subalgebra basis is not orthonormal");
    }
  Rng rng(0x9d39247e33776d41ULL);
  for (int t = 0; t < 8; ++t) {
    const CMatrix p = basis_combo(alg.basis, rng) * basis_combo(alg.basis, rng);
    double res2 = std::pow(p.frob_norm(), 2);
    for (const auto& b : alg.basis) res2 -= std::norm(hs_inner(b, p));
    if (std::sqrt(std::max(0.0, res2)) > tol * std::max(1.0, p.frob_norm()))
      throw NotClosed("subalgebra basis is not closed under multiplication");
  }
}

}  // namespace

SpannedSubalgebra center(const SpannedSubalgebra& alg) {
  const bool small = alg.dim() <= 48 || alg.ambient_dim <= 64;
  if (small) {
    require_closed(alg);
    return center_via_gram(alg);
  }
  require_closed_sampled(alg, 1e-8);
  return center_via_centralizer(alg);
}

namespace {

/// Hermitian orthonormal real basis of a dagger-closed complex span.
std::vector<CMatrix> hermitian_basis(const std::vector<CMatrix>& basis) {
  RealSpanBuilder rb;
  for (const auto& b : basis) {
    CMatrix sym = b + b.adjoint();
    sym *= 0.5;
    CMatrix asym = b - b.adjoint();
    asym *= cplx(0.0, 0.5);
    rb.add(sym);
    rb.add(asym);
  }
  return rb.basis();
}

CMatrix random_combo_herm(const std::vector<CMatrix>& hbasis, Rng& rng) {
  CMatrix z = CMatrix::zero(hbasis.front().rows(), hbasis.front().cols());
  for (const auto& h : hbasis) z += cplx(rng.gaussian()) * h;
  return z;
}

/// Splits p along the spectral clusters of p h p; returns sub-projectors
/// ordered by ascending eigenvalue. h Hermitian, p an orthogonal projection.
std::vector<CMatrix> split_projector(const CMatrix& p, const CMatrix& h) {
  const int n = p.rows();
  CMatrix z = p * h * p;
  const double mu = z.frob_norm() + 2.0;
  CMatrix comp = CMatrix::identity(n) - p;
  comp *= mu;
  auto eig = herm_eig(z + comp, 1e-8);
  auto clusters = cluster_indices(eig.eigenvalues, 1e-6 * std::max(1.0, mu));
  std::vector<CMatrix> out;
  for (const auto& cl : clusters) {
    double mean = 0.0;
    for (int i : cl) mean += eig.eigenvalues[i];
    mean /= cl.size();
    if (std::abs(mean - mu) < 0.5) continue;  // kernel outside range(p)
    CMatrix proj = CMatrix::zero(n, n);
    for (int i : cl)
      for (int r = 0; r < n; ++r)
        for (int c = 0; c < n; ++c) proj(r, c) += eig.vectors(r, i) * std::conj(eig.vectors(c, i));
    out.push_back(std::move(proj));
  }
  return out;
}

/// Refine a projector list by splitting with random Hermitian elements drawn
/// from hbasis until `target` projectors are reached.
std::vector<CMatrix> refine_projectors(std::vector<CMatrix> projs,
                                       const std::vector<CMatrix>& hbasis, Rng& rng, int target,
                                       const char* what) {
  const int max_rounds = 30;
  for (int round = 0; round < max_rounds; ++round) {
    if (static_cast<int>(projs.size()) == target) return projs;
    if (static_cast<int>(projs.size()) > target)
      throw CenterDegenerate(std::string(what) + ": projector refinement overshot");
    CMatrix h = random_combo_herm(hbasis, rng);
    std::vector<CMatrix> next;
    for (const auto& p : projs) {
      auto parts = split_projector(p, h);
      next.insert(next.end(), parts.begin(), parts.end());
    }
    projs = std::move(next);
  }
  throw CenterDegenerate(std::string(what) + ": refinement did not converge");
}

}  // namespace

std::vector<CMatrix> minimal_central_projections(const SpannedSubalgebra& alg, uint64_t seed) {
  auto cen = center(alg);
  if (!cen.contains_unit)
    throw CenterDegenerate("minimal_central_projections: algebra is not unital");
  const int target = cen.dim();
  auto hcen = hermitian_basis(cen.basis);
  if (static_cast<int>(hcen.size()) != target)
    throw CenterDegenerate("minimal_central_projections: center is not dagger-closed");

  Rng rng(seed);
  std::vector<CMatrix> projs = {CMatrix::identity(alg.ambient_dim)};
  projs = refine_projectors(std::move(projs), hcen, rng, target, "central projections");

  // sanity: resolution of identity and pairwise orthogonality
  CMatrix sum = CMatrix::zero(alg.ambient_dim, alg.ambient_dim);
  for (const auto& p : projs) sum += p;
  if (frob_dist(sum, CMatrix::identity(alg.ambient_dim)) > 1e-10 * alg.ambient_dim)
    throw CenterDegenerate("central projections do not sum to the unit");
  for (size_t i = 0; i < projs.size(); ++i)
    for (size_t j = i + 1; j < projs.size(); ++j)
      if ((projs[i] * projs[j]).frob_norm() > 1e-8)
        throw CenterDegenerate("central projections are not orthogonal");
  return projs;
}

// ---------------------------------------------------------------------------
// Wedderburn decomposition

AlgebraElement WedderburnIso::forward(const CMatrix& x) const {
  AlgebraElement out = AlgebraElement::zero(spec);
  for (int i = 0; i < spec.num_blocks(); ++i) {
    const int n = spec.block_dims[i];
    const double m = multiplicities[i];
    for (int r = 0; r < n; ++r)
      for (int s = 0; s < n; ++s)
        out.blocks[i](r, s) = hs_inner(matrix_units[i][r * n + s], x) / m;
  }
  return out;
}

CMatrix WedderburnIso::backward(const AlgebraElement& x) const {
  if (x.spec != spec) throw SpecMismatch("WedderburnIso::backward: spec mismatch");
  const int N = matrix_units.front().front().rows();
  CMatrix out = CMatrix::zero(N, N);
  for (int i = 0; i < spec.num_blocks(); ++i) {
    const int n = spec.block_dims[i];
    for (int r = 0; r < n; ++r)
      for (int s = 0; s < n; ++s) out.add_scaled(matrix_units[i][r * n + s], x.blocks[i](r, s));
  }
  return out;
}

WedderburnIso wedderburn_decompose(const SpannedSubalgebra& alg, uint64_t seed) {
  auto mcps = minimal_central_projections(alg, seed);
  {
    // dagger closure via Parseval on the (orthonormal) basis
    for (size_t i = 0; i < alg.basis.size(); ++i)
      for (size_t j = i; j < alg.basis.size(); ++j) {
        const cplx g = hs_inner(alg.basis[i], alg.basis[j]);
        if (std::abs(g - (i == j ? cplx(1.0) : cplx(0.0))) > 1e-8)
          throw NotClosed("wedderburn_decompose: basis is not orthonormal");
      }
    for (const auto& b : alg.basis) {
      const CMatrix ad = b.adjoint();
      double res2 = std::pow(ad.frob_norm(), 2);
      for (const auto& c : alg.basis) res2 -= std::norm(hs_inner(c, ad));
      if (std::sqrt(std::max(0.0, res2)) > 1e-5)
        throw NotClosed("wedderburn_decompose: algebra is not dagger-closed");
    }
  }

  Rng rng(seed ^ 0x9e3779b97f4a7c15ULL);

  WedderburnIso iso;
  int dim_accum = 0;
  for (const auto& e : mcps) {
    // Compress onto range(e): every computation inside the block happens in
    // rank(e)-dimensional coordinates, which is much cheaper than the ambient.
    auto eig_e = herm_eig(e, 1e-8);
    const int namb = alg.ambient_dim;
    int rank = 0;
    for (double lam : eig_e.eigenvalues)
      if (lam > 0.5) ++rank;
    CMatrix range(namb, rank);
    {
      int c = 0;
      for (int i = 0; i < namb; ++i)
        if (eig_e.eigenvalues[i] > 0.5) {
          for (int r = 0; r < namb; ++r) range(r, c) = eig_e.vectors(r, i);
          ++c;
        }
    }
    const CMatrix range_adj = range.adjoint();

    SpanBuilder block_span;
    for (const auto& b : alg.basis) block_span.add(range_adj * b * range);
    const int d_e = block_span.dim();
    const int n = static_cast<int>(std::lround(std::sqrt(static_cast<double>(d_e))));
    if (n * n != d_e)
      throw NotSemisimple("block dimension is not a perfect square");
    if (rank % n != 0)
      throw NotSemisimple("block rank is not a multiple of the block dimension");
    const int mult = rank / n;

    const std::vector<CMatrix>& cbasis = block_span.basis();
    auto chbasis = hermitian_basis(cbasis);
    auto minimal =
        refine_projectors({CMatrix::identity(rank)}, chbasis, rng, n, "block minimal projections");

    // partial isometries v_s in p_1 A p_s with v_s v_s^dag = p_1, v_s^dag v_s = p_s
    std::vector<CMatrix> v(n);
    v[0] = minimal[0];
    for (int s = 1; s < n; ++s) {
      bool found = false;
      for (int attempt = 0; attempt < 16 && !found; ++attempt) {
        CMatrix x = CMatrix::zero(rank, rank);
        for (const auto& b : cbasis) x.add_scaled(b, rng.gaussian_cplx());
        CMatrix w = minimal[0] * x * minimal[s];
        const double lam = hs_inner(w, w).real() / mult;
        if (lam > 1e-6) {
          w *= cplx(1.0 / std::sqrt(lam));
          v[s] = std::move(w);
          found = true;
        }
      }
      if (!found) throw NotSemisimple("failed to connect minimal projections");
    }

    std::vector<CMatrix> units(static_cast<size_t>(n) * n);
    for (int r = 0; r < n; ++r)
      for (int s = 0; s < n; ++s) units[r * n + s] = range * (v[r].adjoint() * v[s]) * range_adj;

    iso.spec.block_dims.push_back(n);
    iso.multiplicities.push_back(mult);
    iso.matrix_units.push_back(std::move(units));
    dim_accum += d_e;
  }
  if (dim_accum != alg.dim())
    throw NotSemisimple("block dimensions do not account for the algebra dimension");

  // verify the isomorphism on random samples
  Rng vr(seed ^ 0xdeadbeefULL);
  for (int trial = 0; trial < 5; ++trial) {
    CMatrix x = CMatrix::zero(alg.ambient_dim, alg.ambient_dim);
    CMatrix y = CMatrix::zero(alg.ambient_dim, alg.ambient_dim);
    for (const auto& b : alg.basis) {
      x.add_scaled(b, vr.gaussian_cplx());
      y.add_scaled(b, vr.gaussian_cplx());
    }
    const double scale = std::max(1.0, x.frob_norm() * y.frob_norm());
    if (frob_dist(iso.forward(x * y), iso.forward(x) * iso.forward(y)) > 1e-8 * scale)
      throw NotSemisimple("matrix-unit system is not multiplicative");
    if (frob_dist(iso.backward(iso.forward(x)), x) > 1e-8 * std::max(1.0, x.frob_norm()))
      throw NotSemisimple("matrix-unit system does not reconstruct the algebra");
  }
  return iso;
}

std::vector<std::pair<double, CMatrix>> jordan_spectral_decompose(const CMatrix& a,
                                                                 double cluster_tol) {
  auto eig = herm_eig(a);
  const int n = a.rows();
  std::vector<std::pair<double, CMatrix>> out;
  for (const auto& cl : cluster_indices(eig.eigenvalues, cluster_tol)) {
    double mean = 0.0;
    CMatrix proj = CMatrix::zero(n, n);
    for (int i : cl) {
      mean += eig.eigenvalues[i];
      for (int r = 0; r < n; ++r)
        for (int c = 0; c < n; ++c) proj(r, c) += eig.vectors(r, i) * std::conj(eig.vectors(c, i));
    }
    out.emplace_back(mean / cl.size(), std::move(proj));
  }
  return out;
}

CMatrix quaternion_embed(double a, double b, double c, double d) {
  CMatrix m(2, 2);
  m(0, 0) = cplx(a, b);
  m(0, 1) = cplx(c, d);
  m(1, 0) = cplx(-c, d);
  m(1, 1) = cplx(a, -b);
  return m;
}

}  // namespace encdec
