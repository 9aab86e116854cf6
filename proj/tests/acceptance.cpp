// Acceptance gate: one pass/fail line per criterion, nonzero exit on failure.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "encdec/encoding.hpp"
#include "encdec/fermions.hpp"

using namespace encdec;
using clk = std::chrono::steady_clock;

namespace {

int g_failures = 0;

void report(int idx, const std::string& what, bool ok, double seconds, double limit) {
  const bool in_time = limit <= 0.0 || seconds < limit;
  if (!ok || !in_time) ++g_failures;
  std::printf("criterion %2d: %s  (%.2f s%s)  %s\n", idx, (ok && in_time) ? "PASS" : "FAIL",
              seconds, in_time ? "" : " OVER BUDGET", what.c_str());
  std::fflush(stdout);
}

template <typename F>
void run(int idx, const std::string& what, double limit_s, F&& body) {
  const auto t0 = clk::now();
  bool ok = false;
  try {
    ok = body();
  } catch (const std::exception& ex) {
    std::printf("criterion %2d: exception: %s\n", idx, ex.what());
    ok = false;
  }
  const double s = std::chrono::duration<double>(clk::now() - t0).count();
  report(idx, what, ok, s, limit_s);
}

// --- criterion 4/5 helpers --------------------------------------------------

struct RandomForm {
  CanonicalForm form;
  StarAlgebraSpec source;
  StarAlgebraSpec target;
};

/// Random multiplicity matrices over the given source blocks, every target
/// block nonempty, total target dimension bounded.
RandomForm random_form(const std::vector<int>& source_dims, int max_total, Rng& rng,
                       uint64_t unitary_salt) {
  RandomForm rf;
  rf.source.block_dims = source_dims;
  const int nsrc = static_cast<int>(source_dims.size());
  const int ntgt = 1 + static_cast<int>(rng.uniform() * 2.0);

  rf.form.p.assign(nsrc, std::vector<int>(ntgt, 0));
  rf.form.q.assign(nsrc, std::vector<int>(ntgt, 0));
  for (int j = 0; j < ntgt; ++j) {
    int mj = 0;
    for (int attempt = 0; mj == 0; ++attempt) {
      for (int i = 0; i < nsrc; ++i) {
        const int p = static_cast<int>(rng.uniform() * 3.0);  // 0..2
        const int q = static_cast<int>(rng.uniform() * 2.0);  // 0..1
        rf.form.p[i][j] = p;
        rf.form.q[i][j] = q;
        mj += (p + q) * source_dims[i];
      }
      if (mj == 0 && attempt > 4) {
        rf.form.p[0][j] = 1;
        mj = source_dims[0];
      }
    }
    rf.target.block_dims.push_back(mj);
  }
  // Every source block needs at least one copy somewhere, or the map would
  // kill it and could not preserve spectra.
  for (int i = 0; i < nsrc; ++i) {
    int copies = 0;
    for (int j = 0; j < ntgt; ++j) copies += rf.form.p[i][j] + rf.form.q[i][j];
    if (copies == 0) {
      rf.form.p[i][0] = 1;
      rf.target.block_dims[0] += source_dims[i];
    }
  }
  // Trim to the total-dimension budget by dropping copies where possible.
  int total = 0;
  for (int m : rf.target.block_dims) total += m;
  for (int j = 0; j < ntgt && total > max_total; ++j)
    for (int i = 0; i < nsrc && total > max_total; ++i) {
      while (rf.form.p[i][j] + rf.form.q[i][j] > 1 && total > max_total) {
        if (rf.form.p[i][j] > 0)
          --rf.form.p[i][j];
        else
          --rf.form.q[i][j];
        rf.target.block_dims[j] -= source_dims[i];
        total -= source_dims[i];
      }
    }
  for (int j = 0; j < ntgt; ++j)
    rf.form.unitary.push_back(
        random_unitary(rf.target.block_dims[j], unitary_salt ^ (0x9e37ULL * (j + 1))));
  return rf;
}

bool roundtrip_exact(const RandomForm& rf, uint64_t seed, double tol, double* worst) {
  const RealLinearMap map = build_from_canonical(rf.form, rf.source, rf.target);
  double w = check_spectrum_preserving(map, 8, seed, tol).max_residual();
  w = std::max(w, check_convexity(map, 8, seed + 1, tol).max_residual());
  w = std::max(w, check_jordan_hom(map, 8, seed + 2, tol).max_residual());
  const CanonicalForm back = canonical_decompose(map);
  const bool exact = back.p == rf.form.p && back.q == rf.form.q;
  w = std::max(w, assert_canonical_equivalence(map, back, 8, tol));
  *worst = std::max(*worst, w);
  return exact && w <= tol;
}

// Quaternion product, for the embedding check.
void quat_mul(const double x[4], const double y[4], double out[4]) {
  out[0] = x[0] * y[0] - x[1] * y[1] - x[2] * y[2] - x[3] * y[3];
  out[1] = x[0] * y[1] + x[1] * y[0] + x[2] * y[3] - x[3] * y[2];
  out[2] = x[0] * y[2] - x[1] * y[3] + x[2] * y[0] + x[3] * y[1];
  out[3] = x[0] * y[3] + x[1] * y[2] - x[2] * y[1] + x[3] * y[0];
}

}  // namespace

int main() {
  run(1, "CAR relations for both constructions, 1..5 modes", 5.0, [] {
    for (int n = 1; n <= 5; ++n) {
      if (car_residual(jordan_wigner(n)) > 1e-12) return false;
      if (car_residual(bravyi_kitaev(n)) > 1e-12) return false;
    }
    return true;
  });

  run(2, "full generator closure is simple of dimension 4^n, 1..3 modes", 30.0, [] {
    for (int n = 1; n <= 3; ++n) {
      const SpannedSubalgebra full = algebra_closure(jordan_wigner(n).annihilators, true);
      if (full.dim() != (1 << (2 * n))) return false;
      if (center(full).dim() != 1) return false;
    }
    return true;
  });

  run(3, "even algebra dimension and two-block split, 2..4 modes", 60.0, [] {
    for (int n = 2; n <= 4; ++n) {
      const int d = 1 << (n - 1);
      const EvenDecomposition dec = even_decompose(jordan_wigner(n), 1000 + n);
      if (dec.even.dim() != (1 << (2 * n - 1))) return false;
      if (dec.iso.spec.block_dims != std::vector<int>{d, d}) return false;
      if (dec.projection_match > 1e-8) return false;
    }
    return true;
  });

  run(4, "100 random single-block canonical forms round-trip exactly", 120.0, [] {
    Rng rng(20240817);
    double worst = 0.0;
    for (int c = 0; c < 100; ++c) {
      const int n = 1 + c % 3;
      const RandomForm rf = random_form({n}, 24, rng, 7000 + c);
      if (!roundtrip_exact(rf, 100 + 17 * c, 1e-8, &worst)) {
        std::printf("  case %d failed (worst residual %.3e)\n", c, worst);
        return false;
      }
    }
    return true;
  });

  run(5, "50 random two-block-source forms recover exact multiplicities", 60.0, [] {
    Rng rng(555001);
    double worst = 0.0;
    for (int c = 0; c < 50; ++c) {
      const RandomForm rf = random_form({2, 2}, 24, rng, 9000 + c);
      if (!roundtrip_exact(rf, 300 + 13 * c, 1e-8, &worst)) {
        std::printf("  case %d failed (worst residual %.3e)\n", c, worst);
        return false;
      }
      // Accounting identity, exactly.
      for (int j = 0; j < static_cast<int>(rf.target.block_dims.size()); ++j) {
        int acc = 0;
        for (int i = 0; i < 2; ++i) acc += (rf.form.p[i][j] + rf.form.q[i][j]) * 2;
        if (acc != rf.target.block_dims[j]) return false;
      }
    }
    return true;
  });

  run(6, "orthogonal projection pairs anticommute under the map", 0.0, [] {
    CanonicalForm form;
    form.p = {{2}};
    form.q = {{1}};
    form.unitary = {random_unitary(9, 424242)};
    const StarAlgebraSpec source{{3}};
    const RealLinearMap map = build_from_canonical(form, source, StarAlgebraSpec{{9}});
    Rng rng(606060);
    int pairs = 0;
    while (pairs < 200) {
      const CMatrix h = rng.hermitian(3);
      const auto spectral = jordan_spectral_decompose(h);
      for (size_t u = 0; u < spectral.size() && pairs < 200; ++u)
        for (size_t v = u + 1; v < spectral.size() && pairs < 200; ++v) {
          const AlgebraElement gp = apply(map, AlgebraElement{source, {spectral[u].second}});
          const AlgebraElement gq = apply(map, AlgebraElement{source, {spectral[v].second}});
          const double r = (gp * gq + gq * gp).frob_norm();
          if (r > 1e-10) return false;
          ++pairs;
        }
    }
    return true;
  });

  run(7, "unique associative extension of the transpose automorphism", 0.0, [] {
    for (int n = 2; n <= 3; ++n) {
      const StarAlgebraSpec spec{{n}};
      std::vector<AlgebraElement> herm_images;
      for (const AlgebraElement& h : canonical_hermitian_basis(spec))
        herm_images.push_back(AlgebraElement{spec, {h.blocks[0].transpose()}});
      const RealLinearMap fwd = extend_jordan_hom(herm_images, spec, spec, WordOrder::Forward);
      const RealLinearMap rev = extend_jordan_hom(herm_images, spec, spec, WordOrder::Reversed);
      const RealLinearMap conj = RealLinearMap::conjugation(spec);
      for (size_t i = 0; i < fwd.images.size(); ++i) {
        if (frob_dist(fwd.images[i].blocks[0], conj.images[i].blocks[0]) > 1e-12) return false;
        if (frob_dist(fwd.images[i].blocks[0], rev.images[i].blocks[0]) > 1e-8) return false;
      }
    }
    return true;
  });

  run(8, "the two standard fermionic encodings are unitarily equivalent", 30.0, [] {
    for (int n = 2; n <= 3; ++n) {
      const CompareResult cmp = compare_encodings(rep_as_encoding(jordan_wigner(n)),
                                                  rep_as_encoding(bravyi_kitaev(n)));
      if (!cmp.equivalent || cmp.residual > 1e-8) return false;
    }
    return true;
  });

  run(9, "quaternion embedding is R-linear and multiplicative", 0.0, [] {
    Rng rng(909090);
    for (int c = 0; c < 100; ++c) {
      double x[4], y[4], xy[4];
      for (double& v : x) v = rng.gaussian();
      for (double& v : y) v = rng.gaussian();
      quat_mul(x, y, xy);
      const CMatrix ex = quaternion_embed(x[0], x[1], x[2], x[3]);
      const CMatrix ey = quaternion_embed(y[0], y[1], y[2], y[3]);
      const CMatrix exy = quaternion_embed(xy[0], xy[1], xy[2], xy[3]);
      if (frob_dist(ex * ey, exy) > 1e-12 * std::max(1.0, exy.frob_norm())) return false;
      const double lam = rng.gaussian();
      const CMatrix lin = quaternion_embed(x[0] + lam * y[0], x[1] + lam * y[1],
                                           x[2] + lam * y[2], x[3] + lam * y[3]);
      if (frob_dist(lin, ex + lam * ey) > 1e-12 * std::max(1.0, lin.frob_norm())) return false;
    }
    return true;
  });

  run(10, "negative controls are rejected", 0.0, [] {
    const StarAlgebraSpec m2{{2}};
    const RealLinearMap doubling =
        RealLinearMap::from_function(m2, m2, [](const AlgebraElement& x) {
          AlgebraElement y = x;
          y *= 2.0;
          return y;
        });
    if (check_spectrum_preserving(doubling, 10, 1, 1e-8).passed()) return false;

    Rng rng(777);
    const CMatrix t = rng.matrix(2, 2);
    const CMatrix s = CMatrix::identity(2) + cplx(0.2) * (t * t.adjoint());
    const cplx det = s(0, 0) * s(1, 1) - s(0, 1) * s(1, 0);
    CMatrix sinv(2, 2);
    sinv(0, 0) = s(1, 1) / det;
    sinv(1, 1) = s(0, 0) / det;
    sinv(0, 1) = -s(0, 1) / det;
    sinv(1, 0) = -s(1, 0) / det;
    const RealLinearMap skew =
        RealLinearMap::from_function(m2, m2, [&](const AlgebraElement& x) {
          AlgebraElement y = x;
          y.blocks[0] = s * x.blocks[0] * sinv;
          return y;
        });
    if (check_jordan_hom(skew, 10, 2, 1e-8).passed()) return false;

    RealLinearMap perturbed = RealLinearMap::identity(m2);
    perturbed.images[2].blocks[0](0, 0) += 1e-3;
    try {
      canonical_decompose(perturbed);
      return false;  // must be rejected
    } catch (const NotHomomorphism&) {
    }
    return true;
  });

  if (g_failures == 0) {
    std::printf("all criteria passed\n");
    return 0;
  }
  std::printf("%d criteria failed\n", g_failures);
  return 1;
}
