#include <doctest.h>

#include <cmath>

#include "encdec/encoding.hpp"

using namespace encdec;

namespace {

StarAlgebraSpec spec(std::vector<int> dims) { return StarAlgebraSpec{std::move(dims)}; }

AlgebraElement from_blocks(const StarAlgebraSpec& sp, std::vector<CMatrix> blocks) {
  return AlgebraElement{sp, std::move(blocks)};
}

}  // namespace

TEST_CASE("canonical real basis is orthonormal and complete") {
  StarAlgebraSpec sp = spec({2, 3});
  auto basis = canonical_real_basis(sp);
  CHECK(static_cast<int>(basis.size()) == sp.real_dim());
  for (size_t i = 0; i < basis.size(); ++i)
    for (size_t j = 0; j < basis.size(); ++j) {
      double ip = element_real_inner(basis[i], basis[j]);
      CHECK(std::abs(ip - (i == j ? 1.0 : 0.0)) < 1e-12);
    }
}

TEST_CASE("apply reproduces the identity and conjugation maps") {
  StarAlgebraSpec sp = spec({2, 2});
  RealLinearMap id = RealLinearMap::identity(sp);
  RealLinearMap cj = RealLinearMap::conjugation(sp);
  Rng rng(7);
  for (int s = 0; s < 5; ++s) {
    AlgebraElement x = random_element(sp, rng);
    CHECK(frob_dist(apply(id, x), x) < 1e-12);
    CHECK(frob_dist(apply(cj, x), x.conj()) < 1e-12);
  }
}

TEST_CASE("axiom checks accept the transpose map and reject a scaling map") {
  StarAlgebraSpec sp = spec({3});
  RealLinearMap transpose = RealLinearMap::from_function(sp, sp, [&](const AlgebraElement& x) {
    return from_blocks(sp, {x.blocks[0].transpose()});
  });
  CHECK(check_spectrum_preserving(transpose, 10, 1, 1e-8).passed());
  CHECK(check_convexity(transpose, 10, 2, 1e-10).passed());
  CHECK(check_jordan_hom(transpose, 10, 3, 1e-8).passed());

  RealLinearMap doubling = RealLinearMap::from_function(sp, sp, [&](const AlgebraElement& x) {
    AlgebraElement y = x;
    y *= cplx(2.0);
    return y;
  });
  CHECK_FALSE(check_spectrum_preserving(doubling, 10, 4, 1e-8).passed());
  CHECK_FALSE(check_jordan_hom(doubling, 10, 5, 1e-8).passed());
  CHECK(check_convexity(doubling, 10, 6, 1e-10).passed());  // scaling is still real-linear

  RealLinearMap vconj = RealLinearMap::from_function(sp, sp, [&](const AlgebraElement& x) {
    CMatrix v = CMatrix::identity(3);
    v(1, 1) = 2.0;  // invertible but not unitary
    CMatrix vinv = CMatrix::identity(3);
    vinv(1, 1) = 0.5;
    return from_blocks(sp, {v * x.blocks[0] * vinv});
  });
  // multiplicative and unital, but not star-preserving or spectrum-preserving
  auto vrep = check_associative_hom(vconj, 10, 7, 1e-8);
  for (const auto& item : vrep.items)
    if (item.name.rfind("multiplicative", 0) == 0 || item.name == "unital") CHECK(item.pass);
  CHECK_FALSE(vrep.passed());
  CHECK_FALSE(check_spectrum_preserving(vconj, 10, 8, 1e-8).passed());
}

TEST_CASE("associative check rejects the transpose map") {
  StarAlgebraSpec sp = spec({2});
  RealLinearMap transpose = RealLinearMap::from_function(sp, sp, [&](const AlgebraElement& x) {
    return from_blocks(sp, {x.blocks[0].transpose()});
  });
  CHECK_FALSE(check_associative_hom(transpose, 10, 9, 1e-8).passed());
}

TEST_CASE("canonical decomposition of identity and conjugation") {
  StarAlgebraSpec sp = spec({3});
  CanonicalForm fid = canonical_decompose(RealLinearMap::identity(sp));
  CHECK(fid.p == std::vector<std::vector<int>>{{1}});
  CHECK(fid.q == std::vector<std::vector<int>>{{0}});

  CanonicalForm fcj = canonical_decompose(RealLinearMap::conjugation(sp));
  CHECK(fcj.p == std::vector<std::vector<int>>{{0}});
  CHECK(fcj.q == std::vector<std::vector<int>>{{1}});
}

TEST_CASE("round trip: random canonical forms from M_2 into a two-block target") {
  StarAlgebraSpec src = spec({2});
  StarAlgebraSpec tgt = spec({6, 4});
  for (uint64_t seed = 0; seed < 5; ++seed) {
    CanonicalForm form;
    form.p = {{2, 1}};
    form.q = {{1, 1}};
    form.unitary = {random_unitary(6, 100 + seed), random_unitary(4, 200 + seed)};
    RealLinearMap map = build_from_canonical(form, src, tgt);
    CHECK(check_associative_hom(map, 10, seed, 1e-10).passed());
    CanonicalForm rec = canonical_decompose(map);
    CHECK(rec.p == form.p);
    CHECK(rec.q == form.q);
    CHECK(assert_canonical_equivalence(map, rec, 20, 1e-8) < 1e-8);
  }
}

TEST_CASE("round trip: semisimple source M_2 + M_3") {
  StarAlgebraSpec src = spec({2, 3});
  StarAlgebraSpec tgt = spec({7, 5});
  CanonicalForm form;
  form.p = {{1, 1}, {1, 0}};  // 1*2 + 1*3 = 5... adjust below
  form.q = {{1, 0}, {0, 1}};
  // target block 0: (1+1)*2 + 1*3 = 7; block 1: 1*2 + 1*3 = 5
  form.unitary = {random_unitary(7, 31), random_unitary(5, 32)};
  RealLinearMap map = build_from_canonical(form, src, tgt);
  CanonicalForm rec = canonical_decompose(map);
  CHECK(rec.p == form.p);
  CHECK(rec.q == form.q);
  CHECK(assert_canonical_equivalence(map, rec, 20, 1e-8) < 1e-8);
}

TEST_CASE("build_from_canonical validates accounting and unitarity") {
  StarAlgebraSpec src = spec({2});
  StarAlgebraSpec tgt = spec({4});
  CanonicalForm bad_acct;
  bad_acct.p = {{1}};
  bad_acct.q = {{0}};
  bad_acct.unitary = {CMatrix::identity(4)};
  CHECK_THROWS_AS(build_from_canonical(bad_acct, src, tgt), AccountingMismatch);

  CanonicalForm bad_u;
  bad_u.p = {{2}};
  bad_u.q = {{0}};
  CMatrix u = CMatrix::identity(4);
  u(0, 0) = 2.0;
  bad_u.unitary = {u};
  CHECK_THROWS_AS(build_from_canonical(bad_u, src, tgt), BadUnitary);
}

TEST_CASE("canonical_decompose rejects maps that are not homomorphisms") {
  StarAlgebraSpec sp = spec({2});
  RealLinearMap doubling = RealLinearMap::from_function(sp, sp, [&](const AlgebraElement& x) {
    AlgebraElement y = x;
    y *= cplx(2.0);
    return y;
  });
  CHECK_THROWS_AS(canonical_decompose(doubling), NotHomomorphism);
}

TEST_CASE("linear/antilinear split of a mixed extension") {
  StarAlgebraSpec src = spec({2});
  StarAlgebraSpec tgt = spec({4});
  CanonicalForm form;
  form.p = {{1}};
  form.q = {{1}};
  form.unitary = {random_unitary(4, 55)};
  RealLinearMap map = build_from_canonical(form, src, tgt);
  LinearSplit split = split_linear_antilinear(map);
  const AlgebraElement unit = AlgebraElement::identity(tgt);
  CHECK(frob_dist(split.k * split.k, cplx(-1) * unit) < 1e-10);
  CHECK(frob_dist(split.plus_projector * split.plus_projector, split.plus_projector) < 1e-10);
  CHECK(frob_dist(split.plus_projector + split.minus_projector, unit) < 1e-12);
  // each sector has rank 2 = multiplicity * source dim
  CHECK(std::abs(split.plus_projector.blocks[0].trace().real() - 2.0) < 1e-8);
  CHECK(std::abs(split.minus_projector.blocks[0].trace().real() - 2.0) < 1e-8);
}

TEST_CASE("extend_jordan_hom recovers the conjugation extension and word orders agree") {
  StarAlgebraSpec sp = spec({3});
  RealLinearMap cj = RealLinearMap::conjugation(sp);
  std::vector<AlgebraElement> herm_images;
  for (const auto& h : canonical_hermitian_basis(sp)) herm_images.push_back(apply(cj, h));

  RealLinearMap fwd = extend_jordan_hom(herm_images, sp, sp, WordOrder::Forward);
  RealLinearMap rev = extend_jordan_hom(herm_images, sp, sp, WordOrder::Reversed);
  Rng rng(99);
  for (int s = 0; s < 5; ++s) {
    AlgebraElement x = random_element(sp, rng);
    CHECK(frob_dist(apply(fwd, x), x.conj()) < 1e-8);
    CHECK(frob_dist(apply(fwd, x), apply(rev, x)) < 1e-8);
  }
}

TEST_CASE("extend_jordan_hom rejects one-dimensional source blocks and bad data") {
  StarAlgebraSpec amb = spec({1});
  std::vector<AlgebraElement> imgs = {AlgebraElement::identity(amb)};
  CHECK_THROWS_AS(extend_jordan_hom(imgs, amb, amb), AmbiguousExtension);

  StarAlgebraSpec sp = spec({2});
  std::vector<AlgebraElement> doubled;
  for (const auto& h : canonical_hermitian_basis(sp)) {
    AlgebraElement y = h;
    y *= cplx(2.0);
    doubled.push_back(y);
  }
  CHECK_THROWS_AS(extend_jordan_hom(doubled, sp, sp), NotJordanHom);
}

TEST_CASE("compare_encodings: equivalent and inequivalent pairs") {
  StarAlgebraSpec src = spec({2});
  StarAlgebraSpec tgt = spec({4});
  CanonicalForm fa, fb, fc;
  fa.p = {{2}};
  fa.q = {{0}};
  fa.unitary = {random_unitary(4, 61)};
  fb = fa;
  fb.unitary = {random_unitary(4, 62)};
  fc.p = {{1}};
  fc.q = {{1}};
  fc.unitary = {random_unitary(4, 63)};

  RealLinearMap a = build_from_canonical(fa, src, tgt);
  RealLinearMap b = build_from_canonical(fb, src, tgt);
  RealLinearMap c = build_from_canonical(fc, src, tgt);

  CompareResult eq = compare_encodings(a, b);
  CHECK(eq.equivalent);
  REQUIRE(eq.witness.size() == 1);
  CHECK(eq.residual < 1e-8);
  CHECK(frob_dist(eq.witness[0] * eq.witness[0].adjoint(), CMatrix::identity(4)) < 1e-10);

  CompareResult neq = compare_encodings(a, c);
  CHECK_FALSE(neq.equivalent);
}
