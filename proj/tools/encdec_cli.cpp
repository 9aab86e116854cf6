#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "encdec/encoding.hpp"
#include "encdec/fermions.hpp"
#include "encdec/json_io.hpp"

namespace {

using encdec::AlgebraElement;
using encdec::CanonicalForm;
using encdec::CarRep;
using encdec::CheckReport;
using encdec::CMatrix;
using encdec::cplx;
using encdec::RealLinearMap;
using encdec::StarAlgebraSpec;
using nlohmann::json;

constexpr int kExitPass = 0;
constexpr int kExitFail = 1;
constexpr int kExitUsage = 2;

struct Report {
  std::string command;
  uint64_t seed = 0;
  json tolerances = json::object();
  json checks = json::array();
  json extra = json::object();
  std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
  bool all_pass = true;

  void tolerance(const std::string& name, double value) { tolerances[name] = value; }

  void add(const std::string& name, double residual, const std::string& tol_name) {
    const bool pass = residual <= tolerances.at(tol_name).get<double>();
    checks.push_back(json{{"name", name}, {"residual", residual}, {"pass", pass}});
    all_pass = all_pass && pass;
  }

  /// Negative control: residual 0 when the probe failed as required, 1 otherwise.
  void add_negative(const std::string& name, bool failed_as_expected) {
    if (!tolerances.contains("negative")) tolerances["negative"] = 0.5;
    add(name, failed_as_expected ? 0.0 : 1.0, "negative");
  }

  json finish() const {
    const auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                        std::chrono::steady_clock::now() - start)
                        .count();
    return json{{"command", command}, {"seed", seed},           {"tolerances", tolerances},
                {"checks", checks},   {"extra", extra},         {"wall_time_ms", ms}};
  }
};

void print_table(const Report& rep) {
  std::fprintf(stderr, "== %s (seed %llu) ==\n", rep.command.c_str(),
               static_cast<unsigned long long>(rep.seed));
  for (const json& c : rep.checks)
    std::fprintf(stderr, "  %-42s %12.3e  %s\n", c.at("name").get<std::string>().c_str(),
                 c.at("residual").get<double>(), c.at("pass").get<bool>() ? "pass" : "FAIL");
}

int emit(const Report& rep, bool json_out) {
  print_table(rep);
  if (json_out) std::cout << rep.finish().dump() << std::endl;
  return rep.all_pass ? kExitPass : kExitFail;
}

uint64_t default_seed() {
  if (const char* env = std::getenv("ENCDEC_SEED")) return std::strtoull(env, nullptr, 10);
  return 1;
}

CarRep make_rep(const std::string& encoding, int modes) {
  if (encoding == "jw") return encdec::jordan_wigner(modes);
  if (encoding == "bk") return encdec::bravyi_kitaev(modes);
  throw encdec::ParseError("unknown encoding '" + encoding + "' (expected jw or bk)");
}

// ---------------------------------------------------------------------------

int run_verify_car(int modes, const std::string& encoding, double tol, uint64_t seed,
                   bool json_out) {
  Report rep;
  rep.command = "verify-car";
  rep.seed = seed;
  rep.tolerance("car", tol);

  const CarRep car = make_rep(encoding, modes);
  const CMatrix unit = CMatrix::identity(car.annihilators[0].rows());
  std::vector<CMatrix> dag;
  for (const CMatrix& a : car.annihilators) dag.push_back(a.adjoint());
  char name[64];
  for (int j = 0; j < modes; ++j)
    for (int k = 0; k < modes; ++k) {
      CMatrix mixed =
          car.annihilators[j] * dag[k] + dag[k] * car.annihilators[j];
      if (j == k) mixed -= unit;
      std::snprintf(name, sizeof name, "mixed_anticommutator_%d_%d", j, k);
      rep.add(name, mixed.frob_norm(), "car");
      if (k >= j) {
        const CMatrix plain = car.annihilators[j] * car.annihilators[k] +
                              car.annihilators[k] * car.annihilators[j];
        std::snprintf(name, sizeof name, "plain_anticommutator_%d_%d", j, k);
        rep.add(name, plain.frob_norm(), "car");
      }
    }
  rep.extra["encoding"] = encoding;
  rep.extra["modes"] = modes;
  return emit(rep, json_out);
}

int run_decompose(const std::string& input, uint64_t seed, double axiom_tol, double recon_tol,
                  bool json_out) {
  Report rep;
  rep.command = "decompose";
  rep.seed = seed;
  rep.tolerance("axiom", axiom_tol);
  rep.tolerance("recon", recon_tol);

  const RealLinearMap map = encdec::map_from_json(encdec::load_json_file(input));
  CanonicalForm form;
  try {
    form = encdec::canonical_decompose(map);
  } catch (const encdec::NotHomomorphism& ex) {
    const CheckReport jordan = encdec::check_jordan_hom(map, 20, seed, axiom_tol);
    rep.add("jordan_homomorphism", jordan.max_residual(), "axiom");
    rep.extra["error"] = ex.what();
    return emit(rep, json_out);
  }
  const CheckReport jordan = encdec::check_jordan_hom(map, 20, seed, axiom_tol);
  rep.add("jordan_homomorphism", jordan.max_residual(), "axiom");
  rep.add("reconstruction", encdec::assert_canonical_equivalence(map, form, 20, 1e9), "recon");
  rep.extra["canonical_form"] = encdec::canonical_form_to_json(form);
  return emit(rep, json_out);
}

int run_even_split(int modes, uint64_t seed, bool json_out) {
  Report rep;
  rep.command = "even-split";
  rep.seed = seed;
  rep.tolerance("projection", 1e-8);

  const encdec::EvenDecomposition dec = encdec::even_decompose(encdec::jordan_wigner(modes), seed);
  rep.add("central_projection_match", dec.projection_match, "projection");
  rep.extra["even_dimension"] = dec.even.dim();
  rep.extra["blocks"] = dec.iso.spec.block_dims;
  rep.extra["modes"] = modes;
  return emit(rep, json_out);
}

RealLinearMap resolve_operand(const std::string& what, int modes) {
  if (what == "jw" || what == "bk") return encdec::rep_as_encoding(make_rep(what, modes));
  return encdec::map_from_json(encdec::load_json_file(what));
}

int run_compare(const std::string& a, const std::string& b, int modes, uint64_t seed,
                double recon_tol, bool json_out) {
  Report rep;
  rep.command = "compare";
  rep.seed = seed;
  rep.tolerance("witness", recon_tol);

  const RealLinearMap ma = resolve_operand(a, modes);
  const RealLinearMap mb = resolve_operand(b, modes);
  const encdec::CompareResult cmp = encdec::compare_encodings(ma, mb);
  rep.extra["equivalent"] = cmp.equivalent;
  rep.extra["signature_a"] = json{{"p", cmp.form_a.p}, {"q", cmp.form_a.q}};
  rep.extra["signature_b"] = json{{"p", cmp.form_b.p}, {"q", cmp.form_b.q}};
  if (cmp.equivalent) {
    rep.add("witness_conjugation", cmp.residual, "witness");
  } else {
    rep.add("witness_conjugation", 1.0, "witness");  // no witness exists
  }
  return emit(rep, json_out);
}

// One random canonical-form round trip; returns the worst residual and writes
// the recovered-signature match into *exact.
double roundtrip_case(uint64_t seed, bool* exact) {
  encdec::Rng pick(seed);
  const int n = 1 + static_cast<int>(pick.uniform() * 3.0);
  const int p = 1 + static_cast<int>(pick.uniform() * 2.0);
  const int q = static_cast<int>(pick.uniform() * 2.0);
  const int m = (p + q) * n;

  CanonicalForm form;
  form.p = {{p}};
  form.q = {{q}};
  form.unitary = {encdec::random_unitary(m, seed ^ 0xabcdef12345ULL)};
  const StarAlgebraSpec source{{n}};
  const StarAlgebraSpec target{{m}};
  const RealLinearMap map = encdec::build_from_canonical(form, source, target);

  double worst = encdec::check_spectrum_preserving(map, 6, seed, 1e9).max_residual();
  worst = std::max(worst, encdec::check_convexity(map, 6, seed + 1, 1e9).max_residual());
  worst = std::max(worst, encdec::check_jordan_hom(map, 6, seed + 2, 1e9).max_residual());
  const CanonicalForm back = encdec::canonical_decompose(map);
  *exact = back.p == form.p && back.q == form.q;
  worst = std::max(worst, encdec::assert_canonical_equivalence(map, back, 6, 1e9));
  return worst;
}

int run_selftest(uint64_t seed, int cases, bool json_out) {
  Report rep;
  rep.command = "selftest";
  rep.seed = seed;
  rep.tolerance("car", 1e-12);
  rep.tolerance("axiom", 1e-8);
  rep.tolerance("recon", 1e-8);

  char name[64];
  for (int i = 0; i < cases; ++i) {
    bool exact = false;
    const double worst = roundtrip_case(seed + 1000 * i, &exact);
    std::snprintf(name, sizeof name, "roundtrip_case_%02d", i);
    rep.add(name, exact ? worst : 1.0, "axiom");
  }

  if (cases > 0) {
    for (int n = 1; n <= 3; ++n) {
      std::snprintf(name, sizeof name, "car_jw_%d", n);
      rep.add(name, encdec::car_residual(encdec::jordan_wigner(n)), "car");
      std::snprintf(name, sizeof name, "car_bk_%d", n);
      rep.add(name, encdec::car_residual(encdec::bravyi_kitaev(n)), "car");
    }
    const encdec::EvenDecomposition dec =
        encdec::even_decompose(encdec::jordan_wigner(2), seed);
    rep.add("even_split_2", dec.projection_match, "recon");

    // Negative controls: these probes must fail.
    const StarAlgebraSpec m2{{2}};
    RealLinearMap doubling = RealLinearMap::from_function(m2, m2, [](const AlgebraElement& x) {
      AlgebraElement y = x;
      y *= 2.0;
      return y;
    });
    rep.add_negative("scaling_fails_spectrum",
                     !encdec::check_spectrum_preserving(doubling, 10, seed, 1e-8).passed());

    const CMatrix t = encdec::Rng(seed ^ 0x5badULL).matrix(2, 2);
    const CMatrix s = CMatrix::identity(2) + cplx(0.1) * (t * t.adjoint());  // invertible, not unitary
    CMatrix sinv = CMatrix::identity(2);  // Neumann series is overkill at dim 2; solve directly
    {
      const cplx det = s(0, 0) * s(1, 1) - s(0, 1) * s(1, 0);
      sinv(0, 0) = s(1, 1) / det;
      sinv(1, 1) = s(0, 0) / det;
      sinv(0, 1) = -s(0, 1) / det;
      sinv(1, 0) = -s(1, 0) / det;
    }
    RealLinearMap skew = RealLinearMap::from_function(m2, m2, [&](const AlgebraElement& x) {
      AlgebraElement y = x;
      y.blocks[0] = s * x.blocks[0] * sinv;
      return y;
    });
    rep.add_negative("nonunitary_conjugation_fails_jordan",
                     !encdec::check_jordan_hom(skew, 10, seed, 1e-8).passed());

    RealLinearMap perturbed = RealLinearMap::identity(m2);
    perturbed.images[2].blocks[0](0, 0) += 1e-3;
    bool rejected = false;
    try {
      encdec::canonical_decompose(perturbed);
    } catch (const encdec::NotHomomorphism&) {
      rejected = true;
    }
    rep.add_negative("perturbed_map_rejected", rejected);
  }
  rep.extra["cases"] = cases;
  return emit(rep, json_out);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Verification toolkit for operator-algebra encodings"};
  app.require_subcommand(1);

  uint64_t seed = default_seed();
  bool json_out = false;
  app.add_option("--seed", seed, "Random seed (fallback: ENCDEC_SEED, then 1)");
  app.add_flag("--json", json_out, "Emit the machine-readable report on stdout");

  // verify-car
  auto* vc = app.add_subcommand("verify-car", "Check the anticommutation relations");
  int vc_modes = 2;
  std::string vc_encoding = "jw";
  double vc_tol = 1e-12;
  vc->add_option("--modes", vc_modes, "Number of fermionic modes")->required();
  vc->add_option("--encoding", vc_encoding, "jw or bk");
  vc->add_option("--tol", vc_tol, "Residual tolerance");

  // decompose
  auto* dc = app.add_subcommand("decompose", "Canonical decomposition of a stored map");
  std::string dc_input;
  double dc_axiom = 1e-8, dc_recon = 1e-8;
  dc->add_option("--input", dc_input, "Map JSON file")->required();
  dc->add_option("--axiom-tol", dc_axiom, "Axiom-check tolerance");
  dc->add_option("--recon-tol", dc_recon, "Reconstruction tolerance");

  // even-split
  auto* es = app.add_subcommand("even-split", "Two-block decomposition of the even algebra");
  int es_modes = 2;
  es->add_option("--modes", es_modes, "Number of fermionic modes (2..4)")
      ->required()
      ->check(CLI::Range(2, 4));

  // compare
  auto* cp = app.add_subcommand("compare", "Unitary-equivalence comparison of two encodings");
  std::string cp_a, cp_b;
  int cp_modes = 2;
  double cp_recon = 1e-8;
  cp->add_option("--a", cp_a, "jw, bk, or a map JSON file")->required();
  cp->add_option("--b", cp_b, "jw, bk, or a map JSON file")->required();
  cp->add_option("--modes", cp_modes, "Modes for the named constructions");
  cp->add_option("--recon-tol", cp_recon, "Witness residual tolerance");

  // selftest
  auto* st = app.add_subcommand("selftest", "Round-trip, axiom, and fermionic property suites");
  int st_cases = 12;
  st->add_option("--cases", st_cases, "Number of random round-trip cases")
      ->check(CLI::Range(0, 10000));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitPass : kExitUsage;
  }

  try {
    if (vc->parsed()) return run_verify_car(vc_modes, vc_encoding, vc_tol, seed, json_out);
    if (dc->parsed()) return run_decompose(dc_input, seed, dc_axiom, dc_recon, json_out);
    if (es->parsed()) return run_even_split(es_modes, seed, json_out);
    if (cp->parsed()) return run_compare(cp_a, cp_b, cp_modes, seed, cp_recon, json_out);
    if (st->parsed()) return run_selftest(seed, st_cases, json_out);
  } catch (const encdec::ParseError& ex) {
    std::fprintf(stderr, "error: %s\n", ex.what());
    return kExitUsage;
  } catch (const encdec::TooManyModes& ex) {
    std::fprintf(stderr, "error: %s\n", ex.what());
    return kExitUsage;
  } catch (const encdec::SpecMismatch& ex) {
    std::fprintf(stderr, "error: %s\n", ex.what());
    return kExitUsage;
  } catch (const std::exception& ex) {
    std::fprintf(stderr, "verification error: %s\n", ex.what());
    return kExitFail;
  }
  return kExitUsage;
}
