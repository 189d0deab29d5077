#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "groupeq/solver.hpp"
#include "groupeq/theorems.hpp"

using namespace groupeq;

namespace {

using C = MixedWord::Const;
using V = MixedWord::Var;

SpecPtr finite_spec(FiniteGroup g, std::vector<std::string> vars,
                    const std::string& name = "G") {
  return FreeProductSpec::make(
      {FactorSpec::finite_group(name,
                                std::make_shared<const FiniteGroup>(std::move(g)))},
      Alphabet::make(std::move(vars)));
}

SpecPtr free_spec(int nfactors, std::vector<std::string> vars) {
  std::vector<FactorSpec> fs;
  const char* names[] = {"C", "D", "K"};
  const char* gens[] = {"c", "d", "k"};
  for (int i = 0; i < nfactors; ++i) {
    fs.push_back(FactorSpec::free_group(names[i], Alphabet::make({gens[i]})));
  }
  return FreeProductSpec::make(std::move(fs), Alphabet::make(std::move(vars)));
}

MixedWord fgen(const SpecPtr& s, int factor, long long exp = 1) {
  return MixedWord::from_free_const(
      s, factor, Word::from_gen(s->factor(factor).free_alphabet, 0, exp));
}

Assertions assert_li_all() {
  Assertions a;
  a.by_factor["C"].locally_indicable = true;
  a.by_factor["D"].locally_indicable = true;
  return a;
}

bool has_failed_check(const HypothesisReport& r, const std::string& needle) {
  for (const Check& c : r.checks) {
    if (c.status == CheckStatus::failed &&
        c.name.find(needle) != std::string::npos) {
      return true;
    }
  }
  return false;
}

}  // namespace

TEST_CASE("gerstenhaber-rothaus hypothesis checker") {
  FiniteGroup c5 = FiniteGroup::cyclic(5);
  SpecPtr s = finite_spec(c5, {"x", "y", "z", "t"});
  auto cst = [&](int e) { return MixedWord::from_finite_const(s, 0, e); };
  auto var = [&](int v, long long e) { return MixedWord::from_var(s, v, e); };

  auto system_with_k = [&](long long k) {
    MixedWord w1 = cst(1) * var(0, 1) * cst(2) * var(1, 1) * cst(3) *
                   var(1, 1) * var(2, 5) * cst(4) * var(2, -2);
    MixedWord xt = var(0, 1) * var(3, 1);
    MixedWord dz = cst(4) * var(2, 1);
    MixedWord w2 = (xt.inverse() * dz.inverse() * xt * dz).pow(2022) * cst(4) *
                   var(0, 4) * cst(3) * var(1, 5) * cst(2) * var(2, 6);
    MixedWord w3 = cst(1) * var(0, 7) * var(1, 8) * cst(4) * var(2, k);
    return EquationSystem(s, {w1, w2, w3});
  };

  HypothesisReport ok = check_gr(system_with_k(2022));
  CHECK(ok.ok());
  REQUIRE(ok.conclusion.has_value());
  CHECK(ok.conclusion->find("solvable") != std::string::npos);

  HypothesisReport bad = check_gr(system_with_k(9));
  CHECK_FALSE(bad.ok());
  CHECK_FALSE(bad.conclusion.has_value());
  CHECK(has_failed_check(bad, "nonsingular"));

  // Single equation g1 x g2 x with exponent sum 2 over C2.
  SpecPtr s2 = finite_spec(FiniteGroup::cyclic(2), {"x"});
  MixedWord w = MixedWord::from_finite_const(s2, 0, 1) *
                MixedWord::from_var(s2, 0) *
                MixedWord::from_finite_const(s2, 0, 1) *
                MixedWord::from_var(s2, 0);
  CHECK(check_gr(EquationSystem(s2, {w})).ok());
}

TEST_CASE("nitsche-thom hypothesis checker") {
  SpecPtr s = finite_spec(FiniteGroup::cyclic(2), {"x", "y", "z"});
  auto var = [&](int v, long long e) { return MixedWord::from_var(s, v, e); };
  MixedWord g = MixedWord::from_finite_const(s, 0, 1);

  // Content x y^2 z^3: already nonsingular at index 1.
  MixedWord w = g * var(0, 1) * var(1, 2) * g * var(2, 3);
  HypothesisReport rep =
      check_nitsche_thom(EquationSystem(s, {w}), {}, 3);
  CHECK(rep.ok());
  REQUIRE(rep.conclusion.has_value());
  CHECK_FALSE(rep.notes.empty());  // single-equation shortcut reported

  // Contents {x, x}: duplicated rows stay duplicated in every Schreier
  // presentation; the search is inconclusive, never a refutation.
  MixedWord wx = g * var(0, 1);
  HypothesisReport dup = check_nitsche_thom(
      EquationSystem(s, {wx, g * wx * g.inverse()}), {}, 4);
  CHECK_FALSE(dup.ok());
  bool inconclusive = false;
  for (const Check& c : dup.checks) {
    if (c.status == CheckStatus::failed &&
        c.witness.find("inconclusive") != std::string::npos) {
      inconclusive = true;
    }
  }
  CHECK(inconclusive);

  // Empty system: vacuously verified.
  CHECK(check_nitsche_thom(EquationSystem(s, {}), {}, 2).ok());

  // Non-finite factor needs a GR assertion.
  SpecPtr fs = free_spec(1, {"x"});
  EquationSystem fsys(fs, {MixedWord::from_var(fs, 0)});
  CHECK_FALSE(check_nitsche_thom(fsys, {}, 2).ok());
  Assertions a;
  a.by_factor["C"].gr = true;
  HypothesisReport asserted = check_nitsche_thom(fsys, a, 2);
  CHECK(asserted.ok());
  CHECK(asserted.assumed().size() == 1);
}

TEST_CASE("brodskii-howie-short hypothesis checker") {
  SpecPtr s = free_spec(2, {});
  MixedWord c = fgen(s, 0), d = fgen(s, 1);

  HypothesisReport ok = check_bhs(c * d, assert_li_all());
  CHECK(ok.ok());
  REQUIRE(ok.conclusion.has_value());
  CHECK(ok.conclusion->find("injective") != std::string::npos);
  // Not a proper power: the locally indicable quotient clause appears.
  CHECK(ok.conclusion->find("quotient is locally indicable") !=
        std::string::npos);

  HypothesisReport conj = check_bhs(d * c * d.inverse(), assert_li_all());
  CHECK_FALSE(conj.ok());
  CHECK(has_failed_check(conj, "conjugate"));

  HypothesisReport power = check_bhs((c * d).pow(2), assert_li_all());
  CHECK(power.ok());
  bool noted = false;
  for (const std::string& n : power.notes) {
    noted = noted || n.find("exponent 2") != std::string::npos;
  }
  CHECK(noted);
  // Injectivity concluded, but the quotient clause is withheld.
  REQUIRE(power.conclusion.has_value());
  CHECK(power.conclusion->find("injective") != std::string::npos);
  CHECK(power.conclusion->find("quotient is locally indicable") ==
        std::string::npos);

  // Missing assertions fail the hypothesis.
  CHECK_FALSE(check_bhs(c * d, {}).ok());

  // A nontrivial finite factor is auto-refuted.
  auto c2 = std::make_shared<const FiniteGroup>(FiniteGroup::cyclic(2));
  SpecPtr s2 = FreeProductSpec::make(
      {FactorSpec::finite_group("C", c2),
       FactorSpec::free_group("D", Alphabet::make({"d"}))},
      Alphabet::make({}));
  Assertions a = assert_li_all();
  MixedWord w2 = MixedWord::from_finite_const(s2, 0, 1) *
                 MixedWord::from_free_const(
                     s2, 1, Word::from_gen(s2->factor(1).free_alphabet, 0));
  HypothesisReport finite_c = check_bhs(w2, a);
  CHECK_FALSE(finite_c.ok());
  CHECK(has_failed_check(finite_c, "locally indicable"));

  CHECK_THROWS_AS(check_bhs(MixedWord::identity(free_spec(3, {})), {}), Error);
}

TEST_CASE("freiheitssatz hypothesis checker") {
  SpecPtr s = free_spec(3, {});
  MixedWord c = fgen(s, 0), d = fgen(s, 1), k = fgen(s, 2);
  Assertions a = assert_li_all();
  a.by_factor["K"].gr_star = true;

  HypothesisReport ok = check_freiheitssatz(c * k * d, a);
  CHECK(ok.ok());
  REQUIRE(ok.conclusion.has_value());

  HypothesisReport trivial_image = check_freiheitssatz(c * k * c.inverse(), a);
  CHECK_FALSE(trivial_image.ok());
  bool identity_witness = false;
  for (const Check& ch : trivial_image.checks) {
    identity_witness =
        identity_witness || ch.witness.find("trivial") != std::string::npos;
  }
  CHECK(identity_witness);

  MixedWord w = fgen(s, 2) * d * fgen(s, 2) * c * d.inverse();
  HypothesisReport conj = check_freiheitssatz(w, a);
  CHECK_FALSE(conj.ok());
  bool names_c = false;
  for (const Check& ch : conj.checks) {
    if (ch.status == CheckStatus::failed) {
      names_c = names_c || ch.witness.find("'C'") != std::string::npos;
    }
  }
  CHECK(names_c);

  // The conjugacy verdict agrees with check_bhs on the deleted word.
  std::mt19937_64 rng(41);
  std::uniform_int_distribution<int> factor(0, 2);
  std::uniform_int_distribution<int> exp(-2, 2);
  for (int i = 0; i < 100; ++i) {
    std::vector<MixedWord::Syllable> raw;
    for (int j = 0; j < 6; ++j) {
      int fi = factor(rng);
      raw.push_back(C{fi, Word::from_gen(s->factor(fi).free_alphabet, 0,
                                         exp(rng))});
    }
    MixedWord w0 = MixedWord::normalize(s, raw);
    HypothesisReport fr = check_freiheitssatz(w0, a);
    HypothesisReport bh = check_bhs(w0.delete_factor("K"), a);
    bool fr_conj = false, bh_conj = false;
    for (const Check& ch : fr.checks) {
      if (ch.name.find("conjugate") != std::string::npos) {
        fr_conj = ch.status == CheckStatus::verified;
      }
    }
    for (const Check& ch : bh.checks) {
      if (ch.name.find("conjugate") != std::string::npos) {
        bh_conj = ch.status == CheckStatus::verified;
      }
    }
    CHECK(fr_conj == bh_conj);
  }
}

TEST_CASE("main solvability checker") {
  FiniteGroup s3 = FiniteGroup::from_permutations({{1, 2, 0}, {1, 0, 2}});
  SpecPtr s = finite_spec(s3, {"x"}, "G");
  int r123 = -1, r12 = -1;
  for (int i = 0; i < 6; ++i) {
    if (s3.permutations()[i] == std::vector<int>{1, 2, 0}) r123 = i;
    if (s3.permutations()[i] == std::vector<int>{1, 0, 2}) r12 = i;
  }
  std::vector<int> a3 = normal_closure(s3, {r123});
  std::vector<int> whole;
  for (int i = 0; i < 6; ++i) whole.push_back(i);

  // A = G: trivial quotient, content nontrivial; everything verified.
  MixedWord w = MixedWord::from_finite_const(s, 0, r12) *
                MixedWord::from_var(s, 0);
  HypothesisReport ok = check_main(w, whole, {});
  CHECK(ok.ok());

  // A = A3: the content check passes but G/A = C2 is auto-refuted.
  MixedWord comm = MixedWord::from_finite_const(s, 0, r12) *
                   MixedWord::from_var(s, 0) *
                   MixedWord::from_finite_const(s, 0, r12) *
                   MixedWord::from_var(s, 0, -1);
  HypothesisReport mixed = check_main(comm, a3, {});
  CHECK_FALSE(mixed.ok());
  CHECK(has_failed_check(mixed, "locally indicable"));
  for (const Check& c : mixed.checks) {
    if (c.name.find("conjugate") != std::string::npos) {
      CHECK(c.status == CheckStatus::verified);
    }
  }

  // Trivial quotient content fails the conjugacy condition.
  MixedWord trivial = MixedWord::from_finite_const(s, 0, r123) *
                      MixedWord::from_var(s, 0) *
                      MixedWord::from_var(s, 0, -1);
  HypothesisReport bad = check_main(trivial, a3, {});
  CHECK_FALSE(bad.ok());

  CHECK_THROWS_AS(check_main(w, {r12}, {}), Error);  // not normal
}

TEST_CASE("orbit system: degenerate and worked instances") {
  // B trivial: the system is returned unchanged.
  FiniteGroup c2 = FiniteGroup::cyclic(2);
  SpecPtr s2 = finite_spec(c2, {"x"}, "G");
  MixedWord w2 = MixedWord::from_var(s2, 0, 2) *
                 MixedWord::from_finite_const(s2, 0, 1);
  std::vector<int> whole{0, 1};
  OrbitSystemResult triv = orbit_system(w2, whole);
  REQUIRE(triv.system.equations.size() == 1);
  CHECK(triv.system.equations[0] == w2);
  CHECK_FALSE(triv.changed_variables);

  // G = C2 x C2 = {1, a, b, ab}, A = <a>, w = x a x b x.
  std::vector<std::vector<int>> tab(4, std::vector<int>(4));
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) tab[i][j] = i ^ j;
  }
  FiniteGroup klein =
      FiniteGroup::validate_table(tab, {"e", "a", "b", "ab"});
  SpecPtr s = finite_spec(klein, {"x"}, "G");
  MixedWord w = MixedWord::from_var(s, 0) *
                MixedWord::from_finite_const(s, 0, 1) *
                MixedWord::from_var(s, 0) *
                MixedWord::from_finite_const(s, 0, 2) *
                MixedWord::from_var(s, 0);
  OrbitSystemResult orb = orbit_system(w, {0, 1});
  CHECK(orb.changed_variables);
  REQUIRE(orb.lifts.size() == 1);
  CHECK(orb.lifts[0] == 2);  // least-index preimage of the coset of b
  REQUIRE(orb.system.equations.size() == 2);
  ExponentMatrix em = exponent_matrix(orb.system);
  CHECK(em.matrix == IntMatrix::from_rows({{1, 2}, {2, 1}}));
  CHECK(is_nonsingular(orb.system));

  // No quotient solution: x^2 cannot reach the nontrivial coset of C4/<2>.
  FiniteGroup c4 = FiniteGroup::cyclic(4);
  SpecPtr s4 = finite_spec(c4, {"x"}, "G");
  MixedWord unsat = MixedWord::from_var(s4, 0, 2) *
                    MixedWord::from_finite_const(s4, 0, 1);
  CHECK_THROWS_WITH(orbit_system(unsat, {0, 2}),
                    Catch::Matchers::ContainsSubstring("no solution"));
}

TEST_CASE("pipeline: rewrite over A, certify, then solve the orbit system") {
  // Klein four-group, A = <a>: the rewritten system over A is
  // nonsingular, the finite-coefficients checker concludes, and the
  // solver finds an assignment (here already inside A itself).
  std::vector<std::vector<int>> tab(4, std::vector<int>(4));
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) tab[i][j] = i ^ j;
  }
  FiniteGroup klein = FiniteGroup::validate_table(tab, {"e", "a", "b", "ab"});
  SpecPtr s = finite_spec(klein, {"x"}, "G");
  MixedWord w = MixedWord::from_var(s, 0) *
                MixedWord::from_finite_const(s, 0, 1) *
                MixedWord::from_var(s, 0) *
                MixedWord::from_finite_const(s, 0, 2) *
                MixedWord::from_var(s, 0);
  OrbitSystemResult orb = orbit_system(w, {0, 1});
  HypothesisReport gr = check_gr(orb.system);
  REQUIRE(gr.conclusion.has_value());

  FiniteGroupPtr a_sub = orb.system.spec->factor(0).finite;
  SolveOutcome out = solve_over(orb.system, a_sub, "A");
  REQUIRE(out.solution.has_value());
  for (const MixedWord& eq : orb.system.equations) {
    CHECK(evaluate(eq, out.solution->where, out.solution->assignment) ==
          out.solution->where.target->identity());
  }
}

TEST_CASE("orbit system: symmetry invariant on random instances") {
  std::mt19937_64 rng(53);
  struct Instance {
    FiniteGroup g;
    std::vector<int> a;
  };
  std::vector<Instance> instances;
  {
    std::vector<std::vector<int>> tab(4, std::vector<int>(4));
    for (int i = 0; i < 4; ++i) {
      for (int j = 0; j < 4; ++j) tab[i][j] = i ^ j;
    }
    instances.push_back({FiniteGroup::validate_table(tab), {0, 1}});
    instances.push_back({FiniteGroup::validate_table(tab), {0}});
    instances.push_back({FiniteGroup::cyclic(4), {0, 2}});
    instances.push_back({FiniteGroup::cyclic(6), {0, 3}});
    instances.push_back({FiniteGroup::cyclic(6), {0, 2, 4}});
    FiniteGroup s3 = FiniteGroup::from_permutations({{1, 2, 0}, {1, 0, 2}});
    std::vector<int> a3 = normal_closure(s3, {1});  // element 1 is (1 2 3)
    REQUIRE(a3.size() == 3);
    instances.push_back({s3, a3});
  }

  int tested = 0;
  for (int trial = 0; trial < 200 && tested < 100; ++trial) {
    const Instance& inst = instances[trial % instances.size()];
    SpecPtr s = finite_spec(inst.g, {"x", "y"}, "G");
    std::uniform_int_distribution<int> len(2, 6);
    std::uniform_int_distribution<int> kind(0, 2);
    std::uniform_int_distribution<int> elem(0, inst.g.order() - 1);
    std::uniform_int_distribution<int> vr(0, 1);
    std::uniform_int_distribution<int> exp(-2, 2);
    std::vector<MixedWord::Syllable> raw;
    int n = len(rng);
    for (int i = 0; i < n; ++i) {
      if (kind(rng) == 0) {
        raw.push_back(C{0, elem(rng)});
      } else {
        raw.push_back(V{vr(rng), exp(rng)});
      }
    }
    MixedWord w = MixedWord::normalize(s, raw);
    std::optional<OrbitSystemResult> orb;
    try {
      orb = orbit_system(w, inst.a);
    } catch (const Error&) {
      continue;  // no quotient solution; resample
    }
    const FiniteGroup& b = *orb->quotient_group;
    if (b.order() == 1) continue;
    ++tested;
    ExponentMatrix em = exponent_matrix(orb->system);
    const int nvars = 2;
    // Exponent of (b', x) in equation b equals the exponent of
    // (b^-1 b', x) in the identity-coset equation.
    for (int eb = 0; eb < b.order(); ++eb) {
      for (int bp = 0; bp < b.order(); ++bp) {
        for (int x = 0; x < nvars; ++x) {
          int translated = b.mul(b.inv(eb), bp);
          CHECK(em.matrix.at(eb, bp * nvars + x) ==
                em.matrix.at(b.identity(), translated * nvars + x));
        }
      }
    }
  }
  CHECK(tested >= 100);
}
