#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "groupeq/mixedwords.hpp"

using namespace groupeq;

namespace {

using Syl = MixedWord::Syllable;
using C = MixedWord::Const;
using V = MixedWord::Var;

// C2 * F(x): one finite factor with labels {e, a}.
SpecPtr c2_spec() {
  auto c2 = std::make_shared<const FiniteGroup>(
      FiniteGroup::validate_table({{0, 1}, {1, 0}}, {"e", "a"}));
  return FreeProductSpec::make({FactorSpec::finite_group("G", c2)},
                               Alphabet::make({"x"}));
}

// Free C * free D (* free K) with one generator each, variables as given.
SpecPtr free_spec(int nfactors, std::vector<std::string> vars) {
  std::vector<FactorSpec> fs;
  const char* names[] = {"C", "D", "K"};
  const char* gens[] = {"c", "d", "k"};
  for (int i = 0; i < nfactors; ++i) {
    fs.push_back(FactorSpec::free_group(names[i], Alphabet::make({gens[i]})));
  }
  return FreeProductSpec::make(std::move(fs), Alphabet::make(std::move(vars)));
}

MixedWord fgen(const SpecPtr& s, int factor, int exp = 1) {
  const FactorSpec& f = s->factor(factor);
  return MixedWord::from_free_const(s, factor,
                                    Word::from_gen(f.free_alphabet, 0, exp));
}

MixedWord random_mixed(const SpecPtr& s, std::mt19937_64& rng, int len) {
  std::vector<Syl> raw;
  std::uniform_int_distribution<int> kind(0, 1);
  std::uniform_int_distribution<int> factor(0, s->num_factors() - 1);
  std::uniform_int_distribution<int> exp(-2, 2);
  std::uniform_int_distribution<int> var(0, std::max(0, s->variables()->size() - 1));
  for (int i = 0; i < len; ++i) {
    if (s->variables()->size() > 0 && kind(rng) == 0) {
      raw.push_back(V{var(rng), exp(rng)});
    } else {
      int fi = factor(rng);
      raw.push_back(C{fi, Word::from_gen(s->factor(fi).free_alphabet, 0,
                                         exp(rng))});
    }
  }
  return MixedWord::normalize(s, raw);
}

}  // namespace

TEST_CASE("free product normalization") {
  SpecPtr s = free_spec(2, {"x"});
  Word c = Word::from_gen(s->factor(0).free_alphabet, 0);
  MixedWord w = MixedWord::normalize(
      s, {C{0, c}, C{0, c.inverse()}, V{0, 1}});
  CHECK(w.str() == "x");

  CHECK(MixedWord::normalize(s, {V{0, 1}, V{0, 2}}).str() == "x^3");

  SpecPtr c2 = c2_spec();
  MixedWord aax = MixedWord::normalize(c2, {C{0, 1}, C{0, 1}, V{0, 1}});
  CHECK(aax.str() == "x");  // a^2 = e in the table

  // Idempotent.
  std::mt19937_64 rng(3);
  for (int i = 0; i < 200; ++i) {
    MixedWord v = random_mixed(s, rng, 8);
    CHECK(MixedWord::normalize(s, v.syllables()) == v);
  }
}

TEST_CASE("presented factors have no normal form") {
  auto pres = std::make_shared<const Presentation>(
      Alphabet::make({"p"}), std::vector<Word>{});
  SpecPtr s = FreeProductSpec::make(
      {FactorSpec::presented_group("P", pres)}, Alphabet::make({"x"}));
  CHECK_THROWS_WITH(
      MixedWord::normalize(s, {C{0, Word::from_gen(pres->alphabet, 0)}}),
      Catch::Matchers::ContainsSubstring("presented"));
}

TEST_CASE("content homomorphism") {
  SpecPtr s = free_spec(1, {"x", "y"});
  MixedWord w = MixedWord::normalize(
      s, {C{0, Word::from_gen(s->factor(0).free_alphabet, 0)}, V{0, 1},
          C{0, Word::from_gen(s->factor(0).free_alphabet, 0, 2)}, V{1, -1}});
  CHECK(w.content().str() == "x y^-1");

  MixedWord trivial = MixedWord::normalize(
      s, {C{0, Word::from_gen(s->factor(0).free_alphabet, 0)}, V{0, 1},
          C{0, Word::from_gen(s->factor(0).free_alphabet, 0)}, V{0, -1}});
  CHECK(trivial.content().is_identity());

  std::mt19937_64 rng(5);
  for (int i = 0; i < 200; ++i) {
    MixedWord u = random_mixed(s, rng, 6);
    MixedWord v = random_mixed(s, rng, 6);
    CHECK((u * v).content() == u.content() * v.content());
  }
  // Contents of constant-only and variable-only words.
  CHECK(fgen(s, 0, 3).content().is_identity());
  CHECK(MixedWord::from_var(s, 0, 5).content().str() == "x^5");
}

TEST_CASE("delete_factor") {
  SpecPtr s = free_spec(3, {});
  MixedWord ckd = fgen(s, 0) * fgen(s, 2) * fgen(s, 1);
  MixedWord image = ckd.delete_factor("K");
  CHECK(image.spec()->num_factors() == 2);
  CHECK(image.str() == "c d");

  MixedWord ckc = fgen(s, 0) * fgen(s, 2) * fgen(s, 0, -1);
  CHECK(ckc.delete_factor("K").is_identity());

  MixedWord mixed = fgen(s, 2) * fgen(s, 0) * fgen(s, 2) * fgen(s, 0, -1) *
                    fgen(s, 1);
  CHECK(mixed.delete_factor("K").str() == "d");

  std::mt19937_64 rng(7);
  for (int i = 0; i < 100; ++i) {
    MixedWord w = random_mixed(s, rng, 8);
    MixedWord once = w.delete_factor("K");
    // Deleting an already absent factor leaves the word alone.
    SpecPtr reduced = once.spec();
    CHECK(MixedWord::normalize(reduced, once.syllables()) == once);
  }
  CHECK_THROWS_AS(ckd.delete_factor("Z"), Error);
}

TEST_CASE("quotient content") {
  FiniteGroup s3 = FiniteGroup::from_permutations({{1, 2, 0}, {1, 0, 2}});
  auto s3p = std::make_shared<const FiniteGroup>(s3);
  SpecPtr s = FreeProductSpec::make({FactorSpec::finite_group("G", s3p)},
                                    Alphabet::make({"x", "y"}));
  int r123 = -1, r12 = -1;
  for (int i = 0; i < 6; ++i) {
    if (s3.permutations()[i] == std::vector<int>{1, 2, 0}) r123 = i;
    if (s3.permutations()[i] == std::vector<int>{1, 0, 2}) r12 = i;
  }
  std::vector<int> a3 = normal_closure(s3, {r123});

  MixedWord w = MixedWord::normalize(s, {C{0, r123}, V{0, 1}, C{0, r12},
                                         V{1, 1}});
  MixedWord qc = quotient_content(w, a3);
  CHECK(qc.syllable_count() == 3);  // (1 2 3) died, (1 2) survived
  CHECK(qc.content().str() == "x y");

  // A = {identity}: same syllable structure, elements relabelled.
  std::vector<int> triv{s3.identity()};
  MixedWord same = quotient_content(w, triv);
  CHECK(same.syllable_count() == w.syllable_count());

  // A = G: the content embedded into (trivial group) * F.
  std::vector<int> all{0, 1, 2, 3, 4, 5};
  MixedWord emb = quotient_content(w, all);
  CHECK(emb.content() == w.content());
  CHECK(emb.syllable_count() == w.content().syllable_count());
}

TEST_CASE("cyclic normal form") {
  SpecPtr s = free_spec(3, {"x"});
  MixedWord c = fgen(s, 0), d = fgen(s, 1), k = fgen(s, 2);
  MixedWord x = MixedWord::from_var(s, 0);

  MixedCyclicForm f = (d * c * d.inverse()).cyclic_normal_form();
  CHECK(f.core == c);
  CHECK(f.conjugator == d);

  MixedWord already = x * c * x.inverse() * d;
  f = already.cyclic_normal_form();
  CHECK(f.core == already);
  CHECK(f.conjugator.is_identity());

  f = (k * (c * d) * k.inverse()).cyclic_normal_form();
  CHECK(f.core == c * d);
  CHECK(f.conjugator == k);

  std::mt19937_64 rng(11);
  for (int i = 0; i < 300; ++i) {
    MixedWord w = random_mixed(s, rng, 8);
    MixedCyclicForm cf = w.cyclic_normal_form();
    CHECK(cf.conjugator * cf.core * cf.conjugator.inverse() == w);
  }
}

TEST_CASE("conjugacy into a factor") {
  SpecPtr s = c2_spec();
  MixedWord g = MixedWord::from_finite_const(s, 0, 1);
  MixedWord x = MixedWord::from_var(s, 0);

  // g x x^-1 normalizes to g itself: the degenerate "exotic" shape.
  MixedWord w = g * x * x.inverse();
  MixedConjugacy conj = w.conjugate_into_factor();
  CHECK(conj.kind == MixedConjugacy::Kind::factor);
  CHECK(conj.factor == 0);

  SpecPtr s2 = free_spec(2, {"x"});
  MixedWord cd = fgen(s2, 0) * fgen(s2, 1);
  CHECK(cd.conjugate_into_factor().kind == MixedConjugacy::Kind::none);

  MixedWord xc =
      MixedWord::from_var(s2, 0).inverse() * fgen(s2, 0) * MixedWord::from_var(s2, 0);
  conj = xc.conjugate_into_factor();
  CHECK(conj.kind == MixedConjugacy::Kind::factor);
  CHECK(s2->factor(conj.factor).name == "C");

  CHECK(MixedWord::identity(s2).conjugate_into_factor().kind ==
        MixedConjugacy::Kind::identity);

  // Invariance under conjugation by arbitrary words.
  std::mt19937_64 rng(13);
  for (int i = 0; i < 200; ++i) {
    MixedWord w0 = random_mixed(s2, rng, 5);
    MixedWord t = random_mixed(s2, rng, 4);
    MixedConjugacy a = w0.conjugate_into_factor();
    MixedConjugacy b = (t * w0 * t.inverse()).conjugate_into_factor();
    CHECK(a.kind == b.kind);
    if (a.kind == MixedConjugacy::Kind::factor) CHECK(a.factor == b.factor);
  }
}

TEST_CASE("huge powers of single syllables stay compact") {
  SpecPtr s = c2_spec();
  BigInt huge("1000000000000000000000000001");  // odd
  MixedWord a = MixedWord::from_finite_const(s, 0, 1);
  CHECK(a.pow(huge) == a);       // a has order 2
  CHECK(a.pow(huge - 1).is_identity());
  MixedWord x = MixedWord::from_var(s, 0);
  CHECK(x.pow(huge).syllable_count() == 1);

  SpecPtr f = free_spec(1, {});
  CHECK(fgen(f, 0).pow(huge).syllable_count() == 1);
  CHECK_THROWS_AS((fgen(f, 0) * MixedWord::from_var(s, 0)), Error);
}

TEST_CASE("quotient content matches factor deletion on a direct analogue") {
  // G = C2 x C3 as one finite group; killing the C3 part is the finite
  // analogue of deleting a free factor.
  std::vector<std::vector<int>> tab(6, std::vector<int>(6));
  auto idx = [](int a, int b) { return a * 3 + b; };
  for (int a1 = 0; a1 < 2; ++a1)
    for (int b1 = 0; b1 < 3; ++b1)
      for (int a2 = 0; a2 < 2; ++a2)
        for (int b2 = 0; b2 < 3; ++b2)
          tab[idx(a1, b1)][idx(a2, b2)] = idx((a1 + a2) % 2, (b1 + b2) % 3);
  auto g = std::make_shared<const FiniteGroup>(FiniteGroup::validate_table(tab));
  SpecPtr s = FreeProductSpec::make({FactorSpec::finite_group("G", g)},
                                    Alphabet::make({"x"}));
  std::vector<int> kpart{idx(0, 0), idx(0, 1), idx(0, 2)};

  std::mt19937_64 rng(17);
  std::uniform_int_distribution<int> elem(0, 5);
  std::uniform_int_distribution<int> exp(-2, 2);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<Syl> raw;
    for (int i = 0; i < 6; ++i) {
      if (i % 2 == 0) {
        raw.push_back(C{0, elem(rng)});
      } else {
        raw.push_back(V{0, exp(rng)});
      }
    }
    MixedWord w = MixedWord::normalize(s, raw);
    MixedWord qc = quotient_content(w, kpart);
    // Deleting the C3 coordinate directly.
    std::vector<Syl> deleted;
    for (const Syl& syl : w.syllables()) {
      if (const C* cc = std::get_if<C>(&syl)) {
        int e = std::get<int>(cc->elem);
        deleted.push_back(C{0, idx(e / 3, 0)});
      } else {
        deleted.push_back(syl);
      }
    }
    MixedWord direct = MixedWord::normalize(s, deleted);
    // Compare syllable strings through the projection.
    REQUIRE(qc.syllable_count() == direct.syllable_count());
    for (int i = 0; i < qc.syllable_count(); ++i) {
      const Syl& a = qc.syllables()[i];
      const Syl& b = direct.syllables()[i];
      if (const V* va = std::get_if<V>(&a)) {
        const V* vb = std::get_if<V>(&b);
        REQUIRE(vb != nullptr);
        CHECK(va->exp == vb->exp);
      } else {
        const C* ca = std::get_if<C>(&a);
        const C* cb = std::get_if<C>(&b);
        REQUIRE(cb != nullptr);
        // Both drop the C3 coordinate; cosets of kpart are indexed by the
        // C2 coordinate.
        CHECK(std::get<int>(ca->elem) == std::get<int>(cb->elem) / 3);
      }
    }
  }
}
