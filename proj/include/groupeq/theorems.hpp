#pragma once

#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "groupeq/complexes.hpp"
#include "groupeq/cosets.hpp"
#include "groupeq/equations.hpp"
#include "groupeq/mixedwords.hpp"

namespace groupeq {

enum class CheckStatus { verified, asserted, failed };

inline const char* to_string(CheckStatus s) {
  switch (s) {
    case CheckStatus::verified: return "verified";
    case CheckStatus::asserted: return "asserted";
    case CheckStatus::failed: return "failed";
  }
  return "?";
}

struct Check {
  std::string name;
  CheckStatus status = CheckStatus::failed;
  std::string witness;
};

/// Outcome of one theorem's hypothesis check. The conclusion is present
/// exactly when no check failed; hypotheses that were merely asserted
/// are echoed in `assumed`.
struct HypothesisReport {
  std::string theorem;
  std::vector<Check> checks;
  std::vector<std::string> notes;
  std::optional<std::string> conclusion;

  bool ok() const {
    for (const Check& c : checks) {
      if (c.status == CheckStatus::failed) return false;
    }
    return true;
  }

  std::vector<std::string> assumed() const {
    std::vector<std::string> out;
    for (const Check& c : checks) {
      if (c.status == CheckStatus::asserted) out.push_back(c.name);
    }
    return out;
  }

  void finish(std::string text) {
    if (!ok()) return;
    std::vector<std::string> a = assumed();
    if (!a.empty()) {
      text += " [assuming: ";
      for (std::size_t i = 0; i < a.size(); ++i) {
        text += (i ? "; " : "") + a[i];
      }
      text += "]";
    }
    conclusion = std::move(text);
  }
};

/// User-supplied flags for properties that are not decidable from the
/// inputs. Finiteness is never asserted: it is read off the factor.
struct FactorAssertions {
  bool gr = false;
  bool gr_star = false;
  bool locally_indicable = false;
  bool hyperlinear = false;

  bool operator==(const FactorAssertions&) const = default;
};

struct Assertions {
  std::map<std::string, FactorAssertions> by_factor;

  FactorAssertions get(const std::string& name) const {
    auto it = by_factor.find(name);
    return it == by_factor.end() ? FactorAssertions{} : it->second;
  }
};

namespace detail {

inline std::string group_size_note(const FactorSpec& f) {
  if (f.kind == FactorSpec::Kind::finite) {
    return "finite of order " + std::to_string(f.finite->order());
  }
  return f.kind == FactorSpec::Kind::free_group ? "free group"
                                                : "presented group";
}

/// Local indicability: only the trivial group is verified, a nontrivial
/// finite group is refuted (it has no epimorphism onto Z), anything else
/// must be asserted.
inline Check locally_indicable_check(const FactorSpec& f,
                                     const FactorAssertions& a) {
  Check c{"'" + f.name + "' locally indicable", CheckStatus::failed, ""};
  if (f.kind == FactorSpec::Kind::finite) {
    if (f.finite->order() == 1) {
      c.status = CheckStatus::verified;
      c.witness = "trivial group";
    } else {
      c.status = CheckStatus::failed;
      c.witness = "nontrivial finite group (order " +
                  std::to_string(f.finite->order()) +
                  ") admits no epimorphism onto Z";
    }
    return c;
  }
  if (a.locally_indicable) {
    c.status = CheckStatus::asserted;
    c.witness = "user assertion";
  } else {
    c.witness = "not asserted and not derivable";
  }
  return c;
}

inline Check gr_check(const FactorSpec& f, const FactorAssertions& a) {
  Check c{"'" + f.name + "' is a GR-group", CheckStatus::failed, ""};
  if (f.kind == FactorSpec::Kind::finite) {
    c.status = CheckStatus::verified;
    c.witness = group_size_note(f) + "; finite groups are GR-groups";
  } else if (a.gr || a.hyperlinear) {
    c.status = CheckStatus::asserted;
    c.witness = a.gr ? "user assertion" : "asserted hyperlinear";
  } else {
    c.witness = "not asserted and not derivable";
  }
  return c;
}

inline Check gr_star_check(const FactorSpec& f, const FactorAssertions& a) {
  Check c{"'" + f.name + "' is a GR*-group", CheckStatus::failed, ""};
  if (f.kind == FactorSpec::Kind::finite) {
    c.status = CheckStatus::verified;
    c.witness = group_size_note(f) + "; finite groups are hyperlinear, hence GR*";
  } else if (a.gr_star || a.hyperlinear) {
    c.status = CheckStatus::asserted;
    c.witness = a.gr_star ? "user assertion" : "asserted hyperlinear";
  } else {
    c.witness = "not asserted and not derivable";
  }
  return c;
}

inline std::string dependency_witness(const IntMatrix& m) {
  SmithNormalForm s = snf(m);
  if (s.rank >= m.rows()) return "rows are independent";
  std::string out = "integer relation among rows: [";
  for (int j = 0; j < m.rows(); ++j) {
    out += (j ? ", " : "") + s.U.at(s.rank, j).str();
  }
  return out + "] * rows = 0";
}

inline Check conjugacy_check(const MixedWord& w, const std::string& name) {
  Check c{name, CheckStatus::failed, ""};
  MixedConjugacy conj = w.conjugate_into_factor();
  switch (conj.kind) {
    case MixedConjugacy::Kind::none:
      c.status = CheckStatus::verified;
      c.witness = "cyclic normal form has " +
                  std::to_string(w.cyclic_normal_form().core.syllable_count()) +
                  " syllables";
      break;
    case MixedConjugacy::Kind::identity:
      c.witness = "the word is trivial (conjugate to the identity)";
      break;
    case MixedConjugacy::Kind::factor: {
      MixedWord core = w.cyclic_normal_form().core;
      c.witness = "conjugate into factor '" +
                  w.spec()->factor(conj.factor).name + "': w = t (" +
                  core.str() + ") t^-1 with t = " + conj.conjugator.str();
      break;
    }
  }
  return c;
}

/// Proper-power detection over the free-product letters: distinct
/// syllables of the cyclic core become abstract letters.
inline long long core_power_exponent(const MixedWord& core) {
  if (core.syllable_count() < 2) return 1;
  std::vector<MixedWord::Syllable> distinct;
  std::vector<int> letters;
  for (const MixedWord::Syllable& s : core.syllables()) {
    int id = -1;
    for (std::size_t i = 0; i < distinct.size(); ++i) {
      if (distinct[i] == s) {
        id = static_cast<int>(i);
        break;
      }
    }
    if (id < 0) {
      id = static_cast<int>(distinct.size());
      distinct.push_back(s);
    }
    letters.push_back(2 * id);
  }
  std::vector<std::string> names;
  for (std::size_t i = 0; i < distinct.size(); ++i) {
    names.push_back("s" + std::to_string(i));
  }
  Word encoded = Word::from_letters(Alphabet::make(names), letters);
  return encoded.power_root().k;
}

}  // namespace detail

/// Finite coefficient group + nonsingular system.
inline HypothesisReport check_gr(const EquationSystem& sys) {
  const SpecPtr& spec = sys.spec;
  if (spec->num_factors() != 1 ||
      spec->factor(0).kind != FactorSpec::Kind::finite) {
    throw Error("check_gr: constants must come from a single finite group");
  }
  const FactorSpec& g = spec->factor(0);
  HypothesisReport rep;
  rep.theorem = "gerstenhaber_rothaus";
  rep.checks.push_back({"'" + g.name + "' finite", CheckStatus::verified,
                        "order " + std::to_string(g.finite->order())});
  ExponentMatrix em = exponent_matrix(sys);
  if (rows_independent(em.matrix)) {
    rep.checks.push_back({"system nonsingular", CheckStatus::verified,
                          "exponent rows independent (rank " +
                              std::to_string(rank(em.matrix)) + ")"});
  } else {
    rep.checks.push_back({"system nonsingular", CheckStatus::failed,
                          detail::dependency_witness(em.matrix)});
  }
  rep.finish("the system is solvable over '" + g.name + "'");
  return rep;
}

/// GR coefficient group + some low-index subgroup of <X | contents>
/// whose Schreier relators form a nonsingular system. Budget exhaustion
/// is inconclusive, never a refutation.
inline HypothesisReport check_nitsche_thom(const EquationSystem& sys,
                                           const Assertions& asserts,
                                           int max_index,
                                           const LowIndexOptions& opt = {}) {
  const SpecPtr& spec = sys.spec;
  if (spec->num_factors() != 1) {
    throw Error("check_nitsche_thom: constants must come from a single group");
  }
  const FactorSpec& g = spec->factor(0);
  HypothesisReport rep;
  rep.theorem = "nitsche_thom";
  rep.checks.push_back(detail::gr_check(g, asserts.get(g.name)));

  std::vector<Word> contents;
  for (const MixedWord& w : sys.equations) contents.push_back(w.content());
  PresentationPtr content_pres = std::make_shared<const Presentation>(
      spec->variables(), contents);

  if (sys.equations.size() == 1 && !contents[0].is_identity()) {
    rep.notes.push_back(
        "single equation with nontrivial content " + contents[0].str() +
        "; the single-equation form of the criterion applies directly");
  }

  Check search{"some subgroup of <X | contents> has a nonsingular Schreier presentation",
               CheckStatus::failed, ""};
  // Stream the enumeration and stop at the first witness.
  unsigned long long visited = 0;
  bool complete = low_index_visit(
      content_pres, max_index, opt,
      [&](int n, const std::vector<int>& flat) {
        ++visited;
        CosetTable table(content_pres, n, flat);
        SubgroupPresentation sp = subgroup_presentation(table);
        IntMatrix m = word_exponent_matrix(sp.relators, sp.gens.alphabet);
        if (!rows_independent(m)) return true;
        search.status = CheckStatus::verified;
        search.witness = "subgroup #" + std::to_string(visited - 1) +
                         " of index " + std::to_string(n) + " (" +
                         std::to_string(m.rows()) + " relators, " +
                         std::to_string(m.cols()) + " generators)";
        return false;
      });
  if (search.status != CheckStatus::verified) {
    search.witness = "inconclusive: none found among the " +
                     std::to_string(visited) +
                     " subgroups of index <= " + std::to_string(max_index) +
                     " (not a refutation)";
    if (!complete) {
      search.witness += "; enumeration node budget exhausted";
      rep.notes.push_back("low-index enumeration incomplete: node budget " +
                          std::to_string(opt.node_budget) + " exhausted");
    }
  }
  rep.checks.push_back(std::move(search));
  rep.finish("the system is solvable over '" + g.name + "'");
  return rep;
}

/// Two locally indicable factors + w not conjugate into either factor.
inline HypothesisReport check_bhs(const MixedWord& w,
                                  const Assertions& asserts) {
  const SpecPtr& spec = w.spec();
  if (spec->num_factors() != 2 || spec->variables()->size() != 0) {
    throw Error("check_bhs: expects a word over C * D with no variables");
  }
  const FactorSpec& c = spec->factor(0);
  const FactorSpec& d = spec->factor(1);
  HypothesisReport rep;
  rep.theorem = "brodskii_howie_short";
  rep.checks.push_back(detail::locally_indicable_check(c, asserts.get(c.name)));
  rep.checks.push_back(detail::locally_indicable_check(d, asserts.get(d.name)));
  rep.checks.push_back(detail::conjugacy_check(
      w, "w not conjugate to an element of '" + c.name + "' or '" + d.name +
             "'"));

  MixedWord core = w.cyclic_normal_form().core;
  long long k = 1;
  if (core.syllable_count() >= 2) {
    k = detail::core_power_exponent(core);
    rep.notes.push_back(k > 1 ? "w is conjugate to a proper power (exponent " +
                                    std::to_string(k) + ")"
                              : "w is not a proper power");
  }
  std::string conclusion = "the natural maps '" + c.name + "' -> ('" + c.name +
                           "' * '" + d.name + "')/<<w>> <- '" + d.name +
                           "' are injective";
  if (core.syllable_count() >= 2 && k == 1) {
    conclusion += "; moreover the quotient is locally indicable";
  }
  rep.finish(std::move(conclusion));
  return rep;
}

/// Freiheitssatz over C * D * K: C, D locally indicable, K a GR*-group,
/// and the image of w in C * D not conjugate into C or D.
inline HypothesisReport check_freiheitssatz(const MixedWord& w,
                                            const Assertions& asserts) {
  const SpecPtr& spec = w.spec();
  if (spec->num_factors() != 3 || spec->variables()->size() != 0) {
    throw Error(
        "check_freiheitssatz: expects a word over C * D * K with no "
        "variables (factors in declaration order)");
  }
  const FactorSpec& c = spec->factor(0);
  const FactorSpec& d = spec->factor(1);
  const FactorSpec& k = spec->factor(2);
  HypothesisReport rep;
  rep.theorem = "freiheitssatz";
  rep.checks.push_back(detail::locally_indicable_check(c, asserts.get(c.name)));
  rep.checks.push_back(detail::locally_indicable_check(d, asserts.get(d.name)));
  rep.checks.push_back(detail::gr_star_check(k, asserts.get(k.name)));

  MixedWord image = w.delete_factor(k.name);
  rep.notes.push_back("image of w in '" + c.name + "' * '" + d.name +
                      "': " + image.str());
  rep.checks.push_back(detail::conjugacy_check(
      image, "image of w not conjugate to an element of '" + c.name +
                 "' or '" + d.name + "'"));
  rep.finish("the natural maps '" + c.name + "' * '" + k.name + "' -> ('" +
             c.name + "' * '" + d.name + "' * '" + k.name +
             "')/<<w>> <- '" + d.name + "' * '" + k.name +
             "' are injective");
  return rep;
}

/// Main solvability criterion over a finite group G with normal A:
/// A is GR (finite), G/A locally indicable, and the G/A-content of w is
/// not conjugate to an element of G/A.
inline HypothesisReport check_main(const MixedWord& w,
                                   const std::vector<int>& a,
                                   const Assertions& asserts) {
  (void)asserts;  // finiteness makes every status decidable here
  const SpecPtr& spec = w.spec();
  if (spec->num_factors() != 1 ||
      spec->factor(0).kind != FactorSpec::Kind::finite) {
    throw Error("check_main: expects a word over a single finite group");
  }
  const FactorSpec& g = spec->factor(0);
  HypothesisReport rep;
  rep.theorem = "main_solvability";
  Quotient q = quotient(*g.finite, a);  // validates normality

  rep.checks.push_back({"'A' is a GR-group", CheckStatus::verified,
                        "finite of order " + std::to_string(a.size()) +
                            "; finite groups are GR-groups"});
  if (q.group.order() == 1) {
    rep.checks.push_back({"'" + g.name + "'/A locally indicable",
                          CheckStatus::verified, "trivial quotient"});
  } else {
    rep.checks.push_back(
        {"'" + g.name + "'/A locally indicable", CheckStatus::failed,
         "nontrivial finite quotient (order " +
             std::to_string(q.group.order()) +
             ") admits no epimorphism onto Z"});
  }
  MixedWord qc = quotient_content(w, a);
  rep.notes.push_back("quotient content: " + qc.str());
  rep.checks.push_back(detail::conjugacy_check(
      qc, "quotient content not conjugate to an element of '" + g.name +
              "'/A"));
  rep.finish("the equation w = 1 is solvable over '" + g.name + "'");
  return rep;
}

/// Output of the orbit-system rewriting over G = A . B (B = G/A).
struct OrbitSystemResult {
  EquationSystem system;          // |B| equations over A, variables (b, x)
  FiniteGroupPtr quotient_group;  // B
  bool changed_variables = false;
  std::vector<int> quotient_solution;  // per variable: coset solving the content
  std::vector<int> lifts;              // per variable: lifted element of G
};

/// Rewrites w = 1 over finite G with normal subgroup A as the system
/// {b . w = 1 | b in B} over A with unknowns B x X. Requires (after an
/// automatic change of variables when needed) the variable-deleted image
/// of w to vanish in B.
inline OrbitSystemResult orbit_system(const MixedWord& w,
                                      const std::vector<int>& a) {
  const SpecPtr& spec = w.spec();
  if (spec->num_factors() != 1 ||
      spec->factor(0).kind != FactorSpec::Kind::finite) {
    throw Error("orbit_system: expects a word over a single finite group");
  }
  const FiniteGroup& g = *spec->factor(0).finite;
  const AlphabetPtr& vars = spec->variables();
  Quotient q = quotient(g, a);
  const FiniteGroup& b = q.group;

  if (b.order() == 1) {
    return {EquationSystem(spec, {w}),
            std::make_shared<const FiniteGroup>(b),
            false,
            {},
            {}};
  }

  const int nvars = vars->size();
  auto content_image = [&](const std::vector<int>& assign,
                           const MixedWord& word) {
    int acc = b.identity();
    for (const MixedWord::Syllable& s : word.syllables()) {
      if (const MixedWord::Var* v = std::get_if<MixedWord::Var>(&s)) {
        acc = b.mul(acc, b.power(assign[v->gen], v->exp));
      } else {
        int e = std::get<int>(std::get<MixedWord::Const>(s).elem);
        acc = b.mul(acc, q.projection[e]);
      }
    }
    return acc;
  };

  MixedWord rewritten_src = w;
  OrbitSystemResult out{EquationSystem(spec, {}),
                        std::make_shared<const FiniteGroup>(b), false, {}, {}};

  std::vector<int> trivial_assign(nvars, b.identity());
  if (content_image(trivial_assign, w) != b.identity()) {
    // Search for a solution of the quotient equation, then shift each
    // variable by a fixed lift of its solution value.
    double space = 1;
    for (int i = 0; i < nvars; ++i) space *= b.order();
    if (nvars == 0 || space > 1e7) {
      throw Error(
          "orbit_system: the quotient image of w is nontrivial and no "
          "tractable change of variables exists");
    }
    std::vector<int> assign(nvars, 0);
    bool found = false;
    while (true) {
      if (content_image(assign, w) == b.identity()) {
        found = true;
        break;
      }
      int i = 0;
      while (i < nvars && ++assign[i] == b.order()) assign[i++] = 0;
      if (i == nvars) break;
    }
    if (!found) {
      throw Error(
          "orbit_system: the quotient equation has no solution in G/A; the "
          "rewriting does not apply");
    }
    out.changed_variables = true;
    out.quotient_solution = assign;
    out.lifts.assign(nvars, g.identity());
    for (int x = 0; x < nvars; ++x) {
      for (int e = 0; e < g.order(); ++e) {
        if (q.projection[e] == assign[x]) {
          out.lifts[x] = e;  // least-index preimage
          break;
        }
      }
    }
    std::vector<MixedWord::Syllable> raw;
    for (const MixedWord::Syllable& s : w.syllables()) {
      const MixedWord::Var* v = std::get_if<MixedWord::Var>(&s);
      if (!v || out.lifts[v->gen] == g.identity()) {
        raw.push_back(s);
        continue;
      }
      long long reps = checked_small(abs_of(v->exp), "variable substitution");
      int lift = out.lifts[v->gen];
      for (long long i = 0; i < reps; ++i) {
        if (v->exp > 0) {
          raw.push_back(MixedWord::Var{v->gen, 1});
          raw.push_back(MixedWord::Const{0, lift});
        } else {
          raw.push_back(MixedWord::Const{0, g.inv(lift)});
          raw.push_back(MixedWord::Var{v->gen, -1});
        }
      }
    }
    rewritten_src = MixedWord::normalize(spec, raw);
  }

  // Subgroup A as a group in its own right, elements in index order.
  std::vector<int> a_sorted(a.begin(), a.end());
  std::sort(a_sorted.begin(), a_sorted.end());
  a_sorted.erase(std::unique(a_sorted.begin(), a_sorted.end()),
                 a_sorted.end());
  std::vector<int> pos_in_a(g.order(), -1);
  for (std::size_t i = 0; i < a_sorted.size(); ++i) pos_in_a[a_sorted[i]] = static_cast<int>(i);
  const int na = static_cast<int>(a_sorted.size());
  std::vector<std::vector<int>> atab(na, std::vector<int>(na));
  std::vector<std::string> alabels;
  for (int i = 0; i < na; ++i) {
    for (int j = 0; j < na; ++j) {
      atab[i][j] = pos_in_a[g.mul(a_sorted[i], a_sorted[j])];
    }
  }
  for (int i = 0; i < na; ++i) alabels.push_back(g.label(a_sorted[i]));
  FiniteGroupPtr asub = std::make_shared<const FiniteGroup>(
      FiniteGroup::validate_table(atab, g.has_labels()
                                            ? alabels
                                            : std::vector<std::string>{}));

  // Transversal lifts t_b: the identity coset lifts to the identity.
  std::vector<int> t(b.order(), -1);
  t[b.identity()] = g.identity();
  for (int e = 0; e < g.order(); ++e) {
    int cos = q.projection[e];
    if (t[cos] < 0) t[cos] = e;
  }

  std::vector<std::string> new_var_names;
  for (int cb = 0; cb < b.order(); ++cb) {
    for (int x = 0; x < nvars; ++x) {
      new_var_names.push_back(vars->name(x) + "@" + std::to_string(cb));
    }
  }
  SpecPtr new_spec = FreeProductSpec::make(
      {FactorSpec::finite_group("A", asub)},
      Alphabet::make(std::move(new_var_names)));

  // Reidemeister-style rewriting of the (trivial-image) word: a running
  // quotient prefix beta tags each variable; constants fold into A.
  std::vector<MixedWord::Syllable> hat;
  int beta = b.identity();
  for (const MixedWord::Syllable& s : rewritten_src.syllables()) {
    if (const MixedWord::Var* v = std::get_if<MixedWord::Var>(&s)) {
      hat.push_back(MixedWord::Var{beta * nvars + v->gen, v->exp});
    } else {
      int e = std::get<int>(std::get<MixedWord::Const>(s).elem);
      int beta2 = b.mul(beta, q.projection[e]);
      int folded = g.mul(g.mul(t[beta], e), g.inv(t[beta2]));
      if (pos_in_a[folded] < 0) {
        throw Error("orbit_system: folded constant escaped A");
      }
      hat.push_back(MixedWord::Const{0, pos_in_a[folded]});
      beta = beta2;
    }
  }
  if (beta != b.identity()) {
    throw Error("orbit_system: rewritten word has nontrivial quotient image");
  }

  std::vector<MixedWord> eqs;
  for (int cb = 0; cb < b.order(); ++cb) {
    std::vector<MixedWord::Syllable> translated;
    for (const MixedWord::Syllable& s : hat) {
      if (const MixedWord::Var* v = std::get_if<MixedWord::Var>(&s)) {
        int old_b = v->gen / nvars;
        int x = v->gen % nvars;
        translated.push_back(
            MixedWord::Var{b.mul(cb, old_b) * nvars + x, v->exp});
      } else {
        int ai = std::get<int>(std::get<MixedWord::Const>(s).elem);
        int conj = g.mul(g.mul(t[cb], a_sorted[ai]), g.inv(t[cb]));
        if (pos_in_a[conj] < 0) {
          throw Error("orbit_system: conjugation left A (A not normal?)");
        }
        translated.push_back(MixedWord::Const{0, pos_in_a[conj]});
      }
    }
    eqs.push_back(MixedWord::normalize(new_spec, translated));
  }
  out.system = EquationSystem(new_spec, std::move(eqs));
  return out;
}

}  // namespace groupeq
