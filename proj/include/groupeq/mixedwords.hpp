#pragma once

#include <cctype>
#include <deque>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "groupeq/common.hpp"
#include "groupeq/groups.hpp"
#include "groupeq/words.hpp"

namespace groupeq {

/// One free factor of a free product: a free group on an alphabet, a
/// finite group by table, or an inert finitely presented group.
struct FactorSpec {
  enum class Kind { free_group, finite, presented };

  Kind kind;
  std::string name;
  AlphabetPtr free_alphabet;    // kind == free_group
  FiniteGroupPtr finite;        // kind == finite
  PresentationPtr presented;    // kind == presented

  static FactorSpec free_group(std::string name, AlphabetPtr alphabet) {
    return {Kind::free_group, std::move(name), std::move(alphabet), nullptr,
            nullptr};
  }
  static FactorSpec finite_group(std::string name, FiniteGroupPtr g) {
    return {Kind::finite, std::move(name), nullptr, std::move(g), nullptr};
  }
  static FactorSpec presented_group(std::string name, PresentationPtr p) {
    return {Kind::presented, std::move(name), nullptr, nullptr, std::move(p)};
  }
};

class FreeProductSpec;
using SpecPtr = std::shared_ptr<const FreeProductSpec>;

/// Declared factors plus a variable alphabet: the ambient free product
/// G_1 * ... * G_m * F(variables).
class FreeProductSpec {
 public:
  FreeProductSpec(std::vector<FactorSpec> factors, AlphabetPtr variables)
      : factors_(std::move(factors)), variables_(std::move(variables)) {
    std::vector<std::string> names;
    for (const FactorSpec& f : factors_) names.push_back(f.name);
    for (const std::string& v : variables_->names()) names.push_back(v);
    for (std::size_t i = 0; i < names.size(); ++i) {
      for (std::size_t j = i + 1; j < names.size(); ++j) {
        if (names[i] == names[j]) {
          throw Error("factor/variable name '" + names[i] + "' is not unique");
        }
      }
    }
  }

  static SpecPtr make(std::vector<FactorSpec> factors, AlphabetPtr variables) {
    return std::make_shared<const FreeProductSpec>(std::move(factors),
                                                   std::move(variables));
  }

  int num_factors() const { return static_cast<int>(factors_.size()); }
  const FactorSpec& factor(int i) const { return factors_.at(i); }
  const std::vector<FactorSpec>& factors() const { return factors_; }
  const AlphabetPtr& variables() const { return variables_; }

  int factor_index(std::string_view name) const {
    for (std::size_t i = 0; i < factors_.size(); ++i) {
      if (factors_[i].name == name) return static_cast<int>(i);
    }
    return -1;
  }

  /// Shallow structural compatibility: same variables and factor
  /// signatures. Words over same-shape specs interoperate.
  bool same_shape(const FreeProductSpec& o) const {
    if (!(*variables_ == *o.variables_)) return false;
    if (factors_.size() != o.factors_.size()) return false;
    for (std::size_t i = 0; i < factors_.size(); ++i) {
      const FactorSpec& a = factors_[i];
      const FactorSpec& b = o.factors_[i];
      if (a.kind != b.kind || a.name != b.name) return false;
      if (a.kind == FactorSpec::Kind::free_group &&
          !(*a.free_alphabet == *b.free_alphabet)) {
        return false;
      }
      if (a.kind == FactorSpec::Kind::finite &&
          a.finite->order() != b.finite->order()) {
        return false;
      }
    }
    return true;
  }

  SpecPtr without_factor(int index) const {
    std::vector<FactorSpec> rest;
    for (int i = 0; i < num_factors(); ++i) {
      if (i != index) rest.push_back(factors_[i]);
    }
    return make(std::move(rest), variables_);
  }

  SpecPtr with_factor_replaced(int index, FactorSpec f) const {
    std::vector<FactorSpec> fs = factors_;
    fs.at(index) = std::move(f);
    return make(std::move(fs), variables_);
  }

 private:
  std::vector<FactorSpec> factors_;
  AlphabetPtr variables_;
};

struct MixedCyclicForm;
struct MixedConjugacy;

/// Normal-form word in the free product: alternating non-identity factor
/// constants (adjacent ones in distinct factors) and variable syllables
/// (adjacent ones on distinct generators).
class MixedWord {
 public:
  /// Factor element: index for finite factors, reduced word for free ones.
  struct Const {
    int factor = -1;
    std::variant<int, Word> elem;
    bool operator==(const Const& o) const {
      return factor == o.factor && elem == o.elem;
    }
  };
  struct Var {
    int gen = -1;
    BigInt exp;
    bool operator==(const Var& o) const {
      return gen == o.gen && exp == o.exp;
    }
  };
  using Syllable = std::variant<Const, Var>;

  static MixedWord identity(SpecPtr spec) {
    return MixedWord(std::move(spec), {});
  }

  static MixedWord from_var(SpecPtr spec, int gen, BigInt exp = 1) {
    return normalize(spec, {Var{gen, std::move(exp)}});
  }

  static MixedWord from_finite_const(SpecPtr spec, int factor, int elem) {
    return normalize(spec, {Const{factor, elem}});
  }

  static MixedWord from_free_const(SpecPtr spec, int factor, Word elem) {
    return normalize(spec, {Const{factor, std::move(elem)}});
  }

  /// Stack normalization: merges adjacent same-factor constants through
  /// the factor's own multiplication and adjacent same-generator
  /// variable runs; drops identities. Idempotent.
  static MixedWord normalize(SpecPtr spec, const std::vector<Syllable>& raw) {
    std::vector<Syllable> out;
    for (const Syllable& s : raw) {
      if (const Var* v = std::get_if<Var>(&s)) {
        if (v->gen < 0 || v->gen >= spec->variables()->size()) {
          throw Error("undeclared variable id " + std::to_string(v->gen));
        }
        if (v->exp == 0) continue;
        if (!out.empty()) {
          if (Var* top = std::get_if<Var>(&out.back());
              top && top->gen == v->gen) {
            top->exp += v->exp;
            if (top->exp == 0) out.pop_back();
            continue;
          }
        }
        out.push_back(s);
      } else {
        const Const& c = std::get<Const>(s);
        if (c.factor < 0 || c.factor >= spec->num_factors()) {
          throw Error("undeclared factor index " + std::to_string(c.factor));
        }
        const FactorSpec& f = spec->factor(c.factor);
        if (f.kind == FactorSpec::Kind::presented) {
          throw Error("factor '" + f.name +
                      "' is presented and has no computable normal form");
        }
        if (is_factor_identity(f, c)) continue;
        if (!out.empty()) {
          if (Const* top = std::get_if<Const>(&out.back());
              top && top->factor == c.factor) {
            Const merged = factor_product(f, *top, c);
            out.pop_back();
            if (!is_factor_identity(f, merged)) {
              out.push_back(std::move(merged));
            }
            continue;
          }
        }
        out.push_back(s);
      }
    }
    return MixedWord(std::move(spec), std::move(out));
  }

  const SpecPtr& spec() const { return spec_; }
  const std::vector<Syllable>& syllables() const { return syls_; }
  bool is_identity() const { return syls_.empty(); }
  int syllable_count() const { return static_cast<int>(syls_.size()); }

  MixedWord operator*(const MixedWord& rhs) const {
    if (spec_ != rhs.spec_ && !spec_->same_shape(*rhs.spec_)) {
      throw Error("free-product spec mismatch in multiplication");
    }
    std::vector<Syllable> cat = syls_;
    cat.insert(cat.end(), rhs.syls_.begin(), rhs.syls_.end());
    return normalize(spec_, cat);
  }

  MixedWord inverse() const {
    std::vector<Syllable> out;
    out.reserve(syls_.size());
    for (auto it = syls_.rbegin(); it != syls_.rend(); ++it) {
      if (const Var* v = std::get_if<Var>(&*it)) {
        out.push_back(Var{v->gen, -v->exp});
      } else {
        const Const& c = std::get<Const>(*it);
        out.push_back(factor_inverse(spec_->factor(c.factor), c));
      }
    }
    return normalize(spec_, out);
  }

  MixedWord pow(const BigInt& k) const {
    if (k == 0 || syls_.empty()) return identity(spec_);
    if (syls_.size() == 1) {
      if (const Var* v = std::get_if<Var>(&syls_[0])) {
        return normalize(spec_, {Var{v->gen, v->exp * k}});
      }
      const Const& c = std::get<Const>(syls_[0]);
      const FactorSpec& f = spec_->factor(c.factor);
      if (f.kind == FactorSpec::Kind::finite) {
        return from_finite_const(spec_, c.factor,
                                 f.finite->power(std::get<int>(c.elem), k));
      }
      const Word& w = std::get<Word>(c.elem);
      if (w.syllable_count() == 1) {
        return from_free_const(spec_, c.factor, w.pow(k));
      }
    }
    MixedWord base = k < 0 ? inverse() : *this;
    long long reps = checked_small(abs_of(k), "mixed word power");
    std::vector<Syllable> cat;
    cat.reserve(base.syls_.size() * static_cast<std::size_t>(reps));
    for (long long i = 0; i < reps; ++i) {
      cat.insert(cat.end(), base.syls_.begin(), base.syls_.end());
    }
    return normalize(spec_, cat);
  }

  /// The image under the retraction onto F(variables): constants are
  /// deleted and the remaining variable word freely reduced.
  Word content() const {
    std::vector<Word::Syllable> raw;
    for (const Syllable& s : syls_) {
      if (const Var* v = std::get_if<Var>(&s)) raw.push_back({v->gen, v->exp});
    }
    return Word::reduce(spec_->variables(), raw);
  }

  /// Image under the retraction deleting one whole factor; the result
  /// lives over the spec with that factor removed.
  MixedWord delete_factor(std::string_view factor_name) const {
    int idx = spec_->factor_index(factor_name);
    if (idx < 0) {
      throw Error("delete_factor: factor '" + std::string(factor_name) +
                  "' not declared");
    }
    SpecPtr reduced = spec_->without_factor(idx);
    std::vector<Syllable> raw;
    for (const Syllable& s : syls_) {
      if (const Const* c = std::get_if<Const>(&s)) {
        if (c->factor == idx) continue;
        Const moved = *c;
        if (moved.factor > idx) --moved.factor;
        raw.push_back(std::move(moved));
      } else {
        raw.push_back(s);
      }
    }
    return normalize(reduced, raw);
  }

  /// Free-product cyclic reduction: while the first and last syllables
  /// are mergeable (same factor constants, or same-generator variables)
  /// rotate them together.
  MixedCyclicForm cyclic_normal_form() const;

  /// A word is conjugate into a factor iff its cyclic normal form is a
  /// single constant of that factor; the trivial word reports
  /// Kind::identity.
  MixedConjugacy conjugate_into_factor() const;

  bool operator==(const MixedWord& o) const { return syls_ == o.syls_; }
  bool operator!=(const MixedWord& o) const { return !(*this == o); }

  std::string str() const {
    if (syls_.empty()) return "1";
    std::ostringstream os;
    bool first = true;
    for (const Syllable& s : syls_) {
      if (!first) os << ' ';
      first = false;
      if (const Var* v = std::get_if<Var>(&s)) {
        os << spec_->variables()->name(v->gen);
        if (v->exp != 1) os << '^' << v->exp.str();
      } else {
        os << const_str(std::get<Const>(s));
      }
    }
    return os.str();
  }

  /// Prints a constant so that reparsing yields the same element: the
  /// label when it is an unambiguous identifier, the indexed form
  /// NAME.i otherwise.
  std::string const_str(const Const& c) const {
    const FactorSpec& f = spec_->factor(c.factor);
    if (f.kind == FactorSpec::Kind::finite) {
      int e = std::get<int>(c.elem);
      if (f.finite->has_labels() &&
          label_resolves_here(f.finite->label(e), c.factor, e)) {
        return f.finite->label(e);
      }
      return f.name + "." + std::to_string(e);
    }
    return std::get<Word>(c.elem).str();
  }

  /// Identifier resolution in words scans variables first, then factors
  /// in declaration order; a label prints bare only when that scan lands
  /// back on this very element.
  bool label_resolves_here(const std::string& label, int factor,
                           int elem) const {
    if (label.empty()) return false;
    for (std::size_t i = 0; i < label.size(); ++i) {
      char ch = label[i];
      bool ok = ch == '_' || std::isalpha(static_cast<unsigned char>(ch)) ||
                (i > 0 && std::isdigit(static_cast<unsigned char>(ch)));
      if (!ok) return false;
    }
    if (spec_->variables()->id_of(label) >= 0) return false;
    for (int fi = 0; fi < spec_->num_factors(); ++fi) {
      if (spec_->factor(fi).name == label) return false;
    }
    for (int fi = 0; fi <= factor; ++fi) {
      const FactorSpec& f = spec_->factor(fi);
      if (f.kind == FactorSpec::Kind::finite && f.finite->has_labels()) {
        int hit = f.finite->element_by_label(label);
        if (hit >= 0) return fi == factor && hit == elem;
      } else if (f.kind == FactorSpec::Kind::free_group &&
                 f.free_alphabet->id_of(label) >= 0) {
        return false;
      } else if (f.kind == FactorSpec::Kind::presented &&
                 f.presented->alphabet->id_of(label) >= 0) {
        return false;
      }
    }
    return false;
  }

  static bool is_factor_identity(const FactorSpec& f, const Const& c) {
    if (f.kind == FactorSpec::Kind::finite) {
      return std::get<int>(c.elem) == f.finite->identity();
    }
    return std::get<Word>(c.elem).is_identity();
  }

  static Const factor_product(const FactorSpec& f, const Const& lhs,
                              const Const& rhs) {
    if (f.kind == FactorSpec::Kind::finite) {
      return Const{lhs.factor,
                   f.finite->mul(std::get<int>(lhs.elem),
                                 std::get<int>(rhs.elem))};
    }
    return Const{lhs.factor, std::get<Word>(lhs.elem) * std::get<Word>(rhs.elem)};
  }

  static Const factor_inverse(const FactorSpec& f, const Const& c) {
    if (f.kind == FactorSpec::Kind::finite) {
      return Const{c.factor, f.finite->inv(std::get<int>(c.elem))};
    }
    return Const{c.factor, std::get<Word>(c.elem).inverse()};
  }

 private:
  MixedWord(SpecPtr spec, std::vector<Syllable> syls)
      : spec_(std::move(spec)), syls_(std::move(syls)) {}

  SpecPtr spec_;
  std::vector<Syllable> syls_;
};

struct MixedCyclicForm {
  MixedWord core;
  MixedWord conjugator;  // w = conjugator * core * conjugator^-1
};

struct MixedConjugacy {
  enum class Kind { none, identity, factor };
  Kind kind = Kind::none;
  int factor = -1;
  MixedWord conjugator;
  std::optional<MixedWord::Syllable> element;  // set when kind == factor
};

inline MixedCyclicForm MixedWord::cyclic_normal_form() const {
  std::deque<Syllable> core(syls_.begin(), syls_.end());
  std::vector<Syllable> conj;
  while (core.size() >= 2) {
    const Syllable& a = core.front();
    const Syllable& b = core.back();
    std::optional<Syllable> merged;
    if (const Var* va = std::get_if<Var>(&a)) {
      const Var* vb = std::get_if<Var>(&b);
      if (!vb || vb->gen != va->gen) break;
      BigInt e = vb->exp + va->exp;  // w = a m b -> m (b a)
      if (e != 0) merged = Var{va->gen, e};
    } else {
      const Const& ca = std::get<Const>(a);
      const Const* cb = std::get_if<Const>(&b);
      if (!cb || cb->factor != ca.factor) break;
      const FactorSpec& f = spec_->factor(ca.factor);
      Const prod = factor_product(f, *cb, ca);
      if (!is_factor_identity(f, prod)) merged = std::move(prod);
    }
    Syllable front = a;
    conj.push_back(std::move(front));
    core.pop_front();
    core.pop_back();
    if (merged) core.push_back(std::move(*merged));
  }
  return {MixedWord(spec_, {core.begin(), core.end()}),
          normalize(spec_, conj)};
}

inline MixedConjugacy MixedWord::conjugate_into_factor() const {
  MixedCyclicForm cf = cyclic_normal_form();
  if (cf.core.is_identity()) {
    return {MixedConjugacy::Kind::identity, -1, cf.conjugator, std::nullopt};
  }
  if (cf.core.syllable_count() == 1) {
    if (const Const* c = std::get_if<Const>(&cf.core.syllables()[0])) {
      return {MixedConjugacy::Kind::factor, c->factor, cf.conjugator,
              cf.core.syllables()[0]};
    }
  }
  return {MixedConjugacy::Kind::none, -1, identity(spec_), std::nullopt};
}

/// The quotient-content map: constants of the (single, finite) factor
/// are pushed through the projection G -> G/A and identity images drop.
inline MixedWord quotient_content(const MixedWord& w,
                                  const std::vector<int>& normal_subgroup) {
  const SpecPtr& spec = w.spec();
  if (spec->num_factors() != 1 ||
      spec->factor(0).kind != FactorSpec::Kind::finite) {
    throw Error("quotient_content: spec must have a single finite factor");
  }
  const FiniteGroup& g = *spec->factor(0).finite;
  Quotient q = quotient(g, normal_subgroup);
  SpecPtr qspec = spec->with_factor_replaced(
      0, FactorSpec::finite_group(
             spec->factor(0).name,
             std::make_shared<const FiniteGroup>(std::move(q.group))));
  std::vector<MixedWord::Syllable> raw;
  for (const MixedWord::Syllable& s : w.syllables()) {
    if (const MixedWord::Const* c = std::get_if<MixedWord::Const>(&s)) {
      raw.push_back(MixedWord::Const{0, q.projection[std::get<int>(c->elem)]});
    } else {
      raw.push_back(s);
    }
  }
  return MixedWord::normalize(qspec, raw);
}

/// System of equations w_i = 1 over a shared free-product spec.
struct EquationSystem {
  SpecPtr spec;
  std::vector<MixedWord> equations;

  EquationSystem(SpecPtr s, std::vector<MixedWord> eqs)
      : spec(std::move(s)), equations(std::move(eqs)) {
    for (const MixedWord& w : equations) {
      if (w.spec() != spec) {
        throw Error("equation system: equations must share one spec");
      }
    }
  }
};

}  // namespace groupeq
