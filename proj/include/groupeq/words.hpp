#pragma once

#include <algorithm>
#include <deque>
#include <memory>
#include <numeric>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "groupeq/common.hpp"

namespace groupeq {

class Alphabet;
using AlphabetPtr = std::shared_ptr<const Alphabet>;

/// Named generator together with its position in the declaring alphabet.
struct GenSym {
  std::string name;
  int id = -1;
};

/// An ordered list of generator names; ids are declaration positions.
class Alphabet {
 public:
  explicit Alphabet(std::vector<std::string> names) : names_(std::move(names)) {
    for (std::size_t i = 0; i < names_.size(); ++i) {
      for (std::size_t j = i + 1; j < names_.size(); ++j) {
        if (names_[i] == names_[j]) {
          throw Error("duplicate generator name '" + names_[i] +
                      "' in alphabet");
        }
      }
    }
  }

  static AlphabetPtr make(std::vector<std::string> names) {
    return std::make_shared<const Alphabet>(std::move(names));
  }

  int size() const { return static_cast<int>(names_.size()); }

  const std::string& name(int id) const { return names_.at(id); }

  GenSym gen(int id) const { return GenSym{names_.at(id), id}; }

  /// Returns -1 when the name is not declared.
  int id_of(std::string_view name) const {
    for (std::size_t i = 0; i < names_.size(); ++i) {
      if (names_[i] == name) return static_cast<int>(i);
    }
    return -1;
  }

  bool operator==(const Alphabet& other) const {
    return names_ == other.names_;
  }

  const std::vector<std::string>& names() const { return names_; }

 private:
  std::vector<std::string> names_;
};

inline bool same_alphabet(const AlphabetPtr& a, const AlphabetPtr& b) {
  if (a == b) return true;
  if (!a || !b) return false;
  return *a == *b;
}

struct WordCyclicForm;
struct WordPowerRoot;

/// Freely reduced word over an alphabet, stored as run-length syllables
/// (generator, nonzero exponent) with adjacent syllables on distinct
/// generators. The empty syllable list is the identity.
class Word {
 public:
  struct Syllable {
    int gen = -1;
    BigInt exp;
    bool operator==(const Syllable& o) const {
      return gen == o.gen && exp == o.exp;
    }
  };

  static Word identity(AlphabetPtr alphabet) {
    return Word(std::move(alphabet), {});
  }

  /// Free reduction: merges adjacent equal-generator runs, drops zero
  /// exponents. Idempotent.
  static Word reduce(AlphabetPtr alphabet, const std::vector<Syllable>& raw) {
    std::vector<Syllable> out;
    for (const Syllable& s : raw) {
      if (s.exp == 0) continue;
      if (s.gen < 0 || s.gen >= alphabet->size()) {
        throw Error("syllable generator id " + std::to_string(s.gen) +
                    " outside alphabet of size " +
                    std::to_string(alphabet->size()));
      }
      if (!out.empty() && out.back().gen == s.gen) {
        out.back().exp += s.exp;
        if (out.back().exp == 0) out.pop_back();
      } else {
        out.push_back(s);
      }
    }
    return Word(std::move(alphabet), std::move(out));
  }

  static Word from_gen(AlphabetPtr alphabet, int gen, BigInt exp = 1) {
    return reduce(std::move(alphabet), {{gen, std::move(exp)}});
  }

  const AlphabetPtr& alphabet() const { return alphabet_; }
  const std::vector<Syllable>& syllables() const { return syls_; }
  bool is_identity() const { return syls_.empty(); }
  int syllable_count() const { return static_cast<int>(syls_.size()); }

  BigInt letter_length() const {
    BigInt n = 0;
    for (const Syllable& s : syls_) n += abs_of(s.exp);
    return n;
  }

  Word operator*(const Word& rhs) const {
    if (!same_alphabet(alphabet_, rhs.alphabet_)) {
      throw Error("alphabet mismatch in word multiplication");
    }
    std::vector<Syllable> cat = syls_;
    cat.insert(cat.end(), rhs.syls_.begin(), rhs.syls_.end());
    return reduce(alphabet_, cat);
  }

  Word inverse() const {
    std::vector<Syllable> out;
    out.reserve(syls_.size());
    for (auto it = syls_.rbegin(); it != syls_.rend(); ++it) {
      out.push_back({it->gen, -it->exp});
    }
    return Word(alphabet_, std::move(out));
  }

  Word pow(const BigInt& k) const {
    if (k == 0 || syls_.empty()) return identity(alphabet_);
    if (syls_.size() == 1) {
      return reduce(alphabet_, {{syls_[0].gen, syls_[0].exp * k}});
    }
    Word base = k < 0 ? inverse() : *this;
    long long reps = checked_small(abs_of(k), "word power");
    std::vector<Syllable> cat;
    cat.reserve(base.syls_.size() * static_cast<std::size_t>(reps));
    for (long long i = 0; i < reps; ++i) {
      cat.insert(cat.end(), base.syls_.begin(), base.syls_.end());
    }
    return reduce(alphabet_, cat);
  }

  BigInt exponent_sum(int gen) const {
    BigInt sum = 0;
    for (const Syllable& s : syls_) {
      if (s.gen == gen) sum += s.exp;
    }
    return sum;
  }

  /// Strips inverse first/last letters until the core is cyclically
  /// reduced (first and last syllables not an inverse pair).
  WordCyclicForm cyclic_reduce() const;

  /// Maximal k with w = root^k; requires a nonempty cyclically reduced
  /// word whose letter length is within the expansion cap.
  WordPowerRoot power_root() const;

  /// Signed letters, one entry per letter: gen*2 for g, gen*2+1 for g^-1.
  std::vector<int> expand_letters() const {
    long long len = checked_small(letter_length(), "letter expansion");
    std::vector<int> letters;
    letters.reserve(static_cast<std::size_t>(len));
    for (const Syllable& s : syls_) {
      long long reps = checked_small(abs_of(s.exp), "letter expansion");
      int code = s.gen * 2 + (s.exp < 0 ? 1 : 0);
      for (long long i = 0; i < reps; ++i) letters.push_back(code);
    }
    return letters;
  }

  static Word from_letters(AlphabetPtr alphabet,
                           const std::vector<int>& letters) {
    std::vector<Syllable> raw;
    raw.reserve(letters.size());
    for (int code : letters) {
      raw.push_back({code >> 1, (code & 1) ? BigInt(-1) : BigInt(1)});
    }
    return reduce(std::move(alphabet), raw);
  }

  bool operator==(const Word& other) const { return syls_ == other.syls_; }
  bool operator!=(const Word& other) const { return !(*this == other); }

  std::string str() const {
    if (syls_.empty()) return "1";
    std::ostringstream os;
    bool first = true;
    for (const Syllable& s : syls_) {
      if (!first) os << ' ';
      first = false;
      os << alphabet_->name(s.gen);
      if (s.exp != 1) os << '^' << s.exp.str();
    }
    return os.str();
  }

 private:
  Word(AlphabetPtr alphabet, std::vector<Syllable> syls)
      : alphabet_(std::move(alphabet)), syls_(std::move(syls)) {}

  AlphabetPtr alphabet_;
  std::vector<Syllable> syls_;
};

struct WordCyclicForm {
  Word core;
  Word conjugator;  // w = conjugator * core * conjugator^-1
};

struct WordPowerRoot {
  Word root;
  long long k = 1;
};

inline WordCyclicForm Word::cyclic_reduce() const {
  std::deque<Syllable> core(syls_.begin(), syls_.end());
  std::vector<Syllable> conj;
  while (core.size() >= 2) {
    const Syllable& a = core.front();
    const Syllable& b = core.back();
    if (a.gen != b.gen || sign_of(a.exp) == sign_of(b.exp)) break;
    // w = g^a u g^b with opposite signs: w = g^a (u g^(a+b)) g^-a.
    BigInt merged = a.exp + b.exp;
    Syllable front = a;
    int gen = b.gen;
    conj.push_back(front);
    core.pop_front();
    core.pop_back();
    if (merged != 0) core.push_back({gen, merged});
  }
  return {Word(alphabet_, {core.begin(), core.end()}),
          reduce(alphabet_, conj)};
}

inline WordPowerRoot Word::power_root() const {
  if (syls_.empty()) throw Error("power_root: empty word has no root");
  if (!cyclic_reduce().conjugator.is_identity()) {
    throw Error("power_root: input must be cyclically reduced");
  }
  long long len = checked_small(letter_length(), "power_root expansion");
  std::vector<int> letters = expand_letters();
  for (long long p = 1; p <= len; ++p) {
    if (len % p != 0) continue;
    bool periodic = true;
    for (long long i = p; i < len && periodic; ++i) {
      periodic = letters[i] == letters[i - p];
    }
    if (periodic) {
      std::vector<Syllable> prefix;
      for (long long i = 0; i < p; ++i) {
        int gen = letters[i] >> 1;
        BigInt e = (letters[i] & 1) ? -1 : 1;
        prefix.push_back({gen, e});
      }
      return {reduce(alphabet_, prefix), len / p};
    }
  }
  return {*this, 1};  // unreachable: p = len always matches
}

}  // namespace groupeq
