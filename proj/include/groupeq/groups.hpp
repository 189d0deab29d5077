#pragma once

#include <algorithm>
#include <map>
#include <memory>
#include <queue>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "groupeq/common.hpp"
#include "groupeq/words.hpp"

namespace groupeq {

/// Finite group given by a full multiplication table over element
/// indices 0..n-1. Immutable once validated.
class FiniteGroup {
 public:
  /// Validates the group axioms. Associativity is checked exhaustively
  /// up to `assoc_exhaustive_bound` elements and by Light's
  /// generator-based test above it.
  static FiniteGroup validate_table(const std::vector<std::vector<int>>& table,
                                    std::vector<std::string> labels = {},
                                    int assoc_exhaustive_bound = 64) {
    const int n = static_cast<int>(table.size());
    if (n == 0) throw Error("group table must be nonempty");
    FiniteGroup g;
    g.n_ = n;
    g.mul_.resize(static_cast<std::size_t>(n) * n);
    for (int i = 0; i < n; ++i) {
      if (static_cast<int>(table[i].size()) != n) {
        throw Error("group table is not square at row " + std::to_string(i));
      }
      for (int j = 0; j < n; ++j) {
        int v = table[i][j];
        if (v < 0 || v >= n) {
          throw Error("closure violated: entry (" + std::to_string(i) + "," +
                      std::to_string(j) + ") = " + std::to_string(v));
        }
        g.mul_[static_cast<std::size_t>(i) * n + j] = v;
      }
    }
    // Identity: a two-sided unit.
    g.identity_ = -1;
    for (int e = 0; e < n; ++e) {
      bool ok = true;
      for (int x = 0; x < n && ok; ++x) {
        ok = g.mul(e, x) == x && g.mul(x, e) == x;
      }
      if (ok) {
        g.identity_ = e;
        break;
      }
    }
    if (g.identity_ < 0) throw Error("no identity element in table");
    // Inverses.
    g.inv_.assign(n, -1);
    for (int x = 0; x < n; ++x) {
      for (int y = 0; y < n; ++y) {
        if (g.mul(x, y) == g.identity_ && g.mul(y, x) == g.identity_) {
          g.inv_[x] = y;
          break;
        }
      }
      if (g.inv_[x] < 0) {
        throw Error("element " + std::to_string(x) + " has no inverse");
      }
    }
    // Associativity.
    if (n <= assoc_exhaustive_bound) {
      for (int a = 0; a < n; ++a) {
        for (int b = 0; b < n; ++b) {
          for (int c = 0; c < n; ++c) {
            if (g.mul(g.mul(a, b), c) != g.mul(a, g.mul(b, c))) {
              throw Error("associativity fails at triple (" +
                          std::to_string(a) + "," + std::to_string(b) + "," +
                          std::to_string(c) + ")");
            }
          }
        }
      }
    } else {
      // Light's test: checking triples whose middle element generates
      // the magma suffices.
      std::vector<int> gens = g.greedy_generators();
      for (int b : gens) {
        for (int a = 0; a < n; ++a) {
          for (int c = 0; c < n; ++c) {
            if (g.mul(g.mul(a, b), c) != g.mul(a, g.mul(b, c))) {
              throw Error("associativity fails at triple (" +
                          std::to_string(a) + "," + std::to_string(b) + "," +
                          std::to_string(c) + ")");
            }
          }
        }
      }
    }
    if (!labels.empty()) {
      if (static_cast<int>(labels.size()) != n) {
        throw Error("label count does not match group order");
      }
      g.labels_ = std::move(labels);
    }
    return g;
  }

  /// Closure of permutations on m points under composition; element 0 is
  /// the identity and elements are numbered in BFS discovery order.
  static FiniteGroup from_permutations(
      const std::vector<std::vector<int>>& gens, int max_order = 20000) {
    int m = gens.empty() ? 1 : static_cast<int>(gens[0].size());
    std::vector<int> idperm(m);
    for (int i = 0; i < m; ++i) idperm[i] = i;
    for (const auto& p : gens) {
      if (static_cast<int>(p.size()) != m) {
        throw Error("permutations act on different point counts");
      }
      std::vector<bool> seen(m, false);
      for (int v : p) {
        if (v < 0 || v >= m || seen[v]) throw Error("invalid permutation");
        seen[v] = true;
      }
    }
    std::vector<std::vector<int>> elems{idperm};
    std::map<std::vector<int>, int> index{{idperm, 0}};
    std::queue<int> todo;
    todo.push(0);
    auto compose = [m](const std::vector<int>& p, const std::vector<int>& q) {
      std::vector<int> r(m);
      for (int i = 0; i < m; ++i) r[i] = p[q[i]];
      return r;
    };
    while (!todo.empty()) {
      int cur = todo.front();
      todo.pop();
      for (const auto& gperm : gens) {
        std::vector<int> prod = compose(elems[cur], gperm);
        if (index.emplace(prod, static_cast<int>(elems.size())).second) {
          elems.push_back(prod);
          if (static_cast<int>(elems.size()) > max_order) {
            throw Error("permutation closure exceeds cap " +
                        std::to_string(max_order));
          }
          todo.push(static_cast<int>(elems.size()) - 1);
        }
      }
    }
    const int n = static_cast<int>(elems.size());
    FiniteGroup g;
    g.n_ = n;
    g.identity_ = 0;
    g.mul_.resize(static_cast<std::size_t>(n) * n);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        g.mul_[static_cast<std::size_t>(i) * n + j] =
            index.at(compose(elems[i], elems[j]));
      }
    }
    g.inv_.assign(n, -1);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        if (g.mul(i, j) == 0) {
          g.inv_[i] = j;
          break;
        }
      }
    }
    g.labels_.reserve(n);
    for (const auto& p : elems) g.labels_.push_back(cycle_string(p));
    g.perms_ = std::move(elems);
    return g;
  }

  static FiniteGroup trivial() { return validate_table({{0}}); }

  static FiniteGroup cyclic(int n) {
    std::vector<std::vector<int>> t(n, std::vector<int>(n));
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) t[i][j] = (i + j) % n;
    }
    return validate_table(t);
  }

  int order() const { return n_; }
  int identity() const { return identity_; }
  int mul(int i, int j) const {
    return mul_[static_cast<std::size_t>(i) * n_ + j];
  }
  int inv(int i) const { return inv_.at(i); }

  int power(int g, const BigInt& e) const {
    BigInt m = e % element_order(g);
    if (m < 0) m += element_order(g);
    long long k = m.convert_to<long long>();
    int acc = identity_;
    for (long long i = 0; i < k; ++i) acc = mul(acc, g);
    return acc;
  }

  int element_order(int g) const {
    int acc = g, ord = 1;
    while (acc != identity_) {
      acc = mul(acc, g);
      ++ord;
    }
    return ord;
  }

  bool has_labels() const { return !labels_.empty(); }

  std::string label(int i) const {
    if (i < 0 || i >= n_) throw Error("element index out of range");
    if (!labels_.empty()) return labels_[i];
    return std::to_string(i);
  }

  /// -1 when no element carries the label.
  int element_by_label(std::string_view name) const {
    for (int i = 0; i < static_cast<int>(labels_.size()); ++i) {
      if (labels_[i] == name) return i;
    }
    return -1;
  }

  /// Present only for permutation-constructed groups.
  const std::vector<std::vector<int>>& permutations() const { return perms_; }

  bool operator==(const FiniteGroup& o) const {
    return n_ == o.n_ && identity_ == o.identity_ && mul_ == o.mul_;
  }

  /// Checks that `s` is closed, contains the identity and inverses.
  /// Returns an explanation in `why` on failure.
  bool is_subgroup(const std::vector<int>& s, std::string* why = nullptr) const {
    std::set<int> in(s.begin(), s.end());
    if (!in.count(identity_)) {
      if (why) *why = "subset does not contain the identity";
      return false;
    }
    for (int a : in) {
      if (!in.count(inv(a))) {
        if (why) *why = "subset misses inverse of " + label(a);
        return false;
      }
      for (int b : in) {
        if (!in.count(mul(a, b))) {
          if (why) {
            *why = "subset not closed: " + label(a) + "*" + label(b) + " = " +
                   label(mul(a, b));
          }
          return false;
        }
      }
    }
    return true;
  }

  /// Normality witness: a pair (g, a) with g a g^-1 outside the subset,
  /// or nullopt if normal.
  bool is_normal(const std::vector<int>& s, std::string* why = nullptr) const {
    std::set<int> in(s.begin(), s.end());
    for (int g = 0; g < n_; ++g) {
      for (int a : in) {
        int c = mul(mul(g, a), inv(g));
        if (!in.count(c)) {
          if (why) {
            *why = "conjugate " + label(g) + " * " + label(a) + " * " +
                   label(g) + "^-1 = " + label(c) + " lies outside the subset";
          }
          return false;
        }
      }
    }
    return true;
  }

  std::vector<int> greedy_generators() const {
    std::vector<int> gens;
    std::set<int> closure = subgroup_closure({});
    for (int g = 0; g < n_; ++g) {
      if (closure.count(g)) continue;
      gens.push_back(g);
      std::vector<int> with(closure.begin(), closure.end());
      with.push_back(g);
      closure = subgroup_closure(with);
      if (static_cast<int>(closure.size()) == n_) break;
    }
    return gens;
  }

  /// Closure under products; finiteness supplies inverses. Each pair of
  /// closure elements is multiplied once in both orders.
  std::set<int> subgroup_closure(const std::vector<int>& seed) const {
    std::vector<char> in(n_, 0);
    std::vector<int> list;
    auto add = [&](int x) {
      if (!in[x]) {
        in[x] = 1;
        list.push_back(x);
      }
    };
    add(identity_);
    for (int s : seed) add(s);
    for (std::size_t i = 0; i < list.size(); ++i) {
      for (std::size_t j = 0; j <= i; ++j) {
        add(mul(list[i], list[j]));
        add(mul(list[j], list[i]));
      }
    }
    return {list.begin(), list.end()};
  }

  static std::string cycle_string(const std::vector<int>& p) {
    const int m = static_cast<int>(p.size());
    std::vector<bool> seen(m, false);
    std::ostringstream os;
    bool any = false;
    for (int i = 0; i < m; ++i) {
      if (seen[i] || p[i] == i) continue;
      any = true;
      os << '(';
      int j = i;
      bool first = true;
      while (!seen[j]) {
        seen[j] = true;
        os << (first ? "" : " ") << (j + 1);
        first = false;
        j = p[j];
      }
      os << ')';
    }
    return any ? os.str() : "()";
  }

 private:
  int n_ = 0;
  int identity_ = 0;
  std::vector<int> mul_;
  std::vector<int> inv_;
  std::vector<std::string> labels_;
  std::vector<std::vector<int>> perms_;
};

using FiniteGroupPtr = std::shared_ptr<const FiniteGroup>;

/// Least normal subgroup containing `seed`, as a sorted index set:
/// the subgroup generated by all conjugates of the seed.
inline std::vector<int> normal_closure(const FiniteGroup& g,
                                       const std::vector<int>& seed) {
  std::vector<int> conjugates;
  for (int s : seed) {
    for (int x = 0; x < g.order(); ++x) {
      conjugates.push_back(g.mul(g.mul(x, s), g.inv(x)));
    }
  }
  std::set<int> closed = g.subgroup_closure(conjugates);
  return {closed.begin(), closed.end()};
}

/// Quotient G/A with the canonical projection. A must be normal.
struct Quotient {
  FiniteGroup group;
  std::vector<int> projection;  // element index -> coset index
};

inline Quotient quotient(const FiniteGroup& g, const std::vector<int>& a) {
  std::string why;
  if (!g.is_subgroup(a, &why)) throw Error("quotient: not a subgroup: " + why);
  if (!g.is_normal(a, &why)) throw Error("quotient: not normal: " + why);
  const int n = g.order();
  std::vector<int> coset_of(n, -1);
  std::vector<int> reps;
  for (int x = 0; x < n; ++x) {
    if (coset_of[x] >= 0) continue;
    int id = static_cast<int>(reps.size());
    reps.push_back(x);
    for (int s : a) coset_of[g.mul(s, x)] = id;  // right coset A*x
    if (coset_of[x] != id) throw Error("quotient: coset bookkeeping failed");
  }
  const int q = static_cast<int>(reps.size());
  std::vector<std::vector<int>> table(q, std::vector<int>(q));
  for (int i = 0; i < q; ++i) {
    for (int j = 0; j < q; ++j) {
      table[i][j] = coset_of[g.mul(reps[i], reps[j])];
    }
  }
  std::vector<std::string> labels;
  labels.reserve(q);
  for (int r : reps) labels.push_back("[" + g.label(r) + "]");
  Quotient out{FiniteGroup::validate_table(table, std::move(labels)),
               std::move(coset_of)};
  return out;
}

/// Group presentation <alphabet | relators>, relators freely reduced.
struct Presentation {
  AlphabetPtr alphabet;
  std::vector<Word> relators;

  Presentation(AlphabetPtr alpha, std::vector<Word> rels)
      : alphabet(std::move(alpha)), relators(std::move(rels)) {
    for (const Word& r : relators) {
      if (!same_alphabet(r.alphabet(), alphabet)) {
        throw Error("relator over a different alphabet");
      }
    }
  }

  bool operator==(const Presentation& o) const {
    if (!same_alphabet(alphabet, o.alphabet)) return false;
    return relators == o.relators;
  }
};

using PresentationPtr = std::shared_ptr<const Presentation>;

}  // namespace groupeq
