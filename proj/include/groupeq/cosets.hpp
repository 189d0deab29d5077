#pragma once

#include <algorithm>
#include <map>
#include <memory>
#include <optional>
#include <queue>
#include <random>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "groupeq/common.hpp"
#include "groupeq/groups.hpp"
#include "groupeq/words.hpp"

namespace groupeq {

/// Complete right-coset action table for a subgroup of a finitely
/// presented group. Row c has one column per generator and one per
/// inverse generator; coset 0 is the subgroup's own coset. Tables are
/// standardized: cosets are numbered in discovery order under the fixed
/// column order (g0, g0^-1, g1, g1^-1, ...).
class CosetTable {
 public:
  CosetTable(PresentationPtr base, int ncosets, std::vector<int> action)
      : base_(std::move(base)), n_(ncosets), tab_(std::move(action)) {
    ngens_ = base_->alphabet->size();
    if (static_cast<int>(tab_.size()) != n_ * 2 * ngens_) {
      throw Error("coset table shape mismatch");
    }
  }

  const PresentationPtr& base() const { return base_; }
  int size() const { return n_; }
  int ngens() const { return ngens_; }

  /// Action of a signed letter (gen*2 for g, gen*2+1 for g^-1).
  int act_letter(int coset, int letter) const {
    return tab_[static_cast<std::size_t>(coset) * 2 * ngens_ + letter];
  }

  int act(int coset, int gen, bool inverse = false) const {
    return act_letter(coset, gen * 2 + (inverse ? 1 : 0));
  }

  int trace(int coset, const Word& w) const {
    int c = coset;
    for (int letter : w.expand_letters()) c = act_letter(c, letter);
    return c;
  }

  const std::vector<int>& flat() const { return tab_; }

  bool operator==(const CosetTable& o) const {
    return n_ == o.n_ && ngens_ == o.ngens_ && tab_ == o.tab_;
  }

 private:
  PresentationPtr base_;
  int n_;
  int ngens_;
  std::vector<int> tab_;
};

/// Post-hoc consistency check, independent of how the table was built:
/// totality, inverse consistency, and closure of every relator at every
/// coset (plus, optionally, subgroup generators fixing coset 0).
inline void verify_coset_table(const CosetTable& t,
                               const std::vector<Word>& subgens = {}) {
  const int n = t.size();
  const int cols = 2 * t.ngens();
  for (int c = 0; c < n; ++c) {
    for (int col = 0; col < cols; ++col) {
      int d = t.act_letter(c, col);
      if (d < 0 || d >= n) throw Error("coset table not complete");
      if (t.act_letter(d, col ^ 1) != c) {
        throw Error("coset table inverse action inconsistent");
      }
    }
  }
  for (const Word& r : t.base()->relators) {
    for (int c = 0; c < n; ++c) {
      if (t.trace(c, r) != c) {
        throw Error("relator " + r.str() + " does not close at coset " +
                    std::to_string(c));
      }
    }
  }
  for (const Word& w : subgens) {
    if (t.trace(0, w) != 0) {
      throw Error("subgroup generator " + w.str() + " does not fix coset 0");
    }
  }
}

namespace detail {

/// HLT-style enumerator with immediate deductions and in-place
/// coincidence merging (union-find on cosets, smaller index survives).
class ToddCoxeterState {
 public:
  ToddCoxeterState(int ngens, long long max_cosets)
      : ngens_(ngens), cols_(2 * ngens), max_cosets_(max_cosets) {
    new_coset();
  }

  int rep(int k) {
    int l = k;
    while (p_[l] != l) l = p_[l];
    int m = k;
    while (m != l) {
      int next = p_[m];
      p_[m] = l;
      m = next;
    }
    return l;
  }

  bool alive(int c) const { return p_[c] == c; }
  long long live_count() const { return live_; }
  int total() const { return static_cast<int>(p_.size()); }

  int get(int c, int col) const {
    return tab_[static_cast<std::size_t>(c) * cols_ + col];
  }
  void set(int c, int col, int v) {
    tab_[static_cast<std::size_t>(c) * cols_ + col] = v;
  }

  int new_coset() {
    int c = static_cast<int>(p_.size());
    p_.push_back(c);
    tab_.resize(tab_.size() + cols_, -1);
    ++live_;
    return c;
  }

  bool overflowed() const { return live_ > max_cosets_; }

  void define(int c, int col) {
    int d = new_coset();
    set(c, col, d);
    set(d, col ^ 1, c);
  }

  void merge(int a, int b, std::queue<int>& q) {
    a = rep(a);
    b = rep(b);
    if (a == b) return;
    if (a > b) std::swap(a, b);
    p_[b] = a;
    --live_;
    q.push(b);
  }

  void coincidence(int a, int b) {
    std::queue<int> q;
    merge(a, b, q);
    while (!q.empty()) {
      int dead = q.front();
      q.pop();
      for (int col = 0; col < cols_; ++col) {
        int delta = get(dead, col);
        if (delta < 0) continue;
        set(delta, col ^ 1, -1);
        int mu = rep(dead);
        int nu = rep(delta);
        if (int existing = get(mu, col); existing >= 0) {
          merge(nu, existing, q);
        } else if (int back = get(nu, col ^ 1); back >= 0) {
          merge(mu, back, q);
        } else {
          set(mu, col, nu);
          set(nu, col ^ 1, mu);
        }
      }
    }
  }

  void scan_and_fill(int start, const std::vector<int>& letters) {
    if (letters.empty()) return;
    int f = rep(start), b = rep(start);
    int i = 0, j = static_cast<int>(letters.size()) - 1;
    while (true) {
      while (i <= j && get(f, letters[i]) >= 0) f = get(f, letters[i++]);
      if (i > j) {
        if (f != b) coincidence(f, b);
        return;
      }
      while (j >= i && get(b, letters[j] ^ 1) >= 0) b = get(b, letters[j--] ^ 1);
      if (j < i) {
        coincidence(f, b);
        return;
      }
      if (j == i) {
        set(f, letters[i], b);
        set(b, letters[i] ^ 1, f);
        return;
      }
      define(f, letters[i]);
    }
  }

  /// Renumbers live cosets 0..k-1 (in old index order) and repoints
  /// every entry through the union-find representatives.
  std::pair<int, std::vector<int>> compress() {
    std::vector<int> newid(p_.size(), -1);
    int k = 0;
    for (int c = 0; c < total(); ++c) {
      if (alive(c)) newid[c] = k++;
    }
    std::vector<int> out(static_cast<std::size_t>(k) * cols_, -1);
    for (int c = 0; c < total(); ++c) {
      if (!alive(c)) continue;
      for (int col = 0; col < cols_; ++col) {
        int d = get(c, col);
        if (d >= 0) {
          out[static_cast<std::size_t>(newid[c]) * cols_ + col] =
              newid[rep(d)];
        }
      }
    }
    tab_ = std::move(out);
    return {k, newid};
  }

  std::vector<int> take_table() { return std::move(tab_); }

 private:
  int ngens_, cols_;
  long long max_cosets_;
  long long live_ = 0;
  std::vector<int> tab_;
  std::vector<int> p_;
};

/// BFS renumbering in fixed column order; input must be complete.
inline std::vector<int> standardize_table(const std::vector<int>& tab, int n,
                                          int cols) {
  std::vector<int> newid(n, -1), order;
  order.reserve(n);
  newid[0] = 0;
  order.push_back(0);
  for (std::size_t qi = 0; qi < order.size(); ++qi) {
    int c = order[qi];
    for (int col = 0; col < cols; ++col) {
      int d = tab[static_cast<std::size_t>(c) * cols + col];
      if (newid[d] < 0) {
        newid[d] = static_cast<int>(order.size());
        order.push_back(d);
      }
    }
  }
  std::vector<int> out(tab.size());
  for (int c = 0; c < n; ++c) {
    for (int col = 0; col < cols; ++col) {
      out[static_cast<std::size_t>(newid[c]) * cols + col] =
          newid[tab[static_cast<std::size_t>(c) * cols + col]];
    }
  }
  return out;
}

inline std::vector<std::vector<int>> relator_letters(const Presentation& p) {
  std::vector<std::vector<int>> out;
  out.reserve(p.relators.size());
  for (const Word& r : p.relators) out.push_back(r.expand_letters());
  return out;
}

}  // namespace detail

struct ToddCoxeterResult {
  std::optional<CosetTable> table;
  long long cosets_defined = 0;
  long long max_cosets = 0;

  bool complete() const { return table.has_value(); }
};

/// HLT coset enumeration of the subgroup generated by `subgens`.
/// Returns an incomplete result when more than `max_cosets` cosets would
/// be live at once (the index may be infinite or the bound too small).
inline ToddCoxeterResult todd_coxeter(PresentationPtr pres,
                                      const std::vector<Word>& subgens,
                                      long long max_cosets = 100000) {
  const int ngens = pres->alphabet->size();
  for (const Word& w : subgens) {
    if (!same_alphabet(w.alphabet(), pres->alphabet)) {
      throw Error("subgroup generator over a different alphabet");
    }
  }
  detail::ToddCoxeterState st(ngens, max_cosets);
  std::vector<std::vector<int>> rels = detail::relator_letters(*pres);
  std::vector<std::vector<int>> sub;
  sub.reserve(subgens.size());
  for (const Word& w : subgens) sub.push_back(w.expand_letters());

  ToddCoxeterResult out;
  out.max_cosets = max_cosets;
  for (const auto& w : sub) {
    st.scan_and_fill(0, w);
    if (st.overflowed()) {
      out.cosets_defined = st.total();
      return out;
    }
  }
  for (int c = 0; c < st.total(); ++c) {
    if (!st.alive(c)) continue;
    for (const auto& r : rels) {
      st.scan_and_fill(st.rep(c), r);
      if (!st.alive(c)) break;
      if (st.overflowed()) {
        out.cosets_defined = st.total();
        return out;
      }
    }
    if (!st.alive(c)) continue;
    for (int col = 0; col < 2 * ngens; ++col) {
      if (st.get(c, col) < 0) st.define(c, col);
      if (st.overflowed()) {
        out.cosets_defined = st.total();
        return out;
      }
    }
  }
  auto [n, mapping] = st.compress();
  (void)mapping;
  std::vector<int> flat =
      detail::standardize_table(st.take_table(), n, 2 * ngens);
  out.cosets_defined = n;
  out.table.emplace(pres, n, std::move(flat));
  verify_coset_table(*out.table, subgens);
  return out;
}

/// Prefix-closed (shortlex-minimal under the fixed column order) system
/// of coset representatives, with the BFS spanning tree that produced it.
struct SchreierTransversal {
  std::vector<Word> reps;
  struct TreeEdge {
    int parent = -1;
    int col = -1;
  };
  std::vector<TreeEdge> tree;  // tree[0] unused

  /// True when the forward edge (coset, gen) lies in the spanning tree.
  bool is_tree_edge(const CosetTable& t, int coset, int gen) const {
    int d = t.act(coset, gen);
    if (tree[d].parent == coset && tree[d].col == 2 * gen) return true;
    if (tree[coset].parent == d && tree[coset].col == 2 * gen + 1) return true;
    return false;
  }
};

inline SchreierTransversal schreier_transversal(const CosetTable& t) {
  const int n = t.size();
  SchreierTransversal out;
  out.reps.assign(n, Word::identity(t.base()->alphabet));
  out.tree.assign(n, {});
  std::vector<bool> seen(n, false);
  seen[0] = true;
  std::vector<int> order{0};
  for (std::size_t qi = 0; qi < order.size(); ++qi) {
    int c = order[qi];
    for (int col = 0; col < 2 * t.ngens(); ++col) {
      int d = t.act_letter(c, col);
      if (seen[d]) continue;
      seen[d] = true;
      int gen = col >> 1;
      BigInt e = (col & 1) ? -1 : 1;
      out.reps[d] = out.reps[c] * Word::from_gen(t.base()->alphabet, gen, e);
      out.tree[d] = {c, col};
      order.push_back(d);
    }
  }
  for (int c = 0; c < n; ++c) {
    if (!seen[c]) throw Error("coset table is not connected");
    if (t.trace(0, out.reps[c]) != c) {
      throw Error("transversal representative does not reach its coset");
    }
  }
  return out;
}

/// The subgroup generators y_{t,x}, one per non-tree edge (t, x), as a
/// fresh alphabet plus the edge bookkeeping.
struct SchreierGenerators {
  AlphabetPtr alphabet;
  std::vector<std::pair<int, int>> edges;  // (coset, gen) per y-generator
  std::vector<int> index_of;               // (coset*ngens + gen) -> id or -1
};

inline SchreierGenerators make_schreier_generators(
    const CosetTable& t, const SchreierTransversal& tr) {
  SchreierGenerators out;
  out.index_of.assign(static_cast<std::size_t>(t.size()) * t.ngens(), -1);
  std::vector<std::string> names;
  for (int c = 0; c < t.size(); ++c) {
    for (int g = 0; g < t.ngens(); ++g) {
      if (tr.is_tree_edge(t, c, g)) continue;
      out.index_of[static_cast<std::size_t>(c) * t.ngens() + g] =
          static_cast<int>(names.size());
      std::string rep = tr.reps[c].str();
      std::replace(rep.begin(), rep.end(), ' ', '*');
      names.push_back("y[" + rep + "," + t.base()->alphabet->name(g) + "]");
      out.edges.emplace_back(c, g);
    }
  }
  out.alphabet = Alphabet::make(std::move(names));
  return out;
}

/// In F(X): y_{t,x} = t x (rep of t*x)^-1.
inline Word schreier_generator_word(const CosetTable& t,
                                    const SchreierTransversal& tr, int coset,
                                    int gen) {
  Word x = Word::from_gen(t.base()->alphabet, gen);
  return tr.reps[coset] * x * tr.reps[t.act(coset, gen)].inverse();
}

/// Reidemeister rewriting of a word of the subgroup as a word in the
/// nontrivial generators y_{t,x}: scanning from coset 0, the letter x
/// read at coset c emits y_{rep(c),x} (inverse letters emit inverses);
/// tree edges emit nothing. The input must trace back to coset 0. The
/// transversal parameter is the one the generators were built from; the
/// tree is already folded into their index map.
inline Word rewrite(const Word& w, const CosetTable& t,
                    const SchreierTransversal&,
                    const SchreierGenerators& y) {
  std::vector<Word::Syllable> out;
  int c = 0;
  for (int letter : w.expand_letters()) {
    int gen = letter >> 1;
    if ((letter & 1) == 0) {
      int id = y.index_of[static_cast<std::size_t>(c) * t.ngens() + gen];
      if (id >= 0) out.push_back({id, 1});
      c = t.act(c, gen);
    } else {
      int d = t.act(c, gen, true);  // the edge (d, gen) traversed backwards
      int id = y.index_of[static_cast<std::size_t>(d) * t.ngens() + gen];
      if (id >= 0) out.push_back({id, -1});
      c = d;
    }
  }
  if (c != 0) {
    throw Error("rewrite: word does not lie in the subgroup (ends at coset " +
                std::to_string(c) + ")");
  }
  return Word::reduce(y.alphabet, out);
}

/// Subgroup presentation in the Schreier generators: relators are the
/// rewritings of t r t^-1 over all transversal words t and relators r,
/// kept even when they rewrite to the empty word.
struct SubgroupPresentation {
  PresentationPtr base;
  SchreierGenerators gens;
  SchreierTransversal transversal;
  std::vector<Word> relators;

  Presentation presentation() const {
    return Presentation(gens.alphabet, relators);
  }
};

inline SubgroupPresentation subgroup_presentation(const CosetTable& t) {
  SubgroupPresentation out;
  out.base = t.base();
  out.transversal = schreier_transversal(t);
  out.gens = make_schreier_generators(t, out.transversal);
  for (const Word& rep : out.transversal.reps) {
    for (const Word& r : t.base()->relators) {
      Word conj = rep * r * rep.inverse();
      out.relators.push_back(rewrite(conj, t, out.transversal, out.gens));
    }
  }
  return out;
}

struct LowIndexOptions {
  unsigned long long node_budget = 10'000'000;
  unsigned long long seed = 0;  // nonzero: shuffled branch order
};

struct LowIndexResult {
  std::vector<CosetTable> tables;
  bool complete = true;  // false when the node budget was exhausted
  unsigned long long nodes = 0;
};

/// Streams every complete coset table of index <= max_index to the
/// callback as (ncosets, flat action table); a callback returning false
/// stops the search. New cosets are always numbered in first-use order,
/// so each subgroup arrives exactly once, already in standardized form;
/// the visit order is DFS order, not the canonical order. Returns false
/// when the node budget ran out.
template <typename Fn>
inline bool low_index_visit(PresentationPtr pres, int max_index,
                            const LowIndexOptions& opt, Fn&& emit,
                            unsigned long long* nodes_out = nullptr) {
  if (max_index < 1) throw Error("low_index_subgroups: max_index must be >= 1");
  const int ngens = pres->alphabet->size();
  const int cols = 2 * ngens;
  std::vector<std::vector<int>> rels = detail::relator_letters(*pres);

  bool complete = true;
  bool stopped = false;
  unsigned long long nodes = 0;
  std::vector<int> tab;  // n*cols, -1 undefined
  int n = 1;
  tab.assign(cols, -1);
  std::mt19937_64 rng(opt.seed);

  struct Change {
    int c, col;
    bool added_row;
  };

  auto get = [&](int c, int col) -> int {
    return tab[static_cast<std::size_t>(c) * cols + col];
  };
  auto set = [&](int c, int col, int v) {
    tab[static_cast<std::size_t>(c) * cols + col] = v;
  };

  // Sets both directions of an edge; records undo info; fails on clash.
  auto assign = [&](int c, int col, int d, std::vector<Change>& trail) -> bool {
    if (get(c, col) >= 0) return get(c, col) == d;
    if (get(d, col ^ 1) >= 0) return false;
    set(c, col, d);
    trail.push_back({c, col, false});
    set(d, col ^ 1, c);
    trail.push_back({d, col ^ 1, false});
    return true;
  };

  // Deduction fixpoint: scan every relator at every coset; a scan with a
  // single gap forces the missing edge, a closed scan must match.
  auto propagate = [&](std::vector<Change>& trail) -> bool {
    bool again = true;
    while (again) {
      again = false;
      for (const auto& r : rels) {
        if (r.empty()) continue;
        for (int c = 0; c < n; ++c) {
          int f = c, i = 0;
          int b = c, j = static_cast<int>(r.size()) - 1;
          while (i <= j && get(f, r[i]) >= 0) f = get(f, r[i++]);
          if (i > j) {
            if (f != b) return false;
            continue;
          }
          while (j >= i && get(b, r[j] ^ 1) >= 0) b = get(b, r[j--] ^ 1);
          if (j < i) return false;
          if (j == i) {
            if (!assign(f, r[i], b, trail)) return false;
            again = true;
          }
        }
      }
    }
    return true;
  };

  auto undo = [&](std::vector<Change>& trail) {
    while (!trail.empty()) {
      Change ch = trail.back();
      trail.pop_back();
      if (ch.added_row) {
        tab.resize(tab.size() - cols);
        --n;
      } else {
        set(ch.c, ch.col, -1);
      }
    }
  };

  auto dfs = [&](auto&& self) -> void {
    if (++nodes > opt.node_budget) {
      complete = false;
      return;
    }
    int sc = -1, scol = -1;
    for (int c = 0; c < n && sc < 0; ++c) {
      for (int col = 0; col < cols; ++col) {
        if (get(c, col) < 0) {
          sc = c;
          scol = col;
          break;
        }
      }
    }
    if (sc < 0) {
      if (!emit(n, tab)) stopped = true;
      return;
    }
    std::vector<int> candidates;
    for (int d = 0; d < n; ++d) {
      if (get(d, scol ^ 1) < 0) candidates.push_back(d);
    }
    if (n < max_index) candidates.push_back(n);
    if (opt.seed != 0) {
      std::shuffle(candidates.begin(), candidates.end(), rng);
    }
    for (int d : candidates) {
      std::vector<Change> trail;
      if (d == n) {
        tab.resize(tab.size() + cols, -1);
        ++n;
        trail.push_back({0, 0, true});
      }
      if (assign(sc, scol, d, trail) && propagate(trail)) self(self);
      undo(trail);
      if (!complete || stopped) return;
    }
  };
  dfs(dfs);
  if (nodes_out) *nodes_out = nodes;
  return complete;
}

/// All complete coset tables of index <= max_index, deduplicated by
/// standardized form, in canonical (index, table) order. Enumerates
/// subgroups, not conjugacy classes.
inline LowIndexResult low_index_subgroups(PresentationPtr pres, int max_index,
                                          const LowIndexOptions& opt = {}) {
  const int cols = 2 * pres->alphabet->size();
  LowIndexResult result;
  std::set<std::pair<int, std::vector<int>>> found;
  result.complete = low_index_visit(
      pres, max_index, opt,
      [&](int n, const std::vector<int>& tab) {
        found.emplace(n, detail::standardize_table(tab, n, cols));
        return true;
      },
      &result.nodes);
  for (auto& [size, flat] : found) {
    result.tables.emplace_back(pres, size, flat);
    verify_coset_table(result.tables.back());
  }
  return result;
}

}  // namespace groupeq
