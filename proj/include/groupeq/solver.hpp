#pragma once

#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "groupeq/equations.hpp"
#include "groupeq/groups.hpp"
#include "groupeq/mixedwords.hpp"

namespace groupeq {

/// Injective homomorphism between finite groups, as an index map.
struct Embedding {
  FiniteGroupPtr source;
  FiniteGroupPtr target;
  std::vector<int> map;
  std::string description;

  static Embedding identity_embedding(FiniteGroupPtr g, std::string name) {
    Embedding e;
    e.source = g;
    e.target = std::move(g);
    e.map.resize(e.source->order());
    for (int i = 0; i < e.source->order(); ++i) e.map[i] = i;
    e.description = "identity(" + name + ")";
    return e;
  }
};

/// Full-table verification of injectivity and the homomorphism law.
inline void verify_embedding(const Embedding& e) {
  const FiniteGroup& s = *e.source;
  const FiniteGroup& t = *e.target;
  if (static_cast<int>(e.map.size()) != s.order()) {
    throw Error("embedding map has wrong domain size");
  }
  for (int i = 0; i < s.order(); ++i) {
    if (e.map[i] < 0 || e.map[i] >= t.order()) {
      throw Error("embedding image out of range");
    }
    for (int j = 0; j < i; ++j) {
      if (e.map[i] == e.map[j]) {
        throw Error("embedding not injective: elements " + std::to_string(j) +
                    " and " + std::to_string(i) + " collide");
      }
    }
  }
  for (int i = 0; i < s.order(); ++i) {
    for (int j = 0; j < s.order(); ++j) {
      if (e.map[s.mul(i, j)] != t.mul(e.map[i], e.map[j])) {
        throw Error("embedding is not a homomorphism at (" +
                    std::to_string(i) + "," + std::to_string(j) + ")");
      }
    }
  }
}

/// Variable assignment into the embedding's target.
struct Solution {
  Embedding where;
  std::vector<int> assignment;  // per variable id
};

/// Raised when the assignment search hits its visit cap; distinct from
/// an exhaustive "no solution".
class SearchCapExceeded : public Error {
 public:
  explicit SearchCapExceeded(const std::string& what) : Error(what) {}
};

struct SolverOptions {
  long long max_target_order = 10000;
  long long max_visits = 100'000'000;
};

/// Index of the unique finite factor supplying the system's constants,
/// or -1 when the equations are constant-free.
inline int coefficient_factor(const EquationSystem& sys) {
  int idx = -1;
  for (const MixedWord& w : sys.equations) {
    for (const MixedWord::Syllable& s : w.syllables()) {
      const MixedWord::Const* c = std::get_if<MixedWord::Const>(&s);
      if (!c) continue;
      const FactorSpec& f = sys.spec->factor(c->factor);
      if (f.kind != FactorSpec::Kind::finite) {
        throw Error("solver: constants must come from a finite-table group "
                    "(factor '" + f.name + "' is not one)");
      }
      if (idx == -1) {
        idx = c->factor;
      } else if (idx != c->factor) {
        throw Error("solver: constants drawn from more than one factor");
      }
    }
  }
  return idx;
}

/// Left-to-right product of mapped constants and assigned variables.
inline int evaluate(const MixedWord& w, const Embedding& emb,
                    const std::vector<int>& assignment) {
  const FiniteGroup& t = *emb.target;
  int acc = t.identity();
  for (const MixedWord::Syllable& s : w.syllables()) {
    if (const MixedWord::Var* v = std::get_if<MixedWord::Var>(&s)) {
      if (v->gen >= static_cast<int>(assignment.size()) ||
          assignment[v->gen] < 0) {
        throw Error("evaluate: unassigned variable id " +
                    std::to_string(v->gen));
      }
      acc = t.mul(acc, t.power(assignment[v->gen], v->exp));
    } else {
      int e = std::get<int>(std::get<MixedWord::Const>(s).elem);
      acc = t.mul(acc, emb.map[e]);
    }
  }
  return acc;
}

/// Depth-first assignment search, variables in declaration order and
/// elements in index order; each equation is checked as soon as its last
/// variable is assigned. Returns the first solution or nullopt after
/// exhaustive failure.
inline std::optional<Solution> solve_in(const EquationSystem& sys,
                                        const Embedding& emb,
                                        const SolverOptions& opt = {}) {
  const SpecPtr& spec = sys.spec;
  if (int cf = coefficient_factor(sys);
      cf >= 0 && !(*spec->factor(cf).finite == *emb.source)) {
    throw Error("solve_in: embedding source is not the coefficient group");
  }
  if (emb.target->order() > opt.max_target_order) {
    throw SearchCapExceeded("target order " +
                            std::to_string(emb.target->order()) +
                            " exceeds cap " +
                            std::to_string(opt.max_target_order));
  }
  const int nvars = spec->variables()->size();
  std::vector<int> last_var(sys.equations.size(), -1);
  for (std::size_t i = 0; i < sys.equations.size(); ++i) {
    for (const MixedWord::Syllable& s : sys.equations[i].syllables()) {
      if (const MixedWord::Var* v = std::get_if<MixedWord::Var>(&s)) {
        last_var[i] = std::max(last_var[i], v->gen);
      }
    }
  }
  std::vector<int> assignment(nvars, -1);
  // Constant-only equations must already hold.
  for (std::size_t i = 0; i < sys.equations.size(); ++i) {
    if (last_var[i] < 0 &&
        evaluate(sys.equations[i], emb, assignment) != emb.target->identity()) {
      return std::nullopt;
    }
  }
  long long visits = 0;
  const int order = emb.target->order();
  auto dfs = [&](auto&& self, int var) -> bool {
    if (var == nvars) return true;
    for (int val = 0; val < order; ++val) {
      if (++visits > opt.max_visits) {
        throw SearchCapExceeded("assignment search exceeded " +
                                std::to_string(opt.max_visits) + " visits");
      }
      assignment[var] = val;
      bool ok = true;
      for (std::size_t i = 0; i < sys.equations.size() && ok; ++i) {
        if (last_var[i] == var) {
          ok = evaluate(sys.equations[i], emb, assignment) ==
               emb.target->identity();
        }
      }
      if (ok && self(self, var + 1)) return true;
    }
    assignment[var] = -1;
    return false;
  };
  if (!dfs(dfs, 0)) return std::nullopt;
  return Solution{emb, assignment};
}

namespace detail {

inline FiniteGroupPtr direct_with_cyclic(const FiniteGroup& g, int n) {
  const int m = g.order() * n;
  std::vector<std::vector<int>> tab(m, std::vector<int>(m));
  auto idx = [&](int a, int b) { return a * n + b; };
  for (int a1 = 0; a1 < g.order(); ++a1) {
    for (int b1 = 0; b1 < n; ++b1) {
      for (int a2 = 0; a2 < g.order(); ++a2) {
        for (int b2 = 0; b2 < n; ++b2) {
          tab[idx(a1, b1)][idx(a2, b2)] = idx(g.mul(a1, a2), (b1 + b2) % n);
        }
      }
    }
  }
  return std::make_shared<const FiniteGroup>(FiniteGroup::validate_table(tab));
}

/// G wr C_k = G^k x| C_k with (f,s)(h,t) = (i -> f_i h_{(i+s) mod k}, s+t).
inline FiniteGroupPtr wreath_with_cyclic(const FiniteGroup& g, int k) {
  long long base = 1;
  for (int i = 0; i < k; ++i) base *= g.order();
  const long long m = base * k;
  std::vector<int> digits(static_cast<std::size_t>(base) * k);
  std::vector<std::vector<int>> tab(m, std::vector<int>(m));
  auto digit = [&](long long f, int i) {
    for (int d = 0; d < i; ++d) f /= g.order();
    return static_cast<int>(f % g.order());
  };
  for (long long e1 = 0; e1 < m; ++e1) {
    long long f1 = e1 % base;
    int s1 = static_cast<int>(e1 / base);
    for (long long e2 = 0; e2 < m; ++e2) {
      long long f2 = e2 % base;
      int s2 = static_cast<int>(e2 / base);
      long long f = 0, pow = 1;
      for (int i = 0; i < k; ++i) {
        int v = g.mul(digit(f1, i), digit(f2, (i + s1) % k));
        f += v * pow;
        pow *= g.order();
      }
      tab[e1][e2] = static_cast<int>(((s1 + s2) % k) * base + f);
    }
  }
  return std::make_shared<const FiniteGroup>(FiniteGroup::validate_table(
      std::vector<std::vector<int>>(tab.begin(), tab.end()), {}, 0));
}

inline std::vector<int> diagonal_into_wreath(const FiniteGroup& g, int k) {
  long long base = 1;
  for (int i = 0; i < k; ++i) base *= g.order();
  (void)base;
  std::vector<int> map(g.order());
  for (int e = 0; e < g.order(); ++e) {
    long long f = 0, pow = 1;
    for (int i = 0; i < k; ++i) {
      f += static_cast<long long>(e) * pow;
      pow *= g.order();
    }
    map[e] = static_cast<int>(f);  // top component 0
  }
  return map;
}

inline FiniteGroupPtr symmetric_group(int n, long long cap) {
  long long fact = 1;
  for (int i = 2; i <= n; ++i) fact *= i;
  if (fact > cap) return nullptr;
  std::vector<std::vector<int>> perms;
  std::vector<int> p(n);
  for (int i = 0; i < n; ++i) p[i] = i;
  do {
    perms.push_back(p);
  } while (std::next_permutation(p.begin(), p.end()));
  std::map<std::vector<int>, int> index;
  for (std::size_t i = 0; i < perms.size(); ++i) index[perms[i]] = static_cast<int>(i);
  const int m = static_cast<int>(perms.size());
  std::vector<std::vector<int>> tab(m, std::vector<int>(m));
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < m; ++j) {
      std::vector<int> r(n);
      for (int x = 0; x < n; ++x) r[x] = perms[i][perms[j][x]];
      tab[i][j] = index.at(r);
    }
  }
  return std::make_shared<const FiniteGroup>(
      FiniteGroup::validate_table(tab, {}, 0));
}

}  // namespace detail

struct CatalogueOptions {
  long long max_order = 10000;
  int max_cyclic_factor = 12;
};

struct CatalogueEntry {
  Embedding embedding;
  std::string skipped_reason;  // nonempty when the member was skipped

  bool available() const { return skipped_reason.empty(); }
};

/// Deterministic overgroup catalogue: G itself, G x C_n (n <= 12),
/// wreath products G wr C_k (k in {2,3,4}) with the diagonal embedding,
/// the left-regular embedding into S_|G|, then user-registered
/// embeddings. Members over the order cap are kept as skipped entries.
inline std::vector<CatalogueEntry> overgroup_catalogue(
    FiniteGroupPtr g, const std::string& name,
    const CatalogueOptions& opt = {},
    const std::vector<Embedding>& user = {}) {
  std::vector<CatalogueEntry> out;
  out.push_back({Embedding::identity_embedding(g, name), ""});

  for (int n = 2; n <= opt.max_cyclic_factor; ++n) {
    CatalogueEntry entry;
    entry.embedding.description =
        "direct(" + name + ",C" + std::to_string(n) + ")";
    long long order = static_cast<long long>(g->order()) * n;
    if (order > opt.max_order) {
      entry.skipped_reason = "order " + std::to_string(order) + " over cap";
      out.push_back(std::move(entry));
      continue;
    }
    entry.embedding.source = g;
    entry.embedding.target = detail::direct_with_cyclic(*g, n);
    entry.embedding.map.resize(g->order());
    for (int e = 0; e < g->order(); ++e) entry.embedding.map[e] = e * n;
    verify_embedding(entry.embedding);
    out.push_back(std::move(entry));
  }

  for (int k = 2; k <= 4; ++k) {
    CatalogueEntry entry;
    entry.embedding.description =
        "wreath(" + name + ",C" + std::to_string(k) + ")";
    long long order = k;
    for (int i = 0; i < k; ++i) order *= g->order();
    if (order > opt.max_order) {
      entry.skipped_reason = "order " + std::to_string(order) + " over cap";
      out.push_back(std::move(entry));
      continue;
    }
    entry.embedding.source = g;
    entry.embedding.target = detail::wreath_with_cyclic(*g, k);
    entry.embedding.map = detail::diagonal_into_wreath(*g, k);
    verify_embedding(entry.embedding);
    out.push_back(std::move(entry));
  }

  {
    CatalogueEntry entry;
    entry.embedding.description =
        "regular(" + name + ",S" + std::to_string(g->order()) + ")";
    FiniteGroupPtr sym = detail::symmetric_group(g->order(), opt.max_order);
    if (!sym) {
      entry.skipped_reason = "symmetric group order over cap";
      out.push_back(std::move(entry));
    } else {
      entry.embedding.source = g;
      entry.embedding.target = sym;
      entry.embedding.map.resize(g->order());
      // Left-regular action: e maps to the permutation x -> e*x.
      std::vector<std::vector<int>> perms;
      std::vector<int> p(g->order());
      for (int i = 0; i < g->order(); ++i) p[i] = i;
      std::map<std::vector<int>, int> index;
      int id = 0;
      do {
        index[p] = id++;
      } while (std::next_permutation(p.begin(), p.end()));
      for (int e = 0; e < g->order(); ++e) {
        std::vector<int> perm(g->order());
        for (int x = 0; x < g->order(); ++x) perm[x] = g->mul(e, x);
        entry.embedding.map[e] = index.at(perm);
      }
      verify_embedding(entry.embedding);
      out.push_back(std::move(entry));
    }
  }

  for (const Embedding& e : user) {
    verify_embedding(e);
    out.push_back({e, ""});
  }
  return out;
}

/// Outcome of trying the catalogue in order. An inconclusive result
/// never certifies unsolvability.
struct SolveOutcome {
  std::optional<Solution> solution;
  struct Attempt {
    std::string member;
    std::string result;  // "solved", "none", "skipped: ...", "cap: ..."
  };
  std::vector<Attempt> attempts;
};

inline SolveOutcome solve_over(const EquationSystem& sys, FiniteGroupPtr g,
                               const std::string& name,
                               const SolverOptions& sopt = {},
                               const CatalogueOptions& copt = {},
                               const std::vector<Embedding>& user = {}) {
  SolveOutcome out;
  for (const CatalogueEntry& entry : overgroup_catalogue(g, name, copt, user)) {
    if (!entry.available()) {
      out.attempts.push_back(
          {entry.embedding.description, "skipped: " + entry.skipped_reason});
      continue;
    }
    try {
      std::optional<Solution> sol = solve_in(sys, entry.embedding, sopt);
      if (sol) {
        // Independent re-verification of every equation.
        for (const MixedWord& w : sys.equations) {
          if (evaluate(w, sol->where, sol->assignment) !=
              sol->where.target->identity()) {
            throw Error("solver returned an invalid solution");
          }
        }
        out.attempts.push_back({entry.embedding.description, "solved"});
        out.solution = std::move(sol);
        return out;
      }
      out.attempts.push_back({entry.embedding.description, "none"});
    } catch (const SearchCapExceeded& e) {
      out.attempts.push_back({entry.embedding.description,
                              std::string("cap: ") + e.what()});
    }
  }
  return out;
}

}  // namespace groupeq
