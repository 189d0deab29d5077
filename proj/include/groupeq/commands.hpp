#pragma once

#include <json.hpp>

#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "groupeq/complexes.hpp"
#include "groupeq/parser.hpp"
#include "groupeq/solver.hpp"
#include "groupeq/theorems.hpp"

namespace groupeq {

using Json = nlohmann::json;

struct RunFlags {
  long long max_cosets = 100000;
  int max_index = 6;
  long long budget = 100'000'000;  // solver assignment visits
  long long order_cap = 10000;     // catalogue member order cap
  unsigned long long node_budget = 10'000'000;
  unsigned long long seed = 0;  // low-index branch exploration order
  int index_table = 0;
  std::string group;   // presentation selector for subgroups/homology
  std::string normal;  // subset name for rewrite
  bool json = false;
};

struct Report {
  Json data;
  std::string text;
};

namespace detail {

/// Text reports clip very long words; the JSON keeps full fidelity.
inline std::string clip(const std::string& s, std::size_t limit = 120) {
  if (s.size() <= limit) return s;
  return s.substr(0, limit) + "... [" + std::to_string(s.size()) + " chars]";
}

/// Exact integers are emitted as decimal strings.
inline Json json_matrix(const IntMatrix& m) {
  Json rows = Json::array();
  for (int i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (int j = 0; j < m.cols(); ++j) row.push_back(m.at(i, j).str());
    rows.push_back(std::move(row));
  }
  return rows;
}

inline Json json_report(const HypothesisReport& r) {
  Json j;
  j["theorem"] = r.theorem;
  j["checks"] = Json::array();
  for (const Check& c : r.checks) {
    j["checks"].push_back(
        {{"name", c.name}, {"status", to_string(c.status)}, {"witness", c.witness}});
  }
  j["notes"] = r.notes;
  j["assumed"] = r.assumed();
  if (r.conclusion) {
    j["conclusion"] = *r.conclusion;
  } else {
    j["conclusion"] = nullptr;
  }
  return j;
}

inline Json json_table(const CosetTable& t) {
  Json rows = Json::array();
  for (int c = 0; c < t.size(); ++c) {
    Json row = Json::array();
    for (int col = 0; col < 2 * t.ngens(); ++col) {
      row.push_back(t.act_letter(c, col));
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

inline void render_reports(std::ostringstream& os, const Json& theorems) {
  for (const Json& r : theorems) {
    os << "theorem " << r["theorem"].get<std::string>() << "\n";
    for (const Json& c : r["checks"]) {
      os << "  [" << c["status"].get<std::string>() << "] "
         << c["name"].get<std::string>();
      std::string w = c["witness"].get<std::string>();
      if (!w.empty()) os << " -- " << w;
      os << "\n";
    }
    for (const Json& n : r["notes"]) {
      os << "  note: " << n.get<std::string>() << "\n";
    }
    if (!r["conclusion"].is_null()) {
      os << "  conclusion: " << r["conclusion"].get<std::string>() << "\n";
    } else {
      os << "  no conclusion (hypothesis not established)\n";
    }
  }
}

/// Presentation for subgroups/homology: --group if given, else the
/// unique presented/free declaration, else <X | contents>.
inline PresentationPtr select_presentation(const Document& doc,
                                           const RunFlags& flags,
                                           std::string* described) {
  if (!flags.group.empty()) {
    *described = "group '" + flags.group + "'";
    return doc.presentation_of(flags.group);
  }
  const GroupDecl* unique = nullptr;
  for (const GroupDecl& g : doc.groups) {
    if (g.kind == GroupDecl::Kind::presented ||
        g.kind == GroupDecl::Kind::free_gens) {
      if (unique) {
        unique = nullptr;
        break;
      }
      unique = &g;
    }
  }
  if (unique) {
    *described = "group '" + unique->name + "'";
    return doc.presentation_of(unique->name);
  }
  if (!doc.equations.empty()) {
    std::vector<Word> contents;
    for (const MixedWord& w : doc.equations) contents.push_back(w.content());
    *described = "<X | contents of the equations>";
    return std::make_shared<const Presentation>(doc.spec->variables(),
                                                contents);
  }
  throw Error(
      "no presentation to analyze: declare a presented group or equations, "
      "or pass --group");
}

inline Json conjugacy_json(const MixedWord& w) {
  MixedConjugacy c = w.conjugate_into_factor();
  Json j;
  switch (c.kind) {
    case MixedConjugacy::Kind::none:
      j["kind"] = "none";
      break;
    case MixedConjugacy::Kind::identity:
      j["kind"] = "identity";
      j["conjugator"] = c.conjugator.str();
      break;
    case MixedConjugacy::Kind::factor:
      j["kind"] = "factor";
      j["factor"] = w.spec()->factor(c.factor).name;
      j["conjugator"] = c.conjugator.str();
      break;
  }
  return j;
}

inline std::vector<Embedding> user_embeddings(const Document& doc) {
  std::vector<Embedding> out;
  for (const EmbedDecl& e : doc.embeddings) {
    Embedding emb;
    emb.source = doc.finite_group_of(e.source);
    emb.target = doc.finite_group_of(e.target);
    emb.map = e.map;
    emb.description = e.name + "(" + e.source + "->" + e.target + ")";
    verify_embedding(emb);
    out.push_back(std::move(emb));
  }
  return out;
}

// --- command: analyze ------------------------------------------------

inline Report cmd_analyze(const Document& doc, const RunFlags& flags) {
  Json j;
  j["schema"] = 1;
  j["command"] = "analyze";
  j["factors"] = Json::array();
  for (const FactorSpec& f : doc.spec->factors()) {
    Json fj{{"name", f.name}};
    switch (f.kind) {
      case FactorSpec::Kind::finite:
        fj["kind"] = "finite";
        fj["order"] = f.finite->order();
        break;
      case FactorSpec::Kind::free_group:
        fj["kind"] = "free";
        fj["rank"] = f.free_alphabet->size();
        break;
      case FactorSpec::Kind::presented:
        fj["kind"] = "presented";
        break;
    }
    j["factors"].push_back(std::move(fj));
  }
  j["variables"] = doc.spec->variables()->names();

  EquationSystem sys(doc.spec, doc.equations);
  ExponentMatrix em = exponent_matrix(sys);
  j["equations"] = Json::array();
  for (std::size_t i = 0; i < doc.equations.size(); ++i) {
    const MixedWord& w = doc.equations[i];
    Json ej;
    ej["index"] = i;
    ej["word"] = w.str();
    ej["content"] = w.content().str();
    Json row = Json::array();
    for (int v = 0; v < em.matrix.cols(); ++v) {
      row.push_back(em.matrix.at(static_cast<int>(i), v).str());
    }
    ej["exponent_row"] = std::move(row);
    ej["conjugacy"] = conjugacy_json(w);
    if (doc.spec->num_factors() == 1) {
      // An equation over one group G is exotic when its word is
      // conjugate to an element of G (the identity included).
      ej["exotic"] = ej["conjugacy"]["kind"] != "none";
    }
    j["equations"].push_back(std::move(ej));
  }
  j["exponent_matrix"] = json_matrix(em.matrix);
  j["nonsingular"] = is_nonsingular(sys);

  j["theorems"] = Json::array();
  const int nf = doc.spec->num_factors();
  const int nv = doc.spec->variables()->size();
  LowIndexOptions li_opt{flags.node_budget, flags.seed};
  if (nf == 1 && !doc.equations.empty()) {
    if (doc.spec->factor(0).kind == FactorSpec::Kind::finite) {
      j["theorems"].push_back(json_report(check_gr(sys)));
    }
    j["theorems"].push_back(json_report(
        check_nitsche_thom(sys, doc.assertions, flags.max_index, li_opt)));
  }
  if (nf == 2 && nv == 0 && doc.equations.size() == 1) {
    j["theorems"].push_back(
        json_report(check_bhs(doc.equations[0], doc.assertions)));
  }
  if (nf == 3 && nv == 0 && doc.equations.size() == 1) {
    j["theorems"].push_back(
        json_report(check_freiheitssatz(doc.equations[0], doc.assertions)));
  }
  if (nf == 1 && doc.spec->factor(0).kind == FactorSpec::Kind::finite) {
    const FiniteGroup& g = *doc.spec->factor(0).finite;
    for (const SubsetDecl& s : doc.subsets) {
      if (s.group != doc.spec->factor(0).name) continue;
      std::string why;
      if (!g.is_subgroup(s.elements, &why) || !g.is_normal(s.elements, &why)) {
        j["theorems"].push_back(
            {{"theorem", "main_solvability"},
             {"skipped", "subset '" + s.name + "' is not normal: " + why}});
        continue;
      }
      for (const MixedWord& w : doc.equations) {
        j["theorems"].push_back(
            json_report(check_main(w, s.elements, doc.assertions)));
      }
    }
  }

  std::ostringstream os;
  os << "equations: " << doc.equations.size() << " over "
     << doc.spec->num_factors() << " factor(s), variables:";
  for (const std::string& v : doc.spec->variables()->names()) os << " " << v;
  os << "\n";
  for (const Json& ej : j["equations"]) {
    os << "  eq " << ej["index"] << ": "
       << clip(ej["word"].get<std::string>())
       << "  content = " << clip(ej["content"].get<std::string>());
    if (ej.contains("exotic") && ej["exotic"].get<bool>()) {
      os << "  [exotic]";
    }
    os << "\n";
  }
  os << "exponent matrix = " << em.matrix.str() << "\n";
  os << "nonsingular: " << (j["nonsingular"].get<bool>() ? "yes" : "no")
     << "\n";
  render_reports(os, j["theorems"]);
  return {std::move(j), os.str()};
}

// --- command: subgroups ----------------------------------------------

inline Report cmd_subgroups(const Document& doc, const RunFlags& flags) {
  Json j;
  j["schema"] = 1;
  j["command"] = "subgroups";
  std::string described;
  PresentationPtr pres = select_presentation(doc, flags, &described);
  j["presentation"] = {{"generators", pres->alphabet->names()}};
  j["presentation"]["relators"] = Json::array();
  for (const Word& r : pres->relators) {
    j["presentation"]["relators"].push_back(r.str());
  }
  j["source"] = described;
  j["max_index"] = flags.max_index;

  LowIndexResult li =
      low_index_subgroups(pres, flags.max_index, {flags.node_budget, flags.seed});
  j["complete"] = li.complete;
  j["subgroups"] = Json::array();
  for (std::size_t i = 0; i < li.tables.size(); ++i) {
    const CosetTable& t = li.tables[i];
    SubgroupPresentation sp = subgroup_presentation(t);
    Json sj;
    sj["id"] = i;
    sj["index"] = t.size();
    sj["table"] = json_table(t);
    sj["transversal"] = Json::array();
    for (const Word& rep : sp.transversal.reps) {
      sj["transversal"].push_back(rep.str());
    }
    Json gens = Json::array();
    for (int g = 0; g < sp.gens.alphabet->size(); ++g) {
      gens.push_back(sp.gens.alphabet->name(g));
    }
    IntMatrix m = word_exponent_matrix(sp.relators, sp.gens.alphabet);
    Json rels = Json::array();
    for (const Word& r : sp.relators) rels.push_back(r.str());
    sj["schreier"] = {{"generators", std::move(gens)},
                      {"relators", std::move(rels)},
                      {"nonsingular", rows_independent(m)},
                      {"exponent_matrix", json_matrix(m)}};
    j["subgroups"].push_back(std::move(sj));
  }

  j["enumerated"] = Json::array();
  for (const SubgroupDecl& s : doc.subgroups) {
    PresentationPtr base = doc.presentation_of(s.group);
    Json ej{{"name", s.name}, {"group", s.group}};
    ToddCoxeterResult tc = todd_coxeter(base, s.gens, flags.max_cosets);
    if (tc.complete()) {
      ej["index"] = tc.table->size();
      ej["table"] = json_table(*tc.table);
      SubgroupPresentation sp = subgroup_presentation(*tc.table);
      Json rels = Json::array();
      for (const Word& r : sp.relators) rels.push_back(r.str());
      ej["schreier_relators"] = std::move(rels);
    } else {
      ej["incomplete"] = true;
      ej["max_cosets"] = tc.max_cosets;
    }
    j["enumerated"].push_back(std::move(ej));
  }

  std::ostringstream os;
  os << "presentation: " << described << ", subgroups of index <= "
     << flags.max_index << ": " << li.tables.size()
     << (li.complete ? "" : " (budget exhausted)") << "\n";
  for (const Json& sj : j["subgroups"]) {
    os << "  #" << sj["id"] << " index " << sj["index"] << ": "
       << sj["schreier"]["generators"].size() << " generators, "
       << sj["schreier"]["relators"].size() << " relators, "
       << (sj["schreier"]["nonsingular"].get<bool>() ? "nonsingular"
                                                     : "singular")
       << "\n";
  }
  for (const Json& ej : j["enumerated"]) {
    os << "  subgroup '" << ej["name"].get<std::string>() << "': ";
    if (ej.contains("incomplete")) {
      os << "enumeration incomplete (max cosets " << ej["max_cosets"] << ")\n";
    } else {
      os << "index " << ej["index"] << "\n";
    }
  }
  return {std::move(j), os.str()};
}

// --- command: homology -----------------------------------------------

inline Report cmd_homology(const Document& doc, const RunFlags& flags) {
  Json j;
  j["schema"] = 1;
  j["command"] = "homology";
  std::string described;
  PresentationPtr pres = select_presentation(doc, flags, &described);
  j["source"] = described;

  LowIndexResult li =
      low_index_subgroups(pres, flags.max_index, {flags.node_budget, flags.seed});
  if (flags.index_table < 0 ||
      flags.index_table >= static_cast<int>(li.tables.size())) {
    throw Error("--index-table " + std::to_string(flags.index_table) +
                " out of range (found " + std::to_string(li.tables.size()) +
                " tables)");
  }
  const CosetTable& t = li.tables[flags.index_table];
  j["index_table"] = flags.index_table;
  j["index"] = t.size();

  TwoComplex cover = covering_complex(t);
  j["complex"] = {{"vertices", cover.vertices},
                  {"edges", cover.edges.size()},
                  {"faces", cover.faces.size()},
                  {"euler_characteristic", cover.euler_characteristic()}};
  Homology h = homology(cover);
  Json tor = Json::array();
  for (const BigInt& d : h.h1_torsion) tor.push_back(d.str());
  j["homology"] = {{"b0", h.b0},
                   {"b1", h.b1},
                   {"h1_torsion", std::move(tor)},
                   {"h1", h.h1_str()},
                   {"b2", h.b2}};
  CriterionReport cr = criterion_check(t);
  j["criterion"] = {{"h2_trivial", cr.h2},
                    {"schreier_nonsingular", cr.schreier_nonsingular},
                    {"agree", cr.agree}};

  std::ostringstream os;
  os << "cover #" << flags.index_table << " (index " << t.size() << ") of "
     << described << ": V=" << cover.vertices << " E=" << cover.edges.size()
     << " F=" << cover.faces.size() << " chi=" << cover.euler_characteristic()
     << "\n";
  os << "H0 betti " << h.b0 << ", H1 = " << h.h1_str() << ", H2 betti "
     << h.b2 << "\n";
  os << "criterion: h2_trivial=" << (cr.h2 ? "yes" : "no")
     << " schreier_nonsingular=" << (cr.schreier_nonsingular ? "yes" : "no")
     << " agree=" << (cr.agree ? "yes" : "no") << "\n";
  return {std::move(j), os.str()};
}

// --- command: solve --------------------------------------------------

inline Report cmd_solve(const Document& doc, const RunFlags& flags) {
  Json j;
  j["schema"] = 1;
  j["command"] = "solve";
  EquationSystem sys(doc.spec, doc.equations);
  // The coefficient group is the factor the constants come from; a
  // constant-free system needs a unique declared finite group.
  int cf = coefficient_factor(sys);
  const FactorSpec* f = nullptr;
  if (cf >= 0) {
    f = &doc.spec->factor(cf);
  } else {
    for (const FactorSpec& candidate : doc.spec->factors()) {
      if (candidate.kind != FactorSpec::Kind::finite) continue;
      if (f) {
        throw Error("solve: several finite groups declared and no constants "
                    "to pick the coefficient group");
      }
      f = &candidate;
    }
    if (!f) throw Error("solve: declare a finite coefficient group");
  }
  SolverOptions sopt;
  sopt.max_visits = flags.budget;
  sopt.max_target_order = flags.order_cap;
  CatalogueOptions copt;
  copt.max_order = flags.order_cap;
  std::vector<Embedding> user;
  std::vector<std::string> mismatched;
  for (Embedding& e : user_embeddings(doc)) {
    if (*e.source == *f->finite) {
      user.push_back(std::move(e));
    } else {
      mismatched.push_back(e.description);
    }
  }
  SolveOutcome outcome = solve_over(sys, f->finite, f->name, sopt, copt, user);
  for (const std::string& name : mismatched) {
    outcome.attempts.push_back({name, "skipped: source is not the "
                                      "coefficient group"});
  }

  j["attempts"] = Json::array();
  for (const auto& a : outcome.attempts) {
    j["attempts"].push_back({{"member", a.member}, {"result", a.result}});
  }
  if (outcome.solution) {
    const Solution& sol = *outcome.solution;
    Json aj = Json::array();
    for (int v = 0; v < doc.spec->variables()->size(); ++v) {
      aj.push_back({{"variable", doc.spec->variables()->name(v)},
                    {"element", sol.assignment[v]}});
    }
    j["solution"] = {{"member", sol.where.description},
                     {"target_order", sol.where.target->order()},
                     {"assignment", std::move(aj)},
                     {"verified", true}};
    j["conclusion"] = "solved in " + sol.where.description;
  } else {
    j["solution"] = nullptr;
    j["conclusion"] =
        "inconclusive: no solution in the catalogue (this never certifies "
        "unsolvability)";
  }

  std::ostringstream os;
  for (const auto& a : outcome.attempts) {
    os << "  " << a.member << ": " << a.result << "\n";
  }
  os << j["conclusion"].get<std::string>() << "\n";
  return {std::move(j), os.str()};
}

// --- command: rewrite ------------------------------------------------

inline Report cmd_rewrite(const Document& doc, const RunFlags& flags) {
  Json j;
  j["schema"] = 1;
  j["command"] = "rewrite";
  if (flags.normal.empty()) throw Error("rewrite: pass --normal SUBSET");
  const SubsetDecl* s = doc.subset_decl(flags.normal);
  if (!s) throw Error("subset '" + flags.normal + "' not declared");
  if (doc.equations.size() != 1) {
    throw Error("rewrite: the document must contain exactly one equation");
  }
  j["normal"] = s->name;
  try {
    OrbitSystemResult orb = orbit_system(doc.equations[0], s->elements);
    j["applicable"] = true;
    j["quotient_order"] = orb.quotient_group->order();
    j["changed_variables"] = orb.changed_variables;
    if (orb.changed_variables) {
      Json lifts = Json::array();
      for (int v = 0; v < doc.spec->variables()->size(); ++v) {
        lifts.push_back({{"variable", doc.spec->variables()->name(v)},
                         {"coset", orb.quotient_solution[v]},
                         {"lift", orb.lifts[v]}});
      }
      j["lifts"] = std::move(lifts);
    }
    EquationSystem& out = orb.system;
    Json eqs = Json::array();
    for (const MixedWord& w : out.equations) eqs.push_back(w.str());
    ExponentMatrix em = exponent_matrix(out);
    j["system"] = {{"variables", out.spec->variables()->names()},
                   {"equations", std::move(eqs)},
                   {"exponent_matrix", json_matrix(em.matrix)},
                   {"nonsingular", is_nonsingular(out)}};
    std::ostringstream os;
    os << "orbit system over A (" << out.equations.size() << " equations, "
       << out.spec->variables()->size() << " variables)";
    if (orb.changed_variables) os << ", after change of variables";
    os << ":\n";
    for (const MixedWord& w : out.equations) os << "  " << w.str() << " = 1\n";
    os << "exponent matrix = " << em.matrix.str() << "\n";
    os << "nonsingular: " << (is_nonsingular(out) ? "yes" : "no") << "\n";
    return {std::move(j), os.str()};
  } catch (const Error& e) {
    // A missing quotient solution is a legitimate outcome, not an
    // operational failure.
    std::string msg = e.what();
    if (msg.find("no solution") == std::string::npos) throw;
    j["applicable"] = false;
    j["reason"] = msg;
    return {std::move(j), "rewriting not applicable: " + msg + "\n"};
  }
}

}  // namespace detail

/// Dispatches a CLI command over a parsed document.
inline Report run(const std::string& command, const Document& doc,
                  const RunFlags& flags) {
  if (command == "analyze") return detail::cmd_analyze(doc, flags);
  if (command == "subgroups") return detail::cmd_subgroups(doc, flags);
  if (command == "homology") return detail::cmd_homology(doc, flags);
  if (command == "solve") return detail::cmd_solve(doc, flags);
  if (command == "rewrite") return detail::cmd_rewrite(doc, flags);
  throw Error("unknown command '" + command + "'");
}

}  // namespace groupeq
