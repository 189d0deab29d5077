#pragma once

#include <algorithm>
#include <cctype>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "groupeq/mixedwords.hpp"
#include "groupeq/theorems.hpp"

namespace groupeq {

/// Syntax or resolution error with source position.
class ParseError : public Error {
 public:
  ParseError(const std::string& msg, int line, int col)
      : Error("parse error at " + std::to_string(line) + ":" +
              std::to_string(col) + ": " + msg),
        line(line),
        col(col) {}
  int line, col;
};

struct GroupDecl {
  enum class Kind { finite, perms, free_gens, presented };
  Kind kind = Kind::finite;
  std::string name;
  std::vector<std::vector<int>> table;       // finite
  std::vector<std::string> labels;           // finite, optional
  std::vector<std::vector<int>> perm_gens;   // perms (0-based images)
  std::vector<std::string> gens;             // free_gens / presented
  std::vector<Word> relators;                // presented

  bool operator==(const GroupDecl& o) const {
    return kind == o.kind && name == o.name && table == o.table &&
           labels == o.labels && perm_gens == o.perm_gens && gens == o.gens &&
           relators == o.relators;
  }
};

struct SubsetDecl {
  std::string name, group;
  std::vector<int> elements;
  bool operator==(const SubsetDecl& o) const {
    return name == o.name && group == o.group && elements == o.elements;
  }
};

struct SubgroupDecl {
  std::string name, group;
  std::vector<Word> gens;
  bool operator==(const SubgroupDecl& o) const {
    return name == o.name && group == o.group && gens == o.gens;
  }
};

struct EmbedDecl {
  std::string name, source, target;
  std::vector<int> map;
  bool operator==(const EmbedDecl& o) const {
    return name == o.name && source == o.source && target == o.target &&
           map == o.map;
  }
};

/// A parsed input document: declarations, the ambient free product,
/// equations, assertion flags, and directives for the subcommands.
struct Document {
  std::vector<GroupDecl> groups;
  std::vector<std::string> vars;
  Assertions assertions;
  SpecPtr spec;
  std::vector<MixedWord> equations;
  std::vector<SubsetDecl> subsets;
  std::vector<SubgroupDecl> subgroups;
  std::vector<EmbedDecl> embeddings;

  const GroupDecl* group_decl(std::string_view name) const {
    for (const GroupDecl& g : groups) {
      if (g.name == name) return &g;
    }
    return nullptr;
  }

  /// Presentation of a declared presented/free group.
  PresentationPtr presentation_of(const std::string& name) const {
    const GroupDecl* d = group_decl(name);
    if (!d) throw Error("group '" + name + "' not declared");
    int idx = spec->factor_index(name);
    const FactorSpec& f = spec->factor(idx);
    if (f.kind == FactorSpec::Kind::presented) return f.presented;
    if (f.kind == FactorSpec::Kind::free_group) {
      return std::make_shared<const Presentation>(f.free_alphabet,
                                                  std::vector<Word>{});
    }
    throw Error("group '" + name + "' is not a presentation");
  }

  FiniteGroupPtr finite_group_of(const std::string& name) const {
    int idx = spec->factor_index(name);
    if (idx < 0) throw Error("group '" + name + "' not declared");
    const FactorSpec& f = spec->factor(idx);
    if (f.kind != FactorSpec::Kind::finite) {
      throw Error("group '" + name + "' is not a finite-table group");
    }
    return f.finite;
  }

  const SubsetDecl* subset_decl(std::string_view name) const {
    for (const SubsetDecl& s : subsets) {
      if (s.name == name) return &s;
    }
    return nullptr;
  }

  bool operator==(const Document& o) const {
    return groups == o.groups && vars == o.vars &&
           equations == o.equations && subsets == o.subsets &&
           subgroups == o.subgroups && embeddings == o.embeddings &&
           assertions.by_factor == o.assertions.by_factor;
  }
};

namespace detail {

struct Token {
  enum class Kind {
    ident,
    integer,
    punct,  // single char in text[0]
    arrow,  // ->
    eof
  };
  Kind kind = Kind::eof;
  std::string text;
  BigInt value;  // integer tokens
  int line = 1, col = 1;
};

class Lexer {
 public:
  explicit Lexer(std::string_view src) : src_(src) { advance(); }

  const Token& peek() const { return tok_; }

  Token next() {
    Token t = tok_;
    advance();
    return t;
  }

 private:
  void advance() {
    while (pos_ < src_.size()) {
      char c = src_[pos_];
      if (c == '#') {
        while (pos_ < src_.size() && src_[pos_] != '\n') bump();
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        bump();
      } else {
        break;
      }
    }
    tok_ = Token{};
    tok_.line = line_;
    tok_.col = col_;
    if (pos_ >= src_.size()) {
      tok_.kind = Token::Kind::eof;
      return;
    }
    char c = src_[pos_];
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::string id;
      while (pos_ < src_.size() &&
             (std::isalnum(static_cast<unsigned char>(src_[pos_])) ||
              src_[pos_] == '_')) {
        id += src_[pos_];
        bump();
      }
      tok_.kind = Token::Kind::ident;
      tok_.text = std::move(id);
      return;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      read_int(false);
      return;
    }
    if (c == '-' || c == '+') {
      if (c == '-' && pos_ + 1 < src_.size() && src_[pos_ + 1] == '>') {
        bump();
        bump();
        tok_.kind = Token::Kind::arrow;
        tok_.text = "->";
        return;
      }
      if (pos_ + 1 < src_.size() &&
          std::isdigit(static_cast<unsigned char>(src_[pos_ + 1]))) {
        bool neg = c == '-';
        bump();
        read_int(neg);
        return;
      }
      throw ParseError(std::string("stray '") + c + "'", line_, col_);
    }
    static const std::string punct = "={}[]()<>|,;^:.*";
    if (punct.find(c) != std::string::npos) {
      tok_.kind = Token::Kind::punct;
      tok_.text = std::string(1, c);
      bump();
      return;
    }
    throw ParseError(std::string("unexpected character '") + c + "'", line_,
                     col_);
  }

  void read_int(bool neg) {
    std::string digits;
    while (pos_ < src_.size() &&
           std::isdigit(static_cast<unsigned char>(src_[pos_]))) {
      digits += src_[pos_];
      bump();
    }
    tok_.kind = Token::Kind::integer;
    tok_.text = (neg ? "-" : "") + digits;
    tok_.value = BigInt(tok_.text);
  }

  void bump() {
    if (src_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }

  std::string_view src_;
  std::size_t pos_ = 0;
  int line_ = 1, col_ = 1;
  Token tok_;
};

class Parser {
 public:
  explicit Parser(std::string_view src) : lex_(src) {}

  Document parse() {
    while (lex_.peek().kind != Token::Kind::eof) {
      statement();
    }
    finalize_spec();
    return std::move(doc_);
  }

 private:
  [[noreturn]] void fail(const std::string& msg) {
    const Token& t = lex_.peek();
    throw ParseError(msg, t.line, t.col);
  }

  Token expect_punct(char c) {
    const Token& t = lex_.peek();
    if (t.kind != Token::Kind::punct || t.text[0] != c) {
      fail(std::string("expected '") + c + "'");
    }
    return lex_.next();
  }

  bool accept_punct(char c) {
    const Token& t = lex_.peek();
    if (t.kind == Token::Kind::punct && t.text[0] == c) {
      lex_.next();
      return true;
    }
    return false;
  }

  std::string expect_ident(const char* what) {
    const Token& t = lex_.peek();
    if (t.kind != Token::Kind::ident) fail(std::string("expected ") + what);
    return lex_.next().text;
  }

  BigInt expect_int() {
    const Token& t = lex_.peek();
    if (t.kind != Token::Kind::integer) fail("expected an integer");
    return lex_.next().value;
  }

  void statement() {
    const Token& t = lex_.peek();
    if (t.kind != Token::Kind::ident) fail("expected a statement");
    if (t.text == "group") {
      group_decl();
    } else if (t.text == "assert") {
      assert_decl();
    } else if (t.text == "vars") {
      vars_decl();
    } else if (t.text == "eq") {
      eq_decl();
    } else if (t.text == "subset") {
      subset_decl();
    } else if (t.text == "subgroup") {
      subgroup_decl();
    } else if (t.text == "embed") {
      embed_decl();
    } else {
      fail("unknown statement '" + t.text + "'");
    }
    accept_punct(';');
  }

  void check_fresh_name(const std::string& name) {
    if (names_.count(name)) {
      fail("duplicate declaration of '" + name + "'");
    }
    names_.insert(name);
  }

  void group_decl() {
    if (doc_.spec) fail("group declarations must precede equations");
    lex_.next();  // group
    GroupDecl d;
    d.name = expect_ident("a group name");
    check_fresh_name(d.name);
    expect_punct('=');
    std::string kind = expect_ident("a group kind");
    if (kind == "finite") {
      d.kind = GroupDecl::Kind::finite;
      expect_punct('{');
      bool have_table = false;
      while (!accept_punct('}')) {
        std::string field = expect_ident("'table' or 'labels'");
        expect_punct('=');
        if (field == "table") {
          d.table = int_matrix_literal();
          have_table = true;
        } else if (field == "labels") {
          expect_punct('[');
          if (!accept_punct(']')) {
            do {
              d.labels.push_back(expect_ident("a label"));
            } while (accept_punct(','));
            expect_punct(']');
          }
        } else {
          fail("unknown field '" + field + "' in finite group");
        }
        accept_punct(',');
      }
      if (!have_table) fail("finite group needs a table");
    } else if (kind == "perms") {
      d.kind = GroupDecl::Kind::perms;
      expect_punct('{');
      if (!accept_punct('}')) {
        do {
          d.perm_gens.push_back(perm_literal());
        } while (accept_punct(','));
        expect_punct('}');
      }
      int points = 1;
      for (const auto& p : d.perm_gens) {
        points = std::max(points, static_cast<int>(p.size()));
      }
      for (auto& p : d.perm_gens) {
        for (int i = static_cast<int>(p.size()); i < points; ++i) {
          p.push_back(i);
        }
      }
    } else if (kind == "free") {
      d.kind = GroupDecl::Kind::free_gens;
      expect_punct('{');
      if (!accept_punct('}')) {
        do {
          std::string g = expect_ident("a generator name");
          check_fresh_name(g);
          d.gens.push_back(g);
        } while (accept_punct(','));
        expect_punct('}');
      }
    } else if (kind == "presented") {
      d.kind = GroupDecl::Kind::presented;
      expect_punct('<');
      if (!(lex_.peek().kind == Token::Kind::punct &&
            (lex_.peek().text[0] == '|' || lex_.peek().text[0] == '>'))) {
        do {
          d.gens.push_back(expect_ident("a generator name"));
        } while (accept_punct(','));
      }
      AlphabetPtr alpha = Alphabet::make(d.gens);
      if (accept_punct('|')) {
        if (!(lex_.peek().kind == Token::Kind::punct &&
              lex_.peek().text[0] == '>')) {
          do {
            d.relators.push_back(free_word(alpha));
          } while (accept_punct(','));
        }
      }
      expect_punct('>');
    } else {
      fail("unknown group kind '" + kind + "'");
    }
    doc_.groups.push_back(std::move(d));
  }

  std::vector<std::vector<int>> int_matrix_literal() {
    std::vector<std::vector<int>> rows;
    expect_punct('[');
    if (!accept_punct(']')) {
      do {
        expect_punct('[');
        std::vector<int> row;
        if (!accept_punct(']')) {
          do {
            row.push_back(
                static_cast<int>(checked_small(expect_int(), "table entry")));
          } while (accept_punct(','));
          expect_punct(']');
        }
        rows.push_back(std::move(row));
      } while (accept_punct(','));
      expect_punct(']');
    }
    return rows;
  }

  /// One permutation as a product of cycles over 1-based points;
  /// cycles in one literal compose left to right.
  std::vector<int> perm_literal() {
    std::vector<int> perm;
    auto ensure = [&](int p) {
      while (static_cast<int>(perm.size()) <= p) {
        perm.push_back(static_cast<int>(perm.size()));
      }
    };
    bool any = false;
    while (lex_.peek().kind == Token::Kind::punct &&
           lex_.peek().text[0] == '(') {
      lex_.next();
      std::vector<int> cycle;
      while (lex_.peek().kind == Token::Kind::integer) {
        long long pt = checked_small(expect_int(), "permutation point");
        if (pt < 1) fail("permutation points are 1-based");
        cycle.push_back(static_cast<int>(pt) - 1);
        accept_punct(',');
      }
      expect_punct(')');
      any = true;
      if (!cycle.empty()) {
        ensure(*std::max_element(cycle.begin(), cycle.end()));
      }
      if (cycle.size() >= 2) {
        std::vector<int> cmap(perm.size());
        for (std::size_t i = 0; i < perm.size(); ++i) {
          cmap[i] = static_cast<int>(i);
        }
        for (std::size_t i = 0; i < cycle.size(); ++i) {
          cmap[cycle[i]] = cycle[(i + 1) % cycle.size()];
        }
        for (std::size_t i = 0; i < perm.size(); ++i) perm[i] = cmap[perm[i]];
      }
    }
    if (!any) fail("expected a permutation");
    if (perm.empty()) perm.push_back(0);
    return perm;
  }

  void assert_decl() {
    lex_.next();  // assert
    std::string name = expect_ident("a group name");
    std::string prop = expect_ident("a property");
    FactorAssertions& a = doc_.assertions.by_factor[name];
    if (prop == "locally_indicable") {
      a.locally_indicable = true;
    } else if (prop == "gr") {
      a.gr = true;
    } else if (prop == "gr_star") {
      a.gr_star = true;
    } else if (prop == "hyperlinear") {
      a.hyperlinear = true;
    } else {
      fail("unknown property '" + prop +
           "' (expected locally_indicable, gr, gr_star or hyperlinear)");
    }
    asserted_names_.push_back(name);
  }

  void vars_decl() {
    if (doc_.spec) fail("variable declarations must precede equations");
    lex_.next();  // vars
    do {
      std::string v = expect_ident("a variable name");
      check_fresh_name(v);
      doc_.vars.push_back(v);
    } while (accept_punct(','));
  }

  void eq_decl() {
    lex_.next();  // eq
    expect_punct(':');
    ensure_spec();
    MixedWord w = mixed_word();
    expect_punct('=');
    BigInt one = expect_int();
    if (one != 1) fail("equations must end with '= 1'");
    pending_equations_.push_back(std::move(w));
  }

  void subset_decl() {
    lex_.next();  // subset
    SubsetDecl s;
    s.name = expect_ident("a subset name");
    check_fresh_name(s.name);
    if (expect_ident("'of'") != "of") fail("expected 'of'");
    s.group = expect_ident("a group name");
    ensure_spec();
    FiniteGroupPtr g = doc_.finite_group_of(s.group);
    expect_punct('=');
    expect_punct('{');
    if (!accept_punct('}')) {
      do {
        const Token& t = lex_.peek();
        if (t.kind == Token::Kind::integer) {
          int idx = static_cast<int>(checked_small(expect_int(), "element"));
          if (idx < 0 || idx >= g->order()) fail("element index out of range");
          s.elements.push_back(idx);
        } else {
          std::string label = expect_ident("an element label or index");
          int idx = g->element_by_label(label);
          if (idx < 0) fail("no element labelled '" + label + "'");
          s.elements.push_back(idx);
        }
      } while (accept_punct(','));
      expect_punct('}');
    }
    doc_.subsets.push_back(std::move(s));
  }

  void subgroup_decl() {
    lex_.next();  // subgroup
    SubgroupDecl s;
    s.name = expect_ident("a subgroup name");
    check_fresh_name(s.name);
    if (expect_ident("'of'") != "of") fail("expected 'of'");
    s.group = expect_ident("a group name");
    ensure_spec();
    PresentationPtr pres = doc_.presentation_of(s.group);
    expect_punct('=');
    expect_punct('{');
    if (!accept_punct('}')) {
      do {
        s.gens.push_back(free_word(pres->alphabet));
      } while (accept_punct(','));
      expect_punct('}');
    }
    doc_.subgroups.push_back(std::move(s));
  }

  void embed_decl() {
    lex_.next();  // embed
    EmbedDecl e;
    e.name = expect_ident("an embedding name");
    check_fresh_name(e.name);
    expect_punct(':');
    e.source = expect_ident("a source group");
    if (lex_.peek().kind != Token::Kind::arrow) fail("expected '->'");
    lex_.next();
    e.target = expect_ident("a target group");
    expect_punct('=');
    expect_punct('[');
    if (!accept_punct(']')) {
      do {
        e.map.push_back(
            static_cast<int>(checked_small(expect_int(), "embedding image")));
      } while (accept_punct(','));
      expect_punct(']');
    }
    doc_.embeddings.push_back(std::move(e));
  }

  // --- word grammar -------------------------------------------------

  bool at_word_atom() {
    const Token& t = lex_.peek();
    if (t.kind == Token::Kind::ident) return true;
    if (t.kind == Token::Kind::integer && t.value == 1) return true;
    if (t.kind == Token::Kind::punct &&
        (t.text[0] == '(' || t.text[0] == '[')) {
      return true;
    }
    return false;
  }

  /// WORD over a plain alphabet (presented-group relators, subgroup
  /// generator words). Atoms are concatenated raw and reduced once.
  Word free_word(const AlphabetPtr& alpha) {
    std::vector<Word::Syllable> raw;
    if (!at_word_atom()) fail("expected a word");
    while (at_word_atom()) {
      Word atom = free_atom(alpha);
      if (accept_punct('^')) {
        atom = atom.pow(expect_int());
      }
      raw.insert(raw.end(), atom.syllables().begin(), atom.syllables().end());
    }
    return Word::reduce(alpha, raw);
  }

  Word free_atom(const AlphabetPtr& alpha) {
    const Token& t = lex_.peek();
    if (t.kind == Token::Kind::integer) {
      lex_.next();
      return Word::identity(alpha);
    }
    if (t.kind == Token::Kind::ident) {
      Token tok = lex_.next();
      int id = alpha->id_of(tok.text);
      if (id < 0) {
        throw ParseError("unresolved generator '" + tok.text + "'", tok.line,
                         tok.col);
      }
      return Word::from_gen(alpha, id);
    }
    if (accept_punct('(')) {
      Word w = free_word(alpha);
      expect_punct(')');
      return w;
    }
    expect_punct('[');
    Word u = free_word(alpha);
    expect_punct(',');
    Word v = free_word(alpha);
    expect_punct(']');
    return u.inverse() * v.inverse() * u * v;
  }

  MixedWord mixed_word() {
    std::vector<MixedWord::Syllable> raw;
    if (!at_word_atom()) fail("expected a word");
    while (at_word_atom()) {
      MixedWord atom = mixed_atom();
      if (accept_punct('^')) {
        atom = atom.pow(expect_int());
      }
      raw.insert(raw.end(), atom.syllables().begin(),
                 atom.syllables().end());
    }
    return MixedWord::normalize(doc_.spec, raw);
  }

  MixedWord mixed_atom() {
    const Token& t = lex_.peek();
    if (t.kind == Token::Kind::integer) {
      lex_.next();
      return MixedWord::identity(doc_.spec);
    }
    if (t.kind == Token::Kind::ident) {
      Token tok = lex_.next();
      // Qualified element reference GROUP.index
      if (accept_punct('.')) {
        int factor = doc_.spec->factor_index(tok.text);
        if (factor < 0) {
          throw ParseError("unresolved group '" + tok.text + "'", tok.line,
                           tok.col);
        }
        const FactorSpec& f = doc_.spec->factor(factor);
        if (f.kind != FactorSpec::Kind::finite) {
          throw ParseError("indexed elements need a finite group", tok.line,
                           tok.col);
        }
        int idx = static_cast<int>(checked_small(expect_int(), "element"));
        if (idx < 0 || idx >= f.finite->order()) {
          throw ParseError("element index out of range", tok.line, tok.col);
        }
        return MixedWord::from_finite_const(doc_.spec, factor, idx);
      }
      return resolve_ident(tok);
    }
    if (accept_punct('(')) {
      MixedWord w = mixed_word();
      expect_punct(')');
      return w;
    }
    expect_punct('[');
    MixedWord u = mixed_word();
    expect_punct(',');
    MixedWord v = mixed_word();
    expect_punct(']');
    return u.inverse() * v.inverse() * u * v;
  }

  MixedWord resolve_ident(const Token& tok) {
    const std::string& name = tok.text;
    int var = doc_.spec->variables()->id_of(name);
    if (var >= 0) return MixedWord::from_var(doc_.spec, var);
    for (int fi = 0; fi < doc_.spec->num_factors(); ++fi) {
      const FactorSpec& f = doc_.spec->factor(fi);
      switch (f.kind) {
        case FactorSpec::Kind::finite: {
          int idx = f.finite->element_by_label(name);
          if (idx >= 0) {
            return MixedWord::from_finite_const(doc_.spec, fi, idx);
          }
          break;
        }
        case FactorSpec::Kind::free_group: {
          int id = f.free_alphabet->id_of(name);
          if (id >= 0) {
            return MixedWord::from_free_const(
                doc_.spec, fi, Word::from_gen(f.free_alphabet, id));
          }
          break;
        }
        case FactorSpec::Kind::presented: {
          if (f.presented->alphabet->id_of(name) >= 0) {
            throw ParseError("'" + name + "' belongs to presented group '" +
                                 f.name +
                                 "', which has no computable word problem",
                             tok.line, tok.col);
          }
          break;
        }
      }
    }
    throw ParseError("unresolved identifier '" + name + "'", tok.line,
                     tok.col);
  }

  // --- spec assembly -------------------------------------------------

  void ensure_spec() {
    if (doc_.spec) return;
    std::vector<FactorSpec> factors;
    for (const GroupDecl& d : doc_.groups) {
      switch (d.kind) {
        case GroupDecl::Kind::finite:
          factors.push_back(FactorSpec::finite_group(
              d.name, std::make_shared<const FiniteGroup>(
                          FiniteGroup::validate_table(d.table, d.labels))));
          break;
        case GroupDecl::Kind::perms:
          factors.push_back(FactorSpec::finite_group(
              d.name, std::make_shared<const FiniteGroup>(
                          FiniteGroup::from_permutations(d.perm_gens))));
          break;
        case GroupDecl::Kind::free_gens:
          factors.push_back(
              FactorSpec::free_group(d.name, Alphabet::make(d.gens)));
          break;
        case GroupDecl::Kind::presented:
          factors.push_back(FactorSpec::presented_group(
              d.name, std::make_shared<const Presentation>(
                          Alphabet::make(d.gens), d.relators)));
          break;
      }
    }
    doc_.spec = FreeProductSpec::make(std::move(factors),
                                      Alphabet::make(doc_.vars));
  }

  void finalize_spec() {
    ensure_spec();
    for (const std::string& name : asserted_names_) {
      if (doc_.spec->factor_index(name) < 0) {
        throw Error("assertion for undeclared group '" + name + "'");
      }
    }
    doc_.equations = std::move(pending_equations_);
  }

  Lexer lex_;
  Document doc_;
  std::set<std::string> names_;
  std::vector<std::string> asserted_names_;
  std::vector<MixedWord> pending_equations_;
};

}  // namespace detail

inline Document parse(std::string_view text) {
  return detail::Parser(text).parse();
}

/// Canonical printer; print(doc) reparses to an equal document.
inline std::string print(const Document& doc) {
  std::ostringstream os;
  auto join = [](const std::vector<std::string>& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + v[i];
    return s;
  };
  for (const GroupDecl& g : doc.groups) {
    os << "group " << g.name << " = ";
    switch (g.kind) {
      case GroupDecl::Kind::finite: {
        os << "finite { table = [";
        for (std::size_t i = 0; i < g.table.size(); ++i) {
          os << (i ? ", [" : "[");
          for (std::size_t j = 0; j < g.table[i].size(); ++j) {
            os << (j ? ", " : "") << g.table[i][j];
          }
          os << "]";
        }
        os << "]";
        if (!g.labels.empty()) os << ", labels = [" << join(g.labels) << "]";
        os << " }\n";
        break;
      }
      case GroupDecl::Kind::perms: {
        os << "perms { ";
        for (std::size_t i = 0; i < g.perm_gens.size(); ++i) {
          os << (i ? ", " : "") << FiniteGroup::cycle_string(g.perm_gens[i]);
        }
        os << " }\n";
        break;
      }
      case GroupDecl::Kind::free_gens:
        os << "free { " << join(g.gens) << " }\n";
        break;
      case GroupDecl::Kind::presented: {
        os << "presented < " << join(g.gens) << " | ";
        for (std::size_t i = 0; i < g.relators.size(); ++i) {
          os << (i ? ", " : "") << g.relators[i].str();
        }
        os << " >\n";
        break;
      }
    }
  }
  for (const auto& [name, a] : doc.assertions.by_factor) {
    if (a.locally_indicable) os << "assert " << name << " locally_indicable\n";
    if (a.gr) os << "assert " << name << " gr\n";
    if (a.gr_star) os << "assert " << name << " gr_star\n";
    if (a.hyperlinear) os << "assert " << name << " hyperlinear\n";
  }
  if (!doc.vars.empty()) os << "vars " << join(doc.vars) << ";\n";
  for (const MixedWord& w : doc.equations) {
    os << "eq: " << w.str() << " = 1;\n";
  }
  for (const SubsetDecl& s : doc.subsets) {
    os << "subset " << s.name << " of " << s.group << " = { ";
    for (std::size_t i = 0; i < s.elements.size(); ++i) {
      os << (i ? ", " : "") << s.elements[i];
    }
    os << " }\n";
  }
  for (const SubgroupDecl& s : doc.subgroups) {
    os << "subgroup " << s.name << " of " << s.group << " = { ";
    for (std::size_t i = 0; i < s.gens.size(); ++i) {
      os << (i ? ", " : "") << s.gens[i].str();
    }
    os << " }\n";
  }
  for (const EmbedDecl& e : doc.embeddings) {
    os << "embed " << e.name << " : " << e.source << " -> " << e.target
       << " = [";
    for (std::size_t i = 0; i < e.map.size(); ++i) {
      os << (i ? ", " : "") << e.map[i];
    }
    os << "]\n";
  }
  return os.str();
}

}  // namespace groupeq
