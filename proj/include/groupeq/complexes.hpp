#pragma once

#include <cstdlib>
#include <numeric>
#include <string>
#include <vector>

#include "groupeq/cosets.hpp"
#include "groupeq/equations.hpp"
#include "groupeq/zlinalg.hpp"

namespace groupeq {

/// Combinatorial 2-complex. Face boundaries are closed edge paths given
/// as signed edge references: +(e+1) traverses edge e forwards, -(e+1)
/// backwards.
struct TwoComplex {
  struct Edge {
    int src = 0, dst = 0;
    int label = -1;
  };

  int vertices = 0;
  std::vector<Edge> edges;
  std::vector<std::vector<int>> faces;

  int euler_characteristic() const {
    return vertices - static_cast<int>(edges.size()) +
           static_cast<int>(faces.size());
  }

  void validate() const {
    for (const Edge& e : edges) {
      if (e.src < 0 || e.src >= vertices || e.dst < 0 || e.dst >= vertices) {
        throw Error("edge endpoint outside vertex range");
      }
    }
    for (const auto& face : faces) {
      if (face.empty()) continue;
      int start = -1, at = -1;
      for (int ref : face) {
        int e = std::abs(ref) - 1;
        if (e < 0 || e >= static_cast<int>(edges.size())) {
          throw Error("face references a missing edge");
        }
        int from = ref > 0 ? edges[e].src : edges[e].dst;
        int to = ref > 0 ? edges[e].dst : edges[e].src;
        if (at < 0) {
          start = from;
        } else if (at != from) {
          throw Error("face boundary does not chain");
        }
        at = to;
      }
      if (at != start) throw Error("face boundary does not close");
    }
  }
};

/// One vertex, a loop per generator, a face per relator whose boundary
/// spells the relator.
inline TwoComplex standard_complex(const Presentation& pres) {
  TwoComplex k;
  k.vertices = 1;
  const int ngens = pres.alphabet->size();
  for (int g = 0; g < ngens; ++g) k.edges.push_back({0, 0, g});
  for (const Word& r : pres.relators) {
    std::vector<int> boundary;
    for (int letter : r.expand_letters()) {
      int e = letter >> 1;
      boundary.push_back((letter & 1) ? -(e + 1) : (e + 1));
    }
    k.faces.push_back(std::move(boundary));
  }
  k.validate();
  return k;
}

/// The cover determined by a coset table: one vertex per coset, one
/// labeled edge per (coset, generator), one face per (coset, relator)
/// lifting the relator from that coset.
inline TwoComplex covering_complex(const CosetTable& t) {
  const Presentation& pres = *t.base();
  const int ngens = t.ngens();
  TwoComplex k;
  k.vertices = t.size();
  for (int c = 0; c < t.size(); ++c) {
    for (int g = 0; g < ngens; ++g) {
      k.edges.push_back({c, t.act(c, g), g});
    }
  }
  auto edge_id = [&](int c, int g) { return c * ngens + g; };
  for (int c = 0; c < t.size(); ++c) {
    for (const Word& r : pres.relators) {
      std::vector<int> boundary;
      int at = c;
      for (int letter : r.expand_letters()) {
        int g = letter >> 1;
        if ((letter & 1) == 0) {
          boundary.push_back(edge_id(at, g) + 1);
          at = t.act(at, g);
        } else {
          int prev = t.act(at, g, true);
          boundary.push_back(-(edge_id(prev, g) + 1));
          at = prev;
        }
      }
      if (at != c) throw Error("relator lift does not close");
      k.faces.push_back(std::move(boundary));
    }
  }
  k.validate();
  return k;
}

/// Cellular boundary maps: d2 rows are face boundaries in edge
/// coordinates, d1 rows are edge boundaries (target - source).
struct ChainBoundaries {
  IntMatrix d2;  // faces x edges
  IntMatrix d1;  // edges x vertices
};

inline ChainBoundaries boundaries(const TwoComplex& k) {
  ChainBoundaries out;
  const int ne = static_cast<int>(k.edges.size());
  const int nf = static_cast<int>(k.faces.size());
  out.d2 = IntMatrix(nf, ne);
  for (int f = 0; f < nf; ++f) {
    for (int ref : k.faces[f]) {
      int e = std::abs(ref) - 1;
      out.d2.at(f, e) += ref > 0 ? 1 : -1;
    }
  }
  out.d1 = IntMatrix(ne, k.vertices);
  for (int e = 0; e < ne; ++e) {
    out.d1.at(e, k.edges[e].dst) += 1;
    out.d1.at(e, k.edges[e].src) -= 1;
  }
  if (!(out.d2 * out.d1).is_zero()) {
    throw Error("boundary maps do not compose to zero");
  }
  return out;
}

/// Integral homology of a 2-complex (no 3-cells, so H2 is free).
struct Homology {
  int b0 = 0;
  int b1 = 0;
  std::vector<BigInt> h1_torsion;  // invariant factors > 1
  int b2 = 0;

  std::string h1_str() const {
    std::string s;
    if (b1 > 0) s = b1 == 1 ? "Z" : "Z^" + std::to_string(b1);
    for (const BigInt& d : h1_torsion) {
      if (!s.empty()) s += " + ";
      s += "Z/" + d.str();
    }
    return s.empty() ? "0" : s;
  }
};

inline Homology homology(const TwoComplex& k) {
  ChainBoundaries ch = boundaries(k);
  Homology out;
  // Components: union-find over vertices along edges.
  std::vector<int> parent(k.vertices);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (const TwoComplex::Edge& e : k.edges) {
    parent[find(e.src)] = find(e.dst);
  }
  for (int v = 0; v < k.vertices; ++v) {
    if (find(v) == v) ++out.b0;
  }
  SmithNormalForm s2 = snf(ch.d2);
  int rank_d1 = rank(ch.d1);
  int ne = static_cast<int>(k.edges.size());
  int nf = static_cast<int>(k.faces.size());
  out.b2 = nf - s2.rank;
  out.b1 = ne - rank_d1 - s2.rank;
  for (const BigInt& d : s2.diagonal()) {
    if (d > 1) out.h1_torsion.push_back(d);
  }
  return out;
}

/// H2 = ker d2 vanishes iff the face boundaries are independent.
inline bool h2_trivial(const TwoComplex& k) {
  ChainBoundaries ch = boundaries(k);
  return snf(ch.d2).rank == static_cast<int>(k.faces.size());
}

/// The two sides of the covering criterion, computed from scratch by
/// unrelated routes: second homology of the cover versus nonsingularity
/// of the rewritten subgroup relators.
struct CriterionReport {
  bool h2 = false;
  bool schreier_nonsingular = false;
  bool agree = false;
};

inline CriterionReport criterion_check(const CosetTable& t) {
  CriterionReport out;
  out.h2 = h2_trivial(covering_complex(t));
  SubgroupPresentation sp = subgroup_presentation(t);
  out.schreier_nonsingular =
      rows_independent(word_exponent_matrix(sp.relators, sp.gens.alphabet));
  out.agree = out.h2 == out.schreier_nonsingular;
  return out;
}

}  // namespace groupeq
