#pragma once

#include <vector>

#include "groupeq/mixedwords.hpp"
#include "groupeq/zlinalg.hpp"

namespace groupeq {

/// Exponent-sum matrix: entry (i, j) is the exponent sum of variable j
/// in the content of equation i. Zero columns are kept.
struct ExponentMatrix {
  IntMatrix matrix;
  std::vector<int> row_labels;  // equation indices
  AlphabetPtr col_labels;       // variable alphabet
};

inline IntMatrix word_exponent_matrix(const std::vector<Word>& words,
                                      const AlphabetPtr& alphabet) {
  IntMatrix m(static_cast<int>(words.size()), alphabet->size());
  for (int i = 0; i < m.rows(); ++i) {
    for (int j = 0; j < m.cols(); ++j) {
      m.at(i, j) = words[i].exponent_sum(j);
    }
  }
  return m;
}

inline ExponentMatrix exponent_matrix(const EquationSystem& sys) {
  std::vector<Word> contents;
  contents.reserve(sys.equations.size());
  for (const MixedWord& w : sys.equations) contents.push_back(w.content());
  ExponentMatrix out{word_exponent_matrix(contents, sys.spec->variables()),
                     {},
                     sys.spec->variables()};
  for (int i = 0; i < out.matrix.rows(); ++i) out.row_labels.push_back(i);
  return out;
}

/// A system is nonsingular when its exponent-sum rows are independent
/// over the integers. The empty system is vacuously nonsingular.
inline bool is_nonsingular(const EquationSystem& sys) {
  return rows_independent(exponent_matrix(sys).matrix);
}

}  // namespace groupeq
