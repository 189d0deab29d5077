#pragma once

#include <cstddef>
#include <initializer_list>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "groupeq/common.hpp"

namespace groupeq {

/// Dense exact integer matrix, row-major.
class IntMatrix {
 public:
  IntMatrix() : rows_(0), cols_(0) {}
  IntMatrix(int rows, int cols)
      : rows_(rows), cols_(cols), a_(static_cast<std::size_t>(rows) * cols) {
    if (rows < 0 || cols < 0) throw Error("matrix dimensions must be >= 0");
  }

  static IntMatrix identity(int n) {
    IntMatrix m(n, n);
    for (int i = 0; i < n; ++i) m.at(i, i) = 1;
    return m;
  }

  static IntMatrix from_rows(
      std::initializer_list<std::initializer_list<long long>> rows) {
    int r = static_cast<int>(rows.size());
    int c = r == 0 ? 0 : static_cast<int>(rows.begin()->size());
    IntMatrix m(r, c);
    int i = 0;
    for (const auto& row : rows) {
      if (static_cast<int>(row.size()) != c) {
        throw Error("ragged rows in matrix literal");
      }
      int j = 0;
      for (long long v : row) m.at(i, j++) = v;
      ++i;
    }
    return m;
  }

  int rows() const { return rows_; }
  int cols() const { return cols_; }

  BigInt& at(int i, int j) { return a_[index(i, j)]; }
  const BigInt& at(int i, int j) const { return a_[index(i, j)]; }

  IntMatrix operator*(const IntMatrix& rhs) const {
    if (cols_ != rhs.rows_) throw Error("matrix product shape mismatch");
    IntMatrix out(rows_, rhs.cols_);
    for (int i = 0; i < rows_; ++i) {
      for (int k = 0; k < cols_; ++k) {
        const BigInt& v = at(i, k);
        if (v == 0) continue;
        for (int j = 0; j < rhs.cols_; ++j) {
          out.at(i, j) += v * rhs.at(k, j);
        }
      }
    }
    return out;
  }

  IntMatrix transpose() const {
    IntMatrix out(cols_, rows_);
    for (int i = 0; i < rows_; ++i) {
      for (int j = 0; j < cols_; ++j) out.at(j, i) = at(i, j);
    }
    return out;
  }

  bool is_zero() const {
    for (const BigInt& v : a_) {
      if (v != 0) return false;
    }
    return true;
  }

  bool operator==(const IntMatrix& o) const {
    return rows_ == o.rows_ && cols_ == o.cols_ && a_ == o.a_;
  }
  bool operator!=(const IntMatrix& o) const { return !(*this == o); }

  void swap_rows(int i, int j) {
    if (i == j) return;
    for (int k = 0; k < cols_; ++k) std::swap(at(i, k), at(j, k));
  }
  void swap_cols(int i, int j) {
    if (i == j) return;
    for (int k = 0; k < rows_; ++k) std::swap(at(k, i), at(k, j));
  }
  void negate_row(int i) {
    for (int k = 0; k < cols_; ++k) at(i, k) = -at(i, k);
  }
  /// row[dst] += f * row[src]
  void add_row(int dst, int src, const BigInt& f) {
    for (int k = 0; k < cols_; ++k) at(dst, k) += f * at(src, k);
  }
  /// col[dst] += f * col[src]
  void add_col(int dst, int src, const BigInt& f) {
    for (int k = 0; k < rows_; ++k) at(k, dst) += f * at(k, src);
  }

  std::string str() const {
    std::ostringstream os;
    os << '[';
    for (int i = 0; i < rows_; ++i) {
      os << (i ? ", [" : "[");
      for (int j = 0; j < cols_; ++j) {
        os << (j ? ", " : "") << at(i, j).str();
      }
      os << ']';
    }
    os << ']';
    return os.str();
  }

 private:
  std::size_t index(int i, int j) const {
    if (i < 0 || i >= rows_ || j < 0 || j >= cols_) {
      throw Error("matrix index out of range");
    }
    return static_cast<std::size_t>(i) * cols_ + j;
  }

  int rows_, cols_;
  std::vector<BigInt> a_;
};

/// Exact rank over Q via fraction-free (Bareiss) elimination.
inline int rank(const IntMatrix& a) {
  IntMatrix m = a;
  int rows = m.rows(), cols = m.cols();
  int r = 0;
  BigInt prev = 1;
  for (int col = 0; col < cols && r < rows; ++col) {
    int pivot = -1;
    for (int i = r; i < rows; ++i) {
      if (m.at(i, col) != 0) {
        pivot = i;
        break;
      }
    }
    if (pivot < 0) continue;
    m.swap_rows(r, pivot);
    for (int i = r + 1; i < rows; ++i) {
      for (int j = col + 1; j < cols; ++j) {
        BigInt num = m.at(i, j) * m.at(r, col) - m.at(i, col) * m.at(r, j);
        BigInt q, rem;
        boost::multiprecision::divide_qr(num, prev, q, rem);
        if (rem != 0) throw Error("fraction-free elimination: inexact step");
        m.at(i, j) = q;
      }
      m.at(i, col) = 0;
    }
    prev = m.at(r, col);
    ++r;
  }
  return r;
}

inline bool rows_independent(const IntMatrix& a) {
  return rank(a) == a.rows();
}

/// Exact determinant (Bareiss); square matrices only.
inline BigInt determinant(const IntMatrix& a) {
  if (a.rows() != a.cols()) throw Error("determinant of non-square matrix");
  int n = a.rows();
  if (n == 0) return 1;
  IntMatrix m = a;
  BigInt prev = 1;
  int sign = 1;
  for (int k = 0; k < n - 1; ++k) {
    if (m.at(k, k) == 0) {
      int pivot = -1;
      for (int i = k + 1; i < n; ++i) {
        if (m.at(i, k) != 0) {
          pivot = i;
          break;
        }
      }
      if (pivot < 0) return 0;
      m.swap_rows(k, pivot);
      sign = -sign;
    }
    for (int i = k + 1; i < n; ++i) {
      for (int j = k + 1; j < n; ++j) {
        BigInt num = m.at(i, j) * m.at(k, k) - m.at(i, k) * m.at(k, j);
        BigInt q, rem;
        boost::multiprecision::divide_qr(num, prev, q, rem);
        if (rem != 0) throw Error("determinant: inexact Bareiss step");
        m.at(i, j) = q;
      }
      m.at(i, k) = 0;
    }
    prev = m.at(k, k);
  }
  return sign > 0 ? m.at(n - 1, n - 1) : -m.at(n - 1, n - 1);
}

/// U * A * V = D with U, V unimodular and D diagonal, d1 | d2 | ... >= 0.
struct SmithNormalForm {
  IntMatrix D, U, V;
  int rank = 0;

  std::vector<BigInt> diagonal() const {
    std::vector<BigInt> d;
    int n = std::min(D.rows(), D.cols());
    for (int i = 0; i < n; ++i) d.push_back(D.at(i, i));
    return d;
  }
};

inline SmithNormalForm snf(const IntMatrix& a) {
  const int m = a.rows(), n = a.cols();
  SmithNormalForm out;
  out.D = a;
  out.U = IntMatrix::identity(m);
  out.V = IntMatrix::identity(n);
  IntMatrix& D = out.D;
  IntMatrix& U = out.U;
  IntMatrix& V = out.V;

  int limit = std::min(m, n);
  for (int t = 0; t < limit; ++t) {
    // Pivot: smallest nonzero |entry| in the working submatrix, ties by
    // lowest (row, col).
    auto find_pivot = [&]() -> std::pair<int, int> {
      int pi = -1, pj = -1;
      BigInt best;
      for (int i = t; i < m; ++i) {
        for (int j = t; j < n; ++j) {
          const BigInt& v = D.at(i, j);
          if (v == 0) continue;
          BigInt av = abs_of(v);
          if (pi < 0 || av < best) {
            best = av;
            pi = i;
            pj = j;
          }
        }
      }
      return {pi, pj};
    };

    auto [pi, pj] = find_pivot();
    if (pi < 0) break;  // submatrix is zero

    while (true) {
      D.swap_rows(t, pi);
      U.swap_rows(t, pi);
      D.swap_cols(t, pj);
      V.swap_cols(t, pj);

      const BigInt p = D.at(t, t);
      bool clean = true;
      for (int i = t + 1; i < m; ++i) {
        if (D.at(i, t) == 0) continue;
        BigInt q, rem;
        boost::multiprecision::divide_qr(D.at(i, t), p, q, rem);
        if (q != 0) {
          D.add_row(i, t, -q);
          U.add_row(i, t, -q);
        }
        if (rem != 0) clean = false;
      }
      for (int j = t + 1; j < n; ++j) {
        if (D.at(t, j) == 0) continue;
        BigInt q, rem;
        boost::multiprecision::divide_qr(D.at(t, j), p, q, rem);
        if (q != 0) {
          D.add_col(j, t, -q);
          V.add_col(j, t, -q);
        }
        if (rem != 0) clean = false;
      }
      if (!clean) {
        std::tie(pi, pj) = find_pivot();
        continue;  // a strictly smaller remainder became the new pivot
      }
      // Pivot is the sole nonzero in its row and column; enforce the
      // divisibility chain on the rest of the submatrix.
      bool divisible = true;
      for (int i = t + 1; i < m && divisible; ++i) {
        for (int j = t + 1; j < n && divisible; ++j) {
          if (D.at(i, j) % p != 0) {
            D.add_row(t, i, 1);
            U.add_row(t, i, 1);
            divisible = false;
          }
        }
      }
      if (divisible) break;
      std::tie(pi, pj) = find_pivot();
    }

    if (D.at(t, t) < 0) {
      D.negate_row(t);
      U.negate_row(t);
    }
    out.rank = t + 1;
  }

  if (U * a * V != D) throw Error("smith normal form: U*A*V != D");
  return out;
}

}  // namespace groupeq
