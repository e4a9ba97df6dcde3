#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "mdsp/errors.hpp"
#include "mdsp/rational.hpp"

namespace mdsp {

using QVector = std::vector<Rational>;

// ---------------------------------------------------------------------------
// Vector arithmetic
// ---------------------------------------------------------------------------

inline void require_same_length(const QVector& a, const QVector& b) {
  if (a.size() != b.size())
    throw LengthMismatch("vector lengths differ: " + std::to_string(a.size()) +
                         " vs " + std::to_string(b.size()));
}

inline Rational dot(const QVector& a, const QVector& b) {
  require_same_length(a, b);
  Rational s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

inline Rational norm_sq(const QVector& a) { return dot(a, a); }

inline QVector operator+(const QVector& a, const QVector& b) {
  require_same_length(a, b);
  QVector r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
  return r;
}

inline QVector operator-(const QVector& a, const QVector& b) {
  require_same_length(a, b);
  QVector r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
  return r;
}

inline QVector operator*(const Rational& s, const QVector& a) {
  QVector r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = s * a[i];
  return r;
}

// a += s * b
inline void axpy(QVector& a, const Rational& s, const QVector& b) {
  require_same_length(a, b);
  if (s == 0) return;
  for (std::size_t i = 0; i < a.size(); ++i) a[i] += s * b[i];
}

inline bool is_zero(const QVector& a) {
  for (const auto& x : a)
    if (x != 0) return false;
  return true;
}

inline QVector zero_vector(std::size_t n) { return QVector(n, Rational(0)); }

inline QVector make_qvector(std::initializer_list<Rational> xs) { return QVector(xs); }

// ---------------------------------------------------------------------------
// Dense row-major rational matrix
// ---------------------------------------------------------------------------

class QMatrix {
 public:
  QMatrix() = default;
  QMatrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), data_(rows * cols, Rational(0)) {}

  static QMatrix identity(std::size_t n) {
    QMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
    return m;
  }

  static QMatrix from_rows(const std::vector<QVector>& rows) {
    if (rows.empty()) return {};
    QMatrix m(rows.size(), rows.front().size());
    for (std::size_t r = 0; r < rows.size(); ++r) {
      if (rows[r].size() != m.cols_) throw LengthMismatch("ragged rows");
      for (std::size_t c = 0; c < m.cols_; ++c) m(r, c) = rows[r][c];
    }
    return m;
  }

  static QMatrix from_columns(const std::vector<QVector>& cols) {
    return from_rows(cols).transposed();
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool is_square() const { return rows_ == cols_; }

  Rational& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const Rational& operator()(std::size_t r, std::size_t c) const {
    return data_[r * cols_ + c];
  }

  QVector row(std::size_t r) const {
    return QVector(data_.begin() + static_cast<std::ptrdiff_t>(r * cols_),
                   data_.begin() + static_cast<std::ptrdiff_t>((r + 1) * cols_));
  }

  QVector col(std::size_t c) const {
    QVector v(rows_);
    for (std::size_t r = 0; r < rows_; ++r) v[r] = (*this)(r, c);
    return v;
  }

  std::vector<QVector> row_vectors() const {
    std::vector<QVector> out;
    out.reserve(rows_);
    for (std::size_t r = 0; r < rows_; ++r) out.push_back(row(r));
    return out;
  }

  std::vector<QVector> column_vectors() const {
    std::vector<QVector> out;
    out.reserve(cols_);
    for (std::size_t c = 0; c < cols_; ++c) out.push_back(col(c));
    return out;
  }

  QMatrix transposed() const {
    QMatrix t(cols_, rows_);
    for (std::size_t r = 0; r < rows_; ++r)
      for (std::size_t c = 0; c < cols_; ++c) t(c, r) = (*this)(r, c);
    return t;
  }

  bool is_integral() const {
    for (const auto& x : data_)
      if (!mdsp::is_integral(x)) return false;
    return true;
  }

  bool is_symmetric() const {
    if (!is_square()) return false;
    for (std::size_t r = 0; r < rows_; ++r)
      for (std::size_t c = 0; c < r; ++c)
        if ((*this)(r, c) != (*this)(c, r)) return false;
    return true;
  }

  friend bool operator==(const QMatrix& a, const QMatrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
  }

  friend QMatrix operator*(const QMatrix& a, const QMatrix& b) {
    if (a.cols_ != b.rows_) throw LengthMismatch("matrix product shape mismatch");
    QMatrix p(a.rows_, b.cols_);
    for (std::size_t i = 0; i < a.rows_; ++i)
      for (std::size_t k = 0; k < a.cols_; ++k) {
        const Rational& aik = a(i, k);
        if (aik == 0) continue;
        for (std::size_t j = 0; j < b.cols_; ++j) p(i, j) += aik * b(k, j);
      }
    return p;
  }

  friend QVector operator*(const QMatrix& a, const QVector& x) {
    if (a.cols_ != x.size()) throw LengthMismatch("matrix-vector shape mismatch");
    QVector y(a.rows_, Rational(0));
    for (std::size_t i = 0; i < a.rows_; ++i)
      for (std::size_t k = 0; k < a.cols_; ++k) y[i] += a(i, k) * x[k];
    return y;
  }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Rational> data_;
};

// Gram matrix G_ij = <a_i, a_j> of a vector family.
inline QMatrix gram_matrix(const std::vector<QVector>& vs) {
  QMatrix g(vs.size(), vs.size());
  for (std::size_t i = 0; i < vs.size(); ++i)
    for (std::size_t j = 0; j <= i; ++j) {
      g(i, j) = dot(vs[i], vs[j]);
      g(j, i) = g(i, j);
    }
  return g;
}

// ---------------------------------------------------------------------------
// Gram-Schmidt, projection, volume
// ---------------------------------------------------------------------------

struct GramSchmidtResult {
  std::vector<QVector> bstar;
  QMatrix mu;                // unit lower-triangular; b_i = sum_j mu(i,j) b*_j
  std::vector<Rational> bstar_sq;  // |b*_i|^2
  std::vector<Rational> dk;        // dk[k] = vol^2(b_1..b_{k+1})
};

inline GramSchmidtResult gram_schmidt(const std::vector<QVector>& basis) {
  const std::size_t k = basis.size();
  GramSchmidtResult gs;
  gs.mu = QMatrix::identity(k);
  gs.bstar.reserve(k);
  Rational vol = 1;
  for (std::size_t i = 0; i < k; ++i) {
    if (i > 0) require_same_length(basis[i], basis[0]);
    QVector bs = basis[i];
    for (std::size_t j = 0; j < i; ++j) {
      Rational m = dot(basis[i], gs.bstar[j]) / gs.bstar_sq[j];
      gs.mu(i, j) = m;
      axpy(bs, -m, gs.bstar[j]);
    }
    Rational sq = norm_sq(bs);
    if (sq == 0)
      throw DependentInput("vector " + std::to_string(i) +
                           " lies in the span of its predecessors");
    vol *= sq;
    gs.bstar.push_back(std::move(bs));
    gs.bstar_sq.push_back(sq);
    gs.dk.push_back(vol);
  }
  return gs;
}

// Orthogonal projection of v onto span(basis); the zero vector for an empty basis.
inline QVector project_onto_span(const QVector& v, const std::vector<QVector>& basis) {
  QVector p = zero_vector(v.size());
  if (basis.empty()) return p;
  const auto gs = gram_schmidt(basis);
  for (std::size_t i = 0; i < gs.bstar.size(); ++i)
    axpy(p, dot(v, gs.bstar[i]) / gs.bstar_sq[i], gs.bstar[i]);
  return p;
}

inline Rational dist_sq_to_span(const QVector& v, const std::vector<QVector>& basis) {
  return norm_sq(v - project_onto_span(v, basis));
}

// det(B^T B) = prod |b*_i|^2. One for the empty family.
inline Rational rel_volume_sq(const std::vector<QVector>& basis) {
  if (basis.empty()) return 1;
  return gram_schmidt(basis).dk.back();
}

// ---------------------------------------------------------------------------
// Determinant, inverse, unimodularity
// ---------------------------------------------------------------------------

namespace detail {

// Bareiss elimination on an integer matrix (row-major, n x n).
inline Integer bareiss_det(std::vector<Integer> a, std::size_t n) {
  auto at = [&](std::size_t r, std::size_t c) -> Integer& { return a[r * n + c]; };
  Integer prev = 1;
  int sign = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (at(k, k) == 0) {
      std::size_t p = k + 1;
      while (p < n && at(p, k) == 0) ++p;
      if (p == n) return 0;
      for (std::size_t c = 0; c < n; ++c) std::swap(at(k, c), at(p, c));
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      for (std::size_t j = k + 1; j < n; ++j) {
        Integer t = at(i, j) * at(k, k) - at(i, k) * at(k, j);
        mpz_divexact(t.get_mpz_t(), t.get_mpz_t(), prev.get_mpz_t());
        at(i, j) = std::move(t);
      }
      at(i, k) = 0;
    }
    prev = at(k, k);
  }
  return n == 0 ? Integer(1) : Integer(sign * at(n - 1, n - 1));
}

// Fraction-free Gauss-Jordan on [A | I] for an integer matrix whose leading
// principal minors are all nonzero (e.g. a Gram matrix of independent
// vectors). Returns adj(A) and det(A); A^{-1} = adj / det.
inline std::pair<std::vector<Integer>, Integer> adjugate_no_pivot(const std::vector<Integer>& a_in,
                                                                  std::size_t n) {
  const std::size_t w = 2 * n;
  std::vector<Integer> a(n * w, Integer(0));
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = 0; c < n; ++c) a[r * w + c] = a_in[r * n + c];
    a[r * w + n + r] = 1;
  }
  Integer prev = 1;
  Integer t;
  for (std::size_t k = 0; k < n; ++k) {
    const Integer piv = a[k * w + k];
    if (piv == 0) throw SingularMatrix("zero leading minor");
    for (std::size_t i = 0; i < n; ++i) {
      if (i == k) continue;
      const Integer aik = a[i * w + k];
      for (std::size_t j = 0; j < w; ++j) {
        if (j == k) continue;
        t = piv * a[i * w + j] - aik * a[k * w + j];
        mpz_divexact(a[i * w + j].get_mpz_t(), t.get_mpz_t(), prev.get_mpz_t());
      }
      a[i * w + k] = 0;
    }
    // Invariant: after step k the rows hold D_k * E_k [A | I], D_k the k-th
    // leading minor; the pivot row itself is already in that form.
    prev = piv;
  }
  std::vector<Integer> adj(n * n);
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = 0; c < n; ++c) adj[r * n + c] = a[r * w + n + c];
  return {std::move(adj), prev};
}

}  // namespace detail

// Exact determinant. Rows are cleared of denominators first so the
// elimination itself runs fraction-free on integers.
inline Rational determinant(const QMatrix& m) {
  if (!m.is_square()) throw NonSquare("determinant of a non-square matrix");
  const std::size_t n = m.rows();
  std::vector<Integer> a(n * n);
  Integer scale = 1;
  for (std::size_t r = 0; r < n; ++r) {
    Integer l = 1;
    for (std::size_t c = 0; c < n; ++c) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), m(r, c).get_den_mpz_t());
    for (std::size_t c = 0; c < n; ++c) a[r * n + c] = m(r, c).get_num() * (l / m(r, c).get_den());
    scale *= l;
  }
  return make_rational(detail::bareiss_det(std::move(a), n), scale);
}

inline QMatrix inverse(const QMatrix& m) {
  if (!m.is_square()) throw NonSquare("inverse of a non-square matrix");
  const std::size_t n = m.rows();
  QMatrix a = m;
  QMatrix inv = QMatrix::identity(n);
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t p = k;
    while (p < n && a(p, k) == 0) ++p;
    if (p == n) throw SingularMatrix("matrix is singular");
    if (p != k)
      for (std::size_t c = 0; c < n; ++c) {
        std::swap(a(k, c), a(p, c));
        std::swap(inv(k, c), inv(p, c));
      }
    const Rational piv_inv = 1 / a(k, k);
    for (std::size_t c = 0; c < n; ++c) {
      a(k, c) *= piv_inv;
      inv(k, c) *= piv_inv;
    }
    for (std::size_t r = 0; r < n; ++r) {
      if (r == k || a(r, k) == 0) continue;
      const Rational f = a(r, k);
      for (std::size_t c = 0; c < n; ++c) {
        a(r, c) -= f * a(k, c);
        inv(r, c) -= f * inv(k, c);
      }
    }
  }
  return inv;
}

inline bool is_unimodular(const QMatrix& m) {
  if (!m.is_square()) throw NonSquare("unimodularity of a non-square matrix");
  if (!m.is_integral()) return false;
  const Rational d = determinant(m);
  return d == 1 || d == -1;
}

// ---------------------------------------------------------------------------
// LDL^T of a symmetric positive definite matrix
// ---------------------------------------------------------------------------

struct LDLDecomposition {
  QMatrix lower;               // unit lower-triangular
  std::vector<Rational> diag;  // strictly positive
};

inline LDLDecomposition ldl_decompose(const QMatrix& g) {
  if (!g.is_square()) throw NonSquare("LDL of a non-square matrix");
  if (!g.is_symmetric()) throw NotSPD("matrix is not symmetric");
  const std::size_t n = g.rows();
  LDLDecomposition out{QMatrix::identity(n), std::vector<Rational>(n)};
  for (std::size_t j = 0; j < n; ++j) {
    Rational d = g(j, j);
    for (std::size_t k = 0; k < j; ++k) d -= out.lower(j, k) * out.lower(j, k) * out.diag[k];
    if (d <= 0) throw NotSPD("non-positive pivot at index " + std::to_string(j));
    out.diag[j] = d;
    for (std::size_t i = j + 1; i < n; ++i) {
      Rational s = g(i, j);
      for (std::size_t k = 0; k < j; ++k) s -= out.lower(i, k) * out.lower(j, k) * out.diag[k];
      out.lower(i, j) = s / d;
    }
  }
  return out;
}

}  // namespace mdsp
