#pragma once

#include <gmpxx.h>

#include <cstddef>
#include <functional>
#include <string>
#include <vector>

#include "mdsp/errors.hpp"
#include "mdsp/lattice.hpp"
#include "mdsp/linalg.hpp"
#include "mdsp/rational.hpp"

namespace mdsp {

// CVP in Gram form: minimise (j + offset)^T gram (j + offset) over integer j.
// gram = L L^T for the (generally irrational) row basis L of the CVP lattice;
// scale_sq = |v|^2 of the originating MDSP instance.
struct CVPGramInstance {
  QMatrix gram;
  QVector offset;
  Rational scale_sq = 1;

  std::size_t n() const { return offset.size(); }

  Rational objective(const IntVector& j) const {
    if (j.size() != n()) throw LengthMismatch("point has wrong length");
    QVector y(n());
    for (std::size_t i = 0; i < n(); ++i) y[i] = Rational(j[i]) + offset[i];
    return dot(y, gram * y);
  }
};

struct CVPSolution {
  IntVector j;
  Rational objective;
};

// Forward reduction. With gamma_i = b_i.v/|v|^2 and b'_i = b_i - gamma_i v,
// the plane P_x is at squared distance |v|^2 / (1 + |v|^2 (x+gamma)^T G^{-1} (x+gamma))
// from v, G the Gram matrix of the b'_i.
inline CVPGramInstance mdsp_to_cvp(const MDSPInstance& inst) {
  const QVector& v = inst.fixed();
  const Rational v_sq = norm_sq(v);
  std::vector<QVector> bp;
  QVector gamma;
  for (const auto& b : inst.rest()) {
    const Rational g = dot(b, v) / v_sq;
    gamma.push_back(g);
    QVector w = b;
    axpy(w, -g, v);
    bp.push_back(std::move(w));
  }
  const QMatrix g = gram_matrix(bp);
  if (determinant(g) == 0) throw DependentInput("orthogonalised vectors are dependent");
  return CVPGramInstance{inverse(g), std::move(gamma), v_sq};
}

// Reverse reduction for the CVP instance with row basis L (rows s_i) and
// target t. Uses e_0 and e''_i = standard basis of Q^{n+1}; the result is
// [e_0 | e_1..e_n] with e_i = e'_i + gamma_i e_0, e'_i the i-th column of
// B'' L^{-1} and gamma = -(L^T)^{-1} t.
inline MDSPInstance cvp_to_mdsp(const QMatrix& basis_rows, const QVector& target) {
  if (!basis_rows.is_square()) throw NonSquare("CVP basis must be square");
  const std::size_t n = basis_rows.rows();
  if (target.size() != n) throw LengthMismatch("target length differs from basis size");
  if (determinant(basis_rows) == 0) throw SingularMatrix("CVP basis is singular");
  const QMatrix linv = inverse(basis_rows);
  const QVector gamma = -1 * (linv.transposed() * target);
  QVector e0 = zero_vector(n + 1);
  e0[0] = 1;
  std::vector<QVector> es;
  for (std::size_t i = 0; i < n; ++i) {
    QVector e = zero_vector(n + 1);
    e[0] = gamma[i];
    for (std::size_t k = 0; k < n; ++k) e[k + 1] = linv(k, i);
    es.push_back(std::move(e));
  }
  return MDSPInstance(std::move(e0), std::move(es));
}

// Gram-form CVP instance of (L, t): gram = L L^T, offset = -(L^T)^{-1} t.
inline CVPGramInstance cvp_gram_form(const QMatrix& basis_rows, const QVector& target) {
  if (!basis_rows.is_square()) throw NonSquare("CVP basis must be square");
  if (target.size() != basis_rows.rows()) throw LengthMismatch("target length differs from basis size");
  if (determinant(basis_rows) == 0) throw SingularMatrix("CVP basis is singular");
  QVector gamma = -1 * (inverse(basis_rows.transposed()) * target);
  return CVPGramInstance{basis_rows * basis_rows.transposed(), std::move(gamma), 1};
}

// |L^T j - t|^2, the CVP objective in coordinates.
inline Rational cvp_distance_sq(const QMatrix& basis_rows, const QVector& target, const IntVector& j) {
  QVector p = zero_vector(target.size());
  for (std::size_t i = 0; i < j.size(); ++i) axpy(p, Rational(j[i]), basis_rows.row(i));
  return norm_sq(p - target);
}

// scale_sq / (1 + scale_sq (j+c)^T gram (j+c)) = dist^2(v, <B(j)>).
inline Rational recover_mdsp_distance_sq(const CVPGramInstance& c, const IntVector& j) {
  return c.scale_sq / (1 + c.scale_sq * c.objective(j));
}

struct CVPBruteConfig {
  std::size_t dimension_cap = 6;
};

// Exact minimiser of the Gram-form objective by depth-first enumeration on
// the LDL^T factors. The search radius starts at the rounded point
// round(-offset) and shrinks to the best value seen; points on the boundary
// are still visited so that ties resolve to the lexicographically smallest j.
inline CVPSolution solve_cvp_bruteforce(const CVPGramInstance& c, const CVPBruteConfig& cfg = {}) {
  const std::size_t n = c.n();
  if (n > cfg.dimension_cap)
    throw DimensionCapExceeded("dimension " + std::to_string(n) + " exceeds cap " +
                               std::to_string(cfg.dimension_cap));
  if (c.gram.rows() != n || c.gram.cols() != n) throw LengthMismatch("gram/offset size mismatch");
  if (n == 0) return {{}, 0};
  const LDLDecomposition ldl = ldl_decompose(c.gram);

  IntVector j0(n);
  for (std::size_t i = 0; i < n; ++i) j0[i] = round_of(-c.offset[i]);
  CVPSolution best{j0, c.objective(j0)};

  // y_i = j_i + offset_i; u_k = y_k + sum_{i>k} L(i,k) y_i;
  // objective = sum_k D_k u_k^2. Coordinates are fixed from n-1 down to 0.
  IntVector j(n);
  QVector y(n);
  std::function<void(std::size_t, const Rational&)> descend = [&](std::size_t k, const Rational& partial) {
    Rational shift = 0;
    for (std::size_t i = k + 1; i < n; ++i) shift += ldl.lower(i, k) * y[i];
    // u_k = j_k + offset_k + shift; need D_k u_k^2 <= best - partial
    const Rational center = -c.offset[k] - shift;
    const Rational room = (best.objective - partial) / ldl.diag[k];
    auto [lo, hi] = integers_within(center, room);
    for (Integer jk = lo; jk <= hi; ++jk) {
      const Rational u = Rational(jk) - center;
      const Rational next = partial + ldl.diag[k] * u * u;
      if (next > best.objective) continue;
      j[k] = jk;
      y[k] = Rational(jk) + c.offset[k];
      if (k == 0) {
        if (next < best.objective || lex_less(j, best.j)) best = {j, next};
      } else {
        descend(k - 1, next);
      }
    }
  };
  descend(n - 1, Rational(0));
  return best;
}

// Fixed-precision real embedding for external CVP tools.
struct EmbeddedCVPInstance {
  std::vector<std::vector<mpf_class>> basis_rows;  // rows r_i, gram ~ R R^T
  std::vector<mpf_class> target;                   // z = -sum gamma_i r_i
  unsigned long precision_bits = 0;
};

// Rows of the lower-triangular square root L sqrt(D) of gram.
inline EmbeddedCVPInstance embed_cvp(const CVPGramInstance& c, unsigned long precision_bits) {
  if (precision_bits < 32) throw InvalidArgument("precision_bits must be at least 32");
  const std::size_t n = c.n();
  const LDLDecomposition ldl = ldl_decompose(c.gram);
  EmbeddedCVPInstance e;
  e.precision_bits = precision_bits;
  // Working precision leaves headroom for the accumulated rounding.
  const unsigned long work = precision_bits + 16;
  std::vector<mpf_class> root_d;
  for (std::size_t k = 0; k < n; ++k) {
    mpf_class d(ldl.diag[k], work);
    root_d.push_back(sqrt(d));
  }
  e.basis_rows.assign(n, std::vector<mpf_class>(n, mpf_class(0, work)));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k <= i; ++k)
      e.basis_rows[i][k] = mpf_class(ldl.lower(i, k), work) * root_d[k];
  e.target.assign(n, mpf_class(0, work));
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i)
      e.target[k] -= mpf_class(c.offset[i], work) * e.basis_rows[i][k];
  return e;
}

}  // namespace mdsp
