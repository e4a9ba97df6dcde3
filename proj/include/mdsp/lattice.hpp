#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "mdsp/errors.hpp"
#include "mdsp/linalg.hpp"
#include "mdsp/rational.hpp"

namespace mdsp {

// Shift coefficients x of a candidate basis B(x) = {b_i + x_i v}.
using ShiftVector = IntVector;

// A family of linearly independent vectors b_1..b_m in Q^dim.
struct LatticeBasis {
  std::vector<QVector> vectors;

  std::size_t size() const { return vectors.size(); }
  std::size_t dim() const { return vectors.empty() ? 0 : vectors.front().size(); }
  bool is_full_rank_square() const { return size() == dim(); }

  // Vectors as matrix columns, the convention used for B' = B U.
  QMatrix as_columns() const { return QMatrix::from_columns(vectors); }

  friend bool operator==(const LatticeBasis&, const LatticeBasis&) = default;
};

inline void require_independent(const std::vector<QVector>& vs) {
  for (std::size_t i = 1; i < vs.size(); ++i) require_same_length(vs[i], vs[0]);
  (void)gram_schmidt(vs);
}

inline LatticeBasis make_basis(std::vector<QVector> vectors) {
  require_independent(vectors);
  return LatticeBasis{std::move(vectors)};
}

// [v | b_1..b_n]: the fixed vector together with the n remaining basis
// vectors. The ambient dimension is at least n+1; Algorithm-3 style
// sub-instances live in a larger ambient space than their rank.
class MDSPInstance {
 public:
  MDSPInstance(QVector fixed, std::vector<QVector> rest)
      : fixed_(std::move(fixed)), rest_(std::move(rest)) {
    if (fixed_.empty()) throw InvalidArgument("empty fixed vector");
    if (is_zero(fixed_)) throw DegenerateFixedVector("fixed vector is zero");
    std::vector<QVector> all{fixed_};
    all.insert(all.end(), rest_.begin(), rest_.end());
    require_independent(all);
  }

  // Rows of m are the lattice vectors; row fixed_index is v.
  static MDSPInstance from_rows(const QMatrix& m, std::size_t fixed_index = 0) {
    if (fixed_index >= m.rows())
      throw IndexOutOfRange("fixed index " + std::to_string(fixed_index) +
                            " out of range for " + std::to_string(m.rows()) + " rows");
    std::vector<QVector> rest;
    for (std::size_t r = 0; r < m.rows(); ++r)
      if (r != fixed_index) rest.push_back(m.row(r));
    return MDSPInstance(m.row(fixed_index), std::move(rest));
  }

  const QVector& fixed() const { return fixed_; }
  const std::vector<QVector>& rest() const { return rest_; }
  std::size_t n() const { return rest_.size(); }
  std::size_t ambient_dim() const { return fixed_.size(); }

  // All vectors, v first.
  std::vector<QVector> all_vectors() const {
    std::vector<QVector> all{fixed_};
    all.insert(all.end(), rest_.begin(), rest_.end());
    return all;
  }

  // [v | B] as a column matrix.
  QMatrix as_columns() const { return QMatrix::from_columns(all_vectors()); }

 private:
  QVector fixed_;
  std::vector<QVector> rest_;
};

// B(x) = {b_i + x_i v}.
inline LatticeBasis apply_shift(const MDSPInstance& inst, const ShiftVector& x) {
  if (x.size() != inst.n())
    throw LengthMismatch("shift has " + std::to_string(x.size()) + " entries, instance has " +
                         std::to_string(inst.n()));
  LatticeBasis out;
  out.vectors.reserve(inst.n());
  for (std::size_t i = 0; i < inst.n(); ++i) {
    QVector b = inst.rest()[i];
    axpy(b, Rational(x[i]), inst.fixed());
    out.vectors.push_back(std::move(b));
  }
  return out;
}

inline MDSPInstance shifted_instance(const MDSPInstance& inst, const ShiftVector& x) {
  return MDSPInstance(inst.fixed(), apply_shift(inst, x).vectors);
}

struct SameLatticeResult {
  bool same = false;
  std::optional<QMatrix> witness;  // U with b = a U, present iff same
};

// Decides whether the columns of a and b generate the same lattice by solving
// b = a U and testing U for unimodularity. Square inputs use a^{-1} b;
// tall full-column-rank inputs use the normal equations and require b to lie
// in the column span of a.
inline SameLatticeResult same_lattice(const QMatrix& a, const QMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw LengthMismatch("same_lattice on matrices of different shape");
  QMatrix u;
  if (a.is_square()) {
    if (determinant(b) == 0) throw SingularMatrix("second basis is singular");
    u = inverse(a) * b;
  } else {
    if (a.cols() > a.rows()) throw NonSquare("more generators than the ambient dimension");
    const QMatrix at = a.transposed();
    u = inverse(at * a) * (at * b);
    if (!(a * u == b)) return {};
    if (determinant(b.transposed() * b) == 0) throw SingularMatrix("second basis is rank deficient");
  }
  if (!is_unimodular(u)) return {};
  return {true, std::move(u)};
}

// ---------------------------------------------------------------------------
// Decision version and its certificate
// ---------------------------------------------------------------------------

// Query "is there a sub-lattice with dist(v, <B'>) >= gamma |v|". The
// threshold is held squared so that irrational gamma with rational gamma^2
// can be posed exactly.
struct DMDSPQuery {
  MDSPInstance instance;
  Rational gamma_sq;

  DMDSPQuery(MDSPInstance inst, Rational g_sq) : instance(std::move(inst)), gamma_sq(std::move(g_sq)) {
    if (gamma_sq <= 0 || gamma_sq > 1) throw InvalidArgument("gamma must lie in (0, 1]");
  }

  static DMDSPQuery from_gamma(MDSPInstance inst, const Rational& gamma) {
    if (gamma <= 0 || gamma > 1) throw InvalidArgument("gamma must lie in (0, 1]");
    return DMDSPQuery(std::move(inst), gamma * gamma);
  }
};

inline bool verify_dmdsp_certificate(const DMDSPQuery& q, const ShiftVector& x) {
  const MDSPInstance& inst = q.instance;
  const LatticeBasis bx = apply_shift(inst, x);
  std::vector<QVector> shifted{inst.fixed()};
  shifted.insert(shifted.end(), bx.vectors.begin(), bx.vectors.end());
  if (!same_lattice(inst.as_columns(), QMatrix::from_columns(shifted)).same) return false;
  return dist_sq_to_span(inst.fixed(), bx.vectors) >= q.gamma_sq * norm_sq(inst.fixed());
}

// Size quantities from the NP-membership argument, all exact.
struct CertificateBounds {
  Integer k0;                  // product of denominators of v's components
  std::vector<Rational> dk;    // vol^2(b_1..b_k)
  Rational big_d;              // prod dk
  Rational big_e;              // D^2 prod |b*_i|^2
  // (E K0^4 |v| |b_i|)^2 = E^2 K0^8 |v|^2 |b_i|^2, upper bounds on beta_i^2
  std::vector<Rational> per_coordinate_bound_sq;
  std::size_t input_bit_size = 0;  // l: numerator+denominator bits over all entries

  // log2 D <= 2 n l
  bool d_within_bound() const {
    return big_d <= Rational(pow2(2 * dk.size() * input_bit_size));
  }
  // log2 E <= 2 (2n+1) l
  bool e_within_bound() const {
    return big_e <= Rational(pow2(2 * (2 * dk.size() + 1) * input_bit_size));
  }
};

inline CertificateBounds certificate_bounds(const MDSPInstance& inst) {
  CertificateBounds cb;
  cb.k0 = 1;
  for (const auto& c : inst.fixed()) cb.k0 *= c.get_den();
  for (const auto& vec : inst.all_vectors())
    for (const auto& c : vec) cb.input_bit_size += bit_size(c);
  cb.big_d = 1;
  cb.big_e = 1;
  if (inst.n() > 0) {
    const auto gs = gram_schmidt(inst.rest());
    cb.dk = gs.dk;
    for (const auto& d : gs.dk) cb.big_d *= d;
    cb.big_e = cb.big_d * cb.big_d * gs.dk.back();
  } else {
    cb.big_e = 1;
  }
  const Rational k0q(cb.k0);
  Rational k0_8 = 1;
  for (int i = 0; i < 8; ++i) k0_8 *= k0q;
  const Rational v_sq = norm_sq(inst.fixed());
  for (const auto& b : inst.rest())
    cb.per_coordinate_bound_sq.push_back(cb.big_e * cb.big_e * k0_8 * v_sq * norm_sq(b));
  return cb;
}

// n * |det B|^{2/n}, exact when the power is rational and otherwise the
// smallest enclosure of the form ceil(root)/den^2 above it.
inline Rational minkowski_bound_sq(const LatticeBasis& basis) {
  if (!basis.is_full_rank_square()) throw NonSquare("Minkowski bound needs a square basis");
  const unsigned long n = basis.size();
  Rational det = abs_of(determinant(basis.as_columns()));
  if (det == 0) throw DependentInput("basis is singular");
  // (a/b)^{2/n} = (a^2 b^{2n-2})^{1/n} / b^2
  const Integer a = det.get_num();
  const Integer b = det.get_den();
  Integer b_pow;
  mpz_pow_ui(b_pow.get_mpz_t(), b.get_mpz_t(), 2 * n - 2);
  const Integer radicand = a * a * b_pow;
  Integer root;
  const bool exact = mpz_root(root.get_mpz_t(), radicand.get_mpz_t(), n) != 0;
  if (!exact) root += 1;
  return Rational(static_cast<long>(n)) * make_rational(root, b * b);
}

}  // namespace mdsp
