#pragma once

#include <cstddef>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "mdsp/errors.hpp"
#include "mdsp/lattice.hpp"
#include "mdsp/linalg.hpp"
#include "mdsp/rational.hpp"

namespace mdsp {

enum class HeuristicPath {
  // Keeps the inverse Gram matrix of [b_1..b_n, v] and reads every 2x2 Schur
  // complement off it; each accepted shift is a rank-one congruence update.
  GramInverse,
  // Recomputes v'' and b_i'' by explicit projection for every coordinate.
  Projection,
};

struct HeuristicConfig {
  unsigned max_passes = 64;
  HeuristicPath path = HeuristicPath::GramInverse;
  bool record_trace = false;
};

struct HeuristicOutcome {
  ShiftVector x_total;           // B_final = B(x_total)
  Rational dist_sq;
  bool converged = false;
  unsigned passes_used = 0;
  std::vector<QVector> basis;    // final b_1..b_n
  std::vector<Rational> trace;   // dist^2 before the run, then after each accepted shift
};

// Squared residual projection (v''.(b'' - a v''))^2 / |b'' - a v''|^2 given
// vv = |v''|^2, vb = v''.b'', bb = |b''|^2. Any common positive scaling of
// (vv, vb, bb) scales every residual by the same factor.
inline Rational coordinate_residual_sq(const Rational& vv, const Rational& vb, const Rational& bb,
                                       const Integer& a) {
  const Rational aq(a);
  const Rational num = vb - aq * vv;
  return num * num / (bb - 2 * aq * vb + aq * aq * vv);
}

struct CoordinateStep {
  Integer alpha;      // b_i is replaced by b_i - alpha v
  Rational alpha_real;
  QVector new_b;
};

namespace detail {

// Chooses between floor and ceil of vb/vv; floor wins ties.
inline std::pair<Integer, Rational> choose_alpha(const Rational& vv, const Rational& vb,
                                                 const Rational& bb) {
  const Rational real = vb / vv;
  const Integer a1 = floor_of(real);
  const Integer a2 = ceil_of(real);
  if (a1 == a2) return {a1, real};
  if (coordinate_residual_sq(vv, vb, bb, a1) <= coordinate_residual_sq(vv, vb, bb, a2))
    return {a1, real};
  return {a2, real};
}

}  // namespace detail

// One coordinate step of Algorithm 2 (index is 0-based) by explicit projection
// onto <B^i>.
inline CoordinateStep improve_coordinate(const MDSPInstance& inst, std::size_t i) {
  if (i >= inst.n())
    throw IndexOutOfRange("coordinate " + std::to_string(i) + " out of range for n = " +
                          std::to_string(inst.n()));
  std::vector<QVector> others;
  for (std::size_t k = 0; k < inst.n(); ++k)
    if (k != i) others.push_back(inst.rest()[k]);
  const QVector& b = inst.rest()[i];
  const QVector v2 = inst.fixed() - project_onto_span(inst.fixed(), others);
  const QVector b2 = b - project_onto_span(b, others);
  const Rational vv = norm_sq(v2);
  if (vv == 0) throw DegenerateResidual("fixed vector lies in the span of the other vectors");
  auto [alpha, real] = detail::choose_alpha(vv, dot(v2, b2), norm_sq(b2));
  QVector nb = b;
  axpy(nb, -Rational(alpha), inst.fixed());
  return {std::move(alpha), std::move(real), std::move(nb)};
}

struct PassResult {
  MDSPInstance instance;
  bool any_update = false;
};

// Coordinates 0..n-1 in order, each accepted shift committed before the next.
inline PassResult improve_pass(const MDSPInstance& inst) {
  std::vector<QVector> rest = inst.rest();
  bool any = false;
  for (std::size_t i = 0; i < rest.size(); ++i) {
    auto step = improve_coordinate(MDSPInstance(inst.fixed(), rest), i);
    if (step.alpha != 0) {
      rest[i] = std::move(step.new_b);
      any = true;
    }
  }
  return {MDSPInstance(inst.fixed(), std::move(rest)), any};
}

namespace detail {

// Heuristic state on the order [b_1..b_n, v], after clearing denominators.
// Only the adjugate of the integer Gram matrix M is needed to drive the
// search: the Schur complement of {b_i, v} is the inverse of the 2x2 block of
// M^{-1} = adj(M)/det(M) on those indices, and det(M) is invariant under the
// unimodular shifts. The vectors themselves are kept to report the result.
class GramInverseState {
 public:
  GramInverseState(const QVector& v, std::vector<QVector> rest) : v_(v), rest_(std::move(rest)) {
    scale_ = 1;
    for (const auto& c : v_) mpz_lcm(scale_.get_mpz_t(), scale_.get_mpz_t(), c.get_den_mpz_t());
    for (const auto& b : rest_)
      for (const auto& c : b) mpz_lcm(scale_.get_mpz_t(), scale_.get_mpz_t(), c.get_den_mpz_t());
    std::vector<std::vector<Integer>> iv;
    for (const auto& b : rest_) iv.push_back(scaled(b));
    iv.push_back(scaled(v_));
    dim_ = iv.size();
    std::vector<Integer> gram(dim_ * dim_);
    for (std::size_t r = 0; r < dim_; ++r)
      for (std::size_t c = 0; c <= r; ++c) {
        Integer s = 0;
        for (std::size_t k = 0; k < iv[r].size(); ++k) s += iv[r][k] * iv[c][k];
        gram[r * dim_ + c] = s;
        gram[c * dim_ + r] = s;
      }
    std::tie(adj_, det_) = adjugate_no_pivot(gram, dim_);
  }

  std::size_t n() const { return rest_.size(); }

  // det(M)/adj(M)_vv in scaled units, divided back by scale^2.
  Rational dist_sq() const {
    return make_rational(det_, adj(n(), n()) * scale_ * scale_);
  }

  // Returns the chosen alpha for coordinate i and applies it.
  Integer step(std::size_t i) {
    const std::size_t nv = n();
    // Inverting the 2x2 block [[a_ii, a_iv], [a_vi, a_vv]] of adj(M) gives,
    // up to a common positive factor, bb = a_vv, vb = -a_iv, vv = a_ii.
    const Rational vv(adj(i, i));
    const Rational vb(-adj(i, nv));
    const Rational bb(adj(nv, nv));
    if (vv == 0) throw DegenerateResidual("fixed vector lies in the span of the other vectors");
    Integer alpha = choose_alpha(vv, vb, bb).first;
    if (alpha != 0) apply(i, alpha);
    return alpha;
  }

  std::vector<QVector>& vectors() { return rest_; }

 private:
  std::vector<Integer> scaled(const QVector& q) const {
    std::vector<Integer> out;
    out.reserve(q.size());
    for (const auto& c : q) out.push_back(c.get_num() * (scale_ / c.get_den()));
    return out;
  }

  const Integer& adj(std::size_t r, std::size_t c) const { return adj_[r * dim_ + c]; }
  Integer& adj(std::size_t r, std::size_t c) { return adj_[r * dim_ + c]; }

  // b_i <- b_i - alpha v is X -> X T with T = I - alpha e_v e_i^T, so
  // adj(M) -> T^{-1} adj(M) T^{-T}: row v += alpha row i, then column v += alpha column i.
  void apply(std::size_t i, const Integer& alpha) {
    const std::size_t nv = n();
    axpy(rest_[i], -Rational(alpha), v_);
    for (std::size_t c = 0; c < dim_; ++c) adj(nv, c) += alpha * adj(i, c);
    for (std::size_t r = 0; r < dim_; ++r) adj(r, nv) += alpha * adj(r, i);
  }

  QVector v_;
  std::vector<QVector> rest_;
  Integer scale_;
  std::size_t dim_ = 0;
  std::vector<Integer> adj_;
  Integer det_;
};

}  // namespace detail

// Algorithm 2 wrapped in its while-loop: sweeps until a sweep changes nothing
// or max_passes sweeps have run. Works on any independent [v | b_1..b_n],
// including ones whose ambient dimension exceeds n+1.
inline HeuristicOutcome run_heuristic(const QVector& v, std::vector<QVector> rest,
                                      const HeuristicConfig& cfg = {}) {
  if (cfg.max_passes < 1) throw InvalidArgument("max_passes must be at least 1");
  HeuristicOutcome out;
  out.x_total.assign(rest.size(), Integer(0));

  if (cfg.path == HeuristicPath::GramInverse) {
    detail::GramInverseState st(v, std::move(rest));
    if (cfg.record_trace) out.trace.push_back(st.dist_sq());
    while (out.passes_used < cfg.max_passes) {
      ++out.passes_used;
      bool any = false;
      for (std::size_t i = 0; i < st.n(); ++i) {
        Integer a = st.step(i);
        if (a == 0) continue;
        any = true;
        out.x_total[i] -= a;
        if (cfg.record_trace) out.trace.push_back(st.dist_sq());
      }
      if (!any) {
        out.converged = true;
        break;
      }
    }
    out.dist_sq = st.dist_sq();
    out.basis = std::move(st.vectors());
    return out;
  }

  MDSPInstance inst(v, std::move(rest));
  if (cfg.record_trace) out.trace.push_back(dist_sq_to_span(v, inst.rest()));
  while (out.passes_used < cfg.max_passes) {
    ++out.passes_used;
    std::vector<QVector> cur = inst.rest();
    bool any = false;
    for (std::size_t i = 0; i < cur.size(); ++i) {
      auto step = improve_coordinate(MDSPInstance(v, cur), i);
      if (step.alpha == 0) continue;
      any = true;
      out.x_total[i] -= step.alpha;
      cur[i] = std::move(step.new_b);
      if (cfg.record_trace) out.trace.push_back(dist_sq_to_span(v, cur));
    }
    inst = MDSPInstance(v, std::move(cur));
    if (!any) {
      out.converged = true;
      break;
    }
  }
  out.dist_sq = dist_sq_to_span(v, inst.rest());
  out.basis = inst.rest();
  return out;
}

inline HeuristicOutcome run_heuristic(const MDSPInstance& inst, const HeuristicConfig& cfg = {}) {
  return run_heuristic(inst.fixed(), inst.rest(), cfg);
}

}  // namespace mdsp
