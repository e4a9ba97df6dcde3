#pragma once

#include <algorithm>
#include <cstddef>
#include <functional>
#include <thread>
#include <vector>

#include "mdsp/errors.hpp"
#include "mdsp/lattice.hpp"
#include "mdsp/linalg.hpp"
#include "mdsp/rational.hpp"

namespace mdsp {

// |proj_<B>(v)|^2
inline Rational projection_length_sq(const MDSPInstance& inst) {
  return norm_sq(project_onto_span(inst.fixed(), inst.rest()));
}

// How the per-coordinate half widths beta_i are obtained.
enum class RangeRule {
  // Exact root of the exclusion quadratic |proj_line(b_i + x v)(v)|^2 <= p^2.
  // Rational when squared, so the range ends are computed exactly.
  Exact,
  // beta_i = p(|b_i| - v.b_i/|v|)/(|v|^2 - p|v|), evaluated with certified
  // rational enclosures of the square roots and rounded outward. Never
  // narrower than Exact.
  LooseBound,
};

struct ShiftRanges {
  IntVector s;                         // lower ends
  IntVector t;                         // upper ends
  std::vector<Rational> alpha;         // v.b_i / |v|^2
  std::vector<Rational> beta_sq_bound; // certified upper bounds on beta_i^2

  // Number of integer points in the box, i.e. prod (t_i - s_i + 1).
  Integer box_size() const {
    Integer total = 1;
    for (std::size_t i = 0; i < s.size(); ++i) total *= t[i] - s[i] + 1;
    return total;
  }
};

namespace detail {

// floor(a - sqrt(r)) and ceil(a + sqrt(r)), exact for every rational r >= 0.
inline std::pair<Integer, Integer> outward_ends(const Rational& a, const Rational& r) {
  for (unsigned long bits = 16;; bits *= 2) {
    auto [lo, hi] = sqrt_enclosure(r, bits);
    Integer s_lo = floor_of(a - hi), s_hi = floor_of(a - lo);
    Integer t_lo = ceil_of(a + lo), t_hi = ceil_of(a + hi);
    if (s_lo == s_hi && t_lo == t_hi) return {s_lo, t_lo};
  }
}

inline Rational loose_beta_upper(const Rational& p_sq, const Rational& v_sq, const Rational& b_sq,
                                 const Rational& c) {
  for (unsigned long bits = 32; bits <= (1ul << 16); bits *= 2) {
    auto [pl, ph] = sqrt_enclosure(p_sq, bits);
    auto [vl, vh] = sqrt_enclosure(v_sq, bits);
    auto [bl, bh] = sqrt_enclosure(b_sq, bits);
    (void)pl;
    (void)bl;
    const Rational denom = v_sq - ph * vh;
    if (denom <= 0) continue;
    // |b| - c/|v| bounded above
    Rational term = c >= 0 ? Rational(bh - c / vh) : Rational(bh - c / vl);
    if (term < 0) term = 0;
    return ph * term / denom;
  }
  throw InvariantViolation("could not separate p from |v|");
}

}  // namespace detail

inline ShiftRanges shift_ranges(const MDSPInstance& inst, RangeRule rule = RangeRule::Exact) {
  const QVector& v = inst.fixed();
  const Rational v_sq = norm_sq(v);
  if (v_sq == 0) throw DegenerateFixedVector("fixed vector is zero");
  const Rational p_sq = projection_length_sq(inst);
  ShiftRanges r;
  for (const auto& b : inst.rest()) {
    const Rational c = dot(v, b);
    const Rational b_sq = norm_sq(b);
    const Rational alpha = c / v_sq;
    Rational beta_sq;
    if (rule == RangeRule::Exact) {
      // (x + alpha)^2 <= p^2 (|v|^2 |b|^2 - c^2) / (|v|^4 (|v|^2 - p^2))
      beta_sq = p_sq * (v_sq * b_sq - c * c) / (v_sq * v_sq * (v_sq - p_sq));
      auto [s, t] = detail::outward_ends(-alpha, beta_sq);
      r.s.push_back(s);
      r.t.push_back(t);
    } else {
      const Rational beta = detail::loose_beta_upper(p_sq, v_sq, b_sq, c);
      beta_sq = beta * beta;
      r.s.push_back(floor_of(-alpha - beta));
      r.t.push_back(ceil_of(-alpha + beta));
    }
    r.alpha.push_back(alpha);
    r.beta_sq_bound.push_back(beta_sq);
  }
  return r;
}

// |proj_line(b + x v)(v)|^2, the quantity the ranges exclude against p^2.
inline Rational line_projection_sq(const QVector& v, const QVector& b, const Integer& x) {
  QVector w = b;
  axpy(w, Rational(x), v);
  const Rational vw = dot(v, w);
  return vw * vw / norm_sq(w);
}

struct MDSPSolution {
  ShiftVector x;
  Rational dist_sq;
  LatticeBasis basis;  // B(x)
};

enum class EnumerationPath {
  // dist^2 = det Gram([v|B]) / det Gram(B(x)); Gram(B(x)) is updated from
  // the integer Gram data of the scaled instance and its determinant taken
  // fraction-free. The default.
  GramDeterminant,
  // Full Gram-Schmidt of B(x) at every point. Reference path.
  GramSchmidt,
};

struct ExactConfig {
  RangeRule rule = RangeRule::Exact;
  EnumerationPath path = EnumerationPath::GramDeterminant;
  unsigned threads = 1;
  // Refuse boxes with more points than this; 0 disables the check.
  unsigned long long max_points = 0;
};

namespace detail {

// Candidate score: smaller is better. For GramDeterminant this is the
// integer Gram determinant of the scaled B(x); for GramSchmidt it is the
// negated distance.
struct Candidate {
  bool valid = false;
  Rational score;
  ShiftVector x;
};

inline bool better(const Candidate& a, const Candidate& b) {
  if (!a.valid) return false;
  if (!b.valid) return true;
  if (a.score != b.score) return a.score < b.score;
  return lex_less(a.x, b.x);
}

class ExactScorer {
 public:
  ExactScorer(const MDSPInstance& inst, EnumerationPath path) : inst_(inst), path_(path) {
    if (path_ != EnumerationPath::GramDeterminant) return;
    Integer scale = 1;
    for (const auto& vec : inst.all_vectors())
      for (const auto& c : vec) mpz_lcm(scale.get_mpz_t(), scale.get_mpz_t(), c.get_den_mpz_t());
    auto scaled = [&](const QVector& q) {
      std::vector<Integer> out;
      for (const auto& c : q) out.push_back(c.get_num() * (scale / c.get_den()));
      return out;
    };
    auto idot = [](const std::vector<Integer>& a, const std::vector<Integer>& b) {
      Integer s = 0;
      for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
      return s;
    };
    const auto v = scaled(inst.fixed());
    std::vector<std::vector<Integer>> bs;
    for (const auto& b : inst.rest()) bs.push_back(scaled(b));
    n_ = bs.size();
    v_sq_ = idot(v, v);
    c_.resize(n_);
    g_.resize(n_ * n_);
    for (std::size_t i = 0; i < n_; ++i) {
      c_[i] = idot(v, bs[i]);
      for (std::size_t j = 0; j < n_; ++j) g_[i * n_ + j] = idot(bs[i], bs[j]);
    }
  }

  Rational score(const ShiftVector& x) const {
    if (path_ == EnumerationPath::GramSchmidt)
      return -dist_sq_to_span(inst_.fixed(), apply_shift(inst_, x).vectors);
    std::vector<Integer> m(n_ * n_);
    for (std::size_t i = 0; i < n_; ++i)
      for (std::size_t j = 0; j < n_; ++j)
        m[i * n_ + j] = g_[i * n_ + j] + x[i] * c_[j] + x[j] * c_[i] + x[i] * x[j] * v_sq_;
    return Rational(bareiss_det(std::move(m), n_));
  }

 private:
  const MDSPInstance& inst_;
  EnumerationPath path_;
  std::size_t n_ = 0;
  Integer v_sq_;
  std::vector<Integer> c_;
  std::vector<Integer> g_;
};

// Scans x in lexicographic order over the box, with x_0 restricted to
// [first_lo, first_hi]. Keeps the first strict improvement, so the result
// is the lexicographically smallest best point of the slice.
inline Candidate scan_slice(const ExactScorer& scorer, const ShiftRanges& r,
                            const Integer& first_lo, const Integer& first_hi) {
  Candidate best;
  const std::size_t n = r.s.size();
  ShiftVector x = r.s;
  x[0] = first_lo;
  if (first_lo > first_hi) return best;
  while (true) {
    Rational sc = scorer.score(x);
    if (!best.valid || sc < best.score) best = Candidate{true, std::move(sc), x};
    std::size_t k = n;
    while (k > 0) {
      --k;
      const Integer& hi = k == 0 ? first_hi : r.t[k];
      if (x[k] < hi) {
        ++x[k];
        break;
      }
      x[k] = r.s[k];
      if (k == 0) return best;
    }
  }
}

}  // namespace detail

// Algorithm 1: exhaustive search of the certified shift box. Returns the
// lexicographically smallest maximiser of dist(v, <B(x)>).
inline MDSPSolution solve_exact(const MDSPInstance& inst, const ExactConfig& cfg = {}) {
  const std::size_t n = inst.n();
  auto finish = [&](ShiftVector x) {
    LatticeBasis bx = apply_shift(inst, x);
    Rational d = dist_sq_to_span(inst.fixed(), bx.vectors);
    return MDSPSolution{std::move(x), std::move(d), std::move(bx)};
  };
  if (n == 0) return finish({});
  if (projection_length_sq(inst) == 0) return finish(ShiftVector(n, Integer(0)));

  const ShiftRanges r = shift_ranges(inst, cfg.rule);
  if (cfg.max_points != 0 && r.box_size() > Integer(std::to_string(cfg.max_points)))
    throw SearchSpaceTooLarge("shift box holds " + r.box_size().get_str() + " points");

  const detail::ExactScorer scorer(inst, cfg.path);
  const Integer width = r.t[0] - r.s[0] + 1;
  const unsigned workers =
      static_cast<unsigned>(std::max<long>(1, std::min<long>(cfg.threads, width.fits_slong_p() ? width.get_si() : long(cfg.threads))));

  std::vector<detail::Candidate> local(workers);
  if (workers == 1) {
    local[0] = detail::scan_slice(scorer, r, r.s[0], r.t[0]);
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) {
      const Integer lo = r.s[0] + width * w / workers;
      const Integer hi = r.s[0] + width * (w + 1) / workers - 1;
      pool.emplace_back([&, w, lo, hi] { local[w] = detail::scan_slice(scorer, r, lo, hi); });
    }
    for (auto& t : pool) t.join();
  }
  detail::Candidate best;
  for (const auto& c : local)
    if (detail::better(c, best)) best = c;
  return finish(std::move(best.x));
}

}  // namespace mdsp
