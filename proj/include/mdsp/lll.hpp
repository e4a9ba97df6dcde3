#pragma once

#include <chrono>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "mdsp/errors.hpp"
#include "mdsp/heuristic.hpp"
#include "mdsp/lattice.hpp"
#include "mdsp/linalg.hpp"
#include "mdsp/rational.hpp"

namespace mdsp {

// LLL quality parameter. Accepted on [1/4, 1); the endpoint 1/4 is allowed
// but flagged since the usual polynomial running-time bound needs delta > 1/4.
struct LLLParams {
  Rational delta{3, 4};

  LLLParams() = default;
  explicit LLLParams(Rational d) : delta(std::move(d)) {
    if (delta < Rational(1, 4) || delta >= 1) throw InvalidArgument("delta must lie in [1/4, 1)");
  }

  bool at_lower_endpoint() const { return delta == Rational(1, 4); }
};

using Duration = std::chrono::nanoseconds;

struct ReductionTrace {
  unsigned long long swap_count = 0;
  unsigned long long size_reduction_count = 0;
  Rational final_shortest_norm_sq;
  Duration wall_time{0};
};

struct LLLResult {
  LatticeBasis basis;
  ReductionTrace trace;
};

inline std::pair<QVector, Rational> shortest_basis_vector(const LatticeBasis& basis) {
  if (basis.size() == 0) throw InvalidArgument("empty basis");
  std::size_t best = 0;
  Rational best_sq = norm_sq(basis.vectors[0]);
  for (std::size_t i = 1; i < basis.size(); ++i) {
    Rational sq = norm_sq(basis.vectors[i]);
    if (sq < best_sq) {
      best = i;
      best_sq = std::move(sq);
    }
  }
  return {basis.vectors[best], best_sq};
}

namespace detail {

// Integral LLL (de Weger's formulation): all Gram-Schmidt data is kept as the
// integers d_i = vol^2(b_1..b_i) and lambda_ij = d_j mu_ij, so every update is
// an exact integer division. Indices are 1-based to match the textbook
// recurrences; slot 0 of d holds d_0 = 1.
class IntegralLLL {
 public:
  IntegralLLL(std::vector<std::vector<Integer>> b, const Rational& delta)
      : b_(std::move(b)), n_(b_.size()), p_(delta.get_num()), q_(delta.get_den()) {
    d_.assign(n_ + 1, Integer(0));
    lambda_.assign(n_ + 1, std::vector<Integer>(n_ + 1, Integer(0)));
  }

  void run(ReductionTrace& trace) {
    if (n_ == 0) return;
    d_[0] = 1;
    d_[1] = dot(1, 1);
    if (d_[1] == 0) throw DependentInput("zero basis vector");
    std::size_t k = 2, kmax = 1;
    while (k <= n_) {
      if (k > kmax) {
        kmax = k;
        incremental_gs(k);
      }
      reduce(k, k - 1, trace);
      const Integer& lam = lambda_[k][k - 1];
      if (q_ * (d_[k] * d_[k - 2] + lam * lam) < p_ * d_[k - 1] * d_[k - 1]) {
        swap(k, kmax);
        ++trace.swap_count;
        k = std::max<std::size_t>(2, k - 1);
        continue;
      }
      for (std::size_t l = k - 1; l-- > 1;) reduce(k, l, trace);
      ++k;
    }
  }

  const std::vector<std::vector<Integer>>& basis() const { return b_; }

 private:
  Integer dot(std::size_t i, std::size_t j) const {
    Integer s = 0;
    const auto& x = b_[i - 1];
    const auto& y = b_[j - 1];
    for (std::size_t c = 0; c < x.size(); ++c) s += x[c] * y[c];
    return s;
  }

  void incremental_gs(std::size_t k) {
    for (std::size_t j = 1; j <= k; ++j) {
      Integer u = dot(k, j);
      for (std::size_t i = 1; i < j; ++i) {
        u = d_[i] * u - lambda_[k][i] * lambda_[j][i];
        mpz_divexact(u.get_mpz_t(), u.get_mpz_t(), d_[i - 1].get_mpz_t());
      }
      if (j < k) {
        lambda_[k][j] = std::move(u);
      } else {
        if (u == 0) throw DependentInput("basis vectors are linearly dependent");
        d_[k] = std::move(u);
      }
    }
  }

  void reduce(std::size_t k, std::size_t l, ReductionTrace& trace) {
    Integer twice = 2 * abs(lambda_[k][l]);
    if (twice <= d_[l]) return;
    // q = nearest integer to lambda/d
    Integer q;
    Integer num = 2 * lambda_[k][l] + d_[l];
    Integer den = 2 * d_[l];
    mpz_fdiv_q(q.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
    if (q == 0) return;
    ++trace.size_reduction_count;
    auto& bk = b_[k - 1];
    const auto& bl = b_[l - 1];
    for (std::size_t c = 0; c < bk.size(); ++c) bk[c] -= q * bl[c];
    lambda_[k][l] -= q * d_[l];
    for (std::size_t i = 1; i < l; ++i) lambda_[k][i] -= q * lambda_[l][i];
  }

  void swap(std::size_t k, std::size_t kmax) {
    std::swap(b_[k - 1], b_[k - 2]);
    for (std::size_t j = 1; j + 2 <= k; ++j) std::swap(lambda_[k][j], lambda_[k - 1][j]);
    const Integer lam = lambda_[k][k - 1];
    Integer bnew = d_[k - 2] * d_[k] + lam * lam;
    mpz_divexact(bnew.get_mpz_t(), bnew.get_mpz_t(), d_[k - 1].get_mpz_t());
    for (std::size_t i = k + 1; i <= kmax; ++i) {
      const Integer t = lambda_[i][k];
      Integer a = d_[k] * lambda_[i][k - 1] - lam * t;
      mpz_divexact(a.get_mpz_t(), a.get_mpz_t(), d_[k - 1].get_mpz_t());
      lambda_[i][k] = std::move(a);
      Integer c = bnew * t + lam * lambda_[i][k];
      mpz_divexact(c.get_mpz_t(), c.get_mpz_t(), d_[k].get_mpz_t());
      lambda_[i][k - 1] = std::move(c);
    }
    d_[k - 1] = std::move(bnew);
  }

  std::vector<std::vector<Integer>> b_;
  std::size_t n_;
  Integer p_, q_;
  std::vector<Integer> d_;
  std::vector<std::vector<Integer>> lambda_;
};

}  // namespace detail

// Exact delta-LLL. Rational input is scaled by the common denominator,
// reduced as an integer lattice and scaled back; the unimodular transform is
// the same either way.
inline LLLResult lll_reduce(const LatticeBasis& basis, const LLLParams& params = {}) {
  const auto start = std::chrono::steady_clock::now();
  LLLResult out;
  if (basis.size() == 0) return out;
  for (const auto& v : basis.vectors) require_same_length(v, basis.vectors[0]);

  Integer scale = 1;
  for (const auto& v : basis.vectors)
    for (const auto& c : v) mpz_lcm(scale.get_mpz_t(), scale.get_mpz_t(), c.get_den_mpz_t());
  std::vector<std::vector<Integer>> ib;
  for (const auto& v : basis.vectors) {
    std::vector<Integer> row;
    for (const auto& c : v) row.push_back(c.get_num() * (scale / c.get_den()));
    ib.push_back(std::move(row));
  }
  detail::IntegralLLL lll(std::move(ib), params.delta);
  lll.run(out.trace);
  for (const auto& row : lll.basis()) {
    QVector v;
    for (const auto& c : row) v.push_back(make_rational(c, scale));
    out.basis.vectors.push_back(std::move(v));
  }
  out.trace.final_shortest_norm_sq = shortest_basis_vector(out.basis).second;
  out.trace.wall_time = std::chrono::duration_cast<Duration>(std::chrono::steady_clock::now() - start);
  return out;
}

// det([v|B])^2 == vol^2(B) * dist^2(v, <B>). For instances whose ambient
// dimension exceeds n+1 the left side is the Gram determinant of [v|B].
inline bool det_identity_check(const MDSPInstance& inst) {
  const QMatrix m = inst.as_columns();
  Rational lhs;
  if (m.is_square()) {
    const Rational d = determinant(m);
    lhs = d * d;
  } else {
    lhs = determinant(gram_matrix(inst.all_vectors()));
  }
  return lhs == rel_volume_sq(inst.rest()) * dist_sq_to_span(inst.fixed(), inst.rest());
}

// ---------------------------------------------------------------------------
// Algorithm 3: LLL interleaved with MDSP heuristic sweeps
// ---------------------------------------------------------------------------

struct AccelConfig {
  LLLParams delta{Rational(1, 4)};
  Rational target_norm_sq;
  unsigned max_rounds = 1000;
  unsigned heuristic_passes = 1;  // passes of Algorithm 2 per fixed vector
  // Re-check volume monotonicity and determinant invariance after every
  // heuristic call (exact, slow).
  bool verify_invariants = false;
};

enum class AccelStatus { TargetReached, RoundsExhausted };

struct AccelTrace : ReductionTrace {
  unsigned rounds = 0;
  unsigned long long heuristic_shifts = 0;
  Duration lll_time{0};
  Duration heuristic_time{0};
  bool stalled = false;  // a whole round left the basis unchanged
};

struct AccelResult {
  LatticeBasis basis;
  AccelTrace trace;
  AccelStatus status = AccelStatus::RoundsExhausted;
};

inline AccelResult accelerated_reduce(const LatticeBasis& input, const AccelConfig& cfg) {
  if (cfg.target_norm_sq <= 0) throw InvalidArgument("target_norm_sq must be positive");
  if (cfg.max_rounds < 1) throw InvalidArgument("max_rounds must be at least 1");
  using clock = std::chrono::steady_clock;
  const auto start = clock::now();

  AccelResult out;
  out.basis = input;
  const std::size_t n = input.size();
  Rational full_volume;
  if (cfg.verify_invariants) full_volume = rel_volume_sq(input.vectors);

  auto reached = [&] { return shortest_basis_vector(out.basis).second <= cfg.target_norm_sq; };

  HeuristicConfig hcfg;
  hcfg.max_passes = cfg.heuristic_passes;
  hcfg.record_trace = cfg.verify_invariants;

  while (out.trace.rounds < cfg.max_rounds) {
    ++out.trace.rounds;
    const LatticeBasis round_start = out.basis;

    const auto t0 = clock::now();
    LLLResult red = lll_reduce(out.basis, cfg.delta);
    out.trace.lll_time += clock::now() - t0;
    out.trace.swap_count += red.trace.swap_count;
    out.trace.size_reduction_count += red.trace.size_reduction_count;
    out.basis = std::move(red.basis);
    if (reached()) {
      out.status = AccelStatus::TargetReached;
      break;
    }

    const auto t1 = clock::now();
    for (std::size_t i = n; i-- > 1;) {
      auto& vs = out.basis.vectors;
      std::vector<QVector> rest(vs.begin(), vs.begin() + static_cast<std::ptrdiff_t>(i));
      Rational vol_before;
      if (cfg.verify_invariants) vol_before = rel_volume_sq(rest);
      HeuristicOutcome h = run_heuristic(vs[i], std::move(rest), hcfg);
      for (const auto& x : h.x_total)
        if (x != 0) ++out.trace.heuristic_shifts;
      if (cfg.verify_invariants) {
        for (std::size_t s = 1; s < h.trace.size(); ++s)
          if (h.trace[s] < h.trace[s - 1]) throw InvariantViolation("heuristic step lowered the distance");
        if (rel_volume_sq(h.basis) > vol_before)
          throw InvariantViolation("heuristic step increased the sub-lattice volume");
      }
      for (std::size_t j = 0; j < i; ++j) vs[j] = std::move(h.basis[j]);
      if (cfg.verify_invariants && rel_volume_sq(vs) != full_volume)
        throw InvariantViolation("lattice volume changed");
    }
    out.trace.heuristic_time += clock::now() - t1;
    if (reached()) {
      out.status = AccelStatus::TargetReached;
      break;
    }
    if (out.basis == round_start) {
      out.trace.stalled = true;
      break;
    }
  }
  out.trace.final_shortest_norm_sq = shortest_basis_vector(out.basis).second;
  out.trace.wall_time = std::chrono::duration_cast<Duration>(clock::now() - start);
  return out;
}

}  // namespace mdsp
