#pragma once

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstddef>
#include <cstdint>
#include <random>
#include <thread>
#include <vector>

#include "mdsp/errors.hpp"
#include "mdsp/io.hpp"
#include "mdsp/lattice.hpp"
#include "mdsp/lll.hpp"
#include "mdsp/rational.hpp"

namespace mdsp {

struct BenchOptions {
  long entry_bound = 1000;
  unsigned max_rounds = 1000;
  unsigned threads = 1;  // instances in flight; each run is single-threaded
};

struct BenchInstance {
  std::size_t dim = 0;
  std::size_t index = 0;
  std::uint64_t seed = 0;
  double t_high_ms = 0;
  double t_low_ms = 0;
  double t_low_lll_ms = 0;
  double t_low_heuristic_ms = 0;
  unsigned rounds = 0;
  Rational target_norm_sq;
  Rational achieved_norm_sq;
  AccelStatus status = AccelStatus::RoundsExhausted;

  double speedup() const { return t_low_ms > 0 ? t_high_ms / t_low_ms : 0.0; }
};

struct BenchRow {
  std::size_t dim = 0;
  double avg_time_lll_high_delta = 0;  // ms
  double avg_time_accelerated = 0;     // ms
  double speedup = 0;                  // avg_high / avg_low
  std::size_t instance_count = 0;      // instances that reached the target
  std::size_t exhausted_count = 0;
  std::vector<Rational> target_norm_sq;
  std::vector<Rational> achieved_norm_sq;
};

struct BenchReport {
  std::vector<BenchRow> rows;
  std::vector<BenchInstance> instances;  // ordered by (dim, index)
  std::size_t instance_count = 0;        // per dimension
  std::uint64_t seed = 0;

  std::vector<const BenchInstance*> exhausted() const {
    std::vector<const BenchInstance*> out;
    for (const auto& r : instances)
      if (r.status == AccelStatus::RoundsExhausted) out.push_back(&r);
    return out;
  }

  // Median of per-instance t_high/t_low over the instances that reached
  // the target. 0 when there are none.
  double median_speedup() const {
    std::vector<double> s;
    for (const auto& r : instances)
      if (r.status == AccelStatus::TargetReached) s.push_back(r.speedup());
    if (s.empty()) return 0;
    std::sort(s.begin(), s.end());
    const std::size_t m = s.size() / 2;
    return s.size() % 2 ? s[m] : (s[m - 1] + s[m]) / 2;
  }
};

inline std::uint64_t bench_instance_seed(std::uint64_t seed, std::size_t dim, std::size_t index) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(dim), static_cast<std::uint32_t>(index)};
  std::uint32_t out[2];
  seq.generate(out, out + 2);
  return (static_cast<std::uint64_t>(out[0]) << 32) | out[1];
}

inline BenchInstance bench_one(std::size_t dim, std::size_t index, const LLLParams& delta_low,
                               const LLLParams& delta_high, std::uint64_t seed, const BenchOptions& opt) {
  BenchInstance r;
  r.dim = dim;
  r.index = index;
  r.seed = bench_instance_seed(seed, dim, index);
  const LatticeBasis basis{generate_random_basis(dim, opt.entry_bound, r.seed).row_vectors()};

  const LLLResult high = lll_reduce(basis, delta_high);
  r.t_high_ms = std::chrono::duration<double, std::milli>(high.trace.wall_time).count();
  r.target_norm_sq = high.trace.final_shortest_norm_sq;

  AccelConfig cfg;
  cfg.delta = delta_low;
  cfg.target_norm_sq = r.target_norm_sq;
  cfg.max_rounds = opt.max_rounds;
  const AccelResult low = accelerated_reduce(basis, cfg);
  r.t_low_ms = std::chrono::duration<double, std::milli>(low.trace.wall_time).count();
  r.t_low_lll_ms = std::chrono::duration<double, std::milli>(low.trace.lll_time).count();
  r.t_low_heuristic_ms = std::chrono::duration<double, std::milli>(low.trace.heuristic_time).count();
  r.rounds = low.trace.rounds;
  r.achieved_norm_sq = low.trace.final_shortest_norm_sq;
  r.status = low.status;
  return r;
}

inline BenchReport bench_compare(const std::vector<std::size_t>& dims, std::size_t instances_per_dim,
                                 const LLLParams& delta_low, const LLLParams& delta_high, std::uint64_t seed,
                                 const BenchOptions& opt = {}) {
  if (instances_per_dim < 1) throw InvalidArgument("instances_per_dim must be at least 1");
  if (dims.empty()) throw InvalidArgument("no dimensions given");
  for (auto d : dims)
    if (d < 2) throw InvalidArgument("dimensions must be at least 2");

  std::vector<std::pair<std::size_t, std::size_t>> jobs;
  std::vector<std::size_t> sorted = dims;
  std::sort(sorted.begin(), sorted.end());
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
  for (auto d : sorted)
    for (std::size_t i = 0; i < instances_per_dim; ++i) jobs.emplace_back(d, i);

  BenchReport rep;
  rep.seed = seed;
  rep.instance_count = instances_per_dim;
  rep.instances.resize(jobs.size());

  const unsigned workers = std::max(1u, std::min<unsigned>(opt.threads, static_cast<unsigned>(jobs.size())));
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t k; (k = next.fetch_add(1)) < jobs.size();)
      rep.instances[k] = bench_one(jobs[k].first, jobs[k].second, delta_low, delta_high, seed, opt);
  };
  if (workers == 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
  }

  // fold in (dim, index) order
  for (auto d : sorted) {
    BenchRow row;
    row.dim = d;
    double sh = 0, sl = 0;
    for (const auto& r : rep.instances) {
      if (r.dim != d) continue;
      if (r.status == AccelStatus::RoundsExhausted) {
        ++row.exhausted_count;
        continue;
      }
      ++row.instance_count;
      sh += r.t_high_ms;
      sl += r.t_low_ms;
      row.target_norm_sq.push_back(r.target_norm_sq);
      row.achieved_norm_sq.push_back(r.achieved_norm_sq);
    }
    if (row.instance_count) {
      row.avg_time_lll_high_delta = sh / row.instance_count;
      row.avg_time_accelerated = sl / row.instance_count;
      row.speedup = row.avg_time_accelerated > 0 ? row.avg_time_lll_high_delta / row.avg_time_accelerated : 0;
    }
    rep.rows.push_back(std::move(row));
  }
  return rep;
}

}  // namespace mdsp
