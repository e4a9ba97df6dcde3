#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "mdsp/mdsp.hpp"

using json = nlohmann::ordered_json;
using namespace mdsp;

namespace {

struct Common {
  std::string in;
  std::string out;
  std::size_t fixed_index = 0;
  bool json = false;
};

std::string slurp(const std::string& path) {
  if (path.empty() || path == "-") {
    std::ostringstream ss;
    ss << std::cin.rdbuf();
    return ss.str();
  }
  return read_file(path);
}

void emit(const Common& c, const std::string& text) {
  if (c.out.empty() || c.out == "-") {
    std::cout << text;
    return;
  }
  std::ofstream f(c.out, std::ios::binary);
  if (!f) throw InvalidArgument("cannot write '" + c.out + "'");
  f << text;
}

QMatrix load(const Common& c) { return parse_basis_file(slurp(c.in)); }

json rat(const Rational& q) { return to_string(q); }

json ints(const IntVector& xs) {
  json a = json::array();
  for (const auto& x : xs) a.push_back(x.get_str());
  return a;
}

json rats(const QVector& xs) {
  json a = json::array();
  for (const auto& x : xs) a.push_back(to_string(x));
  return a;
}

json rows_json(const std::vector<QVector>& rows) {
  json a = json::array();
  for (const auto& r : rows) a.push_back(rats(r));
  return a;
}

std::string join(const IntVector& xs) {
  std::string s;
  for (std::size_t i = 0; i < xs.size(); ++i) s += (i ? " " : "") + xs[i].get_str();
  return s;
}

IntVector parse_int_list(const std::string& text) {
  IntVector out;
  std::stringstream ss(text);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    auto q = parse_rational(tok);
    if (!q || !is_integral(*q)) throw InvalidArgument("bad integer '" + tok + "' in list");
    out.push_back(q->get_num());
  }
  return out;
}

Rational parse_q(const std::string& text, const char* what) {
  auto q = parse_rational(text);
  if (!q) throw InvalidArgument(std::string("bad ") + what + " '" + text + "'");
  return *q;
}

LLLParams delta_of(const std::string& text) {
  LLLParams p(parse_q(text, "delta"));
  if (p.at_lower_endpoint()) std::cerr << "warning: delta = 1/4 is the boundary of the LLL range\n";
  return p;
}

// v first, then b_1..b_n, one vector per row
QMatrix instance_rows(const MDSPInstance& inst) { return QMatrix::from_rows(inst.all_vectors()); }

std::string basis_text(const std::vector<QVector>& rows) { return serialize_basis(QMatrix::from_rows(rows)); }

CVPGramInstance load_cvp(const std::string& text) {
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && text[first] == '{') {
    const json j = json::parse(text);
    CVPGramInstance c;
    const auto& g = j.at("gram");
    c.gram = QMatrix(g.size(), g.size());
    for (std::size_t r = 0; r < g.size(); ++r) {
      if (g[r].size() != g.size()) throw LengthMismatch("gram must be square");
      for (std::size_t k = 0; k < g.size(); ++k) c.gram(r, k) = rational_or_throw(g[r][k].get<std::string>());
    }
    for (const auto& o : j.at("offset")) c.offset.push_back(rational_or_throw(o.get<std::string>()));
    c.scale_sq = j.contains("scale_sq") ? rational_or_throw(j["scale_sq"].get<std::string>()) : Rational(1);
    return c;
  }
  const QMatrix m = parse_basis_file(text);
  if (m.rows() != m.cols() + 1) throw LengthMismatch("expected n basis rows followed by the target row");
  std::vector<QVector> rows = m.row_vectors();
  QVector t = rows.back();
  rows.pop_back();
  return cvp_gram_form(QMatrix::from_rows(rows), t);
}

json trace_json(const ReductionTrace& t) {
  return {{"swap_count", t.swap_count},
          {"size_reduction_count", t.size_reduction_count},
          {"final_shortest_norm_sq", rat(t.final_shortest_norm_sq)},
          {"wall_time_ms", std::chrono::duration<double, std::milli>(t.wall_time).count()}};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Maximum distance sub-lattice tools"};
  app.require_subcommand(1);

  Common c;
  std::string delta, delta_high = "99/100", gamma, target, shift, dims_text = "20";
  unsigned max_passes = 64, max_rounds = 1000, threads = 1;
  std::uint64_t seed = 1;
  std::size_t count = 1;
  long entry_bound = 1000;
  std::string rule = "exact";
  unsigned long long max_points = 0;

  auto add_io = [&](CLI::App* s, bool needs_in = true) {
    auto* o = s->add_option("--in", c.in, "input file ('-' for stdin)");
    if (needs_in) o->required();
    s->add_option("--out", c.out, "output file (default stdout)");
    s->add_flag("--json", c.json, "machine-readable output");
  };

  auto* exact = app.add_subcommand("mdsp-exact", "solve an MDSP instance exactly");
  add_io(exact);
  exact->add_option("--fixed-index", c.fixed_index, "row holding v");
  exact->add_option("--threads", threads);
  exact->add_option("--rule", rule, "exact | loose")->check(CLI::IsMember({"exact", "loose"}));
  exact->add_option("--max-points", max_points, "refuse larger shift boxes (0 = no limit)");

  auto* heur = app.add_subcommand("mdsp-heur", "greedy coordinate heuristic");
  add_io(heur);
  heur->add_option("--fixed-index", c.fixed_index);
  heur->add_option("--max-passes", max_passes);

  auto* to_cvp = app.add_subcommand("to-cvp", "MDSP instance to Gram-form CVP (JSON)");
  add_io(to_cvp);
  to_cvp->add_option("--fixed-index", c.fixed_index);

  auto* from_cvp = app.add_subcommand("from-cvp", "CVP basis rows plus target row to an MDSP basis file");
  add_io(from_cvp);

  auto* cvp = app.add_subcommand("cvp-brute", "exact CVP by enumeration (JSON Gram form or L/t basis file)");
  add_io(cvp);

  auto* lll = app.add_subcommand("lll", "exact delta-LLL reduction");
  add_io(lll);
  lll->add_option("--delta", delta, "P/Q in [1/4, 1)")->default_str("3/4");

  auto* accel = app.add_subcommand("accel", "LLL interleaved with heuristic sweeps");
  add_io(accel);
  accel->add_option("--delta", delta, "P/Q in [1/4, 1)")->default_str("1/4");
  accel->add_option("--target", target, "stop at this squared norm (default: LLL(--delta-high) shortest)");
  accel->add_option("--delta-high", delta_high);
  accel->add_option("--max-rounds", max_rounds);

  auto* cert = app.add_subcommand("verify-cert", "check a D-MDSP certificate");
  add_io(cert);
  cert->add_option("--fixed-index", c.fixed_index);
  cert->add_option("--gamma", gamma, "P/Q in (0, 1]")->required();
  cert->add_option("--shift", shift, "comma separated shift vector")->required();

  auto* bench = app.add_subcommand("bench", "compare LLL(delta-high) against the accelerated reduction");
  add_io(bench, false);
  bench->add_option("--dims", dims_text, "comma separated dimensions");
  bench->add_option("--count", count, "instances per dimension");
  bench->add_option("--seed", seed);
  bench->add_option("--delta", delta, "low delta")->default_str("1/4");
  bench->add_option("--delta-high", delta_high);
  bench->add_option("--entry-bound", entry_bound);
  bench->add_option("--max-rounds", max_rounds);
  bench->add_option("--threads", threads);

  auto* gen = app.add_subcommand("gen", "random full-rank integer basis");
  add_io(gen, false);
  gen->add_option("--dims", dims_text, "dimension");
  gen->add_option("--seed", seed);
  gen->add_option("--entry-bound", entry_bound);

  CLI11_PARSE(app, argc, argv);

  try {
    if (exact->parsed()) {
      const auto inst = MDSPInstance::from_rows(load(c), c.fixed_index);
      ExactConfig cfg;
      cfg.threads = threads;
      cfg.rule = rule == "loose" ? RangeRule::LooseBound : RangeRule::Exact;
      cfg.max_points = max_points;
      const auto s = solve_exact(inst, cfg);
      if (c.json) {
        emit(c, json{{"x", ints(s.x)}, {"dist_sq", rat(s.dist_sq)}, {"basis", rows_json(s.basis.vectors)}}
                        .dump(2) + "\n");
      } else {
        emit(c, "x: " + join(s.x) + "\ndist_sq: " + to_string(s.dist_sq) + "\n" + basis_text(s.basis.vectors));
      }
    } else if (heur->parsed()) {
      const auto inst = MDSPInstance::from_rows(load(c), c.fixed_index);
      HeuristicConfig cfg;
      cfg.max_passes = max_passes;
      const auto h = run_heuristic(inst, cfg);
      if (c.json) {
        emit(c, json{{"x", ints(h.x_total)},
                     {"dist_sq", rat(h.dist_sq)},
                     {"converged", h.converged},
                     {"passes_used", h.passes_used},
                     {"basis", rows_json(h.basis)}}
                        .dump(2) + "\n");
      } else {
        emit(c, "x: " + join(h.x_total) + "\ndist_sq: " + to_string(h.dist_sq) +
                    "\nconverged: " + (h.converged ? "yes" : "no") +
                    "\npasses: " + std::to_string(h.passes_used) + "\n" + basis_text(h.basis));
      }
    } else if (to_cvp->parsed()) {
      const auto cv = mdsp_to_cvp(MDSPInstance::from_rows(load(c), c.fixed_index));
      emit(c, json{{"gram", rows_json(cv.gram.row_vectors())}, {"offset", rats(cv.offset)},
                   {"scale_sq", rat(cv.scale_sq)}}
                      .dump(2) + "\n");
    } else if (from_cvp->parsed()) {
      const QMatrix m = load(c);
      if (m.rows() != m.cols() + 1) throw LengthMismatch("expected n basis rows followed by the target row");
      std::vector<QVector> rows = m.row_vectors();
      QVector t = rows.back();
      rows.pop_back();
      const auto inst = cvp_to_mdsp(QMatrix::from_rows(rows), t);
      if (c.json)
        emit(c, json{{"fixed", rats(inst.fixed())}, {"rest", rows_json(inst.rest())}}.dump(2) + "\n");
      else
        emit(c, serialize_basis(instance_rows(inst)));
    } else if (cvp->parsed()) {
      const auto cv = load_cvp(slurp(c.in));
      const auto s = solve_cvp_bruteforce(cv);
      if (c.json) {
        json j{{"j", ints(s.j)}, {"objective", rat(s.objective)}};
        if (cv.scale_sq != 1) j["dist_sq"] = rat(recover_mdsp_distance_sq(cv, s.j));
        emit(c, j.dump(2) + "\n");
      } else {
        emit(c, "j: " + join(s.j) + "\nobjective: " + to_string(s.objective) + "\n");
      }
    } else if (lll->parsed()) {
      const LatticeBasis b{load(c).row_vectors()};
      const auto r = lll_reduce(b, delta_of(delta.empty() ? "3/4" : delta));
      if (c.json)
        emit(c, json{{"basis", rows_json(r.basis.vectors)}, {"trace", trace_json(r.trace)}}.dump(2) + "\n");
      else
        emit(c, basis_text(r.basis.vectors));
    } else if (accel->parsed()) {
      const LatticeBasis b{load(c).row_vectors()};
      AccelConfig cfg;
      cfg.delta = delta_of(delta.empty() ? "1/4" : delta);
      cfg.max_rounds = max_rounds;
      if (!target.empty()) {
        cfg.target_norm_sq = parse_q(target, "target");
      } else {
        cfg.target_norm_sq = lll_reduce(b, LLLParams(parse_q(delta_high, "delta-high"))).trace.final_shortest_norm_sq;
      }
      const auto r = accelerated_reduce(b, cfg);
      const bool ok = r.status == AccelStatus::TargetReached;
      if (c.json) {
        json t = trace_json(r.trace);
        t["rounds"] = r.trace.rounds;
        t["heuristic_shifts"] = r.trace.heuristic_shifts;
        t["lll_time_ms"] = std::chrono::duration<double, std::milli>(r.trace.lll_time).count();
        t["heuristic_time_ms"] = std::chrono::duration<double, std::milli>(r.trace.heuristic_time).count();
        t["stalled"] = r.trace.stalled;
        emit(c, json{{"status", ok ? "target_reached" : "rounds_exhausted"},
                     {"target_norm_sq", rat(cfg.target_norm_sq)},
                     {"basis", rows_json(r.basis.vectors)},
                     {"trace", t}}
                        .dump(2) + "\n");
      } else {
        emit(c, basis_text(r.basis.vectors));
        std::cerr << (ok ? "target reached" : "rounds exhausted") << " after " << r.trace.rounds
                  << " rounds, shortest norm^2 " << to_string(r.trace.final_shortest_norm_sq) << "\n";
      }
    } else if (cert->parsed()) {
      const auto inst = MDSPInstance::from_rows(load(c), c.fixed_index);
      const auto q = DMDSPQuery::from_gamma(inst, parse_q(gamma, "gamma"));
      const IntVector x = parse_int_list(shift);
      const bool ok = verify_dmdsp_certificate(q, x);
      const Rational d = dist_sq_to_span(inst.fixed(), apply_shift(inst, x).vectors);
      if (c.json)
        emit(c, json{{"accepted", ok}, {"dist_sq", rat(d)}, {"threshold_sq", rat(q.gamma_sq * norm_sq(inst.fixed()))}}
                        .dump(2) + "\n");
      else
        emit(c, std::string(ok ? "accept" : "reject") + "\ndist_sq: " + to_string(d) + "\n");
    } else if (bench->parsed()) {
      std::vector<std::size_t> dims;
      for (const auto& d : parse_int_list(dims_text)) {
        if (d < 2 || !d.fits_ulong_p()) throw InvalidArgument("dimensions must be at least 2");
        dims.push_back(d.get_ui());
      }
      BenchOptions opt;
      opt.entry_bound = entry_bound;
      opt.max_rounds = max_rounds;
      opt.threads = threads;
      const auto rep = bench_compare(dims, count, delta_of(delta.empty() ? "1/4" : delta),
                                     LLLParams(parse_q(delta_high, "delta-high")), seed, opt);
      if (c.json) {
        json rows = json::array();
        for (const auto& r : rep.rows) {
          json tn = json::array(), an = json::array();
          for (const auto& x : r.target_norm_sq) tn.push_back(rat(x));
          for (const auto& x : r.achieved_norm_sq) an.push_back(rat(x));
          rows.push_back({{"dim", r.dim},
                          {"t_high_ms", r.avg_time_lll_high_delta},
                          {"t_low_ms", r.avg_time_accelerated},
                          {"speedup", r.speedup},
                          {"target_norm_sq", tn},
                          {"achieved_norm_sq", an}});
        }
        json ex = json::array();
        for (const auto* e : rep.exhausted()) ex.push_back({{"dim", e->dim}, {"index", e->index}});
        emit(c, json{{"rows", rows},
                     {"seed", rep.seed},
                     {"count", rep.instance_count},
                     {"median_speedup", rep.median_speedup()},
                     {"exhausted", ex}}
                        .dump(2) + "\n");
      } else {
        std::ostringstream os;
        os << "dim  t_high_ms  t_low_ms  speedup  reached/count\n";
        for (const auto& r : rep.rows) {
          char line[128];
          std::snprintf(line, sizeof line, "%3zu  %9.3f  %8.3f  %7.3f  %zu/%zu\n", r.dim, r.avg_time_lll_high_delta,
                        r.avg_time_accelerated, r.speedup, r.instance_count, rep.instance_count);
          os << line;
        }
        os << "median per-instance speedup: " << rep.median_speedup() << "\n";
        for (const auto* e : rep.exhausted())
          os << "rounds exhausted: dim " << e->dim << " instance " << e->index << "\n";
        emit(c, os.str());
      }
    } else if (gen->parsed()) {
      const IntVector d = parse_int_list(dims_text);
      if (d.size() != 1 || d[0] < 2 || !d[0].fits_ulong_p()) throw InvalidArgument("gen takes a single dimension >= 2");
      emit(c, serialize_basis(generate_random_basis(d[0].get_ui(), entry_bound, seed)));
    }
  } catch (const ParseError& e) {
    std::cerr << (c.in.empty() ? "<stdin>" : c.in) << ":" << e.line() << ":" << e.column() << ": " << e.what()
              << "\n";
    return 2;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const json::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
