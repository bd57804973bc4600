// qacoder: constructs optimal prefix codes for convex additive penalties and
// reports entropy bounds, penalty properties, and solver counters.
//
// Exit codes: 0 success, 1 infeasible problem (including penalties a chosen
// engine cannot handle), 2 malformed input or parameters, 3 internal
// invariant breach.

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "qac/qac.hpp"

namespace {

std::string fmt(double v, const char* spec = "%.12g") {
  char buf[64];
  std::snprintf(buf, sizeof buf, spec, v);
  return buf;
}

std::string fmt_full(double v) { return fmt(v, "%.17g"); }

struct CommonOpts {
  std::string input;
  std::string penalty = "linear";
  std::optional<int> lmax;
  std::string engine = "general";
  std::string format = "tsv";
  std::uint64_t seed = 20260819;
  bool normalize = false;
};

std::uint64_t default_seed() {
  if (const char* env = std::getenv("QA_CODER_SEED")) {
    char* end = nullptr;
    unsigned long long v = std::strtoull(env, &end, 10);
    if (end != env && *end == '\0') return v;
    std::cerr << "warning: ignoring non-numeric QA_CODER_SEED\n";
  }
  return 20260819;
}

// Loads, optionally normalizes, and sorts the weights. Returns the sorted
// distribution plus perm, where perm[k] is the original index of sorted
// position k.
struct LoadedSource {
  qac::SourceDistribution<double> dist;
  std::vector<int> perm;
  std::vector<double> original;
};

LoadedSource load_source(const CommonOpts& opt) {
  std::vector<double> w = qac::load_weights_file<double>(opt.input);
  if (opt.normalize) qac::normalize_weights(w);
  double sum = 0.0;
  for (double x : w) sum += x;
  // Diagnose the sum before the range checks so raw counts get the hint.
  if (std::fabs(sum - 1.0) > qac::kNormalizationTolerance)
    throw qac::InvalidParameterError(
        "weights do not sum to 1 (pass --normalize to scale them)");
  auto [sorted, perm] = qac::sort_weights(w);
  return LoadedSource{qac::SourceDistribution<double>(sorted), std::move(perm),
                      std::move(w)};
}

using Row = std::vector<std::string>;

// TSV is the stable machine format; the table rendering is advisory.
void emit(const std::string& format, const Row& header, const std::vector<Row>& rows,
          const std::vector<std::pair<std::string, std::string>>& summary) {
  if (format == "table") {
    std::vector<std::size_t> width(header.size());
    for (std::size_t c = 0; c < header.size(); ++c) width[c] = header[c].size();
    for (const auto& r : rows)
      for (std::size_t c = 0; c < r.size(); ++c)
        if (r[c].size() > width[c]) width[c] = r[c].size();
    auto line = [&](const Row& r) {
      std::string out;
      for (std::size_t c = 0; c < r.size(); ++c) {
        if (c) out += "  ";
        out += r[c];
        if (c + 1 < r.size()) out.append(width[c] - r[c].size(), ' ');
      }
      std::cout << out << '\n';
    };
    line(header);
    for (const auto& r : rows) line(r);
    for (const auto& [k, v] : summary) std::cout << k << ": " << v << '\n';
    return;
  }
  auto tsv = [](const Row& r) {
    std::string out;
    for (std::size_t c = 0; c < r.size(); ++c) {
      if (c) out += '\t';
      out += r[c];
    }
    std::cout << out << '\n';
  };
  tsv(header);
  for (const auto& r : rows) tsv(r);
  for (const auto& [k, v] : summary) std::cout << "# " << k << '\t' << v << '\n';
}

qac::LengthDistribution solve(const CommonOpts& opt, const qac::SourceDistribution<double>& p,
                              const qac::CostFunction<double>& f, qac::SolveStats* stats) {
  if (opt.engine == "linear-space") return qac::optimal_lengths_linear_space(p, f, opt.lmax, stats);
  return qac::optimal_lengths(p, f, opt.lmax, stats);
}

// Rows in original input order plus the penalty summary, shared by the code
// and oracle commands.
void emit_code_report(const CommonOpts& opt, const LoadedSource& src,
                      const qac::CostFunction<double>& f, const std::vector<int>& sorted_lengths,
                      std::vector<std::pair<std::string, std::string>> summary) {
  int n = src.dist.size();
  auto words = qac::canonical_codebook(sorted_lengths);
  std::vector<int> length_by_input(static_cast<std::size_t>(n));
  std::vector<std::string> word_by_input(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) {
    int orig = src.perm[static_cast<std::size_t>(k)];
    length_by_input[static_cast<std::size_t>(orig)] = sorted_lengths[static_cast<std::size_t>(k)];
    word_by_input[static_cast<std::size_t>(orig)] = words[static_cast<std::size_t>(k)];
  }
  std::vector<Row> rows;
  for (int i = 0; i < n; ++i) {
    rows.push_back({std::to_string(i), fmt(src.original[static_cast<std::size_t>(i)]),
                    std::to_string(length_by_input[static_cast<std::size_t>(i)]),
                    word_by_input[static_cast<std::size_t>(i)]});
  }

  auto pv = qac::penalty_of(f, src.dist.weights(), sorted_lengths);
  std::vector<std::pair<std::string, std::string>> tail;
  tail.emplace_back("raw_sum", pv.raw_sum.is_finite() ? fmt(pv.raw_sum.as_double()) : "inf");
  if (pv.campbell) tail.emplace_back("campbell", fmt(*pv.campbell));
  tail.emplace_back("kraft", qac::kraft_sum(sorted_lengths).to_string());
  if (f.subtranslatory_builtin() && f.quasiarithmetic()) {
    auto ent = qac::generalized_entropy(src.dist, f);
    tail.emplace_back("entropy", fmt(ent.value));
    if (pv.campbell) tail.emplace_back("redundancy", fmt(*pv.campbell - ent.value));
  }
  summary.insert(summary.end(), tail.begin(), tail.end());
  emit(opt.format, {"index", "weight", "length", "codeword"}, rows, summary);
}

int run_code(const CommonOpts& opt) {
  auto src = load_source(opt);
  auto f = qac::parse_penalty<double>(opt.penalty);
  auto r = solve(opt, src.dist, f, nullptr);
  emit_code_report(opt, src, f, r.lengths,
                   {{"penalty", opt.penalty}, {"engine", opt.engine}});
  return 0;
}

int run_entropy(const CommonOpts& opt) {
  auto src = load_source(opt);
  auto f = qac::parse_penalty<double>(opt.penalty);
  auto ent = qac::generalized_entropy(src.dist, f);
  int n = src.dist.size();
  std::vector<Row> rows;
  std::vector<double> by_input(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k)
    by_input[static_cast<std::size_t>(src.perm[static_cast<std::size_t>(k)])] =
        ent.relaxed_lengths[static_cast<std::size_t>(k)];
  for (int i = 0; i < n; ++i)
    rows.push_back({std::to_string(i), fmt(src.original[static_cast<std::size_t>(i)]),
                    fmt(by_input[static_cast<std::size_t>(i)])});
  emit(opt.format, {"index", "weight", "relaxed_length"}, rows,
       {{"penalty", opt.penalty},
        {"entropy", fmt(ent.value)},
        {"lagrange", fmt(ent.lagrange_multiplier)},
        {"residual", fmt(ent.residual)},
        {"converged", ent.converged ? "1" : "0"}});
  return 0;
}

int run_check(const CommonOpts& opt, const std::string& property, const std::string& penalty2,
              std::size_t samples) {
  qac::SamplerConfig cfg;
  cfg.samples = samples;
  cfg.seed = opt.seed;
  std::vector<std::pair<std::string, std::string>> out;
  out.emplace_back("property", property);
  out.emplace_back("penalty", opt.penalty);
  if (property == "subtranslatory") {
    auto f = qac::parse_penalty<double>(opt.penalty);
    auto rep = qac::subtranslatory_check(f, cfg);
    out.emplace_back("samples", std::to_string(rep.samples_checked));
    out.emplace_back("seed", std::to_string(opt.seed));
    out.emplace_back("analytic", rep.known_subtranslatory ? "1" : "0");
    out.emplace_back("verdict", rep.violation_found ? "FAIL" : "PASS");
    if (rep.counterexample) {
      const auto& ce = *rep.counterexample;
      std::string ps, ls;
      for (std::size_t i = 0; i < ce.probs.size(); ++i) {
        if (i) {
          ps += '\t';
          ls += '\t';
        }
        ps += fmt_full(ce.probs[i]);
        ls += fmt_full(ce.lengths[i]);
      }
      out.emplace_back("counterexample_p", ps);
      out.emplace_back("counterexample_l", ls);
      out.emplace_back("gradient_sum", fmt_full(ce.gradient_sum));
      out.emplace_back("penalty_gradient", fmt_full(ce.penalty_gradient));
    }
  } else if (property == "flatter") {
    auto g = qac::parse_penalty<double>(opt.penalty);
    auto f = qac::parse_penalty<double>(penalty2);
    auto rep = qac::is_flatter(g, f, cfg);
    out.emplace_back("penalty2", penalty2);
    out.emplace_back("samples", std::to_string(rep.samples_checked));
    out.emplace_back("seed", std::to_string(opt.seed));
    out.emplace_back("verdict", rep.flatter ? "PASS" : "FAIL");
    if (rep.counterexample) {
      const auto& ce = *rep.counterexample;
      out.emplace_back("counterexample_l",
                       std::to_string(ce.l) + "\t" + std::to_string(ce.l_prime));
      out.emplace_back("counterexample_p", fmt_full(ce.p) + "\t" + fmt_full(ce.p_prime));
      out.emplace_back("lhs", fmt_full(ce.lhs));
      out.emplace_back("rhs", fmt_full(ce.rhs));
    }
  } else {
    throw qac::InvalidParameterError("unknown property '" + property +
                                     "' (available: subtranslatory, flatter)");
  }
  for (const auto& [k, v] : out) std::cout << k << '\t' << v << '\n';
  return 0;
}

int run_oracle(const CommonOpts& opt, const std::string& method) {
  auto src = load_source(opt);
  std::vector<std::pair<std::string, std::string>> summary{{"penalty", opt.penalty},
                                                           {"method", method}};
  if (method == "brute") {
    auto f = qac::parse_penalty<double>(opt.penalty);
    auto lengths = qac::brute_force_optimal_code(src.dist, f, opt.lmax);
    emit_code_report(opt, src, f, lengths, std::move(summary));
  } else if (method == "huffman") {
    auto f = qac::parse_penalty<double>(opt.penalty);
    if (f.kind() != qac::PenaltyKind::linear)
      throw qac::InvalidParameterError("the huffman oracle is linear-penalty only");
    auto lengths = qac::huffman_bottom_merge(src.dist);
    emit_code_report(opt, src, f, lengths, std::move(summary));
  } else if (method == "exp-huffman") {
    auto f = qac::parse_penalty<double>(opt.penalty);
    if (f.kind() != qac::PenaltyKind::exponential)
      throw qac::InvalidParameterError("exp-huffman needs an exp:t=... penalty");
    auto lengths = qac::exponential_huffman(src.dist, f.rate());
    emit_code_report(opt, src, f, lengths, std::move(summary));
  } else {
    throw qac::InvalidParameterError("unknown method '" + method +
                                     "' (available: brute, huffman, exp-huffman)");
  }
  return 0;
}

int run_bench(const CommonOpts& opt, int n, int reps) {
  if (n < 2) throw qac::InvalidParameterError("bench needs n >= 2");
  if (reps < 1) throw qac::InvalidParameterError("bench needs reps >= 1");
  auto f = qac::parse_penalty<double>(opt.penalty);
  qac::Sampler rng(opt.seed);
  qac::SolveStats stats;
  int lmax = opt.lmax.value_or(n - 1);
  CommonOpts solver_opt = opt;
  solver_opt.lmax = lmax;
  for (int r = 0; r < reps; ++r) {
    auto w = rng.dirichlet(n);
    auto [sorted, perm] = qac::sort_weights(w);
    qac::SourceDistribution<double> p(sorted);
    auto res = solve(solver_opt, p, f, &stats);
    if (qac::kraft_sum(res.lengths) != qac::Dyadic::one())
      throw qac::InternalConsistencyError("bench run produced a non-tight code");
  }
  double cells = static_cast<double>(n) * static_cast<double>(lmax) * reps;
  std::vector<std::pair<std::string, std::string>> out{
      {"engine", opt.engine},
      {"penalty", opt.penalty},
      {"n", std::to_string(n)},
      {"lmax", std::to_string(lmax)},
      {"reps", std::to_string(reps)},
      {"seed", std::to_string(opt.seed)},
      {"node_touches", std::to_string(stats.node_touches)},
      {"packages_formed", std::to_string(stats.packages_formed)},
      {"live_records_peak", std::to_string(stats.live_records_peak)},
      {"merge_runs", std::to_string(stats.merge_runs)},
      {"touches_per_cell", fmt(static_cast<double>(stats.node_touches) / cells, "%.6g")},
      {"live_per_symbol",
       fmt(static_cast<double>(stats.live_records_peak) / static_cast<double>(n), "%.6g")}};
  for (const auto& [k, v] : out) std::cout << k << '\t' << v << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"optimal prefix codes for convex additive penalties"};
  app.require_subcommand(1);

  CommonOpts opt;
  opt.seed = default_seed();
  std::string property = "subtranslatory";
  std::string penalty2 = "linear";
  std::string method = "brute";
  std::size_t samples = 10000;
  int bench_n = 2000;
  int bench_reps = 1;

  auto add_common = [&](CLI::App* cmd, bool with_input) {
    if (with_input)
      cmd->add_option("input", opt.input, "weight file, one or more weights per line")
          ->required();
    cmd->add_option("--penalty", opt.penalty,
                    "penalty spec: linear | exp:t=T | moment:a=A | quad:alpha=A,beta=B | "
                    "limit:lmax=K | explimit:t=T,lmax=K | custom:NAME");
    cmd->add_option("--seed", opt.seed, "sampler seed (default: QA_CODER_SEED or 20260819)");
    return cmd;
  };
  auto add_solver = [&](CLI::App* cmd) {
    cmd->add_option("--lmax", opt.lmax, "maximum codeword length");
    cmd->add_option("--engine", opt.engine, "general | linear-space")
        ->check(CLI::IsMember({"general", "linear-space"}));
    cmd->add_option("--format", opt.format, "tsv | table")
        ->check(CLI::IsMember({"tsv", "table"}));
    cmd->add_flag("--normalize", opt.normalize, "scale weights to unit sum");
    return cmd;
  };

  auto* code = add_solver(add_common(app.add_subcommand("code", "construct an optimal code"),
                                     true));
  auto* entropy = add_solver(add_common(
      app.add_subcommand("entropy", "entropy bound over real-valued lengths"), true));
  auto* check =
      add_common(app.add_subcommand("check", "sample a penalty property"), false);
  check->add_option("--property", property, "subtranslatory | flatter");
  check->add_option("--penalty2", penalty2, "reference penalty for --property flatter");
  check->add_option("--samples", samples, "sample budget");
  auto* oracle = add_solver(add_common(
      app.add_subcommand("oracle", "reference solvers for cross-checking"), true));
  oracle->add_option("--method", method, "brute | huffman | exp-huffman");
  auto* bench = add_solver(add_common(
      app.add_subcommand("bench", "run a seeded random instance and print solver counters"),
      false));
  bench->add_option("--n", bench_n, "source size");
  bench->add_option("--reps", bench_reps, "instance count");
  bench->preparse_callback([&](std::size_t) { opt.engine = "linear-space"; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    // Usage problems land on the malformed-input exit code; --help stays 0.
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (app.got_subcommand(code)) return run_code(opt);
    if (app.got_subcommand(entropy)) return run_entropy(opt);
    if (app.got_subcommand(check)) return run_check(opt, property, penalty2, samples);
    if (app.got_subcommand(oracle)) return run_oracle(opt, method);
    if (app.got_subcommand(bench)) return run_bench(opt, bench_n, bench_reps);
  } catch (const qac::InputError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const qac::InfeasibleLimitError& e) {
    std::cerr << "infeasible: " << e.what() << '\n';
    return 1;
  } catch (const qac::InfeasibleWidthError& e) {
    std::cerr << "infeasible: " << e.what() << '\n';
    return 1;
  } catch (const qac::UnsupportedPenaltyError& e) {
    std::cerr << "infeasible: " << e.what() << '\n';
    return 1;
  } catch (const qac::InternalConsistencyError& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return 3;
  } catch (const qac::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return 3;
  }
  return 0;
}
