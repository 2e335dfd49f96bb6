#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <hurwitz/annulus.hpp>
#include <hurwitz/eval.hpp>
#include <hurwitz/ideals.hpp>
#include <hurwitz/io.hpp>
#include <hurwitz/kronecker.hpp>
#include <hurwitz/parallel.hpp>
#include <hurwitz/twist.hpp>
#include <hurwitz/zeros.hpp>

namespace {

using namespace hurwitz;
using io::json;

constexpr int kExitConfig = 2;
constexpr int kExitStage = 3;

/// Thrown for input that fails validation before any computation.
struct ConfigInvalid : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Globals {
  std::string precision = "working";
  std::uint64_t seed = 0;
  std::string out;
  std::string format = "json";
  unsigned threads = 0;
  std::string config;
  io::RunConfig file;
};

/// Per-command f and alpha, falling back to the config file.
struct Inputs {
  std::string f;
  std::string alpha;
  CLI::Option* f_opt = nullptr;
  CLI::Option* alpha_opt = nullptr;
};

void add_inputs(CLI::App* cmd, Inputs& in, const std::string& f_default, const std::string& alpha_default,
                bool want_f = true) {
  in.f = f_default;
  in.alpha = alpha_default;
  if (want_f) in.f_opt = cmd->add_option("--f", in.f, "values f(1),...,f(q)")->capture_default_str();
  in.alpha_opt = cmd->add_option("--alpha", in.alpha, "rat:p,q | quad:a,b,d | dec:<x>")->capture_default_str();
}

PeriodicFunction function_of(const Inputs& in, const Globals& g, std::size_t q = 0) {
  std::vector<Real> values;
  if (in.f_opt && in.f_opt->count() == 0 && g.file.f) values = *g.file.f;
  else values = io::parse_real_list(in.f);
  if (q != 0 && values.size() != q) {
    if (values.size() != 1) throw ConfigInvalid("--q does not match the number of f values");
    values.assign(q, values[0]);
  }
  return PeriodicFunction(std::move(values));
}

AlphaParam alpha_of(const Inputs& in, const Globals& g) {
  if (in.alpha_opt && in.alpha_opt->count() == 0 && g.file.alpha) return io::parse_alpha(*g.file.alpha);
  return io::parse_alpha(in.alpha);
}

/// Digits of the high-precision mode; nullopt for working precision.
std::optional<unsigned> high_digits(const Globals& g) {
  if (g.precision == "working") return std::nullopt;
  if (g.precision == "high") return kDefaultHighDigits;
  try {
    std::size_t used = 0;
    const unsigned long d = std::stoul(g.precision, &used);
    if (used == g.precision.size() && d >= 20 && d <= 2000) return static_cast<unsigned>(d);
  } catch (const std::exception&) {
  }
  throw ConfigInvalid("--precision must be working, high, or a digit count in [20, 2000]");
}

void require_format(const Globals& g, std::initializer_list<const char*> allowed) {
  for (const char* f : allowed) {
    if (g.format == f) return;
  }
  throw ConfigInvalid("--format " + g.format + " is not available for this command");
}

void emit(const Globals& g, const std::string& text) {
  if (g.out.empty()) {
    std::cout << text;
    if (!text.empty() && text.back() != '\n') std::cout << '\n';
    return;
  }
  std::ofstream os(g.out);
  if (!os) throw ConfigInvalid("cannot write '" + g.out + "'");
  os << text;
  if (!text.empty() && text.back() != '\n') os << '\n';
}

void emit_json(const Globals& g, const json& j) { emit(g, j.dump()); }

std::string json_lines(const std::vector<json>& lines) {
  std::string s;
  for (const auto& l : lines) s += l.dump() + "\n";
  return s;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"hzlab: generalized Hurwitz zeta zeros in sigma > 1"};
  app.require_subcommand(1);
  app.fallthrough();
  Globals g;
  app.add_option("--precision", g.precision, "working | high | <digits>")->capture_default_str();
  app.add_option("--seed", g.seed, "seed for randomized steps")->capture_default_str();
  app.add_option("--out", g.out, "write output to this file");
  app.add_option("--format", g.format, "json | jsonl | csv")
      ->check(CLI::IsMember({"json", "jsonl", "csv"}))
      ->capture_default_str();
  auto* threads_opt = app.add_option("--threads", g.threads, "worker threads (0 = all cores)")->capture_default_str();
  app.add_option("--config", g.config, "JSON file with keys f, alpha, precision, seed, threads");
  auto* precision_opt = app.get_option("--precision");
  auto* seed_opt = app.get_option("--seed");

  // eval
  auto* eval = app.add_subcommand("eval", "evaluate L(s, f, alpha)");
  Inputs eval_in;
  add_inputs(eval, eval_in, "1", "rat:1,1");
  std::size_t eval_q = 0;
  std::string eval_s = "2,0", eval_grid;
  Real eval_tol = kDefaultTol;
  eval->add_option("--q", eval_q, "period (a single f value is repeated q times)");
  eval->add_option("--s", eval_s, "sigma,t")->capture_default_str();
  eval->add_option("--grid", eval_grid, "sigma_min,sigma_max,n_sigma,t_min,t_max,n_t");
  eval->add_option("--tol", eval_tol, "absolute tolerance")->capture_default_str();

  // kron
  auto* kron = app.add_subcommand("kron", "simultaneous inhomogeneous approximation");
  kron->require_subcommand(1);
  auto* kron_solve = kron->add_subcommand("solve", "find t > tmin with |t w_n - b_n - x_n| < delta");
  std::string kron_freqs, kron_targets, kron_strategy = "auto";
  Real kron_delta = 0.05L, kron_tmin = 0, kron_max_t = 1e9L;
  std::uint64_t kron_max_iter = 100'000'000;
  kron_solve->add_option("--freqs", kron_freqs, "w_1,...,w_N")->required();
  kron_solve->add_option("--targets", kron_targets, "b_1,...,b_N")->required();
  kron_solve->add_option("--delta", kron_delta)->capture_default_str();
  kron_solve->add_option("--tmin", kron_tmin)->capture_default_str();
  kron_solve->add_option("--max-t", kron_max_t)->capture_default_str();
  kron_solve->add_option("--max-iterations", kron_max_iter)->capture_default_str();
  kron_solve->add_option("--strategy", kron_strategy)
      ->check(CLI::IsMember({"auto", "grid", "lattice"}))
      ->capture_default_str();

  // twist
  auto* twist_cmd = app.add_subcommand("twist", "twisted series constructions");
  twist_cmd->require_subcommand(1);
  auto* sign_flip = twist_cmd->add_subcommand("sign-flip", "truncation index and sigma0 of the sign-flip series");
  Inputs sf_in;
  add_inputs(sign_flip, sf_in, "1", "dec:0.7853981634");
  Real sf_delta = 0.5L, sf_tol = 1e-12L;
  sign_flip->add_option("--delta", sf_delta)->capture_default_str();
  sign_flip->add_option("--tol", sf_tol)->capture_default_str();

  auto* greedy = twist_cmd->add_subcommand("greedy", "block induction with the private-prime character");
  Inputs gr_in;
  add_inputs(greedy, gr_in, "1", "quad:0,1,2");
  std::int64_t gr_N1 = 1000, gr_num = 1, gr_den = 100;
  std::size_t gr_blocks = 50;
  std::string gr_mode = "authentic";
  Real gr_delta = 1;
  std::optional<Real> gr_sigma;
  greedy->add_option("--N1", gr_N1)->capture_default_str();
  greedy->add_option("--blocks", gr_blocks)->capture_default_str();
  greedy->add_option("--scale-num", gr_num)->capture_default_str();
  greedy->add_option("--scale-den", gr_den)->capture_default_str();
  greedy->add_option("--delta", gr_delta)->capture_default_str();
  greedy->add_option("--sigma", gr_sigma, "fixed exponent (searched when absent)");
  greedy->add_option("--mode", gr_mode)->check(CLI::IsMember({"authentic", "synthetic"}))->capture_default_str();

  // annulus
  auto* ann = app.add_subcommand("annulus", "reachable set of unimodular combinations");
  ann->require_subcommand(1);
  auto* ann_radii = ann->add_subcommand("radii", "outer and inner radius");
  auto* ann_realize = ann->add_subcommand("realize", "phases hitting a target");
  std::string ann_r, ann_z;
  ann_radii->add_option("--r", ann_r, "r_1,...,r_n")->required();
  ann_realize->add_option("--r", ann_r, "r_1,...,r_n")->required();
  ann_realize->add_option("--z", ann_z, "re,im")->required();

  // ideals
  auto* ideals_cmd = app.add_subcommand("ideals", "prime ideals of the shifts (n + alpha) a");
  ideals_cmd->require_subcommand(1);
  auto* ideals_factor = ideals_cmd->add_subcommand("factor", "factor (n + alpha) a");
  Inputs if_in;
  add_inputs(ideals_factor, if_in, "1", "quad:0,1,2", false);
  std::int64_t if_n = 0, if_to = -1;
  ideals_factor->add_option("--n", if_n)->required();
  ideals_factor->add_option("--to", if_to, "factor every n in [n, to]");
  auto* ideals_cassels = ideals_cmd->add_subcommand("cassels", "private primes of a block");
  Inputs ic_in;
  add_inputs(ideals_cassels, ic_in, "1", "quad:0,1,2", false);
  std::int64_t ic_N = 1000, ic_M = 10;
  ideals_cassels->add_option("--N", ic_N)->capture_default_str();
  ideals_cassels->add_option("--M", ic_M)->capture_default_str();

  // zeros
  auto* zeros_cmd = app.add_subcommand("zeros", "zero counting and certification");
  zeros_cmd->require_subcommand(1);
  auto* zeros_count = zeros_cmd->add_subcommand("count", "zeros of L(s + i shift) inside a rectangle");
  Inputs zc_in;
  add_inputs(zeros_count, zc_in, "1", "rat:1,1");
  std::string zc_rect;
  Real zc_shift = 0;
  zeros_count->add_option("--rect", zc_rect, "sigma_min,sigma_max,t_min,t_max")->required();
  zeros_count->add_option("--shift", zc_shift)->capture_default_str();
  auto* pipeline = zeros_cmd->add_subcommand("pipeline", "certified zero via the sign-flip twist");
  Inputs zp_in;
  add_inputs(pipeline, zp_in, "1", "dec:0.7853981634");
  Real zp_delta = 0.5L;
  zeros::PipelineBudget zp_budget;
  std::string zp_records;
  bool zp_no_tail = false;
  pipeline->add_option("--delta", zp_delta)->capture_default_str();
  pipeline->add_option("--budget", zp_budget.max_t, "largest t the Kronecker search may reach")->capture_default_str();
  pipeline->add_option("--terms", zp_budget.kronecker_terms, "Kronecker-controlled terms N (1..6)")->capture_default_str();
  pipeline->add_option("--tmin", zp_budget.t_min)->capture_default_str();
  pipeline->add_option("--attempts", zp_budget.attempts)->capture_default_str();
  pipeline->add_option("--samples", zp_budget.samples)->capture_default_str();
  pipeline->add_option("--max-iterations", zp_budget.max_iterations)->capture_default_str();
  pipeline->add_option("--delta1", zp_budget.delta1);
  pipeline->add_option("--theta", zp_budget.theta);
  pipeline->add_option("--epsilon", zp_budget.epsilon);
  pipeline->add_flag("--circle-only", zp_no_tail, "leave the region tail bound out of sup_diff");
  pipeline->add_option("--records", zp_records, "append certified ZeroRecords to this JSON-lines file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    if (code == 0) return 0;
    std::cerr << app.help();
    return kExitConfig;
  }

  try {
    if (!g.config.empty()) {
      g.file = io::load_config(g.config);
      if (precision_opt->count() == 0 && g.file.precision) g.precision = *g.file.precision;
      if (seed_opt->count() == 0 && g.file.seed) g.seed = *g.file.seed;
      if (threads_opt->count() == 0 && g.file.threads) g.threads = *g.file.threads;
    }
    const auto digits = high_digits(g);
    const unsigned threads = resolve_threads(g.threads);

    if (eval->parsed()) {
      const PeriodicFunction f = function_of(eval_in, g, eval_q);
      const AlphaParam alpha = alpha_of(eval_in, g);
      if (!eval_grid.empty()) {
        require_format(g, {"csv", "jsonl", "json"});
        const auto v = io::parse_real_list(eval_grid);
        if (v.size() != 6 || v[2] < 1 || v[5] < 1) throw ConfigInvalid("--grid needs smin,smax,ns,tmin,tmax,nt");
        const auto ns = static_cast<std::size_t>(v[2]), nt = static_cast<std::size_t>(v[5]);
        std::vector<ComplexPoint> pts;
        for (std::size_t i = 0; i < ns; ++i) {
          for (std::size_t k = 0; k < nt; ++k) {
            const Real sg = ns == 1 ? v[0] : v[0] + (v[1] - v[0]) * static_cast<Real>(i) / static_cast<Real>(ns - 1);
            const Real tt = nt == 1 ? v[3] : v[3] + (v[4] - v[3]) * static_cast<Real>(k) / static_cast<Real>(nt - 1);
            pts.push_back({sg, tt});
          }
        }
        const auto vals = evaluate_grid(pts, f, alpha, eval_tol, threads);
        if (g.format == "csv") {
          emit(g, io::grid_csv(pts, vals));
        } else {
          std::vector<json> lines;
          for (std::size_t i = 0; i < pts.size(); ++i) {
            lines.push_back(json{{"sigma", io::real_to_json(pts[i].sigma)},
                                 {"t", io::real_to_json(pts[i].t)},
                                 {"re", io::real_to_json(vals[i].real())},
                                 {"im", io::real_to_json(vals[i].imag())}});
          }
          emit(g, g.format == "jsonl" ? json_lines(lines) : json(lines).dump());
        }
        return 0;
      }
      require_format(g, {"json", "jsonl"});
      const Complex s = io::parse_complex(eval_s);
      const Complex v = lfunction(ComplexPoint::from(s), f, alpha, eval_tol);
      json out{{"re", io::real_to_json(v.real())}, {"im", io::real_to_json(v.imag())}};
      if (digits && s.imag() == 0) {
        ScopedDigits scope(*digits);
        const HighReal hs(static_cast<double>(s.real()));
        const HighReal tol = pow(HighReal(10), -static_cast<int>(*digits) + 5);
        out["re_text"] = lfunction_real(hs, f, alpha.value_high(), tol).str(*digits);
      }
      emit_json(g, out);
      return 0;
    }

    if (kron_solve->parsed()) {
      require_format(g, {"json", "jsonl"});
      kronecker::KroneckerProblem p{io::parse_real_list(kron_freqs), io::parse_real_list(kron_targets), kron_delta,
                                    kron_tmin};
      kronecker::SearchBudget b;
      b.max_t = kron_max_t;
      b.max_iterations = kron_max_iter;
      b.threads = threads;
      b.strategy = kron_strategy == "auto"    ? kronecker::default_strategy(p.frequencies.size())
                   : kron_strategy == "grid" ? kronecker::Strategy::Grid
                                             : kronecker::Strategy::Lattice;
      emit_json(g, json(kronecker::solve(p, b)));
      return 0;
    }

    if (sign_flip->parsed()) {
      require_format(g, {"json", "jsonl"});
      const PeriodicFunction f = function_of(sf_in, g);
      const AlphaParam alpha = alpha_of(sf_in, g);
      const auto tr = twist::truncation_index(f, alpha, sf_delta);
      const twist::TwistedSeries F(tr.f, alpha, twist::SignFlip{tr.m});
      const auto s0 = twist::find_sigma0(F, sf_delta, sf_tol, digits.value_or(0));
      json out{{"m", hurwitz::to_string(tr.m)},
               {"head", io::real_to_json(tr.head)},
               {"tail", io::real_to_json(tr.tail)},
               {"tail_bound", io::real_to_json(tr.tail_bound)},
               {"negated", tr.negated},
               {"sigma0", s0}};
      emit_json(g, out);
      return 0;
    }

    if (greedy->parsed()) {
      require_format(g, {"json", "jsonl"});
      const PeriodicFunction f = function_of(gr_in, g);
      const AlphaParam alpha = alpha_of(gr_in, g);
      twist::BlockSchedule sched{gr_N1, gr_blocks, {gr_num, gr_den}, gr_sigma};
      twist::ScheduleOptions opt;
      opt.mode = gr_mode == "authentic" ? twist::SetMode::Authentic : twist::SetMode::Synthetic;
      opt.delta = gr_delta;
      opt.seed = g.seed;
      opt.high_digits = digits.value_or(kDefaultHighDigits);
      opt.threads = threads;
      const auto report = twist::run_schedule(f, alpha, sched, opt);
      if (g.format == "jsonl") {
        std::vector<json> lines{twist::report_header(report)};
        for (const auto& b : report.blocks) lines.push_back(json(b));
        emit(g, json_lines(lines));
      } else {
        json out = twist::report_header(report);
        out["records"] = report.blocks;
        emit_json(g, out);
      }
      if (report.failure) {
        std::cerr << io::error_json(report.failure->code, report.failure->message).dump() << '\n';
        return kExitStage;
      }
      return 0;
    }

    if (ann_radii->parsed() || ann_realize->parsed()) {
      require_format(g, {"json", "jsonl"});
      const auto r = io::parse_real_list(ann_r);
      if (ann_radii->parsed()) {
        emit_json(g, json(annulus::radii(r)));
      } else {
        const annulus::AnnulusSpec spec(r);
        const Complex z = io::parse_complex(ann_z);
        const auto phases = annulus::realize(spec, z);
        json ph = json::array();
        for (Real p : phases) ph.push_back(io::real_to_json(p));
        emit_json(g, json{{"phases", ph},
                          {"residual", io::real_to_json(std::abs(annulus::evaluate(r, phases) - z))}});
      }
      return 0;
    }

    if (ideals_factor->parsed()) {
      require_format(g, {"json", "jsonl"});
      const AlphaParam alpha = alpha_of(if_in, g);
      const auto field = ideals::field_of(alpha);
      const std::int64_t last = if_to < 0 ? if_n : if_to;
      if (last < if_n || if_n < 0) throw ConfigInvalid("--n and --to must satisfy 0 <= n <= to");
      std::vector<json> rows;
      for (std::int64_t n = if_n; n <= last; ++n) rows.push_back(json(ideals::factor_shift(n, alpha, field)));
      if (rows.size() == 1 && g.format == "json") emit_json(g, rows.front());
      else emit(g, g.format == "jsonl" ? json_lines(rows) : json(rows).dump());
      return 0;
    }

    if (ideals_cassels->parsed()) {
      require_format(g, {"json", "jsonl"});
      const AlphaParam alpha = alpha_of(ic_in, g);
      emit_json(g, json(ideals::private_primes(ic_N, ic_M, alpha, threads)));
      return 0;
    }

    if (zeros_count->parsed()) {
      require_format(g, {"json", "jsonl"});
      const PeriodicFunction f = function_of(zc_in, g);
      const AlphaParam alpha = alpha_of(zc_in, g);
      const auto v = io::parse_real_list(zc_rect);
      if (v.size() != 4) throw ConfigInvalid("--rect needs sigma_min,sigma_max,t_min,t_max");
      zeros::QuadratureParams qp;
      qp.threads = threads;
      const Real shift = zc_shift;
      zeros::Evaluator L = [&](Complex s) {
        return lfunction(ComplexPoint{s.real(), s.imag() + shift}, f, alpha, 1e-14L);
      };
      emit_json(g, json(zeros::argument_count_detailed(L, zeros::Rectangle{v[0], v[1], v[2], v[3]}, qp)));
      return 0;
    }

    if (pipeline->parsed()) {
      require_format(g, {"json", "jsonl"});
      const PeriodicFunction f = function_of(zp_in, g);
      const AlphaParam alpha = alpha_of(zp_in, g);
      zp_budget.threads = threads;
      zp_budget.region_tail = !zp_no_tail;
      const auto result = zeros::find_zero_pipeline(f, alpha, zp_delta, zp_budget);
      emit_json(g, json(result));
      if (result.record && !zp_records.empty()) {
        std::ofstream rec(zp_records, std::ios::app);
        if (!rec) throw ConfigInvalid("cannot append to '" + zp_records + "'");
        rec << json(*result.record).dump() << '\n';
      }
      if (result.failure) {
        json diag = json(*result.failure);
        std::cerr << diag.dump() << '\n';
        return kExitStage;
      }
      return 0;
    }
  } catch (const ConfigInvalid& e) {
    std::cerr << io::error_json(ErrorCode::InvalidArgument, e.what()).dump() << '\n' << app.help();
    return kExitConfig;
  } catch (const Error& e) {
    std::cerr << io::error_json(e.code(), e.what()).dump() << '\n';
    return e.code() == ErrorCode::InvalidArgument ? kExitConfig : kExitStage;
  } catch (const std::exception& e) {
    std::cerr << io::error_json(ErrorCode::InvalidArgument, e.what()).dump() << '\n';
    return kExitConfig;
  }
  return kExitConfig;
}
