#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <sstream>

#include "lasat/errors.hpp"
#include "lasat/json_out.hpp"
#include "lasat/verify.hpp"

namespace {

using namespace lasat;

struct cli_options {
  std::string input;  // DIMACS path, "-" for stdin
  std::string config_file;
  std::string seed_hex;
  double alpha = -1, beta1 = -1, beta2 = -1, theta = -1, c = -1;
  long long horizon = 0, rcap = 0;
  int phase2_reps = 0, cap_phase1 = 0, cap_phase3 = 0, enum_cap = 0, conn_cap = 0;
  bool trace = false;
  bool fallback = false;
  std::string format = "json";
};

std::string read_input(const std::string& path) {
  if (path == "-") {
    std::ostringstream buf;
    buf << std::cin.rdbuf();
    return buf.str();
  }
  std::ifstream in(path);
  if (!in) fail(errc::bad_config, "cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

// plain key=value lines; CLI flags override file entries
void apply_config_file(cli_options& o) {
  if (o.config_file.empty()) return;
  std::ifstream in(o.config_file);
  if (!in) fail(errc::bad_config, "cannot open config " + o.config_file);
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    auto eq = line.find('=');
    if (eq == std::string::npos) fail(errc::bad_config, "bad config line: " + line);
    std::string key = line.substr(0, eq), val = line.substr(eq + 1);
    auto set_if = [&](double& slot) {
      if (slot < 0) slot = std::stod(val);
    };
    if (key == "seed") {
      if (o.seed_hex.empty()) o.seed_hex = val;
    } else if (key == "alpha") set_if(o.alpha);
    else if (key == "beta1") set_if(o.beta1);
    else if (key == "beta2") set_if(o.beta2);
    else if (key == "theta") set_if(o.theta);
    else if (key == "c") set_if(o.c);
    else if (key == "horizon") { if (o.horizon == 0) o.horizon = std::stoll(val); }
    else if (key == "rcap") { if (o.rcap == 0) o.rcap = std::stoll(val); }
    else if (key == "phase2_reps") { if (o.phase2_reps == 0) o.phase2_reps = std::stoi(val); }
    else if (key == "cap_phase1") { if (o.cap_phase1 == 0) o.cap_phase1 = std::stoi(val); }
    else if (key == "cap_phase3") { if (o.cap_phase3 == 0) o.cap_phase3 = std::stoi(val); }
    else if (key == "enum_cap") { if (o.enum_cap == 0) o.enum_cap = std::stoi(val); }
    else if (key == "conn_cap") { if (o.conn_cap == 0) o.conn_cap = std::stoi(val); }
    else fail(errc::bad_config, "unknown config key: " + key);
  }
}

sampler_config make_config(const cli_options& o) {
  sampler_config cfg;
  if (o.alpha > 0) cfg.marking.alpha = o.alpha;
  if (o.beta1 > 0) cfg.marking.beta1 = o.beta1;
  if (o.beta2 > 0) cfg.marking.beta2 = o.beta2;
  if (o.c > 0) cfg.marking.c = o.c;
  if (o.phase2_reps > 0) cfg.marking.phase2_reps = o.phase2_reps;
  if (o.cap_phase1 > 0) cfg.marking.component_cap_phase1 = o.cap_phase1;
  if (o.cap_phase3 > 0) cfg.marking.component_cap_phase3 = o.cap_phase3;
  if (o.theta > 0) cfg.theta_override = o.theta;
  cfg.horizon = o.horizon;
  cfg.r_cap = o.rcap;
  if (o.enum_cap > 0) cfg.caps.component_enum_cap = o.enum_cap;
  if (o.conn_cap > 0) cfg.caps.conn_clause_cap = o.conn_cap;
  cfg.caps.whole_formula_fallback = o.fallback;
  return cfg;
}

seed make_seed(const cli_options& o) {
  if (o.seed_hex.empty()) fail(errc::bad_config, "--seed is required (64 hex characters)");
  return seed::from_hex(o.seed_hex);
}

void emit(const json& j) { std::cout << j.dump(2) << '\n'; }

// 1 for input/usage problems, 2 for sampler failures
int exit_code_for(errc c) {
  switch (c) {
    case errc::malformed_dimacs:
    case errc::variable_out_of_range:
    case errc::repeated_variable:
    case errc::empty_clause:
    case errc::too_many_variables:
    case errc::domain_error:
    case errc::bad_config:
      return 1;
    default:
      return 2;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"random local access to uniform satisfying assignments of k-CNF formulas"};
  app.require_subcommand(1);
  app.fallthrough();

  cli_options o;
  app.add_option("--config", o.config_file, "key=value config file; flags override");
  app.add_option("--seed", o.seed_hex, "session seed, 64 hex characters");
  app.add_option("--alpha", o.alpha, "marking threshold alpha");
  app.add_option("--beta1", o.beta1, "phase-1 dangerous threshold");
  app.add_option("--beta2", o.beta2, "phase-2 dangerous threshold");
  app.add_option("--theta", o.theta, "lower-bound override in (0, 1/2)");
  app.add_option("--horizon", o.horizon, "scan horizon T (0 = auto)");
  app.add_option("--rcap", o.rcap, "|R| cap (0 = auto)");
  app.add_option("--phase2-reps", o.phase2_reps, "phase-2 repetitions (0 = auto)");
  app.add_option("--cap-phase1", o.cap_phase1, "phase-1 component cap multiplier");
  app.add_option("--cap-phase3", o.cap_phase3, "phase-3 component cap multiplier");
  app.add_option("--enum-cap", o.enum_cap, "component enumeration cap (variables)");
  app.add_option("--conn-cap", o.conn_cap, "conn explored-clause cap");
  app.add_flag("--trace", o.trace, "include per-query statistics in the output");
  app.add_flag("--fallback", o.fallback, "whole-formula fallback on ComponentTooLarge");
  app.add_option("--format", o.format, "output format (json)");

  std::string file;
  int var = 0;
  std::vector<std::string> batch_vars;
  std::string suite = "all";
  int jobs = 1;
  double cond_k = 0, cond_d = 0, cond_dlog2 = -1;
  long long n_samples = 0;
  int trials = 200;

  auto* c_sample = app.add_subcommand("sample", "sample one variable");
  c_sample->add_option("file", file, "DIMACS CNF path or -")->required();
  c_sample->add_option("var", var, "variable index")->required();

  auto* c_batch = app.add_subcommand("batch", "sample several variables");
  c_batch->add_option("file", file)->required();
  c_batch->add_option("vars", batch_vars, "variable indices or 'all'")->required();
  c_batch->add_option("--jobs", jobs, "worker threads for the batch");

  auto* c_marking = app.add_subcommand("marking", "print the full marking and its validation");
  c_marking->add_option("file", file)->required();

  auto* c_component = app.add_subcommand("component", "explore the component of a variable");
  c_component->add_option("file", file)->required();
  c_component->add_option("var", var)->required();

  auto* c_verify = app.add_subcommand("verify", "run verification suites on the instance");
  c_verify->add_option("file", file)->required();
  c_verify->add_option("--suite", suite, "coupling | marking | tv | all");
  c_verify->add_option("--n-samples", n_samples, "sample count for the tv suite");

  auto* c_conditions = app.add_subcommand("conditions", "evaluate the parameter condition sets");
  c_conditions->add_option("--k", cond_k, "clause width")->required();
  c_conditions->add_option("--d", cond_d, "max variable degree");
  c_conditions->add_option("--d-log2", cond_dlog2, "log2 of max degree (for huge d)");

  auto* c_stats = app.add_subcommand("stats", "monitored statistics over repeated sessions");
  c_stats->add_option("file", file)->required();
  c_stats->add_option("--trials", trials, "number of session seeds");

  CLI11_PARSE(app, argc, argv);

  try {
    apply_config_file(o);
    const sampler_config cfg = make_config(o);

    if (c_sample->parsed()) {
      formula f = formula::parse_dimacs(read_input(file));
      sampler_context ctx(f, make_seed(o), cfg);
      try {
        emit(to_json(ctx.sample(var), o.trace));
      } catch (const error& e) {
        if (exit_code_for(e.code()) == 1) throw;
        emit({{"var", var}, {"error", e.what()}});
        return 2;
      }
    } else if (c_batch->parsed()) {
      formula f = formula::parse_dimacs(read_input(file));
      std::vector<var_id> vars;
      if (batch_vars.size() == 1 && batch_vars[0] == "all") {
        for (var_id v = 1; v <= f.var_count(); ++v) vars.push_back(v);
      } else {
        for (const auto& s : batch_vars) vars.push_back(std::stoi(s));
      }
      sampler_context ctx(f, make_seed(o), cfg);
      batch_result br = ctx.sample_many(vars, jobs);
      json arr = json::array();
      for (const auto& r : br.values) arr.push_back(to_json(r, o.trace));
      json out{{"values", arr}, {"failed", br.failed}};
      if (br.failed) {
        out["error"] = br.error;
        out["failed_var"] = br.failed_var;
        emit(out);
        return 2;
      }
      emit(out);
    } else if (c_marking->parsed()) {
      formula f = formula::parse_dimacs(read_input(file));
      marking_result mr = compute_marking(f, make_seed(o), cfg.marking);
      auto val = validate_marking(f, mr.marked_vars(), cfg.marking.alpha);
      emit(to_json(mr, val));
      if (mr.failed) return 2;
    } else if (c_component->parsed()) {
      formula f = formula::parse_dimacs(read_input(file));
      sampler_context ctx(f, make_seed(o), cfg);
      if (ctx.marking_failed()) {
        emit({{"error", "marking failed for this seed"}});
        return 2;
      }
      if (ctx.schedule().contains(var)) {
        emit({{"var", var}, {"error", "variable is marked; component exploration is for unmarked variables"}});
        return 2;
      }
      conn_params cp;
      cp.clause_cap = cfg.caps.conn_clause_cap;
      emit(to_json(conn(f, ctx.session_seed(), ctx.schedule(), ctx.margin(), var, cp)));
    } else if (c_verify->parsed()) {
      formula f = formula::parse_dimacs(read_input(file));
      verify_options vo;
      if (n_samples > 0) vo.tv_samples = n_samples;
      json rep = verify_file_suite(f, cfg, suite, vo);
      emit(rep);
      if (!rep["pass"].get<bool>()) return 2;
    } else if (c_conditions->parsed()) {
      marking_params mp;
      if (o.alpha > 0) mp.alpha = o.alpha;
      if (o.beta1 > 0) mp.beta1 = o.beta1;
      if (o.beta2 > 0) mp.beta2 = o.beta2;
      double log2d = cond_dlog2 >= 0 ? cond_dlog2 : std::log2(cond_d);
      if (!(log2d >= 0)) fail(errc::bad_config, "provide --d or --d-log2");
      json out;
      out["k"] = cond_k;
      out["log2_d"] = log2d;
      out["marking_conditions"] = to_json(check_conditions_marking(cond_k, log2d, mp));
      out["margin_conditions"] = to_json(check_conditions_margin(cond_k, log2d, mp.alpha));
      theta_info ti = theta_default(cond_k, std::exp2(log2d), mp.alpha);
      out["theta_default"] = {{"value", ti.value}, {"positive", ti.positive}, {"meets_0.4", ti.meets_min}};
      emit(out);
    } else if (c_stats->parsed()) {
      formula f = formula::parse_dimacs(read_input(file));
      json runs = json::array();
      long long failures = 0;
      std::vector<long long> r_sizes;
      std::vector<int> comp_sizes;
      for (int i = 0; i < trials; ++i) {
        seed sd = seed::from_u64(0xB10CBA5EULL + std::uint64_t(i));
        sampler_context ctx(f, sd, cfg);
        if (ctx.marking_failed()) {
          ++failures;
          continue;
        }
        std::vector<var_id> vars;
        for (var_id v = 1; v <= f.var_count(); ++v) vars.push_back(v);
        auto br = ctx.sample_many(vars);
        if (br.failed) {
          ++failures;
          continue;
        }
        for (const auto& r : br.values) {
          if (r.marked)
            r_sizes.push_back(r.final_r);
          else
            comp_sizes.push_back(r.component_clauses);
        }
      }
      long long rmax = 0;
      double rsum = 0;
      for (long long r : r_sizes) {
        rmax = std::max(rmax, r);
        rsum += double(r);
      }
      int cmax = 0;
      for (int c : comp_sizes) cmax = std::max(cmax, c);
      double lg = std::log2(std::max(2, f.var_count()));
      json out{{"instance", to_json(f)},
               {"trials", trials},
               {"failures", failures},
               {"r_mean", r_sizes.empty() ? 0.0 : rsum / double(r_sizes.size())},
               {"r_max", rmax},
               {"component_clauses_max", cmax},
               {"bound_kd_log2_n", f.k_max() * f.max_degree() * lg * lg}};
      emit(out);
    }
  } catch (const error& e) {
    std::cerr << e.what() << '\n';
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    std::cerr << e.what() << '\n';
    return 1;
  }
  return 0;
}
