// growthlab: command-line front end for sequence construction, condition
// probes, growth-index scans and the verification scenarios.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "growthlab/conditions.hpp"
#include "growthlab/errors.hpp"
#include "growthlab/indices.hpp"
#include "growthlab/serialize.hpp"
#include "growthlab/verify.hpp"
#include "growthlab/weight_spec.hpp"

using namespace growthlab;

namespace {

constexpr int kExitError = 2;

struct WindowFlags {
  double t_min = 0.0;
  double t_max = 0.0;
  std::optional<double> log_t_min;
  std::optional<double> log_t_max;
  int samples = 64;

  void add(CLI::App* app, double def_min, double def_max) {
    t_min = def_min;
    t_max = def_max;
    app->add_option("--tmin", t_min, "window start t")->capture_default_str();
    app->add_option("--tmax", t_max, "window end t")->capture_default_str();
    app->add_option("--log-tmin", log_t_min, "window start as log t (overrides --tmin)");
    app->add_option("--log-tmax", log_t_max, "window end as log t (overrides --tmax)");
    app->add_option("--samples", samples, "log-spaced samples")->capture_default_str();
  }

  /// Clips the end of the window to the weight's domain when given as t.
  Window window(const WeightFn* w = nullptr) const {
    const double lo = log_t_min ? *log_t_min : std::log(t_min);
    double hi = log_t_max ? *log_t_max : std::log(t_max);
    if (w && !log_t_max) hi = std::min(hi, w->log_domain_max());
    return Window::log_range(lo, hi, samples);
  }
};

struct Output {
  std::string path;
  std::string format = "json";

  void write(const std::string& text) const {
    if (path.empty() || path == "-") {
      std::cout << text;
      std::cout.flush();
      return;
    }
    std::ofstream out(path);
    if (!out) throw ParameterError("cannot write " + path);
    out << text;
  }
  void json(const Json& j) const { write(j.dump(2) + "\n"); }
};

std::string describe_state(const Verdict& v) {
  std::ostringstream os;
  os << v.condition << ": " << state_name(v.state) << (v.exact ? " (exact)" : "") << "\n";
  for (const auto& [k, x] : v.statistics) os << "  " << k << " = " << format_real(x) << "\n";
  for (const auto& [k, x] : v.witness) os << "  witness " << k << " = " << format_real(x) << "\n";
  for (const auto& [k, x] : v.witness_index) os << "  witness " << k << " = " << index_to_string(x) << "\n";
  for (const auto& d : v.diagnostics) os << "  note: " << d << "\n";
  return os.str();
}

// --- build ----------------------------------------------------------------

struct BuildCmd {
  std::string family;
  double A = 3.0, A0 = 0.0, s = 1.0, d_rule_A = 0.0;
  std::string k_max = "1048576";
  int j_max = 8;
  Output out;

  void add(CLI::App& app) {
    auto* c = app.add_subcommand("build", "construct a quotient sequence and write it as JSON");
    c->add_option("--family", family, "gevrey, nq, qa-a, qa-b or qa-c")->required();
    c->add_option("--A", A, "block multiplier")->capture_default_str();
    c->add_option("--A0", A0, "upper bound for A (qa-a)");
    c->add_option("--s", s, "Gevrey exponent")->capture_default_str();
    c->add_option("--kmax", k_max, "Gevrey length")->capture_default_str();
    c->add_option("--jmax", j_max, "number of macro-blocks")->capture_default_str();
    c->add_option("--d-rule-A", d_rule_A, "nq: pick d_j by the rule for this multiplier in (2, A]");
    c->add_option("-o,--output", out.path, "output file (default stdout)");
    c->add_option("--format", out.format, "json, csv or text (csv/text print the checkpoint table)")
        ->check(CLI::IsMember({"json", "csv", "text"}))
        ->capture_default_str();
    c->callback([this] { run(); });
  }

  void run() const {
    ConstructionParams p;
    p.family = parse_family(family);
    p.A = A;
    p.A0 = A0;
    p.s = s;
    p.k_max = parse_index(k_max);
    p.j_max = j_max;
    p.d_rule_A = d_rule_A;
    const BlockSequence seq = build_sequence(p);
    if (out.format == "json") {
      out.json(to_json(seq));
      return;
    }
    const char sep = out.format == "csv" ? ',' : ' ';
    std::ostringstream os;
    os << "j" << sep << "a" << sep << "b" << sep << "d" << sep << "c" << sep << "log_mu_a" << sep << "log_mu_b\n";
    for (const auto& cp : seq.checkpoints())
      os << cp.j << sep << index_to_string(cp.a) << sep << index_to_string(cp.b) << sep << cp.d << sep << cp.c
         << sep << format_real(cp.log_mu_a) << sep << format_real(cp.log_mu_b) << "\n";
    out.write(os.str());
  }
};

// --- check ----------------------------------------------------------------

struct CheckCmd {
  std::string seq_file;
  std::string weight;
  std::string condition;
  std::string k_hi;
  std::string j_lo = "1";
  std::string j_hi;
  long long Q = 4;
  std::vector<double> q{1.05};
  WindowFlags win;
  Output out;
  int* status = nullptr;

  void add(CLI::App& app, int* st) {
    status = st;
    auto* c = app.add_subcommand("check", "probe one condition on a sequence file or a weight");
    c->add_option("sequence", seq_file, "sequence JSON from `build`");
    c->add_option("--weight", weight, "weight spec (see --help of scan-gamma)");
    c->add_option("--condition", condition,
                  "sequence: lc, mg, nq, beta3, mu-over-k, gamma-relation; weight: om1, om2, om3, om4, om5, "
                  "omnq, omsnq, om7, subadd, almost-subadd")
        ->required();
    c->add_option("--k-hi", k_hi, "upper index for mg / nq");
    c->add_option("--j-lo", j_lo, "first index for beta3 / gamma-relation")->capture_default_str();
    c->add_option("--j-hi", j_hi, "last index for beta3 / gamma-relation");
    c->add_option("--Q", Q, "beta3 multiplier")->capture_default_str();
    c->add_option("--q", q, "subadd / almost-subadd bound(s)")->capture_default_str();
    win.add(c, 1e2, 1e14);
    c->add_option("-o,--output", out.path, "output file (default stdout)");
    c->add_option("--format", out.format, "json or text")->check(CLI::IsMember({"json", "text"}))->capture_default_str();
    c->callback([this] { run(); });
  }

  void emit(const Verdict& v, std::optional<double> value = std::nullopt) const {
    if (out.format == "text") {
      out.write(describe_state(v));
    } else {
      Json j = to_json(v);
      if (value) j["value"] = std::isfinite(*value) ? Json(*value) : Json(format_real(*value));
      out.json(j);
    }
    *status = exit_code(v.state);
  }

  void run() const {
    const bool seq_cond = condition == "lc" || condition == "mg" || condition == "nq" || condition == "beta3" ||
                          condition == "mu-over-k" || condition == "gamma-relation";
    if (seq_cond) {
      if (seq_file.empty()) throw ParameterError("condition '" + condition + "' needs a sequence file");
      run_sequence(load_sequence(seq_file));
      return;
    }
    std::optional<WeightFn> w;
    if (!weight.empty())
      w = parse_weight_spec(weight);
    else if (!seq_file.empty())
      w = associated(load_sequence(seq_file));
    else
      throw ParameterError("condition '" + condition + "' needs --weight or a sequence file");
    run_weight(*w);
  }

  void run_sequence(const BlockSequence& seq) const {
    if (seq.empty()) throw ParameterError("sequence is empty");
    auto idx = [](const std::string& s, Index def) { return s.empty() ? def : parse_index(s); };
    if (condition == "lc") {
      Verdict v;
      v.condition = "lc";
      v.exact = true;
      if (auto k = seq.log_convexity_violation()) {
        v.state = State::Fails;
        v.witness_index["k"] = *k;
      } else {
        v.state = State::Holds;
      }
      emit(v);
    } else if (condition == "mg") {
      const Probe p = check_mg(seq, idx(k_hi, seq.k_max() / 2));
      emit(p.verdict, p.value);
    } else if (condition == "nq") {
      const Probe p = check_nq(seq, idx(k_hi, seq.k_max()));
      emit(p.verdict, p.value);
    } else if (condition == "beta3") {
      const Probe p = check_beta3(seq, Q, idx(j_lo, 1), idx(j_hi, seq.k_max() / Q));
      emit(p.verdict, p.value);
    } else if (condition == "mu-over-k") {
      const MuOverKProfile prof = mu_over_k_profile(seq, true);
      if (out.format == "text") {
        std::ostringstream os;
        os << "mu_k/k limit: " << limit_class_name(prof.limit) << "\n";
        for (const auto& r : prof.rows) os << r.j << " " << index_to_string(r.k) << " " << format_real(r.log_ratio) << "\n";
        out.write(os.str());
      } else {
        Json rows = Json::array();
        for (const auto& r : prof.rows)
          rows.push_back({{"j", r.j}, {"k", index_to_string(r.k)}, {"log_ratio", r.log_ratio}});
        Json j = to_json(prof.verdict);
        j["limit"] = limit_class_name(prof.limit);
        j["rows"] = rows;
        out.json(j);
      }
      *status = exit_code(prof.verdict.state);
    } else {
      std::vector<Index> ls;
      for (int l = 2; l <= 16; ++l) ls.push_back(l);
      const auto rows = probe_gamma_relation(seq, ls, idx(j_lo, 1), idx(j_hi, seq.k_max() / 16));
      Json t = Json::array();
      double beta = -HUGE_VAL;
      for (const auto& r : rows) {
        t.push_back({{"l", index_to_string(r.l)},
                     {"min_ratio", r.min_ratio},
                     {"witness_j", index_to_string(r.witness_j)},
                     {"beta", r.beta}});
        beta = std::max(beta, r.beta);
      }
      out.json({{"schema", kSchemaVersion}, {"condition", "gamma-relation"}, {"rows", t}, {"beta", beta}});
      *status = 0;
    }
  }

  void run_weight(const WeightFn& w) const {
    const Window wd = win.window(&w);
    if (condition == "om1") {
      const Probe p = probe_om1(w, wd);
      emit(p.verdict, p.value);
    } else if (condition == "om2" || condition == "om3" || condition == "om5") {
      const RatioMode m = condition == "om2" ? RatioMode::Om2 : condition == "om3" ? RatioMode::Om3 : RatioMode::Om5;
      emit(probe_ratio_condition(w, m, wd));
    } else if (condition == "om4") {
      emit(probe_convexity(w, wd));
    } else if (condition == "omnq") {
      emit(probe_omnq(w));
    } else if (condition == "omsnq") {
      const Probe p = probe_omsnq(w, wd);
      emit(p.verdict, p.value);
    } else if (condition == "om7") {
      const Probe p = probe_square_condition(w, wd);
      emit(p.verdict, p.value);
    } else if (condition == "subadd") {
      if (q.size() != 1) throw ParameterError("subadd takes exactly one --q");
      emit(probe_subadditivity(w, q.front(), wd));
    } else if (condition == "almost-subadd") {
      emit(falsify_almost_subadditivity(w, q, wd));
    } else {
      throw ParameterError("unknown condition '" + condition + "'");
    }
  }
};

// --- scan-gamma -----------------------------------------------------------

struct ScanCmd {
  std::string weight;
  double gamma_step = 0.05, gamma_max = 4.0;
  double K_min = 1.01, K_max = 1e3;
  int K_count = 48;
  double margin = 1e-3;
  bool no_refine = false, no_shortcut = false;
  unsigned threads = 0;
  WindowFlags win;
  Output out;
  int* status = nullptr;

  void add(CLI::App& app, int* st) {
    status = st;
    auto* c = app.add_subcommand(
        "scan-gamma",
        "bracket the growth index gamma(omega)\n\nweight specs:\n  power:<s>           t^(1/s)\n"
        "  logpow:<s>          max(0, log t)^s, s > 1\n  explogsq            exp(log^2 t)\n"
        "  assoc:<path>        omega_M of a sequence file\n  powcomp:<spec>:<a>  omega(t^(1/a))\n"
        "  kappa:<spec>        kappa transform");
    c->add_option("--weight", weight, "weight spec")->required();
    c->add_option("--gamma-step", gamma_step, "grid step")->capture_default_str();
    c->add_option("--gamma-max", gamma_max, "largest grid gamma")->capture_default_str();
    c->add_option("--K-min", K_min)->capture_default_str();
    c->add_option("--K-max", K_max)->capture_default_str();
    c->add_option("--K-count", K_count, "log-spaced K values")->capture_default_str();
    c->add_option("--margin", margin)->capture_default_str();
    c->add_flag("--no-refine", no_refine, "skip bisection between grid points");
    c->add_flag("--no-square-shortcut", no_shortcut, "always scan, even when omega(t^2) = O(omega(t))");
    c->add_option("--threads", threads, "worker threads (default GROWTHLAB_THREADS or all cores)");
    win.add(c, 1e3, 1e9);
    c->add_option("-o,--output", out.path, "output file (default stdout)");
    c->add_option("--format", out.format, "json or text")->check(CLI::IsMember({"json", "text"}))->capture_default_str();
    c->callback([this] { run(); });
  }

  void run() const {
    const WeightFn w = parse_weight_spec(weight);
    if (!(gamma_step > 0.0) || !(gamma_max >= gamma_step)) throw ParameterError("need 0 < gamma-step <= gamma-max");
    if (K_count < 1 || !(K_min > 1.0) || !(K_max >= K_min)) throw ParameterError("need 1 < K-min <= K-max, K-count >= 1");
    GammaScanParams p;
    for (int i = 1; i * gamma_step <= gamma_max * (1 + 1e-12); ++i) p.gamma_grid.push_back(i * gamma_step);
    for (int i = 0; i < K_count; ++i)
      p.K_grid.push_back(K_count == 1 ? K_min
                                      : std::exp(std::log(K_min) + (std::log(K_max) - std::log(K_min)) * i / (K_count - 1)));
    p.margin = margin;
    p.refine = !no_refine;
    p.square_shortcut = !no_shortcut;
    p.threads = threads;
    const IndexEstimate e = estimate_gamma_omega(w, win.window(&w), p);
    if (out.format == "text") {
      std::ostringstream os;
      os << w.describe() << ": gamma in [" << format_real(e.gamma_lower) << ", " << format_real(e.gamma_upper) << "]";
      if (e.infinite) os << " (sentinel +inf)";
      os << "\n";
      for (const auto& d : e.diagnostics) os << "  note: " << d << "\n";
      out.write(os.str());
    } else {
      out.json(to_json(e));
    }
    *status = e.valid() ? 0 : 2;
  }
};

// --- verify ---------------------------------------------------------------

struct VerifyCmd {
  std::string scenario = "all";
  ScenarioConfig cfg;
  bool timing = false;
  Output out;
  int* status = nullptr;

  void add(CLI::App& app, int* st) {
    status = st;
    out.format = "text";
    auto* c = app.add_subcommand("verify", "run a verification scenario (or all)");
    std::string ids = "all";
    for (auto id : scenario_ids()) ids += ", " + std::string(id);
    c->add_option("scenario", scenario, ids)->capture_default_str();
    c->add_option("--A", cfg.A, "counterexample multiplier")->capture_default_str();
    c->add_option("--A-prime", cfg.A_prime, "second multiplier (step-v-nonequiv)")->capture_default_str();
    c->add_option("--jmax", cfg.j_max, "counterexample macro-blocks")->capture_default_str();
    c->add_option("--qa-jmax", cfg.qa_j_max, "macro-blocks of the quasianalytic cases")->capture_default_str();
    c->add_option("--s", cfg.s, "Gevrey exponent")->capture_default_str();
    c->add_option("--a", cfg.a_values, "exponents a for tau_a")->capture_default_str();
    c->add_option("--q", cfg.q, "falsifier bound")->capture_default_str();
    c->add_option("--threads", cfg.threads, "worker threads");
    c->add_flag("--timing", timing, "include runtimes (reports are then not byte-reproducible)");
    c->add_option("-o,--output", out.path, "output file (default stdout)");
    c->add_option("--format", out.format, "json or text")->check(CLI::IsMember({"json", "text"}))->capture_default_str();
    c->callback([this] { run(); });
  }

  void run() const {
    if (scenario == "all") {
      const FullReport r = full_report(cfg);
      if (out.format == "json")
        out.json(to_json(r, timing));
      else
        out.write(format_text(r, timing));
      *status = exit_code(r);
      return;
    }
    const ScenarioReport r = run_scenario(scenario, cfg);
    if (out.format == "json")
      out.json(to_json(r, timing));
    else
      out.write(format_text(r, timing));
    *status = r.skipped ? 2 : r.passed() ? 0 : 1;
  }
};

// --- sample ---------------------------------------------------------------

struct SampleCmd {
  std::string weight;
  WindowFlags win;
  Output out;

  void add(CLI::App& app) {
    out.format = "csv";
    auto* c = app.add_subcommand("sample", "tabulate (t, omega(t)) on a log-spaced window");
    c->add_option("--weight", weight, "weight spec")->required();
    win.add(c, 1.0, 1e6);
    c->add_option("-o,--output", out.path, "output file (default stdout)");
    c->add_option("--format", out.format, "csv or json")->check(CLI::IsMember({"csv", "json"}))->capture_default_str();
    c->callback([this] { run(); });
  }

  void run() const {
    const WeightFn w = parse_weight_spec(weight);
    const auto rows = sample_weight(w, win.window(&w));
    if (out.format == "json") {
      Json t = Json::array();
      for (const auto& [t_, o] : rows) t.push_back({{"t", t_}, {"omega_t", o}});
      out.json({{"schema", kSchemaVersion}, {"weight", w.describe()}, {"samples", t}});
      return;
    }
    std::string s = "t,omega_t\n";
    for (const auto& [t, o] : rows) s += format_real(t) + "," + format_real(o) + "\n";
    out.write(s);
  }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"growthlab: weight sequences, associated weights and growth indices"};
  app.require_subcommand(1);
  int status = 0;
  BuildCmd build;
  CheckCmd check;
  ScanCmd scan;
  VerifyCmd verify;
  SampleCmd sample;
  build.add(app);
  check.add(app, &status);
  scan.add(app, &status);
  verify.add(app, &status);
  sample.add(app);
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitError;
  } catch (const ConstructionError& e) {
    std::cerr << "error: " << e.what() << " (macro-block " << e.j() << ")\n";
    return kExitError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitError;
  }
  return status;
}
