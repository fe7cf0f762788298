#include "heunwell/cli.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "heunwell/errors.hpp"
#include "heunwell/numerics.hpp"
#include "heunwell/oracle.hpp"
#include "heunwell/spectrum.hpp"
#include "heunwell/specfun.hpp"

namespace heunwell::cli {

namespace {

using nlohmann::json;

// Bad invocation or unusable input; exit code 1 like DomainError.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.15g", v);
  return buf;
}

class Csv {
 public:
  explicit Csv(std::vector<std::string> header) : header_(std::move(header)) {}

  void row(const std::vector<std::string>& cells) { rows_.push_back(cells); }

  void write(std::ostream& os) const {
    line(os, header_);
    for (const auto& r : rows_) line(os, r);
  }

 private:
  static void line(std::ostream& os, const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) os << ',';
      os << cells[i];
    }
    os << '\n';
  }

  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
};

void emit(const Csv& csv, const std::string& path, std::ostream& fallback) {
  if (path.empty() || path == "-") {
    csv.write(fallback);
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw UsageError("cannot open output file: " + path);
  csv.write(f);
  if (!f) throw UsageError("failed writing output file: " + path);
}

std::string with_suffix(const std::string& path, const std::string& suffix) {
  if (path.empty() || path == "-") return {};
  const auto dot = path.rfind('.');
  const auto slash = path.find_last_of('/');
  if (dot == std::string::npos || (slash != std::string::npos && dot < slash)) {
    return path + suffix + ".csv";
  }
  return path.substr(0, dot) + suffix + path.substr(dot);
}

json pulse_json(const PulseSpec& p) {
  return {{"shape", p.shape}, {"u0", p.u0}, {"delta0", p.delta0}, {"asymmetry", p.asymmetry}};
}

template <typename T>
void read(const json& j, const char* key, T& target) {
  if (j.contains(key)) target = j.at(key).get<T>();
}

Complex parse_complex(const std::string& text) {
  std::istringstream in(text);
  double re = 0.0, im = 0.0;
  char sep = 0;
  if (!(in >> re)) throw UsageError("cannot parse complex value: " + text);
  if (in >> sep) {
    if (sep != ',' || !(in >> im)) throw UsageError("complex values are written re,im: " + text);
  }
  return {re, im};
}

void cmd_potential(const RunConfig& cfg, std::ostream& out) {
  validate(cfg.problem);
  const auto& o = cfg.potential;
  if (o.points < 2) throw UsageError("potential needs at least 2 points");
  if (!(o.x_min > 0.0) || !(o.x_max > o.x_min)) throw UsageError("need 0 < x_min < x_max");
  PhysicalParams baseline = cfg.problem;
  baseline.v1 = 0.0;
  Csv csv({"x", "v", "v_baseline"});
  for (double x : linspace(o.x_min, o.x_max, static_cast<std::size_t>(o.points))) {
    csv.row({fmt(x), fmt(potential_value(cfg.problem, x)), fmt(potential_value(baseline, x))});
  }
  emit(csv, cfg.out, out);
}

void cmd_spectrum(const RunConfig& cfg, std::ostream& out) {
  const int n = cfg.spectrum.levels;
  if (n < 1) throw UsageError("--levels must be at least 1");
  require_confining(cfg.problem);
  const auto levels = solve_levels_exact(cfg.problem, n);
  std::vector<double> oracle;
  if (cfg.spectrum.verify) oracle = numerov_eigenvalues(cfg.problem, OracleConfig{}, n);

  std::vector<std::string> header{"n", "a_exact", "e_exact", "e_approx14", "e_semiclassical",
                                  "rel_err_approx14", "rel_err_semiclassical",
                                  "a_transcendental_b0_exact", "a_transcendental_b0_rounded"};
  if (cfg.spectrum.verify) {
    header.insert(header.end(), {"e_oracle", "rel_diff"});
  }
  Csv csv(header);
  Csv cmp({"n", "e_oracle", "e_closed_form", "abs_diff", "rel_diff"});
  for (const auto& l : levels) {
    std::vector<std::string> row{std::to_string(l.n), fmt(l.a_exact), fmt(l.e_exact),
                                 fmt(l.e_approx14), fmt(l.e_semiclassical),
                                 fmt(l.rel_err_approx14()), fmt(l.rel_err_semiclassical()),
                                 fmt(transcendental_root(l.n, B0Variant::Exact)),
                                 fmt(transcendental_root(l.n, B0Variant::Rounded))};
    if (cfg.spectrum.verify) {
      const double eo = oracle[l.n - 1];
      const double diff = std::abs(eo - l.e_exact);
      row.insert(row.end(), {fmt(eo), fmt(diff / std::abs(l.e_exact))});
      cmp.row({std::to_string(l.n), fmt(eo), fmt(l.e_exact), fmt(diff),
               fmt(diff / std::abs(l.e_exact))});
    }
    csv.row(row);
  }
  emit(csv, cfg.out, out);
  if (cfg.spectrum.verify) {
    const std::string path = cfg.spectrum.oracle_out.empty()
                                 ? with_suffix(cfg.out, "_oracle")
                                 : cfg.spectrum.oracle_out;
    if (!path.empty()) emit(cmp, path, out);
  }
}

void cmd_wavefunctions(const RunConfig& cfg, std::ostream& out) {
  const auto& o = cfg.wavefunctions;
  if (o.levels < 1) throw UsageError("--levels must be at least 1");
  if (o.points < 3) throw UsageError("wavefunction grid is empty");
  require_confining(cfg.problem);
  const auto levels = solve_levels_exact(cfg.problem, o.levels);
  std::vector<double> grid;
  if (o.x_max > 0.0) {
    if (!(o.x_min > 0.0) || !(o.x_max > o.x_min)) throw UsageError("need 0 < x_min < x_max");
    grid = linspace(o.x_min, o.x_max, static_cast<std::size_t>(o.points));
  } else {
    grid = default_wavefunction_grid(cfg.problem, levels.back().a_exact,
                                     static_cast<std::size_t>(o.points));
  }
  std::vector<WavefunctionTable> tables;
  std::vector<std::string> header{"x"};
  for (const auto& l : levels) {
    tables.push_back(bound_state_wavefunction(cfg.problem, l, grid));
    header.push_back("psi_" + std::to_string(l.n));
  }
  Csv csv(header);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    std::vector<std::string> row{fmt(grid[i])};
    for (const auto& t : tables) row.push_back(fmt(t.psi[i]));
    csv.row(row);
  }
  emit(csv, cfg.out, out);

  Csv summary({"n", "a_exact", "e_exact", "norm", "nodes"});
  for (std::size_t k = 0; k < levels.size(); ++k) {
    double peak = 0.0;
    for (double v : tables[k].psi) peak = std::max(peak, std::abs(v));
    summary.row({std::to_string(levels[k].n), fmt(levels[k].a_exact), fmt(levels[k].e_exact),
                 fmt(tables[k].norm),
                 std::to_string(count_sign_changes(tables[k].psi, 1e-6 * peak))});
  }
  const std::string path = o.summary_out.empty() ? with_suffix(cfg.out, "_summary")
                                                 : o.summary_out;
  if (!path.empty()) emit(summary, path, out);
}

void cmd_twostate(const RunConfig& cfg, std::ostream& out) {
  const auto& o = cfg.twostate;
  if (!o.pulse) throw UsageError("twostate needs a pulse (--shape and --u0, or a config pulse)");
  const PulseConfig pulse = make_pulse(*o.pulse);
  const TimeSpan span{o.t0, o.t1};
  const auto traj = o.linear ? simulate_linear(pulse, span, o.tol, o.samples)
                             : simulate_nonlinear(pulse, span, {}, o.tol, o.samples);
  Csv csv({"t", "re_a1", "im_a1", "re_a2", "im_a2", "p", "norm_drift"});
  for (std::size_t i = 0; i < traj.t.size(); ++i) {
    const auto& s = traj.state[i];
    csv.row({fmt(traj.t[i]), fmt(s.a1.real()), fmt(s.a1.imag()), fmt(s.a2.real()),
             fmt(s.a2.imag()), fmt(traj.p[i]), fmt(traj.norm_drift[i])});
  }
  emit(csv, cfg.out, out);

  if (!o.sweep_out.empty()) {
    PulseSpec shape = *o.pulse;
    const auto sweep = saturation_sweep(
        [shape](double u0) mutable {
          shape.u0 = u0;
          return make_pulse(shape);
        },
        o.lambdas, span, o.tol);
    Csv s({"lambda", "p_inf_numeric", "p_inf_cubic", "p_inf_asymptotic", "pl_inf", "a0_fit"});
    for (const auto& r : sweep.rows) {
      s.row({fmt(r.lambda), fmt(r.p_inf_numeric), fmt(r.p_inf_cubic), fmt(r.p_inf_asymptotic),
             fmt(r.pl_inf), fmt(sweep.a0)});
    }
    emit(s, o.sweep_out, out);
  }
}

void cmd_specfun(const std::string& fn, const std::string& a, const std::string& b,
                 const std::string& z, const std::string& order, std::ostream& out,
                 const std::string& path) {
  EvalResult r;
  if (fn == "gamma") {
    r = gamma(parse_complex(z));
  } else if (fn == "kummer") {
    r = kummer_1f1(parse_complex(a), parse_complex(b), parse_complex(z));
  } else if (fn == "hermite") {
    r = hermite_nu(parse_complex(order), parse_complex(z));
  } else if (fn == "hermite-derivative") {
    r = hermite_nu_derivative(parse_complex(order), parse_complex(z));
  } else {
    throw UsageError("--fn must be gamma, kummer, hermite or hermite-derivative");
  }
  Csv csv({"re", "im", "abs_error_estimate", "terms_used"});
  csv.row({fmt(r.value.real()), fmt(r.value.imag()), fmt(r.abs_error_estimate),
           std::to_string(r.terms_used)});
  emit(csv, path, out);
}

std::string read_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw UsageError("cannot open config file: " + path);
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

}  // namespace

std::string config_to_json(const RunConfig& c) {
  json j;
  j["problem"] = {{"m", c.problem.m}, {"hbar", c.problem.hbar}, {"v0", c.problem.v0},
                  {"v1", c.problem.v1}};
  j["out"] = c.out;
  j["potential"] = {{"x_min", c.potential.x_min}, {"x_max", c.potential.x_max},
                    {"points", c.potential.points}};
  j["spectrum"] = {{"levels", c.spectrum.levels}, {"verify", c.spectrum.verify},
                   {"oracle_out", c.spectrum.oracle_out}};
  j["wavefunctions"] = {{"levels", c.wavefunctions.levels}, {"x_min", c.wavefunctions.x_min},
                        {"x_max", c.wavefunctions.x_max}, {"points", c.wavefunctions.points},
                        {"summary_out", c.wavefunctions.summary_out}};
  json ts = {{"linear", c.twostate.linear}, {"t0", c.twostate.t0}, {"t1", c.twostate.t1},
             {"tol", c.twostate.tol}, {"samples", c.twostate.samples},
             {"lambdas", c.twostate.lambdas}, {"sweep_out", c.twostate.sweep_out}};
  if (c.twostate.pulse) ts["pulse"] = pulse_json(*c.twostate.pulse);
  j["twostate"] = ts;
  return j.dump(2);
}

RunConfig config_from_json(const std::string& text) {
  RunConfig c;
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw UsageError(std::string("config is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw UsageError("config must be a JSON object");
  try {
    const json& prob = j.contains("problem") ? j.at("problem") : j;
    read(prob, "m", c.problem.m);
    read(prob, "hbar", c.problem.hbar);
    read(prob, "v0", c.problem.v0);
    read(prob, "v1", c.problem.v1);
    read(j, "out", c.out);
    if (j.contains("potential")) {
      const auto& s = j.at("potential");
      read(s, "x_min", c.potential.x_min);
      read(s, "x_max", c.potential.x_max);
      read(s, "points", c.potential.points);
    }
    if (j.contains("spectrum")) {
      const auto& s = j.at("spectrum");
      read(s, "levels", c.spectrum.levels);
      read(s, "verify", c.spectrum.verify);
      read(s, "oracle_out", c.spectrum.oracle_out);
    }
    if (j.contains("wavefunctions")) {
      const auto& s = j.at("wavefunctions");
      read(s, "levels", c.wavefunctions.levels);
      read(s, "x_min", c.wavefunctions.x_min);
      read(s, "x_max", c.wavefunctions.x_max);
      read(s, "points", c.wavefunctions.points);
      read(s, "summary_out", c.wavefunctions.summary_out);
    }
    if (j.contains("twostate")) {
      const auto& s = j.at("twostate");
      read(s, "linear", c.twostate.linear);
      read(s, "t0", c.twostate.t0);
      read(s, "t1", c.twostate.t1);
      read(s, "tol", c.twostate.tol);
      read(s, "samples", c.twostate.samples);
      read(s, "lambdas", c.twostate.lambdas);
      read(s, "sweep_out", c.twostate.sweep_out);
      if (s.contains("pulse") && !s.at("pulse").is_null()) {
        PulseSpec p;
        const auto& ps = s.at("pulse");
        read(ps, "shape", p.shape);
        read(ps, "u0", p.u0);
        read(ps, "delta0", p.delta0);
        read(ps, "asymmetry", p.asymmetry);
        c.twostate.pulse = p;
      }
    }
  } catch (const json::exception& e) {
    throw UsageError(std::string("config field has the wrong type: ") + e.what());
  }
  return c;
}

PulseConfig make_pulse(const PulseSpec& spec) {
  if (spec.shape == "constant") return constant_pulse(spec.u0, spec.delta0);
  if (spec.shape == "sech") return sech_pulse(spec.u0, spec.delta0, spec.asymmetry);
  throw UsageError("pulse shape must be constant or sech");
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Closed-form solutions, spectrum and two-state dynamics for the "
               "x^(2/3) well with a 91/72 centrifugal barrier"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string config_path, out_path, preset;
  double m = 0, hbar = 0, v0 = 0, v1 = 0;
  int levels = 0;
  auto* o_config = app.add_option("--config", config_path, "JSON run configuration");
  auto* o_out = app.add_option("--out", out_path, "Output CSV path (default: stdout)");
  auto* o_preset = app.add_option("--preset", preset, "Parameter preset (paper: m=hbar=1, v0=0, v1=1)")
                       ->check(CLI::IsMember({"paper"}));
  auto* o_m = app.add_option("--m", m, "Mass");
  auto* o_hbar = app.add_option("--hbar", hbar, "Reduced Planck constant");
  auto* o_v0 = app.add_option("--v0", v0, "Constant potential offset");
  auto* o_v1 = app.add_option("--v1", v1, "Strength of the x^(2/3) term");
  auto* o_levels = app.add_option("--levels", levels, "Number of bound states");

  auto* potential = app.add_subcommand("potential", "Sample V(x) and the v1 = 0 baseline");
  double px_min = 0, px_max = 0;
  int ppoints = 0;
  auto* o_px_min = potential->add_option("--x-min", px_min);
  auto* o_px_max = potential->add_option("--x-max", px_max);
  auto* o_ppoints = potential->add_option("--points", ppoints);

  auto* spectrum = app.add_subcommand("spectrum", "Exact, approximate and semiclassical levels");
  bool verify = false;
  std::string oracle_out;
  spectrum->add_flag("--verify", verify, "Add the shooting-method cross-check");
  auto* o_oracle_out = spectrum->add_option("--oracle-out", oracle_out);

  auto* wave = app.add_subcommand("wavefunctions", "Normalized bound-state wavefunctions");
  double wx_min = 0, wx_max = 0;
  int wpoints = 0;
  std::string summary_out;
  auto* o_wx_min = wave->add_option("--x-min", wx_min);
  auto* o_wx_max = wave->add_option("--x-max", wx_max);
  auto* o_wpoints = wave->add_option("--points", wpoints);
  auto* o_summary = wave->add_option("--summary-out", summary_out);

  auto* twostate = app.add_subcommand("twostate", "Nonlinear two-state dynamics and saturation sweep");
  std::string shape, sweep_out;
  double u0 = 0, delta0 = 0, asym = 0, t0 = 0, t1 = 0, tol = 0;
  int samples = 0;
  bool linear = false;
  auto* o_shape = twostate->add_option("--shape", shape, "constant or sech")
                      ->check(CLI::IsMember({"constant", "sech"}));
  auto* o_u0 = twostate->add_option("--u0", u0, "Peak Rabi frequency");
  auto* o_delta0 = twostate->add_option("--delta0", delta0, "Detuning parameter");
  auto* o_asym = twostate->add_option("--asymmetry", asym, "Detuning asymmetry (sech)");
  auto* o_t0 = twostate->add_option("--t0", t0);
  auto* o_t1 = twostate->add_option("--t1", t1);
  auto* o_tol = twostate->add_option("--tol", tol);
  auto* o_samples = twostate->add_option("--samples", samples);
  twostate->add_flag("--linear", linear, "Integrate the linear counterpart instead");
  auto* o_sweep = twostate->add_option("--sweep-out", sweep_out, "Write the lambda sweep here");

  auto* specfun = app.add_subcommand("specfun-eval", "Evaluate one special function");
  std::string fn, fa = "0", fb = "1", fz = "0", forder = "0";
  specfun->add_option("--fn", fn, "gamma, kummer, hermite, hermite-derivative")->required();
  specfun->add_option("--a", fa);
  specfun->add_option("--b", fb);
  specfun->add_option("--z", fz);
  specfun->add_option("--order", forder);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? 0 : 1;
  }

  try {
    RunConfig cfg = o_config->count() ? config_from_json(read_file(config_path)) : RunConfig{};
    if (o_preset->count()) cfg.problem = PhysicalParams{};
    if (o_m->count()) cfg.problem.m = m;
    if (o_hbar->count()) cfg.problem.hbar = hbar;
    if (o_v0->count()) cfg.problem.v0 = v0;
    if (o_v1->count()) cfg.problem.v1 = v1;
    if (o_out->count()) cfg.out = out_path;
    if (o_levels->count()) {
      cfg.spectrum.levels = levels;
      cfg.wavefunctions.levels = levels;
    }
    if (o_px_min->count()) cfg.potential.x_min = px_min;
    if (o_px_max->count()) cfg.potential.x_max = px_max;
    if (o_ppoints->count()) cfg.potential.points = ppoints;
    if (verify) cfg.spectrum.verify = true;
    if (o_oracle_out->count()) cfg.spectrum.oracle_out = oracle_out;
    if (o_wx_min->count()) cfg.wavefunctions.x_min = wx_min;
    if (o_wx_max->count()) cfg.wavefunctions.x_max = wx_max;
    if (o_wpoints->count()) cfg.wavefunctions.points = wpoints;
    if (o_summary->count()) cfg.wavefunctions.summary_out = summary_out;

    auto& ts = cfg.twostate;
    if (o_shape->count() || o_u0->count() || o_delta0->count() || o_asym->count()) {
      if (!ts.pulse && !(o_shape->count() && o_u0->count())) {
        throw UsageError("a pulse needs both --shape and --u0");
      }
      PulseSpec p = ts.pulse.value_or(PulseSpec{});
      if (o_shape->count()) p.shape = shape;
      if (o_u0->count()) p.u0 = u0;
      if (o_delta0->count()) p.delta0 = delta0;
      if (o_asym->count()) p.asymmetry = asym;
      ts.pulse = p;
    }
    if (o_t0->count()) ts.t0 = t0;
    if (o_t1->count()) ts.t1 = t1;
    if (o_tol->count()) ts.tol = tol;
    if (o_samples->count()) ts.samples = samples;
    if (linear) ts.linear = true;
    if (o_sweep->count()) ts.sweep_out = sweep_out;

    if (potential->parsed()) cmd_potential(cfg, out);
    if (spectrum->parsed()) cmd_spectrum(cfg, out);
    if (wave->parsed()) cmd_wavefunctions(cfg, out);
    if (twostate->parsed()) cmd_twostate(cfg, out);
    if (specfun->parsed()) cmd_specfun(fn, fa, fb, fz, forder, out, cfg.out);
  } catch (const NumericalError& e) {
    err << "numerical error: " << e.what() << '\n';
    return 2;
  } catch (const DomainError& e) {
    err << "invalid input: " << e.what() << '\n';
    return 1;
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}

}  // namespace heunwell::cli
