#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "heunwell/potential.hpp"
#include "heunwell/twostate.hpp"

namespace heunwell::cli {

struct PulseSpec {
  std::string shape = "sech";  // "constant" or "sech"
  double u0 = 1.0;
  double delta0 = 10.0;     // sech: detuning scale; constant: detuning rate
  double asymmetry = 0.25;  // sech only
};

struct RunConfig {
  PhysicalParams problem;
  std::string out;

  struct {
    double x_min = 0.05;
    double x_max = 6.0;
    int points = 200;
  } potential;

  struct {
    int levels = 5;
    bool verify = false;
    std::string oracle_out;
  } spectrum;

  struct {
    int levels = 3;
    double x_min = 0.0;  // 0: automatic grid
    double x_max = 0.0;
    int points = 1201;
    std::string summary_out;
  } wavefunctions;

  struct {
    std::optional<PulseSpec> pulse;
    bool linear = false;
    double t0 = -12.0;
    double t1 = 12.0;
    double tol = 1e-10;
    int samples = 2001;
    std::vector<double> lambdas{10, 15, 20, 30, 40, 50, 70, 100, 150, 200, 250, 300, 400};
    std::string sweep_out;
  } twostate;
};

/// Lossless JSON form; problem fields may also sit at the top level.
std::string config_to_json(const RunConfig& cfg);
RunConfig config_from_json(const std::string& text);

PulseConfig make_pulse(const PulseSpec& spec);

/// Entry point of the heunwell tool. Returns the process exit code:
/// 0 success, 1 usage/validation/IO error, 2 numerical failure.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace heunwell::cli
