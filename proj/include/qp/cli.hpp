#pragma once

#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "qp/potentials.hpp"

namespace qp::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitIo = 3;

struct RunConfig {
  std::string command;
  // model
  std::string model = "fibonacci";
  std::string alpha;  // empty: golden mean; "p/q" keeps the value exact
  double omega = 0.0;
  double lambda = 1.0;
  std::vector<double> values;
  std::string letter_values;  // "a=1,b=0"; default f(first letter) = lambda, others 0
  std::string rule_file;
  std::string rounding = "floor";
  std::int64_t approx_q = 0;  // 0: model default
  // numerics
  std::int64_t size = 1000;
  double emin = -5.0;
  double emax = 5.0;
  std::int64_t grid = 400;
  std::int64_t n = 10000;
  std::string lengths = "1:100";
  std::string leads = "pi-half";
  double energy = 0.0;
  int steps = 10;
  std::int64_t qmax = 20;
  int depth = 12;
  int nmax = 25;
  int kmax = 6;
  double tol = 0.02;
  std::string method = "floquet";
  std::string boundary = "dirichlet";
  std::string labels = "auto";
  std::string function = "alpha";
  double xmin = 0.0;
  double xmax = 1.0;
  int factors = 60;
  // output
  std::string format = "csv";
  std::string out;
  int threads = 0;

  bool operator==(const RunConfig&) const = default;
};

// Thrown for invalid flag values that CLI11 cannot reject by itself.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Parses `qpspec <command> [flags]` (args exclude the program name).  A
// `--config FILE` of `key = value` lines supplies defaults; flags override it.
// Help text goes to `help`.
enum class Action { Run, Help, DumpConfig };
Action parse_args(const std::vector<std::string>& args, RunConfig& cfg, std::ostream& help);

// `key = value` text that parse_args reads back into an equal RunConfig.
std::string dump_config(const RunConfig& cfg);

PotentialSpec build_spec(const RunConfig& cfg);

// Executes the command and writes its CSV/JSON output to `out` (or to the
// --out file).  Never throws; maps failures to exit codes 2 and 3.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

// "%.12g", with -0 printed as 0
std::string format_number(double x);

}  // namespace qp::cli
