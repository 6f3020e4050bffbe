#include "qp/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iterator>
#include <limits>
#include <map>
#include <ostream>
#include <sstream>

#include "qp/cantor.hpp"
#include "qp/ids.hpp"
#include "qp/kernels.hpp"
#include "qp/periodic.hpp"
#include "qp/scattering.hpp"
#include "qp/tracemap.hpp"
#include "qp/transfer.hpp"

namespace qp::cli {

using Json = nlohmann::ordered_json;

namespace {

const std::vector<std::string> kCommands = {"spectrum", "butterfly", "ids",  "lyapunov",
                                            "resistance", "tracemap", "gaps", "cantor"};
const std::vector<std::string> kModels = {"free",         "constant",    "fibonacci",
                                          "sturmian",     "almost-mathieu", "circle",
                                          "thue-morse",   "period-doubling", "custom",
                                          "periodic"};

}  // namespace

std::string format_number(double x) {
  if (x == 0.0) return "0";
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

namespace {

std::string exact_number(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

Json json_number(double x) {
  if (!std::isfinite(x)) return nullptr;
  return std::strtod(format_number(x).c_str(), nullptr);
}

Json json_bands(const BandSet& bands) {
  Json arr = Json::array();
  for (const Band& b : bands.bands) arr.push_back({json_number(b.lo), json_number(b.hi)});
  return arr;
}

Json json_numbers(const std::vector<double>& xs) {
  Json arr = Json::array();
  for (double x : xs) arr.push_back(json_number(x));
  return arr;
}

// Tabular output rendered as CSV or as {"columns": [...], "rows": [[...]]}.
struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
};

void write_csv(const Table& t, std::ostream& os) {
  for (std::size_t i = 0; i < t.columns.size(); ++i) os << (i ? "," : "") << t.columns[i];
  os << '\n';
  for (const auto& row : t.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << format_number(row[i]);
    os << '\n';
  }
}

std::int64_t parse_int(const std::string& s, const char* what) {
  std::size_t pos = 0;
  std::int64_t v = 0;
  try {
    v = std::stoll(s, &pos);
  } catch (const std::exception&) {
    throw UsageError(std::string("bad integer in ") + what + ": '" + s + "'");
  }
  if (pos != s.size()) throw UsageError(std::string("bad integer in ") + what + ": '" + s + "'");
  return v;
}

double parse_double(const std::string& s, const char* what) {
  std::size_t pos = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &pos);
  } catch (const std::exception&) {
    throw UsageError(std::string("bad number in ") + what + ": '" + s + "'");
  }
  if (pos != s.size()) throw UsageError(std::string("bad number in ") + what + ": '" + s + "'");
  return v;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream is(s);
  while (std::getline(is, cur, sep)) {
    const auto b = cur.find_first_not_of(" \t");
    const auto e = cur.find_last_not_of(" \t");
    out.push_back(b == std::string::npos ? "" : cur.substr(b, e - b + 1));
  }
  return out;
}

Alpha parse_alpha(const std::string& s) {
  if (s.empty()) return Alpha::real(kGoldenMean);
  const auto slash = s.find('/');
  if (slash != std::string::npos) {
    return Alpha::rational(parse_int(s.substr(0, slash), "--alpha"),
                           parse_int(s.substr(slash + 1), "--alpha"));
  }
  return Alpha::real(parse_double(s, "--alpha"));
}

std::map<char, double> parse_letter_values(const std::string& s, const SubstitutionRule& rule,
                                           double lambda) {
  std::map<char, double> out;
  if (s.empty()) {
    for (char c : rule.alphabet()) out[c] = 0.0;
    out[rule.alphabet().front()] = lambda;
    return out;
  }
  for (const auto& item : split(s, ',')) {
    const auto eq = item.find('=');
    if (eq != 1) throw UsageError("--letter-values expects entries like a=1");
    out[item[0]] = parse_double(item.substr(2), "--letter-values");
  }
  for (char c : rule.alphabet()) {
    if (!out.count(c)) throw UsageError(std::string("--letter-values misses letter ") + c);
  }
  return out;
}

std::vector<std::int64_t> parse_lengths(const std::string& s) {
  std::vector<std::int64_t> out;
  if (s.find(':') != std::string::npos) {
    const auto parts = split(s, ':');
    if (parts.size() != 2 && parts.size() != 3) throw UsageError("--lengths expects a:b or a:b:step");
    const auto lo = parse_int(parts[0], "--lengths");
    const auto hi = parse_int(parts[1], "--lengths");
    const auto step = parts.size() == 3 ? parse_int(parts[2], "--lengths") : 1;
    if (lo < 1 || hi < lo || step < 1) throw UsageError("--lengths range must satisfy 1 <= a <= b");
    for (std::int64_t L = lo; L <= hi; L += step) out.push_back(L);
  } else {
    for (const auto& p : split(s, ',')) out.push_back(parse_int(p, "--lengths"));
  }
  for (std::size_t i = 0; i < out.size(); ++i) {
    if (out[i] < 1 || (i > 0 && out[i] <= out[i - 1]))
      throw UsageError("--lengths must be strictly increasing and >= 1");
  }
  return out;
}

Leads parse_leads(const std::string& s) {
  if (s == "pi-half") return Leads::pi_half();
  if (s == "zero") return Leads::fixed(0.0, 0.0);
  const auto parts = split(s, ',');
  if (parts.size() != 2) throw UsageError("--leads expects pi-half, zero or w1,w2");
  return Leads::fixed(parse_double(parts[0], "--leads"), parse_double(parts[1], "--leads"));
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read " + path);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

bool is_alpha_kind(PotentialKind k) {
  return k == PotentialKind::AlmostMathieu || k == PotentialKind::Sturmian ||
         k == PotentialKind::Circle;
}

}  // namespace

PotentialSpec build_spec(const RunConfig& cfg) {
  const std::string& m = cfg.model;
  PotentialSpec spec;
  if (m == "free") {
    spec = PotentialSpec::constant(0.0);
  } else if (m == "constant") {
    spec = PotentialSpec::constant(cfg.values.empty() ? 0.0 : cfg.values.front());
  } else if (m == "fibonacci") {
    spec = PotentialSpec::sturmian(Alpha::real(kGoldenMean), cfg.lambda, 0.0);
  } else if (m == "sturmian") {
    spec = PotentialSpec::sturmian(parse_alpha(cfg.alpha), cfg.lambda, cfg.omega,
                                   cfg.rounding == "ceil" ? Rounding::Ceil : Rounding::Floor);
  } else if (m == "almost-mathieu") {
    spec = PotentialSpec::almost_mathieu(parse_alpha(cfg.alpha), cfg.lambda, cfg.omega);
  } else if (m == "circle") {
    spec = PotentialSpec::circle(parse_alpha(cfg.alpha), cfg.lambda, cfg.omega);
  } else if (m == "thue-morse" || m == "period-doubling" || m == "custom") {
    SubstitutionRule rule;
    if (m == "thue-morse") {
      rule = SubstitutionRule::thue_morse();
    } else if (m == "period-doubling") {
      rule = SubstitutionRule::period_doubling();
    } else {
      if (cfg.rule_file.empty()) throw UsageError("--model custom needs --rule-file");
      rule = SubstitutionRule::parse(read_text_file(cfg.rule_file));
    }
    spec = PotentialSpec::substitution(rule, parse_letter_values(cfg.letter_values, rule, cfg.lambda));
  } else if (m == "periodic") {
    if (cfg.values.empty()) throw UsageError("--model periodic needs --values");
    spec = PotentialSpec::explicit_periodic(cfg.values);
  } else {
    throw UsageError("unknown model " + m);
  }
  spec.validate();
  return spec;
}

Action parse_args(const std::vector<std::string>& args, RunConfig& cfg, std::ostream& help) {
  CLI::App app{"Spectral and transport quantities of 1D discrete Schroedinger operators",
               "qpspec"};
  app.set_config("--config", "", "Read `key = value` defaults from a file");
  app.allow_config_extras(CLI::config_extras_mode::error);
  bool dump = false;

  app.add_option("command", cfg.command, "Subcommand")->required()->check(CLI::IsMember(kCommands));
  app.add_option("--model", cfg.model, "Potential family")->check(CLI::IsMember(kModels));
  app.add_option("--alpha", cfg.alpha, "Frequency, decimal or p/q (default golden mean)");
  app.add_option("--omega", cfg.omega, "Phase");
  app.add_option("--lambda", cfg.lambda, "Coupling");
  app.add_option("--values", cfg.values, "Explicit period (periodic) or level (constant)")
      ->delimiter(',');
  app.add_option("--letter-values", cfg.letter_values, "Letter values, e.g. a=1,b=0");
  app.add_option("--rule-file", cfg.rule_file, "Substitution rule file for --model custom");
  app.add_option("--rounding", cfg.rounding, "Sturmian rounding")
      ->check(CLI::IsMember({"floor", "ceil"}));
  app.add_option("--approx-q", cfg.approx_q, "Period of the approximant (0: default)")
      ->check(CLI::NonNegativeNumber);
  app.add_option("--size", cfg.size, "Half-width L of the IDS window")->check(CLI::PositiveNumber);
  app.add_option("--emin", cfg.emin, "Lowest energy");
  app.add_option("--emax", cfg.emax, "Highest energy");
  app.add_option("--grid", cfg.grid, "Number of grid points")->check(CLI::Range(2, 10000000));
  app.add_option("--n", cfg.n, "Sample length for Lyapunov estimates")->check(CLI::PositiveNumber);
  app.add_option("--lengths", cfg.lengths, "Sample lengths a:b, a:b:step or a,b,c");
  app.add_option("--leads", cfg.leads, "pi-half, zero or w1,w2");
  app.add_option("--energy", cfg.energy, "Energy");
  app.add_option("--steps", cfg.steps, "Trace map steps")->check(CLI::Range(0, 100000));
  app.add_option("--qmax", cfg.qmax, "Largest denominator")->check(CLI::Range(1, 2000));
  app.add_option("--depth", cfg.depth, "Bisection depth")->check(CLI::Range(1, 40));
  app.add_option("--nmax", cfg.nmax, "Trace map steps per cell")->check(CLI::Range(1, 100000));
  app.add_option("--kmax", cfg.kmax, "Label range |k| <= kmax (hierarchical: n_max)")
      ->check(CLI::Range(0, 100000));
  app.add_option("--tol", cfg.tol, "Gap label tolerance")->check(CLI::NonNegativeNumber);
  app.add_option("--method", cfg.method, "spectrum method")
      ->check(CLI::IsMember({"floquet", "bounded", "union"}));
  app.add_option("--boundary", cfg.boundary, "IDS boundary condition")
      ->check(CLI::IsMember({"dirichlet", "periodic", "antiperiodic"}));
  app.add_option("--labels", cfg.labels, "Gap label set")
      ->check(CLI::IsMember({"auto", "periodic", "sturmian", "hierarchical"}));
  app.add_option("--function", cfg.function, "cantor output")
      ->check(CLI::IsMember({"alpha", "fourier", "sturmian-labels", "hierarchical"}));
  app.add_option("--xmin", cfg.xmin, "Lower end of the cantor argument range");
  app.add_option("--xmax", cfg.xmax, "Upper end of the cantor argument range");
  app.add_option("--factors", cfg.factors, "Product factors in the Fourier transform")
      ->check(CLI::Range(1, 100000));
  app.add_option("--format", cfg.format, "Output format")->check(CLI::IsMember({"csv", "json"}));
  app.add_option("--out", cfg.out, "Output file (default stdout)");
  app.add_option("--threads", cfg.threads, "OpenMP threads (0: all cores)")
      ->check(CLI::NonNegativeNumber);
  app.add_flag("--dump-config", dump, "Print the effective configuration and exit");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    help << app.help();
    return Action::Help;
  }
  if (cfg.emin >= cfg.emax && cfg.command != "cantor" && cfg.command != "tracemap")
    throw UsageError("--emin must be below --emax");
  return dump ? Action::DumpConfig : Action::Run;
}

std::string dump_config(const RunConfig& c) {
  std::ostringstream os;
  auto str = [&](const char* key, const std::string& v) {
    if (!v.empty()) os << key << " = \"" << v << "\"\n";
  };
  auto num = [&](const char* key, double v) { os << key << " = " << exact_number(v) << '\n'; };
  auto integer = [&](const char* key, std::int64_t v) { os << key << " = " << v << '\n'; };
  str("command", c.command);
  str("model", c.model);
  str("alpha", c.alpha);
  num("omega", c.omega);
  num("lambda", c.lambda);
  if (!c.values.empty()) {
    os << "values = [";
    for (std::size_t i = 0; i < c.values.size(); ++i) os << (i ? "," : "") << exact_number(c.values[i]);
    os << "]\n";
  }
  str("letter-values", c.letter_values);
  str("rule-file", c.rule_file);
  str("rounding", c.rounding);
  integer("approx-q", c.approx_q);
  integer("size", c.size);
  num("emin", c.emin);
  num("emax", c.emax);
  integer("grid", c.grid);
  integer("n", c.n);
  str("lengths", c.lengths);
  str("leads", c.leads);
  num("energy", c.energy);
  integer("steps", c.steps);
  integer("qmax", c.qmax);
  integer("depth", c.depth);
  integer("nmax", c.nmax);
  integer("kmax", c.kmax);
  num("tol", c.tol);
  str("method", c.method);
  str("boundary", c.boundary);
  str("labels", c.labels);
  str("function", c.function);
  num("xmin", c.xmin);
  num("xmax", c.xmax);
  integer("factors", c.factors);
  str("format", c.format);
  str("out", c.out);
  integer("threads", c.threads);
  return os.str();
}

namespace {

PeriodicPotential approximant(const RunConfig& cfg, const PotentialSpec& spec) {
  switch (spec.kind) {
    case PotentialKind::Constant:
      return {{spec.values.front()}};
    case PotentialKind::ExplicitPeriodic:
      return {spec.values};
    case PotentialKind::Substitution: {
      if (cfg.approx_q > 0) return periodic_approximant_q(spec, cfg.approx_q);
      // longest iterate of the seed not exceeding 256 letters
      int order = 1;
      while (spec.rule->iterate(spec.seed_letter(), order + 1).size() <= 256) ++order;
      return periodic_approximant(spec, order);
    }
    default: {
      if (cfg.approx_q > 0) return periodic_approximant_q(spec, cfg.approx_q);
      // largest convergent denominator up to 89 (89 itself for the golden mean)
      const auto cs = convergents(spec.alpha, 89);
      return periodic_approximant_q(spec, cs.empty() ? 1 : cs.back().q);
    }
  }
}

std::vector<double> energy_grid(const RunConfig& cfg) {
  return linspace(cfg.emin, cfg.emax, static_cast<std::size_t>(cfg.grid));
}

void emit_table(const RunConfig& cfg, const Table& t, Json meta, std::ostream& os) {
  if (cfg.format == "csv") {
    write_csv(t, os);
    return;
  }
  Json cols = Json::array();
  for (const auto& c : t.columns) cols.push_back(c);
  Json rows = Json::array();
  for (const auto& r : t.rows) rows.push_back(json_numbers(r));
  meta["columns"] = cols;
  meta["rows"] = rows;
  os << meta.dump(2) << '\n';
}

void cmd_spectrum(const RunConfig& cfg, std::ostream& os) {
  const PotentialSpec spec = build_spec(cfg);
  BandSet bands;
  Json j;
  j["model"] = cfg.model;
  if (cfg.method == "bounded") {
    if (cfg.model != "fibonacci") throw UsageError("--method bounded supports --model fibonacci");
    bands = bounded_spectrum(cfg.lambda, cfg.emin, cfg.emax, cfg.depth, cfg.nmax);
    j["method"] = "bounded";
    j["depth"] = cfg.depth;
    j["nmax"] = cfg.nmax;
  } else if (cfg.method == "union") {
    if (spec.kind != PotentialKind::AlmostMathieu)
      throw UsageError("--method union supports --model almost-mathieu");
    const auto q = static_cast<std::int64_t>(approximant(cfg, spec).period());
    bands = gap_labels(phase_union_spectrum(spec, q), q);
    j["method"] = "union";
    j["q"] = q;
  } else {
    const PeriodicPotential p = approximant(cfg, spec);
    bands = gap_labels(band_spectrum(p), static_cast<std::int64_t>(p.period()));
    j["method"] = "floquet";
    j["q"] = p.period();
  }
  if (cfg.format == "csv") {
    Table t{{"band_lo", "band_hi"}, {}};
    for (const Band& b : bands.bands) t.rows.push_back({b.lo, b.hi});
    write_csv(t, os);
    return;
  }
  j["bands"] = json_bands(bands);
  j["gap_labels"] = json_numbers(bands.gap_labels);
  j["total_bandwidth"] = json_number(total_bandwidth(bands));
  os << j.dump(2) << '\n';
}

void cmd_butterfly(const RunConfig& cfg, std::ostream& os) {
  const auto rows = butterfly(cfg.lambda, cfg.qmax, cfg.omega);
  if (cfg.format == "csv") {
    Table t{{"p", "q", "band_lo", "band_hi"}, {}};
    for (const auto& r : rows)
      for (const Band& b : r.bands.bands)
        t.rows.push_back({static_cast<double>(r.p), static_cast<double>(r.q), b.lo, b.hi});
    write_csv(t, os);
    return;
  }
  Json j;
  j["lambda"] = json_number(cfg.lambda);
  j["omega"] = json_number(cfg.omega);
  Json arr = Json::array();
  for (const auto& r : rows) arr.push_back({{"p", r.p}, {"q", r.q}, {"bands", json_bands(r.bands)}});
  j["rows"] = arr;
  os << j.dump(2) << '\n';
}

void cmd_ids(const RunConfig& cfg, std::ostream& os) {
  const PotentialSpec spec = build_spec(cfg);
  const auto grid = energy_grid(cfg);
  const IdsCurve ids =
      cfg.boundary == "dirichlet"
          ? ids_curve(spec, spec.omega, cfg.size, grid)
          : ids_curve_ring(spec, spec.omega, cfg.size, cfg.boundary == "periodic" ? 1.0 : -1.0, grid);
  Table t{{"E", "N"}, {}};
  for (std::size_t i = 0; i < grid.size(); ++i) t.rows.push_back({ids.energies[i], ids.values[i]});
  emit_table(cfg, t, {{"sites", ids.size}, {"boundary", cfg.boundary}}, os);
}

void cmd_lyapunov(const RunConfig& cfg, std::ostream& os) {
  const PotentialSpec spec = build_spec(cfg);
  const auto grid = energy_grid(cfg);
  const auto values = sample_potential(spec, 1, cfg.n);
  const auto gamma = omp::lyapunov_grid(values, grid);
  Table t{{"E", "gamma"}, {}};
  for (std::size_t i = 0; i < grid.size(); ++i) t.rows.push_back({grid[i], gamma[i]});
  emit_table(cfg, t, {{"n", cfg.n}}, os);
}

void cmd_resistance(const RunConfig& cfg, std::ostream& os) {
  const PotentialSpec spec = build_spec(cfg);
  const auto lengths = parse_lengths(cfg.lengths);
  const auto profile = resistance_profile(spec, cfg.energy, lengths, parse_leads(cfg.leads));
  Table t{{"L", "log10R"}, {}};
  for (const auto& p : profile) t.rows.push_back({static_cast<double>(p.length), p.log10_resistance});
  emit_table(cfg, t, {{"E", json_number(cfg.energy)}, {"leads", cfg.leads}}, os);
}

void cmd_tracemap(const RunConfig& cfg, std::ostream& os) {
  if (cfg.model == "fibonacci") {
    const int steps = std::max(cfg.steps, 1);
    const TraceOrbit orbit = fibonacci_trace_orbit(cfg.energy, cfg.lambda, steps);
    Table t{{"n", "tau", "invariant"}, {}};
    for (int n = -1; n <= cfg.steps; ++n)
      t.rows.push_back({static_cast<double>(n), orbit.tau(n).value(), orbit.invariant});
    Json meta;
    meta["E"] = json_number(cfg.energy);
    meta["lambda"] = json_number(cfg.lambda);
    meta["invariant"] = json_number(orbit.invariant);
    meta["escape_index"] = orbit.escape_index ? Json(*orbit.escape_index) : Json(nullptr);
    emit_table(cfg, t, meta, os);
    return;
  }
  const PotentialSpec spec = build_spec(cfg);
  if (spec.kind != PotentialKind::Substitution)
    throw UsageError("tracemap needs --model fibonacci or a substitution model");
  const LetterOrbit orbit = letter_matrix_orbit(*spec.rule, spec.letter_values, cfg.energy, cfg.steps);
  Table t{{"n"}, {}};
  for (char c : orbit.alphabet) t.columns.push_back(std::string("tr_") + c);
  for (std::size_t n = 0; n < orbit.traces.size(); ++n) {
    std::vector<double> row{static_cast<double>(n)};
    for (const LogReal& x : orbit.traces[n]) row.push_back(x.value());
    t.rows.push_back(std::move(row));
  }
  emit_table(cfg, t, {{"E", json_number(cfg.energy)}, {"rule", spec.rule->to_string()}}, os);
}

void cmd_gaps(const RunConfig& cfg, std::ostream& os) {
  const PotentialSpec spec = build_spec(cfg);
  const PeriodicPotential p = approximant(cfg, spec);
  const auto L = static_cast<std::int64_t>(p.period());
  const BandSet bands = gap_labels(band_spectrum(p), L);

  std::vector<double> mids;
  for (std::size_t i = 0; i + 1 < bands.bands.size(); ++i)
    mids.push_back(0.5 * (bands.bands[i].hi + bands.bands[i + 1].lo));
  IdsCurve ids;
  if (!mids.empty()) ids = ids_curve(PotentialSpec::explicit_periodic(p.values), 0.0, cfg.size, mids);

  std::string which = cfg.labels;
  if (which == "auto") which = is_alpha_kind(spec.kind) ? "sturmian" : "periodic";
  LabelSet labels;
  if (which == "sturmian") {
    if (!is_alpha_kind(spec.kind)) throw UsageError("--labels sturmian needs an alpha model");
    labels = sturmian_label_set(spec.alpha, cfg.kmax);
  } else if (which == "hierarchical") {
    labels = hierarchical_labels(cfg.kmax);
  } else {
    std::vector<double> v;
    for (std::int64_t k = 0; k < L; ++k) v.push_back(static_cast<double>(k) / static_cast<double>(L));
    labels = make_label_set(std::move(v));
  }
  const auto report = match_gap_labels(bands, ids, labels.values, cfg.tol);
  Table t{{"gap_lo", "gap_hi", "ids", "label", "deviation", "within_tol"}, {}};
  for (const auto& g : report)
    t.rows.push_back({g.gap_lo, g.gap_hi, g.ids_value, g.label, g.deviation, g.within_tol ? 1.0 : 0.0});
  emit_table(cfg, t, {{"q", L}, {"labels", which}, {"tol", json_number(cfg.tol)}}, os);
}

void cmd_cantor(const RunConfig& cfg, std::ostream& os) {
  Table t;
  if (cfg.function == "alpha" || cfg.function == "fourier") {
    const auto xs = linspace(cfg.xmin, cfg.xmax, static_cast<std::size_t>(cfg.grid));
    if (cfg.function == "alpha") {
      t.columns = {"x", "alpha"};
      for (double x : xs) t.rows.push_back({x, cantor_alpha(x)});
    } else {
      t.columns = {"t", "re", "im", "abs"};
      for (double x : xs) {
        const auto f = cantor_fourier(x, cfg.factors);
        t.rows.push_back({x, f.real(), f.imag(), std::abs(f)});
      }
    }
  } else {
    const LabelSet s = cfg.function == "hierarchical" ? hierarchical_labels(cfg.kmax)
                                                      : sturmian_label_set(parse_alpha(cfg.alpha), cfg.kmax);
    t.columns = {"label"};
    for (double v : s.values) t.rows.push_back({v});
  }
  emit_table(cfg, t, {{"function", cfg.function}}, os);
}

void dispatch(const RunConfig& cfg, std::ostream& os) {
  if (cfg.command == "spectrum") return cmd_spectrum(cfg, os);
  if (cfg.command == "butterfly") return cmd_butterfly(cfg, os);
  if (cfg.command == "ids") return cmd_ids(cfg, os);
  if (cfg.command == "lyapunov") return cmd_lyapunov(cfg, os);
  if (cfg.command == "resistance") return cmd_resistance(cfg, os);
  if (cfg.command == "tracemap") return cmd_tracemap(cfg, os);
  if (cfg.command == "gaps") return cmd_gaps(cfg, os);
  if (cfg.command == "cantor") return cmd_cantor(cfg, os);
  throw UsageError("unknown command " + cfg.command);
}

void write_output(const RunConfig& cfg, const std::string& text, std::ostream& out) {
  if (cfg.out.empty()) {
    out << text;
    return;
  }
  std::ofstream f(cfg.out, std::ios::binary);
  if (!f) throw IoError("cannot open " + cfg.out + " for writing");
  f << text;
  f.flush();
  if (!f) throw IoError("write to " + cfg.out + " failed");
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  RunConfig cfg;
  try {
    const Action action = parse_args(args, cfg, out);
    if (action == Action::Help) return kExitOk;
    if (action == Action::DumpConfig) {
      write_output(cfg, dump_config(cfg), out);
      return kExitOk;
    }
    set_num_threads(cfg.threads);
    std::ostringstream buf;
    dispatch(cfg, buf);
    write_output(cfg, buf.str(), out);
    return kExitOk;
  } catch (const CLI::FileError& e) {
    err << "qpspec: " << e.what() << '\n';
    return kExitIo;
  } catch (const CLI::ParseError& e) {
    err << "qpspec: " << e.what() << '\n';
    return kExitUsage;
  } catch (const IoError& e) {
    err << "qpspec: " << e.what() << '\n';
    return kExitIo;
  } catch (const std::exception& e) {
    err << "qpspec: " << e.what() << '\n';
    return kExitUsage;
  }
}

}  // namespace qp::cli
