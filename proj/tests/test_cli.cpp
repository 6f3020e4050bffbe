#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <sstream>

#include "qp/cli.hpp"

using namespace qp::cli;
using nlohmann::json;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result call(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = run(args, out, err);
  return {code, out.str(), err.str()};
}

std::vector<std::vector<double>> csv_rows(const std::string& text, std::string* header) {
  std::istringstream in(text);
  std::string line;
  std::getline(in, line);
  if (header) *header = line;
  std::vector<std::vector<double>> rows;
  while (std::getline(in, line)) {
    std::vector<double> row;
    std::istringstream cells(line);
    std::string cell;
    while (std::getline(cells, cell, ',')) row.push_back(std::stod(cell));
    rows.push_back(row);
  }
  return rows;
}

std::filesystem::path temp_path(const std::string& name) {
  return std::filesystem::temp_directory_path() / ("qpspec_test_" + name);
}

const std::vector<std::vector<std::string>> kCommandLines = {
    {"spectrum", "--model", "fibonacci", "--lambda", "2", "--approx-q", "89", "--format", "json"},
    {"spectrum", "--model", "almost-mathieu", "--lambda", "4", "--method", "union", "--approx-q", "34"},
    {"spectrum", "--model", "fibonacci", "--lambda", "2", "--method", "bounded", "--emin", "-4",
     "--emax", "4", "--depth", "10"},
    {"butterfly", "--lambda", "2", "--qmax", "8", "--omega", "0"},
    {"ids", "--model", "free", "--size", "500", "--emin", "-3", "--emax", "3", "--grid", "61"},
    {"ids", "--model", "fibonacci", "--size", "300", "--boundary", "periodic", "--grid", "50"},
    {"lyapunov", "--model", "almost-mathieu", "--alpha", "0.6180339887", "--lambda", "3", "--omega",
     "0", "--n", "2000", "--emin", "-5", "--emax", "5", "--grid", "40"},
    {"resistance", "--model", "fibonacci", "--lambda", "1", "--energy", "0", "--lengths", "1:200",
     "--leads", "pi-half"},
    {"tracemap", "--model", "fibonacci", "--lambda", "2", "--energy", "0", "--steps", "10"},
    {"tracemap", "--model", "thue-morse", "--letter-values", "a=1,b=-1", "--energy", "0.3"},
    {"gaps", "--model", "fibonacci", "--lambda", "4", "--approx-q", "13", "--size", "1000"},
    {"cantor", "--function", "alpha", "--grid", "11"},
    {"cantor", "--function", "sturmian-labels", "--kmax", "3", "--format", "json"},
};

}  // namespace

TEST_CASE("spectrum json schema") {
  const Result r = call(kCommandLines[0]);
  REQUIRE(r.code == kExitOk);
  const json j = json::parse(r.out);
  CHECK(j["model"] == "fibonacci");
  CHECK(j["q"] == 89);
  REQUIRE(j["bands"].is_array());
  CHECK(j["bands"].size() == 89);
  CHECK(j["gap_labels"].size() == 88);
  for (const auto& b : j["bands"]) CHECK(b[0].get<double>() <= b[1].get<double>());
  CHECK(j["total_bandwidth"].get<double>() > 0.0);
}

TEST_CASE("butterfly csv order") {
  std::string header;
  const auto rows = csv_rows(call({"butterfly", "--lambda", "2", "--qmax", "20", "--omega", "0"}).out, &header);
  CHECK(header == "p,q,band_lo,band_hi");
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const auto& a = rows[i - 1];
    const auto& b = rows[i];
    const bool ordered = a[1] < b[1] || (a[1] == b[1] && (a[0] < b[0] || (a[0] == b[0] && a[2] < b[2])));
    CHECK(ordered);
  }
}

TEST_CASE("ids output") {
  std::string header;
  const auto rows = csv_rows(
      call({"ids", "--model", "free", "--size", "2000", "--emin", "-3", "--emax", "3", "--grid", "601"}).out,
      &header);
  CHECK(header == "E,N");
  REQUIRE(rows.size() == 601);
  CHECK(rows[300][0] == 0.0);
  CHECK(std::abs(rows[300][1] - 0.5) <= 2e-3);
}

TEST_CASE("tracemap invariant column") {
  std::string header;
  const auto rows = csv_rows(call(kCommandLines[8]).out, &header);
  CHECK(header == "n,tau,invariant");
  REQUIRE(rows.size() == 12);
  CHECK(rows[0][0] == -1.0);
  CHECK(rows[0][1] == 2.0);
  CHECK(rows[5][1] == -6.0);
  for (const auto& r : rows) CHECK(std::abs(r[2] - 4.0) <= 1e-9);
}

TEST_CASE("headers") {
  std::string h;
  csv_rows(call(kCommandLines[6]).out, &h);
  CHECK(h == "E,gamma");
  csv_rows(call(kCommandLines[7]).out, &h);
  CHECK(h == "L,log10R");
  csv_rows(call(kCommandLines[10]).out, &h);
  CHECK(h == "gap_lo,gap_hi,ids,label,deviation,within_tol");
  csv_rows(call(kCommandLines[2]).out, &h);
  CHECK(h == "band_lo,band_hi");
}

TEST_CASE("every command runs and is deterministic") {
  for (const auto& args : kCommandLines) {
    CAPTURE(args[0]);
    const Result a = call(args);
    REQUIRE(a.code == kExitOk);
    CHECK_FALSE(a.out.empty());
    auto single = args;
    single.insert(single.end(), {"--threads", "1"});
    auto many = args;
    many.insert(many.end(), {"--threads", "4"});
    CHECK(call(single).out == a.out);
    CHECK(call(many).out == a.out);
  }
}

TEST_CASE("config round trip") {
  for (const auto& args : kCommandLines) {
    RunConfig cfg;
    std::ostringstream help;
    REQUIRE(parse_args(args, cfg, help) == Action::Run);
    const auto path = temp_path("roundtrip.cfg");
    {
      std::ofstream f(path);
      f << dump_config(cfg);
    }
    RunConfig back;
    REQUIRE(parse_args({"--config", path.string()}, back, help) == Action::Run);
    CHECK(back == cfg);

    auto dump = args;
    dump.push_back("--dump-config");
    const Result d = call(dump);
    CHECK(d.code == kExitOk);
    CHECK(d.out == dump_config(cfg));
  }
}

TEST_CASE("flags override the config file") {
  const auto path = temp_path("override.cfg");
  {
    std::ofstream f(path);
    f << "command = spectrum\nlambda = 3\nmodel = almost-mathieu\n";
  }
  RunConfig cfg;
  std::ostringstream help;
  parse_args({"--config", path.string(), "--lambda", "1.5"}, cfg, help);
  CHECK(cfg.command == "spectrum");
  CHECK(cfg.model == "almost-mathieu");
  CHECK(cfg.lambda == 1.5);
}

TEST_CASE("exit codes") {
  CHECK(call({"spectrum", "--bogus"}).code == kExitUsage);
  CHECK(call({"nosuchcommand"}).code == kExitUsage);
  CHECK(call({}).code == kExitUsage);
  CHECK(call({"spectrum", "--model", "fibonacci", "--approx-q", "7"}).code == kExitUsage);
  CHECK(call({"resistance", "--model", "free", "--energy", "3", "--leads", "0,0"}).code == kExitUsage);
  CHECK(call({"spectrum", "--method", "union"}).code == kExitUsage);
  const Result bad = call({"spectrum", "--qmax", "0"});
  CHECK(bad.code == kExitUsage);
  CHECK_FALSE(bad.err.empty());
  CHECK(call({"spectrum", "--config", "/nonexistent/qp.cfg"}).code == kExitIo);
  CHECK(call({"spectrum", "--out", "/nonexistent/dir/s.csv"}).code == kExitIo);
  CHECK(call({"spectrum", "--help"}).code == kExitOk);
}

TEST_CASE("output file") {
  const auto path = temp_path("spectrum.csv");
  std::filesystem::remove(path);
  const Result r = call({"spectrum", "--model", "periodic", "--values", "0,2", "--out", path.string()});
  REQUIRE(r.code == kExitOk);
  CHECK(r.out.empty());
  std::ifstream f(path);
  std::stringstream s;
  s << f.rdbuf();
  std::string header;
  const auto rows = csv_rows(s.str(), &header);
  CHECK(header == "band_lo,band_hi");
  REQUIRE(rows.size() == 2);
  CHECK(rows[0][0] == doctest::Approx(1.0 - std::sqrt(5.0)));
  CHECK(std::abs(rows[0][1]) <= 1e-15);
  CHECK(rows[1][0] == doctest::Approx(2.0));
  CHECK(rows[1][1] == doctest::Approx(1.0 + std::sqrt(5.0)));
}

TEST_CASE("number formatting") {
  CHECK(format_number(0.5) == "0.5");
  CHECK(format_number(-0.0) == "0");
  CHECK(format_number(1.0 / 3.0) == "0.333333333333");
  CHECK(format_number(1e-20) == "1e-20");
  CHECK(format_number(INFINITY) == "inf");
  CHECK(format_number(-INFINITY) == "-inf");
}
