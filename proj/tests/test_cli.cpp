#include <doctest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "tmef/cli.hpp"

using namespace tmef;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out, err;
};

Run run(std::vector<std::string> args) {
  args.insert(args.begin(), "tmef");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = cli::run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "tmef_cli_tests";
  fs::create_directories(dir);
  return dir / name;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  return {std::istreambuf_iterator<char>(in), {}};
}

}  // namespace

TEST_SUITE("cli") {
  TEST_CASE("config parsing") {
    std::istringstream in("# header\n model = gar1 \n\nalpha=2 # rate\n");
    const auto c = cli::parse_config(in);
    REQUIRE(c.size() == 2);
    CHECK(c[0] == std::pair<std::string, std::string>{"model", "gar1"});
    CHECK(c[1].second == "2");
    std::istringstream bad("noequals\n");
    CHECK_THROWS(cli::parse_config(bad));
  }

  TEST_CASE("csv round trip") {
    const TimeSeries y({0.1, -2.5e-300, 3.0, 1.0 / 3.0});
    const auto p = scratch("round.csv");
    {
      std::ofstream f(p);
      cli::write_series_csv(f, y);
    }
    CHECK(cli::read_series_csv(p) == y);
    std::ofstream(scratch("bad.csv")) << "y\n1.0\nabc\n";
    CHECK_THROWS_AS(cli::read_series_csv(scratch("bad.csv")), std::ios_base::failure);
  }

  TEST_CASE("simulate is deterministic and validates parameters") {
    const auto a = scratch("s1.csv"), b = scratch("s2.csv");
    auto args = [](const fs::path& out) {
      return std::vector<std::string>{"simulate", "--model", "stable-ar1", "--alpha", "1.5", "--phi", "0.6",
                                      "--n", "1000", "--seed", "42", "--out", out.string()};
    };
    CHECK(run(args(a)).code == 0);
    CHECK(run(args(b)).code == 0);
    CHECK(slurp(a) == slurp(b));
    CHECK(cli::read_series_csv(a).size() == 1000);

    const auto g = scratch("g.csv");
    CHECK(run({"simulate", "--model", "gar1", "--alpha", "2", "--lambda", "1", "--nu", "3", "--n", "500",
               "--seed", "7", "--out", g.string()})
              .code == 0);
    const TimeSeries gs = cli::read_series_csv(g);
    for (double v : gs.values()) CHECK(v > 0.0);

    CHECK(run({"simulate", "--model", "gar1", "--alpha", "1", "--lambda", "2", "--nu", "3", "--n", "10"}).code ==
          cli::kValidationError);
    CHECK(run({"simulate", "--model", "nope", "--n", "10"}).code == cli::kValidationError);
    CHECK(run({"simulate", "--model", "gar1", "--n", "10", "--out", "/nonexistent/dir/x.csv"}).code ==
          cli::kIoError);
  }

  TEST_CASE("estimate") {
    const auto data = scratch("gauss.csv");
    REQUIRE(run({"simulate", "--model", "gaussian-ar1", "--phi", "0.5", "--n", "400", "--seed", "3", "--out",
                 data.string()})
                .code == 0);
    const auto r = run({"estimate", "--model", "gaussian-ar1", "--kernel", "moment", "--k", "1", "--input",
                        data.string()});
    REQUIRE(r.code == 0);
    const auto j = nlohmann::json::parse(r.out);
    const auto y = cli::read_series_csv(data);
    double s11 = 0.0, s20 = 0.0;
    for (std::size_t i = 1; i < y.size(); ++i) {
      s11 += y[i - 1] * y[i];
      s20 += y[i - 1] * y[i - 1];
    }
    CHECK(j["theta_hat"][0].get<double>() == doctest::Approx(s11 / s20).epsilon(1e-10));
    CHECK(j["converged"].get<bool>());
    for (auto key : {"config", "info_det", "info_matrix", "iterations", "points", "seed", "efficiency_vs_reference"})
      CHECK(j.contains(key));

    CHECK(run({"estimate", "--model", "gaussian-ar1", "--input", scratch("missing.csv").string()}).code ==
          cli::kIoError);
    CHECK(run({"estimate", "--model", "stable-ar1", "--kernel", "mgf", "--input", data.string()}).code ==
          cli::kValidationError);
  }

  TEST_CASE("config file with command line override") {
    const auto cfg = scratch("run.cfg");
    std::ofstream(cfg) << "model = gaussian-ar1\nphi = 0.9\nn = 50\nseed = 5\nkernel = moment\n";
    const auto a = run({"simulate", "--config", cfg.string()});
    const auto b = run({"simulate", "--config", cfg.string(), "--phi", "0.1"});
    REQUIRE(a.code == 0);
    REQUIRE(b.code == 0);
    CHECK(a.out != b.out);
    CHECK(a.err.find("kernel") != std::string::npos);
    const auto c = run({"simulate", "--model", "gaussian-ar1", "--phi", "0.1", "--n", "50", "--seed", "5"});
    CHECK(b.out == c.out);
    CHECK(run({"simulate", "--config", scratch("nocfg").string()}).code == cli::kIoError);
  }

  TEST_CASE("info curve") {
    const auto r = run({"info-curve", "--model", "stable-ar1", "--alpha", "2", "--grid", "50"});
    REQUIRE(r.code == 0);
    std::istringstream in(r.out);
    std::string line;
    std::getline(in, line);
    CHECK(line == "t,information");
    std::vector<double> v;
    while (std::getline(in, line)) v.push_back(std::stod(line.substr(line.find(',') + 1)));
    REQUIRE(v.size() == 50);
    CHECK(v[0] == doctest::Approx(0.5).epsilon(1e-3));
    for (std::size_t i = 1; i < v.size(); ++i) CHECK(v[i] < v[i - 1]);

    const auto one = run({"info-curve", "--model", "stable-ar1", "--alpha", "1", "--grid", "1", "--t-lo", "0.7968"});
    REQUIRE(one.code == 0);
    CHECK(std::count(one.out.begin(), one.out.end(), '\n') == 2);
    const double peak = std::stod(one.out.substr(one.out.rfind(',') + 1));
    CHECK(std::abs(peak - 0.324) <= 1e-3);
  }

  TEST_CASE("table1") {
    const auto r = run({"table1"});
    REQUIRE(r.code == 0);
    CHECK(r.out.find("  1.7   0.476") != std::string::npos);
    CHECK(r.out.find("0.4278") != std::string::npos);  // alpha = 1.7 factor
    CHECK(r.out.find("t->0") != std::string::npos);
    CHECK(run({"table1"}).out == r.out);
  }
}
