#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "scatter1d/cli.hpp"
#include "scatter1d/config.hpp"

using namespace scatter1d;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args) {
  args.insert(args.begin(), "scatter1d");
  std::vector<char*> argv;
  for (auto& a : args) argv.push_back(a.data());
  std::ostringstream out, err;
  const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string l; std::getline(in, l);) out.push_back(l);
  return out;
}

bool contains(const std::string& text, const std::string& needle) { return text.find(needle) != std::string::npos; }

}  // namespace

TEST_SUITE("cli") {
  TEST_CASE("usage errors exit with 1") {
    CHECK(run({}).code == exit_usage);
    CHECK(run({"scan", "--no-such-flag"}).code == exit_usage);
    CHECK(run({"bogus"}).code == exit_usage);
    CHECK(run({"--help"}).code == exit_ok);
    CHECK(run({"scan", "--potential", "nope", "--n", "3"}).code == exit_usage);

    const std::string cfg = "cli_bad.cfg";
    std::ofstream(cfg) << "[fd]\nunknown = 1\n";
    const auto r = run({"scan", "--config", cfg});
    CHECK(r.code == exit_usage);
    CHECK(contains(r.err, "scatter1d: error:"));
    std::remove(cfg.c_str());
  }

  TEST_CASE("computation errors exit with 2") {
    const auto r = run({"scan", "--dx", "0.1", "--emin", "1", "--emax", "30", "--n", "5"});
    CHECK(r.code == exit_computation);
    CHECK(contains(r.err, "grid-too-coarse"));
  }

  TEST_CASE("scan writes a deterministic full-precision CSV") {
    const std::string path = "cli_scan.csv";
    REQUIRE(run({"scan", "--potential", "jolanta", "--emin", "0.1", "--emax", "2", "--n", "2000", "--out", path}).code ==
            exit_ok);
    const auto first = slurp(path);
    const auto rows = lines(first);
    REQUIRE(rows.size() == 2001);
    CHECK(rows[0] == "E,ReT,ImT,ReR,ImR,T2,R2,unitarity_residual");
    double prev = 0.0;
    for (std::size_t i = 1; i < rows.size(); ++i) {
      const double e = std::stod(rows[i].substr(0, rows[i].find(',')));
      CHECK(e > prev);
      prev = e;
    }
    CHECK(rows[1].substr(0, rows[1].find(',')) == "0.10000000000000001");
    REQUIRE(run({"scan", "--potential", "jolanta", "--emin", "0.1", "--emax", "2", "--n", "2000", "--out", path}).code ==
            exit_ok);
    CHECK(slurp(path) == first);
    std::remove(path.c_str());
  }

  TEST_CASE("config file and command-line overrides") {
    const std::string cfg = "cli_ok.cfg";
    std::ofstream(cfg) << "# test\n[potential]\nname = zero\n[scan]\nemin = 0.5\nemax = 1.0\npoints = 3\n";
    const auto r = run({"scan", "--config", cfg});
    REQUIRE(r.code == exit_ok);
    const auto rows = lines(r.out);
    REQUIRE(rows.size() == 4);
    CHECK(rows[1].rfind("0.5,", 0) == 0);
    const auto o = run({"scan", "--config", cfg, "--n", "5"});
    CHECK(lines(o.out).size() == 6);
    std::remove(cfg.c_str());
  }

  TEST_CASE("siegert and resonances") {
    const std::string spectrum_file = "cli_spectrum.json", curve = "cli_curve.csv", table = "cli_res.csv";
    REQUIRE(run({"siegert", "--potential", "jolanta", "--n", "40", "--box-a", "15", "--out", spectrum_file}).code == exit_ok);
    const auto j = nlohmann::json::parse(slurp(spectrum_file));
    CHECK(j["N"] == 40);
    CHECK(j["a"] == 15.0);
    REQUIRE(j["states"].size() == 80);
    const auto& s0 = j["states"][0];
    for (const char* key : {"lambda", "k", "E", "class", "phi_minus", "phi_plus"}) CHECK(s0.contains(key));
    int bound = 0;
    for (const auto& s : j["states"]) bound += s["class"] == "bound";
    CHECK(bound == 1);
    CHECK(j["algebra"]["closure_identity"].get<double>() <= 1e-8);

    REQUIRE(run({"scan", "--emin", "0.1", "--emax", "2", "--n", "2000", "--out", curve}).code == exit_ok);
    const auto r = run({"resonances", "--spectrum", spectrum_file, "--fd-curve", curve, "--out", table});
    REQUIRE(r.code == exit_ok);
    const auto rows = lines(slurp(table));
    REQUIRE(rows.size() >= 2);
    CHECK(rows[0] == "index,E_res,Gamma,Re_k,Im_k,Q,fit_rms,window_points,status");
    CHECK(run({"resonances", "--spectrum", "missing.json", "--fd-curve", curve}).code == exit_usage);
    for (const auto& p : {spectrum_file, curve, table}) std::remove(p.c_str());
  }

  TEST_CASE("compare reports per-energy and summary data") {
    const std::string csv = "cli_cmp.csv", report = "cli_cmp.json";
    REQUIRE(run({"compare", "--potential", "zero", "--n", "20", "--box-a", "5", "--points", "20", "--out", csv, "--report", report})
                .code == exit_ok);
    const auto rows = lines(slurp(csv));
    REQUIRE(rows.size() == 21);
    CHECK(rows[0] == "E,ReT_fd,ImT_fd,ReT_siegert,ImT_siegert,abs_diff");
    const auto j = nlohmann::json::parse(slurp(report));
    CHECK(j["max_abs_diff"].get<double>() <= 1e-6);
    CHECK(j.contains("resonances"));
    CHECK(j["worst_unitarity"].get<double>() <= 1e-10);
    std::remove(csv.c_str());
    std::remove(report.c_str());
  }

  TEST_CASE("green-check JSON") {
    const auto r = run({"green-check", "--potential", "jolanta", "--energy", "0.5", "--dx", "1e-3", "--siegert-n", "0"});
    REQUIRE(r.code == exit_ok);
    const auto j = nlohmann::json::parse(r.out);
    CHECK(j["full"]["endpoint_relative_residual"].get<double>() <= 1e-5);
    CHECK(j["free"]["jump_relative_error"].get<double>() <= 0.05);
    CHECK(j["onshell"]["eta_plus_residual"].get<double>() <= 1e-5);
    CHECK(j["wronskian"]["constancy"].get<double>() <= 1e-6);
    CHECK_FALSE(j.contains("siegert"));
  }

  TEST_CASE("wavepacket CSV and report") {
    const std::string csv = "cli_wp.csv", report = "cli_wp.json";
    REQUIRE(run({"wavepacket", "--potential", "jolanta", "--k0", "3", "--sigma", "0.3", "--nodes", "64", "--times", "-5,0,5",
                 "--xmax", "40", "--xpoints", "81", "--out", csv, "--report", report})
                .code == exit_ok);
    const auto rows = lines(slurp(csv));
    REQUIRE(rows.size() == 1 + 3 * 81);
    CHECK(rows[0] == "t,x,Re_psi,Im_psi,abs2");
    const auto j = nlohmann::json::parse(slurp(report));
    CHECK(std::abs(j["sum"].get<double>() - 1.0) <= 1e-4);
    CHECK(j["norms"].size() == 3);
    CHECK(run({"wavepacket", "--times", "a,b"}).code == exit_usage);
    std::remove(csv.c_str());
    std::remove(report.c_str());
  }

  TEST_CASE("validate flags a coarse grid and a tiny basis") {
    const auto coarse = run({"validate", "--dx", "0.1", "--n", "10", "--points", "200"});
    CHECK(coarse.code == exit_validation);
    CHECK(contains(coarse.out, "FAIL wronskian"));
    CHECK(contains(coarse.out, "PASS unitarity"));
    const auto tiny = run({"validate", "--n", "4", "--points", "200"});
    CHECK(tiny.code == exit_validation);
    CHECK(contains(tiny.out, "FAIL siegert-vs-fd"));
    CHECK(contains(tiny.out, "PASS unitarity"));
  }

  TEST_CASE("thread override from the environment") {
    CHECK(resolve_threads(3) == 3);
    setenv("SCATTER1D_THREADS", "2", 1);
    CHECK(resolve_threads(3) == 2);
    setenv("SCATTER1D_THREADS", "zero", 1);
    CHECK_THROWS(resolve_threads(3));
    unsetenv("SCATTER1D_THREADS");
  }
}
