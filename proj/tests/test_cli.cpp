#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <sstream>
#include <string>

#include "doctest.h"
#include "spod/core.hpp"

namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

struct Sandbox {
  fs::path dir;
  Sandbox() {
    dir = fs::temp_directory_path() / ("spod_cli_test_" + std::to_string(::getpid()));
    fs::create_directories(dir);
  }
  ~Sandbox() { fs::remove_all(dir); }
  std::string at(const std::string& name) const { return (dir / name).string(); }

  int run(const std::string& args) const {
    const std::string cmd = std::string(SPOD_CLI_PATH) + " " + args + " > " + at("stdout.txt") + " 2> " + at("stderr.txt");
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  }
};

std::string slurp(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

json manifest(const std::string& output) { return json::parse(slurp(output + ".manifest.json")); }

}  // namespace

TEST_CASE("generate") {
  Sandbox sb;
  CHECK(sb.run("generate burgers --re 1000 --nx 100 --nt 100 -o " + sb.at("b.spod")) == 0);
  const auto z = spod::load_snapshots(sb.at("b.spod"));
  CHECK(z.nt() == 101);
  CHECK(z.nx() == 100);
  CHECK(manifest(sb.at("b.spod"))["generator"] == "burgers");
  CHECK(!fs::exists(sb.at("b.spod.tmp")));

  SUBCASE("missing output is a usage error") { CHECK(sb.run("generate burgers") == 2); }
  SUBCASE("unknown subcommand") { CHECK(sb.run("generate wave -o " + sb.at("w.spod")) == 2); }
}

TEST_CASE("pod and decompose on Burgers") {
  Sandbox sb;
  REQUIRE(sb.run("generate burgers -o " + sb.at("b.spod")) == 0);
  REQUIRE(sb.run("pod " + sb.at("b.spod") + " --r 1 -o " + sb.at("pod1.decomp")) == 0);
  CHECK(manifest(sb.at("pod1.decomp"))["final_relative_error"].get<double>() == doctest::Approx(4.499e-1).epsilon(0.02));
  REQUIRE(sb.run("pod " + sb.at("b.spod") + " --r 2 -o " + sb.at("pod2.decomp")) == 0);

  REQUIRE(sb.run("decompose " + sb.at("b.spod") + " --frames r=2,path=linear:0.185,init=zeros -q -o " +
                 sb.at("spod2.decomp")) == 0);
  const json m = manifest(sb.at("spod2.decomp"));
  CHECK(m["final_relative_error"].get<double>() <= 0.043);
  CHECK(m["config"]["max_iters"] == 2000);

  SUBCASE("compare orders sPOD below POD") {
    REQUIRE(sb.run("compare " + sb.at("b.spod") + " " + sb.at("pod2.decomp") + " " + sb.at("spod2.decomp") + " --csv " +
                   sb.at("cmp.csv")) == 0);
    std::istringstream csv(slurp(sb.at("cmp.csv")));
    std::string header, row;
    std::getline(csv, header);
    std::getline(csv, row);
    CHECK(header == "r,pod,spod");
    const auto c1 = row.find(','), c2 = row.find(',', c1 + 1);
    CHECK(row.substr(0, c1) == "2");
    CHECK(std::stod(row.substr(c2 + 1)) < std::stod(row.substr(c1 + 1, c2 - c1 - 1)));
  }
  SUBCASE("identical invocations give identical files") {
    REQUIRE(sb.run("decompose " + sb.at("b.spod") + " --frames r=2,path=linear:0.185,init=zeros -q -o " +
                   sb.at("again.decomp")) == 0);
    CHECK(slurp(sb.at("again.decomp")) == slurp(sb.at("spod2.decomp")));
  }
  SUBCASE("config file is echoed, explicit flags win") {
    std::ofstream(sb.at("cfg.json")) << R"({"max_iters": 5, "grad_tol": 1e-3, "lbfgs_memory": 4})";
    REQUIRE(sb.run("decompose " + sb.at("b.spod") + " --frames r=1,path=linear:0.185 --config " + sb.at("cfg.json") +
                   " --max-iters 7 -q -o " + sb.at("c.decomp")) == 0);
    const json mc = manifest(sb.at("c.decomp"));
    CHECK(mc["config"]["max_iters"] == 7);
    CHECK(mc["config"]["lbfgs_memory"] == 4);
    CHECK(mc["config"]["grad_tol"].get<double>() == 1e-3);
  }
  SUBCASE("require-converged") {
    CHECK(sb.run("decompose " + sb.at("b.spod") + " --frames r=1,path=linear:0.185 --max-iters 3 --require-converged -q -o " +
                 sb.at("n.decomp")) == 1);
  }
  SUBCASE("bad specs") {
    CHECK(sb.run("decompose " + sb.at("b.spod") + " --frames r=1,path=spiral:1 -o " + sb.at("x.decomp")) == 2);
    CHECK(sb.run("decompose " + sb.at("b.spod") + " --frames r=500,path=linear:0 -o " + sb.at("x.decomp")) == 2);
    CHECK(sb.run("decompose " + sb.at("b.spod") + " --frames path=linear:0 -o " + sb.at("x.decomp")) == 2);
    CHECK(sb.run("decompose " + sb.at("b.spod") + " --mode path-only --frames r=1,path=linear:0 -o " + sb.at("x.decomp")) == 2);
  }
  SUBCASE("heatmap of a reconstruction") {
    REQUIRE(sb.run("export-heatmap " + sb.at("spod2.decomp") + " -o " + sb.at("h.csv")) == 0);
    const std::string csv = slurp(sb.at("h.csv"));
    CHECK(csv.rfind("t,x,value\n", 0) == 0);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 1 + 101 * 100);
  }
}

TEST_CASE("synthetic exact fixture from the truth") {
  Sandbox sb;
  REQUIRE(sb.run("generate synthetic --n 48 --m 24 --truth " + sb.at("t.decomp") + " -o " + sb.at("s.spod")) == 0);
  REQUIRE(sb.run("decompose " + sb.at("s.spod") + " --init-decomp " + sb.at("t.decomp") + " -q -o " + sb.at("s.decomp")) == 0);
  const json m = manifest(sb.at("s.decomp"));
  CHECK(m["iterations"] == 0);
  CHECK(m["final_relative_error"].get<double>() <= 1e-10);
}

TEST_CASE("gradcheck") {
  Sandbox sb;
  CHECK(sb.run("gradcheck") == 0);
  CHECK(slurp(sb.at("stdout.txt")).rfind("gradcheck: PASS", 0) == 0);
  CHECK(sb.run("gradcheck --tol 1e-30") == 1);
}

TEST_CASE("I/O failures") {
  Sandbox sb;
  CHECK(sb.run("pod " + sb.at("missing.spod") + " --r 1 -o " + sb.at("p.decomp")) == 3);
  std::ofstream(sb.at("bad.spod")) << "# spod-v1\nnt 2 nx 3 length 1 tfinal 1\n1 2 3\n";
  CHECK(sb.run("pod " + sb.at("bad.spod") + " --r 1 -o " + sb.at("p.decomp")) == 3);
  CHECK(slurp(sb.at("stderr.txt")).find("line 4") != std::string::npos);
}
