#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <sstream>
#include <string>
#include <vector>

#include "hexdimer/cli.hpp"

using namespace hexdimer;

namespace {

struct Run {
  int code = -1;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  args.insert(args.begin(), "hexdimer");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out;
  std::ostringstream err;
  Run r;
  r.code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

std::vector<std::string> data_lines(const std::string& text) {
  std::vector<std::string> lines;
  std::istringstream is(text);
  std::string line;
  while (std::getline(is, line)) {
    if (!line.empty() && line[0] != '#') lines.push_back(line);
  }
  return lines;
}

std::vector<std::string> fields(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  bool quoted = false;
  for (char ch : line) {
    if (ch == '"') {
      quoted = !quoted;
    } else if (ch == ',' && !quoted) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += ch;
    }
  }
  out.push_back(cur);
  return out;
}

}  // namespace

TEST_CASE("constant subcommand") {
  const auto r = run({"constant"});
  REQUIRE(r.code == 0);
  const auto lines = data_lines(r.out);
  REQUIRE(lines.size() == 2);
  CHECK(fields(lines[0])[0] == "value");
  CHECK(std::fabs(std::stod(fields(lines[1])[0]) - (-0.080842)) < 5e-6);
}

TEST_CASE("csv metadata") {
  const auto r = run({"partition", "--M", "1", "--N", "1", "--K", "1", "--q", "0.5"});
  REQUIRE(r.code == 0);
  CHECK(r.out.rfind("# hexdimer ", 0) == 0);
  CHECK(r.out.find("# config: partition --M=1 --N=1 --K=1 --q=0.5") != std::string::npos);
  CHECK(r.out.find("# sign-convention: ") != std::string::npos);
  const auto lines = data_lines(r.out);
  REQUIRE(lines.size() == 2);
  CHECK(lines[0] == "M,N,K,weight,method,log_z,z");
  CHECK(std::stod(fields(lines[1])[6]) == doctest::Approx(1.5));
}

TEST_CASE("partition methods agree") {
  std::vector<double> values;
  for (const char* method : {"macmahon", "kasteleyn", "enumeration"}) {
    const auto r = run({"partition", "--M", "2", "--N", "3", "--K", "2", "--q", "0.7", "--method", method});
    REQUIRE(r.code == 0);
    values.push_back(std::stod(fields(data_lines(r.out)[1])[5]));
  }
  CHECK(values[1] == doctest::Approx(values[0]).epsilon(1e-12));
  CHECK(values[2] == doctest::Approx(values[0]).epsilon(1e-12));
  const auto inf = run({"partition", "--M", "1", "--N", "1", "--K", "inf", "--q", "0.5"});
  REQUIRE(inf.code == 0);
  CHECK(std::stod(fields(data_lines(inf.out)[1])[5]) == doctest::Approx(std::log(2.0)));
  const auto sliced = run({"partition", "--M", "2", "--N", "3", "--K", "inf", "--phi", "const:1", "--inv-eps", "4"});
  REQUIRE(sliced.code == 0);
}

TEST_CASE("free-energy grid and series column") {
  const auto r = run({"free-energy", "--a", "1", "--b", "1", "--c", "1", "--inv-eps-min", "10", "--inv-eps-max", "12",
                      "--series"});
  REQUIRE(r.code == 0);
  const auto lines = data_lines(r.out);
  REQUIRE(lines.size() == 4);
  CHECK(lines[0] == "inv_eps,eps,f,variant,params,f_series");
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const auto f = fields(lines[i]);
    CHECK(std::fabs(std::stod(f[2]) - std::stod(f[5])) < 1e-11);
  }
  const auto lattice = run({"free-energy", "--M", "1", "--N", "1", "--K", "1", "--q", "0.36787944117144233"});
  REQUIRE(lattice.code == 0);
  CHECK(std::stod(fields(data_lines(lattice.out)[1])[5]) == doctest::Approx(-std::log(1.0 + std::exp(-1.0)) / 6.0));
}

TEST_CASE("coeffs subcommand as json") {
  const auto r = run({"coeffs", "--a", "2", "--b", "1", "--json"});
  REQUIRE(r.code == 0);
  const auto doc = nlohmann::json::parse(r.out);
  CHECK(doc["rows"][0]["scenario"] == "infinite");
  CHECK(doc["rows"][0]["provenance"] == "analytic");
  CHECK(doc["rows"][0]["f1"].get<double>() == 0.0);
  CHECK(24.0 * doc["rows"][0]["f2"].get<double>() == doctest::Approx(1.0));
  CHECK(doc.contains("sign_convention"));
  const auto mismatch = run({"coeffs", "--a", "2", "--b", "1", "--scenario", "finite"});
  CHECK(mismatch.code == 1);
}

TEST_CASE("table1 row") {
  const auto r = run({"table1", "--row", "cosine:1,3"});
  REQUIRE(r.code == 0);
  const auto lines = data_lines(r.out);
  REQUIRE(lines.size() == 2);
  const auto h = fields(lines[0]);
  const auto v = fields(lines[1]);
  REQUIRE(h[3] == "f0_fitted");
  REQUIRE(h[4] == "f0_analytic");
  CHECK(std::fabs(std::stod(v[3]) - 0.472206693) < 1e-7);
  CHECK(std::fabs(std::stod(v[4]) - 0.472206688) < 1e-8);
}

TEST_CASE("fit subcommand") {
  const auto r = run({"fit", "--a", "1", "--b", "1", "--c", "1", "--inv-eps-min", "2", "--inv-eps-max", "120"});
  REQUIRE(r.code == 0);
  const auto lines = data_lines(r.out);
  REQUIRE(lines.size() == 7);
  CHECK(lines[0] == "basis_term,fitted,analytic,abs_diff");
  CHECK(fields(lines[5])[2].empty());
  CHECK(r.out.find("# condition_estimate: ") != std::string::npos);
}

TEST_CASE("verify subcommand") {
  const auto r = run({"verify", "--kasteleyn"});
  CHECK(r.code == 0);
  CHECK(r.out.find("FAIL") == std::string::npos);
  CHECK(r.out.find("# failed: 0") != std::string::npos);
}

TEST_CASE("usage errors exit with 1") {
  CHECK(run({}).code == 1);
  CHECK(run({"partition", "--M", "1", "--N", "1", "--K", "1", "--bogus"}).code == 1);
  CHECK(run({"partition", "--M", "1", "--N", "1", "--K", "1"}).code == 1);
  CHECK(run({"free-energy", "--M", "1", "--a", "1", "--q", "0.5"}).code == 1);
  CHECK(run({"free-energy", "--a", "1", "--b", "1", "--inv-eps", "3", "--inv-eps-min", "2"}).code == 1);
  CHECK(run({"constant", "--tol-override", "nonsense=1"}).code == 1);
  CHECK(run({"constant", "--tol-override", "rel_tol=-1"}).code == 1);
  CHECK(run({"coeffs", "--a", "1", "--b", "3", "--phi", "wobbly"}).code == 1);
  CHECK(run({"coeffs", "--a", "1", "--b", "3", "--phi", "linear:0,1"}).code == 1);
  CHECK(run({"table1", "--row", "cosine:1"}).code == 1);
  CHECK(run({"partition", "--M", "5", "--N", "4", "--K", "1", "--q", "0.5", "--method", "enumeration"}).code == 1);
  const auto help = run({"--help"});
  CHECK(help.code == 0);
}

TEST_CASE("numerical failures exit with 2") {
  const auto r = run({"free-energy", "--a", "1", "--b", "1", "--c", "1", "--inv-eps", "50", "--series",
                      "--tol-override", "n_max_cap=3"});
  CHECK(r.code == 2);
  CHECK(r.err.find("partial sum") != std::string::npos);
}

TEST_CASE("outputs are deterministic") {
  const auto dir = std::filesystem::temp_directory_path();
  const auto p1 = (dir / "hexdimer_det_1.csv").string();
  const auto p2 = (dir / "hexdimer_det_2.csv").string();
  const std::vector<std::string> base{"free-energy", "--a", "1", "--b", "3", "--phi", "cosine", "--inv-eps-min",
                                      "2", "--inv-eps-max", "30"};
  auto a1 = base;
  a1.insert(a1.end(), {"--out", p1, "--threads", "1"});
  auto a2 = base;
  a2.insert(a2.end(), {"--out", p2, "--threads", "4"});
  REQUIRE(run(a1).code == 0);
  REQUIRE(run(a2).code == 0);
  const auto slurp = [](const std::string& p) {
    std::ifstream in(p, std::ios::binary);
    return std::string(std::istreambuf_iterator<char>(in), {});
  };
  CHECK(slurp(p1) == slurp(p2));
  CHECK(!slurp(p1).empty());
  std::filesystem::remove(p1);
  std::filesystem::remove(p2);
  CHECK(run({"coeffs", "--a", "1", "--b", "3", "--phi", "cosine"}).out ==
        run({"coeffs", "--a", "1", "--b", "3", "--phi", "cosine"}).out);
}

TEST_CASE("phi catalog") {
  CHECK(cli::parse_phi("cosine")->describe() == "cosine");
  CHECK(cli::parse_phi("const:2")->value(5.0) == 2.0);
  CHECK(cli::parse_phi("linear:1,0.5")->value(2.0) == 2.0);
  CHECK_THROWS_AS(cli::parse_phi("linear:1"), cli::UsageError);
  CHECK_THROWS_AS(cli::parse_phi("cosine:3"), cli::UsageError);
  CHECK_THROWS_AS(cli::parse_phi("tabulated:/nonexistent/file.csv"), cli::UsageError);
  const auto row = cli::parse_table1_row("linear:2,3");
  CHECK(row.a == 2.0);
  CHECK(row.phi->value(1.0) == 2.5);
}
