#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

namespace fs = std::filesystem;

namespace {

struct RunResult {
  int exit_code;
  std::string output_path;
};

std::string cli_path() { return LATVAR_CLI; }

int run(const std::string& args) {
  const std::string cmd = cli_path() + " " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WEXITSTATUS(status);
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

struct TempDir {
  fs::path dir;
  TempDir() {
    dir = fs::temp_directory_path() /
          ("latvar_cli_test_" + std::to_string(::getpid()));
    fs::create_directories(dir);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(dir, ec);
  }
  std::string file(const std::string& name) const { return (dir / name).string(); }
};

}  // namespace

TEST_CASE("variance closedform csv output") {
  TempDir tmp;
  const auto out = tmp.file("v1.csv");
  CHECK(run("variance --dim 1 --side 3 --method closedform --out " + out) == 0);
  CHECK(slurp(out) == "n,variance\n1,0.5\n2,0.75\n3,0.9375\n");
}

TEST_CASE("variance lyapunov and exact modes") {
  TempDir tmp;
  const auto out = tmp.file("v2.csv");
  CHECK(run("variance --dim 2 --side 1 --method lyapunov --out " + out) == 0);
  CHECK(slurp(out) == "n,m,variance\n1,1,0.25\n");

  const auto exact_out = tmp.file("v3.csv");
  CHECK(run("variance --dim 2 --side 2 --method closedform --exact --out " + exact_out) == 0);
  CHECK(slurp(exact_out) ==
        "n,m,variance\n1,1,1/4\n1,2,9/32\n2,1,9/32\n2,2,43/128\n");
}

TEST_CASE("guard violations exit 2 with a diagnostic") {
  TempDir tmp;
  CHECK(run("variance --dim 3 --side 30 --method lyapunov --out " + tmp.file("x")) == 2);
  CHECK(run("variance --dim 5 --side 2 --out " + tmp.file("y")) == 2);
  CHECK(run("variance --side 2") == 2);  // missing --dim
  CHECK(run("scaling --dim 2 --n-max 100000") == 2);
  CHECK(run("crosscheck --dim 1 --side 2000 --no-simulate") == 2);
  CHECK(run("nonsense") == 2);
  CHECK(run("--help") == 0);
}

TEST_CASE("variance simulate emits std_error and is seed-deterministic") {
  TempDir tmp;
  const std::string args =
      "variance --dim 2 --side 2 --method simulate --seed 11 --ensemble 16 "
      "--horizon 40 --burn-in 8 ";
  const auto a = tmp.file("sim_a.csv");
  const auto b = tmp.file("sim_b.csv");
  const auto c = tmp.file("sim_c.csv");
  CHECK(run(args + "--out " + a) == 0);
  CHECK(run(args + "--out " + b) == 0);
  CHECK(run(args + "--threads 2 --out " + c) == 0);
  const auto sa = slurp(a);
  CHECK(!sa.empty());
  CHECK(sa == slurp(b));
  CHECK(sa == slurp(c));
  CHECK(sa.find("std_error") != std::string::npos);
}

TEST_CASE("csv round-trip at the emitted precision") {
  TempDir tmp;
  const auto out = tmp.file("rt.csv");
  CHECK(run("variance --dim 2 --side 6 --method closedform --precision 9 --out " + out) == 0);
  std::ifstream in(out);
  std::string line;
  std::getline(in, line);  // header
  int rows = 0;
  while (std::getline(in, line)) {
    const auto c1 = line.find(',');
    const auto c2 = line.find(',', c1 + 1);
    const std::string value = line.substr(c2 + 1);
    const double parsed = std::strtod(value.c_str(), nullptr);
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.9g", parsed);
    CHECK(value == buf);
    ++rows;
  }
  CHECK(rows == 36);
}

TEST_CASE("crosscheck passes on the documented lattices") {
  TempDir tmp;
  CHECK(run("crosscheck --dim 1 --side 10 --tolerance 1e-9 --out " + tmp.file("c1")) == 0);
  CHECK(run("crosscheck --dim 2 --side 8 --tolerance 1e-9 --ensemble 24 --horizon 80 --out " +
            tmp.file("c2")) == 0);
  CHECK(run("crosscheck --dim 3 --side 4 --tolerance 1e-9 --ensemble 16 --horizon 60 --out " +
            tmp.file("c3")) == 0);
  // Impossible analytic tolerance forces exit 3 (deviation ~4e-16 at N=31).
  CHECK(run("crosscheck --dim 2 --side 31 --no-simulate --tolerance 1e-18 --out " +
            tmp.file("c4")) == 3);
}

TEST_CASE("unwritable output path exits 4") {
  CHECK(run("variance --dim 1 --side 2 --out /nonexistent_dir/x.csv") == 4);
}

TEST_CASE("reproduce targets") {
  TempDir tmp;
  const auto fig2 = tmp.file("OneDimVn.txt");
  CHECK(run("reproduce --target fig2 --out " + fig2) == 0);
  {
    std::ifstream in(fig2);
    std::string comment, header, row1;
    std::getline(in, comment);
    std::getline(in, header);
    std::getline(in, row1);
    CHECK(comment.find("externally sourced") != std::string::npos);
    CHECK(header == "n V_directed V_undirected_reference");
    CHECK(row1 == "1 0.5 0.5");
  }

  const auto fig4l = tmp.file("TwoDimVn.txt");
  CHECK(run("reproduce --target fig4-left --out " + fig4l) == 0);
  {
    std::ifstream in(fig4l);
    std::string comment, header, row1;
    std::getline(in, comment);
    std::getline(in, header);
    std::getline(in, row1);
    CHECK(header == "n Vn logfit");
    CHECK(row1.rfind("1 0.25 ", 0) == 0);
  }

  const auto fig5 = tmp.file("ThreeDimDiagFaceN15.txt");
  CHECK(run("reproduce --target fig5-table1 --precision 12 --out " + fig5) == 0);
  {
    std::ifstream in(fig5);
    std::string row;
    int rows = 0;
    std::string first_token;
    while (std::getline(in, row)) {
      if (rows == 0) first_token = row.substr(0, row.find(' '));
      ++rows;
      CHECK(std::count(row.begin(), row.end(), ' ') == 14);
    }
    CHECK(rows == 15);
    const double corner = std::strtod(first_token.c_str(), nullptr);
    CHECK(std::abs(corner - 1.0 / 6.0) <= 1e-12);
  }

  const auto fig3 = tmp.file("TwoDimField.txt");
  CHECK(run("reproduce --target fig3 --out " + fig3) == 0);
  {
    std::ifstream in(fig3);
    std::string line;
    int rows = -1;  // header
    while (std::getline(in, line)) ++rows;
    CHECK(rows == 2500);
  }
}

TEST_CASE("reproduce and scaling are byte-deterministic") {
  TempDir tmp;
  const auto a = tmp.file("a.txt");
  const auto b = tmp.file("b.txt");
  CHECK(run("reproduce --target fig4-right --out " + a) == 0);
  CHECK(run("reproduce --target fig4-right --out " + b) == 0);
  CHECK(slurp(a) == slurp(b));

  // Fitted normalized-total coefficients stay within 15% of (0.0819, 0.2263).
  {
    std::istringstream in(slurp(a));
    std::string comment;
    std::getline(in, comment);
    double fa = 0.0, fb = 0.0;
    REQUIRE(std::sscanf(comment.c_str(), "# logfit: %lf*ln(n) + %lf", &fa, &fb) == 2);
    CHECK(std::abs(fa - 0.0819) <= 0.15 * 0.0819);
    CHECK(std::abs(fb - 0.2263) <= 0.15 * 0.2263);
  }

  const auto sa = tmp.file("s1.json");
  const auto sb = tmp.file("s2.json");
  CHECK(run("scaling --dim 3 --n-max 30 --out " + sa) == 0);
  CHECK(run("scaling --dim 3 --n-max 30 --out " + sb) == 0);
  const auto text = slurp(sa);
  CHECK(text == slurp(sb));

  const auto parsed = nlohmann::json::parse(text);
  CHECK(parsed["dimension"] == 3);
  CHECK(parsed.contains("sandwich"));
  CHECK(parsed.contains("pyramid_sum"));
  CHECK(parsed.contains("increment_fit"));
}

TEST_CASE("scaling 1D report hits the limit tolerances") {
  TempDir tmp;
  const auto out = tmp.file("s1d.json");
  CHECK(run("scaling --dim 1 --n-max 10000 --out " + out) == 0);
  const auto parsed = nlohmann::json::parse(slurp(out));
  const auto& rows = parsed["variance_over_sqrt_n"]["rows"];
  CHECK(rows.back()["deviation"].get<double>() <= 1e-4);
  const auto& trows = parsed["normalized_total_over_sqrt_n"]["rows"];
  CHECK(trows.back()["deviation"].get<double>() <= 1e-4);
  const double exponent = parsed["power_fit"]["b"].get<double>();
  CHECK(exponent >= 0.48);
  CHECK(exponent <= 0.52);
}

TEST_CASE("random-walk emits analytic and empirical columns deterministically") {
  TempDir tmp;
  const auto a = tmp.file("rw1.csv");
  const auto b = tmp.file("rw2.csv");
  CHECK(run("random-walk --dim 2 --k-max 4 --walks 20000 --seed 7 --out " + a) == 0);
  CHECK(run("random-walk --dim 2 --k-max 4 --walks 20000 --seed 7 --out " + b) == 0);
  const auto sa = slurp(a);
  CHECK(sa == slurp(b));
  std::istringstream in(sa);
  std::string header, row0;
  std::getline(in, header);
  std::getline(in, row0);
  CHECK(header == "k,u2k_analytic,u2k_empirical,std_error");
  CHECK(row0 == "0,1,1,0");
}

TEST_CASE("laplacian export flag") {
  TempDir tmp;
  const auto lap = tmp.file("lap.txt");
  CHECK(run("variance --dim 1 --side 2 --dump-laplacian " + lap + " --out " +
            tmp.file("ignored.csv")) == 0);
  CHECK(slurp(lap) == "1 1 1\n2 1 -1\n2 2 1\n");
}

TEST_CASE("json format carries the same rows") {
  TempDir tmp;
  const auto out = tmp.file("v.json");
  CHECK(run("variance --dim 1 --side 2 --format json --out " + out) == 0);
  const auto parsed = nlohmann::json::parse(slurp(out));
  REQUIRE(parsed["rows"].size() == 2);
  CHECK(parsed["rows"][1]["variance"] == "0.75");
}
