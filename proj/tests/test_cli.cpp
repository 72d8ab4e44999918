#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  explicit TempDir(const std::string& name) {
    path = fs::temp_directory_path() / ("jscat_cli_" + name);
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string operator/(const std::string& f) const { return (path / f).string(); }
};

int run(const std::string& args, const std::string& log) {
  std::string cmd = std::string(JSCAT_CLI_PATH) + " " + args + " > " + log + " 2>&1";
  int rc = std::system(cmd.c_str());
  return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void put(const std::string& path, const std::string& text) { std::ofstream(path) << text; }

}  // namespace

TEST_CASE("cli: forward on the free matrix") {
  TempDir d("free");
  put(d / "free.json", R"({"n_min": 0, "p": [], "q": []})");
  CHECK(run("forward " + (d / "free.json") + " --grid 256 --out " + d.path.string(), d / "log") == 0);
  CHECK(fs::exists(d / "scattering.json"));
  CHECK(fs::exists(d / "density.csv"));
  CHECK(slurp(d / "forward_report.json").find("\"pass\": true") != std::string::npos);
  CHECK(slurp(d / "density.csv").rfind("x,rho11,re_rho12,im_rho12,rho22\n", 0) == 0);
}

TEST_CASE("cli: validation errors exit with 2") {
  TempDir d("bad");
  put(d / "zero_p.json", R"({"n_min": 0, "p": [1.0, 0.0], "q": [0.0, 0.0]})");
  CHECK(run("forward " + (d / "zero_p.json") + " --out " + d.path.string(), d / "log") == 2);
  CHECK(slurp(d / "log").find("p must be positive") != std::string::npos);

  put(d / "corrupt.json", "{\"grid_size\": 256, \"coeffs_s_plus\": [[0, ");
  CHECK(run("diagnose " + (d / "corrupt.json") + " --out " + d.path.string(), d / "log") == 2);
  CHECK(run("forward " + (d / "zero_p.json") + " --grid 100", d / "log") == 2);
  CHECK(run("forward " + (d / "zero_p.json") + " --grid 256 --trunc 128", d / "log") == 2);
  CHECK(run("nonsense", d / "log") == 2);
  CHECK(run("forward " + (d / "missing.json"), d / "log") == 2);
}

TEST_CASE("cli: zero reflection inverts to the free matrix") {
  TempDir d("inv");
  CHECK(run("gallery --kind free --grid 1024 --out " + d.path.string(), d / "log") == 0);
  CHECK(run("inverse " + (d / "scattering.json") + " --out " + d.path.string(), d / "log") == 0);
  std::string j = slurp(d / "jacobi.json");
  CHECK(j.find("\"p\"") != std::string::npos);
  CHECK(slurp(d / "inverse_report.json").find("\"unique\": true") != std::string::npos);
}

TEST_CASE("cli: roundtrip and determinism") {
  TempDir a("rt_a"), b("rt_b");
  put(a / "J.json", R"({"n_min": -1, "p": [0.95, 0.85, 0.9], "q": [0.0, 0.0, 0.0]})");
  CHECK(run("roundtrip " + (a / "J.json") + " --grid 2048 --out " + a.path.string(), a / "log") == 0);
  CHECK(run("roundtrip " + (a / "J.json") + " --grid 2048 --out " + b.path.string(), b / "log") == 0);
  for (const char* f : {"roundtrip_report.json", "jacobi_recovered.json"})
    CHECK(slurp(a / f) == slurp(b / f));

  CHECK(run("forward " + (a / "J.json") + " --out " + a.path.string(), a / "log") == 0);
  CHECK(run("forward " + (a / "J.json") + " --out " + b.path.string(), b / "log") == 0);
  for (const char* f : {"scattering.json", "density.csv", "forward_report.json"})
    CHECK(slurp(a / f) == slurp(b / f));
}

TEST_CASE("cli: example flags non-uniqueness") {
  TempDir d("ex");
  CHECK(run("gallery --kind example_nonunique --a-plus 0.5 --a-minus 0.5 --delta-degree 2 --out " +
                d.path.string(),
            d / "log") == 0);
  CHECK(run("inverse " + (d / "scattering.json") + " --window 3 --out " + d.path.string(), d / "log") == 0);
  CHECK(slurp(d / "inverse_report.json").find("\"unique\": false") != std::string::npos);
  CHECK(run("gallery --kind example_nonunique --a-plus 1.5 --out " + d.path.string(), d / "log") == 2);
  CHECK(run("gallery --kind example_nonunique --delta-degree 1 --out " + d.path.string(), d / "log") == 2);
}

TEST_CASE("cli: diagnose the free matrix") {
  TempDir d("diag");
  put(d / "free.json", R"({"n_min": 0, "p": [], "q": []})");
  CHECK(run("diagnose " + (d / "free.json") + " --a2-levels 6 --out " + d.path.string(), d / "log") == 0);
  CHECK(slurp(d / "diagnose_report.json").find("A2/unique/invertible") != std::string::npos);
  CHECK(slurp(d / "a2_trend.csv").rfind("level,Q\n", 0) == 0);
}

TEST_CASE("cli: bernstein-szego gallery passes the Szego check") {
  TempDir d("bs");
  CHECK(run("gallery --kind bernstein_szego --poly 0.3,0.5,-0.2 --out " + d.path.string(), d / "log") == 0);
  CHECK(slurp(d / "gallery_report.json").find("\"szego_pass\": true") != std::string::npos);
}
