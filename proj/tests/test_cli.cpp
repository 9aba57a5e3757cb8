#include "doctest.h"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>

namespace fs = std::filesystem;

namespace {

const std::string kCli = HYSID_CLI_PATH;

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() / ("hysid_cli_" + std::to_string(std::random_device{}()));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

int run(const std::string& args) {
  const std::string cmd = kCli + " " + args + " > /dev/null 2>&1";
  const int rc = std::system(cmd.c_str());
  return WEXITSTATUS(rc);
}

std::string small_config(const fs::path& dir) {
  // short run so the CLI tests stay fast
  const fs::path p = dir / "config.json";
  std::ofstream os(p);
  os << R"json({
  "pool": {"ell": 3, "n_y": 1, "n_u": 2, "compensator_ready": true,
           "forced_terms": ["phi1(k-1)"], "max_terms": 6},
  "estimator": {"constrain_continuum": true},
  "plant": {"d_p": 1.6, "A": 0.9, "beta": 0.008, "gamma": 0.008},
  "sim": {"dt": 0.001, "T_s": 0.001, "duration_s": 6.0, "seed": 5},
  "excitation": {"kind": "filtered_noise", "cutoff_hz": 1.0, "order": 5, "amplitude": 70.0},
  "validation": {"amplitude": 40.0, "freq_hz": 1.0, "duration_s": 3.0},
  "reference": {"amplitude": 40.0, "freq_hz": 1.0, "duration_s": 3.0},
  "compensation": {"tau_d": 1, "tau_s": 2}
})json";
  return p.string();
}

std::string slurp(const fs::path& p) {
  std::ifstream is(p);
  std::stringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("pipeline commands produce their artifacts and are deterministic") {
  TempDir tmp;
  const std::string cfg = small_config(tmp.path);
  const fs::path out1 = tmp.path / "run1";
  const fs::path out2 = tmp.path / "run2";

  for (const fs::path& out : {out1, out2}) {
    REQUIRE(run("--config " + cfg + " --out " + out.string() + " simulate-plant") == 0);
    REQUIRE(run("--config " + cfg + " --out " + out.string() +
                " identify --data " + (out / "training.csv").string()) == 0);
    REQUIRE(run("--config " + cfg + " --out " + out.string() +
                " synthesize --model " + (out / "model.txt").string() +
                " --strategy direct") == 0);
    REQUIRE(run("--config " + cfg + " --out " + out.string() +
                " compensate --law " + (out / "law.txt").string()) == 0);
    REQUIRE(run("--config " + cfg + " --out " + out.string() +
                " analyze --model " + (out / "model.txt").string()) == 0);
    REQUIRE(run("--out " + out.string() + " report") == 0);
  }
  for (const char* name : {"training.csv", "model.txt", "selection.tsv", "law.txt",
                           "compensation.csv", "metrics.txt", "curve_loading.tsv",
                           "curve_unloading.tsv"}) {
    CAPTURE(name);
    REQUIRE(fs::exists(out1 / name));
    CHECK(slurp(out1 / name) == slurp(out2 / name));
  }
}

TEST_CASE("exit codes map the error classes") {
  TempDir tmp;
  const std::string cfg = small_config(tmp.path);
  // config error: unknown key
  const fs::path bad = tmp.path / "bad.json";
  {
    std::ofstream os(bad);
    os << R"({"plant": {"nope": 1}})";
  }
  CHECK(run("--config " + bad.string() + " --out " + tmp.path.string() + " simulate-plant") == 2);
  // config error: missing plant section
  const fs::path noplant = tmp.path / "noplant.json";
  {
    std::ofstream os(noplant);
    os << R"({"pool": {"ell": 2}})";
  }
  CHECK(run("--config " + noplant.string() + " --out " + tmp.path.string() +
            " simulate-plant") == 2);
  // structural error: synthesizing from a model with no delayed-input regressor
  const fs::path model = tmp.path / "bad_model.txt";
  {
    std::ofstream os(model);
    os << "hysid model\nformat_version 1\nsample_time 0.001\nn_y 1\nn_u 2\ntau_d 1\ntau_s 0\n"
       << "terms 2\nterm y(k-1) 1\nterm phi1(k-2) 0.5\n";
  }
  CHECK(run("--out " + tmp.path.string() + " synthesize --model " + model.string() +
            " --strategy direct") == 4);
}

TEST_CASE("sweep-sampling writes one row per sampling time") {
  TempDir tmp;
  const std::string cfg = small_config(tmp.path);
  const fs::path out = tmp.path / "sweep";
  REQUIRE(run("--config " + cfg + " --out " + out.string() +
              " sweep-sampling --ts 0.001") == 0);
  const std::string table = slurp(out / "sampling_sweep.tsv");
  CHECK(std::count(table.begin(), table.end(), '\n') == 2);  // header + one row
  // T_s that is not a multiple of dt is a config error
  CHECK(run("--config " + cfg + " --out " + out.string() +
            " sweep-sampling --ts 0.0025") == 2);
}

TEST_CASE("validation dataset command") {
  TempDir tmp;
  const std::string cfg = small_config(tmp.path);
  const fs::path out = tmp.path / "val";
  REQUIRE(run("--config " + cfg + " --out " + out.string() +
              " simulate-plant --validation") == 0);
  CHECK(fs::exists(out / "validation.csv"));
  CHECK(fs::exists(out / "validation.csv.meta.json"));
}

TEST_CASE("seed override changes the excitation") {
  TempDir tmp;
  const std::string cfg = small_config(tmp.path);
  const fs::path a = tmp.path / "a", b = tmp.path / "b";
  REQUIRE(run("--config " + cfg + " --out " + a.string() + " excite") == 0);
  REQUIRE(run("--config " + cfg + " --out " + b.string() + " --seed 99 excite") == 0);
  CHECK(slurp(a / "excitation.csv") != slurp(b / "excitation.csv"));
}
