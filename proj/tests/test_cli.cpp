#include <doctest.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "alphaeff/cli.hpp"
#include "alphaeff/dataio.hpp"

using namespace alphaeff;
using nlohmann::json;

namespace {

struct Result {
  int code = 0;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args, const std::string &input = "") {
  std::istringstream in(input);
  std::ostringstream out;
  std::ostringstream err;
  Result r;
  r.code = cli::run(args, in, out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

std::string shell(const std::string &cmd) {
  std::string result;
  FILE *p = popen(cmd.c_str(), "r");
  REQUIRE(p != nullptr);
  std::array<char, 4096> buf{};
  while (std::size_t n = std::fread(buf.data(), 1, buf.size(), p))
    result.append(buf.data(), n);
  const int status = pclose(p);
  CHECK(status == 0);
  return result;
}

const std::string kData = ALPHAEFF_DATA_DIR;

std::filesystem::path temp_path(const std::string &name) {
  return std::filesystem::temp_directory_path() /
         ("alphaeff_test_" + std::to_string(::getpid()) + "_" + name);
}

} // namespace

TEST_CASE("help and usage") {
  CHECK(run({"--help"}).code == 0);
  CHECK(run({"analyze", "--help"}).code == 0);
  CHECK(run({}).code == cli::kValidationError);
  CHECK(run({"frobnicate"}).code == cli::kValidationError);
  CHECK(run({"analyze", "--format", "xml", "-"}).code == cli::kValidationError);
}

TEST_CASE("analyze from stdin") {
  const auto r = run({"analyze", "--format", "csv", "-"},
                     "label,k,value,kind\nx,1,10,time\nx,2,6,time\n");
  CHECK(r.code == 0);
  CHECK(r.out.rfind("label,k,value,kind,efficiency", 0) == 0);
  CHECK(r.out.find("x,2,") != std::string::npos);
  CHECK(r.out.find("# fit") == std::string::npos);
}

TEST_CASE("analyze a file with --fit") {
  const auto r = run({"analyze", "--fit", "--format", "json",
                      kData + "/examples/generated_alpha09.csv"});
  REQUIRE(r.code == 0);
  const auto j = json::parse(r.out);
  CHECK(j["reports"][0]["fit"]["alpha"].get<double>() == doctest::Approx(0.9).epsilon(1e-9));
}

TEST_CASE("analyze empty input prints header only") {
  const auto r =
      run({"analyze", "--format", "csv", kData + "/examples/empty.csv"});
  CHECK(r.code == 0);
  CHECK(r.out ==
        "label,k,value,kind,efficiency,alpha_eff,serial_fraction,regime\n");
  CHECK(r.err.find("warning") != std::string::npos);
}

TEST_CASE("analyze errors") {
  CHECK(run({"analyze", "/nonexistent/file.csv"}).code == cli::kIoError);
  const auto bad = run({"analyze", "-"}, "label,k,value,kind\nx,1,-3,time\n");
  CHECK(bad.code == cli::kValidationError);
  CHECK(bad.err.find("line 2") != std::string::npos);
  CHECK(run({"analyze", "fixtures://nope"}).code == cli::kValidationError);
  CHECK(run({"analyze", "--plot", "efficiency", "--format", "csv", "-"},
            "label,k,value,kind\nx,1,1,speedup\n")
            .code == cli::kValidationError);
}

TEST_CASE("analyze fixtures and plot data") {
  const auto r = run({"analyze", "--plot", "serial-fraction",
                      "fixtures://linpack_architectures"});
  CHECK(r.code == 0);
  CHECK(r.out.find("series: Cray Y-MP/8") != std::string::npos);
  CHECK(r.out.find("# y: serial_fraction") != std::string::npos);

  const auto plot_path = temp_path("plot.dat");
  const auto r2 = run({"analyze", "--format", "csv", "--plot", "efficiency",
                       "--plot-out", plot_path.string(), "--xscale", "linear",
                       "fixtures://audio_radar"});
  CHECK(r2.code == 0);
  std::ifstream f(plot_path);
  std::string plot((std::istreambuf_iterator<char>(f)), {});
  CHECK(plot.find("# xscale: linear") != std::string::npos);
  std::filesystem::remove(plot_path);

  const auto soc = run({"analyze", "fixtures://soc_rastrigin"});
  CHECK(soc.code == 0);
  CHECK(soc.err.find("warning") != std::string::npos);
}

TEST_CASE("analyze output file") {
  const auto path = temp_path("report.csv");
  CHECK(run({"analyze", "--format", "csv", "-o", path.string(),
             kData + "/examples/wall_times.csv"})
            .code == 0);
  std::ifstream f(path);
  std::string text((std::istreambuf_iterator<char>(f)), {});
  CHECK(text.rfind("label,k,value,kind", 0) == 0);
  std::filesystem::remove(path);
}

TEST_CASE("simulate") {
  const auto r = run({"simulate", "fixtures://realistic", "--k", "3",
                      "--format", "json"});
  REQUIRE(r.code == 0);
  const auto j = json::parse(r.out);
  CHECK(j["t_total"].get<double>() == 7.0);
  CHECK(std::abs(j["alpha_eff"].get<double>() - 0.45) < 1e-12);
  CHECK(j["processors"].size() == 3);

  const auto t = run({"simulate", kData + "/scenarios/classic.json", "--k", "3"});
  CHECK(t.code == 0);
  CHECK(t.out.find("t_total:    5") != std::string::npos);
  CHECK(t.out.find("P2") != std::string::npos);

  const auto e = run({"simulate", "-", "--k", "2", "--policy", "explicit",
                      "--assign", "0,0,0"},
                     std::string(scenario_json("classic")));
  CHECK(e.code == 0);

  CHECK(run({"simulate", "fixtures://classic", "--k", "2", "--policy",
             "explicit"})
            .code == cli::kValidationError);
  CHECK(run({"simulate", "fixtures://classic", "--k", "0"}).code ==
        cli::kValidationError);
  CHECK(run({"simulate", "fixtures://classic", "--k", "2", "--policy",
             "explicit", "--assign", "0,5,0"})
            .code == cli::kValidationError);
}

TEST_CASE("simulate warns on a slowdown") {
  const auto r = run({"simulate", "-", "--k", "2"},
                     R"({"segments": [{"kind": "S", "duration": 1},
                                      {"kind": "P", "duration": 1},
                                      {"kind": "C", "duration": 5}]})");
  CHECK(r.code == 0);
  CHECK(r.err.find("slowdown") != std::string::npos);
}

TEST_CASE("surface") {
  const auto r = run({"surface", "--format", "json"});
  REQUIRE(r.code == 0);
  const auto j = json::parse(r.out);
  CHECK(j["seq_axis"].size() == 11);
  CHECK(j["overhead_axis"].size() == 11);
  CHECK(j["alpha_eff"][0][0].get<double>() == doctest::Approx(1.0));

  const auto plot = run({"surface", "--steps", "3"});
  CHECK(plot.code == 0);
  CHECK(plot.out.find("# series: seq_time=0\n") != std::string::npos);

  CHECK(run({"surface", "--steps", "1"}).code == cli::kValidationError);
  CHECK(run({"surface", "--seq-range", "0.5"}).code == cli::kValidationError);
  CHECK(run({"surface", "--seq-range", "1:0"}).code == cli::kValidationError);
}

TEST_CASE("bench") {
  const auto r = run({"bench", "--alpha", "0.5", "--total-ms", "20", "--k",
                      "2", "--reps", "1"});
  REQUIRE(r.code == 0);
  const auto parsed = parse_measurements(r.out, InputFormat::Csv);
  REQUIRE(parsed.series.size() == 1);
  CHECK(parsed.series[0].points().size() == 2);

  CHECK(run({"bench", "--alpha", "2"}).code == cli::kValidationError);
  CHECK(run({"bench", "--k", "1,64", "--max-workers", "8"}).code ==
        cli::kValidationError);
  CHECK(run({"bench", "--spec", "/nonexistent.json"}).code == cli::kIoError);

  const auto spec = run({"bench", "--spec", "-", "--total-ms", "20",
                         "--format", "json"},
                        R"({"alpha": 0.5, "k_list": [2], "reps": 1})");
  CHECK(spec.code == 0);
  CHECK(json::parse(spec.out)["series"][0]["points"].size() == 2);
}

TEST_CASE("fixtures subcommand") {
  const auto list = run({"fixtures", "list"});
  CHECK(list.code == 0);
  for (const auto &id : fixture_ids())
    CHECK(list.out.find(id) != std::string::npos);

  CHECK(run({"fixtures", "show", "linpack_architectures"}).code == 0);
  CHECK(run({"fixtures", "show", "nope"}).code == cli::kValidationError);

  const auto exp = run({"fixtures", "export", "audio_radar"});
  CHECK(exp.code == 0);
  CHECK(exp.out == fixture_csv("audio_radar"));

  const auto j = run({"fixtures", "--format", "json", "export", "audio_radar"});
  CHECK(j.code == 0);
  CHECK(json::parse(j.out).contains("series"));
}

TEST_CASE("binary: bench piped into analyze") {
  const std::string cli = ALPHAEFF_CLI_PATH;
  const auto out = shell("'" + cli +
                         "' bench --alpha 0.5 --total-ms 20 --k 2 --reps 1 | '" +
                         cli + "' analyze --format csv -");
  CHECK(out.rfind("label,k,value,kind,efficiency", 0) == 0);
  CHECK(out.find(",1,1,speedup,") != std::string::npos);
}
