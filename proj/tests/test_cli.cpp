#include "commands.hpp"

#include "lambda_train/io.hpp"

#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace fs = std::filesystem;
using lambda_train::cli::run;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result call(const std::vector<std::string>& args, const std::string& input = {}) {
  std::istringstream in(input);
  std::ostringstream out, err;
  const int code = run(args, in, out, err);
  return {code, out.str(), err.str()};
}

std::vector<std::vector<double>> parse_csv(const std::string& text, std::string* header = nullptr) {
  std::istringstream is(text);
  std::string line;
  std::getline(is, line);
  if (header) *header = line;
  std::vector<std::vector<double>> rows;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::vector<double> row;
    std::stringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) row.push_back(std::stod(cell));
    rows.push_back(row);
  }
  return rows;
}

std::string design(int pairs) {
  return call({"design", "--pairs", std::to_string(pairs), "--shape", "gaussian", "--width", "1", "--spacing", "6"})
      .out;
}

fs::path scratch_dir() {
  auto dir = fs::temp_directory_path() / "lambda_train_cli_test";
  fs::create_directories(dir);
  return dir;
}

}  // namespace

TEST_CASE("design") {
  SUBCASE("two pairs") {
    const auto r = call({"design", "--pairs", "2", "--shape", "gaussian", "--width", "1", "--spacing", "6"});
    REQUIRE(r.code == 0);
    const auto j = nlohmann::json::parse(r.out);
    CHECK(j["pairs"][0]["theta"].get<double>() == 0.3926991);
    CHECK(j["pairs"][1]["theta"].get<double>() == 1.1780972);
    CHECK(r.out.find("0.3926991") != std::string::npos);
  }
  SUBCASE("one pair has equal peak amplitudes") {
    const auto j = nlohmann::json::parse(design(1));
    const double theta = j["pairs"][0]["theta"].get<double>();
    CHECK(std::abs(std::sin(theta) - std::cos(theta)) < 1e-7);
  }
  SUBCASE("explicit angles and rectangular shape") {
    const auto r = call({"design", "--pairs", "2", "--shape", "rect", "--angles", "0.1, 0.2"});
    REQUIRE(r.code == 0);
    const auto j = nlohmann::json::parse(r.out);
    CHECK(j["pairs"][1]["theta"].get<double>() == 0.2);
    CHECK(j["pairs"][1]["shape"]["kind"] == "rect");
  }
  SUBCASE("invalid input") {
    CHECK(call({"design", "--pairs", "0"}).code == 2);
    CHECK(call({"design"}).code == 2);
    CHECK(call({"design", "--pairs", "2", "--shape", "lorentz"}).code == 2);
    CHECK(call({"design", "--pairs", "2", "--angles", "0.1,x"}).code == 2);
    CHECK(call({"design", "--pairs", "2", "--angles", "0.1"}).code == 2);
    const auto r = call({"design", "--pairs", "2", "--spacing", "3"});
    CHECK(r.code == 2);
    CHECK(r.err.find("minimum of 4") != std::string::npos);
    CHECK(call({"bogus"}).code == 2);
    CHECK(call({}).code == 2);
  }
}

TEST_CASE("simulate") {
  SUBCASE("eight pairs without loss") {
    const auto r = call({"simulate", "--train", "-", "--stride", "20"}, design(8));
    REQUIRE(r.code == 0);
    std::string header;
    const auto rows = parse_csv(r.out, &header);
    CHECK(header == "t,omega_p,omega_s,P1,P2,P3,norm2");
    CHECK(rows.back()[5] == doctest::Approx(1.0).epsilon(1e-4));
    const auto summary = nlohmann::json::parse(r.err);
    CHECK(std::abs(summary["p2_max"].get<double>() - 0.0096) < 1e-4);
    CHECK(summary["per_pair_p2_max"].size() == 8);
    CHECK(std::abs(summary["final_populations"]["P3"].get<double>() - 1.0) < 1e-4);
  }
  SUBCASE("eight pairs with loss rate 1/T") {
    const auto r = call({"simulate", "--gamma", "1", "--stride", "100"}, design(8));
    REQUIRE(r.code == 0);
    const auto summary = nlohmann::json::parse(r.err);
    CHECK(std::abs(summary["final_populations"]["P3"].get<double>() - 0.93) < 0.02);
    CHECK(summary["lost_population"].get<double>() > 0.05);
  }
  SUBCASE("empty train") {
    const std::string empty = R"({"pairs": [], "gamma": 0, "grid": {"t_start": 0, "t_end": 10, "dt": 0.05}})";
    const auto r = call({"simulate"}, empty);
    REQUIRE(r.code == 0);
    const auto rows = parse_csv(r.out);
    CHECK(rows.size() == 201);
    for (const auto& row : rows) {
      CHECK(row[3] == 1.0);
      CHECK(row[4] == 0.0);
      CHECK(row[5] == 0.0);
    }
  }
  SUBCASE("errors") {
    CHECK(call({"simulate", "--train", "/nonexistent/train.json"}).code == 2);
    CHECK(call({"simulate"}, "{not json").code == 2);
    CHECK(call({"simulate"}, R"({"pairs": []})").code == 2);
    const auto coarse = call({"simulate", "--dt", "0.1"}, design(1));
    CHECK(coarse.code == 3);
    CHECK(coarse.err.find("exceeds") != std::string::npos);
  }
  SUBCASE("output is bit-stable") {
    const auto a = call({"simulate", "--stride", "40"}, design(3));
    const auto b = call({"simulate", "--stride", "40"}, design(3));
    CHECK(a.out == b.out);
    CHECK(a.err == b.err);
  }
  SUBCASE("files: design, simulate from file, summary and gnuplot") {
    const auto dir = scratch_dir();
    const auto train = dir / "train.json";
    const auto csv = dir / "run.csv";
    const auto summary = dir / "summary.json";
    const auto plot = dir / "run.gp";
    {
      std::ofstream(train) << design(5);
    }
    const auto r = call({"simulate", "--train", train.string(), "--out", csv.string(), "--summary",
                         summary.string(), "--gnuplot", plot.string(), "--stride", "25"});
    REQUIRE(r.code == 0);
    std::ifstream sf(summary);
    const auto s = nlohmann::json::parse(sf);
    CHECK(s["pairs"] == 5);
    std::ifstream pf(plot);
    const std::string script((std::istreambuf_iterator<char>(pf)), {});
    CHECK(script.find(csv.string()) != std::string::npos);

    // The file read back holds exactly what design wrote.
    std::ifstream tf(train);
    const auto parsed = lambda_train::train_from_json(nlohmann::json::parse(tf));
    CHECK(lambda_train::train_to_json(parsed) == nlohmann::json::parse(design(5)));
    fs::remove_all(dir);
  }
}

TEST_CASE("verify") {
  SUBCASE("p2max") {
    const auto r = call({"verify", "--claim", "p2max", "--pairs", "2"});
    CHECK(r.code == 0);
    CHECK(r.out.find("0.14644") != std::string::npos);
    CHECK(r.out.find("\"pass\": true") != std::string::npos);
  }
  SUBCASE("optimal angles") {
    const auto r = call({"verify", "--claim", "optimal-angles", "--pairs", "2", "--grid-points", "720"});
    CHECK(r.code == 0);
  }
  SUBCASE("crosscheck") { CHECK(call({"verify", "--claim", "crosscheck", "--pairs", "5"}).code == 0); }
  SUBCASE("equal maxima") { CHECK(call({"verify", "--claim", "equal-maxima", "--pairs", "4"}).code == 0); }
  SUBCASE("a failing claim exits 1") {
    const auto grid = call({"verify", "--claim", "optimal-angles", "--pairs", "1", "--grid-points", "91"});
    CHECK(grid.code == 1);
    CHECK(grid.out.find("\"pass\": false") != std::string::npos);
  }
  SUBCASE("invalid flags") {
    CHECK(call({"verify", "--claim", "nonsense", "--pairs", "2"}).code == 2);
    CHECK(call({"verify", "--claim", "p2max"}).code == 2);
    CHECK(call({"verify", "--claim", "optimal-angles", "--pairs", "4"}).code == 2);
  }
}

TEST_CASE("sweep") {
  SUBCASE("lossy transfer improves with more pairs") {
    const auto r = call({"sweep", "--pairs-from", "1", "--pairs-to", "8", "--gamma", "1"});
    REQUIRE(r.code == 0);
    std::string header;
    const auto rows = parse_csv(r.out, &header);
    CHECK(header == "N,p2_max_analytic,p2_max_numeric,final_P3_lossless,final_P3_lossy");
    REQUIRE(rows.size() == 8);
    for (std::size_t i = 0; i < rows.size(); ++i) {
      CHECK(rows[i][0] == static_cast<double>(i + 1));
      CHECK(std::abs(rows[i][3] - 1.0) <= 1e-4);
      CHECK(rows[i][2] / rows[i][1] >= 0.999);
      CHECK(rows[i][2] / rows[i][1] <= 1.001);
      if (i > 0) CHECK(rows[i][4] > rows[i - 1][4]);
    }
    CHECK(std::abs(rows.front()[4] - 0.63) < 0.02);
    CHECK(std::abs(rows.back()[4] - 0.93) < 0.02);
  }
  SUBCASE("deterministic") {
    const auto a = call({"sweep", "--pairs-from", "2", "--pairs-to", "4", "--gamma", "0.5"});
    const auto b = call({"sweep", "--pairs-from", "2", "--pairs-to", "4", "--gamma", "0.5"});
    CHECK(a.out == b.out);
  }
  CHECK(call({"sweep", "--pairs-from", "5", "--pairs-to", "2"}).code == 2);
}
