#include "doctest.h"

#include <filesystem>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "flyscan/errors.hpp"
#include "flyscan/run_io.hpp"

using namespace flyscan;
namespace fs = std::filesystem;

TEST_CASE("config JSON round trip covers every key")
{
  RunConfig cfg;
  cfg.objective.alpha = 2.5;
  cfg.objective.score_mode = ScoreMode::top;
  cfg.budget_cap = 0.3;
  cfg.seed = 12345678901234ull;
  const std::string text = config_to_json(cfg);
  const auto j = nlohmann::json::parse(text);
  CHECK(j.size() == config_keys().size());
  const RunConfig back = config_from_json(text);
  CHECK(back.objective.alpha == 2.5);
  CHECK(back.objective.score_mode == ScoreMode::top);
  CHECK(back.budget_cap == 0.3);
  CHECK(back.seed == 12345678901234ull);
  CHECK(config_to_json(back) == text);
}

TEST_CASE("config errors name the key")
{
  auto key_of = [](const std::string& text) {
    try {
      config_from_json(text);
    } catch (const ConfigError& e) {
      return e.key();
    }
    return std::string("<none>");
  };
  CHECK(key_of(R"({"no_such_key": 1})") == "no_such_key");
  CHECK(key_of(R"({"alpha": "x"})") == "alpha");
  CHECK(key_of(R"({"n_anchors": 0})") == "n_anchors");
  CHECK(key_of(R"({"budget_cap": null})") == "<none>");
}

TEST_CASE("set_config_value parses JSON literals and bare words")
{
  RunConfig cfg;
  set_config_value(cfg, "ell", "8");
  set_config_value(cfg, "score_mode", "top");
  CHECK(cfg.objective.ell == 8.0);
  CHECK(cfg.objective.score_mode == ScoreMode::top);
  CHECK_THROWS_AS(set_config_value(cfg, "k_idw", "eight"), ConfigError);
}

TEST_CASE("metrics CSV format")
{
  const std::vector<IterationRecord> hist{{0, 100, 0.01, 12.5, 0.5, 100, 10, 52.0},
                                          {1, 250, 0.025, 30.0, 0.9, 150, 20, 78.0}};
  const fs::path p = fs::temp_directory_path() / "flyscan_unit_metrics.csv";
  write_metrics_csv(hist, p);
  std::ifstream in(p);
  std::string header, row;
  std::getline(in, header);
  std::getline(in, row);
  CHECK(header == "iter,readouts,sampling_frac,psnr_db,ssim");
  CHECK(row == "0,100,0.01,12.5,0.5");
}

TEST_CASE("run writer refuses to overwrite without force")
{
  const fs::path dir = fs::temp_directory_path() / "flyscan_unit_writer";
  fs::remove_all(dir);
  {
    const RunWriter w(dir, false);
    std::ofstream(w.file("metrics.csv")) << "x\n";
  }
  CHECK_THROWS_AS(RunWriter(dir, false), IoError);
  CHECK_NOTHROW(RunWriter(dir, true));
}
