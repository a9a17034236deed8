// Copyright 2026 The topotex Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <doctest.h>

#include <cstdlib>
#include <fstream>
#include <string>
#include <sys/wait.h>

#include <json.hpp>

#include "helpers.hpp"
#include "topotex/image.hpp"

namespace fs = std::filesystem;

namespace {

struct Result {
  int code;
  std::string out;
};

Result run(const std::string& args, const fs::path& scratch) {
  const fs::path log = scratch / "cli.log";
  const std::string cmd = std::string(TOPOTEX_CLI_PATH) + " " + args + " > " + log.string() + " 2>&1";
  const int status = std::system(cmd.c_str());
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, testing::slurp(log)};
}

}  // namespace

TEST_CASE("persistence subcommand") {
  testing::TempDir dir("cli_persistence");
  topotex::write_pgm(testing::ring_image(), dir.path() / "ring.pgm");
  topotex::write_pgm(topotex::GrayImage(5, 5, std::uint8_t{100}), dir.path() / "flat.pgm");

  const auto r = run("persistence " + (dir.path() / "ring.pgm").string() + " --out " + (dir.path() / "o").string() +
                         " --plot --reproducible",
                     dir.path());
  CHECK(r.code == 0);
  const auto j = nlohmann::json::parse(testing::slurp(dir.path() / "o" / "ring.barcode.json"));
  CHECK(j["bars"].size() == 2);
  CHECK(j["bars"][1]["dim"] == 1);
  CHECK(j["bars"][1]["birth"] == 200);
  CHECK(j["bars"][1]["death"] == 50);
  CHECK(fs::exists(dir.path() / "o" / "ring.barcode.svg"));
  CHECK(fs::exists(dir.path() / "o" / "ring.diagram.svg"));

  CHECK(run("persistence " + (dir.path() / "flat.pgm").string() + " --out " + (dir.path() / "o").string(), dir.path())
            .code == 0);
  const auto flat = nlohmann::json::parse(testing::slurp(dir.path() / "o" / "flat.barcode.json"));
  CHECK(flat["bars"].size() == 1);
  CHECK(flat["bars"][0]["death"].is_null());

  const auto missing = run("persistence " + (dir.path() / "nope.pgm").string(), dir.path());
  CHECK(missing.code == 2);
  CHECK(missing.out.find("nope.pgm") != std::string::npos);
}

TEST_CASE("usage errors exit with 2") {
  testing::TempDir dir("cli_usage");
  CHECK(run("", dir.path()).code == 2);
  CHECK(run("frobnicate", dir.path()).code == 2);
  CHECK(run("train --out x", dir.path()).code == 2);
  CHECK(run("train --out x --pair sugar", dir.path()).code == 2);
  CHECK(run("--help", dir.path()).code == 0);
}

TEST_CASE("embed, train, evaluate and interpret") {
  testing::TempDir dir("cli_flow");
  const std::string data = (dir.path() / "data").string();
  const std::string out = (dir.path() / "run").string();
  REQUIRE(run("synth --out " + data + " --per-class 6 --seed 4", dir.path()).code == 0);
  {
    std::ofstream cfg(dir.path() / "cfg.json");
    cfg << R"({"seed": 3, "train_per_class": 4, "test_per_class": 2})";
  }
  const std::string cfg = (dir.path() / "cfg.json").string();

  const auto untrained = run("interpret --out " + out + " --pair sugar:flowers", dir.path());
  CHECK(untrained.code == 2);
  CHECK(untrained.out.find("train") != std::string::npos);

  const auto e1 = run("embed --manifest " + data + "/manifest.jsonl --config " + cfg + " --out " + out, dir.path());
  REQUIRE(e1.code == 0);
  CHECK(e1.out.find("processed: 12") != std::string::npos);
  const auto e2 =
      run("embed --manifest " + data + "/manifest.jsonl --config " + cfg + " --out " + out + " --jobs 2", dir.path());
  CHECK(e2.out.find("cache hits: 12") != std::string::npos);

  const auto missing = run("train --out " + out + " --pair sugar:fish", dir.path());
  CHECK(missing.code == 1);
  CHECK(missing.out.find("fish") != std::string::npos);

  const auto t1 = run("train --out " + out + " --pair sugar:flowers --reproducible", dir.path());
  REQUIRE(t1.code == 0);
  CHECK(t1.out.find("Test data performance: ") != std::string::npos);
  const fs::path pair = dir.path() / "run" / "pair_sugar_flowers";
  const std::string csv = testing::slurp(pair / "evaluation.csv");
  const std::string model = testing::slurp(pair / "model.json");
  const std::string scatter = testing::slurp(pair / "scatter_view1.svg");
  CHECK(csv.rfind("id,label,predicted,signed_distance\n", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 5);

  REQUIRE(run("train --out " + out + " --pair sugar:flowers --reproducible", dir.path()).code == 0);
  CHECK(testing::slurp(pair / "evaluation.csv") == csv);
  CHECK(testing::slurp(pair / "model.json") == model);
  CHECK(testing::slurp(pair / "scatter_view1.svg") == scatter);

  REQUIRE(run("evaluate --out " + out + " --pair sugar:flowers --reproducible", dir.path()).code == 0);
  CHECK(testing::slurp(pair / "evaluation.csv") == csv);

  const auto i1 = run("interpret --out " + out + " --pair sugar:flowers --reproducible", dir.path());
  REQUIRE(i1.code == 0);
  CHECK(i1.out.find("panels written: 6") != std::string::npos);
  const auto meta = nlohmann::json::parse(testing::slurp(pair / "interpret" / "interpret.json"));
  CHECK(meta["panels"].size() == 6);
  CHECK(meta["virtual"][0]["on_declared_side"] == true);
  CHECK(meta["virtual"][1]["on_declared_side"] == true);
  CHECK(meta["centroid_data"].get<std::string>().find("train+test") != std::string::npos);

  // a different split seed changes the split but not the embeddings
  REQUIRE(run("train --out " + out + " --pair sugar:flowers --seed 99 --reproducible", dir.path()).code == 0);
  CHECK(testing::slurp(pair / "split.json") != "");
}
