#include <doctest.h>

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "seal/features.hpp"
#include "seal/hashing.hpp"
#include "seal/image_io.hpp"
#include "seal/metrics.hpp"
#include "seal/testset.hpp"
#include "support/fixtures.hpp"

#ifndef SEAL_CLI_PATH
#error "SEAL_CLI_PATH must be defined by the build"
#endif

using namespace seal;

namespace {

struct CmdResult {
  int exit_code;
  std::string out;
  std::string err;
};

CmdResult run_cli(const std::string& args, const std::filesystem::path& workdir) {
  const auto out_file = workdir / "stdout.txt";
  const auto err_file = workdir / "stderr.txt";
  const std::string cmd = std::string("cd ") + workdir.string() + " && " + SEAL_CLI_PATH + " " +
                          args + " > " + out_file.string() + " 2> " + err_file.string();
  const int status = std::system(cmd.c_str());
  auto slurp = [](const std::filesystem::path& p) {
    std::ifstream in(p);
    return std::string((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  };
  return {WEXITSTATUS(status), slurp(out_file), slurp(err_file)};
}

std::string file_bytes(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  return std::string((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
}

}  // namespace

TEST_CASE("cli end-to-end chain with stable exit codes") {
  fixtures::TempDir tmp("cli");
  const auto ws = tmp.path();
  save_png(fixtures::natural_image(64, 64, 41), ws / "ref.png");
  std::filesystem::create_directories(ws / "gt");
  save_png(fixtures::natural_image(48, 48, 42), ws / "gt" / "alpha.png");
  save_png(fixtures::natural_image(48, 48, 43), ws / "gt" / "beta.png");

  // pool twice -> identical manifests
  auto r1 = run_cli("pool --references ref.png --n 14 --seed 7 --out pool1", ws);
  REQUIRE(r1.exit_code == 0);
  auto r2 = run_cli("pool --references ref.png --n 14 --seed 7 --out pool2", ws);
  REQUIRE(r2.exit_code == 0);
  CHECK(file_bytes(ws / "pool1" / "pool.json") == file_bytes(ws / "pool2" / "pool.json"));

  // printed variance equals pool_variance of the emitted matrix
  {
    const auto m = read_distance_matrix(ws / "pool1" / "distances.bin");
    std::stringstream ss(r1.out);
    std::string line;
    double printed = -1.0;
    while (std::getline(ss, line)) {
      const auto pos = line.find("variance");
      if (pos != std::string::npos) {
        printed = std::stod(line.substr(line.find(':', pos) + 1));
      }
    }
    REQUIRE(printed >= 0.0);
    CHECK(printed == doctest::Approx(pool_variance(m)).epsilon(1e-4));
  }

  // cluster
  auto rc = run_cli("cluster --pool pool1/pool.json --k 3 --out clu", ws);
  REQUIRE(rc.exit_code == 0);
  CHECK(std::filesystem::exists(ws / "clu" / "medoid_recipes.jsonl"));
  CHECK(read_recipes_jsonl(ws / "clu" / "medoid_recipes.jsonl").size() == 3);

  // k > n exits 2
  CHECK(run_cli("cluster --pool pool1/pool.json --k 99 --out clu_bad", ws).exit_code == 2);

  // build-testset
  auto rb = run_cli("build-testset --recipes clu/medoid_recipes.jsonl --clean-dir gt --out set",
                    ws);
  REQUIRE(rb.exit_code == 0);
  const auto manifest = read_se_testset(ws / "set" / "testset.json");
  CHECK(manifest.case_count() == 3);

  // verify passes, then fails with exit 5 after tampering
  CHECK(run_cli("verify --manifest set/testset.json", ws).exit_code == 0);
  {
    const auto victim = ws / "set" / manifest.cases[1].entries[0].lr_path;
    std::ofstream(victim, std::ios::trunc) << "tampered";
    auto rv = run_cli("verify --manifest set/testset.json", ws);
    CHECK(rv.exit_code == 5);
    CHECK(rv.err.find("mismatch") != std::string::npos);
    // restore by rebuilding
    run_cli("build-testset --recipes clu/medoid_recipes.jsonl --clean-dir gt --out set", ws);
  }

  // lines from built-in upscalers
  auto rl = run_cli(
      "lines --testset set/testset.json --gt-dir gt --metric psnr "
      "--acceptance nearest --excellence bicubic --out lines.csv",
      ws);
  REQUIRE(rl.exit_code == 0);

  // fake SR outputs: bilinear upscale of each LR
  for (const auto& sc : manifest.cases) {
    std::filesystem::create_directories(ws / "sr" / sc.case_id);
    for (const auto& e : sc.entries) {
      const Image lr = load_image(ws / "set" / e.lr_path);
      save_png(resize(lr, lr.width * 4, lr.height * 4, ResizeMode::bilinear),
               ws / "sr" / sc.case_id / (e.image_id + ".png"));
    }
  }
  auto rs = run_cli(
      "score --sr-dir sr --gt-dir gt --testset set/testset.json --metric psnr "
      "--model-id bilerp --out scores.csv",
      ws);
  REQUIRE(rs.exit_code == 0);

  auto re = run_cli("eval --scores scores.csv --lines lines.csv --out report.json", ws);
  REQUIRE(re.exit_code == 0);
  const auto report = read_seal_report(ws / "report.json");
  CHECK(report.model_id == "bilerp");
  CHECK(report.case_ids.size() == 3);

  auto rr = run_cli("rank --reports report.json --out ranking.json", ws);
  REQUIRE(rr.exit_code == 0);
  CHECK(rr.out.find("bilerp") != std::string::npos);

  // chart needs >= 5 cases; build a 5-recipe set quickly from the pool recipes
  {
    const auto pool = read_pool(ws / "pool1" / "pool.json");
    std::vector<DegradationRecipe> five(pool.recipes.begin(), pool.recipes.begin() + 5);
    write_recipes_jsonl(five, ws / "five.jsonl");
    REQUIRE(run_cli("build-testset --recipes five.jsonl --clean-dir gt --out set5", ws)
                .exit_code == 0);
    REQUIRE(run_cli("lines --testset set5/testset.json --gt-dir gt --metric psnr "
                    "--acceptance nearest --excellence bicubic --out lines5.csv",
                    ws)
                .exit_code == 0);
    const auto m5 = read_se_testset(ws / "set5" / "testset.json");
    for (const auto& sc : m5.cases) {
      std::filesystem::create_directories(ws / "sr5" / sc.case_id);
      for (const auto& e : sc.entries) {
        const Image lr = load_image(ws / "set5" / e.lr_path);
        save_png(resize(lr, lr.width * 4, lr.height * 4, ResizeMode::bilinear),
                 ws / "sr5" / sc.case_id / (e.image_id + ".png"));
      }
    }
    REQUIRE(run_cli("score --sr-dir sr5 --gt-dir gt --testset set5/testset.json --metric psnr "
                    "--model-id bilerp --out scores5.csv",
                    ws)
                .exit_code == 0);
    REQUIRE(run_cli("eval --scores scores5.csv --lines lines5.csv --out report5.json", ws)
                .exit_code == 0);
    // a model sitting exactly on the acceptance line evaluates to AR = 0
    {
      const auto l5 = read_line_set(ws / "lines5.csv");
      ScoreTable at_line;
      at_line.model_id = "at-the-line";
      at_line.metric_id = l5.metric_id;
      at_line.orientation = l5.orientation;
      for (int i = 0; i < l5.case_count(); ++i) {
        at_line.rows.push_back({l5.case_ids[i], "alpha", l5.acceptance[i]});
      }
      write_score_table(at_line, ws / "scores_line.csv");
      REQUIRE(run_cli("eval --scores scores_line.csv --lines lines5.csv --out report_line.json",
                      ws)
                  .exit_code == 0);
      const auto fixed = read_seal_report(ws / "report_line.json");
      CHECK(fixed.ar == 0.0);
      for (double v : fixed.rprs) CHECK(v == doctest::Approx(0.5).epsilon(1e-12));
    }

    auto rp = run_cli("report --reports report5.json --lines lines5.csv --out chart.svg", ws);
    REQUIRE(rp.exit_code == 0);
    const std::string svg = file_bytes(ws / "chart.svg");
    // exactly (models + 2 lines) polylines, each carrying K points
    std::size_t polylines = 0, pos = 0;
    while ((pos = svg.find("<polyline", pos)) != std::string::npos) {
      ++polylines;
      const auto points_at = svg.find("points=\"", pos);
      const auto end = svg.find('"', points_at + 8);
      const std::string pts = svg.substr(points_at + 8, end - points_at - 8);
      CHECK(std::count(pts.begin(), pts.end(), ',') == 5);
      pos = end;
    }
    CHECK(polylines == 1 + 2);
  }
}

TEST_CASE("cli multi-reference clustering averages the matrices") {
  fixtures::TempDir tmp("cli2ref");
  const auto ws = tmp.path();
  save_png(fixtures::natural_image(48, 48, 51), ws / "r1.png");
  save_png(fixtures::natural_image(48, 48, 52), ws / "r2.png");
  auto rp = run_cli("pool --references r1.png r2.png --n 8 --seed 3 --out pool", ws);
  REQUIRE(rp.exit_code == 0);
  CHECK(std::filesystem::exists(ws / "pool" / "distances_ref0.bin"));
  CHECK(std::filesystem::exists(ws / "pool" / "distances_ref1.bin"));
  // the emitted averaged matrix equals the average of the per-reference ones
  const auto m0 = read_distance_matrix(ws / "pool" / "distances_ref0.bin");
  const auto m1 = read_distance_matrix(ws / "pool" / "distances_ref1.bin");
  const auto avg = read_distance_matrix(ws / "pool" / "distances.bin");
  const auto expected = average_matrices({m0, m1});
  REQUIRE(avg.entries.size() == expected.entries.size());
  for (std::size_t i = 0; i < avg.entries.size(); ++i) {
    CHECK(avg.entries[i] == doctest::Approx(expected.entries[i]).epsilon(1e-15));
  }
  auto rc = run_cli("cluster --pool pool/pool.json --k 2 --out clu --emit-embedding", ws);
  REQUIRE(rc.exit_code == 0);
  CHECK(rc.out.find("average of 2 reference") != std::string::npos);
  CHECK(std::filesystem::exists(ws / "clu" / "embedding.csv"));
}

TEST_CASE("cli error paths") {
  fixtures::TempDir tmp("clierr");
  const auto ws = tmp.path();
  SUBCASE("missing reference exits 3 and names the path") {
    auto r = run_cli("pool --references missing_ref.png --n 4 --seed 1 --out p", ws);
    CHECK(r.exit_code == 3);
    CHECK(r.err.find("missing_ref.png") != std::string::npos);
  }
  SUBCASE("bad flag exits 2") {
    CHECK(run_cli("pool --definitely-not-a-flag", ws).exit_code == 2);
  }
  SUBCASE("unreadable manifest exits 3") {
    CHECK(run_cli("cluster --pool nothere/pool.json --k 2 --out c", ws).exit_code == 3);
  }
}
