#include <doctest.h>

#include <fstream>
#include <set>

#include "seal/errors.hpp"
#include "seal/hashing.hpp"
#include "seal/image_io.hpp"
#include "seal/metrics.hpp"
#include "seal/scoring.hpp"
#include "seal/testset.hpp"
#include "support/fixtures.hpp"

using namespace seal;

namespace {

PipelineConfig fast_config() {
  PipelineConfig cfg;
  cfg.kernel_size_range = {7, 11};  // keep unit tests quick
  return cfg;
}

std::vector<std::filesystem::path> write_cleans(const std::filesystem::path& dir, int count,
                                                int size = 32) {
  std::filesystem::create_directories(dir);
  std::vector<std::filesystem::path> paths;
  for (int i = 0; i < count; ++i) {
    const auto p = dir / ("clean_" + std::to_string(i) + ".png");
    save_png(fixtures::natural_image(size, size, 1000 + i), p);
    paths.push_back(p);
  }
  return paths;
}

std::string file_bytes(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  return std::string((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
}

}  // namespace

TEST_CASE("build_pool") {
  fixtures::TempDir tmp("pool");
  const auto refs = write_cleans(tmp.path() / "refs", 2, 48);

  SUBCASE("fixed seed reproduces manifests and hashes") {
    const auto a = build_pool({refs[0]}, 10, fast_config(), 77, tmp.path() / "a");
    const auto b = build_pool({refs[0]}, 10, fast_config(), 77, tmp.path() / "b");
    CHECK(file_bytes(tmp.path() / "a" / "pool.json") == file_bytes(tmp.path() / "b" / "pool.json"));
    for (int i = 0; i < 10; ++i) CHECK(a.images[0][i].sha256 == b.images[0][i].sha256);
  }
  SUBCASE("two references yield 2n images and n recipes") {
    const auto pool = build_pool({refs[0], refs[1]}, 10, fast_config(), 5, tmp.path() / "two");
    CHECK(pool.recipes.size() == 10);
    CHECK(pool.images.size() == 2);
    CHECK(pool.images[0].size() == 10);
    CHECK(pool.images[1].size() == 10);
    int files = 0;
    for (const auto& e : std::filesystem::recursive_directory_iterator(tmp.path() / "two")) {
      if (e.path().extension() == ".png") ++files;
    }
    CHECK(files == 20);
  }
  SUBCASE("pool replays bit-exactly from manifest recipes alone") {
    build_pool({refs[0]}, 6, fast_config(), 13, tmp.path() / "replay");
    const auto pool = read_pool(tmp.path() / "replay" / "pool.json");
    const Image ref = crop_to_multiple(load_image(refs[0]), pool.config.scale_factor);
    for (int i = 0; i < pool.n; ++i) {
      const Image lr = apply_recipe(ref, pool.recipes[i]);
      const auto bytes = encode_png(to_u8(lr));
      CHECK(sha256_hex(bytes.data(), bytes.size()) == pool.images[0][i].sha256);
    }
  }
  SUBCASE("verify flags tampered files") {
    build_pool({refs[0]}, 4, fast_config(), 3, tmp.path() / "v");
    const auto pool = read_pool(tmp.path() / "v" / "pool.json");
    CHECK(verify_pool(pool).empty());
    std::ofstream(pool.root / pool.images[0][2].image_path, std::ios::trunc) << "damaged";
    const auto bad = verify_pool(pool);
    REQUIRE(bad.size() == 1);
    CHECK(bad[0].find("d2") != std::string::npos);
  }
  SUBCASE("n below 2 is rejected") {
    CHECK_THROWS_AS(build_pool({refs[0]}, 1, fast_config(), 1, tmp.path() / "bad"), ConfigError);
  }
}

TEST_CASE("se test set") {
  fixtures::TempDir tmp("se");
  const auto cleans = write_cleans(tmp.path() / "clean", 3);
  SeededRng rng(7);
  std::vector<DegradationRecipe> recipes;
  for (int i = 0; i < 2; ++i) {
    auto r = sample_recipe(rng, fast_config());
    r.recipe_id = "r" + std::to_string(i);
    recipes.push_back(r);
  }

  SUBCASE("K=2, M=3 gives 6 files and a manifest of 2x3") {
    const auto m = build_se_testset(recipes, cleans, tmp.path() / "set");
    CHECK(m.case_count() == 2);
    for (const auto& sc : m.cases) CHECK(sc.entries.size() == 3);
    for (const auto& sc : m.cases) {
      for (const auto& e : sc.entries) {
        CHECK(std::filesystem::exists(m.root / e.lr_path));
      }
    }
    CHECK(verify_se_testset(m).empty());
  }
  SUBCASE("manifest round-trip preserves everything") {
    const auto m = build_se_testset(recipes, cleans, tmp.path() / "rt");
    const auto back = read_se_testset(tmp.path() / "rt" / "testset.json");
    CHECK(back.testset_id == m.testset_id);
    CHECK(back.scale_factor == m.scale_factor);
    CHECK(back.noise_mode == m.noise_mode);
    CHECK(back.clean_image_ids == m.clean_image_ids);
    REQUIRE(back.case_count() == m.case_count());
    for (int c = 0; c < m.case_count(); ++c) {
      CHECK(back.cases[c].case_id == m.cases[c].case_id);
      CHECK(back.cases[c].recipe == m.cases[c].recipe);
      for (std::size_t e = 0; e < m.cases[c].entries.size(); ++e) {
        CHECK(back.cases[c].entries[e].sha256 == m.cases[c].entries[e].sha256);
      }
    }
  }
  SUBCASE("rebuild reproduces identical hashes") {
    const auto a = build_se_testset(recipes, cleans, tmp.path() / "h1");
    const auto b = build_se_testset(recipes, cleans, tmp.path() / "h2");
    for (int c = 0; c < a.case_count(); ++c) {
      for (std::size_t e = 0; e < a.cases[c].entries.size(); ++e) {
        CHECK(a.cases[c].entries[e].sha256 == b.cases[c].entries[e].sha256);
      }
    }
  }
  SUBCASE("per-image noise differs across images, frozen noise replays verbatim") {
    auto noisy = recipes;
    // make sure there is a stochastic step
    bool has = false;
    for (const auto& s : noisy[0].steps) has = has || step_kind_stochastic(s.kind);
    if (!has) {
      DegradationStep ns;
      ns.kind = StepKind::gaussian_noise;
      ns.sigma = 25.0;
      ns.noise_seed = 42;
      noisy[0].steps.insert(noisy[0].steps.begin(), ns);
    }
    const auto per_image = recipe_for_image(noisy[0], "img_a", NoiseMode::per_image);
    const auto per_image_b = recipe_for_image(noisy[0], "img_b", NoiseMode::per_image);
    const auto frozen = recipe_for_image(noisy[0], "img_a", NoiseMode::frozen);
    CHECK(frozen == noisy[0]);
    CHECK(per_image != per_image_b);
    CHECK(per_image != noisy[0]);
  }
  SUBCASE("deleting one case leaves the others verifiable") {
    const auto m = build_se_testset(recipes, cleans, tmp.path() / "del");
    std::filesystem::remove_all(m.root / "cases" / m.cases[0].case_id);
    const auto bad = verify_se_testset(m);
    CHECK(bad.size() == 3);  // exactly the deleted case's files
    for (const auto& b : bad) CHECK(b.find(m.cases[0].case_id) != std::string::npos);
  }
}

TEST_CASE("toy sets") {
  fixtures::TempDir tmp("toy");
  const auto ref = tmp.path() / "ref.png";
  save_png(fixtures::natural_image(48, 48, 5), ref);

  SUBCASE("blur100 cardinality, parameters, and bands") {
    const auto toy = build_toy(ToyKind::blur100, ref, 3, tmp.path() / "blur");
    CHECK(toy.items.size() == 100);
    for (const auto& it : toy.items) {
      CHECK(it.parameter >= 0.1);
      CHECK(it.parameter <= 4.0);
      CHECK(it.label == blur_label(it.parameter));
      CHECK(it.label >= 1);
      CHECK(it.label <= 4);
    }
    CHECK(blur_label(0.5) == 1);
    CHECK(blur_label(1.0) == 1);
    CHECK(blur_label(1.5) == 2);
    CHECK(blur_label(4.0) == 4);
  }
  SUBCASE("noise100 top band") {
    CHECK(noise_label(39.0) == 4);
    CHECK(noise_label(1.0) == 1);
    const auto toy = build_toy(ToyKind::noise100, ref, 3, tmp.path() / "noise");
    CHECK(toy.items.size() == 100);
    for (const auto& it : toy.items) {
      CHECK(it.label == noise_label(it.parameter));
    }
  }
  SUBCASE("bn100 has 200 items and 8 labels") {
    const auto toy = build_toy(ToyKind::bn100, ref, 3, tmp.path() / "bn");
    CHECK(toy.items.size() == 200);
    std::set<int> labels;
    for (const auto& it : toy.items) labels.insert(it.label);
    CHECK(labels.size() == 8);
    for (int l : labels) {
      CHECK(l >= 1);
      CHECK(l <= 8);
    }
  }
  SUBCASE("manifest round-trip and determinism") {
    const auto a = build_toy(ToyKind::blur100, ref, 11, tmp.path() / "d1");
    const auto b = build_toy(ToyKind::blur100, ref, 11, tmp.path() / "d2");
    for (std::size_t i = 0; i < a.items.size(); ++i) {
      CHECK(a.items[i].parameter == b.items[i].parameter);
    }
    const auto back = read_toy(tmp.path() / "d1" / "toy.json");
    CHECK(back.items.size() == a.items.size());
    CHECK(back.kind == ToyKind::blur100);
  }
}

TEST_CASE("builtin lines from classical upscalers") {
  fixtures::TempDir tmp("line");
  const auto cleans = write_cleans(tmp.path() / "gt", 2, 44);
  SeededRng rng(19);
  std::vector<DegradationRecipe> recipes;
  for (int i = 0; i < 5; ++i) {
    auto r = sample_recipe(rng, fast_config());
    r.recipe_id = "r" + std::to_string(i);
    recipes.push_back(r);
  }
  const auto manifest = build_se_testset(recipes, cleans, tmp.path() / "set");

  const auto nearest =
      builtin_line_scores(manifest, tmp.path() / "gt", ResizeMode::nearest, "psnr");
  const auto bicubic =
      builtin_line_scores(manifest, tmp.path() / "gt", ResizeMode::bicubic, "psnr");
  REQUIRE(nearest.size() == 5);
  double nearest_mean = 0.0, bicubic_mean = 0.0;
  for (std::size_t i = 0; i < nearest.size(); ++i) {
    nearest_mean += nearest[i];
    bicubic_mean += bicubic[i];
  }
  CHECK(bicubic_mean >= nearest_mean);  // bicubic never loses on average

  const auto lines = builtin_line(manifest, tmp.path() / "gt", ResizeMode::nearest,
                                  ResizeMode::bicubic, "psnr");
  CHECK(lines.provenance == "builtin-upscaler(nearest/bicubic)");
  CHECK(lines.case_count() == 5);
  // the LineSet invariant gate: every case must have bicubic strictly better,
  // otherwise make_line_set (inside builtin_line) would have thrown
  for (int i = 0; i < 5; ++i) CHECK(lines.excellence[i] > lines.acceptance[i]);
}

TEST_CASE("score_outputs") {
  fixtures::TempDir tmp("score");
  const auto cleans = write_cleans(tmp.path() / "gt", 2, 40);
  SeededRng rng(23);
  std::vector<DegradationRecipe> recipes;
  for (int i = 0; i < 2; ++i) {
    auto r = sample_recipe(rng, fast_config());
    r.recipe_id = "r" + std::to_string(i);
    recipes.push_back(r);
  }
  const auto manifest = build_se_testset(recipes, cleans, tmp.path() / "set");

  SUBCASE("GT copies score infinite psnr; 2x2 gives 4 rows") {
    for (const auto& sc : manifest.cases) {
      std::filesystem::create_directories(tmp.path() / "sr" / sc.case_id);
      for (const auto& e : sc.entries) {
        const Image gt = crop_to_multiple(load_image(tmp.path() / "gt" / (e.image_id + ".png")),
                                          manifest.scale_factor);
        save_png(gt, tmp.path() / "sr" / sc.case_id / (e.image_id + ".png"));
      }
    }
    const auto table = score_outputs(tmp.path() / "sr", tmp.path() / "gt", manifest, "psnr", "m");
    CHECK(table.rows.size() == 4);
    for (const auto& row : table.rows) CHECK(std::isinf(row.value));
  }
  SUBCASE("bicubic SR spot check against a direct psnr call") {
    for (const auto& sc : manifest.cases) {
      std::filesystem::create_directories(tmp.path() / "sr2" / sc.case_id);
      for (const auto& e : sc.entries) {
        const Image lr = load_image(manifest.root / e.lr_path);
        const Image up = resize(lr, lr.width * 4, lr.height * 4, ResizeMode::bicubic);
        save_png(up, tmp.path() / "sr2" / sc.case_id / (e.image_id + ".png"));
      }
    }
    const auto table =
        score_outputs(tmp.path() / "sr2", tmp.path() / "gt", manifest, "psnr", "m");
    const auto& sc = manifest.cases[0];
    const auto& e = sc.entries[0];
    const Image up = load_image(tmp.path() / "sr2" / sc.case_id / (e.image_id + ".png"));
    const Image gt = crop_to_multiple(load_image(tmp.path() / "gt" / (e.image_id + ".png")), 4);
    const double direct = psnr(up, gt);
    for (const auto& row : table.rows) {
      if (row.case_id == sc.case_id && row.image_id == e.image_id) {
        CHECK(row.value == doctest::Approx(direct).epsilon(1e-12));
      }
    }
  }
  SUBCASE("missing outputs are listed, not skipped") {
    std::filesystem::create_directories(tmp.path() / "tiny" / manifest.cases[0].case_id);
    const auto& e = manifest.cases[0].entries[0];
    const Image lr = load_image(manifest.root / e.lr_path);
    save_png(resize(lr, lr.width * 4, lr.height * 4, ResizeMode::bicubic),
             tmp.path() / "tiny" / manifest.cases[0].case_id / (e.image_id + ".png"));
    CHECK_THROWS_WITH_AS(
        score_outputs(tmp.path() / "tiny", tmp.path() / "gt", manifest, "psnr", "m"),
        doctest::Contains("missing SR outputs (3)"), DataError);
  }
}
