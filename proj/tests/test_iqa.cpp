#include <doctest.h>

#include <cmath>
#include <fstream>

#include "seal/degrade.hpp"
#include "seal/errors.hpp"
#include "seal/iqa.hpp"
#include "support/fixtures.hpp"

using namespace seal;

namespace {

// Direct-definition SSIM oracle: explicit 2-D gaussian-weighted windows,
// independent of the separable implementation under test.
double ssim_oracle(const Image& a, const Image& b) {
  const int w = a.width, h = a.height;
  auto luma = [](const Image& img, int x, int y) {
    return luma601(quantize_sample(img.at(x, y, 0)), quantize_sample(img.at(x, y, 1)),
                   quantize_sample(img.at(x, y, 2)));
  };
  double weights[11][11];
  double wsum = 0.0;
  for (int i = 0; i < 11; ++i) {
    for (int j = 0; j < 11; ++j) {
      const double dx = i - 5, dy = j - 5;
      weights[i][j] = std::exp(-(dx * dx + dy * dy) / (2.0 * 1.5 * 1.5));
      wsum += weights[i][j];
    }
  }
  for (auto& row : weights) {
    for (double& v : row) v /= wsum;
  }
  const double c1 = 6.5025, c2 = 58.5225;
  double total = 0.0;
  int count = 0;
  for (int y = 0; y + 11 <= h; ++y) {
    for (int x = 0; x + 11 <= w; ++x) {
      double mx = 0, my = 0, sxx = 0, syy = 0, sxy = 0;
      for (int i = 0; i < 11; ++i) {
        for (int j = 0; j < 11; ++j) {
          const double va = luma(a, x + i, y + j);
          const double vb = luma(b, x + i, y + j);
          mx += weights[j][i] * va;
          my += weights[j][i] * vb;
          sxx += weights[j][i] * va * va;
          syy += weights[j][i] * vb * vb;
          sxy += weights[j][i] * va * vb;
        }
      }
      sxx -= mx * mx;
      syy -= my * my;
      sxy -= mx * my;
      total += ((2 * mx * my + c1) * (2 * sxy + c2)) /
               ((mx * mx + my * my + c1) * (sxx + syy + c2));
      ++count;
    }
  }
  return total / count;
}

Image add_noise(const Image& img, double sigma8, std::uint64_t seed) {
  DegradationStep s;
  s.kind = StepKind::gaussian_noise;
  s.sigma = sigma8;
  s.noise_seed = seed;
  return apply_step(img, s);
}

}  // namespace

TEST_CASE("psnr endpoints") {
  const Image a = fixtures::natural_image(16, 16, 1);
  CHECK(std::isinf(psnr(a, a)));
  const Image zero = Image::filled(8, 8, 0, 0, 0);
  const Image full = Image::filled(8, 8, 1, 1, 1);
  CHECK(psnr(zero, full) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(psnr(zero, full, IqaChannel::rgb) == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("psnr at mse 100 is 28.1308 dB") {
  // luma differs by exactly 10 everywhere
  const Image a = Image::filled(8, 8, 100 / 255.0f, 100 / 255.0f, 100 / 255.0f);
  const Image b = Image::filled(8, 8, 110 / 255.0f, 110 / 255.0f, 110 / 255.0f);
  CHECK(std::fabs(psnr(a, b) - 10.0 * std::log10(65025.0 / 100.0)) < 1e-9);
  CHECK(std::fabs(psnr(a, b) - 28.1308) < 1e-3);
}

TEST_CASE("psnr size mismatch") {
  CHECK_THROWS_AS(psnr(Image::filled(4, 4, 0, 0, 0), Image::filled(4, 5, 0, 0, 0)), DataError);
}

TEST_CASE("psnr decreases strictly with noise strength") {
  const Image img = fixtures::natural_image(48, 48, 9);
  const double p2 = psnr(img, add_noise(img, 2.0, 1));
  const double p8 = psnr(img, add_noise(img, 8.0, 1));
  const double p32 = psnr(img, add_noise(img, 32.0, 1));
  CHECK(p2 > p8);
  CHECK(p8 > p32);
}

TEST_CASE("ssim") {
  SUBCASE("identical images score 1") {
    const Image a = fixtures::natural_image(24, 24, 4);
    CHECK(ssim(a, a) == doctest::Approx(1.0).epsilon(1e-12));
  }
  SUBCASE("symmetric in its arguments") {
    const Image a = fixtures::natural_image(24, 24, 5);
    const Image b = add_noise(a, 15.0, 3);
    CHECK(ssim(a, b) == doctest::Approx(ssim(b, a)).epsilon(1e-12));
  }
  SUBCASE("matches the direct-definition oracle on a fixed 32x32 pair") {
    const Image a = fixtures::natural_image(32, 32, 6);
    const Image b = add_noise(a, 12.0, 8);
    CHECK(std::fabs(ssim(a, b) - ssim_oracle(a, b)) < 1e-6);
  }
  SUBCASE("small perturbations score above large ones") {
    const Image a = fixtures::natural_image(32, 32, 7);
    CHECK(ssim(a, add_noise(a, 2.0, 5)) >= ssim(a, add_noise(a, 25.0, 5)));
  }
  SUBCASE("too-small input is rejected") {
    const Image tiny = fixtures::natural_image(10, 16, 8);
    CHECK_THROWS_AS(ssim(tiny, tiny), ConfigError);
  }
}

TEST_CASE("score table csv round-trip") {
  fixtures::TempDir tmp("csv");
  ScoreTable t;
  t.model_id = "m1";
  t.metric_id = "psnr";
  t.orientation = Orientation::higher_better;
  t.rows = {{"case_001", "img_b", 31.25},
            {"case_000", "img_a", std::numeric_limits<double>::infinity()},
            {"case_000", "img_b", 28.0}};
  const auto path = tmp.path() / "scores.csv";
  write_score_table(t, path, "{\"seed\":1}");
  const auto back = ingest_scores(path);
  CHECK(back.model_id == "m1");
  CHECK(back.metric_id == "psnr");
  CHECK(back.orientation == Orientation::higher_better);
  REQUIRE(back.rows.size() == 3);
  // canonical sort: (case_000, img_a), (case_000, img_b), (case_001, img_b)
  CHECK(back.rows[0].image_id == "img_a");
  CHECK(std::isinf(back.rows[0].value));
  CHECK(back.rows[1].value == doctest::Approx(28.0));
  CHECK(back.rows[2].case_id == "case_001");
}

TEST_CASE("ingest rejects malformed input") {
  fixtures::TempDir tmp("csv");
  const auto path = tmp.path() / "bad.csv";
  SUBCASE("duplicate keys") {
    std::ofstream out(path);
    out << "model,metric,case_id,image_id,value\n";
    out << "m,psnr,c0,i0,20\n";
    out << "m,psnr,c0,i0,21\n";
    out.close();
    CHECK_THROWS_WITH_AS(ingest_scores(path), doctest::Contains("duplicate"), DataError);
  }
  SUBCASE("NaN value names the line") {
    std::ofstream out(path);
    out << "model,metric,case_id,image_id,value\n";
    out << "m,psnr,c0,i0,20\n";
    out << "m,psnr,c0,i1,NaN\n";
    out.close();
    CHECK_THROWS_WITH_AS(ingest_scores(path), doctest::Contains(":3"), DataError);
  }
  SUBCASE("unknown metric requires explicit orientation") {
    std::ofstream out(path);
    out << "model,metric,case_id,image_id,value\n";
    out << "m,vmaf,c0,i0,20\n";
    out.close();
    CHECK_THROWS_AS(ingest_scores(path), ConfigError);
    CHECK(ingest_scores(path, "higher-better").orientation == Orientation::higher_better);
  }
  SUBCASE("three-row well-formed file parses") {
    std::ofstream out(path);
    out << "model,metric,case_id,image_id,value\n";
    out << "m,lpips,c0,i0,0.5\n";
    out << "m,lpips,c0,i1,0.25\n";
    out << "m,lpips,c1,i0,0.75\n";
    out.close();
    const auto t = ingest_scores(path);
    CHECK(t.rows.size() == 3);
    CHECK(t.orientation == Orientation::lower_better);
  }
}
