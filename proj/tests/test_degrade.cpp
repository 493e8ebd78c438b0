#include <doctest.h>

#include <cmath>

#include "seal/degrade.hpp"
#include "seal/errors.hpp"
#include "seal/iqa.hpp"
#include "support/fixtures.hpp"

using namespace seal;

namespace {

// Closed-form rotated gaussian kernel, independent of the implementation path.
std::vector<double> oracle_kernel(double sx, double sy, double angle, int size) {
  const double c = std::cos(angle), s = std::sin(angle);
  const int r = size / 2;
  std::vector<double> k(static_cast<std::size_t>(size) * size);
  double sum = 0.0;
  for (int dy = -r; dy <= r; ++dy) {
    for (int dx = -r; dx <= r; ++dx) {
      // rotate the offset into the kernel frame, then evaluate the aligned gaussian
      const double u = c * dx + s * dy;
      const double v = -s * dx + c * dy;
      const double val = std::exp(-0.5 * (u * u / (sx * sx) + v * v / (sy * sy)));
      k[static_cast<std::size_t>(dy + r) * size + (dx + r)] = val;
      sum += val;
    }
  }
  for (double& x : k) x /= sum;
  return k;
}

DegradationStep blur_step(double sx, double sy, double angle, int ksize) {
  DegradationStep s;
  s.kind = StepKind::gaussian_blur;
  s.sigma_x = sx;
  s.sigma_y = sy;
  s.angle = angle;
  s.kernel_size = ksize;
  return s;
}

DegradationRecipe minimal_recipe(int scale_factor = 4) {
  DegradationRecipe r;
  r.recipe_id = "t";
  r.scale_factor = scale_factor;
  DegradationStep rs;
  rs.kind = StepKind::resize;
  rs.scale = 1.0;
  rs.mode = ResizeMode::bilinear;
  DegradationStep ns;
  ns.kind = StepKind::gaussian_noise;
  ns.sigma = 0.0;
  DegradationStep fin;
  fin.kind = StepKind::final_downsample;
  fin.scale_factor = scale_factor;
  r.steps = {rs, ns, fin};
  return r;
}

}  // namespace

TEST_CASE("zero-sigma gaussian noise is the identity") {
  const Image img = fixtures::natural_image(16, 16, 2);
  DegradationStep s;
  s.kind = StepKind::gaussian_noise;
  s.sigma = 0.0;
  s.noise_seed = 99;
  CHECK(apply_step(img, s).data == img.data);
}

TEST_CASE("scale-1 resize is the identity for all modes") {
  const Image img = fixtures::natural_image(17, 13, 4);
  for (ResizeMode mode : {ResizeMode::area, ResizeMode::bilinear, ResizeMode::bicubic}) {
    DegradationStep s;
    s.kind = StepKind::resize;
    s.scale = 1.0;
    s.mode = mode;
    CHECK(apply_step(img, s).data == img.data);
  }
}

TEST_CASE("blur of a unit impulse reproduces the closed-form kernel") {
  SUBCASE("isotropic (separable path)") {
    const int ks = 13;
    const Image img = fixtures::impulse_image(21, 21, 10, 10);
    const Image out = apply_step(img, blur_step(1.5, 1.5, 0.0, ks));
    const auto k = oracle_kernel(1.5, 1.5, 0.0, ks);
    for (int dy = -ks / 2; dy <= ks / 2; ++dy) {
      for (int dx = -ks / 2; dx <= ks / 2; ++dx) {
        const double expected = k[static_cast<std::size_t>(dy + ks / 2) * ks + (dx + ks / 2)];
        CHECK(std::fabs(out.at(10 + dx, 10 + dy, 0) - expected) < 1e-6);
      }
    }
  }
  SUBCASE("rotated anisotropic (direct path)") {
    const int ks = 11;
    const Image img = fixtures::impulse_image(25, 25, 12, 12);
    const Image out = apply_step(img, blur_step(1.2, 2.4, 0.7, ks));
    const auto k = oracle_kernel(1.2, 2.4, 0.7, ks);
    for (int dy = -ks / 2; dy <= ks / 2; ++dy) {
      for (int dx = -ks / 2; dx <= ks / 2; ++dx) {
        const double expected = k[static_cast<std::size_t>(dy + ks / 2) * ks + (dx + ks / 2)];
        CHECK(std::fabs(out.at(12 + dx, 12 + dy, 1) - expected) < 1e-6);
      }
    }
  }
}

TEST_CASE("blur preserves a constant image within 1e-6") {
  const Image img = Image::filled(24, 24, 0.37f, 0.37f, 0.37f);
  const Image out = apply_step(img, blur_step(2.0, 0.8, 0.3, 15));
  for (float v : out.data) CHECK(std::fabs(v - 0.37) < 1e-6);
}

TEST_CASE("step parameter validation") {
  const Image img = fixtures::natural_image(16, 16, 5);
  CHECK_THROWS_AS(apply_step(img, blur_step(0.0, 1.0, 0.0, 7)), ConfigError);
  CHECK_THROWS_AS(apply_step(img, blur_step(1.0, 1.0, 0.0, 8)), ConfigError);   // even kernel
  CHECK_THROWS_AS(apply_step(img, blur_step(1.0, 1.0, 0.0, 23)), ConfigError);  // too large
  DegradationStep j;
  j.kind = StepKind::jpeg;
  j.quality = 0;
  CHECK_THROWS_AS(apply_step(img, j), ConfigError);
  DegradationStep r;
  r.kind = StepKind::resize;
  r.scale = 0.01;  // 16 * 0.01 rounds to 0 pixels
  r.mode = ResizeMode::bilinear;
  CHECK_THROWS_AS(apply_step(img, r), ConfigError);
}

TEST_CASE("jpeg step is deterministic and lossy") {
  const Image img = fixtures::natural_image(32, 32, 6);
  DegradationStep s;
  s.kind = StepKind::jpeg;
  s.quality = 40;
  const Image a = apply_step(img, s);
  const Image b = apply_step(img, s);
  CHECK(a.data == b.data);
  CHECK(a.data != img.data);
}

TEST_CASE("recipe application is deterministic") {
  SeededRng rng(11);
  PipelineConfig cfg;
  const auto recipe = sample_recipe(rng, cfg);
  const Image img = fixtures::natural_image(64, 64, 8);
  const Image a = apply_recipe(img, recipe);
  const Image b = apply_recipe(img, recipe);
  CHECK(a.data == b.data);
  CHECK(a.width == 16);
  CHECK(a.height == 16);
}

TEST_CASE("degenerate recipe equals the bare downsample") {
  const Image img = fixtures::natural_image(64, 64, 12);
  const Image out = apply_recipe(img, minimal_recipe());
  const Image direct = resize(img, 16, 16, ResizeMode::bicubic);
  CHECK(out.data == direct.data);
}

TEST_CASE("sampled recipes honor the size contract") {
  SeededRng rng(21);
  PipelineConfig cfg;
  const Image img = fixtures::natural_image(128, 128, 3);
  for (int i = 0; i < 3; ++i) {
    const auto recipe = sample_recipe(rng, cfg);
    const Image out = apply_recipe(img, recipe);
    CHECK(out.width == 32);
    CHECK(out.height == 32);
  }
}

TEST_CASE("indivisible dimensions are rejected") {
  const Image img = fixtures::natural_image(66, 64, 3);
  CHECK_THROWS_AS(apply_recipe(img, minimal_recipe()), ConfigError);
}

TEST_CASE("family mixture") {
  PipelineConfig cfg;
  SUBCASE("forced shuffled branch") {
    cfg.family_probs = {1.0, 0.0};
    SeededRng rng(5);
    for (int i = 0; i < 5; ++i) {
      CHECK(sample_recipe(rng, cfg).family == PipelineFamily::shuffled);
    }
  }
  SUBCASE("forced high-order branch has rounds x 4 + 1 steps") {
    cfg.family_probs = {0.0, 1.0};
    SeededRng rng(5);
    const auto r = sample_recipe(rng, cfg);
    CHECK(r.family == PipelineFamily::high_order);
    CHECK(r.steps.size() == 2 * 4 + 1);
  }
  SUBCASE("same seed gives identical recipes") {
    SeededRng a(99), b(99);
    CHECK(sample_recipe(a, cfg) == sample_recipe(b, cfg));
  }
  SUBCASE("mixture fraction concentrates at 0.5") {
    SeededRng rng(1234);
    int shuffled = 0;
    const int n = 10000;
    for (int i = 0; i < n; ++i) {
      if (sample_recipe(rng, cfg).family == PipelineFamily::shuffled) ++shuffled;
    }
    const double frac = static_cast<double>(shuffled) / n;
    CHECK(frac >= 0.47);
    CHECK(frac <= 0.53);
  }
}

TEST_CASE("recipe serialization") {
  SUBCASE("round-trip law over sampled recipes") {
    SeededRng rng(77);
    PipelineConfig cfg;
    for (int i = 0; i < 50; ++i) {
      DegradationRecipe r = sample_recipe(rng, cfg);
      r.recipe_id = "rt-" + std::to_string(i);
      CHECK(parse_recipe(serialize_recipe(r)) == r);
    }
  }
  SUBCASE("unknown kind names the offender") {
    const std::string text = R"({"schema_version":1,"recipe_id":"x","family":"shuffled",
      "scale_factor":4,"source_seed":0,"steps":[{"kind":"frobnicate"}]})";
    CHECK_THROWS_WITH_AS(parse_recipe(text), doctest::Contains("frobnicate"), DataError);
  }
  SUBCASE("malformed json reports a byte position") {
    CHECK_THROWS_WITH_AS(parse_recipe("{\"schema_version\":"), doctest::Contains("byte"),
                         DataError);
  }
  SUBCASE("hand-written fixture parses field by field") {
    const std::string text = R"({"schema_version":1,"recipe_id":"fixture","family":"high-order",
      "scale_factor":2,"source_seed":42,"steps":[
        {"kind":"gaussian-blur","sigma_x":1.5,"sigma_y":0.5,"angle":0.25,"kernel_size":9},
        {"kind":"jpeg","quality":55},
        {"kind":"final-downsample","scale_factor":2}]})";
    const auto r = parse_recipe(text);
    CHECK(r.recipe_id == "fixture");
    CHECK(r.family == PipelineFamily::high_order);
    CHECK(r.scale_factor == 2);
    CHECK(r.source_seed == 42);
    REQUIRE(r.steps.size() == 3);
    CHECK(r.steps[0].kind == StepKind::gaussian_blur);
    CHECK(r.steps[0].sigma_x == 1.5);
    CHECK(r.steps[0].sigma_y == 0.5);
    CHECK(r.steps[0].angle == 0.25);
    CHECK(r.steps[0].kernel_size == 9);
    CHECK(r.steps[1].kind == StepKind::jpeg);
    CHECK(r.steps[1].quality == 55);
    CHECK(r.steps[2].kind == StepKind::final_downsample);
  }
}

TEST_CASE("composition order matters") {
  const Image img = fixtures::natural_image(48, 48, 31);
  DegradationStep blur = blur_step(2.0, 2.0, 0.0, 13);
  DegradationStep noise;
  noise.kind = StepKind::gaussian_noise;
  noise.sigma = 20.0;
  noise.noise_seed = 5;
  const Image blur_then_noise = apply_step(apply_step(img, blur), noise);
  const Image noise_then_blur = apply_step(apply_step(img, noise), blur);
  CHECK(blur_then_noise.data != noise_then_blur.data);
}

TEST_CASE("doubling noise sigma lowers psnr against the clean downsample") {
  const Image img = fixtures::natural_image(96, 96, 17);
  const Image reference = resize(img, 24, 24, ResizeMode::bicubic);
  auto with_sigma = [&](double sigma) {
    DegradationRecipe r = minimal_recipe();
    r.steps[1].sigma = sigma;
    r.steps[1].noise_seed = 7;
    return psnr(reference, apply_recipe(img, r));
  };
  const double p5 = with_sigma(5.0);
  const double p10 = with_sigma(10.0);
  const double p20 = with_sigma(20.0);
  CHECK(std::isfinite(p5));
  CHECK(p5 > p10);
  CHECK(p10 > p20);
}

TEST_CASE("recipe validation rejects misplaced final-downsample") {
  DegradationRecipe r = minimal_recipe();
  std::swap(r.steps[1], r.steps[2]);  // final-downsample no longer last
  const Image img = fixtures::natural_image(16, 16, 2);
  CHECK_THROWS_AS(apply_recipe(img, r), ConfigError);
}
