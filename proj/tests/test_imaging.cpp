#include <doctest.h>

#include <fstream>

#include "seal/errors.hpp"
#include "seal/image.hpp"
#include "seal/image_io.hpp"
#include "seal/rng.hpp"
#include "support/fixtures.hpp"

using namespace seal;

TEST_CASE("constant gray png loads with every sample 128") {
  fixtures::TempDir tmp("img");
  const auto path = tmp.path() / "gray.png";
  save_png(Image::filled(4, 4, 128 / 255.0f, 128 / 255.0f, 128 / 255.0f), path);
  const Image img = load_image(path);
  CHECK(img.width == 4);
  CHECK(img.height == 4);
  CHECK(img.data.size() == 4 * 4 * 3);
  for (float v : img.data) CHECK(quantize_sample(v) == 128);
}

TEST_CASE("png save/load round-trips pixel data exactly") {
  fixtures::TempDir tmp("img");
  SeededRng rng(42);
  Image img = Image::filled(16, 16, 0, 0, 0);
  for (auto& v : img.data) v = static_cast<float>(rng.uniform());
  const ImageU8 before = to_u8(img);
  const auto path = tmp.path() / "r.png";
  save_png(img, path);
  const ImageU8 after = to_u8(load_image(path));
  CHECK(before.data == after.data);
}

TEST_CASE("bmp save/load round-trips pixel data exactly") {
  fixtures::TempDir tmp("img");
  const Image img = fixtures::natural_image(20, 14, 7);
  const auto path = tmp.path() / "r.bmp";
  save_bmp(img, path);
  CHECK(to_u8(load_image(path)).data == to_u8(img).data);
}

TEST_CASE("truncated file raises a decode error") {
  fixtures::TempDir tmp("img");
  const auto good = tmp.path() / "ok.png";
  save_png(fixtures::natural_image(32, 32, 1), good);
  std::ifstream in(good, std::ios::binary);
  std::vector<char> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  const auto bad = tmp.path() / "bad.png";
  std::ofstream out(bad, std::ios::binary);
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size() / 2));
  out.close();
  CHECK_THROWS_AS(load_image(bad), DataError);
}

TEST_CASE("missing file raises an io error") {
  CHECK_THROWS_AS(load_image("/nonexistent/nowhere.png"), IoError);
}

TEST_CASE("jpeg at quality 10 is lossy on a natural image") {
  fixtures::TempDir tmp("img");
  const Image img = fixtures::natural_image(64, 64, 3);
  const auto path = tmp.path() / "q10.jpg";
  save_jpeg(img, path, 10);
  const Image back = load_image(path);
  double mae = 0.0;
  for (std::size_t i = 0; i < img.data.size(); ++i) {
    mae += std::fabs(static_cast<double>(quantize_sample(img.data[i])) -
                     quantize_sample(back.data[i]));
  }
  CHECK(mae / img.data.size() > 0.0);
}

TEST_CASE("jpeg quality 0 violates the precondition") {
  fixtures::TempDir tmp("img");
  CHECK_THROWS_AS(save_jpeg(Image::filled(4, 4, 0.5f, 0.5f, 0.5f), tmp.path() / "x.jpg", 0),
                  ConfigError);
}

TEST_CASE("crop_center") {
  SUBCASE("full-size crop is the identity") {
    const Image img = fixtures::natural_image(4, 4, 5);
    const Image out = crop_center(img, 4, 4);
    CHECK(out.data == img.data);
  }
  SUBCASE("2x2 from a 4x4 checkerboard is the middle block") {
    const Image img = fixtures::checkerboard(4, 4, 1);
    const Image out = crop_center(img, 2, 2);
    // middle block starts at offset (1,1)
    for (int y = 0; y < 2; ++y) {
      for (int x = 0; x < 2; ++x) {
        for (int c = 0; c < 3; ++c) CHECK(out.at(x, y, c) == img.at(x + 1, y + 1, c));
      }
    }
  }
  SUBCASE("oversized crop errors") {
    CHECK_THROWS_AS(crop_center(fixtures::natural_image(4, 4, 5), 8, 8), ConfigError);
  }
}

TEST_CASE("u8/real conversion round-trips within 1/510") {
  for (int v = 0; v <= 255; ++v) {
    ImageU8 u;
    u.width = 1;
    u.height = 1;
    u.data = {static_cast<std::uint8_t>(v), 0, 0};
    const Image r = to_real(u);
    CHECK(to_u8(r).data[0] == v);
  }
  SeededRng rng(9);
  for (int i = 0; i < 1000; ++i) {
    const float x = static_cast<float>(rng.uniform());
    const float back = quantize_sample(x) / 255.0f;
    CHECK(std::fabs(back - x) <= 1.0 / 510.0 + 1e-7);
  }
}

TEST_CASE("equal seeds give equal streams for a million draws") {
  SeededRng a(123456789), b(123456789);
  for (int i = 0; i < 1000000; ++i) {
    if (a.next_u64() != b.next_u64()) {
      FAIL("streams diverged at draw ", i);
    }
  }
  CHECK(SeededRng::algorithm_id() == "splitmix64");
}

TEST_CASE("rng distributions are sane") {
  SeededRng rng(7);
  double sum = 0.0, sum2 = 0.0;
  const int n = 200000;
  for (int i = 0; i < n; ++i) {
    const double x = rng.normal();
    sum += x;
    sum2 += x * x;
  }
  CHECK(std::fabs(sum / n) < 0.01);
  CHECK(std::fabs(sum2 / n - 1.0) < 0.02);

  // Poisson mean/variance at both sampler regimes
  for (double lambda : {3.0, 800.0}) {
    double ps = 0.0, ps2 = 0.0;
    const int m = 40000;
    for (int i = 0; i < m; ++i) {
      const double x = static_cast<double>(rng.poisson(lambda));
      ps += x;
      ps2 += x * x;
    }
    const double mean = ps / m;
    const double var = ps2 / m - mean * mean;
    CHECK(std::fabs(mean - lambda) < 0.05 * lambda);
    CHECK(std::fabs(var - lambda) < 0.1 * lambda);
  }
}
