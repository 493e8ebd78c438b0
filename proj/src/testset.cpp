#include "seal/testset.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "seal/errors.hpp"
#include "seal/hashing.hpp"
#include "seal/image_io.hpp"
#include "seal/parallel.hpp"
#include "seal/version.hpp"

namespace seal {

namespace {

using ordered_json = nlohmann::ordered_json;

std::string zero_pad(int value, int width) {
  std::string s = std::to_string(value);
  if (static_cast<int>(s.size()) < width) s.insert(0, width - s.size(), '0');
  return s;
}

ordered_json config_to_json(const PipelineConfig& c) {
  ordered_json j;
  j["family_probs"] = c.family_probs;
  j["high_order_rounds"] = c.high_order_rounds;
  j["scale_factor"] = c.scale_factor;
  j["blur_sigma_range"] = c.blur_sigma_range;
  j["kernel_size_range"] = c.kernel_size_range;
  j["isotropic_probability"] = c.isotropic_probability;
  j["noise_sigma_range"] = c.noise_sigma_range;
  j["poisson_scale_range"] = c.poisson_scale_range;
  j["gray_noise_probability"] = c.gray_noise_probability;
  j["resize_scale_range"] = c.resize_scale_range;
  j["jpeg_quality_range"] = c.jpeg_quality_range;
  return j;
}

PipelineConfig config_from_json(const nlohmann::json& j) {
  PipelineConfig c;
  j.at("family_probs").get_to(c.family_probs);
  j.at("high_order_rounds").get_to(c.high_order_rounds);
  j.at("scale_factor").get_to(c.scale_factor);
  j.at("blur_sigma_range").get_to(c.blur_sigma_range);
  j.at("kernel_size_range").get_to(c.kernel_size_range);
  j.at("isotropic_probability").get_to(c.isotropic_probability);
  j.at("noise_sigma_range").get_to(c.noise_sigma_range);
  j.at("poisson_scale_range").get_to(c.poisson_scale_range);
  j.at("gray_noise_probability").get_to(c.gray_noise_probability);
  j.at("resize_scale_range").get_to(c.resize_scale_range);
  j.at("jpeg_quality_range").get_to(c.jpeg_quality_range);
  return c;
}

nlohmann::json load_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  try {
    nlohmann::json j;
    in >> j;
    return j;
  } catch (const nlohmann::json::parse_error& e) {
    throw DataError(path.string() + ": " + e.what());
  }
}

void dump_json(const ordered_json& j, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  out << j.dump(2) << '\n';
  if (!out) throw IoError("write failed for " + path.string());
}

std::string stem_of(const std::filesystem::path& p) { return p.stem().string(); }

}  // namespace

const char* noise_mode_name(NoiseMode mode) {
  return mode == NoiseMode::per_image ? "per-image" : "frozen";
}

NoiseMode noise_mode_from_name(const std::string& name) {
  if (name == "per-image") return NoiseMode::per_image;
  if (name == "frozen") return NoiseMode::frozen;
  throw DataError("unknown noise mode: " + name);
}

DegradationRecipe recipe_for_image(const DegradationRecipe& recipe, const std::string& image_id,
                                   NoiseMode mode) {
  if (mode == NoiseMode::frozen) return recipe;
  DegradationRecipe r = recipe;
  for (auto& step : r.steps) {
    if (step_kind_stochastic(step.kind)) {
      step.noise_seed = mix_seed(step.noise_seed, image_id);
    }
  }
  return r;
}

DegradationPool build_pool(const std::vector<std::filesystem::path>& references, int n,
                           const PipelineConfig& config, std::uint64_t seed,
                           const std::filesystem::path& out_dir, int threads) {
  if (n < 2) throw ConfigError("build_pool: n must be >= 2");
  if (references.empty()) throw ConfigError("build_pool: need at least one reference image");
  validate_config(config);

  std::vector<Image> refs;
  refs.reserve(references.size());
  for (const auto& p : references) {
    refs.push_back(crop_to_multiple(load_image(p), config.scale_factor));
  }

  DegradationPool pool;
  pool.pool_id = "pool-" + std::to_string(seed) + "-" + std::to_string(n);
  pool.master_seed = seed;
  pool.rng_algorithm = SeededRng::algorithm_id();
  pool.n = n;
  pool.config = config;
  pool.root = out_dir;
  for (const auto& p : references) pool.reference_paths.push_back(p.string());
  for (const auto& p : references) pool.reference_hashes.push_back(sha256_file(p));

  SeededRng rng(seed);
  pool.recipes.reserve(n);
  const int id_width = static_cast<int>(std::to_string(n - 1).size());
  for (int i = 0; i < n; ++i) {
    DegradationRecipe r = sample_recipe(rng, config);
    r.recipe_id = pool.pool_id + "-r" + zero_pad(i, id_width);
    r.source_seed = seed;
    pool.recipes.push_back(std::move(r));
  }

  std::filesystem::create_directories(out_dir);
  pool.images.assign(references.size(), std::vector<PoolEntry>(n));
  for (std::size_t ref = 0; ref < refs.size(); ++ref) {
    const std::filesystem::path dir = out_dir / "images" / ("ref" + std::to_string(ref));
    std::filesystem::create_directories(dir);
    parallel_for(static_cast<std::size_t>(n), threads, [&, ref](std::size_t i) {
      const Image lr = apply_recipe(refs[ref], pool.recipes[i]);
      const std::string rel = "images/ref" + std::to_string(ref) + "/d" +
                              zero_pad(static_cast<int>(i), id_width) + ".png";
      save_png(lr, out_dir / rel);
      pool.images[ref][i] = {rel, sha256_file(out_dir / rel)};
    });
  }

  write_recipes_jsonl(pool.recipes, out_dir / "recipes.jsonl");

  ordered_json j;
  j["schema_version"] = 1;
  j["tool_version"] = kToolVersion;
  j["pool_id"] = pool.pool_id;
  j["master_seed"] = pool.master_seed;
  j["rng_algorithm"] = pool.rng_algorithm;
  j["n"] = pool.n;
  j["config"] = config_to_json(config);
  j["references"] = ordered_json::array();
  for (std::size_t i = 0; i < pool.reference_paths.size(); ++i) {
    j["references"].push_back(
        {{"path", pool.reference_paths[i]}, {"sha256", pool.reference_hashes[i]}});
  }
  j["recipes_file"] = "recipes.jsonl";
  j["images"] = ordered_json::array();
  for (const auto& ref_images : pool.images) {
    ordered_json arr = ordered_json::array();
    for (const auto& e : ref_images) arr.push_back({{"path", e.image_path}, {"sha256", e.sha256}});
    j["images"].push_back(std::move(arr));
  }
  dump_json(j, out_dir / "pool.json");
  return pool;
}

DegradationPool read_pool(const std::filesystem::path& manifest_path) {
  const auto j = load_json(manifest_path);
  DegradationPool pool;
  pool.root = manifest_path.parent_path();
  pool.pool_id = j.at("pool_id").get<std::string>();
  pool.master_seed = j.at("master_seed").get<std::uint64_t>();
  pool.rng_algorithm = j.at("rng_algorithm").get<std::string>();
  pool.n = j.at("n").get<int>();
  pool.config = config_from_json(j.at("config"));
  for (const auto& r : j.at("references")) {
    pool.reference_paths.push_back(r.at("path").get<std::string>());
    pool.reference_hashes.push_back(r.at("sha256").get<std::string>());
  }
  pool.recipes = read_recipes_jsonl(pool.root / j.at("recipes_file").get<std::string>());
  for (const auto& arr : j.at("images")) {
    std::vector<PoolEntry> entries;
    for (const auto& e : arr) {
      entries.push_back({e.at("path").get<std::string>(), e.at("sha256").get<std::string>()});
    }
    pool.images.push_back(std::move(entries));
  }
  if (static_cast<int>(pool.recipes.size()) != pool.n) {
    throw DataError("pool manifest: recipe count disagrees with n");
  }
  return pool;
}

std::vector<Image> load_pool_images(const DegradationPool& pool, int reference_index) {
  if (reference_index < 0 || reference_index >= static_cast<int>(pool.images.size())) {
    throw ConfigError("load_pool_images: bad reference index");
  }
  const auto& entries = pool.images[reference_index];
  std::vector<Image> images(entries.size());
  parallel_for(entries.size(), 0, [&](std::size_t i) {
    images[i] = load_image(pool.root / entries[i].image_path);
  });
  return images;
}

std::vector<DegradationRecipe> read_recipes_jsonl(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  std::vector<DegradationRecipe> recipes;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    recipes.push_back(parse_recipe(line));
  }
  return recipes;
}

void write_recipes_jsonl(const std::vector<DegradationRecipe>& recipes,
                         const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  for (const auto& r : recipes) out << serialize_recipe(r) << '\n';
  if (!out) throw IoError("write failed for " + path.string());
}

SETestSetManifest build_se_testset(const std::vector<DegradationRecipe>& recipes,
                                   const std::vector<std::filesystem::path>& clean_images,
                                   const std::filesystem::path& out_dir, NoiseMode noise_mode,
                                   const std::string& testset_id, int threads) {
  if (recipes.empty()) throw ConfigError("build_se_testset: no recipes");
  if (clean_images.empty()) throw ConfigError("build_se_testset: no clean images");
  for (const auto& r : recipes) validate_recipe(r);

  SETestSetManifest m;
  m.testset_id = testset_id.empty() ? "se-" + std::to_string(recipes.size()) + "x" +
                                          std::to_string(clean_images.size())
                                    : testset_id;
  m.scale_factor = recipes.front().scale_factor;
  m.noise_mode = noise_mode;
  m.root = out_dir;

  std::vector<Image> cleans(clean_images.size());
  for (std::size_t i = 0; i < clean_images.size(); ++i) {
    m.clean_image_ids.push_back(stem_of(clean_images[i]));
    m.clean_image_paths.push_back(clean_images[i].string());
    m.clean_image_hashes.push_back(sha256_file(clean_images[i]));
    cleans[i] = crop_to_multiple(load_image(clean_images[i]), m.scale_factor);
  }

  const int K = static_cast<int>(recipes.size());
  const int id_width = static_cast<int>(std::to_string(K - 1).size());
  m.cases.resize(K);
  for (int c = 0; c < K; ++c) {
    m.cases[c].case_id = "case_" + zero_pad(c, std::max(3, id_width));
    m.cases[c].recipe = recipes[c];
    m.cases[c].entries.resize(clean_images.size());
  }

  std::filesystem::create_directories(out_dir);
  const std::size_t total = static_cast<std::size_t>(K) * clean_images.size();
  for (int c = 0; c < K; ++c) {
    std::filesystem::create_directories(out_dir / "cases" / m.cases[c].case_id);
  }
  parallel_for(total, threads, [&](std::size_t t) {
    const int c = static_cast<int>(t / clean_images.size());
    const int img = static_cast<int>(t % clean_images.size());
    const DegradationRecipe r =
        recipe_for_image(m.cases[c].recipe, m.clean_image_ids[img], noise_mode);
    const Image lr = apply_recipe(cleans[img], r);
    const std::string rel = "cases/" + m.cases[c].case_id + "/" + m.clean_image_ids[img] + ".png";
    save_png(lr, out_dir / rel);
    m.cases[c].entries[img] = {m.clean_image_ids[img], rel, sha256_file(out_dir / rel)};
  });

  // Manifest written once, after all files succeeded.
  ordered_json j;
  j["schema_version"] = 1;
  j["tool_version"] = kToolVersion;
  j["testset_id"] = m.testset_id;
  j["scale_factor"] = m.scale_factor;
  j["noise_mode"] = noise_mode_name(m.noise_mode);
  j["k"] = K;
  j["clean_images"] = ordered_json::array();
  for (std::size_t i = 0; i < clean_images.size(); ++i) {
    j["clean_images"].push_back({{"id", m.clean_image_ids[i]},
                                 {"path", m.clean_image_paths[i]},
                                 {"sha256", m.clean_image_hashes[i]}});
  }
  j["cases"] = ordered_json::array();
  for (const auto& sc : m.cases) {
    ordered_json cj;
    cj["case_id"] = sc.case_id;
    cj["recipe"] = ordered_json::parse(serialize_recipe(sc.recipe));
    cj["entries"] = ordered_json::array();
    for (const auto& e : sc.entries) {
      cj["entries"].push_back(
          {{"image_id", e.image_id}, {"path", e.lr_path}, {"sha256", e.sha256}});
    }
    j["cases"].push_back(std::move(cj));
  }
  dump_json(j, out_dir / "testset.json");
  return m;
}

SETestSetManifest read_se_testset(const std::filesystem::path& manifest_path) {
  const auto j = load_json(manifest_path);
  SETestSetManifest m;
  m.root = manifest_path.parent_path();
  m.testset_id = j.at("testset_id").get<std::string>();
  m.scale_factor = j.at("scale_factor").get<int>();
  m.noise_mode = noise_mode_from_name(j.at("noise_mode").get<std::string>());
  for (const auto& ci : j.at("clean_images")) {
    m.clean_image_ids.push_back(ci.at("id").get<std::string>());
    m.clean_image_paths.push_back(ci.at("path").get<std::string>());
    m.clean_image_hashes.push_back(ci.at("sha256").get<std::string>());
  }
  for (const auto& cj : j.at("cases")) {
    SECase sc;
    sc.case_id = cj.at("case_id").get<std::string>();
    sc.recipe = parse_recipe(cj.at("recipe").dump());
    for (const auto& e : cj.at("entries")) {
      sc.entries.push_back({e.at("image_id").get<std::string>(), e.at("path").get<std::string>(),
                            e.at("sha256").get<std::string>()});
    }
    m.cases.push_back(std::move(sc));
  }
  if (m.case_count() != j.at("k").get<int>()) {
    throw DataError("testset manifest: case count disagrees with k");
  }
  return m;
}

namespace {

void verify_one(const std::filesystem::path& root, const std::string& rel,
                const std::string& expected, std::vector<std::string>& bad) {
  const auto p = root / rel;
  if (!std::filesystem::exists(p)) {
    bad.push_back(rel + " (missing)");
    return;
  }
  if (sha256_file(p) != expected) bad.push_back(rel + " (hash mismatch)");
}

}  // namespace

std::vector<std::string> verify_pool(const DegradationPool& pool) {
  std::vector<std::string> bad;
  for (const auto& ref_images : pool.images) {
    for (const auto& e : ref_images) verify_one(pool.root, e.image_path, e.sha256, bad);
  }
  return bad;
}

std::vector<std::string> verify_se_testset(const SETestSetManifest& manifest) {
  std::vector<std::string> bad;
  for (const auto& sc : manifest.cases) {
    for (const auto& e : sc.entries) verify_one(manifest.root, e.lr_path, e.sha256, bad);
  }
  return bad;
}

// --------------------------------------------------------------- toys ------

const char* toy_kind_name(ToyKind kind) {
  switch (kind) {
    case ToyKind::blur100: return "blur100";
    case ToyKind::noise100: return "noise100";
    case ToyKind::bn100: return "bn100";
  }
  return "?";
}

ToyKind toy_kind_from_name(const std::string& name) {
  if (name == "blur100") return ToyKind::blur100;
  if (name == "noise100") return ToyKind::noise100;
  if (name == "bn100") return ToyKind::bn100;
  throw DataError("unknown toy kind: " + name);
}

int blur_label(double sigma) {
  if (sigma <= 1.0) return 1;
  if (sigma <= 2.0) return 2;
  if (sigma <= 3.0) return 3;
  return 4;
}

int noise_label(double sigma) {
  // quartile bands of [1, 40]
  if (sigma <= 10.75) return 1;
  if (sigma <= 20.5) return 2;
  if (sigma <= 30.25) return 3;
  return 4;
}

namespace {

struct ToySample {
  DegradationStep step;
  double parameter;
  int label;
};

std::vector<ToySample> sample_toy_items(ToyKind kind, SeededRng& rng) {
  std::vector<ToySample> samples;
  const bool want_blur = kind == ToyKind::blur100 || kind == ToyKind::bn100;
  const bool want_noise = kind == ToyKind::noise100 || kind == ToyKind::bn100;
  if (want_blur) {
    for (int i = 0; i < 100; ++i) {
      const double sigma = rng.uniform(0.1, 4.0);
      DegradationStep s;
      s.kind = StepKind::gaussian_blur;
      s.sigma_x = s.sigma_y = sigma;
      s.angle = 0.0;
      s.kernel_size = 21;
      samples.push_back({s, sigma, blur_label(sigma)});
    }
  }
  if (want_noise) {
    for (int i = 0; i < 100; ++i) {
      const double sigma = rng.uniform(1.0, 40.0);
      DegradationStep s;
      s.kind = StepKind::gaussian_noise;
      s.sigma = sigma;
      s.gray = false;
      s.noise_seed = rng.fork_seed();
      const int label = noise_label(sigma) + (kind == ToyKind::bn100 ? 4 : 0);
      samples.push_back({s, sigma, label});
    }
  }
  return samples;
}

}  // namespace

LabeledToySet build_toy(ToyKind kind, const std::filesystem::path& reference,
                        std::uint64_t seed, const std::filesystem::path& out_dir, int threads) {
  const Image ref = load_image(reference);
  SeededRng rng(seed);
  const auto samples = sample_toy_items(kind, rng);

  LabeledToySet toy;
  toy.kind = kind;
  toy.seed = seed;
  toy.root = out_dir;
  toy.items.resize(samples.size());
  std::filesystem::create_directories(out_dir / "images");
  parallel_for(samples.size(), threads, [&](std::size_t i) {
    const Image degraded = apply_step(ref, samples[i].step);
    const std::string rel = "images/t" + zero_pad(static_cast<int>(i), 3) + ".png";
    save_png(degraded, out_dir / rel);
    toy.items[i] = {rel, samples[i].parameter, samples[i].label};
  });

  ordered_json j;
  j["schema_version"] = 1;
  j["tool_version"] = kToolVersion;
  j["kind"] = toy_kind_name(kind);
  j["seed"] = seed;
  j["reference"] = reference.string();
  j["reference_sha256"] = sha256_file(reference);
  j["items"] = ordered_json::array();
  for (const auto& it : toy.items) {
    j["items"].push_back(
        {{"path", it.image_path}, {"parameter", it.parameter}, {"label", it.label}});
  }
  dump_json(j, out_dir / "toy.json");
  return toy;
}

LabeledToySet read_toy(const std::filesystem::path& manifest_path) {
  const auto j = load_json(manifest_path);
  LabeledToySet toy;
  toy.root = manifest_path.parent_path();
  toy.kind = toy_kind_from_name(j.at("kind").get<std::string>());
  toy.seed = j.at("seed").get<std::uint64_t>();
  for (const auto& it : j.at("items")) {
    toy.items.push_back({it.at("path").get<std::string>(), it.at("parameter").get<double>(),
                         it.at("label").get<int>()});
  }
  return toy;
}

std::vector<Image> load_toy_images(const LabeledToySet& toy, int threads) {
  std::vector<Image> images(toy.items.size());
  parallel_for(toy.items.size(), threads,
               [&](std::size_t i) { images[i] = load_image(toy.root / toy.items[i].image_path); });
  return images;
}

}  // namespace seal
