// seal - benchmark construction and evaluation for real-world SR:
// degradation pools, clustering to representative cases, SE test sets,
// IQA scoring, the relative-metric family, and coarse-to-fine ranking.

#include <CLI11.hpp>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>

#include <nlohmann/json.hpp>

#include "seal/cluster.hpp"
#include "seal/errors.hpp"
#include "seal/features.hpp"
#include "seal/metrics.hpp"
#include "seal/report_svg.hpp"
#include "seal/scoring.hpp"
#include "seal/testset.hpp"
#include "seal/version.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using nlohmann::ordered_json;

namespace {

struct RunConfig {
  std::uint64_t seed = 0;
  seal::PipelineConfig pipeline;
  int k = 100;
  int restarts = 10;
  seal::AffinityConfig affinity;
  std::string metric = "psnr";
  std::string channel = "luma";
  seal::RankingConfig ranking;
  std::vector<std::string> references;
  std::string clean_dir;
  std::string output_root;
  int threads = 0;
};

void apply_json_config(RunConfig& cfg, const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw seal::IoError("cannot open config " + path.string());
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw seal::ConfigError("config parse error: " + std::string(e.what()));
  }
  if (j.contains("seed")) cfg.seed = j["seed"].get<std::uint64_t>();
  if (j.contains("pipeline")) {
    const auto& p = j["pipeline"];
    auto& pl = cfg.pipeline;
    if (p.contains("family_probs")) p["family_probs"].get_to(pl.family_probs);
    if (p.contains("high_order_rounds")) p["high_order_rounds"].get_to(pl.high_order_rounds);
    if (p.contains("scale_factor")) p["scale_factor"].get_to(pl.scale_factor);
    if (p.contains("blur_sigma_range")) p["blur_sigma_range"].get_to(pl.blur_sigma_range);
    if (p.contains("kernel_size_range")) p["kernel_size_range"].get_to(pl.kernel_size_range);
    if (p.contains("isotropic_probability"))
      p["isotropic_probability"].get_to(pl.isotropic_probability);
    if (p.contains("noise_sigma_range")) p["noise_sigma_range"].get_to(pl.noise_sigma_range);
    if (p.contains("poisson_scale_range")) p["poisson_scale_range"].get_to(pl.poisson_scale_range);
    if (p.contains("gray_noise_probability"))
      p["gray_noise_probability"].get_to(pl.gray_noise_probability);
    if (p.contains("resize_scale_range")) p["resize_scale_range"].get_to(pl.resize_scale_range);
    if (p.contains("jpeg_quality_range")) p["jpeg_quality_range"].get_to(pl.jpeg_quality_range);
  }
  if (j.contains("clustering")) {
    const auto& c = j["clustering"];
    if (c.contains("k")) cfg.k = c["k"].get<int>();
    if (c.contains("restarts")) cfg.restarts = c["restarts"].get<int>();
    if (c.contains("affinity")) {
      const auto& a = c["affinity"];
      if (a.contains("kernel")) {
        const auto name = a["kernel"].get<std::string>();
        if (name == "gaussian") cfg.affinity.kernel = seal::AffinityConfig::Kernel::gaussian;
        else if (name == "knn") cfg.affinity.kernel = seal::AffinityConfig::Kernel::knn;
        else throw seal::ConfigError("unknown affinity kernel: " + name);
      }
      if (a.contains("sigma_mode")) {
        const auto name = a["sigma_mode"].get<std::string>();
        if (name == "median") cfg.affinity.sigma_mode = seal::AffinityConfig::SigmaMode::median;
        else if (name == "mean") cfg.affinity.sigma_mode = seal::AffinityConfig::SigmaMode::mean;
        else if (name == "fixed") cfg.affinity.sigma_mode = seal::AffinityConfig::SigmaMode::fixed;
        else throw seal::ConfigError("unknown sigma mode: " + name);
      }
      if (a.contains("fixed_sigma")) cfg.affinity.fixed_sigma = a["fixed_sigma"].get<double>();
      if (a.contains("knn_k")) cfg.affinity.knn_k = a["knn_k"].get<int>();
      if (a.contains("knn_mutual")) cfg.affinity.knn_mutual = a["knn_mutual"].get<bool>();
    }
  }
  if (j.contains("metric")) cfg.metric = j["metric"].get<std::string>();
  if (j.contains("channel")) cfg.channel = j["channel"].get<std::string>();
  if (j.contains("cutoff")) cfg.ranking.ar_cutoff = j["cutoff"].get<double>();
  if (j.contains("thresholds")) j["thresholds"].get_to(cfg.ranking.thresholds);
  if (j.contains("paths")) {
    const auto& p = j["paths"];
    if (p.contains("references")) p["references"].get_to(cfg.references);
    if (p.contains("clean_images")) cfg.clean_dir = p["clean_images"].get<std::string>();
    if (p.contains("output_root")) cfg.output_root = p["output_root"].get<std::string>();
  }
  if (j.contains("threads")) cfg.threads = j["threads"].get<int>();
}

std::string config_echo(const RunConfig& cfg) {
  ordered_json j;
  j["seed"] = cfg.seed;
  j["pipeline"] = {{"family_probs", cfg.pipeline.family_probs},
                   {"high_order_rounds", cfg.pipeline.high_order_rounds},
                   {"scale_factor", cfg.pipeline.scale_factor},
                   {"blur_sigma_range", cfg.pipeline.blur_sigma_range},
                   {"kernel_size_range", cfg.pipeline.kernel_size_range},
                   {"isotropic_probability", cfg.pipeline.isotropic_probability},
                   {"noise_sigma_range", cfg.pipeline.noise_sigma_range},
                   {"poisson_scale_range", cfg.pipeline.poisson_scale_range},
                   {"gray_noise_probability", cfg.pipeline.gray_noise_probability},
                   {"resize_scale_range", cfg.pipeline.resize_scale_range},
                   {"jpeg_quality_range", cfg.pipeline.jpeg_quality_range}};
  j["clustering"] = {{"k", cfg.k}, {"restarts", cfg.restarts}};
  j["metric"] = cfg.metric;
  return j.dump();
}

seal::IqaChannel channel_from_name(const std::string& name) {
  if (name == "luma") return seal::IqaChannel::luma;
  if (name == "rgb") return seal::IqaChannel::rgb;
  throw seal::ConfigError("unknown IQA channel: " + name);
}

std::vector<fs::path> list_images(const fs::path& dir) {
  if (!fs::is_directory(dir)) throw seal::IoError("not a directory: " + dir.string());
  std::vector<fs::path> out;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (!entry.is_regular_file()) continue;
    const auto ext = entry.path().extension().string();
    if (ext == ".png" || ext == ".bmp" || ext == ".jpg" || ext == ".jpeg") {
      out.push_back(entry.path());
    }
  }
  std::sort(out.begin(), out.end());
  if (out.empty()) throw seal::IoError("no images found in " + dir.string());
  return out;
}

// ----------------------------------------------------------------- pool ----

int cmd_pool(const RunConfig& cfg, int n, const std::string& out_dir) {
  if (cfg.references.empty()) throw seal::ConfigError("pool: at least one --reference required");
  std::vector<fs::path> refs;
  for (const auto& r : cfg.references) {
    if (!fs::exists(r)) throw seal::IoError("reference does not exist: " + r);
    refs.emplace_back(r);
  }
  const fs::path out(out_dir);
  const auto pool = seal::build_pool(refs, n, cfg.pipeline, cfg.seed, out, cfg.threads);

  std::vector<seal::DistanceMatrix> matrices;
  for (std::size_t r = 0; r < refs.size(); ++r) {
    const auto images = seal::load_pool_images(pool, static_cast<int>(r));
    auto m = seal::distance_matrix(images, seal::MetricId::hist_l1, cfg.threads);
    seal::write_distance_matrix(m, out / ("distances_ref" + std::to_string(r) + ".bin"));
    matrices.push_back(std::move(m));
  }
  const auto averaged = seal::average_matrices(matrices);
  seal::write_distance_matrix(averaged, out / "distances.bin");

  std::cout << "pool " << pool.pool_id << ": n=" << pool.n << " references=" << refs.size()
            << "\n";
  std::cout << "similarity variance (hist-l1, averaged matrix): " << seal::pool_variance(averaged)
            << "\n";
  std::cout << "manifest: " << (out / "pool.json").string() << "\n";
  return 0;
}

// -------------------------------------------------------------- cluster ----

int cmd_cluster(const RunConfig& cfg, const std::string& pool_manifest, int k,
                const std::string& out_dir, bool emit_embedding) {
  const auto pool = seal::read_pool(pool_manifest);
  if (k < 2) throw seal::ConfigError("cluster: k must be >= 2");
  if (k > pool.n) throw seal::ConfigError("cluster: k exceeds pool size");
  const fs::path out(out_dir);
  fs::create_directories(out);

  std::vector<seal::DistanceMatrix> matrices;
  for (std::size_t r = 0; r < pool.images.size(); ++r) {
    const fs::path cached = pool.root / ("distances_ref" + std::to_string(r) + ".bin");
    if (fs::exists(cached)) {
      matrices.push_back(seal::read_distance_matrix(cached));
    } else {
      const auto images = seal::load_pool_images(pool, static_cast<int>(r));
      matrices.push_back(seal::distance_matrix(images, seal::MetricId::hist_l1, cfg.threads));
    }
  }
  const auto averaged = seal::average_matrices(matrices);
  if (matrices.size() > 1) {
    std::cout << "clustering on the average of " << matrices.size()
              << " reference similarity matrices\n";
  }

  const std::uint64_t seed = cfg.seed != 0 ? cfg.seed : pool.master_seed;
  const auto result = seal::spectral_cluster(averaged, k, cfg.affinity, seed, cfg.restarts);
  seal::write_cluster_result(result, config_echo(cfg), out / "cluster.json");

  std::vector<seal::DegradationRecipe> medoid_recipes;
  for (int idx : result.medoid_indices) medoid_recipes.push_back(pool.recipes[idx]);
  seal::write_recipes_jsonl(medoid_recipes, out / "medoid_recipes.jsonl");

  if (emit_embedding) {
    std::ofstream emb(out / "embedding.csv", std::ios::trunc);
    if (!emb) throw seal::IoError("cannot write embedding.csv");
    emb.precision(17);
    for (int i = 0; i < pool.n; ++i) {
      for (int c = 0; c < k; ++c) {
        if (c) emb << ',';
        emb << result.embedding[static_cast<std::size_t>(i) * k + c];
      }
      emb << '\n';
    }
  }

  std::cout << "k=" << k << " objective=" << result.kmeans_objective << "\n";
  std::cout << "medoid recipes: " << (out / "medoid_recipes.jsonl").string() << "\n";
  return 0;
}

// -------------------------------------------------------- build-testset ----

int cmd_build_testset(const RunConfig& cfg, const std::string& recipes_file,
                      const std::string& clean_dir, const std::string& out_dir,
                      const std::string& noise_mode, const std::string& testset_id) {
  const auto recipes = seal::read_recipes_jsonl(recipes_file);
  const auto cleans = list_images(clean_dir);
  const auto manifest =
      seal::build_se_testset(recipes, cleans, out_dir, seal::noise_mode_from_name(noise_mode),
                             testset_id, cfg.threads);
  std::cout << "testset " << manifest.testset_id << ": " << manifest.case_count() << " cases x "
            << manifest.clean_image_ids.size() << " images\n";
  std::cout << "manifest: " << (fs::path(out_dir) / "testset.json").string() << "\n";
  return 0;
}

// ---------------------------------------------------------------- score ----

int cmd_score(const RunConfig& cfg, const std::string& sr_dir, const std::string& gt_dir,
              const std::string& testset, const std::string& model_id,
              const std::string& out_file) {
  const auto manifest = seal::read_se_testset(testset);
  const auto table = seal::score_outputs(sr_dir, gt_dir, manifest, cfg.metric, model_id,
                                         channel_from_name(cfg.channel), cfg.threads);
  seal::write_score_table(table, out_file, config_echo(cfg));
  std::cout << "scored " << table.rows.size() << " pairs -> " << out_file << "\n";
  return 0;
}

// ---------------------------------------------------------------- lines ----

int cmd_lines(const RunConfig& cfg, const std::string& testset, const std::string& gt_dir,
              const std::string& acceptance, const std::string& excellence,
              const std::string& out_file) {
  const auto manifest = seal::read_se_testset(testset);
  const auto lines = seal::builtin_line(manifest, gt_dir, seal::resize_mode_from_name(acceptance),
                                        seal::resize_mode_from_name(excellence), cfg.metric,
                                        channel_from_name(cfg.channel), cfg.threads);
  seal::write_line_set(lines, out_file);
  std::cout << "line set (" << lines.provenance << ") -> " << out_file << "\n";
  return 0;
}

// ----------------------------------------------------------------- eval ----

int cmd_eval(const RunConfig& cfg, const std::string& scores_file, const std::string& lines_file,
             const std::string& out_file, const std::string& orientation_override) {
  const auto table = seal::ingest_scores(scores_file, orientation_override);
  const auto lines = seal::read_line_set(lines_file);
  const auto report = seal::evaluate(table, lines);
  seal::write_seal_report(report, out_file, config_echo(cfg));
  std::cout << "model " << report.model_id << ": AR=" << report.ar << " RPR_I=" << report.rpr_i;
  if (report.rpr_a) std::cout << " RPR_A=" << *report.rpr_a;
  if (report.rpr_u) std::cout << " RPR_U=" << *report.rpr_u;
  std::cout << "\nreport: " << out_file << "\n";
  for (const auto& w : report.warnings) std::cerr << "warning: " << w << "\n";
  return 0;
}

// ----------------------------------------------------------------- rank ----

int cmd_rank(const RunConfig& cfg, const std::vector<std::string>& report_files,
             const std::string& out_file, bool exclusive) {
  std::vector<seal::SealReport> reports;
  for (const auto& f : report_files) reports.push_back(seal::read_seal_report(f));
  seal::RankingConfig rc = cfg.ranking;
  rc.inclusive = !exclusive;
  const auto outcome = seal::rank_models(reports, rc);
  seal::write_ranking(outcome, out_file, rc);
  std::cout << seal::format_ranking_table(outcome);
  if (outcome.intransitive_found) {
    std::cerr << "warning: intransitive comparison triple detected; order is the canonical "
                 "insertion order\n";
  }
  return 0;
}

// --------------------------------------------------------------- report ----

int cmd_report(const std::vector<std::string>& report_files, const std::string& lines_file,
               const std::string& out_file) {
  std::vector<seal::SealReport> reports;
  for (const auto& f : report_files) reports.push_back(seal::read_seal_report(f));
  const auto lines = seal::read_line_set(lines_file);
  seal::write_report_svg(reports, lines, out_file);
  std::cout << "chart: " << out_file << "\n";
  return 0;
}

// ------------------------------------------------------------------ toy ----

int cmd_toy(const RunConfig& cfg, const std::string& kind, const std::string& reference,
            const std::string& out_dir) {
  if (!fs::exists(reference)) throw seal::IoError("reference does not exist: " + reference);
  const auto toy = seal::build_toy(seal::toy_kind_from_name(kind), reference, cfg.seed, out_dir,
                                   cfg.threads);
  std::cout << "toy " << kind << ": " << toy.items.size() << " items\n";
  std::cout << "manifest: " << (fs::path(out_dir) / "toy.json").string() << "\n";
  return 0;
}

// --------------------------------------------------------------- verify ----

int cmd_verify(const std::string& manifest_path) {
  std::ifstream in(manifest_path);
  if (!in) throw seal::IoError("cannot open " + manifest_path);
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw seal::DataError(manifest_path + ": " + std::string(e.what()));
  }
  std::vector<std::string> bad;
  if (j.contains("pool_id")) {
    bad = seal::verify_pool(seal::read_pool(manifest_path));
  } else if (j.contains("testset_id")) {
    bad = seal::verify_se_testset(seal::read_se_testset(manifest_path));
  } else {
    throw seal::DataError("unrecognized manifest type: " + manifest_path);
  }
  if (bad.empty()) {
    std::cout << "all hashes verified\n";
    return 0;
  }
  for (const auto& b : bad) std::cerr << "mismatch: " << b << "\n";
  throw seal::DataError(std::to_string(bad.size()) + " file(s) failed verification");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"seal: degradation-space benchmarking and relative evaluation for real-SR"};
  app.set_version_flag("--version", seal::kToolVersion);
  app.require_subcommand(1);

  RunConfig cfg;
  std::string config_file;
  app.add_option("--config", config_file, "JSON config file (flags override it)");
  app.add_option("--threads", cfg.threads, "worker thread cap (SEAL_THREADS as fallback)");

  // pool
  auto* pool = app.add_subcommand("pool", "sample a degradation pool");
  int pool_n = 100;
  std::string pool_out = "pool_out";
  std::vector<std::string> pool_refs;
  std::uint64_t seed_flag = 0;
  bool seed_given = false;
  pool->add_option("--n", pool_n, "number of sampled recipes");
  pool->add_option("--seed", seed_flag, "master seed")->each([&](const std::string&) {
    seed_given = true;
  });
  pool->add_option("--references", pool_refs, "reference (GT) image paths");
  pool->add_option("--out", pool_out, "output directory");

  // cluster
  auto* cluster = app.add_subcommand("cluster", "spectral clustering of a pool");
  std::string cluster_pool, cluster_out = "cluster_out";
  int cluster_k = 100;
  cluster->add_option("--pool", cluster_pool, "pool manifest (pool.json)")->required();
  cluster->add_option("--k", cluster_k, "cluster count");
  cluster->add_option("--seed", seed_flag, "clustering seed (default: pool master seed)")
      ->each([&](const std::string&) { seed_given = true; });
  cluster->add_option("--restarts", cfg.restarts, "k-means restarts");
  std::string cluster_kernel, cluster_sigma_mode;
  cluster->add_option("--affinity", cluster_kernel, "gaussian | knn");
  cluster->add_option("--sigma-mode", cluster_sigma_mode, "median | mean | fixed");
  cluster->add_option("--sigma", cfg.affinity.fixed_sigma, "fixed kernel sigma");
  cluster->add_option("--knn-k", cfg.affinity.knn_k, "neighbours for the knn kernel");
  cluster->add_flag("--mutual", cfg.affinity.knn_mutual, "mutual-knn symmetrization");
  cluster->add_option("--out", cluster_out, "output directory");
  bool cluster_embedding = false;
  cluster->add_flag("--emit-embedding", cluster_embedding, "also write embedding.csv (n x k)");

  // build-testset
  auto* bts = app.add_subcommand("build-testset", "materialize an SE test set");
  std::string bts_recipes, bts_clean, bts_out = "testset_out", bts_noise = "per-image",
              bts_id;
  bts->add_option("--recipes", bts_recipes, "recipes JSONL (e.g. medoid_recipes.jsonl)")
      ->required();
  bts->add_option("--clean-dir", bts_clean, "directory of clean images")->required();
  bts->add_option("--out", bts_out, "output directory");
  bts->add_option("--noise-mode", bts_noise, "per-image | frozen");
  bts->add_option("--id", bts_id, "testset id");

  // score
  auto* score = app.add_subcommand("score", "score SR outputs against GT");
  std::string score_sr, score_gt, score_testset, score_model = "model",
              score_out = "scores.csv";
  score->add_option("--sr-dir", score_sr, "SR outputs: <dir>/<case-id>/<image-id>.png")
      ->required();
  score->add_option("--gt-dir", score_gt, "ground-truth images")->required();
  score->add_option("--testset", score_testset, "testset manifest")->required();
  score->add_option("--metric", cfg.metric, "psnr | ssim");
  score->add_option("--channel", cfg.channel, "luma | rgb (psnr only)");
  score->add_option("--model-id", score_model, "model identifier");
  score->add_option("--out", score_out, "output CSV");

  // lines
  auto* lines = app.add_subcommand("lines", "build reference lines from classical upscalers");
  std::string lines_testset, lines_gt, lines_acc = "nearest", lines_exc = "bicubic",
              lines_out = "lines.csv";
  lines->add_option("--testset", lines_testset, "testset manifest")->required();
  lines->add_option("--gt-dir", lines_gt, "ground-truth images")->required();
  lines->add_option("--metric", cfg.metric, "psnr | ssim");
  lines->add_option("--channel", cfg.channel, "luma | rgb");
  lines->add_option("--acceptance", lines_acc, "acceptance upscaler (nearest|bilinear|bicubic)");
  lines->add_option("--excellence", lines_exc, "excellence upscaler");
  lines->add_option("--out", lines_out, "output CSV (JSON sidecar written alongside)");

  // eval
  auto* eval = app.add_subcommand("eval", "compute the metric bundle for one model");
  std::string eval_scores, eval_lines, eval_out = "report.json", eval_orient;
  eval->add_option("--scores", eval_scores, "score table CSV")->required();
  eval->add_option("--lines", eval_lines, "line set CSV")->required();
  eval->add_option("--orientation", eval_orient, "override score orientation");
  eval->add_option("--out", eval_out, "output report JSON");

  // rank
  auto* rank = app.add_subcommand("rank", "coarse-to-fine ranking of model reports");
  std::vector<std::string> rank_reports;
  std::string rank_out = "ranking.json";
  bool rank_exclusive = false;
  std::vector<double> rank_thresholds;
  rank->add_option("--reports", rank_reports, "report JSON files")->required();
  rank->add_option("--out", rank_out, "output ranking JSON");
  rank->add_option("--cutoff", cfg.ranking.ar_cutoff, "AR exclusion cutoff");
  rank->add_option("--thresholds", rank_thresholds,
                   "decision thresholds for AR RPR_I RPR_A RPR_U")
      ->expected(4);
  rank->add_flag("--exclusive", rank_exclusive,
                 "strict-threshold comparison (default is inclusive)");

  // report
  auto* report = app.add_subcommand("report", "SVG chart of distributed performance");
  std::vector<std::string> report_reports;
  std::string report_lines, report_out = "report.svg";
  report->add_option("--reports", report_reports, "report JSON files")->required();
  report->add_option("--lines", report_lines, "line set CSV")->required();
  report->add_option("--out", report_out, "output SVG");

  // toy
  auto* toy = app.add_subcommand("toy", "generate a labeled toy set");
  std::string toy_kind = "blur100", toy_ref, toy_out = "toy_out";
  toy->add_option("--kind", toy_kind, "blur100 | noise100 | bn100");
  toy->add_option("--reference", toy_ref, "reference image")->required();
  toy->add_option("--seed", seed_flag, "seed")->each([&](const std::string&) {
    seed_given = true;
  });
  toy->add_option("--out", toy_out, "output directory");

  // verify
  auto* verify = app.add_subcommand("verify", "re-check content hashes of a manifest");
  std::string verify_manifest;
  verify->add_option("--manifest", verify_manifest, "pool.json or testset.json")->required();

  try {
    app.parse(argc, argv);
    if (!config_file.empty()) apply_json_config(cfg, config_file);
    // flags win over the config file
    if (seed_given) cfg.seed = seed_flag;
    if (!pool_refs.empty()) cfg.references = pool_refs;
    if (!cluster_kernel.empty()) {
      if (cluster_kernel == "gaussian") cfg.affinity.kernel = seal::AffinityConfig::Kernel::gaussian;
      else if (cluster_kernel == "knn") cfg.affinity.kernel = seal::AffinityConfig::Kernel::knn;
      else throw seal::ConfigError("unknown affinity kernel: " + cluster_kernel);
    }
    if (!cluster_sigma_mode.empty()) {
      if (cluster_sigma_mode == "median") cfg.affinity.sigma_mode = seal::AffinityConfig::SigmaMode::median;
      else if (cluster_sigma_mode == "mean") cfg.affinity.sigma_mode = seal::AffinityConfig::SigmaMode::mean;
      else if (cluster_sigma_mode == "fixed") cfg.affinity.sigma_mode = seal::AffinityConfig::SigmaMode::fixed;
      else throw seal::ConfigError("unknown sigma mode: " + cluster_sigma_mode);
    }
    if (!rank_thresholds.empty()) {
      if (rank_thresholds.size() != 4) {
        throw seal::ConfigError("--thresholds needs exactly 4 values");
      }
      std::copy(rank_thresholds.begin(), rank_thresholds.end(), cfg.ranking.thresholds.begin());
    }

    if (*pool) return cmd_pool(cfg, pool_n, pool_out);
    if (*cluster) return cmd_cluster(cfg, cluster_pool, cluster_k, cluster_out, cluster_embedding);
    if (*bts) return cmd_build_testset(cfg, bts_recipes, bts_clean, bts_out, bts_noise, bts_id);
    if (*score) return cmd_score(cfg, score_sr, score_gt, score_testset, score_model, score_out);
    if (*lines) return cmd_lines(cfg, lines_testset, lines_gt, lines_acc, lines_exc, lines_out);
    if (*eval) return cmd_eval(cfg, eval_scores, eval_lines, eval_out, eval_orient);
    if (*rank) return cmd_rank(cfg, rank_reports, rank_out, rank_exclusive);
    if (*report) return cmd_report(report_reports, report_lines, report_out);
    if (*toy) return cmd_toy(cfg, toy_kind, toy_ref, toy_out);
    if (*verify) return cmd_verify(verify_manifest);
    return 0;
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  } catch (const seal::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return e.exit_code();
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
