#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "seal/image.hpp"

namespace seal {

// Three concatenated 256-bin channel histograms (R|G|B), each block
// normalized to unit sum, so features are resolution-independent.
struct HistogramFeature {
  static constexpr int kBins = 768;
  std::vector<double> bins;  // length 768
};

HistogramFeature histogram(const Image& img);

// Sum of absolute bin differences; in [0, 6] for unit-sum blocks.
double hist_l1(const HistogramFeature& a, const HistogramFeature& b);

// Mean squared pixel difference over all samples, on the 8-bit scale.
double mse_distance(const Image& a, const Image& b);

// 1 - ssim(a, b); in [0, 2].
double ssim_dissimilarity(const Image& a, const Image& b);

enum class MetricId { hist_l1, mse, ssim_dissimilarity };
const char* metric_id_name(MetricId id);
MetricId metric_id_from_name(const std::string& name);

struct DistanceMatrix {
  int n = 0;
  MetricId metric = MetricId::hist_l1;
  std::vector<double> entries;  // n*n row-major, symmetric, zero diagonal

  double at(int i, int j) const { return entries[static_cast<std::size_t>(i) * n + j]; }
  double& at(int i, int j) { return entries[static_cast<std::size_t>(i) * n + j]; }
};

// Full pairwise matrix; row blocks are computed in parallel and the result is
// identical to the sequential one.
DistanceMatrix distance_matrix(const std::vector<HistogramFeature>& features, int threads = 0);
DistanceMatrix distance_matrix(const std::vector<Image>& images, MetricId metric,
                               int threads = 0);

// Population variance of the off-diagonal entries (the pool-size diagnostic).
double pool_variance(const DistanceMatrix& m);

// Entrywise arithmetic mean; all inputs must share n and metric.
DistanceMatrix average_matrices(const std::vector<DistanceMatrix>& ms);

// Binary layout: magic "SEALDM01", u32 metric-name length, metric name,
// u64 n, then n*n little-endian doubles.
void write_distance_matrix(const DistanceMatrix& m, const std::filesystem::path& path);
DistanceMatrix read_distance_matrix(const std::filesystem::path& path);
void export_distance_matrix_csv(const DistanceMatrix& m, const std::filesystem::path& path);

}  // namespace seal
