#include "seal/features.hpp"

#include <cmath>
#include <cstring>
#include <fstream>

#include "seal/errors.hpp"
#include "seal/iqa.hpp"
#include "seal/parallel.hpp"

namespace seal {

HistogramFeature histogram(const Image& img) {
  if (img.width < 1 || img.height < 1) throw ConfigError("histogram: empty image");
  HistogramFeature f;
  f.bins.assign(HistogramFeature::kBins, 0.0);
  const std::size_t pixels = static_cast<std::size_t>(img.width) * img.height;
  for (std::size_t p = 0; p < pixels; ++p) {
    const float* px = &img.data[p * 3];
    for (int c = 0; c < 3; ++c) f.bins[c * 256 + quantize_sample(px[c])] += 1.0;
  }
  for (int c = 0; c < 3; ++c) {
    for (int b = 0; b < 256; ++b) f.bins[c * 256 + b] /= static_cast<double>(pixels);
  }
  return f;
}

double hist_l1(const HistogramFeature& a, const HistogramFeature& b) {
  if (a.bins.size() != HistogramFeature::kBins || b.bins.size() != HistogramFeature::kBins) {
    throw DataError("hist_l1: features must have 768 bins");
  }
  double sum = 0.0;
  for (int i = 0; i < HistogramFeature::kBins; ++i) sum += std::fabs(a.bins[i] - b.bins[i]);
  return sum;
}

double mse_distance(const Image& a, const Image& b) {
  if (a.width != b.width || a.height != b.height) throw DataError("mse_distance: size mismatch");
  double se = 0.0;
  for (std::size_t i = 0; i < a.data.size(); ++i) {
    const double d = static_cast<double>(quantize_sample(a.data[i])) - quantize_sample(b.data[i]);
    se += d * d;
  }
  return se / static_cast<double>(a.data.size());
}

double ssim_dissimilarity(const Image& a, const Image& b) {
  return 1.0 - ssim(a, b);
}

const char* metric_id_name(MetricId id) {
  switch (id) {
    case MetricId::hist_l1: return "hist-l1";
    case MetricId::mse: return "mse";
    case MetricId::ssim_dissimilarity: return "ssim-dissimilarity";
  }
  return "?";
}

MetricId metric_id_from_name(const std::string& name) {
  if (name == "hist-l1") return MetricId::hist_l1;
  if (name == "mse") return MetricId::mse;
  if (name == "ssim-dissimilarity") return MetricId::ssim_dissimilarity;
  throw DataError("unknown metric id: " + name);
}

namespace {

DistanceMatrix allocate_matrix(int n, MetricId metric) {
  if (n < 2) throw ConfigError("distance_matrix: need at least 2 items");
  DistanceMatrix m;
  m.n = n;
  m.metric = metric;
  m.entries.assign(static_cast<std::size_t>(n) * n, 0.0);
  return m;
}

}  // namespace

DistanceMatrix distance_matrix(const std::vector<HistogramFeature>& features, int threads) {
  const int n = static_cast<int>(features.size());
  DistanceMatrix m = allocate_matrix(n, MetricId::hist_l1);
  parallel_for(static_cast<std::size_t>(n), threads, [&](std::size_t i) {
    for (std::size_t j = i + 1; j < static_cast<std::size_t>(n); ++j) {
      const double d = hist_l1(features[i], features[j]);
      m.entries[i * n + j] = d;
      m.entries[j * n + i] = d;
    }
  });
  return m;
}

DistanceMatrix distance_matrix(const std::vector<Image>& images, MetricId metric, int threads) {
  const int n = static_cast<int>(images.size());
  for (int i = 1; i < n; ++i) {
    if (images[i].width != images[0].width || images[i].height != images[0].height) {
      throw DataError("distance_matrix: images must share one resolution");
    }
  }
  if (metric == MetricId::hist_l1) {
    std::vector<HistogramFeature> feats(n);
    parallel_for(static_cast<std::size_t>(n), threads,
                 [&](std::size_t i) { feats[i] = histogram(images[i]); });
    return distance_matrix(feats, threads);
  }
  DistanceMatrix m = allocate_matrix(n, metric);
  if (metric == MetricId::ssim_dissimilarity) {
    std::vector<SsimPrecomp> pre(n);
    parallel_for(static_cast<std::size_t>(n), threads,
                 [&](std::size_t i) { pre[i] = ssim_precompute(images[i]); });
    parallel_for(static_cast<std::size_t>(n), threads, [&](std::size_t i) {
      for (std::size_t j = i + 1; j < static_cast<std::size_t>(n); ++j) {
        const double d = 1.0 - ssim_from_precomp(pre[i], pre[j]);
        m.entries[i * n + j] = d;
        m.entries[j * n + i] = d;
      }
    });
    return m;
  }
  parallel_for(static_cast<std::size_t>(n), threads, [&](std::size_t i) {
    for (std::size_t j = i + 1; j < static_cast<std::size_t>(n); ++j) {
      const double d = mse_distance(images[i], images[j]);
      m.entries[i * n + j] = d;
      m.entries[j * n + i] = d;
    }
  });
  return m;
}

double pool_variance(const DistanceMatrix& m) {
  if (m.n < 2) throw ConfigError("pool_variance: need n >= 2");
  double sum = 0.0;
  std::size_t count = 0;
  for (int i = 0; i < m.n; ++i) {
    for (int j = 0; j < m.n; ++j) {
      if (i == j) continue;
      sum += m.at(i, j);
      ++count;
    }
  }
  const double mean = sum / static_cast<double>(count);
  double var = 0.0;
  for (int i = 0; i < m.n; ++i) {
    for (int j = 0; j < m.n; ++j) {
      if (i == j) continue;
      const double d = m.at(i, j) - mean;
      var += d * d;
    }
  }
  return var / static_cast<double>(count);
}

DistanceMatrix average_matrices(const std::vector<DistanceMatrix>& ms) {
  if (ms.empty()) throw ConfigError("average_matrices: need at least one matrix");
  for (const auto& m : ms) {
    if (m.n != ms[0].n || m.metric != ms[0].metric) {
      throw DataError("average_matrices: shape or metric mismatch");
    }
  }
  DistanceMatrix out = ms[0];
  for (std::size_t k = 1; k < ms.size(); ++k) {
    for (std::size_t i = 0; i < out.entries.size(); ++i) out.entries[i] += ms[k].entries[i];
  }
  for (double& v : out.entries) v /= static_cast<double>(ms.size());
  return out;
}

namespace {
constexpr char kMatrixMagic[8] = {'S', 'E', 'A', 'L', 'D', 'M', '0', '1'};
}

void write_distance_matrix(const DistanceMatrix& m, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  out.write(kMatrixMagic, 8);
  const std::uint64_t n = static_cast<std::uint64_t>(m.n);
  out.write(reinterpret_cast<const char*>(&n), 8);
  const std::string name = metric_id_name(m.metric);
  const std::uint32_t len = static_cast<std::uint32_t>(name.size());
  out.write(reinterpret_cast<const char*>(&len), 4);
  out.write(name.data(), len);
  out.write(reinterpret_cast<const char*>(m.entries.data()),
            static_cast<std::streamsize>(m.entries.size() * sizeof(double)));
  if (!out) throw IoError("write failed for " + path.string());
}

DistanceMatrix read_distance_matrix(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  char magic[8];
  in.read(magic, 8);
  if (!in || std::memcmp(magic, kMatrixMagic, 8) != 0) {
    throw DataError("not a distance-matrix file: " + path.string());
  }
  std::uint64_t n = 0;
  in.read(reinterpret_cast<char*>(&n), 8);
  if (!in || n < 2 || n > (1u << 20)) throw DataError("corrupt matrix header: " + path.string());
  std::uint32_t len = 0;
  in.read(reinterpret_cast<char*>(&len), 4);
  if (!in || len > 64) throw DataError("corrupt matrix header: " + path.string());
  std::string name(len, '\0');
  in.read(name.data(), len);
  DistanceMatrix m;
  m.metric = metric_id_from_name(name);
  m.n = static_cast<int>(n);
  m.entries.resize(n * n);
  in.read(reinterpret_cast<char*>(m.entries.data()),
          static_cast<std::streamsize>(m.entries.size() * sizeof(double)));
  if (!in) throw DataError("truncated matrix file: " + path.string());
  return m;
}

void export_distance_matrix_csv(const DistanceMatrix& m, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  out.precision(17);
  for (int i = 0; i < m.n; ++i) {
    for (int j = 0; j < m.n; ++j) {
      if (j) out << ',';
      out << m.at(i, j);
    }
    out << '\n';
  }
}

}  // namespace seal
