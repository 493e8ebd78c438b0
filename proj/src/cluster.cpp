#include "seal/cluster.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>

#include <nlohmann/json.hpp>

#include "seal/errors.hpp"
#include "seal/rng.hpp"
#include "seal/version.hpp"

namespace seal {

namespace {

double sigma_from_mode(const DistanceMatrix& d, const AffinityConfig& cfg) {
  if (cfg.sigma_mode == AffinityConfig::SigmaMode::fixed) {
    if (cfg.fixed_sigma <= 0.0) throw ConfigError("affinity: fixed sigma must be positive");
    return cfg.fixed_sigma;
  }
  std::vector<double> off;
  off.reserve(static_cast<std::size_t>(d.n) * (d.n - 1));
  for (int i = 0; i < d.n; ++i) {
    for (int j = 0; j < d.n; ++j) {
      if (i != j) off.push_back(d.at(i, j));
    }
  }
  if (cfg.sigma_mode == AffinityConfig::SigmaMode::mean) {
    const double s = std::accumulate(off.begin(), off.end(), 0.0) / off.size();
    return s > 0.0 ? s : 1.0;
  }
  std::nth_element(off.begin(), off.begin() + off.size() / 2, off.end());
  const double med = off[off.size() / 2];
  return med > 0.0 ? med : 1.0;  // degenerate all-zero distances: kernel is 1 anyway
}

}  // namespace

std::vector<double> build_affinity(const DistanceMatrix& d, const AffinityConfig& cfg) {
  const int n = d.n;
  std::vector<double> w(static_cast<std::size_t>(n) * n, 0.0);
  if (cfg.kernel == AffinityConfig::Kernel::gaussian) {
    const double sigma = sigma_from_mode(d, cfg);
    const double denom = 2.0 * sigma * sigma;
    for (int i = 0; i < n; ++i) {
      for (int j = i + 1; j < n; ++j) {
        const double dist = d.at(i, j);
        const double a = std::exp(-dist * dist / denom);
        w[static_cast<std::size_t>(i) * n + j] = a;
        w[static_cast<std::size_t>(j) * n + i] = a;
      }
    }
    return w;
  }
  // knn
  if (cfg.knn_k < 1 || cfg.knn_k > n - 1) {
    throw ConfigError("affinity: knn k must be in [1, n-1]");
  }
  std::vector<std::vector<bool>> is_neighbor(n, std::vector<bool>(n, false));
  std::vector<int> order(n);
  for (int i = 0; i < n; ++i) {
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int a, int b) {
      if (a == i) return false;
      if (b == i) return true;
      if (d.at(i, a) != d.at(i, b)) return d.at(i, a) < d.at(i, b);
      return a < b;
    });
    for (int r = 0; r < cfg.knn_k; ++r) is_neighbor[i][order[r]] = true;
  }
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      const bool edge = cfg.knn_mutual ? (is_neighbor[i][j] && is_neighbor[j][i])
                                       : (is_neighbor[i][j] || is_neighbor[j][i]);
      if (edge) w[static_cast<std::size_t>(i) * n + j] = 1.0;
    }
  }
  return w;
}

std::vector<double> laplacian(const std::vector<double>& w, int n) {
  if (w.size() != static_cast<std::size_t>(n) * n) throw DataError("laplacian: bad matrix size");
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const double a = w[static_cast<std::size_t>(i) * n + j];
      const double b = w[static_cast<std::size_t>(j) * n + i];
      if (std::fabs(a - b) > 1e-12 || a < 0.0) {
        throw DataError("laplacian: affinity must be symmetric and nonnegative");
      }
    }
  }
  std::vector<double> l(static_cast<std::size_t>(n) * n, 0.0);
  for (int i = 0; i < n; ++i) {
    double degree = 0.0;
    for (int j = 0; j < n; ++j) degree += w[static_cast<std::size_t>(i) * n + j];
    for (int j = 0; j < n; ++j) l[static_cast<std::size_t>(i) * n + j] = -w[static_cast<std::size_t>(i) * n + j];
    l[static_cast<std::size_t>(i) * n + i] = degree - w[static_cast<std::size_t>(i) * n + i];
  }
  return l;
}

std::vector<double> spectral_embed(const std::vector<double>& l, int n, int k) {
  if (k < 1 || k > n) throw ConfigError("spectral_embed: k must be in [1, n]");
  Eigen::MatrixXd mat(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) mat(i, j) = l[static_cast<std::size_t>(i) * n + j];
  }
  // Symmetrize against accumulated rounding before handing to the solver.
  mat = 0.5 * (mat + mat.transpose()).eval();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(mat);
  if (solver.info() != Eigen::Success) {
    throw SolverError("spectral_embed: eigendecomposition failed");
  }
  std::vector<double> u(static_cast<std::size_t>(n) * k);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < k; ++j) u[static_cast<std::size_t>(i) * k + j] = solver.eigenvectors()(i, j);
  }
  return u;
}

namespace {

double sq_dist(const double* a, const double* b, int dim) {
  double s = 0.0;
  for (int i = 0; i < dim; ++i) {
    const double d = a[i] - b[i];
    s += d * d;
  }
  return s;
}

KMeansResult kmeans_single(const std::vector<double>& pts, int n, int dim, int k,
                           SeededRng& rng) {
  std::vector<double> centroids(static_cast<std::size_t>(k) * dim);
  // k-means++ seeding
  const int first = rng.uniform_int(0, n - 1);
  std::copy_n(&pts[static_cast<std::size_t>(first) * dim], dim, centroids.begin());
  std::vector<double> best_d(n, std::numeric_limits<double>::max());
  for (int c = 1; c < k; ++c) {
    double total = 0.0;
    for (int i = 0; i < n; ++i) {
      const double d = sq_dist(&pts[static_cast<std::size_t>(i) * dim],
                               &centroids[static_cast<std::size_t>(c - 1) * dim], dim);
      if (d < best_d[i]) best_d[i] = d;
      total += best_d[i];
    }
    int chosen = n - 1;
    if (total > 0.0) {
      const double target = rng.uniform() * total;
      double acc = 0.0;
      for (int i = 0; i < n; ++i) {
        acc += best_d[i];
        if (acc >= target) {
          chosen = i;
          break;
        }
      }
    } else {
      chosen = rng.uniform_int(0, n - 1);  // all points identical
    }
    std::copy_n(&pts[static_cast<std::size_t>(chosen) * dim], dim,
                centroids.begin() + static_cast<std::size_t>(c) * dim);
  }

  std::vector<int> assign(n, 0);
  std::vector<int> counts(k, 0);
  std::vector<double> sums(static_cast<std::size_t>(k) * dim);
  std::vector<double> trace;
  double objective = 0.0;
  for (int iter = 0; iter < 300; ++iter) {
    objective = 0.0;
    std::fill(counts.begin(), counts.end(), 0);
    std::fill(sums.begin(), sums.end(), 0.0);
    for (int i = 0; i < n; ++i) {
      int best = 0;
      double bd = std::numeric_limits<double>::max();
      for (int c = 0; c < k; ++c) {
        const double d = sq_dist(&pts[static_cast<std::size_t>(i) * dim],
                                 &centroids[static_cast<std::size_t>(c) * dim], dim);
        if (d < bd) {
          bd = d;
          best = c;
        }
      }
      assign[i] = best;
      objective += bd;
      ++counts[best];
      for (int t = 0; t < dim; ++t) sums[static_cast<std::size_t>(best) * dim + t] +=
          pts[static_cast<std::size_t>(i) * dim + t];
    }
    // repair empty clusters by stealing the point farthest from its centroid
    for (int c = 0; c < k; ++c) {
      if (counts[c] > 0) continue;
      int farthest = -1;
      double fd = -1.0;
      for (int i = 0; i < n; ++i) {
        if (counts[assign[i]] <= 1) continue;
        const double d = sq_dist(&pts[static_cast<std::size_t>(i) * dim],
                                 &centroids[static_cast<std::size_t>(assign[i]) * dim], dim);
        if (d > fd) {
          fd = d;
          farthest = i;
        }
      }
      if (farthest < 0) break;  // all clusters singletons; nothing to steal
      const int old = assign[farthest];
      --counts[old];
      ++counts[c];
      assign[farthest] = c;
      for (int t = 0; t < dim; ++t) {
        const double v = pts[static_cast<std::size_t>(farthest) * dim + t];
        sums[static_cast<std::size_t>(old) * dim + t] -= v;
        sums[static_cast<std::size_t>(c) * dim + t] += v;
      }
    }
    trace.push_back(objective);
    double shift = 0.0;
    for (int c = 0; c < k; ++c) {
      if (counts[c] == 0) continue;
      double cs = 0.0;
      for (int t = 0; t < dim; ++t) {
        const double nv = sums[static_cast<std::size_t>(c) * dim + t] / counts[c];
        const double d = nv - centroids[static_cast<std::size_t>(c) * dim + t];
        cs += d * d;
        centroids[static_cast<std::size_t>(c) * dim + t] = nv;
      }
      shift = std::max(shift, std::sqrt(cs));
    }
    if (shift < 1e-8) break;
  }
  // final assignment against the converged centroids
  for (int i = 0; i < n; ++i) {
    int best = 0;
    double bd = std::numeric_limits<double>::max();
    for (int c = 0; c < k; ++c) {
      const double d = sq_dist(&pts[static_cast<std::size_t>(i) * dim],
                               &centroids[static_cast<std::size_t>(c) * dim], dim);
      if (d < bd) {
        bd = d;
        best = c;
      }
    }
    assign[i] = best;
  }
  // that pass may have emptied a cluster again; steal once more
  std::fill(counts.begin(), counts.end(), 0);
  for (int i = 0; i < n; ++i) ++counts[assign[i]];
  for (int c = 0; c < k; ++c) {
    if (counts[c] > 0) continue;
    int farthest = -1;
    double fd = -1.0;
    for (int i = 0; i < n; ++i) {
      if (counts[assign[i]] <= 1) continue;
      const double d = sq_dist(&pts[static_cast<std::size_t>(i) * dim],
                               &centroids[static_cast<std::size_t>(assign[i]) * dim], dim);
      if (d > fd) {
        fd = d;
        farthest = i;
      }
    }
    if (farthest < 0) break;
    --counts[assign[farthest]];
    assign[farthest] = c;
    ++counts[c];
  }
  objective = 0.0;
  for (int i = 0; i < n; ++i) {
    objective += sq_dist(&pts[static_cast<std::size_t>(i) * dim],
                         &centroids[static_cast<std::size_t>(assign[i]) * dim], dim);
  }
  KMeansResult res;
  res.assignments = std::move(assign);
  res.centroids = std::move(centroids);
  res.objective = objective;
  res.objective_trace = std::move(trace);
  return res;
}

}  // namespace

KMeansResult kmeans(const std::vector<double>& points, int n, int dim, int k,
                    std::uint64_t seed, int restarts) {
  if (k < 1 || k > n) throw ConfigError("kmeans: k must be in [1, n]");
  if (points.size() != static_cast<std::size_t>(n) * dim) {
    throw DataError("kmeans: point buffer size mismatch");
  }
  if (restarts < 1) restarts = 1;
  SeededRng seeder(seed);
  KMeansResult best;
  best.objective = std::numeric_limits<double>::max();
  for (int r = 0; r < restarts; ++r) {
    SeededRng rng(seeder.fork_seed());
    KMeansResult res = kmeans_single(points, n, dim, k, rng);
    if (res.objective < best.objective) best = std::move(res);
  }
  return best;
}

std::vector<int> medoids(const std::vector<int>& assignments, const DistanceMatrix& d) {
  const int n = d.n;
  if (assignments.size() != static_cast<std::size_t>(n)) {
    throw DataError("medoids: assignment length mismatch");
  }
  const int k = assignments.empty() ? 0 : *std::max_element(assignments.begin(), assignments.end()) + 1;
  std::vector<int> result(k, -1);
  std::vector<double> best_sum(k, std::numeric_limits<double>::max());
  for (int i = 0; i < n; ++i) {
    const int c = assignments[i];
    double sum = 0.0;
    for (int j = 0; j < n; ++j) {
      if (assignments[j] == c && j != i) sum += d.at(i, j);
    }
    if (sum < best_sum[c]) {
      best_sum[c] = sum;
      result[c] = i;
    }
  }
  for (int c = 0; c < k; ++c) {
    if (result[c] < 0) throw DataError("medoids: empty cluster " + std::to_string(c));
  }
  return result;
}

ClusterResult spectral_cluster(const DistanceMatrix& d, int k, const AffinityConfig& cfg,
                               std::uint64_t seed, int restarts) {
  if (k < 1 || k > d.n) throw ConfigError("spectral_cluster: k must be in [1, n]");
  const auto w = build_affinity(d, cfg);
  const auto l = laplacian(w, d.n);
  auto u = spectral_embed(l, d.n, k);
  auto km = kmeans(u, d.n, k, k, seed, restarts);
  ClusterResult result;
  result.k = k;
  result.assignments = std::move(km.assignments);
  result.embedding = std::move(u);
  result.kmeans_objective = km.objective;
  result.medoid_indices = medoids(result.assignments, d);
  return result;
}

double purity(const std::vector<int>& assignments, const std::vector<int>& labels) {
  if (assignments.size() != labels.size() || assignments.empty()) {
    throw DataError("purity: assignments and labels must be nonempty and equal length");
  }
  const int k = *std::max_element(assignments.begin(), assignments.end()) + 1;
  const int c = *std::max_element(labels.begin(), labels.end()) + 1;
  std::vector<std::vector<int>> counts(k, std::vector<int>(c, 0));
  for (std::size_t i = 0; i < assignments.size(); ++i) {
    ++counts[assignments[i]][labels[i]];
  }
  long correct = 0;
  for (int i = 0; i < k; ++i) correct += *std::max_element(counts[i].begin(), counts[i].end());
  return static_cast<double>(correct) / static_cast<double>(assignments.size());
}

double silhouette(const DistanceMatrix& d, const std::vector<int>& assignments) {
  const int n = d.n;
  if (assignments.size() != static_cast<std::size_t>(n)) {
    throw DataError("silhouette: assignment length mismatch");
  }
  const int k = *std::max_element(assignments.begin(), assignments.end()) + 1;
  if (k < 2) throw ConfigError("silhouette: needs at least 2 clusters");
  std::vector<int> sizes(k, 0);
  for (int a : assignments) ++sizes[a];
  for (int c = 0; c < k; ++c) {
    if (sizes[c] == 0) throw ConfigError("silhouette: empty cluster " + std::to_string(c));
  }
  double total = 0.0;
  std::vector<double> cluster_sum(k);
  for (int i = 0; i < n; ++i) {
    if (sizes[assignments[i]] == 1) continue;  // singleton scores 0
    std::fill(cluster_sum.begin(), cluster_sum.end(), 0.0);
    for (int j = 0; j < n; ++j) {
      if (j != i) cluster_sum[assignments[j]] += d.at(i, j);
    }
    const int own = assignments[i];
    const double a = cluster_sum[own] / (sizes[own] - 1);
    double b = std::numeric_limits<double>::max();
    for (int c = 0; c < k; ++c) {
      if (c != own) b = std::min(b, cluster_sum[c] / sizes[c]);
    }
    const double m = std::max(a, b);
    if (m > 0.0) total += (b - a) / m;
  }
  return total / static_cast<double>(n);
}

void write_cluster_result(const ClusterResult& r, const std::string& config_echo,
                          const std::filesystem::path& path) {
  nlohmann::ordered_json j;
  j["schema_version"] = 1;
  j["tool_version"] = kToolVersion;
  j["k"] = r.k;
  j["kmeans_objective"] = r.kmeans_objective;
  j["assignments"] = r.assignments;
  j["medoid_indices"] = r.medoid_indices;
  if (!config_echo.empty()) j["config"] = nlohmann::ordered_json::parse(config_echo);
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  out << j.dump(2) << '\n';
}

ClusterResult read_cluster_result(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::parse_error& e) {
    throw DataError("cluster result parse error: " + std::string(e.what()));
  }
  ClusterResult r;
  r.k = j.at("k").get<int>();
  r.kmeans_objective = j.at("kmeans_objective").get<double>();
  r.assignments = j.at("assignments").get<std::vector<int>>();
  r.medoid_indices = j.at("medoid_indices").get<std::vector<int>>();
  return r;
}

}  // namespace seal
