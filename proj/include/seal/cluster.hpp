#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "seal/features.hpp"

namespace seal {

// Conversion of the distance matrix into graph affinities. The default is a
// full gaussian kernel with sigma set to the median off-diagonal distance.
struct AffinityConfig {
  enum class Kernel { gaussian, knn };
  enum class SigmaMode { median, mean, fixed };

  Kernel kernel = Kernel::gaussian;
  SigmaMode sigma_mode = SigmaMode::median;
  double fixed_sigma = 1.0;
  int knn_k = 10;
  bool knn_mutual = false;
};

struct ClusterResult {
  int k = 0;
  std::vector<int> assignments;      // per item, in [0, k)
  std::vector<double> embedding;     // n x k row-major
  std::vector<int> medoid_indices;   // medoid_indices[i] belongs to cluster i
  double kmeans_objective = 0.0;
};

struct KMeansResult {
  std::vector<int> assignments;
  std::vector<double> centroids;  // k x dim row-major
  double objective = 0.0;
  std::vector<double> objective_trace;  // per Lloyd iteration, of the winning restart
};

// w_ij = exp(-d_ij^2 / (2 sigma^2)) for the gaussian kernel; the knn variant
// places unit edges to the k nearest neighbours, symmetrized by max (or min
// when mutual). Diagonal is zero.
std::vector<double> build_affinity(const DistanceMatrix& d, const AffinityConfig& cfg);

// L = D - W with D the diagonal of row sums (unnormalized Laplacian).
std::vector<double> laplacian(const std::vector<double>& w, int n);

// Orthonormal eigenvectors of the k smallest eigenvalues, ascending;
// row i is the embedded point y_i.
std::vector<double> spectral_embed(const std::vector<double>& l, int n, int k);

// k-means++ initialization, Lloyd iterations to centroid shift < 1e-8 or 300
// iterations, best of `restarts` by objective. Empty clusters are repaired by
// stealing the point farthest from its centroid.
KMeansResult kmeans(const std::vector<double>& points, int n, int dim, int k,
                    std::uint64_t seed, int restarts = 10);

// Algorithm composition: affinity -> laplacian -> embedding -> k-means, with
// medoids computed in the original metric space.
ClusterResult spectral_cluster(const DistanceMatrix& d, int k, const AffinityConfig& cfg,
                               std::uint64_t seed, int restarts = 10);

// Per cluster, the member minimizing the summed distance to its co-members;
// ties break to the lowest index.
std::vector<int> medoids(const std::vector<int>& assignments, const DistanceMatrix& d);

// (1/N) sum over clusters of the majority class count.
double purity(const std::vector<int>& assignments, const std::vector<int>& labels);

// Mean over items of (b-a)/max(a,b); singleton items score 0.
double silhouette(const DistanceMatrix& d, const std::vector<int>& assignments);

// Cluster result round trip (JSON).
void write_cluster_result(const ClusterResult& r, const std::string& config_echo,
                          const std::filesystem::path& path);
ClusterResult read_cluster_result(const std::filesystem::path& path);

}  // namespace seal
