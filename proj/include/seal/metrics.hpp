#pragma once

#include <array>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "seal/iqa.hpp"

namespace seal {

// Per-case acceptance and excellence score levels. The excellence score must
// be strictly better than the acceptance score on every case.
struct LineSet {
  std::vector<std::string> case_ids;
  std::vector<double> acceptance;
  std::vector<double> excellence;
  std::string metric_id;
  Orientation orientation = Orientation::higher_better;
  std::string provenance;  // "ingested-table" or "builtin-upscaler(<name>)"

  int case_count() const { return static_cast<int>(case_ids.size()); }
};

LineSet make_line_set(std::vector<std::string> case_ids, std::vector<double> acceptance,
                      std::vector<double> excellence, const std::string& metric_id,
                      Orientation orientation, const std::string& provenance);

// CSV `case_id,acceptance,excellence` plus a JSON sidecar (same stem, .json)
// carrying metric, orientation, and provenance.
void write_line_set(const LineSet& lines, const std::filesystem::path& csv_path);
LineSet read_line_set(const std::filesystem::path& csv_path);

struct DistributedPerformance {
  std::vector<std::string> case_ids;
  std::vector<double> qd;            // per-case mean over images
  double qd_ave = 0.0;               // unweighted mean over cases
  std::vector<std::string> warnings; // non-finite rows excluded from means
};

// Per-case mean of the per-image scores; a case with no finite row is an
// error, non-finite rows are excluded with a warning.
DistributedPerformance distributed_performance(const ScoreTable& table);

bool better(double a, double b, Orientation orientation);

// Fraction of cases strictly better than the acceptance line (ties are not
// acceptable).
double acceptance_rate(const std::vector<double>& qd, const LineSet& lines);

// Logistic sigmoid of the position between the two lines.
double rpr(double qd, double q_acceptance, double q_excellence, Orientation orientation);

// Q75 - Q25 with linear-interpolation percentiles.
double rpr_iqr(const std::vector<double>& rprs);

struct RprPartition {
  std::optional<double> rpr_acceptable;    // mean over {rpr >= 0.5}; absent when empty
  std::optional<double> rpr_unacceptable;  // mean over {rpr <  0.5}; absent when empty
  std::vector<std::string> acceptable_ids; // the {rpr >= 0.5} case ids
};

RprPartition rpr_partition_means(const std::vector<double>& rprs,
                                 const std::vector<std::string>& case_ids);

struct SealReport {
  std::string model_id;
  std::string metric_id;
  Orientation orientation = Orientation::higher_better;
  std::vector<std::string> case_ids;
  std::vector<double> qd;
  double qd_ave = 0.0;
  std::vector<double> rprs;
  double ar = 0.0;
  double rpr_i = 0.0;
  std::optional<double> rpr_a;
  std::optional<double> rpr_u;
  // Cases strictly better than the acceptance line (the AR set, so
  // |acceptable_case_ids| = round(AR * K)). Note the seam: a case with
  // rpr exactly 0.5 is not acceptable here yet still enters rpr_a.
  std::vector<std::string> acceptable_case_ids;
  std::vector<std::string> warnings;
};

// Assembles the full metric bundle for one model against one line set.
SealReport evaluate(const ScoreTable& table, const LineSet& lines);

void write_seal_report(const SealReport& report, const std::filesystem::path& path,
                       const std::string& config_echo = "");
SealReport read_seal_report(const std::filesystem::path& path);

// ------------------------------------------------------------- ranking -----

struct RankingConfig {
  double ar_cutoff = 0.25;                             // AR below this is excluded
  std::array<double, 4> thresholds{0.02, 0.02, 0.05, 0.05};  // AR, RPR_I, RPR_A, RPR_U
  // A difference exactly equal to the threshold decides the comparison
  // (inclusive). Exclusive semantics is available but does not reproduce the
  // published rankings.
  bool inclusive = true;
};

struct RankDecision {
  std::string first;      // model ranked better
  std::string second;
  std::string decided_by; // "AR", "RPR_I", "RPR_A", "RPR_U", or "full tie"
  double difference = 0.0;
};

struct RankingOutcome {
  struct Entry {
    std::string model_id;
    int rank = 0;        // 1..m over non-excluded models; 0 when excluded
    bool excluded = false;
    double ar = 0.0;
    double rpr_i = 0.0;
    std::optional<double> rpr_a;
    std::optional<double> rpr_u;
  };
  std::vector<Entry> entries;           // ranked models first, then excluded
  std::vector<RankDecision> decisions;  // one record per adjacent ranked pair
  bool intransitive_found = false;
};

// Coarse-to-fine protocol: exclude AR < cutoff, then order by walking the
// metrics (AR up, RPR_I down, RPR_A up, RPR_U up); the first metric whose
// difference reaches its threshold decides. Full ties break by AR, then
// model id. Realized by a stable insertion sort; a diagnostic flags any
// intransitive triple among the ranked models.
RankingOutcome rank_models(const std::vector<SealReport>& reports,
                           const RankingConfig& config = {});

void write_ranking(const RankingOutcome& outcome, const std::filesystem::path& path,
                   const RankingConfig& config = {});
std::string format_ranking_table(const RankingOutcome& outcome);

// ---------------------------------------------------------- difficulty -----

struct DifficultyOrder {
  std::vector<int> order;               // case indices, hardest first
  std::vector<std::vector<int>> groups; // 5 contiguous groups of the order
};

// Cases sorted by acceptance-line score, hardest first, then split into five
// contiguous groups (remainder spread over the earliest groups).
DifficultyOrder difficulty_order(const LineSet& lines);

}  // namespace seal
