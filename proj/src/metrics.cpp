#include "seal/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <numeric>
#include <sstream>

#include <nlohmann/json.hpp>

#include "seal/errors.hpp"
#include "seal/version.hpp"

namespace seal {

namespace {

using ordered_json = nlohmann::ordered_json;

// Decimal inputs like 0.43 - 0.41 land a hair under 0.02 in binary; the
// comparisons absorb that representation error.
constexpr double kEps = 1e-9;

double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

}  // namespace

bool better(double a, double b, Orientation orientation) {
  return orientation == Orientation::higher_better ? a > b : a < b;
}

LineSet make_line_set(std::vector<std::string> case_ids, std::vector<double> acceptance,
                      std::vector<double> excellence, const std::string& metric_id,
                      Orientation orientation, const std::string& provenance) {
  if (case_ids.size() != acceptance.size() || case_ids.size() != excellence.size() ||
      case_ids.empty()) {
    throw DataError("line set: case/score length mismatch");
  }
  for (std::size_t i = 0; i < case_ids.size(); ++i) {
    if (!better(excellence[i], acceptance[i], orientation)) {
      throw DataError("line set: excellence not strictly better than acceptance on case " +
                      case_ids[i]);
    }
  }
  LineSet lines;
  lines.case_ids = std::move(case_ids);
  lines.acceptance = std::move(acceptance);
  lines.excellence = std::move(excellence);
  lines.metric_id = metric_id;
  lines.orientation = orientation;
  lines.provenance = provenance;
  return lines;
}

void write_line_set(const LineSet& lines, const std::filesystem::path& csv_path) {
  std::ofstream out(csv_path, std::ios::trunc);
  if (!out) throw IoError("cannot write " + csv_path.string());
  out << "# seal-version: " << kToolVersion << "\n";
  out << "case_id,acceptance,excellence\n";
  out.precision(17);
  for (int i = 0; i < lines.case_count(); ++i) {
    out << lines.case_ids[i] << ',' << lines.acceptance[i] << ',' << lines.excellence[i] << '\n';
  }
  ordered_json j;
  j["schema_version"] = 1;
  j["tool_version"] = kToolVersion;
  j["metric_id"] = lines.metric_id;
  j["orientation"] = orientation_name(lines.orientation);
  j["provenance"] = lines.provenance;
  std::filesystem::path sidecar = csv_path;
  sidecar.replace_extension(".json");
  std::ofstream sj(sidecar, std::ios::trunc);
  if (!sj) throw IoError("cannot write " + sidecar.string());
  sj << j.dump(2) << '\n';
}

LineSet read_line_set(const std::filesystem::path& csv_path) {
  std::filesystem::path sidecar = csv_path;
  sidecar.replace_extension(".json");
  std::ifstream sj(sidecar);
  if (!sj) throw IoError("cannot open line sidecar " + sidecar.string());
  nlohmann::json meta;
  try {
    sj >> meta;
  } catch (const nlohmann::json::parse_error& e) {
    throw DataError(sidecar.string() + ": " + e.what());
  }

  std::ifstream in(csv_path);
  if (!in) throw IoError("cannot open " + csv_path.string());
  std::vector<std::string> ids;
  std::vector<double> acc, exc;
  std::string line;
  int line_no = 0;
  bool header_done = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    if (!header_done) {
      if (line != "case_id,acceptance,excellence") {
        throw DataError(csv_path.string() + ":" + std::to_string(line_no) + ": bad header");
      }
      header_done = true;
      continue;
    }
    std::stringstream ss(line);
    std::string id, a, e;
    if (!std::getline(ss, id, ',') || !std::getline(ss, a, ',') || !std::getline(ss, e)) {
      throw DataError(csv_path.string() + ":" + std::to_string(line_no) + ": malformed row");
    }
    try {
      acc.push_back(std::stod(a));
      exc.push_back(std::stod(e));
    } catch (const std::exception&) {
      throw DataError(csv_path.string() + ":" + std::to_string(line_no) + ": bad number");
    }
    ids.push_back(id);
  }
  return make_line_set(std::move(ids), std::move(acc), std::move(exc),
                       meta.at("metric_id").get<std::string>(),
                       orientation_from_name(meta.at("orientation").get<std::string>()),
                       meta.at("provenance").get<std::string>());
}

DistributedPerformance distributed_performance(const ScoreTable& table) {
  if (table.rows.empty()) throw DataError("distributed_performance: empty score table");
  std::map<std::string, std::pair<double, int>> acc;  // case -> (sum, count of finite)
  std::map<std::string, int> total;
  DistributedPerformance out;
  for (const auto& row : table.rows) {
    ++total[row.case_id];
    if (std::isfinite(row.value)) {
      auto& a = acc[row.case_id];
      a.first += row.value;
      a.second += 1;
    } else {
      acc.try_emplace(row.case_id, 0.0, 0);
      out.warnings.push_back("non-finite score excluded: (" + row.case_id + ", " + row.image_id +
                             ")");
    }
  }
  double sum = 0.0;
  for (const auto& [case_id, a] : acc) {
    if (a.second == 0) {
      throw DataError("distributed_performance: case " + case_id + " has no finite score");
    }
    out.case_ids.push_back(case_id);
    out.qd.push_back(a.first / a.second);
    sum += out.qd.back();
  }
  out.qd_ave = sum / static_cast<double>(out.qd.size());
  return out;
}

namespace {

void require_case_match(const std::vector<std::string>& a, const std::vector<std::string>& b) {
  if (a != b) throw DataError("case id sets do not match");
}

}  // namespace

double acceptance_rate(const std::vector<double>& qd, const LineSet& lines) {
  if (qd.size() != lines.acceptance.size()) throw DataError("acceptance_rate: case count mismatch");
  int count = 0;
  for (std::size_t i = 0; i < qd.size(); ++i) {
    if (better(qd[i], lines.acceptance[i], lines.orientation)) ++count;
  }
  return static_cast<double>(count) / static_cast<double>(qd.size());
}

double rpr(double qd, double q_acceptance, double q_excellence, Orientation orientation) {
  if (!better(q_excellence, q_acceptance, orientation)) {
    throw DataError("rpr: degenerate line (excellence not better than acceptance)");
  }
  const double t = orientation == Orientation::higher_better
                       ? (qd - q_acceptance) / (q_excellence - q_acceptance)
                       : (q_acceptance - qd) / (q_acceptance - q_excellence);
  return sigmoid(t);
}

double rpr_iqr(const std::vector<double>& rprs) {
  if (rprs.empty()) throw DataError("rpr_iqr: empty input");
  std::vector<double> sorted = rprs;
  std::sort(sorted.begin(), sorted.end());
  auto percentile = [&](double p) {
    const double h = (static_cast<double>(sorted.size()) - 1.0) * p;
    const std::size_t lo = static_cast<std::size_t>(std::floor(h));
    const std::size_t hi = static_cast<std::size_t>(std::ceil(h));
    return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
  };
  return percentile(0.75) - percentile(0.25);
}

RprPartition rpr_partition_means(const std::vector<double>& rprs,
                                 const std::vector<std::string>& case_ids) {
  if (rprs.size() != case_ids.size()) throw DataError("rpr partition: length mismatch");
  RprPartition part;
  double acc_sum = 0.0, un_sum = 0.0;
  int acc_n = 0, un_n = 0;
  for (std::size_t i = 0; i < rprs.size(); ++i) {
    if (rprs[i] >= 0.5) {
      acc_sum += rprs[i];
      ++acc_n;
      part.acceptable_ids.push_back(case_ids[i]);
    } else {
      un_sum += rprs[i];
      ++un_n;
    }
  }
  if (acc_n > 0) part.rpr_acceptable = acc_sum / acc_n;
  if (un_n > 0) part.rpr_unacceptable = un_sum / un_n;
  return part;
}

SealReport evaluate(const ScoreTable& table, const LineSet& lines) {
  if (table.metric_id != lines.metric_id) {
    throw DataError("evaluate: table metric '" + table.metric_id + "' vs line metric '" +
                    lines.metric_id + "'");
  }
  if (table.orientation != lines.orientation) {
    throw DataError("evaluate: orientation mismatch between table and lines");
  }
  DistributedPerformance dist = distributed_performance(table);

  // align lines to the (sorted) distributed cases
  std::vector<std::string> sorted_line_ids = lines.case_ids;
  std::sort(sorted_line_ids.begin(), sorted_line_ids.end());
  require_case_match(dist.case_ids, sorted_line_ids);
  std::map<std::string, std::size_t> line_index;
  for (std::size_t i = 0; i < lines.case_ids.size(); ++i) line_index[lines.case_ids[i]] = i;

  SealReport report;
  report.model_id = table.model_id;
  report.metric_id = table.metric_id;
  report.orientation = table.orientation;
  report.case_ids = dist.case_ids;
  report.qd = dist.qd;
  report.qd_ave = dist.qd_ave;
  report.warnings = dist.warnings;

  int acceptable = 0;
  for (std::size_t i = 0; i < report.case_ids.size(); ++i) {
    const std::size_t li = line_index.at(report.case_ids[i]);
    report.rprs.push_back(
        rpr(report.qd[i], lines.acceptance[li], lines.excellence[li], lines.orientation));
    if (better(report.qd[i], lines.acceptance[li], lines.orientation)) {
      ++acceptable;
      report.acceptable_case_ids.push_back(report.case_ids[i]);
    }
  }
  report.ar = static_cast<double>(acceptable) / static_cast<double>(report.case_ids.size());
  report.rpr_i = rpr_iqr(report.rprs);
  const RprPartition part = rpr_partition_means(report.rprs, report.case_ids);
  report.rpr_a = part.rpr_acceptable;
  report.rpr_u = part.rpr_unacceptable;
  return report;
}

void write_seal_report(const SealReport& report, const std::filesystem::path& path,
                       const std::string& config_echo) {
  ordered_json j;
  j["schema_version"] = 1;
  j["tool_version"] = kToolVersion;
  j["model_id"] = report.model_id;
  j["metric_id"] = report.metric_id;
  j["orientation"] = orientation_name(report.orientation);
  j["qd_ave"] = report.qd_ave;
  j["ar"] = report.ar;
  j["rpr_i"] = report.rpr_i;
  j["rpr_a"] = report.rpr_a ? ordered_json(*report.rpr_a) : ordered_json(nullptr);
  j["rpr_u"] = report.rpr_u ? ordered_json(*report.rpr_u) : ordered_json(nullptr);
  j["case_ids"] = report.case_ids;
  j["qd"] = report.qd;
  j["rpr"] = report.rprs;
  j["acceptable_case_ids"] = report.acceptable_case_ids;
  j["warnings"] = report.warnings;
  if (!config_echo.empty()) j["config"] = ordered_json::parse(config_echo);
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  out << j.dump(2) << '\n';
}

SealReport read_seal_report(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::parse_error& e) {
    throw DataError(path.string() + ": " + e.what());
  }
  SealReport r;
  r.model_id = j.at("model_id").get<std::string>();
  r.metric_id = j.at("metric_id").get<std::string>();
  r.orientation = orientation_from_name(j.at("orientation").get<std::string>());
  r.qd_ave = j.at("qd_ave").get<double>();
  r.ar = j.at("ar").get<double>();
  r.rpr_i = j.at("rpr_i").get<double>();
  if (!j.at("rpr_a").is_null()) r.rpr_a = j.at("rpr_a").get<double>();
  if (!j.at("rpr_u").is_null()) r.rpr_u = j.at("rpr_u").get<double>();
  r.case_ids = j.at("case_ids").get<std::vector<std::string>>();
  r.qd = j.at("qd").get<std::vector<double>>();
  r.rprs = j.at("rpr").get<std::vector<double>>();
  r.acceptable_case_ids = j.at("acceptable_case_ids").get<std::vector<std::string>>();
  if (j.contains("warnings")) r.warnings = j.at("warnings").get<std::vector<std::string>>();
  return r;
}

// ------------------------------------------------------------- ranking -----

namespace {

struct MetricSpec {
  const char* name;
  bool higher_better;
};

constexpr MetricSpec kRankMetrics[4] = {
    {"AR", true}, {"RPR_I", false}, {"RPR_A", true}, {"RPR_U", true}};

double metric_value(const SealReport& r, int idx) {
  switch (idx) {
    case 0: return r.ar;
    case 1: return r.rpr_i;
    case 2: return r.rpr_a.value_or(std::nan(""));
    default: return r.rpr_u.value_or(std::nan(""));
  }
}

// Walks the metric cascade; fills the decision record. Returns true when `a`
// ranks better than `b`.
bool compare_reports(const SealReport& a, const SealReport& b, const RankingConfig& cfg,
                     RankDecision* decision) {
  for (int m = 0; m < 4; ++m) {
    const double va = metric_value(a, m);
    const double vb = metric_value(b, m);
    if (std::isnan(va) || std::isnan(vb)) continue;  // absent partition mean cannot decide
    const double diff = va - vb;
    const bool decides = cfg.inclusive ? std::fabs(diff) >= cfg.thresholds[m] - kEps
                                       : std::fabs(diff) > cfg.thresholds[m] + kEps;
    if (decides) {
      const bool a_better = kRankMetrics[m].higher_better ? diff > 0 : diff < 0;
      if (decision) {
        decision->decided_by = kRankMetrics[m].name;
        decision->difference = diff;
        decision->first = a_better ? a.model_id : b.model_id;
        decision->second = a_better ? b.model_id : a.model_id;
      }
      return a_better;
    }
  }
  // full tie: AR, then model id
  if (decision) {
    decision->decided_by = "full tie";
    decision->difference = a.ar - b.ar;
  }
  bool a_better;
  if (a.ar != b.ar) {
    a_better = a.ar > b.ar;
  } else {
    a_better = a.model_id < b.model_id;
  }
  if (decision) {
    decision->first = a_better ? a.model_id : b.model_id;
    decision->second = a_better ? b.model_id : a.model_id;
  }
  return a_better;
}

}  // namespace

RankingOutcome rank_models(const std::vector<SealReport>& reports, const RankingConfig& config) {
  if (reports.empty()) throw DataError("rank_models: no reports");
  for (const auto& r : reports) {
    if (r.metric_id != reports[0].metric_id || r.orientation != reports[0].orientation) {
      throw DataError("rank_models: reports mix metrics or orientations");
    }
  }

  std::vector<const SealReport*> ranked;
  std::vector<const SealReport*> excluded;
  for (const auto& r : reports) {
    (r.ar < config.ar_cutoff ? excluded : ranked).push_back(&r);
  }
  // Canonical starting order makes the outcome invariant to input order even
  // when the cascade comparator happens to be intransitive.
  auto by_id = [](const SealReport* a, const SealReport* b) { return a->model_id < b->model_id; };
  std::sort(ranked.begin(), ranked.end(), by_id);
  std::sort(excluded.begin(), excluded.end(), by_id);

  // Insertion sort: stable, and safe even if the threshold comparator turns
  // out intransitive on some input.
  for (std::size_t i = 1; i < ranked.size(); ++i) {
    const SealReport* current = ranked[i];
    std::size_t j = i;
    while (j > 0 && compare_reports(*current, *ranked[j - 1], config, nullptr)) {
      ranked[j] = ranked[j - 1];
      --j;
    }
    ranked[j] = current;
  }

  RankingOutcome outcome;
  for (std::size_t i = 0; i < ranked.size(); ++i) {
    const auto& r = *ranked[i];
    outcome.entries.push_back(
        {r.model_id, static_cast<int>(i) + 1, false, r.ar, r.rpr_i, r.rpr_a, r.rpr_u});
    if (i + 1 < ranked.size()) {
      RankDecision d;
      compare_reports(*ranked[i], *ranked[i + 1], config, &d);
      outcome.decisions.push_back(std::move(d));
    }
  }
  for (const auto* r : excluded) {
    outcome.entries.push_back({r->model_id, 0, true, r->ar, r->rpr_i, r->rpr_a, r->rpr_u});
  }

  for (std::size_t x = 0; x < ranked.size() && !outcome.intransitive_found; ++x) {
    for (std::size_t y = 0; y < ranked.size() && !outcome.intransitive_found; ++y) {
      for (std::size_t z = 0; z < ranked.size(); ++z) {
        if (x == y || y == z || x == z) continue;
        if (compare_reports(*ranked[x], *ranked[y], config, nullptr) &&
            compare_reports(*ranked[y], *ranked[z], config, nullptr) &&
            !compare_reports(*ranked[x], *ranked[z], config, nullptr)) {
          outcome.intransitive_found = true;
          break;
        }
      }
    }
  }
  return outcome;
}

void write_ranking(const RankingOutcome& outcome, const std::filesystem::path& path,
                   const RankingConfig& config) {
  ordered_json j;
  j["schema_version"] = 1;
  j["tool_version"] = kToolVersion;
  j["config"] = {{"ar_cutoff", config.ar_cutoff},
                 {"thresholds", config.thresholds},
                 {"inclusive", config.inclusive}};
  j["intransitive_found"] = outcome.intransitive_found;
  j["entries"] = ordered_json::array();
  for (const auto& e : outcome.entries) {
    ordered_json ej;
    ej["model_id"] = e.model_id;
    ej["rank"] = e.excluded ? ordered_json(nullptr) : ordered_json(e.rank);
    ej["excluded"] = e.excluded;
    ej["ar"] = e.ar;
    ej["rpr_i"] = e.rpr_i;
    ej["rpr_a"] = e.rpr_a ? ordered_json(*e.rpr_a) : ordered_json(nullptr);
    ej["rpr_u"] = e.rpr_u ? ordered_json(*e.rpr_u) : ordered_json(nullptr);
    j["entries"].push_back(std::move(ej));
  }
  j["decisions"] = ordered_json::array();
  for (const auto& d : outcome.decisions) {
    j["decisions"].push_back({{"first", d.first},
                              {"second", d.second},
                              {"decided_by", d.decided_by},
                              {"difference", d.difference}});
  }
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  out << j.dump(2) << '\n';
}

std::string format_ranking_table(const RankingOutcome& outcome) {
  std::ostringstream os;
  os << "model            AR     RPR_I  RPR_A  RPR_U  rank\n";
  auto fmt = [](std::optional<double> v) {
    if (!v) return std::string("  -  ");
    char buf[16];
    std::snprintf(buf, sizeof(buf), "%5.2f", *v);
    return std::string(buf);
  };
  for (const auto& e : outcome.entries) {
    char head[64];
    std::snprintf(head, sizeof(head), "%-16s %5.2f  %5.2f  ", e.model_id.c_str(), e.ar, e.rpr_i);
    os << head << fmt(e.rpr_a) << "  " << fmt(e.rpr_u) << "  ";
    if (e.excluded) {
      os << "x";
    } else {
      os << e.rank;
    }
    os << '\n';
  }
  return os.str();
}

DifficultyOrder difficulty_order(const LineSet& lines) {
  const int k = lines.case_count();
  if (k < 5) throw ConfigError("difficulty_order: need at least 5 cases");
  DifficultyOrder out;
  out.order.resize(k);
  std::iota(out.order.begin(), out.order.end(), 0);
  // hardest first: worst acceptance score leads
  std::stable_sort(out.order.begin(), out.order.end(), [&](int a, int b) {
    return lines.orientation == Orientation::higher_better
               ? lines.acceptance[a] < lines.acceptance[b]
               : lines.acceptance[a] > lines.acceptance[b];
  });
  const int base = k / 5;
  const int rem = k % 5;
  int pos = 0;
  for (int g = 0; g < 5; ++g) {
    const int size = base + (g < rem ? 1 : 0);
    out.groups.emplace_back(out.order.begin() + pos, out.order.begin() + pos + size);
    pos += size;
  }
  return out;
}

}  // namespace seal
