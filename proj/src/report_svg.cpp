#include "seal/report_svg.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>

#include "seal/errors.hpp"
#include "seal/version.hpp"

namespace seal {

namespace {

constexpr int kWidth = 960;
constexpr int kHeight = 540;
constexpr int kMarginLeft = 64;
constexpr int kMarginRight = 168;  // legend gutter
constexpr int kMarginTop = 32;
constexpr int kMarginBottom = 48;

const char* kPalette[] = {"#d62728", "#1f77b4", "#2ca02c", "#9467bd", "#ff7f0e",
                          "#8c564b", "#e377c2", "#17becf", "#bcbd22", "#7f7f7f"};

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

std::string xml_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

}  // namespace

void write_report_svg(const std::vector<SealReport>& reports, const LineSet& lines,
                      const std::filesystem::path& path) {
  if (reports.empty()) throw DataError("report: no models to plot");
  const DifficultyOrder diff = difficulty_order(lines);
  const int k = lines.case_count();

  // series values in difficulty order
  std::vector<std::pair<std::string, std::vector<double>>> series;
  for (const auto& r : reports) {
    std::map<std::string, double> by_case;
    for (std::size_t i = 0; i < r.case_ids.size(); ++i) by_case[r.case_ids[i]] = r.qd[i];
    std::vector<double> vals;
    for (int idx : diff.order) {
      auto it = by_case.find(lines.case_ids[idx]);
      if (it == by_case.end()) {
        throw DataError("report: model " + r.model_id + " lacks case " + lines.case_ids[idx]);
      }
      vals.push_back(it->second);
    }
    series.emplace_back(r.model_id, std::move(vals));
  }
  {
    std::vector<double> acc, exc;
    for (int idx : diff.order) {
      acc.push_back(lines.acceptance[idx]);
      exc.push_back(lines.excellence[idx]);
    }
    series.emplace_back("acceptance", std::move(acc));
    series.emplace_back("excellence", std::move(exc));
  }

  double lo = series[0].second[0], hi = lo;
  for (const auto& [name, vals] : series) {
    for (double v : vals) {
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
  }
  if (hi == lo) hi = lo + 1.0;
  const double pad = 0.05 * (hi - lo);
  lo -= pad;
  hi += pad;

  const double plot_w = kWidth - kMarginLeft - kMarginRight;
  const double plot_h = kHeight - kMarginTop - kMarginBottom;
  auto map_x = [&](int i) {
    return kMarginLeft + (k == 1 ? 0.5 : static_cast<double>(i) / (k - 1)) * plot_w;
  };
  auto map_y = [&](double v) { return kMarginTop + (hi - v) / (hi - lo) * plot_h; };

  std::ofstream out(path, std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  out << "<!-- seal-version: " << kToolVersion << " -->\n";
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\""
      << kHeight << "\" viewBox=\"0 0 " << kWidth << " " << kHeight << "\">\n";
  out << "  <rect width=\"" << kWidth << "\" height=\"" << kHeight << "\" fill=\"white\"/>\n";

  // axes
  out << "  <line x1=\"" << kMarginLeft << "\" y1=\"" << kMarginTop + plot_h << "\" x2=\""
      << kMarginLeft + plot_w << "\" y2=\"" << kMarginTop + plot_h
      << "\" stroke=\"#333\" stroke-width=\"1\"/>\n";
  out << "  <line x1=\"" << kMarginLeft << "\" y1=\"" << kMarginTop << "\" x2=\"" << kMarginLeft
      << "\" y2=\"" << kMarginTop + plot_h << "\" stroke=\"#333\" stroke-width=\"1\"/>\n";
  for (int t = 0; t <= 4; ++t) {
    const double v = lo + (hi - lo) * t / 4.0;
    const double y = map_y(v);
    out << "  <line x1=\"" << kMarginLeft - 4 << "\" y1=\"" << fmt(y) << "\" x2=\"" << kMarginLeft
        << "\" y2=\"" << fmt(y) << "\" stroke=\"#333\"/>\n";
    out << "  <text x=\"" << kMarginLeft - 8 << "\" y=\"" << fmt(y + 4)
        << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">" << fmt(v)
        << "</text>\n";
  }
  out << "  <text x=\"" << kMarginLeft + plot_w / 2 << "\" y=\"" << kHeight - 12
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">"
      << "cases (hardest first)</text>\n";
  out << "  <text x=\"16\" y=\"" << kMarginTop + plot_h / 2
      << "\" transform=\"rotate(-90 16 " << kMarginTop + plot_h / 2
      << ")\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">"
      << xml_escape(lines.metric_id) << "</text>\n";

  for (std::size_t s = 0; s < series.size(); ++s) {
    const bool is_line = s >= series.size() - 2;
    const char* color = is_line ? (s == series.size() - 2 ? "#444444" : "#999999")
                                : kPalette[s % 10];
    const char* dash = is_line ? " stroke-dasharray=\"6,4\"" : "";
    out << "  <polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\"" << dash
        << " points=\"";
    const auto& vals = series[s].second;
    for (int i = 0; i < k; ++i) {
      if (i) out << ' ';
      out << fmt(map_x(i)) << ',' << fmt(map_y(vals[i]));
    }
    out << "\"/>\n";
    const double ly = kMarginTop + 16.0 * (static_cast<double>(s) + 1);
    out << "  <line x1=\"" << kMarginLeft + plot_w + 12 << "\" y1=\"" << fmt(ly - 4) << "\" x2=\""
        << kMarginLeft + plot_w + 32 << "\" y2=\"" << fmt(ly - 4) << "\" stroke=\"" << color
        << "\" stroke-width=\"2\"" << dash << "/>\n";
    out << "  <text x=\"" << kMarginLeft + plot_w + 38 << "\" y=\"" << fmt(ly)
        << "\" font-family=\"sans-serif\" font-size=\"11\">" << xml_escape(series[s].first)
        << "</text>\n";
  }
  out << "</svg>\n";
  if (!out) throw IoError("write failed for " + path.string());
}

}  // namespace seal
