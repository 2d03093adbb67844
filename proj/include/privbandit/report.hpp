//
// Copyright 2026 The privbandit Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//

// Output formats: per-run CSV, summary JSON, regret tables and a log-log SVG.

#ifndef PRIVBANDIT_REPORT_HPP_
#define PRIVBANDIT_REPORT_HPP_

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <functional>
#include <iomanip>
#include <map>
#include <optional>
#include <ostream>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "privbandit/config.hpp"
#include "privbandit/errors.hpp"
#include "privbandit/experiment.hpp"
#include "privbandit/harness.hpp"
#include "privbandit/policy.hpp"

namespace privbandit {

// Shortest form that is still exact: 17 significant digits, "inf" for
// infinity.
inline std::string format_double(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (std::isnan(v)) return "nan";
  std::array<char, 64> buf{};
  const auto res =
      std::to_chars(buf.data(), buf.data() + buf.size(), v, std::chars_format::general, 17);
  return std::string(buf.data(), res.ptr);
}

inline constexpr std::string_view kCsvHeader =
    "policy,env,eps,T,J,rep,seed,regret,pct_regret,oracle_revenue,shrinks_total";

inline std::string csv_row(const RunRecord& r) {
  std::string s;
  s += r.policy;
  s += ',';
  s += r.env;
  s += ',';
  s += format_double(r.eps);
  s += ',' + std::to_string(r.T);
  s += ',' + std::to_string(r.J);
  s += ',' + std::to_string(r.rep);
  s += ',' + std::to_string(r.seed);
  s += ',' + format_double(r.cumulative_regret);
  s += ',' + format_double(percentage_regret(r));
  s += ',' + format_double(r.oracle_revenue);
  s += ',' + std::to_string(r.shrinks_total());
  return s;
}

inline void write_csv(std::ostream& out, std::span<const RunRecord> runs) {
  out << kCsvHeader << '\n';
  for (const auto& r : runs) out << csv_row(r) << '\n';
}

inline nlohmann::json epsilon_json(double eps) {
  return std::isfinite(eps) ? nlohmann::json(eps) : nlohmann::json("inf");
}

inline nlohmann::json optional_json(const std::optional<double>& v) {
  return v ? nlohmann::json(*v) : nlohmann::json(nullptr);
}

inline nlohmann::json summary_json(const ExperimentConfig& config, std::uint64_t seed,
                                   std::span<const CellResult> cells) {
  nlohmann::json doc;
  doc["seed"] = seed;
  doc["reps"] = config.reps;
  doc["policy"] = std::string(to_string(config.policy.kind));
  doc["env"] = config.env.kind == EnvKind::kLinear ? "linear" : "adversarial";
  doc["sensitivity"] = std::string(to_string(config.policy.sensitivity));
  if (!config.preset.empty()) doc["preset"] = config.preset;
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& c : cells) {
    const AggregateResult& a = c.result.aggregate;
    arr.push_back({{"policy", a.policy},
                   {"eps", epsilon_json(c.eps)},
                   {"T", c.T},
                   {"J", c.result.runs.front().J},
                   {"reps", a.reps},
                   {"mean_regret", a.mean_regret},
                   {"stderr_regret", optional_json(a.stderr_regret)},
                   {"mean_pct_regret", a.mean_pct_regret},
                   {"stderr_pct_regret", optional_json(a.stderr_pct_regret)}});
  }
  doc["cells"] = std::move(arr);
  return doc;
}

inline std::string epsilon_label(double eps) {
  if (!std::isfinite(eps)) return "Non-Private";
  std::ostringstream s;
  s << "ε=" << eps;
  return s.str();
}

// Rows: the noise-free baseline first, then eps in decreasing order.
// Columns: horizons in increasing order. Cells show mean percentage regret.
inline std::string format_regret_table(std::string_view title, std::span<const CellResult> cells) {
  std::vector<double> eps_rows;
  std::vector<std::int64_t> horizons;
  std::map<std::pair<double, std::int64_t>, double> value;
  for (const auto& c : cells) {
    if (std::find(eps_rows.begin(), eps_rows.end(), c.eps) == eps_rows.end()) eps_rows.push_back(c.eps);
    if (std::find(horizons.begin(), horizons.end(), c.T) == horizons.end()) horizons.push_back(c.T);
    value[{c.eps, c.T}] = c.result.aggregate.mean_pct_regret;
  }
  std::sort(eps_rows.begin(), eps_rows.end(), std::greater<>());
  std::sort(horizons.begin(), horizons.end());

  std::ostringstream out;
  out << title << '\n';
  out << std::left << std::setw(14) << "";
  for (auto T : horizons) out << std::right << std::setw(12) << ("T=" + std::to_string(T));
  out << '\n';
  for (double e : eps_rows) {
    const std::string label = epsilon_label(e);
    // setw counts bytes; the epsilon glyph is two bytes wide in UTF-8.
    const int pad = std::isfinite(e) ? 15 : 14;
    out << std::left << std::setw(pad) << label;
    for (auto T : horizons) {
      out << std::right << std::setw(12);
      auto it = value.find({e, T});
      if (it == value.end()) {
        out << "-";
      } else {
        std::ostringstream v;
        v << std::fixed << std::setprecision(2) << it->second;
        out << v.str();
      }
    }
    out << '\n';
  }
  return out.str();
}

// A named series of (T, mean regret) points.
struct RegretSeries {
  std::string label;
  std::vector<std::pair<double, double>> points;
};

inline std::string svg_escape(std::string_view s) {
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

// Self-contained 800x600 line chart of ln(regret / ln T) against ln T with
// one polyline per series and its fitted slope in the legend.
inline std::string render_loglog_svg(std::string_view title, std::span<const RegretSeries> series) {
  if (series.empty()) throw InputError("chart needs at least one series");
  double xmin = INFINITY, xmax = -INFINITY, ymin = INFINITY, ymax = -INFINITY;
  for (const auto& s : series) {
    for (const auto& [T, r] : s.points) {
      if (!(T > 1.0) || !(r > 0.0)) throw InputError("chart needs T > 1 and positive regret");
      const double x = std::log(T), y = std::log(r / std::log(T));
      xmin = std::min(xmin, x);
      xmax = std::max(xmax, x);
      ymin = std::min(ymin, y);
      ymax = std::max(ymax, y);
    }
  }
  if (xmax - xmin < 1e-9) {
    xmin -= 0.5;
    xmax += 0.5;
  }
  if (ymax - ymin < 1e-9) {
    ymin -= 0.5;
    ymax += 0.5;
  }
  const double ypad = 0.05 * (ymax - ymin);
  ymin -= ypad;
  ymax += ypad;

  constexpr double kLeft = 80, kRight = 760, kTop = 60, kBottom = 520;
  auto px = [&](double x) { return kLeft + (x - xmin) / (xmax - xmin) * (kRight - kLeft); };
  auto py = [&](double y) { return kBottom - (y - ymin) / (ymax - ymin) * (kBottom - kTop); };
  auto num = [](double v) {
    std::ostringstream s;
    s << std::fixed << std::setprecision(2) << v;
    return s.str();
  };
  static constexpr std::array<const char*, 8> kColors = {
      "#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#e377c2", "#7f7f7f"};

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 800 600\" width=\"800\" "
         "height=\"600\" font-family=\"sans-serif\" font-size=\"13\">\n";
  svg << "<rect x=\"0\" y=\"0\" width=\"800\" height=\"600\" fill=\"white\"/>\n";
  svg << "<text x=\"400\" y=\"30\" text-anchor=\"middle\" font-size=\"16\">" << svg_escape(title)
      << "</text>\n";
  svg << "<line x1=\"" << kLeft << "\" y1=\"" << kBottom << "\" x2=\"" << kRight << "\" y2=\""
      << kBottom << "\" stroke=\"black\"/>\n";
  svg << "<line x1=\"" << kLeft << "\" y1=\"" << kTop << "\" x2=\"" << kLeft << "\" y2=\""
      << kBottom << "\" stroke=\"black\"/>\n";
  for (int i = 0; i <= 5; ++i) {
    const double xv = xmin + (xmax - xmin) * i / 5.0;
    const double yv = ymin + (ymax - ymin) * i / 5.0;
    svg << "<line x1=\"" << num(px(xv)) << "\" y1=\"" << kBottom << "\" x2=\"" << num(px(xv))
        << "\" y2=\"" << kBottom + 5 << "\" stroke=\"black\"/>\n";
    svg << "<text x=\"" << num(px(xv)) << "\" y=\"" << kBottom + 22
        << "\" text-anchor=\"middle\">" << num(xv) << "</text>\n";
    svg << "<line x1=\"" << kLeft - 5 << "\" y1=\"" << num(py(yv)) << "\" x2=\"" << kLeft
        << "\" y2=\"" << num(py(yv)) << "\" stroke=\"black\"/>\n";
    svg << "<text x=\"" << kLeft - 8 << "\" y=\"" << num(py(yv) + 4)
        << "\" text-anchor=\"end\">" << num(yv) << "</text>\n";
  }
  svg << "<text x=\"420\" y=\"560\" text-anchor=\"middle\">ln T</text>\n";
  svg << "<text x=\"22\" y=\"290\" text-anchor=\"middle\" transform=\"rotate(-90 22 290)\">"
         "ln(regret / ln T)</text>\n";

  for (std::size_t i = 0; i < series.size(); ++i) {
    const auto& s = series[i];
    const char* color = kColors[i % kColors.size()];
    svg << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"2\" points=\"";
    for (std::size_t k = 0; k < s.points.size(); ++k) {
      const auto [T, r] = s.points[k];
      if (k) svg << ' ';
      svg << num(px(std::log(T))) << ',' << num(py(std::log(r / std::log(T))));
    }
    svg << "\"/>\n";
    for (const auto& [T, r] : s.points) {
      svg << "<circle cx=\"" << num(px(std::log(T))) << "\" cy=\""
          << num(py(std::log(r / std::log(T)))) << "\" r=\"3\" fill=\"" << color << "\"/>\n";
    }
    std::string legend = s.label;
    if (s.points.size() >= 2) legend += "  slope " + num(fit_loglog_slope(s.points));
    const double ly = kTop + 10 + 20.0 * static_cast<double>(i);
    svg << "<line x1=\"" << kLeft + 20 << "\" y1=\"" << ly << "\" x2=\"" << kLeft + 50
        << "\" y2=\"" << ly << "\" stroke=\"" << color << "\" stroke-width=\"2\"/>\n";
    svg << "<text x=\"" << kLeft + 58 << "\" y=\"" << ly + 4 << "\">" << svg_escape(legend)
        << "</text>\n";
  }
  svg << "</svg>\n";
  return svg.str();
}

}  // namespace privbandit

#endif  // PRIVBANDIT_REPORT_HPP_
