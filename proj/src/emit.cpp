#include "mindev/emit.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace mindev {
namespace {

std::string strf(const char* fmt, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, fmt, v);
  return buf;
}

std::string csv_quote(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
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

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                          "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f"};

struct Range {
  double lo = 0, hi = 1;
};

// Data extent padded by 5% of the span on each side.
Range padded_range(double lo, double hi) {
  double span = hi - lo;
  double pad = span > 0 ? 0.05 * span : (lo == 0 ? 1.0 : 0.05 * std::abs(lo));
  if (pad <= 0) pad = 1.0;
  return {lo - pad, hi + pad};
}

}  // namespace

std::string format_number(double v) { return strf("%.10g", v); }

std::string emit_risk_curve_csv(const FiniteObject& obj, const RiskCurve& curve) {
  if ((int)curve.risks.size() != obj.nm())
    throw std::invalid_argument("emit_risk_curve_csv: curve size mismatch");
  std::string out = "theta_label,theta_param,risk\n";
  for (int k = 0; k < obj.nm(); ++k) {
    out += csv_quote(obj.models[(size_t)k]);
    out += ',';
    if (obj.params[(size_t)k]) out += format_number(*obj.params[(size_t)k]);
    out += ',';
    out += format_number(curve.risks[(size_t)k]);
    out += '\n';
  }
  return out;
}

std::string emit_example_csv(const std::vector<double>& theta, const std::vector<double>& ml,
                             const std::vector<double>& minimax, const std::vector<double>& mindev,
                             const std::vector<double>& bayes) {
  size_t n = theta.size();
  if (ml.size() != n || minimax.size() != n || mindev.size() != n || bayes.size() != n)
    throw std::invalid_argument("emit_example_csv: column length mismatch");
  std::string out = "theta,risk_ml,risk_minimax,risk_mindev,bayes_risk\n";
  for (size_t i = 0; i < n; ++i) {
    out += format_number(theta[i]);
    out += ',';
    out += format_number(ml[i]);
    out += ',';
    out += format_number(minimax[i]);
    out += ',';
    out += format_number(mindev[i]);
    out += ',';
    out += format_number(bayes[i]);
    out += '\n';
  }
  return out;
}

std::string emit_line_chart_svg(const std::string& title, const std::string& x_label,
                                const std::string& y_label, const std::vector<double>& xs,
                                const std::vector<ChartSeries>& series) {
  if (xs.empty() || series.empty())
    throw std::invalid_argument("emit_line_chart_svg: empty data");
  for (const auto& s : series)
    if (s.values.size() != xs.size())
      throw std::invalid_argument("emit_line_chart_svg: series length mismatch");

  double xmin = xs[0], xmax = xs[0];
  for (double v : xs) {
    xmin = std::min(xmin, v);
    xmax = std::max(xmax, v);
  }
  double ymin = series[0].values[0], ymax = ymin;
  for (const auto& s : series)
    for (double v : s.values) {
      ymin = std::min(ymin, v);
      ymax = std::max(ymax, v);
    }
  Range xr = padded_range(xmin, xmax), yr = padded_range(ymin, ymax);

  const double width = 840, height = 560;
  const double left = 70, right = width - 210, top = 44, bottom = height - 58;
  auto px = [&](double x) { return left + (x - xr.lo) / (xr.hi - xr.lo) * (right - left); };
  auto py = [&](double y) { return bottom - (y - yr.lo) / (yr.hi - yr.lo) * (bottom - top); };

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
      << "\" viewBox=\"0 0 " << width << " " << height << "\">\n";
  svg << "<rect x=\"0\" y=\"0\" width=\"" << width << "\" height=\"" << height
      << "\" fill=\"white\"/>\n";
  svg << "<text x=\"" << (left + right) / 2 << "\" y=\"24\" text-anchor=\"middle\" "
      << "font-family=\"sans-serif\" font-size=\"16\" fill=\"#222\">" << xml_escape(title)
      << "</text>\n";

  const int ticks = 5;
  for (int t = 0; t < ticks; ++t) {
    double fx = xr.lo + (xr.hi - xr.lo) * t / (ticks - 1);
    double fy = yr.lo + (yr.hi - yr.lo) * t / (ticks - 1);
    double gx = px(fx), gy = py(fy);
    svg << "<line x1=\"" << strf("%.2f", gx) << "\" y1=\"" << strf("%.2f", top) << "\" x2=\""
        << strf("%.2f", gx) << "\" y2=\"" << strf("%.2f", bottom)
        << "\" stroke=\"#e0e0e0\" stroke-width=\"1\"/>\n";
    svg << "<line x1=\"" << strf("%.2f", left) << "\" y1=\"" << strf("%.2f", gy) << "\" x2=\""
        << strf("%.2f", right) << "\" y2=\"" << strf("%.2f", gy)
        << "\" stroke=\"#e0e0e0\" stroke-width=\"1\"/>\n";
    svg << "<text x=\"" << strf("%.2f", gx) << "\" y=\"" << strf("%.2f", bottom + 18)
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\" fill=\"#444\">"
        << strf("%.4g", fx) << "</text>\n";
    svg << "<text x=\"" << strf("%.2f", left - 8) << "\" y=\"" << strf("%.2f", gy + 4)
        << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\" fill=\"#444\">"
        << strf("%.4g", fy) << "</text>\n";
  }
  svg << "<rect x=\"" << left << "\" y=\"" << top << "\" width=\"" << right - left
      << "\" height=\"" << bottom - top << "\" fill=\"none\" stroke=\"#888\" stroke-width=\"1\"/>\n";
  svg << "<text x=\"" << (left + right) / 2 << "\" y=\"" << height - 16
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\" fill=\"#222\">"
      << xml_escape(x_label) << "</text>\n";
  svg << "<text x=\"20\" y=\"" << (top + bottom) / 2
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\" fill=\"#222\" "
      << "transform=\"rotate(-90 20 " << (top + bottom) / 2 << ")\">" << xml_escape(y_label)
      << "</text>\n";

  for (size_t s = 0; s < series.size(); ++s) {
    const char* color = kPalette[s % (sizeof kPalette / sizeof *kPalette)];
    svg << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"2\" points=\"";
    for (size_t i = 0; i < xs.size(); ++i) {
      if (i) svg << ' ';
      svg << strf("%.2f", px(xs[i])) << ',' << strf("%.2f", py(series[s].values[i]));
    }
    svg << "\"/>\n";
    double ly = top + 10 + 22.0 * (double)s;
    svg << "<line x1=\"" << right + 16 << "\" y1=\"" << ly << "\" x2=\"" << right + 44
        << "\" y2=\"" << ly << "\" stroke=\"" << color << "\" stroke-width=\"2\"/>\n";
    svg << "<text x=\"" << right + 50 << "\" y=\"" << ly + 4
        << "\" font-family=\"sans-serif\" font-size=\"12\" fill=\"#222\">"
        << xml_escape(series[s].label) << "</text>\n";
  }
  svg << "</svg>\n";
  return svg.str();
}

std::string emit_solve_report_json(const SolveReport& report) {
  nlohmann::ordered_json doc;
  doc["tau"] = report.tau;
  doc["phi"] = report.phi;
  doc["upper"] = report.upper;
  doc["gap"] = report.gap;
  doc["iters"] = report.iters;
  doc["converged"] = report.converged;
  return doc.dump(2) + "\n";
}

}  // namespace mindev
