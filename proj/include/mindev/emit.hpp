#pragma once

#include <string>
#include <vector>

#include "mindev/model.hpp"
#include "mindev/optimizer.hpp"
#include "mindev/risk.hpp"

// Deterministic text emitters: CSV ('.' decimal separator, 10 significant
// digits, LF line endings), self-contained SVG line charts, and report JSON.

namespace mindev {

// "%.10g" — shared by all CSV emitters so outputs are byte-reproducible.
std::string format_number(double v);

// Header "theta_label,theta_param,risk"; the param field is empty for
// models without a numeric parameter.
std::string emit_risk_curve_csv(const FiniteObject& obj, const RiskCurve& curve);

// Header "theta,risk_ml,risk_minimax,risk_mindev,bayes_risk".
std::string emit_example_csv(const std::vector<double>& theta, const std::vector<double>& ml,
                             const std::vector<double>& minimax, const std::vector<double>& mindev,
                             const std::vector<double>& bayes);

struct ChartSeries {
  std::string label;
  std::vector<double> values;
};

// Self-contained SVG line chart: inline styling only, axes auto-fit with 5%
// padding, one polyline per series, legend on the right.
std::string emit_line_chart_svg(const std::string& title, const std::string& x_label,
                                const std::string& y_label, const std::vector<double>& xs,
                                const std::vector<ChartSeries>& series);

// {"tau":[...], "phi":..., "upper":..., "gap":..., "iters":..., "converged":bool}
std::string emit_solve_report_json(const SolveReport& report);

}  // namespace mindev
