#ifndef SPECFLOW_IO_HPP
#define SPECFLOW_IO_HPP

#include <iosfwd>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include "json.hpp"

#include "specflow/lift.hpp"
#include "specflow/matching.hpp"
#include "specflow/mu.hpp"
#include "specflow/unispec.hpp"
#include "specflow/rigged.hpp"

namespace specflow::io {

using json = nlohmann::json;

/// Shortest round-trip decimal form, '.' separator regardless of locale.
std::string format_double(double x);
/// `digits` significant digits, locale independent.
std::string format_double(double x, int digits);

/// {"space": "circle"|"line", "points": [{"x": float, "mult": int}, ...]}.
/// Throws Error(InvalidArgument) naming the offending field.
RiggedSet rigged_from_json(const json& j);
json rigged_to_json(const RiggedSet& s);

/// Row-major array of rows of [re, im] pairs; plain numbers are read as real.
Eigen::MatrixXcd matrix_from_json(const json& j);
json matrix_to_json(const Eigen::MatrixXcd& m);

/// Header `x,mult`.
void write_rigged_csv(std::ostream& os, const RiggedSet& s);
RiggedSet read_rigged_csv(std::istream& is, Space space);

/// Header `r,j,theta_j`, one row per (node, track).
void write_track_csv(std::ostream& os, const ArgumentTrack& track);
ArgumentTrack read_track_csv(std::istream& is);

/// Header `theta,value_right,value_at`: a first row at θ = 0 carrying the
/// base value, then one row per breakpoint with the value just to its right
/// and the half-integer value at the breakpoint itself.
void write_mu_csv(std::ostream& os, const MuInvariant& mu);
StepFunction read_mu_csv(std::istream& is);

/// Header `source,target,cost`; the sticky point is written as `sticky`.
void write_matching_csv(std::ostream& os, const MatchingResult& m);

/// Self-contained SVG line plot with labeled axes.
struct Series {
  std::vector<double> x;
  std::vector<double> y;
};
void write_svg_plot(std::ostream& os, const std::vector<Series>& series, const std::string& title,
                    const std::string& x_label, const std::string& y_label);

/// Phases θⱼ(r) against r.
void write_track_svg(std::ostream& os, const ArgumentTrack& track);
/// μ(θ) as a step plot.
void write_mu_svg(std::ostream& os, const StepFunction& mu);

}  // namespace specflow::io

#endif  // SPECFLOW_IO_HPP
