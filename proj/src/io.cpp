#include "specflow/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

#include "specflow/error.hpp"

namespace specflow::io {

std::string format_double(double x) {
  char buf[64];
  if (x == 0.0) x = 0.0;  // no "-0"
  auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

std::string format_double(double x, int digits) {
  char buf[64];
  if (x == 0.0) x = 0.0;
  auto res = std::to_chars(buf, buf + sizeof buf, x, std::chars_format::general, digits);
  return std::string(buf, res.ptr);
}

namespace {

[[noreturn]] void bad_field(const std::string& field, const std::string& why) {
  throw Error(ErrorKind::InvalidArgument, "field '" + field + "': " + why);
}

double parse_double(const std::string& s) {
  double v = 0.0;
  const char* first = s.data();
  const char* last = s.data() + s.size();
  while (first < last && *first == ' ') ++first;
  auto res = std::from_chars(first, last, v);
  if (res.ec != std::errc()) throw Error(ErrorKind::InvalidArgument, "not a number: '" + s + "'");
  return v;
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) out.push_back(cell);
  return out;
}

void expect_header(std::istream& is, const std::string& header) {
  std::string line;
  if (!std::getline(is, line) || line != header) {
    throw Error(ErrorKind::InvalidArgument, "expected CSV header '" + header + "'");
  }
}

}  // namespace

RiggedSet rigged_from_json(const json& j) {
  if (!j.is_object()) bad_field("<set>", "must be an object");
  for (const auto& [key, _] : j.items()) {
    if (key != "space" && key != "points") bad_field(key, "unknown key");
  }
  if (!j.contains("space") || !j["space"].is_string()) bad_field("space", "must be \"circle\" or \"line\"");
  const std::string space_name = j["space"].get<std::string>();
  if (space_name != "circle" && space_name != "line") bad_field("space", "must be \"circle\" or \"line\"");
  const Space space = space_name == "circle" ? Space::circle : Space::line;
  if (!j.contains("points") || !j["points"].is_array()) bad_field("points", "must be an array");

  std::vector<RiggedPoint> pts;
  for (std::size_t i = 0; i < j["points"].size(); ++i) {
    const auto& p = j["points"][i];
    const std::string where = "points[" + std::to_string(i) + "]";
    if (!p.is_object()) bad_field(where, "must be an object");
    for (const auto& [key, _] : p.items()) {
      if (key != "x" && key != "mult") bad_field(where + "." + key, "unknown key");
    }
    if (!p.contains("x") || !p["x"].is_number()) bad_field(where + ".x", "must be a number");
    const double x = p["x"].get<double>();
    int m = 1;
    if (p.contains("mult")) {
      if (!p["mult"].is_number_integer() || p["mult"].get<long>() < 1) bad_field(where + ".mult", "must be a positive integer");
      m = p["mult"].get<int>();
    }
    if (space == Space::circle && !(x > kPointTol && x < kTwoPi - kPointTol)) bad_field(where + ".x", "angle must lie in (0, 2pi)");
    if (space == Space::line && !(std::abs(x) > kPointTol)) bad_field(where + ".x", "line point must be nonzero");
    pts.push_back({x, m});
  }
  return RiggedSet(space, std::move(pts));
}

json rigged_to_json(const RiggedSet& s) {
  json pts = json::array();
  for (const auto& p : s.points()) pts.push_back({{"x", p.x}, {"mult", p.mult}});
  return {{"space", to_string(s.space())}, {"points", pts}};
}

Eigen::MatrixXcd matrix_from_json(const json& j) {
  if (!j.is_array() || j.empty()) bad_field("matrix", "must be a nonempty array of rows");
  const auto n = static_cast<Eigen::Index>(j.size());
  const auto cols = j[0].is_array() ? static_cast<Eigen::Index>(j[0].size()) : 0;
  Eigen::MatrixXcd m(n, cols);
  for (Eigen::Index r = 0; r < n; ++r) {
    const auto& row = j[r];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != cols) {
      bad_field("matrix[" + std::to_string(r) + "]", "rows must be arrays of equal length");
    }
    for (Eigen::Index c = 0; c < cols; ++c) {
      const auto& e = row[c];
      const std::string where = "matrix[" + std::to_string(r) + "][" + std::to_string(c) + "]";
      if (e.is_number()) {
        m(r, c) = e.get<double>();
      } else if (e.is_array() && e.size() == 2 && e[0].is_number() && e[1].is_number()) {
        m(r, c) = Complex(e[0].get<double>(), e[1].get<double>());
      } else {
        bad_field(where, "must be a number or an [re, im] pair");
      }
    }
  }
  return m;
}

json matrix_to_json(const Eigen::MatrixXcd& m) {
  json rows = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back({m(r, c).real(), m(r, c).imag()});
    rows.push_back(row);
  }
  return rows;
}

void write_rigged_csv(std::ostream& os, const RiggedSet& s) {
  os << "x,mult\n";
  for (const auto& p : s.points()) os << format_double(p.x) << ',' << p.mult << '\n';
}

RiggedSet read_rigged_csv(std::istream& is, Space space) {
  expect_header(is, "x,mult");
  std::vector<RiggedPoint> pts;
  std::string line;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    const auto cells = split_csv_line(line);
    if (cells.size() != 2) throw Error(ErrorKind::InvalidArgument, "rigged CSV row needs 2 columns");
    pts.push_back({parse_double(cells[0]), static_cast<int>(parse_double(cells[1]))});
  }
  return RiggedSet(space, std::move(pts));
}

void write_track_csv(std::ostream& os, const ArgumentTrack& track) {
  os << "r,j,theta_j\n";
  for (Eigen::Index k = 0; k < track.nodes(); ++k) {
    for (Eigen::Index j = 0; j < track.tracks(); ++j) {
      os << format_double(track.grid()[k]) << ',' << j << ',' << format_double(track.theta()(j, k)) << '\n';
    }
  }
}

ArgumentTrack read_track_csv(std::istream& is) {
  expect_header(is, "r,j,theta_j");
  std::vector<double> grid;
  std::map<long, std::vector<double>> rows;
  std::string line;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    const auto cells = split_csv_line(line);
    if (cells.size() != 3) throw Error(ErrorKind::InvalidArgument, "track CSV row needs 3 columns");
    const double r = parse_double(cells[0]);
    if (grid.empty() || grid.back() != r) grid.push_back(r);
    rows[static_cast<long>(parse_double(cells[1]))].push_back(parse_double(cells[2]));
  }
  Eigen::MatrixXd theta(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(grid.size()));
  Eigen::Index j = 0;
  for (const auto& [_, values] : rows) {
    if (values.size() != grid.size()) throw Error(ErrorKind::InvalidArgument, "track CSV has ragged tracks");
    theta.row(j++) = Eigen::Map<const Eigen::RowVectorXd>(values.data(), static_cast<Eigen::Index>(values.size()));
  }
  bool identity = true;
  for (j = 0; j < theta.rows(); ++j) identity = identity && on_sticky_lattice(theta(j, 0));
  return ArgumentTrack(std::move(grid), std::move(theta), identity);
}

void write_mu_csv(std::ostream& os, const MuInvariant& mu) {
  os << "theta,value_right,value_at\n";
  os << "0," << mu.values.base() << ',' << mu.values.base() << '\n';
  for (const auto& j : mu.values.jumps()) {
    os << format_double(j.at) << ',' << mu.values.right_limit(j.at) << ',' << format_double(mu(j.at)) << '\n';
  }
}

StepFunction read_mu_csv(std::istream& is) {
  expect_header(is, "theta,value_right,value_at");
  std::string line;
  std::vector<StepFunction::Jump> jumps;
  int base = 0, prev = 0;
  bool first = true;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    const auto cells = split_csv_line(line);
    if (cells.size() != 3) throw Error(ErrorKind::InvalidArgument, "mu CSV row needs 3 columns");
    const double at = parse_double(cells[0]);
    const int value = static_cast<int>(parse_double(cells[1]));
    if (first) {
      base = prev = value;
      first = false;
    } else {
      jumps.push_back({at, value - prev});
      prev = value;
    }
  }
  return StepFunction(base, std::move(jumps));
}

void write_matching_csv(std::ostream& os, const MatchingResult& m) {
  os << "source,target,cost\n";
  auto side = [](const std::optional<double>& x) { return x ? format_double(*x) : std::string("sticky"); };
  for (const auto& p : m.pairs) os << side(p.source) << ',' << side(p.target) << ',' << format_double(p.cost) << '\n';
}

namespace {

std::string escape_xml(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      default: out += c;
    }
  }
  return out;
}

}  // namespace

void write_svg_plot(std::ostream& os, const std::vector<Series>& series, const std::string& title,
                    const std::string& x_label, const std::string& y_label) {
  constexpr double W = 640, H = 420, L = 70, R = 20, T = 40, B = 50;
  double x0 = 0, x1 = 1, y0 = 0, y1 = 1;
  bool any = false;
  for (const auto& s : series) {
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      if (!any) {
        x0 = x1 = s.x[i];
        y0 = y1 = s.y[i];
        any = true;
      }
      x0 = std::min(x0, s.x[i]);
      x1 = std::max(x1, s.x[i]);
      y0 = std::min(y0, s.y[i]);
      y1 = std::max(y1, s.y[i]);
    }
  }
  if (x1 - x0 < 1e-12) x1 = x0 + 1;
  if (y1 - y0 < 1e-12) {
    y0 -= 1;
    y1 += 1;
  }
  auto px = [&](double x) { return L + (x - x0) / (x1 - x0) * (W - L - R); };
  auto py = [&](double y) { return H - B - (y - y0) / (y1 - y0) * (H - T - B); };
  static const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#e377c2", "#17becf"};

  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  os << "<text x=\"" << W / 2 << "\" y=\"24\" text-anchor=\"middle\" font-size=\"15\">" << escape_xml(title) << "</text>\n";
  os << "<line x1=\"" << L << "\" y1=\"" << H - B << "\" x2=\"" << W - R << "\" y2=\"" << H - B << "\" stroke=\"black\"/>\n";
  os << "<line x1=\"" << L << "\" y1=\"" << T << "\" x2=\"" << L << "\" y2=\"" << H - B << "\" stroke=\"black\"/>\n";
  for (int i = 0; i <= 4; ++i) {
    const double xv = x0 + (x1 - x0) * i / 4.0, yv = y0 + (y1 - y0) * i / 4.0;
    os << "<text x=\"" << format_double(px(xv), 6) << "\" y=\"" << H - B + 16 << "\" text-anchor=\"middle\">"
       << format_double(xv, 4) << "</text>\n";
    os << "<text x=\"" << L - 6 << "\" y=\"" << format_double(py(yv) + 4, 6) << "\" text-anchor=\"end\">"
       << format_double(yv, 4) << "</text>\n";
  }
  os << "<text x=\"" << (L + W - R) / 2 << "\" y=\"" << H - 12 << "\" text-anchor=\"middle\">" << escape_xml(x_label) << "</text>\n";
  os << "<text x=\"16\" y=\"" << (T + H - B) / 2 << "\" text-anchor=\"middle\" transform=\"rotate(-90 16 "
     << (T + H - B) / 2 << ")\">" << escape_xml(y_label) << "</text>\n";
  for (std::size_t k = 0; k < series.size(); ++k) {
    const auto& s = series[k];
    if (s.x.empty()) continue;
    os << "<polyline fill=\"none\" stroke=\"" << colors[k % 8] << "\" stroke-width=\"1.5\" points=\"";
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      os << format_double(px(s.x[i]), 7) << ',' << format_double(py(s.y[i]), 7) << (i + 1 < s.x.size() ? " " : "");
    }
    os << "\"/>\n";
  }
  os << "</svg>\n";
}

void write_track_svg(std::ostream& os, const ArgumentTrack& track) {
  std::vector<Series> series;
  for (Eigen::Index j = 0; j < track.tracks(); ++j) {
    Series s;
    s.x = track.grid();
    for (Eigen::Index k = 0; k < track.nodes(); ++k) s.y.push_back(track.theta()(j, k));
    series.push_back(std::move(s));
  }
  write_svg_plot(os, series, "Eigenvalue arguments along the path", "r", "theta_j(r)");
}

void write_mu_svg(std::ostream& os, const StepFunction& mu) {
  Series s;
  for (const auto& p : mu.pieces()) {
    s.x.insert(s.x.end(), {p.from, p.to});
    s.y.insert(s.y.end(), {static_cast<double>(p.value), static_cast<double>(p.value)});
  }
  write_svg_plot(os, {s}, "Spectral flow mu(theta)", "theta", "mu");
}

}  // namespace specflow::io
