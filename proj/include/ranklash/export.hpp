#pragma once

// Serialization of analysis results: CSV tables, JSON documents and
// self-contained SVG figures.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "ranklash/sweep.hpp"
#include "ranklash/value_funcs.hpp"

namespace ranklash {

inline constexpr const char* kToolVersion = "0.1.0";

// Output could not be produced (unwritable path and the like).
class ExportError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Twelve significant digits, shortest %g form.
inline std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

// Shortest decimal that parses back to exactly `v`.
inline std::string format_exact(double v) {
  char buf[40];
  for (int digits : {15, 16, 17}) {
    std::snprintf(buf, sizeof buf, "%.*g", digits, v);
    if (std::strtod(buf, nullptr) == v) break;
  }
  return buf;
}

// The value a reader of the CSV sees.
inline double round12(double v) {
  if (!std::isfinite(v)) return v;
  return std::strtod(format_number(v).c_str(), nullptr);
}

// std::monostate is an empty cell: blank in CSV, null in JSON.
using Cell = std::variant<double, long long, bool, std::string, std::monostate>;

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
};

inline std::string cell_text(const Cell& c) {
  struct Visitor {
    std::string operator()(double v) const { return format_number(v); }
    std::string operator()(long long v) const { return std::to_string(v); }
    std::string operator()(bool v) const { return v ? "1" : "0"; }
    std::string operator()(const std::string& v) const { return v; }
    std::string operator()(std::monostate) const { return ""; }
  };
  return std::visit(Visitor{}, c);
}

inline nlohmann::ordered_json cell_json(const Cell& c) {
  struct Visitor {
    nlohmann::ordered_json operator()(double v) const {
      if (!std::isfinite(v)) return format_number(v);
      return round12(v);
    }
    nlohmann::ordered_json operator()(long long v) const { return v; }
    nlohmann::ordered_json operator()(bool v) const { return v; }
    nlohmann::ordered_json operator()(const std::string& v) const { return v; }
    nlohmann::ordered_json operator()(std::monostate) const { return nullptr; }
  };
  return std::visit(Visitor{}, c);
}

// Header row then one line per row, LF endings.
inline std::string to_csv(const Table& table) {
  std::string out;
  for (std::size_t i = 0; i < table.columns.size(); ++i) {
    if (i) out += ',';
    out += table.columns[i];
  }
  out += '\n';
  for (const auto& row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out += ',';
      out += cell_text(row[i]);
    }
    out += '\n';
  }
  return out;
}

// A one-row table becomes an object; otherwise columns + rows.
inline nlohmann::ordered_json table_json(const Table& table) {
  nlohmann::ordered_json out = nlohmann::ordered_json::object();
  if (table.rows.size() == 1) {
    for (std::size_t i = 0; i < table.columns.size(); ++i) {
      out[table.columns[i]] = cell_json(table.rows[0][i]);
    }
    return out;
  }
  out["columns"] = table.columns;
  auto rows = nlohmann::ordered_json::array();
  for (const auto& row : table.rows) {
    auto r = nlohmann::ordered_json::array();
    for (const auto& c : row) r.push_back(cell_json(c));
    rows.push_back(std::move(r));
  }
  out["rows"] = std::move(rows);
  return out;
}

inline Table region_table(const RegionGrid& grid) {
  Table t{{"p", "delta", "cooperate"}, {}};
  t.rows.reserve(grid.cells.size());
  for (int i = 0; i < grid.p_points(); ++i) {
    for (int j = 0; j < grid.delta_points(); ++j) {
      t.rows.push_back({grid.spec.p_axis.at(i), grid.spec.delta_axis.at(j),
                        grid.at(i, j)});
    }
  }
  return t;
}

inline Table curve_table(const std::vector<CurveSample>& samples) {
  Table t{{"p", "v_c", "v_d", "gap"}, {}};
  for (const auto& s : samples) t.rows.push_back({s.p, s.v_c, s.v_d, s.gap});
  return t;
}

// Writes via a temporary file in the target directory, then renames.
inline void write_atomic(const std::string& path, const std::string& content) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  fs::path tmp = target;
  tmp += ".tmp" + std::to_string(std::rand());
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw ExportError("cannot write output file: " + path);
    f << content;
    f.flush();
    if (!f) {
      std::error_code ec;
      fs::remove(tmp, ec);
      throw ExportError("cannot write output file: " + path);
    }
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) {
    fs::remove(tmp, ec);
    throw ExportError("cannot write output file: " + path);
  }
}

namespace svg {

struct Frame {
  double width = 640, height = 520;
  double left = 70, right = 20, top = 30, bottom = 60;
  double x_lo = 0, x_hi = 1, y_lo = 0, y_hi = 1;

  double x(double v) const {
    return left + (v - x_lo) / (x_hi - x_lo) * (width - left - right);
  }
  double y(double v) const {
    return height - bottom -
           (v - y_lo) / (y_hi - y_lo) * (height - top - bottom);
  }
};

inline std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

inline void header(std::ostringstream& os, const Frame& f,
                   const std::string& title) {
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << f.width
     << "\" height=\"" << f.height << "\" viewBox=\"0 0 " << f.width << ' '
     << f.height << "\" font-family=\"sans-serif\" font-size=\"11\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  os << "<text x=\"" << num(f.width / 2) << "\" y=\"18\" text-anchor=\"middle\""
     << " font-size=\"13\">" << title << "</text>\n";
}

// Ticks every 0.1 data units on both axes; labels are thinned so at most
// eleven appear per axis.
inline void axes(std::ostringstream& os, const Frame& f, const std::string& xl,
                 const std::string& yl) {
  os << "<g stroke=\"black\" fill=\"none\">\n";
  os << "<line x1=\"" << num(f.x(f.x_lo)) << "\" y1=\"" << num(f.y(f.y_lo))
     << "\" x2=\"" << num(f.x(f.x_hi)) << "\" y2=\"" << num(f.y(f.y_lo))
     << "\"/>\n";
  os << "<line x1=\"" << num(f.x(f.x_lo)) << "\" y1=\"" << num(f.y(f.y_lo))
     << "\" x2=\"" << num(f.x(f.x_lo)) << "\" y2=\"" << num(f.y(f.y_hi))
     << "\"/>\n</g>\n";
  auto ticks = [&](double lo, double hi, bool horizontal) {
    const long first = std::lround(std::ceil(lo * 10.0 - 1e-9));
    const long last = std::lround(std::floor(hi * 10.0 + 1e-9));
    const long count = std::max(1L, last - first + 1);
    const long label_every = std::max(1L, (count + 10) / 11);
    for (long t = first; t <= last; ++t) {
      const double v = t / 10.0;
      std::string label = format_number(v);
      if (horizontal) {
        const double px = f.x(v), py = f.y(f.y_lo);
        os << "<line x1=\"" << num(px) << "\" y1=\"" << num(py) << "\" x2=\""
           << num(px) << "\" y2=\"" << num(py + 5) << "\" stroke=\"black\"/>\n";
        if ((t - first) % label_every == 0) {
          os << "<text x=\"" << num(px) << "\" y=\"" << num(py + 18)
             << "\" text-anchor=\"middle\">" << label << "</text>\n";
        }
      } else {
        const double px = f.x(f.x_lo), py = f.y(v);
        os << "<line x1=\"" << num(px - 5) << "\" y1=\"" << num(py) << "\" x2=\""
           << num(px) << "\" y2=\"" << num(py) << "\" stroke=\"black\"/>\n";
        if ((t - first) % label_every == 0) {
          os << "<text x=\"" << num(px - 8) << "\" y=\"" << num(py + 4)
             << "\" text-anchor=\"end\">" << label << "</text>\n";
        }
      }
    }
  };
  ticks(f.x_lo, f.x_hi, true);
  ticks(f.y_lo, f.y_hi, false);
  os << "<text x=\"" << num((f.x(f.x_lo) + f.x(f.x_hi)) / 2) << "\" y=\""
     << num(f.height - 15) << "\" text-anchor=\"middle\">" << xl << "</text>\n";
  os << "<text x=\"16\" y=\"" << num((f.y(f.y_lo) + f.y(f.y_hi)) / 2)
     << "\" text-anchor=\"middle\" transform=\"rotate(-90 16 "
     << num((f.y(f.y_lo) + f.y(f.y_hi)) / 2) << ")\">" << yl << "</text>\n";
}

}  // namespace svg

// Heatmap of the cooperation region with the threshold curve on top.
// Vertical runs of cooperating cells are merged into one rectangle.
inline std::string region_svg(const RegionGrid& grid) {
  const SweepSpec& spec = grid.spec;
  svg::Frame f;
  f.x_lo = spec.p_axis.lo;
  f.x_hi = spec.p_axis.hi;
  f.y_lo = spec.delta_axis.lo;
  f.y_hi = spec.delta_axis.hi;
  std::ostringstream os;
  svg::header(os, f,
              std::string("Cooperation region (") +
                  std::string(to_string(spec.strategy)) +
                  ", beta=" + format_number(spec.beta) + ")");
  const double dp = (spec.p_axis.hi - spec.p_axis.lo) / spec.p_axis.points;
  const double dd =
      (spec.delta_axis.hi - spec.delta_axis.lo) / spec.delta_axis.points;
  os << "<g fill=\"#4a7fc1\" stroke=\"none\">\n";
  for (int i = 0; i < grid.p_points(); ++i) {
    int j = 0;
    while (j < grid.delta_points()) {
      if (!grid.at(i, j)) {
        ++j;
        continue;
      }
      int k = j;
      while (k < grid.delta_points() && grid.at(i, k)) ++k;
      const double x0 = spec.p_axis.lo + i * dp;
      const double y0 = spec.delta_axis.lo + j * dd;
      const double y1 = spec.delta_axis.lo + k * dd;
      os << "<rect x=\"" << svg::num(f.x(x0)) << "\" y=\"" << svg::num(f.y(y1))
         << "\" width=\"" << svg::num(f.x(x0 + dp) - f.x(x0)) << "\" height=\""
         << svg::num(f.y(y0) - f.y(y1)) << "\"/>\n";
      j = k;
    }
  }
  os << "</g>\n";
  os << "<polyline fill=\"none\" stroke=\"black\" stroke-width=\"1.5\" "
        "points=\"";
  for (const auto& b : boundary_extract(grid)) {
    const double d = std::clamp(b.delta_star, f.y_lo, f.y_hi);
    os << svg::num(f.x(b.p)) << ',' << svg::num(f.y(d)) << ' ';
  }
  os << "\"/>\n";
  svg::axes(os, f, "attack success rate p", "discount factor delta");
  os << "</svg>\n";
  return os.str();
}

// V_C and V_D against p.
inline std::string curves_svg(const std::vector<CurveSample>& samples,
                              const std::string& title) {
  svg::Frame f;
  f.x_lo = samples.front().p;
  f.x_hi = samples.back().p;
  if (f.x_hi <= f.x_lo) f.x_hi = f.x_lo + 1.0;
  double lo = samples.front().v_c, hi = lo;
  for (const auto& s : samples) {
    lo = std::min({lo, s.v_c, s.v_d});
    hi = std::max({hi, s.v_c, s.v_d});
  }
  f.y_lo = std::floor(lo * 10.0) / 10.0;
  f.y_hi = std::ceil(hi * 10.0) / 10.0;
  if (f.y_hi <= f.y_lo) f.y_hi = f.y_lo + 0.1;
  std::ostringstream os;
  svg::header(os, f, title);
  auto path = [&](auto value, const char* color, const char* label) {
    os << "<path fill=\"none\" stroke=\"" << color
       << "\" stroke-width=\"1.5\" d=\"";
    for (std::size_t i = 0; i < samples.size(); ++i) {
      os << (i ? " L" : "M") << svg::num(f.x(samples[i].p)) << ','
         << svg::num(f.y(value(samples[i])));
    }
    os << "\"><title>" << label << "</title></path>\n";
  };
  path([](const CurveSample& s) { return s.v_c; }, "#1f5fbf", "V_C");
  path([](const CurveSample& s) { return s.v_d; }, "#c0392b", "V_D");
  os << "<text x=\"" << svg::num(f.width - 90) << "\" y=\"40\" fill=\"#1f5fbf\">"
     << "V_C</text>\n";
  os << "<text x=\"" << svg::num(f.width - 90) << "\" y=\"55\" fill=\"#c0392b\">"
     << "V_D</text>\n";
  svg::axes(os, f, "attack success rate p", "discounted value");
  os << "</svg>\n";
  return os.str();
}

}  // namespace ranklash
