#include "prefsense/raster.hpp"

#include <algorithm>
#include <array>
#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>

#include "prefsense/errors.hpp"
#include "prefsense/sensitivity.hpp"

namespace prefsense {
namespace {

void validate_thresholds(const std::vector<double>& thresholds) {
  if (thresholds.empty()) throw DomainError("raster needs at least one threshold");
  for (std::size_t i = 0; i < thresholds.size(); ++i) {
    if (!(thresholds[i] > 0.0) || !std::isfinite(thresholds[i])) {
      throw DomainError("raster thresholds must be positive and finite");
    }
    if (i > 0 && !(thresholds[i] > thresholds[i - 1])) {
      throw DomainError("raster thresholds must be strictly increasing");
    }
  }
}

template <typename Field>
RasterGrid rasterize(std::vector<double> thresholds, std::size_t resolution, Field&& field) {
  if (resolution < 64) throw DomainError("raster resolution must be >= 64");
  validate_thresholds(thresholds);

  RasterGrid grid;
  grid.resolution = resolution;
  grid.thresholds = std::move(thresholds);
  grid.values.resize(resolution * resolution);
  grid.classes.resize(resolution * resolution);
  grid.singular.assign(resolution * resolution, false);

  for (std::size_t j = 0; j < resolution; ++j) {
    const double y = grid.y_center(j);
    for (std::size_t i = 0; i < resolution; ++i) {
      const double x = grid.x_center(i);
      const std::size_t cell = j * resolution + i;
      double magnitude = 0.0;
      try {
        magnitude = std::abs(field(x, y));
      } catch (const SingularityError&) {
        magnitude = std::numeric_limits<double>::infinity();
        grid.singular[cell] = true;
      }
      grid.values[cell] = magnitude;
      grid.classes[cell] = classify(magnitude, grid.thresholds);
    }
  }
  return grid;
}

std::string format_g9(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

// ---------------------------------------------------------------------------
// SVG

constexpr double kMargin = 56.0;
constexpr double kPlot = 480.0;

struct Pt {
  double x;
  double y;
};

class PathBuilder {
 public:
  void polygon(const Pt* pts, std::size_t n) {
    if (n < 3) return;
    for (std::size_t k = 0; k < n; ++k) {
      const double px = kMargin + pts[k].x * kPlot;
      const double py = kMargin + (1.0 - pts[k].y) * kPlot;
      char buf[64];
      std::snprintf(buf, sizeof buf, "%c%.2f %.2f", k == 0 ? 'M' : 'L', px, py);
      out_ += buf;
    }
    out_ += 'Z';
  }

  const std::string& str() const { return out_; }

 private:
  std::string out_;
};

double crossing(double a, double b, double level) {
  if (!std::isfinite(a) || !std::isfinite(b) || a == b) return 0.5;
  return std::clamp((level - a) / (b - a), 0.0, 1.0);
}

// Marching squares over the node lattice formed by the cell centers, padded
// with the unit-square border (border nodes copy the nearest center).
std::string level_path(const RasterGrid& grid, double level) {
  const std::size_t res = grid.resolution;
  const std::size_t nodes = res + 2;
  std::vector<double> coord(nodes);
  coord[0] = 0.0;
  coord[nodes - 1] = 1.0;
  for (std::size_t i = 0; i < res; ++i) coord[i + 1] = grid.x_center(i);
  const auto node_value = [&](std::size_t ni, std::size_t nj) {
    const std::size_t i = std::clamp<std::size_t>(ni, 1, res) - 1;
    const std::size_t j = std::clamp<std::size_t>(nj, 1, res) - 1;
    return grid.value(i, j);
  };

  PathBuilder path;
  for (std::size_t nj = 0; nj + 1 < nodes; ++nj) {
    std::size_t run_start = nodes;  // start of a run of fully covered squares
    for (std::size_t ni = 0; ni + 1 < nodes; ++ni) {
      const std::array<double, 4> v{node_value(ni, nj), node_value(ni + 1, nj),
                                    node_value(ni + 1, nj + 1), node_value(ni, nj + 1)};
      const std::array<Pt, 4> c{Pt{coord[ni], coord[nj]}, Pt{coord[ni + 1], coord[nj]},
                                Pt{coord[ni + 1], coord[nj + 1]}, Pt{coord[ni], coord[nj + 1]}};
      std::array<bool, 4> above{};
      int n_above = 0;
      for (int k = 0; k < 4; ++k) n_above += (above[k] = v[k] > level);

      const bool full = n_above == 4;
      if (full && run_start == nodes) run_start = ni;
      if (!full && run_start != nodes) {
        const Pt rect[4]{{coord[run_start], coord[nj]}, {coord[ni], coord[nj]},
                         {coord[ni], coord[nj + 1]}, {coord[run_start], coord[nj + 1]}};
        path.polygon(rect, 4);
        run_start = nodes;
      }
      if (full || n_above == 0) continue;

      const auto edge_point = [&](int a) {
        const int b = (a + 1) % 4;
        const double t = crossing(v[a], v[b], level);
        return Pt{c[a].x + t * (c[b].x - c[a].x), c[a].y + t * (c[b].y - c[a].y)};
      };

      const bool saddle = n_above == 2 && above[0] == above[2];
      const double center = 0.25 * (v[0] + v[1] + v[2] + v[3]);
      if (saddle && !(center > level)) {
        const int a = above[0] ? 0 : 1;
        const int b = a + 2;
        const Pt t1[3]{c[a], edge_point(a), edge_point((a + 3) % 4)};
        const Pt t2[3]{c[b], edge_point(b), edge_point((b + 3) % 4)};
        path.polygon(t1, 3);
        path.polygon(t2, 3);
        continue;
      }
      Pt poly[8];
      std::size_t n = 0;
      for (int k = 0; k < 4; ++k) {
        if (above[k]) poly[n++] = c[k];
        if (above[k] != above[(k + 1) % 4]) poly[n++] = edge_point(k);
      }
      path.polygon(poly, n);
    }
    if (run_start != nodes) {
      const Pt rect[4]{{coord[run_start], coord[nj]}, {1.0, coord[nj]},
                       {1.0, coord[nj + 1]}, {coord[run_start], coord[nj + 1]}};
      path.polygon(rect, 4);
    }
  }
  return path.str();
}

std::string layer_color(std::size_t cls, std::size_t n_classes) {
  // Light yellow to dark purple.
  const double t = n_classes <= 1 ? 0.0 : static_cast<double>(cls) / (n_classes - 1);
  const auto lerp = [t](int a, int b) { return static_cast<int>(std::lround(a + t * (b - a))); };
  char buf[16];
  std::snprintf(buf, sizeof buf, "#%02x%02x%02x", lerp(0xff, 0x3b), lerp(0xf7, 0x0f),
                lerp(0xbc, 0x70));
  return buf;
}

std::string xml_escape(const std::string& s) {
  std::string out;
  for (char ch : s) {
    switch (ch) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      case '"': out += "&quot;"; break;
      default: out += ch;
    }
  }
  return out;
}

}  // namespace

std::vector<double> default_thresholds() { return {1.01, 2.0, 3.0, 5.0, 10.0}; }

int classify(double magnitude, const std::vector<double>& thresholds) {
  int cls = 0;
  for (double m : thresholds) {
    if (magnitude > m) ++cls;
  }
  return cls;
}

RasterGrid raster_bt(BtField which, std::vector<double> thresholds, std::size_t resolution) {
  RasterGrid grid = rasterize(std::move(thresholds), resolution, [which](double x, double y) {
    return which == BtField::d_pik ? bt_partial(x, y) : bt_partial(y, x);
  });
  grid.x_label = "p_ik";
  grid.y_label = "p_kj";
  grid.title = which == BtField::d_pik ? "|dp_ij/dp_ik|" : "|dp_ij/dp_kj|";
  return grid;
}

RasterGrid raster_pl(PlField which, double alpha, double beta, std::vector<double> thresholds,
                     std::size_t resolution) {
  const PlSensitivityContext ctx = pl_context(alpha, beta);
  RasterGrid grid = rasterize(std::move(thresholds), resolution, [&](double x, double y) {
    const PlPartials d = pl_partials(x, y, ctx);
    return which == PlField::d_uv ? d.d_uv : d.d_vu;
  });
  grid.x_label = "p_uv";
  grid.y_label = "p_vu";
  grid.title = which == PlField::d_uv ? "|dp_w/dp_uv|" : "|dp_w/dp_vu|";
  return grid;
}

std::string to_csv(const RasterGrid& grid) {
  std::string out = "x,y,value,class\n";
  out.reserve(grid.values.size() * 40);
  for (std::size_t j = 0; j < grid.resolution; ++j) {
    for (std::size_t i = 0; i < grid.resolution; ++i) {
      out += format_g9(grid.x_center(i));
      out += ',';
      out += format_g9(grid.y_center(j));
      out += ',';
      out += format_g9(grid.value(i, j));
      out += ',';
      out += std::to_string(grid.cell_class(i, j));
      out += '\n';
    }
  }
  return out;
}

std::string to_svg(const RasterGrid& grid) {
  const double size = 2.0 * kMargin + kPlot;
  const std::size_t n_classes = grid.thresholds.size() + 1;
  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << size << "\" height=\"" << size
      << "\" viewBox=\"0 0 " << size << ' ' << size << "\">\n";
  svg << "<title>" << xml_escape(grid.title) << "</title>\n";

  svg << "<g class=\"layer\" id=\"class-0\" data-threshold=\"none\">"
      << "<rect x=\"" << kMargin << "\" y=\"" << kMargin << "\" width=\"" << kPlot
      << "\" height=\"" << kPlot << "\" fill=\"" << layer_color(0, n_classes) << "\"/></g>\n";
  for (std::size_t k = 0; k < grid.thresholds.size(); ++k) {
    svg << "<g class=\"layer\" id=\"class-" << k + 1 << "\" data-threshold=\""
        << format_g9(grid.thresholds[k]) << "\"><path fill=\"" << layer_color(k + 1, n_classes)
        << "\" stroke=\"none\" d=\"" << level_path(grid, grid.thresholds[k]) << "\"/></g>\n";
  }

  // Axis frame with ticks every 0.25.
  svg << "<g class=\"axes\" font-family=\"sans-serif\" font-size=\"12\" fill=\"black\">\n";
  svg << "<rect x=\"" << kMargin << "\" y=\"" << kMargin << "\" width=\"" << kPlot
      << "\" height=\"" << kPlot << "\" fill=\"none\" stroke=\"black\"/>\n";
  for (int t = 0; t <= 4; ++t) {
    const double f = t / 4.0;
    const double px = kMargin + f * kPlot;
    const double py = kMargin + (1.0 - f) * kPlot;
    char label[16];
    std::snprintf(label, sizeof label, "%.2f", f);
    svg << "<line x1=\"" << px << "\" y1=\"" << kMargin + kPlot << "\" x2=\"" << px << "\" y2=\""
        << kMargin + kPlot + 5 << "\" stroke=\"black\"/>";
    svg << "<text x=\"" << px << "\" y=\"" << kMargin + kPlot + 18
        << "\" text-anchor=\"middle\">" << label << "</text>\n";
    svg << "<line x1=\"" << kMargin - 5 << "\" y1=\"" << py << "\" x2=\"" << kMargin
        << "\" y2=\"" << py << "\" stroke=\"black\"/>";
    svg << "<text x=\"" << kMargin - 8 << "\" y=\"" << py + 4 << "\" text-anchor=\"end\">"
        << label << "</text>\n";
  }
  svg << "<text x=\"" << kMargin + kPlot / 2 << "\" y=\"" << size - 12
      << "\" text-anchor=\"middle\">" << xml_escape(grid.x_label) << "</text>\n";
  svg << "<text x=\"16\" y=\"" << kMargin + kPlot / 2 << "\" text-anchor=\"middle\" transform=\"rotate(-90 16 "
      << kMargin + kPlot / 2 << ")\">" << xml_escape(grid.y_label) << "</text>\n";
  svg << "<text x=\"" << kMargin + kPlot / 2 << "\" y=\"" << kMargin - 20
      << "\" text-anchor=\"middle\">" << xml_escape(grid.title) << "</text>\n";
  svg << "</g>\n</svg>\n";
  return svg.str();
}

ExportFormat parse_export_format(std::string_view name) {
  if (name == "csv") return ExportFormat::csv;
  if (name == "svg") return ExportFormat::svg;
  throw DomainError("unknown export format '" + std::string(name) + "' (expected csv or svg)");
}

void export_grid(const RasterGrid& grid, ExportFormat format, const std::filesystem::path& path) {
  const std::string body = format == ExportFormat::csv ? to_csv(grid) : to_svg(grid);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw IoError("cannot open '" + path.string() + "' for writing: " + std::strerror(errno));
  }
  out.write(body.data(), static_cast<std::streamsize>(body.size()));
  out.close();
  if (!out) throw IoError("failed writing '" + path.string() + "'");
}

RasterGrid parse_csv(std::string_view text, std::vector<double> thresholds) {
  std::istringstream in{std::string(text)};
  std::string line;
  if (!std::getline(in, line) || line != "x,y,value,class") {
    throw ValidationError("raster CSV must start with the header 'x,y,value,class'");
  }
  RasterGrid grid;
  grid.thresholds = std::move(thresholds);
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    double x = 0, y = 0;
    char value[64];
    int cls = 0;
    if (std::sscanf(line.c_str(), "%lf,%lf,%63[^,],%d", &x, &y, value, &cls) != 4) {
      throw ValidationError("malformed raster CSV row: " + line);
    }
    grid.values.push_back(std::strtod(value, nullptr));
    grid.classes.push_back(cls);
  }
  const auto res = static_cast<std::size_t>(std::llround(std::sqrt(grid.values.size())));
  if (res * res != grid.values.size()) throw ValidationError("raster CSV is not square");
  grid.resolution = res;
  grid.singular.assign(grid.values.size(), false);
  for (std::size_t k = 0; k < grid.values.size(); ++k) grid.singular[k] = std::isinf(grid.values[k]);
  return grid;
}

}  // namespace prefsense
