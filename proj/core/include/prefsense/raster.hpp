#pragma once

#include <cstddef>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace prefsense {

/// Derivative-magnitude field sampled at cell centers of the unit square.
///
/// Cell (row j, column i) is centered at x = (i + 1/2)/res, y = (j + 1/2)/res.
/// x is the differentiated coordinate's partner as documented per raster
/// kind (see RasterKind). `classes` holds, per cell, the number of thresholds
/// the magnitude strictly exceeds (0 .. thresholds.size()).
struct RasterGrid {
  std::size_t resolution = 0;
  std::vector<double> values;       ///< row-major, res * res
  std::vector<double> thresholds;   ///< strictly increasing
  std::vector<int> classes;         ///< row-major, res * res
  std::vector<bool> singular;       ///< cells where the derivative is undefined
  std::string x_label;
  std::string y_label;
  std::string title;

  double x_center(std::size_t i) const { return (static_cast<double>(i) + 0.5) / resolution; }
  double y_center(std::size_t j) const { return (static_cast<double>(j) + 0.5) / resolution; }
  double value(std::size_t i, std::size_t j) const { return values[j * resolution + i]; }
  int cell_class(std::size_t i, std::size_t j) const { return classes[j * resolution + i]; }
};

/// BT fields over (p_ik, p_kj): d_pik = |d p_ij / d p_ik|, d_pkj = |d p_ij / d p_kj|.
enum class BtField { d_pik, d_pkj };
/// PL fields over (p_uv, p_vu): d_uv = |d p_omega / d p_uv|, d_vu likewise.
enum class PlField { d_uv, d_vu };

std::vector<double> default_thresholds();  ///< {1.01, 2, 3, 5, 10}
inline constexpr std::size_t kDefaultResolution = 512;

/// x = p_ik (column), y = p_kj (row). Requires resolution >= 64.
RasterGrid raster_bt(BtField which, std::vector<double> thresholds,
                     std::size_t resolution = kDefaultResolution);

/// x = p_uv (column), y = p_vu (row). Requires resolution >= 64.
RasterGrid raster_pl(PlField which, double alpha, double beta, std::vector<double> thresholds,
                     std::size_t resolution = kDefaultResolution);

/// Classifies a magnitude against sorted thresholds.
int classify(double magnitude, const std::vector<double>& thresholds);

/// CSV: header "x,y,value,class", one row per cell, row-major, %.9g.
std::string to_csv(const RasterGrid& grid);

/// SVG: a background layer for class 0 plus one filled layer per threshold,
/// each built from marching-squares cell polygons of {value > M}, and an
/// axis frame.
std::string to_svg(const RasterGrid& grid);

enum class ExportFormat { csv, svg };

ExportFormat parse_export_format(std::string_view name);

/// Writes the grid to path; throws IoError with the path on failure.
void export_grid(const RasterGrid& grid, ExportFormat format, const std::filesystem::path& path);

/// Parses CSV produced by to_csv. Used for round-trip checks.
RasterGrid parse_csv(std::string_view text, std::vector<double> thresholds);

}  // namespace prefsense
