#pragma once

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include <Eigen/Core>

namespace vortex {

/// Cross-section shapes. Lengths are in units of R0.
struct Disk {
  double radius = 1.0;  ///< centred at the origin
};

struct Rectangle {
  double a = 1.0;  ///< [0, a] x [0, b]
  double b = 1.0;
};

/// Binary raster; row 0 is the top row of the source file. The Dirichlet
/// boundary sits on the faces between inside and outside cells.
struct GridMask {
  int nx = 0;
  int ny = 0;
  double h = 1.0;
  std::vector<std::uint8_t> inside;  ///< row-major, ny rows of nx

  bool at(int i, int j) const { return inside[static_cast<std::size_t>(j) * nx + i] != 0; }
};

struct Polygon {
  std::vector<Eigen::Vector2d> vertices;  ///< simple polygon, either orientation
};

using DomainSpec = std::variant<Disk, Rectangle, GridMask, Polygon>;

const char* shape_name(const DomainSpec& d);

/// Rows of '0'/'1'; blank lines are skipped. Throws ValidationError on any
/// other character or ragged rows.
GridMask parse_mask(const std::string& text, double h);
GridMask load_mask(const std::string& path, double h);

/// Hard checks throw ValidationError (or ConnectivityError for masks with
/// more than one 4-connected component); returns advisory warnings.
std::vector<std::string> validate_domain(const DomainSpec& d, double R0 = 1.0);

/// Width and height of the bounding box.
Eigen::Vector2d domain_extent(const DomainSpec& d);

/// Cell-centred raster of the domain at spacing h on a padded
/// (nx + 2) x (ny + 2) box. An interior neighbour contributes 1 to the
/// scaled diagonal; an outside neighbour at boundary fraction theta of a cell
/// contributes 1/theta (linear ghost value through the boundary).
struct Raster {
  int nx = 0;
  int ny = 0;
  double h = 0.0;
  std::vector<double> diag;    ///< padded, zero off the unknowns
  std::vector<double> weight;  ///< padded, 1 on unknowns
  std::vector<int> index;      ///< padded -> unknown number or -1
  int unknowns = 0;

  int stride() const { return nx + 2; }
};

/// Throws ValidationError when a mask spacing is not an integer refinement of
/// the mask's own cell size, ConnectivityError when the raster splits.
Raster rasterize(const DomainSpec& d, double h);

/// Number of 4-connected components of the unknowns.
int component_count(const Raster& r);

}  // namespace vortex
