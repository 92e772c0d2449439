#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <variant>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "heatcontent/rng.hpp"

namespace heatcontent {

using Point = std::vector<double>;

struct Interval {
  double length;  // occupies (0, length)
};

struct Box {
  std::vector<double> lengths;  // occupies prod (0, lengths[k])
};

struct Ball {
  Point center;
  double radius;
};

struct AxisBox {
  Point corner;
  std::vector<double> lengths;
};

struct BoxUnion {
  std::vector<AxisBox> boxes;
};

/// Union of occupied cells of a uniform lattice. Cell `i` (multi-index)
/// covers prod [origin[k] + i[k]*spacing, origin[k] + (i[k]+1)*spacing].
/// Occupancy is stored row-major with the last axis fastest.
struct Raster {
  Point origin;
  double spacing;
  std::vector<std::size_t> extents;
  std::vector<std::uint8_t> occupancy;
  std::vector<std::size_t> occupied;  // flat indices of occupied cells

  [[nodiscard]] std::vector<std::size_t> unflatten(std::size_t flat) const;
  [[nodiscard]] Point cell_center(std::size_t flat) const;
};

struct BoundingBox {
  Point lo;
  Point hi;
};

/// Immutable description of a bounded open set in R^m.
///
/// Constructed only through the named factories, which enforce positivity
/// of all lengths, pairwise interior-disjointness of box unions and
/// non-emptiness of rasters.
class Domain {
 public:
  using Shape = std::variant<Interval, Box, Ball, BoxUnion, Raster>;

  static Domain interval(double length);
  static Domain box(std::vector<double> lengths);
  static Domain ball(Point center, double radius);
  static Domain box_union(std::vector<AxisBox> boxes);
  /// `cells` lists occupied multi-indices; extents are taken from the
  /// largest index along each axis.
  static Domain raster(Point origin, double spacing,
                       const std::vector<std::vector<std::size_t>>& cells);
  static Domain raster(Point origin, double spacing, std::vector<std::size_t> extents,
                       std::vector<std::uint8_t> occupancy);

  [[nodiscard]] int dimension() const { return dimension_; }
  [[nodiscard]] const Shape& shape() const { return shape_; }
  [[nodiscard]] std::string kind() const;
  [[nodiscard]] bool is_raster() const { return std::holds_alternative<Raster>(shape_); }
  [[nodiscard]] const Raster& as_raster() const;

 private:
  Domain(int dimension, Shape shape) : dimension_(dimension), shape_(std::move(shape)) {}

  int dimension_;
  Shape shape_;
};

double volume(const Domain& d);
double diameter(const Domain& d);
bool contains(const Domain& d, const Point& p);
Point sample_uniform(const Domain& d, Rng& rng);
BoundingBox bounding_box(const Domain& d);

/// Smallest length scale that a rasterization must resolve.
double min_feature(const Domain& d);

/// Cell-center rasterization, origin at the lower corner of the bounding box.
/// Throws EngineError("resolution too coarse") when h >= min_feature(d).
Domain rasterize(const Domain& d, double h);

/// Spacing giving at least `cells_per_feature` cells across the smallest feature.
double default_spacing(const Domain& d, int cells_per_feature = 50);

/// Domain file schema; unknown fields are rejected.
Domain domain_from_json(const nlohmann::json& j);
nlohmann::json domain_to_json(const Domain& d);
Domain load_domain(const std::filesystem::path& path);

/// Short human-readable description, e.g. "box(1,2)".
std::string describe(const Domain& d);

}  // namespace heatcontent
