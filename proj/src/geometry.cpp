#include "heatcontent/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <numbers>
#include <numeric>
#include <random>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "heatcontent/errors.hpp"

namespace heatcontent {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

void require_positive(double v, const char* what) {
  if (!(v > 0.0) || !std::isfinite(v)) {
    throw InvalidArgument(std::string(what) + " must be positive and finite");
  }
}

void require_finite(const Point& p, const char* what) {
  for (double c : p) {
    if (!std::isfinite(c)) throw InvalidArgument(std::string(what) + " must be finite");
  }
}

double unit_ball_volume(int m) {
  return std::pow(std::numbers::pi, 0.5 * m) / std::tgamma(0.5 * m + 1.0);
}

double squared_distance(const Point& a, const Point& b) {
  double s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    const double d = a[k] - b[k];
    s += d * d;
  }
  return s;
}

// Number of cells of width h covering `extent`; snaps to the nearest integer
// when the ratio is integral up to rounding.
std::size_t cell_count(double extent, double h) {
  const double ratio = extent / h;
  const double nearest = std::round(ratio);
  if (std::abs(ratio - nearest) <= 1e-9 * std::max(1.0, nearest)) {
    return static_cast<std::size_t>(nearest);
  }
  return static_cast<std::size_t>(std::ceil(ratio));
}

bool interiors_overlap(const AxisBox& a, const AxisBox& b) {
  for (std::size_t k = 0; k < a.corner.size(); ++k) {
    const double lo = std::max(a.corner[k], b.corner[k]);
    const double hi = std::min(a.corner[k] + a.lengths[k], b.corner[k] + b.lengths[k]);
    if (!(lo < hi)) return false;
  }
  return true;
}

bool box_contains(const Point& corner, const std::vector<double>& lengths, const Point& p) {
  for (std::size_t k = 0; k < p.size(); ++k) {
    if (!(p[k] > corner[k] && p[k] < corner[k] + lengths[k])) return false;
  }
  return true;
}

// Farthest-pair distance over a finite point set.
double max_pair_distance(const std::vector<Point>& pts) {
  double best = 0.0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    for (std::size_t j = i + 1; j < pts.size(); ++j) {
      best = std::max(best, squared_distance(pts[i], pts[j]));
    }
  }
  return std::sqrt(best);
}

std::vector<Point> box_corners(const Point& corner, const std::vector<double>& lengths) {
  const std::size_t m = corner.size();
  std::vector<Point> out;
  out.reserve(std::size_t{1} << m);
  for (std::size_t mask = 0; mask < (std::size_t{1} << m); ++mask) {
    Point p = corner;
    for (std::size_t k = 0; k < m; ++k) {
      if (mask & (std::size_t{1} << k)) p[k] += lengths[k];
    }
    out.push_back(std::move(p));
  }
  return out;
}

// Exact diameter of a union of lattice cells. Along any lattice line the
// farthest corner from a fixed point is one of the two extreme corners, so
// only the per-line extremes are candidates.
double raster_diameter(const Raster& r) {
  const std::size_t m = r.extents.size();
  const std::size_t last = m - 1;
  std::map<std::vector<std::size_t>, std::pair<std::size_t, std::size_t>> lines;
  const std::size_t prefix_combos = std::size_t{1} << last;
  for (std::size_t flat : r.occupied) {
    const auto idx = r.unflatten(flat);
    for (std::size_t mask = 0; mask < prefix_combos; ++mask) {
      std::vector<std::size_t> key(last);
      for (std::size_t k = 0; k < last; ++k) key[k] = idx[k] + ((mask >> k) & 1U);
      auto [it, inserted] = lines.try_emplace(key, idx[last], idx[last] + 1);
      if (!inserted) {
        it->second.first = std::min(it->second.first, idx[last]);
        it->second.second = std::max(it->second.second, idx[last] + 1);
      }
    }
  }
  std::vector<Point> candidates;
  candidates.reserve(2 * lines.size());
  for (const auto& [key, range] : lines) {
    Point p(m);
    for (std::size_t k = 0; k < last; ++k) p[k] = r.origin[k] + static_cast<double>(key[k]) * r.spacing;
    p[last] = r.origin[last] + static_cast<double>(range.first) * r.spacing;
    candidates.push_back(p);
    p[last] = r.origin[last] + static_cast<double>(range.second) * r.spacing;
    candidates.push_back(std::move(p));
  }
  return max_pair_distance(candidates);
}

std::string join(const std::vector<double>& v) {
  std::ostringstream os;
  for (std::size_t i = 0; i < v.size(); ++i) os << (i ? "," : "") << v[i];
  return os.str();
}

}  // namespace

std::vector<std::size_t> Raster::unflatten(std::size_t flat) const {
  std::vector<std::size_t> idx(extents.size());
  for (std::size_t k = extents.size(); k-- > 0;) {
    idx[k] = flat % extents[k];
    flat /= extents[k];
  }
  return idx;
}

Point Raster::cell_center(std::size_t flat) const {
  const auto idx = unflatten(flat);
  Point c(idx.size());
  for (std::size_t k = 0; k < idx.size(); ++k) {
    c[k] = origin[k] + (static_cast<double>(idx[k]) + 0.5) * spacing;
  }
  return c;
}

Domain Domain::interval(double length) {
  require_positive(length, "interval length");
  return Domain(1, Interval{length});
}

Domain Domain::box(std::vector<double> lengths) {
  if (lengths.empty()) throw InvalidArgument("box needs at least one length");
  for (double l : lengths) require_positive(l, "box length");
  const int m = static_cast<int>(lengths.size());
  return Domain(m, Box{std::move(lengths)});
}

Domain Domain::ball(Point center, double radius) {
  if (center.empty()) throw InvalidArgument("ball center must have at least one coordinate");
  require_finite(center, "ball center");
  require_positive(radius, "ball radius");
  const int m = static_cast<int>(center.size());
  return Domain(m, Ball{std::move(center), radius});
}

Domain Domain::box_union(std::vector<AxisBox> boxes) {
  if (boxes.empty()) throw InvalidArgument("box union needs at least one box");
  const std::size_t m = boxes.front().corner.size();
  if (m == 0) throw InvalidArgument("box corner must have at least one coordinate");
  for (const auto& b : boxes) {
    if (b.corner.size() != m || b.lengths.size() != m) {
      throw InvalidArgument("box union members must share one dimension");
    }
    require_finite(b.corner, "box corner");
    for (double l : b.lengths) require_positive(l, "box length");
  }
  for (std::size_t i = 0; i < boxes.size(); ++i) {
    for (std::size_t j = i + 1; j < boxes.size(); ++j) {
      if (interiors_overlap(boxes[i], boxes[j])) {
        throw InvalidArgument("box union members " + std::to_string(i) + " and " +
                              std::to_string(j) + " overlap");
      }
    }
  }
  return Domain(static_cast<int>(m), BoxUnion{std::move(boxes)});
}

Domain Domain::raster(Point origin, double spacing,
                      const std::vector<std::vector<std::size_t>>& cells) {
  if (cells.empty()) throw InvalidArgument("raster must have at least one occupied cell");
  const std::size_t m = origin.size();
  if (m == 0) throw InvalidArgument("raster origin must have at least one coordinate");
  std::vector<std::size_t> extents(m, 0);
  for (const auto& c : cells) {
    if (c.size() != m) throw InvalidArgument("raster cell index has wrong dimension");
    for (std::size_t k = 0; k < m; ++k) extents[k] = std::max(extents[k], c[k] + 1);
  }
  std::size_t total = 1;
  for (auto e : extents) total *= e;
  std::vector<std::uint8_t> occ(total, 0);
  for (const auto& c : cells) {
    std::size_t flat = 0;
    for (std::size_t k = 0; k < m; ++k) flat = flat * extents[k] + c[k];
    occ[flat] = 1;
  }
  return raster(std::move(origin), spacing, std::move(extents), std::move(occ));
}

Domain Domain::raster(Point origin, double spacing, std::vector<std::size_t> extents,
                      std::vector<std::uint8_t> occupancy) {
  const std::size_t m = origin.size();
  if (m == 0 || extents.size() != m) throw InvalidArgument("raster origin/extents dimension mismatch");
  require_finite(origin, "raster origin");
  require_positive(spacing, "raster spacing");
  std::size_t total = 1;
  for (auto e : extents) {
    if (e == 0) throw InvalidArgument("raster extents must be positive");
    total *= e;
  }
  if (occupancy.size() != total) throw InvalidArgument("raster occupancy size does not match extents");
  Raster r{std::move(origin), spacing, std::move(extents), std::move(occupancy), {}};
  for (std::size_t i = 0; i < total; ++i) {
    if (r.occupancy[i]) r.occupied.push_back(i);
  }
  if (r.occupied.empty()) throw InvalidArgument("raster must have at least one occupied cell");
  return Domain(static_cast<int>(m), std::move(r));
}

std::string Domain::kind() const {
  return std::visit(Overloaded{[](const Interval&) { return std::string("interval"); },
                               [](const Box&) { return std::string("box"); },
                               [](const Ball&) { return std::string("ball"); },
                               [](const BoxUnion&) { return std::string("box_union"); },
                               [](const Raster&) { return std::string("raster"); }},
                    shape_);
}

const Raster& Domain::as_raster() const {
  if (!is_raster()) throw InvalidArgument("domain is not a raster");
  return std::get<Raster>(shape_);
}

double volume(const Domain& d) {
  const int m = d.dimension();
  return std::visit(
      Overloaded{[](const Interval& s) { return s.length; },
                 [](const Box& s) {
                   return std::accumulate(s.lengths.begin(), s.lengths.end(), 1.0, std::multiplies<>());
                 },
                 [m](const Ball& s) { return unit_ball_volume(m) * std::pow(s.radius, m); },
                 [](const BoxUnion& s) {
                   double v = 0.0;
                   for (const auto& b : s.boxes) {
                     v += std::accumulate(b.lengths.begin(), b.lengths.end(), 1.0, std::multiplies<>());
                   }
                   return v;
                 },
                 [m](const Raster& s) {
                   return static_cast<double>(s.occupied.size()) * std::pow(s.spacing, m);
                 }},
      d.shape());
}

double diameter(const Domain& d) {
  return std::visit(Overloaded{[](const Interval& s) { return s.length; },
                               [](const Box& s) {
                                 double q = 0.0;
                                 for (double l : s.lengths) q += l * l;
                                 return std::sqrt(q);
                               },
                               [](const Ball& s) { return 2.0 * s.radius; },
                               [](const BoxUnion& s) {
                                 std::vector<Point> corners;
                                 for (const auto& b : s.boxes) {
                                   auto c = box_corners(b.corner, b.lengths);
                                   corners.insert(corners.end(), c.begin(), c.end());
                                 }
                                 return max_pair_distance(corners);
                               },
                               [](const Raster& s) { return raster_diameter(s); }},
                    d.shape());
}

bool contains(const Domain& d, const Point& p) {
  if (p.size() != static_cast<std::size_t>(d.dimension())) {
    throw InvalidArgument("point dimension " + std::to_string(p.size()) +
                          " does not match domain dimension " + std::to_string(d.dimension()));
  }
  return std::visit(
      Overloaded{[&](const Interval& s) { return p[0] > 0.0 && p[0] < s.length; },
                 [&](const Box& s) { return box_contains(Point(p.size(), 0.0), s.lengths, p); },
                 [&](const Ball& s) { return squared_distance(p, s.center) < s.radius * s.radius; },
                 [&](const BoxUnion& s) {
                   return std::any_of(s.boxes.begin(), s.boxes.end(), [&](const AxisBox& b) {
                     return box_contains(b.corner, b.lengths, p);
                   });
                 },
                 [&](const Raster& s) {
                   std::size_t flat = 0;
                   for (std::size_t k = 0; k < p.size(); ++k) {
                     const double u = (p[k] - s.origin[k]) / s.spacing;
                     const double cell = std::floor(u);
                     // lattice planes are measure zero and count as outside
                     if (cell < 0.0 || cell >= static_cast<double>(s.extents[k]) || u == cell) return false;
                     flat = flat * s.extents[k] + static_cast<std::size_t>(cell);
                   }
                   return s.occupancy[flat] != 0;
                 }},
      d.shape());
}

Point sample_uniform(const Domain& d, Rng& rng) {
  const auto m = static_cast<std::size_t>(d.dimension());
  return std::visit(
      Overloaded{[&](const Interval& s) { return Point{s.length * rng.uniform_open()}; },
                 [&](const Box& s) {
                   Point p(m);
                   for (std::size_t k = 0; k < m; ++k) p[k] = s.lengths[k] * rng.uniform_open();
                   return p;
                 },
                 [&](const Ball& s) {
                   Point p(m);
                   for (;;) {
                     for (std::size_t k = 0; k < m; ++k) {
                       p[k] = s.center[k] + s.radius * (2.0 * rng.uniform_open() - 1.0);
                     }
                     if (squared_distance(p, s.center) < s.radius * s.radius) return p;
                   }
                 },
                 [&](const BoxUnion& s) {
                   std::vector<double> weights;
                   weights.reserve(s.boxes.size());
                   for (const auto& b : s.boxes) {
                     weights.push_back(
                         std::accumulate(b.lengths.begin(), b.lengths.end(), 1.0, std::multiplies<>()));
                   }
                   std::discrete_distribution<std::size_t> pick(weights.begin(), weights.end());
                   const auto& b = s.boxes[pick(rng.engine())];
                   Point p(m);
                   for (std::size_t k = 0; k < m; ++k) p[k] = b.corner[k] + b.lengths[k] * rng.uniform_open();
                   return p;
                 },
                 [&](const Raster& s) {
                   std::uniform_int_distribution<std::size_t> pick(0, s.occupied.size() - 1);
                   const auto idx = s.unflatten(s.occupied[pick(rng.engine())]);
                   Point p(m);
                   for (std::size_t k = 0; k < m; ++k) {
                     p[k] = s.origin[k] + (static_cast<double>(idx[k]) + rng.uniform_open()) * s.spacing;
                   }
                   return p;
                 }},
      d.shape());
}

BoundingBox bounding_box(const Domain& d) {
  const auto m = static_cast<std::size_t>(d.dimension());
  return std::visit(
      Overloaded{[](const Interval& s) { return BoundingBox{{0.0}, {s.length}}; },
                 [](const Box& s) { return BoundingBox{Point(s.lengths.size(), 0.0), s.lengths}; },
                 [](const Ball& s) {
                   BoundingBox bb{s.center, s.center};
                   for (std::size_t k = 0; k < s.center.size(); ++k) {
                     bb.lo[k] -= s.radius;
                     bb.hi[k] += s.radius;
                   }
                   return bb;
                 },
                 [m](const BoxUnion& s) {
                   BoundingBox bb{Point(m, INFINITY), Point(m, -INFINITY)};
                   for (const auto& b : s.boxes) {
                     for (std::size_t k = 0; k < m; ++k) {
                       bb.lo[k] = std::min(bb.lo[k], b.corner[k]);
                       bb.hi[k] = std::max(bb.hi[k], b.corner[k] + b.lengths[k]);
                     }
                   }
                   return bb;
                 },
                 [](const Raster& s) {
                   BoundingBox bb{s.origin, s.origin};
                   for (std::size_t k = 0; k < s.origin.size(); ++k) {
                     bb.hi[k] += static_cast<double>(s.extents[k]) * s.spacing;
                   }
                   return bb;
                 }},
      d.shape());
}

double min_feature(const Domain& d) {
  return std::visit(Overloaded{[](const Interval& s) { return s.length; },
                               [](const Box& s) { return *std::min_element(s.lengths.begin(), s.lengths.end()); },
                               [](const Ball& s) { return 2.0 * s.radius; },
                               [](const BoxUnion& s) {
                                 double f = INFINITY;
                                 for (const auto& b : s.boxes) {
                                   f = std::min(f, *std::min_element(b.lengths.begin(), b.lengths.end()));
                                 }
                                 return f;
                               },
                               [](const Raster& s) { return s.spacing; }},
                    d.shape());
}

double default_spacing(const Domain& d, int cells_per_feature) {
  if (d.is_raster()) return d.as_raster().spacing;
  return min_feature(d) / cells_per_feature;
}

Domain rasterize(const Domain& d, double h) {
  require_positive(h, "raster spacing");
  if (d.is_raster()) {
    const auto& r = d.as_raster();
    if (std::abs(r.spacing - h) <= 1e-12 * h) return d;
    if (h < r.spacing) {
      throw InvalidArgument("a raster can only be resampled at its own spacing or coarser");
    }
  } else if (h >= min_feature(d)) {
    throw EngineError("resolution too coarse");
  }
  const auto bb = bounding_box(d);
  const auto m = static_cast<std::size_t>(d.dimension());
  std::vector<std::size_t> extents(m);
  std::size_t total = 1;
  for (std::size_t k = 0; k < m; ++k) {
    extents[k] = std::max<std::size_t>(1, cell_count(bb.hi[k] - bb.lo[k], h));
    total *= extents[k];
  }
  std::vector<std::uint8_t> occ(total, 0);
  std::vector<std::size_t> idx(m, 0);
  Point c(m);
  for (std::size_t flat = 0; flat < total; ++flat) {
    for (std::size_t k = 0; k < m; ++k) c[k] = bb.lo[k] + (static_cast<double>(idx[k]) + 0.5) * h;
    occ[flat] = contains(d, c) ? 1 : 0;
    for (std::size_t k = m; k-- > 0;) {
      if (++idx[k] < extents[k]) break;
      idx[k] = 0;
    }
  }
  if (std::none_of(occ.begin(), occ.end(), [](auto v) { return v != 0; })) {
    throw EngineError("resolution too coarse");
  }
  return Domain::raster(bb.lo, h, std::move(extents), std::move(occ));
}

// ---------------------------------------------------------------------------
// JSON domain files

namespace {

using nlohmann::json;

void check_fields(const json& j, const std::set<std::string>& allowed) {
  if (!j.is_object()) throw InvalidArgument("domain description must be a JSON object");
  for (const auto& [key, value] : j.items()) {
    if (!allowed.count(key)) throw InvalidArgument("unknown domain field \"" + key + "\"");
  }
}

const json& field(const json& j, const char* name) {
  auto it = j.find(name);
  if (it == j.end()) throw InvalidArgument(std::string("missing domain field \"") + name + "\"");
  return *it;
}

double number(const json& j, const char* name) {
  if (!j.is_number()) throw InvalidArgument(std::string("field \"") + name + "\" must be a number");
  return j.get<double>();
}

std::vector<double> numbers(const json& j, const char* name, std::size_t expected) {
  if (!j.is_array()) throw InvalidArgument(std::string("field \"") + name + "\" must be an array");
  std::vector<double> out;
  for (const auto& v : j) out.push_back(number(v, name));
  if (out.size() != expected) {
    throw InvalidArgument(std::string("field \"") + name + "\" must have " + std::to_string(expected) +
                          " entries");
  }
  return out;
}

}  // namespace

Domain domain_from_json(const json& j) {
  if (!j.is_object()) throw InvalidArgument("domain description must be a JSON object");
  const auto& dim_j = field(j, "dimension");
  if (!dim_j.is_number_integer() || dim_j.get<long long>() < 1) {
    throw InvalidArgument("\"dimension\" must be a positive integer");
  }
  const auto m = static_cast<std::size_t>(dim_j.get<long long>());
  const auto& kind_j = field(j, "kind");
  if (!kind_j.is_string()) throw InvalidArgument("\"kind\" must be a string");
  const auto kind = kind_j.get<std::string>();

  if (kind == "interval") {
    check_fields(j, {"dimension", "kind", "length"});
    if (m != 1) throw InvalidArgument("an interval has dimension 1");
    return Domain::interval(number(field(j, "length"), "length"));
  }
  if (kind == "box") {
    check_fields(j, {"dimension", "kind", "lengths"});
    return Domain::box(numbers(field(j, "lengths"), "lengths", m));
  }
  if (kind == "ball") {
    check_fields(j, {"dimension", "kind", "center", "radius"});
    return Domain::ball(numbers(field(j, "center"), "center", m), number(field(j, "radius"), "radius"));
  }
  if (kind == "box_union") {
    check_fields(j, {"dimension", "kind", "boxes"});
    const auto& boxes_j = field(j, "boxes");
    if (!boxes_j.is_array()) throw InvalidArgument("\"boxes\" must be an array");
    std::vector<AxisBox> boxes;
    for (const auto& b : boxes_j) {
      check_fields(b, {"corner", "lengths"});
      boxes.push_back({numbers(field(b, "corner"), "corner", m), numbers(field(b, "lengths"), "lengths", m)});
    }
    return Domain::box_union(std::move(boxes));
  }
  if (kind == "raster") {
    check_fields(j, {"dimension", "kind", "origin", "spacing", "cells"});
    const auto& cells_j = field(j, "cells");
    if (!cells_j.is_array()) throw InvalidArgument("\"cells\" must be an array of index tuples");
    std::vector<std::vector<std::size_t>> cells;
    for (const auto& c : cells_j) {
      if (!c.is_array() || c.size() != m) throw InvalidArgument("raster cell index has wrong dimension");
      std::vector<std::size_t> idx;
      for (const auto& v : c) {
        if (!v.is_number_integer() || v.get<long long>() < 0) {
          throw InvalidArgument("raster cell indices must be non-negative integers");
        }
        idx.push_back(static_cast<std::size_t>(v.get<long long>()));
      }
      cells.push_back(std::move(idx));
    }
    return Domain::raster(numbers(field(j, "origin"), "origin", m), number(field(j, "spacing"), "spacing"),
                          cells);
  }
  throw InvalidArgument("unknown domain kind \"" + kind + "\"");
}

json domain_to_json(const Domain& d) {
  json j;
  j["dimension"] = d.dimension();
  j["kind"] = d.kind();
  std::visit(Overloaded{[&](const Interval& s) { j["length"] = s.length; },
                        [&](const Box& s) { j["lengths"] = s.lengths; },
                        [&](const Ball& s) {
                          j["center"] = s.center;
                          j["radius"] = s.radius;
                        },
                        [&](const BoxUnion& s) {
                          j["boxes"] = json::array();
                          for (const auto& b : s.boxes) {
                            j["boxes"].push_back({{"corner", b.corner}, {"lengths", b.lengths}});
                          }
                        },
                        [&](const Raster& s) {
                          j["origin"] = s.origin;
                          j["spacing"] = s.spacing;
                          j["cells"] = json::array();
                          for (auto flat : s.occupied) j["cells"].push_back(s.unflatten(flat));
                        }},
             d.shape());
  return j;
}

Domain load_domain(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open domain file " + path.string());
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw InvalidArgument("malformed domain file " + path.string() + ": " + e.what());
  }
  return domain_from_json(j);
}

std::string describe(const Domain& d) {
  std::ostringstream os;
  std::visit(Overloaded{[&](const Interval& s) { os << "interval(" << s.length << ")"; },
                        [&](const Box& s) { os << "box(" << join(s.lengths) << ")"; },
                        [&](const Ball& s) { os << "ball(m=" << s.center.size() << ",r=" << s.radius << ")"; },
                        [&](const BoxUnion& s) { os << "box_union(" << s.boxes.size() << " boxes)"; },
                        [&](const Raster& s) {
                          os << "raster(m=" << s.origin.size() << ",h=" << s.spacing
                             << ",cells=" << s.occupied.size() << ")";
                        }},
             d.shape());
  return os.str();
}

}  // namespace heatcontent
