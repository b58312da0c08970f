#include "vortex/domain.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <sstream>

#include "vortex/errors.hpp"

namespace vortex {

namespace {

using Vec2 = Eigen::Vector2d;

constexpr double kMinTheta = 1e-6;

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

bool finite_positive(double v) { return std::isfinite(v) && v > 0.0; }

double polygon_area(const Polygon& p) {
  double a = 0.0;
  const std::size_t n = p.vertices.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2& u = p.vertices[i];
    const Vec2& v = p.vertices[(i + 1) % n];
    a += u.x() * v.y() - v.x() * u.y();
  }
  return 0.5 * a;
}

bool inside_polygon(const Polygon& p, const Vec2& q) {
  bool in = false;
  const std::size_t n = p.vertices.size();
  for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
    const Vec2& a = p.vertices[i];
    const Vec2& b = p.vertices[j];
    if ((a.y() > q.y()) != (b.y() > q.y())) {
      const double x = a.x() + (q.y() - a.y()) / (b.y() - a.y()) * (b.x() - a.x());
      if (q.x() < x) in = !in;
    }
  }
  return in;
}

// Smallest s in (0, 1] with q + s d on an edge.
double polygon_crossing(const Polygon& p, const Vec2& q, const Vec2& d) {
  double best = 1.0;
  const std::size_t n = p.vertices.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2& a = p.vertices[i];
    const Vec2 e = p.vertices[(i + 1) % n] - a;
    const double den = d.x() * e.y() - d.y() * e.x();
    if (den == 0.0) continue;
    const Vec2 w = a - q;
    const double s = (w.x() * e.y() - w.y() * e.x()) / den;
    const double u = (w.x() * d.y() - w.y() * d.x()) / den;
    if (s > 0.0 && s <= best && u >= 0.0 && u <= 1.0) best = s;
  }
  return best;
}

// Geometry the raster needs: membership of a point, and the fraction of the
// step q -> q + h*dir at which the boundary is crossed.
struct Geometry {
  std::function<bool(const Vec2&)> inside;
  std::function<double(const Vec2&, const Vec2&, double)> theta;
};

Geometry geometry_of(const DomainSpec& d) {
  return std::visit(
      overloaded{
          [](const Disk& s) -> Geometry {
            const double r = s.radius;
            return {[r](const Vec2& q) { return q.squaredNorm() < r * r; },
                    [r](const Vec2& q, const Vec2& dir, double h) {
                      const double b = q.dot(dir);
                      const double c = q.squaredNorm() - r * r;
                      return (-b + std::sqrt(std::max(0.0, b * b - c))) / h;
                    }};
          },
          [](const Rectangle& s) -> Geometry {
            const double a = s.a, b = s.b;
            return {[a, b](const Vec2& q) { return q.x() > 0.0 && q.x() < a && q.y() > 0.0 && q.y() < b; },
                    [a, b](const Vec2& q, const Vec2& dir, double h) {
                      if (dir.x() > 0) return (a - q.x()) / h;
                      if (dir.x() < 0) return q.x() / h;
                      if (dir.y() > 0) return (b - q.y()) / h;
                      return q.y() / h;
                    }};
          },
          [](const Polygon& s) -> Geometry {
            return {[s](const Vec2& q) { return inside_polygon(s, q); },
                    [s](const Vec2& q, const Vec2& dir, double h) { return polygon_crossing(s, q, h * dir); }};
          },
          [](const GridMask&) -> Geometry { return {}; },
      },
      d);
}

int count_components(int nx, int ny, const std::function<bool(int, int)>& in) {
  std::vector<int> label(static_cast<std::size_t>(nx) * ny, -1);
  int comps = 0;
  std::vector<std::pair<int, int>> stack;
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i) {
      if (!in(i, j) || label[static_cast<std::size_t>(j) * nx + i] >= 0) continue;
      stack.push_back({i, j});
      label[static_cast<std::size_t>(j) * nx + i] = comps;
      while (!stack.empty()) {
        const auto [ci, cj] = stack.back();
        stack.pop_back();
        const int di[4] = {1, -1, 0, 0}, dj[4] = {0, 0, 1, -1};
        for (int k = 0; k < 4; ++k) {
          const int a = ci + di[k], b = cj + dj[k];
          if (a < 0 || b < 0 || a >= nx || b >= ny || !in(a, b)) continue;
          auto& l = label[static_cast<std::size_t>(b) * nx + a];
          if (l >= 0) continue;
          l = comps;
          stack.push_back({a, b});
        }
      }
      ++comps;
    }
  return comps;
}

}  // namespace

const char* shape_name(const DomainSpec& d) {
  return std::visit(overloaded{[](const Disk&) { return "disk"; }, [](const Rectangle&) { return "rectangle"; },
                               [](const GridMask&) { return "mask"; }, [](const Polygon&) { return "polygon"; }},
                    d);
}

GridMask parse_mask(const std::string& text, double h) {
  if (!finite_positive(h)) throw ValidationError("domain.h", "mask cell size must be positive");
  GridMask m;
  m.h = h;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    for (char ch : line)
      if (ch != '0' && ch != '1')
        throw ValidationError("domain.mask", "line " + std::to_string(lineno) + ": unexpected character '" +
                                                 std::string(1, ch) + "'");
    if (m.nx == 0) m.nx = static_cast<int>(line.size());
    if (static_cast<int>(line.size()) != m.nx)
      throw ValidationError("domain.mask", "line " + std::to_string(lineno) + ": row has " +
                                               std::to_string(line.size()) + " cells, expected " +
                                               std::to_string(m.nx));
    for (char ch : line) m.inside.push_back(ch == '1' ? 1 : 0);
    ++m.ny;
  }
  if (m.ny == 0) throw ValidationError("domain.mask", "empty mask");
  return m;
}

GridMask load_mask(const std::string& path, double h) {
  std::ifstream f(path);
  if (!f) throw ValidationError("domain.mask_file", "cannot open " + path);
  std::stringstream ss;
  ss << f.rdbuf();
  return parse_mask(ss.str(), h);
}

Eigen::Vector2d domain_extent(const DomainSpec& d) {
  return std::visit(overloaded{
                        [](const Disk& s) { return Vec2(2 * s.radius, 2 * s.radius); },
                        [](const Rectangle& s) { return Vec2(s.a, s.b); },
                        [](const GridMask& s) {
                          int i0 = s.nx, i1 = -1, j0 = s.ny, j1 = -1;
                          for (int j = 0; j < s.ny; ++j)
                            for (int i = 0; i < s.nx; ++i)
                              if (s.at(i, j)) i0 = std::min(i0, i), i1 = std::max(i1, i), j0 = std::min(j0, j), j1 = std::max(j1, j);
                          if (i1 < 0) return Vec2(0.0, 0.0);
                          return Vec2((i1 - i0 + 1) * s.h, (j1 - j0 + 1) * s.h);
                        },
                        [](const Polygon& s) {
                          Vec2 lo = s.vertices.front(), hi = s.vertices.front();
                          for (const auto& v : s.vertices) lo = lo.cwiseMin(v), hi = hi.cwiseMax(v);
                          return Vec2(hi - lo);
                        },
                    },
                    d);
}

std::vector<std::string> validate_domain(const DomainSpec& d, double R0) {
  std::visit(overloaded{
                 [](const Disk& s) {
                   if (!finite_positive(s.radius)) throw ValidationError("domain.radius", "must be positive");
                 },
                 [](const Rectangle& s) {
                   if (!finite_positive(s.a)) throw ValidationError("domain.a", "must be positive");
                   if (!finite_positive(s.b)) throw ValidationError("domain.b", "must be positive");
                 },
                 [](const GridMask& s) {
                   if (!finite_positive(s.h)) throw ValidationError("domain.h", "mask cell size must be positive");
                   if (s.nx <= 0 || s.ny <= 0 || s.inside.size() != static_cast<std::size_t>(s.nx) * s.ny)
                     throw ValidationError("domain.mask", "inconsistent mask dimensions");
                   const int comps = count_components(s.nx, s.ny, [&](int i, int j) { return s.at(i, j); });
                   if (comps == 0) throw ValidationError("domain.mask", "mask has no inside cells");
                   if (comps > 1)
                     throw ConnectivityError("mask has " + std::to_string(comps) + " disconnected regions");
                 },
                 [](const Polygon& s) {
                   if (s.vertices.size() < 3) throw ValidationError("domain.vertices", "need at least 3 vertices");
                   for (const auto& v : s.vertices)
                     if (!v.allFinite()) throw ValidationError("domain.vertices", "must be finite");
                   if (std::abs(polygon_area(s)) == 0.0) throw ValidationError("domain.vertices", "zero area");
                 },
             },
             d);
  std::vector<std::string> warnings;
  const Vec2 e = domain_extent(d);
  const double half = 0.5 * std::max(e.x(), e.y());
  if (R0 > 0.0 && half > R0) {
    std::ostringstream msg;
    msg << "domain half-extent " << half << " exceeds R0 = " << R0 << " (R0 should be about the diameter)";
    warnings.push_back(msg.str());
  }
  return warnings;
}

Raster rasterize(const DomainSpec& d, double h) {
  if (!finite_positive(h)) throw ValidationError("grid.h", "must be positive");
  validate_domain(d, 0.0);
  Raster r;
  r.h = h;

  std::function<bool(int, int)> in;
  std::function<double(int, int, int, int)> theta;  // (i, j, di, dj)

  if (const auto* m = std::get_if<GridMask>(&d)) {
    const double ratio = m->h / h;
    const int s = static_cast<int>(std::lround(ratio));
    if (s < 1 || std::abs(ratio - s) > 1e-9 * ratio)
      throw ValidationError("grid.h", "mask grids can only be refined by an integer factor of the cell size");
    r.nx = m->nx * s;
    r.ny = m->ny * s;
    const GridMask mask = *m;
    in = [mask, s](int i, int j) {
      if (i < 0 || j < 0 || i >= mask.nx * s || j >= mask.ny * s) return false;
      return mask.at(i / s, mask.ny - 1 - j / s);
    };
    theta = [](int, int, int, int) { return 0.5; };
  } else {
    const Geometry g = geometry_of(d);
    Vec2 lo, hi;
    if (const auto* disk = std::get_if<Disk>(&d)) {
      lo = Vec2(-disk->radius, -disk->radius);
      hi = -lo;
    } else if (const auto* rect = std::get_if<Rectangle>(&d)) {
      lo = Vec2(0.0, 0.0);
      hi = Vec2(rect->a, rect->b);
    } else {
      const auto& poly = std::get<Polygon>(d);
      lo = hi = poly.vertices.front();
      for (const auto& v : poly.vertices) lo = lo.cwiseMin(v), hi = hi.cwiseMax(v);
    }
    const Vec2 centre = 0.5 * (lo + hi);
    r.nx = static_cast<int>(std::ceil((hi.x() - lo.x()) / h)) + 2;
    r.ny = static_cast<int>(std::ceil((hi.y() - lo.y()) / h)) + 2;
    const int nx = r.nx, ny = r.ny;
    auto point = [=](int i, int j) {
      return Vec2(centre.x() + (i - 0.5 * (nx - 1)) * h, centre.y() + (j - 0.5 * (ny - 1)) * h);
    };
    in = [=](int i, int j) {
      if (i < 0 || j < 0 || i >= nx || j >= ny) return false;
      return g.inside(point(i, j));
    };
    theta = [=](int i, int j, int di, int dj) {
      return g.theta(point(i, j), Vec2(di, dj), h);
    };
  }

  const int stride = r.nx + 2;
  const std::size_t size = static_cast<std::size_t>(stride) * (r.ny + 2);
  r.diag.assign(size, 0.0);
  r.weight.assign(size, 0.0);
  r.index.assign(size, -1);
  const int di[4] = {1, -1, 0, 0}, dj[4] = {0, 0, 1, -1};
  for (int j = 0; j < r.ny; ++j)
    for (int i = 0; i < r.nx; ++i) {
      if (!in(i, j)) continue;
      const std::size_t p = static_cast<std::size_t>(j + 1) * stride + (i + 1);
      double diag = 0.0;
      for (int k = 0; k < 4; ++k) {
        if (in(i + di[k], j + dj[k])) {
          diag += 1.0;
        } else {
          const double t = std::clamp(theta(i, j, di[k], dj[k]), kMinTheta, 1.0);
          diag += 1.0 / t;
        }
      }
      r.diag[p] = diag;
      r.weight[p] = 1.0;
      r.index[p] = r.unknowns++;
    }
  if (r.unknowns == 0) throw ValidationError("grid.h", "no cell centre lies inside the domain");
  const int comps = component_count(r);
  if (comps > 1) throw ConnectivityError("raster has " + std::to_string(comps) + " disconnected regions");
  return r;
}

int component_count(const Raster& r) {
  const int stride = r.stride();
  return count_components(r.nx, r.ny, [&](int i, int j) {
    return r.index[static_cast<std::size_t>(j + 1) * stride + (i + 1)] >= 0;
  });
}

}  // namespace vortex
