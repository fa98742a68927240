#include "hdmap/symbols.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <limits>

#include "hdmap/image_io.hpp"

namespace hdmap {

std::string_view to_string(SymbolClass c) {
  switch (c) {
    case SymbolClass::kLeft: return "left";
    case SymbolClass::kRight: return "right";
    case SymbolClass::kStraight: return "straight";
    case SymbolClass::kStraightOrLeft: return "straight_or_left";
    case SymbolClass::kStraightOrRight: return "straight_or_right";
    case SymbolClass::kLeftOrRight: return "left_or_right";
    case SymbolClass::kOther: return "other";
  }
  return "other";
}

std::optional<SymbolClass> symbol_class_from_string(std::string_view s) {
  for (SymbolClass c : kAllSymbolClasses) {
    if (to_string(c) == s) return c;
  }
  return std::nullopt;
}

namespace {

std::vector<Point2> set_pixels(const BinaryMask& crop) {
  std::vector<Point2> pts;
  for (int y = 0; y < crop.height(); ++y)
    for (int x = 0; x < crop.width(); ++x)
      if (crop(x, y)) pts.push_back({static_cast<double>(x), static_cast<double>(y)});
  return pts;
}

double ncc(const std::vector<float>& a, const std::vector<float>& b, bool reverse_b) {
  const std::size_t n = a.size();
  double ma = 0.0, mb = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    ma += a[i];
    mb += b[i];
  }
  ma /= static_cast<double>(n);
  mb /= static_cast<double>(n);
  double sab = 0.0, saa = 0.0, sbb = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double da = a[i] - ma;
    const double db = b[reverse_b ? n - 1 - i : i] - mb;
    sab += da * db;
    saa += da * da;
    sbb += db * db;
  }
  if (saa <= 0.0 || sbb <= 0.0) return 0.0;
  return sab / std::sqrt(saa * sbb);
}

// Unit arrow: v runs tail (0) to tip (1), u is lateral with positive values
// on the right-hand side of the direction of travel.
struct UnitArrow {
  static constexpr double kShaft = 0.035;  // half-width
  static constexpr double kHeadHalf = 0.12;
  static constexpr double kHeadLen = 0.22;
  static constexpr double kBranchLen = 0.22;
};

using Poly = std::vector<Point2>;

Poly rect(double u0, double u1, double v0, double v1) {
  return {{u0, v0}, {u1, v0}, {u1, v1}, {u0, v1}};
}

void add_straight(std::vector<Poly>& out) {
  const double top = 1.0 - UnitArrow::kHeadLen;
  out.push_back(rect(-UnitArrow::kShaft, UnitArrow::kShaft, 0.0, top));
  out.push_back({{-UnitArrow::kHeadHalf, top}, {UnitArrow::kHeadHalf, top}, {0.0, 1.0}});
}

void add_shaft(std::vector<Poly>& out, double top) {
  out.push_back(rect(-UnitArrow::kShaft, UnitArrow::kShaft, 0.0, top));
}

// side = -1 for a left branch, +1 for right.
void add_branch(std::vector<Poly>& out, double v_base, double side) {
  const double c = std::sqrt(0.5);
  const Point2 d{side * c, c};
  const Point2 n{d.y, -d.x};
  const Point2 b0{0.0, v_base};
  const Point2 b1 = b0 + UnitArrow::kBranchLen * d;
  const double s = UnitArrow::kShaft;
  out.push_back({b0 - s * n, b1 - s * n, b1 + s * n, b0 + s * n});
  const double h = UnitArrow::kHeadHalf;
  out.push_back({b1 - h * n, b1 + UnitArrow::kHeadLen * d, b1 + h * n});
}

std::vector<Poly> unit_arrow(SymbolClass cls) {
  std::vector<Poly> out;
  constexpr double kTurnShaft = 0.62;
  constexpr double kTurnBase = 0.58;
  constexpr double kSideBase = 0.40;
  switch (cls) {
    case SymbolClass::kStraight:
      add_straight(out);
      break;
    case SymbolClass::kLeft:
      add_shaft(out, kTurnShaft);
      add_branch(out, kTurnBase, -1.0);
      break;
    case SymbolClass::kRight:
      add_shaft(out, kTurnShaft);
      add_branch(out, kTurnBase, 1.0);
      break;
    case SymbolClass::kStraightOrLeft:
      add_straight(out);
      add_branch(out, kSideBase, -1.0);
      break;
    case SymbolClass::kStraightOrRight:
      add_straight(out);
      add_branch(out, kSideBase, 1.0);
      break;
    case SymbolClass::kLeftOrRight:
      add_shaft(out, kTurnShaft);
      add_branch(out, kTurnBase, -1.0);
      add_branch(out, kTurnBase, 1.0);
      break;
    case SymbolClass::kOther:
      break;
  }
  return out;
}

}  // namespace

TemplateClassifier::TemplateClassifier(std::vector<Template> templates, double score_floor)
    : templates_(std::move(templates)), score_floor_(score_floor) {}

TemplateClassifier TemplateClassifier::builtin(double score_floor) {
  std::vector<Template> t;
  for (SymbolClass c : kAllSymbolClasses) {
    if (c == SymbolClass::kOther) continue;
    t.push_back({c, normalize(symbols::render_arrow(c, 120.0, std::numbers::pi / 2.0))});
  }
  return TemplateClassifier(std::move(t), score_floor);
}

TemplateClassifier TemplateClassifier::from_directory(const std::string& dir, double score_floor) {
  if (!std::filesystem::is_directory(dir)) throw InputError(dir + ": template directory not found");
  TemplateClassifier base = builtin(score_floor);
  for (Template& t : base.templates_) {
    const std::filesystem::path file =
        std::filesystem::path(dir) / (std::string(to_string(t.cls)) + ".png");
    if (!std::filesystem::exists(file)) continue;
    const BinaryMask img = image_io::load_binary_png(file.string());
    if (raster::count_set(img) < 2) throw InputError(file.string() + ": template has no shape");
    t.image = normalize(img);
  }
  return base;
}

namespace {

struct Frame {
  Point2 centre;
  Point2 major;
  Point2 minor;
  double scale = 1.0;  // source pixels per grid cell
};

Frame principal_frame(const BinaryMask& crop) {
  const std::vector<Point2> pts = set_pixels(crop);
  if (pts.empty()) throw InvalidArgument("normalize: empty crop");
  const geometry::PrincipalAxes pa = geometry::principal_axes(pts);
  const Point2 major = pa.major;
  const Point2 minor{major.y, -major.x};  // rotation, not a reflection
  double lo = std::numeric_limits<double>::infinity(), hi = -lo, mlo = lo, mhi = -lo;
  for (const Point2& p : pts) {
    const Point2 d = p - pa.mean;
    lo = std::min(lo, dot(d, major));
    hi = std::max(hi, dot(d, major));
    mlo = std::min(mlo, dot(d, minor));
    mhi = std::max(mhi, dot(d, minor));
  }
  const Point2 centre = pa.mean + (0.5 * (lo + hi)) * major + (0.5 * (mlo + mhi)) * minor;
  return {centre, major, minor, (hi - lo + 1.0) / 60.0};
}

std::vector<float> sample(const BinaryMask& crop, const Frame& f) {
  constexpr int kGrid = TemplateClassifier::kGrid;
  constexpr int kSub = 3;
  std::vector<float> out(static_cast<std::size_t>(kGrid * kGrid), 0.0f);
  const Point2 step_x = (f.scale / kSub) * f.minor;
  const Point2 step_y = (f.scale / kSub) * f.major;
  const double first = 0.5 - 0.5 * kGrid * kSub;  // sub-sample offset of the grid corner
  const Point2 origin = f.centre + first * step_x + first * step_y;
  const int w = crop.width();
  const int h = crop.height();
  // Sub-samples on a regular lattice; each grid cell averages kSub x kSub of them.
  for (int y = 0; y < kGrid * kSub; ++y) {
    const Point2 row = origin + static_cast<double>(y) * step_y;
    float* cells = out.data() + static_cast<std::size_t>(y / kSub) * kGrid;
    for (int x = 0; x < kGrid * kSub; ++x) {
      const Point2 src = row + static_cast<double>(x) * step_x;
      const int px = static_cast<int>(std::floor(src.x + 0.5));
      const int py = static_cast<int>(std::floor(src.y + 0.5));
      if (px >= 0 && py >= 0 && px < w && py < h && crop(px, py)) cells[x / kSub] += 1.0f;
    }
  }
  for (float& v : out) v /= kSub * kSub;
  return out;
}

}  // namespace

std::vector<float> TemplateClassifier::normalize(const BinaryMask& crop) {
  return sample(crop, principal_frame(crop));
}

Classification TemplateClassifier::classify(const BinaryMask& crop) const {
  // Cutouts shift the principal axis, extent and centre of a symbol, so the
  // query is resampled over a small pose grid around the normalized frame.
  constexpr double kRotationStep = 10.0 * std::numbers::pi / 180.0;
  constexpr double kScaleStep = 0.12;
  constexpr double kShiftStep = 4.0;  // grid cells
  // Paint is only ever removed, so a true match lies inside its template.
  constexpr double kContainment = 0.9;
  constexpr int kDilation = 2;

  const Frame base = principal_frame(crop);
  std::vector<std::vector<float>> queries;
  queries.reserve(81);
  for (int r = -1; r <= 1; ++r)
    for (int sc = -1; sc <= 1; ++sc)
      for (int along = -1; along <= 1; ++along)
        for (int across = -1; across <= 1; ++across) {
          Frame f = base;
          const double a = r * kRotationStep;
          f.major = std::cos(a) * base.major + std::sin(a) * base.minor;
          f.minor = {f.major.y, -f.major.x};
          f.scale = base.scale * (1.0 + sc * kScaleStep);
          f.centre = base.centre + (along * kShiftStep * base.scale) * f.major +
                     (across * kShiftStep * base.scale) * f.minor;
          queries.push_back(sample(crop, f));
        }

  Classification best{SymbolClass::kOther, 0.0};
  double best_score = -1.0;
  const Template* best_t = nullptr;
  const std::vector<float>* best_q = nullptr;
  bool best_flip = false;
  for (const Template& t : templates_)
    for (const auto& q : queries)
      for (bool flip : {false, true}) {
        const double s = ncc(t.image, q, flip);
        if (s > best_score) {
          best_score = s;
          best.cls = t.cls;
          best_t = &t;
          best_q = &q;
          best_flip = flip;
        }
      }
  best.confidence = std::clamp(best_score, 0.0, 1.0);
  if (best_score < score_floor_) best.cls = SymbolClass::kOther;
  if (best_t == nullptr || best.cls == SymbolClass::kOther) return best;

  constexpr int g = kGrid;
  std::vector<float> dilated(best_t->image.size(), 0.0f);
  for (int y = 0; y < g; ++y)
    for (int x = 0; x < g; ++x) {
      float m = 0.0f;
      for (int dy = -kDilation; dy <= kDilation; ++dy)
        for (int dx = -kDilation; dx <= kDilation; ++dx)
          if (x + dx >= 0 && y + dy >= 0 && x + dx < g && y + dy < g)
            m = std::max(m, best_t->image[static_cast<std::size_t>((y + dy) * g + x + dx)]);
      dilated[static_cast<std::size_t>(y * g + x)] = m;
    }
  const auto& q = *best_q;
  const std::size_t n = q.size();
  double inside = 0.0, total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double qi = q[best_flip ? n - 1 - i : i];
    total += qi;
    inside += std::min<double>(qi, dilated[i]);
  }
  if (total > 0.0 && inside / total < kContainment) best.cls = SymbolClass::kOther;
  return best;
}

namespace symbols {

SemanticMask reassign_mixed_components(const SemanticMask& mask) {
  const BinaryMask both = raster::class_mask(mask, {ClassId::kSymbol, ClassId::kLaneMarking});
  const ComponentSet cs = raster::connected_components(both, Connectivity::kEight);
  SemanticMask out = mask;
  for (const Component& c : cs.components) {
    std::size_t sym = 0;
    for (const Pixel& p : c.pixels) sym += mask.at(p) == ClassId::kSymbol ? 1 : 0;
    if (sym == 0 || 2 * sym < c.size()) continue;
    for (const Pixel& p : c.pixels) out.set(p, ClassId::kSymbol);
  }
  return out;
}

std::vector<SymbolCrop> extract_symbol_masks(const SemanticMask& mask) {
  const BinaryMask sym = raster::class_mask(mask, {ClassId::kSymbol});
  const ComponentSet cs = raster::connected_components(sym, Connectivity::kEight);
  std::vector<SymbolCrop> out;
  for (const Component& c : cs.components) {
    BinaryMask crop(c.bbox.width(), c.bbox.height(), 0);
    for (const Pixel& p : c.pixels) crop(p.x - c.bbox.min_x, p.y - c.bbox.min_y) = 1;
    out.push_back({std::move(crop), {c.bbox.min_x, c.bbox.min_y}});
  }
  return out;
}

std::array<Point2, 2> major_axis_endpoints_px(const BinaryMask& crop, Pixel offset) {
  const std::vector<Point2> pts = set_pixels(crop);
  if (pts.size() < 2) throw InvalidArgument("major_axis_endpoints: need at least two pixels");
  const geometry::PrincipalAxes pa = geometry::principal_axes(pts);
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  for (const Point2& p : pts) {
    lo = std::min(lo, dot(p - pa.mean, pa.major));
    hi = std::max(hi, dot(p - pa.mean, pa.major));
  }
  const Point2 off{static_cast<double>(offset.x), static_cast<double>(offset.y)};
  return {pa.mean + lo * pa.major + off, pa.mean + hi * pa.major + off};
}

std::array<Point2, 2> major_axis_endpoints(const BinaryMask& crop, Pixel offset,
                                           const GeoReference& ref) {
  const auto px = major_axis_endpoints_px(crop, offset);
  const UtmCoordinate a = geo::pixel_to_utm(px[0], ref);
  const UtmCoordinate b = geo::pixel_to_utm(px[1], ref);
  return {Point2{a.easting, a.northing}, Point2{b.easting, b.northing}};
}

Classification classify_symbol(const BinaryMask& crop, const SymbolClassifier& classifier) {
  if (raster::count_set(crop) == 0) throw InvalidArgument("classify_symbol: empty crop");
  return classifier.classify(crop);
}

std::vector<Symbol> extract_symbols(const SemanticMask& reassigned, const GeoReference& ref,
                                    const SymbolClassifier& classifier, std::size_t min_pixels) {
  std::vector<Symbol> out;
  for (SymbolCrop& sc : extract_symbol_masks(reassigned)) {
    if (raster::count_set(sc.crop) < std::max<std::size_t>(2, min_pixels)) continue;
    const Classification cl = classify_symbol(sc.crop, classifier);
    Symbol s;
    s.cls = cl.cls;
    s.confidence = cl.confidence;
    s.axis = major_axis_endpoints(sc.crop, sc.offset, ref);
    s.crop = std::move(sc.crop);
    s.offset = sc.offset;
    out.push_back(std::move(s));
  }
  return out;
}

std::vector<std::vector<Point2>> arrow_polygons(SymbolClass cls, Point2 tail, Point2 tip) {
  const Point2 d = tip - tail;
  const Point2 r{d.y, -d.x};
  std::vector<std::vector<Point2>> out;
  for (const Poly& poly : unit_arrow(cls)) {
    std::vector<Point2> mapped;
    for (const Point2& q : poly) mapped.push_back(tail + q.y * d + q.x * r);
    out.push_back(std::move(mapped));
  }
  return out;
}

bool inside_convex(std::span<const Point2> poly, Point2 p) {
  bool pos = false, neg = false;
  for (std::size_t i = 0; i < poly.size(); ++i) {
    const Point2 a = poly[i];
    const Point2 b = poly[(i + 1) % poly.size()];
    const double c = cross(b - a, p - a);
    pos = pos || c > 0.0;
    neg = neg || c < 0.0;
    if (pos && neg) return false;
  }
  return true;
}

BinaryMask render_arrow(SymbolClass cls, double length_px, double heading) {
  if (!(length_px > 0.0)) throw InvalidArgument("render_arrow: length must be positive");
  const Point2 dir{std::cos(heading), std::sin(heading)};
  const auto polys = arrow_polygons(cls, -0.5 * length_px * dir, 0.5 * length_px * dir);
  if (polys.empty()) throw InvalidArgument("render_arrow: class has no arrow shape");
  double minx = std::numeric_limits<double>::infinity(), maxx = -minx, miny = minx, maxy = -minx;
  for (const auto& poly : polys) {
    for (const Point2& p : poly) {
      minx = std::min(minx, p.x);
      maxx = std::max(maxx, p.x);
      miny = std::min(miny, p.y);
      maxy = std::max(maxy, p.y);
    }
  }
  const double x0 = std::floor(minx) - 2.0;
  const double y0 = std::ceil(maxy) + 2.0;
  const int w = static_cast<int>(std::ceil(maxx) + 2.0 - x0) + 1;
  const int h = static_cast<int>(y0 - (std::floor(miny) - 2.0)) + 1;
  BinaryMask out(w, h, 0);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const Point2 p{x0 + x, y0 - y};
      for (const auto& poly : polys) {
        if (inside_convex(poly, p)) {
          out(x, y) = 1;
          break;
        }
      }
    }
  }
  return out;
}

}  // namespace symbols
}  // namespace hdmap
