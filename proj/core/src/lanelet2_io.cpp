#include "hdmap/lanelet2_io.hpp"

#include <expat.h>

#include <charconv>
#include <optional>
#include <set>

#include "hdmap/error.hpp"
#include "hdmap/keyvalue.hpp"

namespace hdmap {

double quantize_coordinate(double v) {
  const std::string text = format_fixed(v, 9);
  double out = 0.0;
  std::from_chars(text.data(), text.data() + text.size(), out);
  return out;
}

ElementId HdMap::add_point(double lat, double lon, double x, double y, Tags tags) {
  const ElementId id = next_id_++;
  points.emplace(id, MapPoint{quantize_coordinate(lat), quantize_coordinate(lon),
                              quantize_coordinate(x), quantize_coordinate(y), std::move(tags)});
  return id;
}

ElementId HdMap::add_utm_point(UtmCoordinate utm, const GeoReference& ref) {
  const LatLon ll = geo::utm_to_wgs84(utm, ref.utm_zone, ref.hemisphere);
  return add_point(ll.lat, ll.lon, utm.easting, utm.northing);
}

ElementId HdMap::add_linestring(std::vector<ElementId> point_ids, Tags tags) {
  const ElementId id = next_id_++;
  linestrings.emplace(id, LineString{std::move(point_ids), std::move(tags)});
  return id;
}

ElementId HdMap::add_symbol(ElementId first, ElementId second, Tags tags) {
  const ElementId id = next_id_++;
  symbols.emplace(id, LineString{{first, second}, std::move(tags)});
  return id;
}

ElementId HdMap::add_lanelet(ElementId left, ElementId right, std::vector<ElementId> symbol_ids,
                             Tags tags) {
  const ElementId id = next_id_++;
  lanelets.emplace(id, LaneletRelation{left, right, std::move(symbol_ids), std::move(tags)});
  return id;
}

void HdMap::validate() const {
  std::set<ElementId> seen;
  auto claim = [&](ElementId id, const char* kind) {
    if (id <= 0) throw IntegrityError(std::string(kind) + " id " + std::to_string(id) + " is not positive");
    if (!seen.insert(id).second) throw IntegrityError("duplicate id " + std::to_string(id));
  };
  for (const auto& [id, p] : points) claim(id, "node");
  for (const auto& [id, l] : linestrings) claim(id, "way");
  for (const auto& [id, l] : symbols) claim(id, "way");
  for (const auto& [id, l] : lanelets) claim(id, "relation");

  auto check_way = [&](ElementId id, const LineString& ls) {
    if (ls.points.size() < 2) {
      throw IntegrityError("way " + std::to_string(id) + " has fewer than two nodes");
    }
    for (ElementId p : ls.points) {
      if (!points.contains(p)) {
        throw IntegrityError("way " + std::to_string(id) + " references missing node " +
                             std::to_string(p));
      }
    }
  };
  for (const auto& [id, ls] : linestrings) check_way(id, ls);
  for (const auto& [id, ls] : symbols) check_way(id, ls);
  for (const auto& [id, ll] : lanelets) {
    for (ElementId w : {ll.left, ll.right}) {
      if (!linestrings.contains(w)) {
        throw IntegrityError("lanelet " + std::to_string(id) + " references missing way " +
                             std::to_string(w));
      }
    }
    for (ElementId s : ll.symbols) {
      if (!symbols.contains(s)) {
        throw IntegrityError("lanelet " + std::to_string(id) + " references missing symbol " +
                             std::to_string(s));
      }
    }
  }
}

std::vector<Point2> HdMap::geometry(const LineString& ls) const {
  std::vector<Point2> out;
  out.reserve(ls.points.size());
  for (ElementId id : ls.points) {
    const MapPoint& p = points.at(id);
    out.push_back({p.x, p.y});
  }
  return out;
}

namespace {

void append_escaped(std::string& out, std::string_view s) {
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      case '\'': out += "&apos;"; break;
      case '\n': out += "&#10;"; break;
      case '\r': out += "&#13;"; break;
      case '\t': out += "&#9;"; break;
      default: out += c;
    }
  }
}

void append_tag(std::string& out, std::string_view k, std::string_view v) {
  out += "    <tag k=\"";
  append_escaped(out, k);
  out += "\" v=\"";
  append_escaped(out, v);
  out += "\"/>\n";
}

void append_way(std::string& out, ElementId id, const LineString& ls) {
  out += "  <way id=\"" + std::to_string(id) + "\">\n";
  for (ElementId p : ls.points) out += "    <nd ref=\"" + std::to_string(p) + "\"/>\n";
  for (const auto& [k, v] : ls.tags) append_tag(out, k, v);
  out += "  </way>\n";
}

}  // namespace

std::string export_osm(const HdMap& map) {
  map.validate();
  std::string out;
  out += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  out += "<osm version=\"0.6\" generator=\"hdmap\">\n";
  for (const auto& [id, p] : map.points) {
    out += "  <node id=\"" + std::to_string(id) + "\" lat=\"" + format_fixed(p.lat, 9) +
           "\" lon=\"" + format_fixed(p.lon, 9) + "\">\n";
    append_tag(out, "local_x", format_fixed(p.x, 9));
    append_tag(out, "local_y", format_fixed(p.y, 9));
    for (const auto& [k, v] : p.tags) append_tag(out, k, v);
    out += "  </node>\n";
  }
  // Ways in ascending id order regardless of kind.
  auto ls_it = map.linestrings.begin();
  auto sy_it = map.symbols.begin();
  while (ls_it != map.linestrings.end() || sy_it != map.symbols.end()) {
    if (sy_it == map.symbols.end() ||
        (ls_it != map.linestrings.end() && ls_it->first < sy_it->first)) {
      append_way(out, ls_it->first, ls_it->second);
      ++ls_it;
    } else {
      append_way(out, sy_it->first, sy_it->second);
      ++sy_it;
    }
  }
  for (const auto& [id, ll] : map.lanelets) {
    out += "  <relation id=\"" + std::to_string(id) + "\">\n";
    out += "    <member type=\"way\" role=\"left\" ref=\"" + std::to_string(ll.left) + "\"/>\n";
    out += "    <member type=\"way\" role=\"right\" ref=\"" + std::to_string(ll.right) + "\"/>\n";
    for (ElementId s : ll.symbols) {
      out += "    <member type=\"way\" role=\"symbol\" ref=\"" + std::to_string(s) + "\"/>\n";
    }
    for (const auto& [k, v] : ll.tags) append_tag(out, k, v);
    out += "  </relation>\n";
  }
  out += "</osm>\n";
  return out;
}

namespace {

enum class Element { kNone, kNode, kWay, kRelation };

struct PendingWay {
  ElementId id = 0;
  std::size_t line = 0;
  LineString way;
};

struct PendingRelation {
  ElementId id = 0;
  std::size_t line = 0;
  std::optional<ElementId> left;
  std::optional<ElementId> right;
  std::vector<ElementId> symbols;
  Tags tags;
};

struct ParseState {
  XML_Parser parser = nullptr;
  HdMap map;
  std::set<ElementId> ids;
  std::map<ElementId, std::size_t> way_lines;
  std::vector<PendingWay> ways;
  std::vector<PendingRelation> relations;
  Element current = Element::kNone;
  ElementId node_id = 0;
  std::size_t node_line = 0;
  MapPoint node;
  std::optional<double> local_x;
  std::optional<double> local_y;
  bool saw_root = false;
  std::optional<ParseError> error;

  std::size_t line() const { return XML_GetCurrentLineNumber(parser); }

  void fail(const std::string& what) {
    if (!error) error.emplace(what, line());
    XML_StopParser(parser, XML_FALSE);
  }
};

const char* attr(const XML_Char** atts, std::string_view name) {
  for (int i = 0; atts[i] != nullptr; i += 2) {
    if (name == atts[i]) return atts[i + 1];
  }
  return nullptr;
}

std::optional<ElementId> parse_id(const char* text) {
  if (text == nullptr) return std::nullopt;
  const std::string_view s(text);
  ElementId v = 0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc{} || res.ptr != s.data() + s.size()) return std::nullopt;
  return v;
}

std::optional<double> parse_number(const char* text) {
  if (text == nullptr) return std::nullopt;
  const std::string_view s(text);
  double v = 0.0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc{} || res.ptr != s.data() + s.size()) return std::nullopt;
  return v;
}

void on_start(void* user, const XML_Char* name_c, const XML_Char** atts) {
  auto& st = *static_cast<ParseState*>(user);
  if (st.error) return;
  const std::string_view name(name_c);

  auto claim_id = [&](const char* kind) -> std::optional<ElementId> {
    const auto id = parse_id(attr(atts, "id"));
    if (!id || *id <= 0) {
      st.fail(std::string(kind) + " has a missing or non-positive id");
      return std::nullopt;
    }
    if (!st.ids.insert(*id).second) {
      st.fail("duplicate id " + std::to_string(*id));
      return std::nullopt;
    }
    return id;
  };

  if (!st.saw_root) {
    if (name != "osm") return st.fail("root element must be <osm>");
    st.saw_root = true;
    return;
  }
  if (name == "node") {
    const auto id = claim_id("node");
    if (!id) return;
    const auto lat = parse_number(attr(atts, "lat"));
    const auto lon = parse_number(attr(atts, "lon"));
    if (!lat || !lon) return st.fail("node " + std::to_string(*id) + " lacks lat/lon");
    st.current = Element::kNode;
    st.node_id = *id;
    st.node_line = st.line();
    st.node = MapPoint{*lat, *lon, 0.0, 0.0, {}};
    st.local_x.reset();
    st.local_y.reset();
  } else if (name == "way") {
    const auto id = claim_id("way");
    if (!id) return;
    st.current = Element::kWay;
    st.ways.push_back(PendingWay{*id, st.line(), {}});
  } else if (name == "relation") {
    const auto id = claim_id("relation");
    if (!id) return;
    st.current = Element::kRelation;
    st.relations.push_back(PendingRelation{*id, st.line(), {}, {}, {}, {}});
  } else if (name == "nd") {
    if (st.current != Element::kWay) return st.fail("<nd> outside <way>");
    const auto ref = parse_id(attr(atts, "ref"));
    if (!ref) return st.fail("<nd> with invalid ref");
    st.ways.back().way.points.push_back(*ref);
  } else if (name == "member") {
    if (st.current != Element::kRelation) return st.fail("<member> outside <relation>");
    const auto ref = parse_id(attr(atts, "ref"));
    const char* role = attr(atts, "role");
    const char* type = attr(atts, "type");
    if (!ref || role == nullptr) return st.fail("<member> with invalid ref or role");
    if (type != nullptr && std::string_view(type) != "way") {
      return st.fail("unsupported member type '" + std::string(type) + "'");
    }
    PendingRelation& rel = st.relations.back();
    const std::string_view r(role);
    if (r == "left") {
      if (rel.left) return st.fail("relation has two left members");
      rel.left = *ref;
    } else if (r == "right") {
      if (rel.right) return st.fail("relation has two right members");
      rel.right = *ref;
    } else if (r == "symbol") {
      rel.symbols.push_back(*ref);
    } else {
      return st.fail("unsupported member role '" + std::string(r) + "'");
    }
  } else if (name == "tag") {
    const char* k = attr(atts, "k");
    const char* v = attr(atts, "v");
    if (k == nullptr || v == nullptr) return st.fail("<tag> without k or v");
    Tags* target = nullptr;
    switch (st.current) {
      case Element::kNode: {
        const std::string_view key(k);
        if (key == "local_x" || key == "local_y") {
          const auto num = parse_number(v);
          if (!num) return st.fail("invalid " + std::string(key));
          (key == "local_x" ? st.local_x : st.local_y) = *num;
          return;
        }
        target = &st.node.tags;
        break;
      }
      case Element::kWay: target = &st.ways.back().way.tags; break;
      case Element::kRelation: target = &st.relations.back().tags; break;
      case Element::kNone: return st.fail("<tag> outside an element");
    }
    if (!target->emplace(k, v).second) return st.fail("duplicate tag key '" + std::string(k) + "'");
  }
  // Other elements (bounds, etc.) are ignored.
}

void on_end(void* user, const XML_Char* name_c) {
  auto& st = *static_cast<ParseState*>(user);
  if (st.error) return;
  const std::string_view name(name_c);
  if (name == "node" && st.current == Element::kNode) {
    if (!st.local_x || !st.local_y) {
      st.error.emplace("node " + std::to_string(st.node_id) + " lacks local_x/local_y", st.node_line);
      XML_StopParser(st.parser, XML_FALSE);
      return;
    }
    st.node.x = *st.local_x;
    st.node.y = *st.local_y;
    st.map.points.emplace(st.node_id, std::move(st.node));
    st.map.reserve_id(st.node_id);
    st.current = Element::kNone;
  } else if ((name == "way" && st.current == Element::kWay) ||
             (name == "relation" && st.current == Element::kRelation)) {
    st.current = Element::kNone;
  }
}

}  // namespace

HdMap parse_osm(std::string_view xml) {
  ParseState st;
  st.parser = XML_ParserCreate("UTF-8");
  if (st.parser == nullptr) throw std::bad_alloc();
  struct Guard {
    XML_Parser p;
    ~Guard() { XML_ParserFree(p); }
  } guard{st.parser};
  XML_SetUserData(st.parser, &st);
  XML_SetElementHandler(st.parser, on_start, on_end);

  const auto status = XML_Parse(st.parser, xml.data(), static_cast<int>(xml.size()), XML_TRUE);
  if (st.error) throw *st.error;
  if (status != XML_STATUS_OK) {
    throw ParseError(XML_ErrorString(XML_GetErrorCode(st.parser)),
                     XML_GetCurrentLineNumber(st.parser));
  }
  if (!st.saw_root) throw ParseError("empty document", 1);

  HdMap& map = st.map;
  for (PendingWay& w : st.ways) {
    if (w.way.points.size() < 2) throw ParseError("way " + std::to_string(w.id) + " has fewer than two nodes", w.line);
    for (ElementId p : w.way.points) {
      if (!map.points.contains(p)) {
        throw ParseError("way " + std::to_string(w.id) + " references missing node " + std::to_string(p), w.line);
      }
    }
    const auto type = w.way.tags.find("type");
    auto& target = (type != w.way.tags.end() && type->second == "arrow") ? map.symbols : map.linestrings;
    target.emplace(w.id, std::move(w.way));
    map.reserve_id(w.id);
  }
  for (PendingRelation& r : st.relations) {
    const auto type = r.tags.find("type");
    if (type == r.tags.end() || type->second != "lanelet") {
      throw ParseError("relation " + std::to_string(r.id) + " is not a lanelet", r.line);
    }
    if (!r.left || !r.right) throw ParseError("lanelet " + std::to_string(r.id) + " lacks left/right member", r.line);
    for (ElementId w : {*r.left, *r.right}) {
      if (!map.linestrings.contains(w)) {
        throw ParseError("lanelet " + std::to_string(r.id) + " references missing way " + std::to_string(w), r.line);
      }
    }
    for (ElementId s : r.symbols) {
      if (!map.symbols.contains(s)) {
        throw ParseError("lanelet " + std::to_string(r.id) + " references missing symbol " + std::to_string(s), r.line);
      }
    }
    map.lanelets.emplace(r.id, LaneletRelation{*r.left, *r.right, std::move(r.symbols), std::move(r.tags)});
    map.reserve_id(r.id);
  }
  return map;
}

HdMap load_osm(const std::string& path) { return parse_osm(read_text_file(path)); }

}  // namespace hdmap
