#include "hdmap/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <queue>
#include <set>
#include <unordered_map>

#include <nlohmann/json.hpp>

namespace hdmap {

double Assignment::total_distance() const {
  double sum = 0.0;
  for (const MatchPair& p : pairs) sum += p.distance;
  return sum;
}

namespace evaluation {
namespace {

struct Edge {
  std::size_t col;
  double cost;
  double dist;
};

// Rectangular min-cost assignment where every row may instead take a private
// zero-cost dummy column. Costs are distance minus a constant larger than any
// total distance, so cardinality is maximized before distance is minimized.
// Returns the chosen real column per row or npos.
std::vector<std::size_t> solve_block(const std::vector<std::vector<Edge>>& rows, std::size_t n_cols) {
  constexpr std::size_t npos = std::numeric_limits<std::size_t>::max();
  constexpr double inf = std::numeric_limits<double>::infinity();
  const std::size_t n = rows.size();
  const std::size_t total_cols = n_cols + n;  // dummy column of row i is n_cols + i

  auto edges_of = [&](std::size_t r, auto&& fn) {
    for (const Edge& e : rows[r]) fn(e.col, e.cost);
    fn(n_cols + r, 0.0);
  };

  std::vector<double> u(n, 0.0), v(total_cols, 0.0);
  for (std::size_t r = 0; r < n; ++r) {
    double m = 0.0;
    for (const Edge& e : rows[r]) m = std::min(m, e.cost);
    u[r] = m;
  }
  std::vector<std::size_t> col_match(total_cols, npos), row_match(n, npos);
  std::vector<double> dist(total_cols, inf);
  std::vector<std::size_t> pred(total_cols, npos);
  std::vector<char> done(total_cols, 0);
  std::vector<std::size_t> touched;

  using Item = std::pair<double, std::size_t>;
  for (std::size_t s = 0; s < n; ++s) {
    std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
    auto relax = [&](std::size_t r, double base) {
      edges_of(r, [&](std::size_t c, double cost) {
        if (done[c]) return;
        const double nd = base + cost - u[r] - v[c];
        if (nd < dist[c]) {
          if (dist[c] == inf) touched.push_back(c);
          dist[c] = nd;
          pred[c] = r;
          heap.push({nd, c});
        }
      });
    };
    relax(s, 0.0);
    std::vector<std::size_t> finalized;
    std::size_t sink = npos;
    while (!heap.empty()) {
      const auto [d, c] = heap.top();
      heap.pop();
      if (done[c] || d > dist[c]) continue;
      done[c] = 1;
      finalized.push_back(c);
      if (col_match[c] == npos) {
        sink = c;
        break;
      }
      relax(col_match[c], d);
    }
    const double big_d = dist[sink];
    for (std::size_t c : finalized) {
      const double delta = big_d - dist[c];
      v[c] -= delta;
      if (c != sink) u[col_match[c]] += delta;
    }
    u[s] += big_d;
    for (std::size_t c = sink;;) {
      const std::size_t r = pred[c];
      const std::size_t prev = row_match[r];
      col_match[c] = r;
      row_match[r] = c;
      if (r == s) break;
      c = prev;
    }
    for (std::size_t c : touched) {
      dist[c] = inf;
      pred[c] = npos;
      done[c] = 0;
    }
    touched.clear();
  }
  std::vector<std::size_t> out(n, npos);
  for (std::size_t r = 0; r < n; ++r) out[r] = row_match[r] < n_cols ? row_match[r] : npos;
  return out;
}

std::size_t find_root(std::vector<std::size_t>& parent, std::size_t x) {
  while (parent[x] != x) {
    parent[x] = parent[parent[x]];
    x = parent[x];
  }
  return x;
}

}  // namespace

std::vector<Point2> prepare_points(std::span<const Polyline> polylines, double step) {
  std::vector<Point2> out;
  for (const Polyline& pl : polylines) {
    const Polyline r = geometry::resample_uniform(pl, step);
    const auto pts = r.points();
    out.insert(out.end(), pts.begin(), pts.end());
  }
  return out;
}

Assignment optimal_assignment(std::span<const Point2> gen, std::span<const Point2> ref, double gate) {
  if (!(gate > 0.0)) throw InvalidArgument("optimal_assignment: gate must be positive");
  const std::size_t n = gen.size();
  const std::size_t m = ref.size();

  // Candidate pairs through a uniform grid with cell size = gate.
  auto cell_key = [gate](Point2 p) {
    const auto cx = static_cast<std::int64_t>(std::floor(p.x / gate));
    const auto cy = static_cast<std::int64_t>(std::floor(p.y / gate));
    return std::pair<std::int64_t, std::int64_t>{cx, cy};
  };
  struct KeyHash {
    std::size_t operator()(const std::pair<std::int64_t, std::int64_t>& k) const noexcept {
      return std::hash<std::int64_t>()(k.first * 73856093LL ^ k.second * 19349663LL);
    }
  };
  std::unordered_map<std::pair<std::int64_t, std::int64_t>, std::vector<std::size_t>, KeyHash> grid;
  for (std::size_t j = 0; j < m; ++j) grid[cell_key(ref[j])].push_back(j);

  std::vector<std::vector<std::pair<std::size_t, double>>> adj(n);
  std::vector<std::size_t> parent(n + m);
  std::iota(parent.begin(), parent.end(), 0);
  for (std::size_t i = 0; i < n; ++i) {
    const auto [cx, cy] = cell_key(gen[i]);
    for (std::int64_t dy = -1; dy <= 1; ++dy) {
      for (std::int64_t dx = -1; dx <= 1; ++dx) {
        const auto it = grid.find({cx + dx, cy + dy});
        if (it == grid.end()) continue;
        for (std::size_t j : it->second) {
          const double d = distance(gen[i], ref[j]);
          if (d > gate) continue;
          adj[i].push_back({j, d});
          const std::size_t a = find_root(parent, i);
          const std::size_t b = find_root(parent, n + j);
          if (a != b) parent[a] = b;
        }
      }
    }
    std::sort(adj[i].begin(), adj[i].end());
  }

  // Solve each connected component of the gate graph on its own.
  std::unordered_map<std::size_t, std::vector<std::size_t>> block_rows;
  std::vector<std::size_t> roots;
  for (std::size_t i = 0; i < n; ++i) {
    if (adj[i].empty()) continue;
    const std::size_t r = find_root(parent, i);
    auto& rows = block_rows[r];
    if (rows.empty()) roots.push_back(r);
    rows.push_back(i);
  }

  Assignment out;
  for (std::size_t root : roots) {
    const std::vector<std::size_t>& rows = block_rows[root];
    std::unordered_map<std::size_t, std::size_t> col_index;
    std::vector<std::size_t> cols;
    for (std::size_t i : rows) {
      for (const auto& [j, d] : adj[i]) {
        if (col_index.emplace(j, cols.size()).second) cols.push_back(j);
      }
    }
    const double offset = gate * static_cast<double>(std::min(rows.size(), cols.size()) + 1);
    std::vector<std::vector<Edge>> block(rows.size());
    for (std::size_t r = 0; r < rows.size(); ++r) {
      for (const auto& [j, d] : adj[rows[r]]) block[r].push_back({col_index[j], d - offset, d});
    }
    const std::vector<std::size_t> match = solve_block(block, cols.size());
    for (std::size_t r = 0; r < rows.size(); ++r) {
      if (match[r] == std::numeric_limits<std::size_t>::max()) continue;
      const std::size_t j = cols[match[r]];
      out.pairs.push_back({rows[r], j, distance(gen[rows[r]], ref[j])});
    }
  }
  std::sort(out.pairs.begin(), out.pairs.end(),
            [](const MatchPair& a, const MatchPair& b) { return a.generated < b.generated; });
  return out;
}

MatchReport precision_recall(const Assignment& a, std::size_t n_gen, std::size_t n_ref) {
  const std::size_t matched = a.pairs.size();
  if (matched > n_gen || matched > n_ref) {
    throw InvalidArgument("precision_recall: more matches than points");
  }
  MatchReport r;
  r.matched = matched;
  r.generated_points = n_gen;
  r.reference_points = n_ref;
  r.precision = n_gen == 0 ? 1.0 : static_cast<double>(matched) / static_cast<double>(n_gen);
  r.recall = n_ref == 0 ? 1.0 : static_cast<double>(matched) / static_cast<double>(n_ref);
  if (matched > 0) {
    double sq = 0.0;
    for (const MatchPair& p : a.pairs) sq += p.distance * p.distance;
    r.mean_match_distance = a.total_distance() / static_cast<double>(matched);
    r.rmse = std::sqrt(sq / static_cast<double>(matched));
  }
  return r;
}

std::map<std::string, std::vector<Polyline>> evaluation_polylines(const HdMap& map) {
  std::map<std::string, std::vector<Polyline>> out;
  for (const auto& [id, ls] : map.linestrings) {
    const auto type = ls.tags.find("type");
    std::string category = type == ls.tags.end() ? "untyped" : type->second;
    if (category == "line_thin" || category == "line_thick") {
      const auto sub = ls.tags.find("subtype");
      category = sub == ls.tags.end() ? "solid" : sub->second;
    }
    std::vector<Point2> pts = map.geometry(ls);
    bool distinct = false;
    for (const Point2& p : pts) distinct = distinct || p != pts.front();
    if (!distinct) continue;
    out[category].emplace_back(std::move(pts), Unit::kMetre, false);
  }
  return out;
}

EvaluationResult evaluate_maps(const HdMap& generated, const HdMap& reference, double step,
                               double gate) {
  const auto gen = evaluation_polylines(generated);
  const auto ref = evaluation_polylines(reference);
  std::vector<Polyline> all_gen, all_ref;
  for (const auto& [k, v] : gen) all_gen.insert(all_gen.end(), v.begin(), v.end());
  for (const auto& [k, v] : ref) all_ref.insert(all_ref.end(), v.begin(), v.end());
  const std::vector<Point2> gp = prepare_points(all_gen, step);
  const std::vector<Point2> rp = prepare_points(all_ref, step);

  EvaluationResult result;
  result.report = precision_recall(optimal_assignment(gp, rp, gate), gp.size(), rp.size());

  std::set<std::string> classes;
  for (const auto& [k, v] : gen) classes.insert(k);
  for (const auto& [k, v] : ref) classes.insert(k);
  for (const std::string& c : classes) {
    const auto gi = gen.find(c);
    const auto ri = ref.find(c);
    const std::vector<Point2> g =
        gi == gen.end() ? std::vector<Point2>{} : prepare_points(gi->second, step);
    const std::vector<Point2> r =
        ri == ref.end() ? std::vector<Point2>{} : prepare_points(ri->second, step);
    ClassCounts counts;
    counts.generated_points = g.size();
    counts.reference_points = r.size();
    counts.matched = optimal_assignment(g, r, gate).pairs.size();
    result.per_class[c] = counts;
  }
  return result;
}

std::string to_json(const EvaluationResult& result) {
  const MatchReport& r = result.report;
  nlohmann::ordered_json j;
  j["precision"] = r.precision;
  j["recall"] = r.recall;
  j["matched"] = r.matched;
  j["generated_points"] = r.generated_points;
  j["reference_points"] = r.reference_points;
  j["mean_match_distance"] = r.mean_match_distance;
  j["rmse"] = r.rmse;
  nlohmann::ordered_json per = nlohmann::ordered_json::object();
  for (const auto& [name, c] : result.per_class) {
    per[name] = {{"generated_points", c.generated_points},
                 {"reference_points", c.reference_points},
                 {"matched", c.matched}};
  }
  j["per_class"] = per;
  return j.dump(2) + "\n";
}

}  // namespace evaluation
}  // namespace hdmap
