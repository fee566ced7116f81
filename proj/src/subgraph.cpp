#include "perc/subgraph.hpp"

#include <cstdlib>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "perc/connectivity.hpp"
#include "perc/rng.hpp"

namespace perc {

namespace {

int to_axis0(int d, int axis1) {
  if (axis1 < 1 || axis1 > d) {
    throw std::invalid_argument("axis " + std::to_string(axis1) + " out of range for d=" + std::to_string(d));
  }
  return axis1 - 1;
}

std::uint64_t vertex_key(const Point& p) { return rng::lattice_edge_key(p, 0); }

// Parent of v in the outward random forest.
Point forest_parent(const Point& v, std::uint64_t key) {
  const int k = v.norm_inf();
  int candidates[2 * kMaxDim][2];
  int count = 0;
  for (int i = 0; i < v.d; ++i) {
    if (std::abs(v[i]) != k) continue;
    if (v[i] >= 0) candidates[count][0] = i, candidates[count++][1] = 1;
    if (v[i] <= 0) candidates[count][0] = i, candidates[count++][1] = -1;
  }
  const std::uint64_t h = rng::mix64(key ^ rng::mix64(vertex_key(v)));
  const int pick = static_cast<int>(h % static_cast<std::uint64_t>(count));
  return v.shifted(candidates[pick][0], candidates[pick][1]);
}

}  // namespace

Subgraph::Subgraph(int d, Kind kind) : d_(d), kind_(std::move(kind)) {
  if (d_ < 2 || d_ > kMaxDim) throw std::invalid_argument("subgraph dimension out of range");
  std::visit(
      [&](const auto& k) {
        using K = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<K, AxisFoliation>) {
          to_axis0(d_, k.axis);
        } else if constexpr (std::is_same_v<K, Comb>) {
          to_axis0(d_, k.spine_axis);
        } else if constexpr (std::is_same_v<K, ShiftedLines>) {
          to_axis0(d_, k.axis);
          if (k.offsets.empty()) throw std::invalid_argument("shifted_lines needs at least one offset");
        } else if constexpr (std::is_same_v<K, ExplicitEdges>) {
          if (!k.edges) throw std::invalid_argument("explicit subgraph without edges");
          if (k.edges->region().d != d_) throw std::invalid_argument("explicit subgraph dimension mismatch");
        }
      },
      kind_);
}

Subgraph Subgraph::axis_foliation(int d, int axis) { return Subgraph(d, AxisFoliation{axis}); }
Subgraph Subgraph::comb(int d, int spine_axis) { return Subgraph(d, Comb{spine_axis}); }
Subgraph Subgraph::shifted_lines(int d, int axis, std::vector<int> offsets, std::uint64_t salt) {
  return Subgraph(d, ShiftedLines{axis, std::move(offsets), salt});
}
Subgraph Subgraph::random_forest(int d, std::uint64_t seed) { return Subgraph(d, RandomForest{seed}); }
Subgraph Subgraph::explicit_edges(EdgeSet edges) {
  const int d = edges.region().d;
  return Subgraph(d, ExplicitEdges{std::make_shared<const EdgeSet>(std::move(edges))});
}

std::string Subgraph::name() const {
  return std::visit(
      [](const auto& k) -> std::string {
        using K = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<K, AxisFoliation>) return "axis_foliation";
        if constexpr (std::is_same_v<K, Comb>) return "comb";
        if constexpr (std::is_same_v<K, ShiftedLines>) return "shifted_lines";
        if constexpr (std::is_same_v<K, RandomForest>) return "random_forest";
        return "edge_list";
      },
      kind_);
}

std::optional<Box> Subgraph::support() const {
  if (const auto* e = std::get_if<ExplicitEdges>(&kind_)) return e->edges->region();
  return std::nullopt;
}

bool Subgraph::contains(const Point& a, int axis) const {
  return std::visit(
      [&](const auto& k) -> bool {
        using K = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<K, AxisFoliation>) {
          return axis == k.axis - 1;
        } else if constexpr (std::is_same_v<K, Comb>) {
          const int spine = k.spine_axis - 1;
          // Position of `axis` in the order (spine, others ascending); every
          // axis later in the order must have a zero coordinate.
          if (axis == spine) {
            for (int i = 0; i < d_; ++i)
              if (i != spine && a[i] != 0) return false;
            return true;
          }
          for (int i = axis + 1; i < d_; ++i)
            if (i != spine && a[i] != 0) return false;
          return true;
        } else if constexpr (std::is_same_v<K, ShiftedLines>) {
          const int ax = k.axis - 1;
          if (axis != ax) return false;
          Point transverse = a;
          transverse[ax] = 0;
          const std::uint64_t h = rng::combine(k.salt, vertex_key(transverse));
          const int cut = k.offsets[h % k.offsets.size()];
          return a[ax] != cut;
        } else if constexpr (std::is_same_v<K, RandomForest>) {
          const std::uint64_t key = rng::stream_key(k.seed, rng::kForestTag);
          const Point b = a.shifted(axis, 1);
          return forest_parent(a, key) == b || forest_parent(b, key) == a;
        } else {
          const Box& box = k.edges->region();
          if (!box.contains(a) || !box.contains(a.shifted(axis, 1))) return false;
          return k.edges->contains(box.edge_id(a, axis));
        }
      },
      kind_);
}

bool Subgraph::contains_edge(const Box& box, EdgeId e) const {
  const auto [a, b] = box.endpoints(e);
  return contains(a, static_cast<int>(e % box.d));
}

EdgeSet Subgraph::edges_in_region(const Box& box) const {
  if (box.d != d_) throw std::invalid_argument("region dimension differs from subgraph dimension");
  if (const auto* e = std::get_if<ExplicitEdges>(&kind_)) {
    const Box& src = e->edges->region();
    EdgeSet out(box);
    for_each_box_edge(box, [&](EdgeId id, const Point& a, int axis) {
      const Point b = a.shifted(axis, 1);
      if (src.contains(a) && src.contains(b) && e->edges->contains(src.edge_id(a, axis))) out.insert(id);
    });
    return out;
  }
  EdgeSet out(box);
  for_each_box_edge(box, [&](EdgeId id, const Point& a, int axis) {
    if (contains(a, axis)) out.insert(id);
  });
  return out;
}

bool verify_everywhere_percolating_proxy(const Subgraph& g, const Box& box) {
  const ClusterLabeling lab = label_clusters(g.edges_in_region(box));
  std::vector<char> touches(lab.cluster_count(), 0);
  for_each_box_vertex(box, [&](std::uint64_t v, const Point& p) {
    if (box.on_boundary(p)) touches[lab.cluster_of(v)] = 1;
  });
  for (char t : touches)
    if (!t) return false;
  return true;
}

nlohmann::json to_json(const Subgraph& g) {
  return std::visit(
      [&](const auto& k) -> nlohmann::json {
        using K = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<K, AxisFoliation>) {
          return {{"kind", "axis_foliation"}, {"params", {{"axis", k.axis}}}};
        } else if constexpr (std::is_same_v<K, Comb>) {
          return {{"kind", "comb"}, {"params", {{"spine_axis", k.spine_axis}}}};
        } else if constexpr (std::is_same_v<K, ShiftedLines>) {
          return {{"kind", "shifted_lines"},
                  {"params", {{"axis", k.axis}, {"offsets", k.offsets}, {"salt", k.salt}}}};
        } else if constexpr (std::is_same_v<K, RandomForest>) {
          return {{"kind", "random_forest"}, {"params", nlohmann::json::object()}, {"seed", k.seed}};
        } else {
          return {{"kind", "edge_list"}, {"params", {{"region", to_json(k.edges->region())}, {"edges", k.edges->size()}}}};
        }
      },
      g.kind());
}

Subgraph subgraph_from_json(const nlohmann::json& j, int d) {
  const std::string kind = j.at("kind").get<std::string>();
  const nlohmann::json params = j.value("params", nlohmann::json::object());
  if (kind == "axis_foliation") return Subgraph::axis_foliation(d, params.value("axis", 1));
  if (kind == "comb") return Subgraph::comb(d, params.value("spine_axis", 1));
  if (kind == "shifted_lines") {
    return Subgraph::shifted_lines(d, params.value("axis", 1),
                                   params.value("offsets", std::vector<int>{0, 3, -5, 7, -2}),
                                   params.value("salt", std::uint64_t{0}));
  }
  if (kind == "random_forest") {
    const std::uint64_t seed = j.contains("seed") ? j.at("seed").get<std::uint64_t>()
                                                  : params.value("seed", std::uint64_t{0});
    return Subgraph::random_forest(d, seed);
  }
  if (kind == "edge_list") {
    const Box region = box_from_json(params.at("region"));
    if (region.d != d) throw std::invalid_argument("edge_list region dimension mismatch");
    std::ifstream in(params.at("path").get<std::string>());
    if (!in) throw std::runtime_error("cannot open edge list " + params.at("path").get<std::string>());
    return Subgraph::explicit_edges(read_edge_list(in, region));
  }
  throw std::invalid_argument("unknown generator kind '" + kind + "'");
}

EdgeSet read_edge_list(std::istream& is, const Box& region) {
  EdgeSet out(region);
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const auto colon = line.find(':');
    if (colon == std::string::npos) throw std::runtime_error("edge list line " + std::to_string(lineno) + ": missing ':'");
    auto parse = [&](const std::string& part) {
      std::istringstream ss(part);
      Point p(region.d);
      for (int i = 0; i < region.d; ++i) {
        if (!(ss >> p[i])) throw std::runtime_error("edge list line " + std::to_string(lineno) + ": expected " +
                                                    std::to_string(region.d) + " coordinates");
      }
      std::string extra;
      if (ss >> extra) throw std::runtime_error("edge list line " + std::to_string(lineno) + ": too many coordinates");
      return p;
    };
    const Point a = parse(line.substr(0, colon));
    const Point b = parse(line.substr(colon + 1));
    if (!region.contains(a) || !region.contains(b)) {
      throw std::runtime_error("edge list line " + std::to_string(lineno) + ": endpoint outside region");
    }
    out.insert(region.edge_between(a, b));
  }
  return out;
}

void write_edge_list(std::ostream& os, const EdgeSet& edges) {
  const Box& box = edges.region();
  edges.for_each([&](EdgeId id) {
    const auto [a, b] = box.endpoints(id);
    for (int i = 0; i < box.d; ++i) os << (i ? " " : "") << a[i];
    os << " :";
    for (int i = 0; i < box.d; ++i) os << ' ' << b[i];
    os << '\n';
  });
}

std::vector<Subgraph> bundled_generators(int d) {
  return {Subgraph::axis_foliation(d, 1), Subgraph::comb(d, 1),
          Subgraph::shifted_lines(d, 1, {0, 3, -5, 7, -2, 1, 0, -1}, 0x5eed),
          Subgraph::random_forest(d, 20240917)};
}

}  // namespace perc
