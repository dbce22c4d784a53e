#pragma once

// Oriented link diagrams given as planar-diagram (PD) codes.
//
// Document grammar, one statement per line, '#' starts a comment:
//
//   X <e1> <e2> <e3> <e4> over=<e>   crossing; edges counterclockwise from the
//                                    incoming under-edge, <e> is the incoming
//                                    over-edge (must be e2 or e4)
//   region <id> <edge> left|right    optional: name the region on the given
//                                    side of a directed edge
//   arc <id> <edge>                  optional: name the arc containing <edge>
//
// Without naming statements regions and arcs are numbered canonically: arcs
// by their lowest edge id, regions by the sorted list of their incident edge
// ids. Naming statements, when present, must name every region (or arc)
// exactly once with ids 1..n.
//
// All indices in the C++ API are 0-based; ids in documents and reports are
// 1-based (index + 1).

#include <algorithm>
#include <array>
#include <charconv>
#include <cstddef>
#include <map>
#include <numeric>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "optlim/error.hpp"

namespace optlim {

struct CrossingPD {
  int id = 0;                   // 1-based, in document order
  std::array<int, 4> edges{};  // counterclockwise from the incoming under-edge
  int over_incoming = 0;

  int over_in_position() const { return edges[1] == over_incoming ? 1 : 3; }
  int over_out_position() const { return 4 - over_in_position(); }
};

// Corner `position` of a crossing is the sector between edge positions
// `position` and `position + 1` (counterclockwise).
struct Corner {
  int crossing = 0;
  int position = 0;
  friend bool operator==(const Corner&, const Corner&) = default;
};

struct Region {
  std::vector<Corner> corners;
  std::vector<int> edges;  // sorted, unique
};

struct Arc {
  std::vector<int> edges;  // in the direction of the orientation
  int tail_crossing = -1;  // crossing the arc emerges from (under-pass), -1 if closed
  int head_crossing = -1;  // crossing the arc ends at (under-pass), -1 if closed
  bool closed() const { return tail_crossing < 0; }
};

// Regions around a crossing, in the frame where both strands point downward:
// a bottom, b right, c top, d left.
struct Quadrants {
  int a = 0, b = 0, c = 0, d = 0;
  friend bool operator==(const Quadrants&, const Quadrants&) = default;
};

struct EdgeInfo {
  int tail_crossing = -1, tail_position = -1;
  int head_crossing = -1, head_position = -1;
  int left_region = -1, right_region = -1;  // relative to the edge direction
  int arc = -1;
  int component = -1;
};

struct CrossingArcs {
  int over = -1;
  int under_in = -1;
  int under_out = -1;
};

enum class Side { left, right };

struct RegionLabel {
  int id = 0;
  int edge = 0;
  Side side = Side::left;
};

struct ArcLabel {
  int id = 0;
  int edge = 0;
};

class LinkDiagram {
 public:
  std::size_t n_crossings() const { return crossings_.size(); }
  std::size_t n_regions() const { return regions_.size(); }
  std::size_t n_arcs() const { return arcs_.size(); }
  std::size_t n_components() const { return n_components_; }
  // Connected pieces of the projection (split components).
  std::size_t n_pieces() const { return n_pieces_; }

  const std::vector<CrossingPD>& crossings() const { return crossings_; }
  const std::vector<Region>& regions() const { return regions_; }
  const std::vector<Arc>& arcs() const { return arcs_; }
  const std::map<int, EdgeInfo>& edges() const { return edges_; }
  const EdgeInfo& edge(int id) const { return edges_.at(id); }

  int sign(std::size_t crossing) const { return signs_.at(crossing); }
  const Quadrants& quadrants(std::size_t crossing) const { return quadrants_.at(crossing); }
  const CrossingArcs& crossing_arcs(std::size_t crossing) const { return crossing_arcs_.at(crossing); }
  int corner_region(std::size_t crossing, int position) const {
    return corner_region_.at(crossing * 4 + static_cast<std::size_t>(position));
  }

  static LinkDiagram build(std::vector<CrossingPD> crossings, const std::vector<RegionLabel>& region_labels = {},
                           const std::vector<ArcLabel>& arc_labels = {});

 private:
  std::vector<CrossingPD> crossings_;
  std::vector<Region> regions_;
  std::vector<Arc> arcs_;
  std::map<int, EdgeInfo> edges_;
  std::vector<int> signs_;
  std::vector<Quadrants> quadrants_;
  std::vector<CrossingArcs> crossing_arcs_;
  std::vector<int> corner_region_;
  std::size_t n_components_ = 0;
  std::size_t n_pieces_ = 0;
};

namespace detail {

class UnionFind {
 public:
  explicit UnionFind(std::size_t n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), std::size_t{0}); }
  std::size_t find(std::size_t x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }
  void unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a != b) parent_[std::max(a, b)] = std::min(a, b);
  }

 private:
  std::vector<std::size_t> parent_;
};

inline std::string join_ids(const std::vector<int>& ids) {
  std::ostringstream os;
  for (std::size_t i = 0; i < ids.size(); ++i) os << (i ? ", " : "") << ids[i];
  return os.str();
}

// Returns new_index[old_index] built from user labels (ids 1..n, each once).
inline std::vector<int> label_permutation(std::size_t n, const std::vector<std::pair<int, int>>& id_and_index,
                                   const char* what) {
  if (id_and_index.size() != n)
    throw parse_error("labels", std::string("expected ") + std::to_string(n) + " " + what + " labels, got " +
                                    std::to_string(id_and_index.size()));
  std::vector<int> new_index(n, -1);
  std::vector<bool> used(n, false);
  for (auto [id, index] : id_and_index) {
    if (id < 1 || static_cast<std::size_t>(id) > n)
      throw parse_error("labels", std::string(what) + " label id " + std::to_string(id) + " out of range");
    if (used[static_cast<std::size_t>(id - 1)])
      throw parse_error("labels", std::string(what) + " label id " + std::to_string(id) + " used twice");
    if (new_index[static_cast<std::size_t>(index)] >= 0)
      throw parse_error("labels", std::string(what) + " labels " + std::to_string(new_index[index] + 1) + " and " +
                                      std::to_string(id) + " name the same " + what);
    used[static_cast<std::size_t>(id - 1)] = true;
    new_index[static_cast<std::size_t>(index)] = id - 1;
  }
  return new_index;
}

}  // namespace detail

inline LinkDiagram LinkDiagram::build(std::vector<CrossingPD> crossings, const std::vector<RegionLabel>& region_labels,
                                      const std::vector<ArcLabel>& arc_labels) {
  if (crossings.empty())
    throw parse_error("trivial_component", "diagram has no crossings: a crossingless component is a trivial knot");

  LinkDiagram D;
  const std::size_t n = crossings.size();

  for (const auto& c : crossings) {
    for (int e : c.edges)
      if (e <= 0) throw parse_error("syntax", "crossing " + std::to_string(c.id) + ": edge ids must be positive");
    if (c.over_incoming != c.edges[1] && c.over_incoming != c.edges[3])
      throw parse_error("syntax", "crossing " + std::to_string(c.id) + ": over=" + std::to_string(c.over_incoming) +
                                      " is not an over-strand edge (positions 2 and 4)");
  }

  // Edge endpoints.
  std::map<int, std::vector<std::pair<int, int>>> occurrences;
  for (std::size_t x = 0; x < n; ++x)
    for (int p = 0; p < 4; ++p) occurrences[crossings[x].edges[p]].emplace_back(static_cast<int>(x), p);
  for (const auto& [e, occ] : occurrences)
    if (occ.size() != 2)
      throw parse_error("edge_pairing", "edge " + std::to_string(e) + " appears " + std::to_string(occ.size()) +
                                            " times; every edge must appear exactly twice");

  for (const auto& [e, occ] : occurrences) {
    EdgeInfo info;
    for (auto [x, p] : occ) {
      const auto& c = crossings[static_cast<std::size_t>(x)];
      const bool incoming = p == 0 || p == c.over_in_position();
      if (incoming) {
        if (info.head_crossing >= 0)
          throw parse_error("orientation", "edge " + std::to_string(e) + " enters two crossings");
        info.head_crossing = x;
        info.head_position = p;
      } else {
        if (info.tail_crossing >= 0)
          throw parse_error("orientation", "edge " + std::to_string(e) + " leaves two crossings");
        info.tail_crossing = x;
        info.tail_position = p;
      }
    }
    D.edges_.emplace(e, info);
  }

  // Faces: glue corners across each edge.
  const auto corner_id = [](int x, int p) { return static_cast<std::size_t>(x) * 4 + static_cast<std::size_t>((p + 4) % 4); };
  detail::UnionFind faces(4 * n);
  detail::UnionFind pieces(n);
  for (const auto& [e, occ] : occurrences) {
    auto [x, i] = occ[0];
    auto [y, j] = occ[1];
    faces.unite(corner_id(x, i), corner_id(y, j - 1));
    faces.unite(corner_id(x, i - 1), corner_id(y, j));
    pieces.unite(static_cast<std::size_t>(x), static_cast<std::size_t>(y));
  }

  // Planarity per piece: F = V + 2.
  std::map<std::size_t, std::size_t> piece_crossings;
  std::map<std::size_t, std::set<std::size_t>> piece_faces;
  for (std::size_t x = 0; x < n; ++x) {
    const std::size_t pc = pieces.find(x);
    ++piece_crossings[pc];
    for (int p = 0; p < 4; ++p) piece_faces[pc].insert(faces.find(corner_id(static_cast<int>(x), p)));
  }
  for (const auto& [pc, count] : piece_crossings) {
    if (piece_faces[pc].size() != count + 2)
      throw parse_error("planarity", "diagram is not planar: a piece with " + std::to_string(count) +
                                         " crossings has " + std::to_string(piece_faces[pc].size()) +
                                         " faces, expected " + std::to_string(count + 2));
  }
  D.n_pieces_ = piece_crossings.size();

  // Split diagrams: pieces are drawn side by side, so one face of each piece
  // (the one with most corners, ties to lowest root) merges into a common
  // outer region.
  if (D.n_pieces_ > 1) {
    std::map<std::size_t, std::size_t> corner_count;
    for (std::size_t k = 0; k < 4 * n; ++k) ++corner_count[faces.find(k)];
    std::vector<std::size_t> outer;
    for (const auto& [pc, fs] : piece_faces) {
      std::size_t best = *fs.begin();
      for (std::size_t f : fs)
        if (corner_count[f] > corner_count[best]) best = f;
      outer.push_back(best);
    }
    for (std::size_t k = 1; k < outer.size(); ++k) faces.unite(outer[0], outer[k]);
  }

  // Collect regions and order them canonically.
  std::map<std::size_t, Region> by_root;
  for (std::size_t x = 0; x < n; ++x)
    for (int p = 0; p < 4; ++p) {
      Region& r = by_root[faces.find(corner_id(static_cast<int>(x), p))];
      r.corners.push_back({static_cast<int>(x), p});
      r.edges.push_back(crossings[x].edges[static_cast<std::size_t>(p)]);
      r.edges.push_back(crossings[x].edges[static_cast<std::size_t>((p + 1) % 4)]);
    }
  std::vector<std::pair<std::size_t, Region>> regions(by_root.begin(), by_root.end());
  for (auto& [root, r] : regions) {
    std::sort(r.edges.begin(), r.edges.end());
    r.edges.erase(std::unique(r.edges.begin(), r.edges.end()), r.edges.end());
  }
  std::sort(regions.begin(), regions.end(), [](const auto& l, const auto& r) { return l.second.edges < r.second.edges; });
  std::map<std::size_t, int> region_of_root;
  for (std::size_t k = 0; k < regions.size(); ++k) {
    region_of_root[regions[k].first] = static_cast<int>(k);
    D.regions_.push_back(std::move(regions[k].second));
  }
  D.corner_region_.resize(4 * n);
  for (std::size_t k = 0; k < 4 * n; ++k) D.corner_region_[k] = region_of_root[faces.find(k)];

  for (auto& [e, info] : D.edges_) {
    info.left_region = D.corner_region_[corner_id(info.tail_crossing, info.tail_position)];
    info.right_region = D.corner_region_[corner_id(info.tail_crossing, info.tail_position - 1)];
  }

  // Link components: follow each edge straight through its head crossing.
  const auto next_edge = [&](int e) {
    const EdgeInfo& info = D.edges_.at(e);
    return crossings[static_cast<std::size_t>(info.head_crossing)].edges[static_cast<std::size_t>((info.head_position + 2) % 4)];
  };
  std::vector<std::vector<int>> components;
  for (auto& [e, info] : D.edges_) {
    if (info.component >= 0) continue;
    const int comp = static_cast<int>(components.size());
    components.emplace_back();
    for (int f = e; D.edges_.at(f).component < 0; f = next_edge(f)) {
      D.edges_.at(f).component = comp;
      components.back().push_back(f);
    }
  }
  D.n_components_ = components.size();

  // Arcs run from one under-pass to the next.
  std::vector<Arc> arcs;
  for (std::size_t x = 0; x < n; ++x) {
    Arc arc;
    arc.tail_crossing = static_cast<int>(x);
    int e = crossings[x].edges[2];
    while (true) {
      arc.edges.push_back(e);
      const EdgeInfo& info = D.edges_.at(e);
      if (info.head_position == 0) {
        arc.head_crossing = info.head_crossing;
        break;
      }
      e = next_edge(e);
    }
    arcs.push_back(std::move(arc));
  }
  {
    std::set<int> covered;
    for (const auto& a : arcs) covered.insert(a.edges.begin(), a.edges.end());
    for (const auto& comp : components) {
      if (covered.count(comp.front())) continue;
      Arc arc;  // component without under-passes: one closed arc
      arc.edges = comp;
      arcs.push_back(std::move(arc));
    }
  }
  std::sort(arcs.begin(), arcs.end(), [](const Arc& l, const Arc& r) {
    return *std::min_element(l.edges.begin(), l.edges.end()) < *std::min_element(r.edges.begin(), r.edges.end());
  });
  D.arcs_ = std::move(arcs);

  // Optional user naming of arcs and regions.
  const auto refresh_arc_refs = [&] {
    for (std::size_t a = 0; a < D.arcs_.size(); ++a)
      for (int e : D.arcs_[a].edges) D.edges_.at(e).arc = static_cast<int>(a);
  };
  refresh_arc_refs();
  if (!arc_labels.empty()) {
    std::vector<std::pair<int, int>> pairs;
    for (const auto& l : arc_labels) {
      auto it = D.edges_.find(l.edge);
      if (it == D.edges_.end()) throw parse_error("labels", "arc label refers to unknown edge " + std::to_string(l.edge));
      pairs.emplace_back(l.id, it->second.arc);
    }
    const auto perm = detail::label_permutation(D.arcs_.size(), pairs, "arc");
    std::vector<Arc> relabeled(D.arcs_.size());
    for (std::size_t a = 0; a < D.arcs_.size(); ++a) relabeled[static_cast<std::size_t>(perm[a])] = std::move(D.arcs_[a]);
    D.arcs_ = std::move(relabeled);
    refresh_arc_refs();
  }
  if (!region_labels.empty()) {
    std::vector<std::pair<int, int>> pairs;
    for (const auto& l : region_labels) {
      auto it = D.edges_.find(l.edge);
      if (it == D.edges_.end())
        throw parse_error("labels", "region label refers to unknown edge " + std::to_string(l.edge));
      pairs.emplace_back(l.id, l.side == Side::left ? it->second.left_region : it->second.right_region);
    }
    const auto perm = detail::label_permutation(D.regions_.size(), pairs, "region");
    std::vector<Region> relabeled(D.regions_.size());
    for (std::size_t r = 0; r < D.regions_.size(); ++r)
      relabeled[static_cast<std::size_t>(perm[r])] = std::move(D.regions_[r]);
    D.regions_ = std::move(relabeled);
    for (int& r : D.corner_region_) r = perm[static_cast<std::size_t>(r)];
    for (auto& [e, info] : D.edges_) {
      info.left_region = perm[static_cast<std::size_t>(info.left_region)];
      info.right_region = perm[static_cast<std::size_t>(info.right_region)];
    }
  }

  // Trivial components: only over-passes, only under-passes, or both missing.
  for (std::size_t k = 0; k < components.size(); ++k) {
    bool has_over = false, has_under = false;
    for (int e : components[k]) {
      const EdgeInfo& info = D.edges_.at(e);
      (info.head_position == 0 ? has_under : has_over) = true;
    }
    if (!has_over || !has_under) {
      std::set<int> arc_ids;
      for (int e : components[k]) arc_ids.insert(D.edges_.at(e).arc + 1);
      throw parse_error("trivial_component",
                        "link component " + std::to_string(k + 1) + " (arcs " +
                            detail::join_ids(std::vector<int>(arc_ids.begin(), arc_ids.end())) + ") has only " +
                            (has_over ? "over" : "under") +
                            "-crossings; modify the diagram (e.g. add a kink) so it has both");
    }
  }

  D.signs_.resize(n);
  D.quadrants_.resize(n);
  D.crossing_arcs_.resize(n);
  for (std::size_t x = 0; x < n; ++x) {
    const auto& c = crossings[x];
    const auto corner = [&](int p) { return D.corner_region_[corner_id(static_cast<int>(x), p)]; };
    if (c.over_in_position() == 3) {
      D.signs_[x] = +1;
      D.quadrants_[x] = {corner(1), corner(2), corner(3), corner(0)};
    } else {
      D.signs_[x] = -1;
      D.quadrants_[x] = {corner(2), corner(3), corner(0), corner(1)};
    }
    D.crossing_arcs_[x] = {D.edges_.at(c.edges[1]).arc, D.edges_.at(c.edges[0]).arc, D.edges_.at(c.edges[2]).arc};
  }

  D.crossings_ = std::move(crossings);
  return D;
}

namespace detail {

inline std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

inline std::vector<std::string_view> split_ws(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && (s[i] == ' ' || s[i] == '\t')) ++i;
    std::size_t j = i;
    while (j < s.size() && s[j] != ' ' && s[j] != '\t') ++j;
    if (j > i) out.push_back(s.substr(i, j - i));
    i = j;
  }
  return out;
}

inline int parse_positive(std::string_view tok, std::size_t line) {
  int v = 0;
  auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc{} || ptr != tok.data() + tok.size() || v <= 0)
    throw parse_error("syntax", "line " + std::to_string(line) + ": expected a positive integer, got '" +
                                    std::string(tok) + "'");
  return v;
}

}  // namespace detail

inline LinkDiagram parse_diagram(std::string_view text) {
  std::vector<CrossingPD> crossings;
  std::vector<RegionLabel> region_labels;
  std::vector<ArcLabel> arc_labels;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto nl = text.find('\n', pos);
    std::string_view line = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = detail::trim(line);
    if (line.empty()) continue;
    const auto tok = detail::split_ws(line);
    const auto fail = [&](const std::string& msg) {
      return parse_error("syntax", "line " + std::to_string(line_no) + ": " + msg);
    };
    if (tok[0] == "X") {
      if (tok.size() != 6 || tok[5].substr(0, 5) != "over=")
        throw fail("expected 'X <e1> <e2> <e3> <e4> over=<e>'");
      CrossingPD c;
      c.id = static_cast<int>(crossings.size()) + 1;
      for (std::size_t k = 0; k < 4; ++k) c.edges[k] = detail::parse_positive(tok[k + 1], line_no);
      c.over_incoming = detail::parse_positive(tok[5].substr(5), line_no);
      crossings.push_back(c);
    } else if (tok[0] == "region") {
      if (tok.size() != 4 || (tok[3] != "left" && tok[3] != "right"))
        throw fail("expected 'region <id> <edge> left|right'");
      region_labels.push_back({detail::parse_positive(tok[1], line_no), detail::parse_positive(tok[2], line_no),
                               tok[3] == "left" ? Side::left : Side::right});
    } else if (tok[0] == "arc") {
      if (tok.size() != 3) throw fail("expected 'arc <id> <edge>'");
      arc_labels.push_back({detail::parse_positive(tok[1], line_no), detail::parse_positive(tok[2], line_no)});
    } else {
      throw fail("unknown statement '" + std::string(tok[0]) + "'");
    }
  }
  return LinkDiagram::build(std::move(crossings), region_labels, arc_labels);
}

// +1 when, with both strands pointing down, the over-strand runs from top
// right to bottom left.
inline int crossing_sign(const LinkDiagram& d, std::size_t crossing) { return d.sign(crossing); }

inline Quadrants quadrant_regions(const LinkDiagram& d, std::size_t crossing) { return d.quadrants(crossing); }

}  // namespace optlim
