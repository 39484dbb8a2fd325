#pragma once

#include <algorithm>
#include <bit>
#include <cstddef>
#include <cstdint>
#include <deque>
#include <functional>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

namespace owc {

enum class NodeKind { ap, coupler, awgr, awg, olt, sw };

inline std::string node_kind_name(NodeKind k) {
  switch (k) {
    case NodeKind::ap: return "ap";
    case NodeKind::coupler: return "coupler";
    case NodeKind::awgr: return "awgr";
    case NodeKind::awg: return "awg";
    case NodeKind::olt: return "olt";
    case NodeKind::sw: return "switch";
  }
  return "?";
}

inline NodeKind node_kind_from_name(const std::string& s) {
  if (s == "ap") return NodeKind::ap;
  if (s == "coupler") return NodeKind::coupler;
  if (s == "awgr") return NodeKind::awgr;
  if (s == "awg") return NodeKind::awg;
  if (s == "olt") return NodeKind::olt;
  if (s == "switch") return NodeKind::sw;
  throw std::invalid_argument("unknown node kind: " + s);
}

struct PonNode {
  int id = 0;
  NodeKind kind = NodeKind::ap;
  int ports = 2;
  std::string label;
};

// Undirected fiber link. Ports only constrain routing at AWGR endpoints.
struct PonEdge {
  int a = 0;
  int port_a = 0;
  int b = 0;
  int port_b = 0;
  std::uint32_t wavelengths = 0;  // bitmask
  double capacity_gbps = 0.0;
};

// Cyclic AWGR routing: input port i with wavelength w exits port (i+w) mod N.
inline int awgr_output_port(int input_port, int wavelength, int size) {
  if (input_port < 0 || input_port >= size || wavelength < 0 || wavelength >= size) {
    throw std::out_of_range("awgr_output_port: index out of range");
  }
  return (input_port + wavelength) % size;
}

struct Topology {
  std::string name;
  std::vector<PonNode> nodes;
  std::vector<PonEdge> edges;
  std::vector<int> ap_ids;
  int olt_id = -1;
  std::map<int, int> awgr_size;  // awgr node id -> N
  int n_wavelengths = 4;
  double rate_gbps = 10.0;

  const PonNode& node(int id) const {
    if (id < 0 || id >= static_cast<int>(nodes.size())) {
      throw std::out_of_range("Topology: unknown node id " + std::to_string(id));
    }
    return nodes[static_cast<std::size_t>(id)];
  }

  int add_node(NodeKind kind, int ports, const std::string& label) {
    const int id = static_cast<int>(nodes.size());
    nodes.push_back({id, kind, ports, label});
    return id;
  }

  void add_edge(int a, int port_a, int b, int port_b, std::uint32_t wavelengths) {
    PonEdge e{a, port_a, b, port_b, wavelengths, 0.0};
    e.capacity_gbps = static_cast<double>(std::popcount(wavelengths)) * rate_gbps;
    edges.push_back(e);
  }

  std::uint32_t all_wavelengths() const {
    return (n_wavelengths >= 32) ? 0xffffffffu : ((1u << n_wavelengths) - 1u);
  }

  // adjacency: per node, (edge index, true when node is endpoint a)
  std::vector<std::vector<std::pair<int, bool>>> adjacency() const {
    std::vector<std::vector<std::pair<int, bool>>> adj(nodes.size());
    for (int e = 0; e < static_cast<int>(edges.size()); ++e) {
      adj[static_cast<std::size_t>(edges[static_cast<std::size_t>(e)].a)].push_back({e, true});
      adj[static_cast<std::size_t>(edges[static_cast<std::size_t>(e)].b)].push_back({e, false});
    }
    return adj;
  }
};

// --- builders ----------------------------------------------------------

// AWGR-based PON: two AWGRs, one coupler per AP set, OLT dual-homed, and
// passive multi-hop glue (one splitter per set feeding a central AWG
// interconnect) so every AP has a second, node-disjoint route. The
// interconnect fan-out default (2 fibers per set splitter) together with
// the dual-homed OLT realizes a 200 Gbps minimum bisection at the default
// shape; the manifest records the chosen fan-out.
inline Topology build_awgr_pon(int n_aps = 8, int n_sets = 4, int awgr_size = 4,
                               double rate_gbps = 10.0, int n_wavelengths = 4,
                               int interconnect_fibers = 2) {
  if (n_sets <= 0 || n_aps % n_sets != 0) {
    throw std::invalid_argument("build_awgr_pon: n_aps must divide into n_sets");
  }
  if (n_sets % 2 != 0 || n_sets / 2 + 1 > awgr_size) {
    throw std::invalid_argument("build_awgr_pon: AWGR too small for coupler/OLT ports");
  }
  Topology t;
  t.name = "awgr_pon";
  t.n_wavelengths = n_wavelengths;
  t.rate_gbps = rate_gbps;
  const int aps_per_set = n_aps / n_sets;
  const std::uint32_t all = t.all_wavelengths();

  for (int i = 0; i < n_aps; ++i) {
    t.ap_ids.push_back(t.add_node(NodeKind::ap, 2, "ap" + std::to_string(i)));
  }
  std::vector<int> couplers;
  for (int s = 0; s < n_sets; ++s) {
    couplers.push_back(t.add_node(NodeKind::coupler, aps_per_set + 1,
                                  "coupler" + std::to_string(s)));
  }
  const int awgr0 = t.add_node(NodeKind::awgr, awgr_size, "awgr0");
  const int awgr1 = t.add_node(NodeKind::awgr, awgr_size, "awgr1");
  t.awgr_size[awgr0] = awgr_size;
  t.awgr_size[awgr1] = awgr_size;
  // multi-hop glue: one passive splitter per set, all joined by an AWG
  std::vector<int> splitters;
  for (int s = 0; s < n_sets; ++s) {
    splitters.push_back(t.add_node(NodeKind::awg, aps_per_set + interconnect_fibers,
                                   "splitter" + std::to_string(s)));
  }
  const int interconnect = t.add_node(NodeKind::awg, n_sets * interconnect_fibers,
                                      "interconnect_awg");
  t.olt_id = t.add_node(NodeKind::olt, 2, "olt");

  for (int i = 0; i < n_aps; ++i) {
    const int s = i / aps_per_set;
    t.add_edge(t.ap_ids[static_cast<std::size_t>(i)], 0,
               couplers[static_cast<std::size_t>(s)], 0, all);
    t.add_edge(t.ap_ids[static_cast<std::size_t>(i)], 1,
               splitters[static_cast<std::size_t>(s)], 0, all);
  }
  // intra-set passive all-to-all between APs
  for (int s = 0; s < n_sets; ++s) {
    for (int i = 0; i < aps_per_set; ++i) {
      for (int j = i + 1; j < aps_per_set; ++j) {
        t.add_edge(t.ap_ids[static_cast<std::size_t>(s * aps_per_set + i)], 1,
                   t.ap_ids[static_cast<std::size_t>(s * aps_per_set + j)], 1, all);
      }
    }
  }
  // couplers to a unique port of one of the two AWGRs
  const int per_awgr = n_sets / 2;
  for (int s = 0; s < n_sets; ++s) {
    const int awgr = (s < per_awgr) ? awgr0 : awgr1;
    t.add_edge(couplers[static_cast<std::size_t>(s)], 0, awgr, s % per_awgr, all);
  }
  // OLT dual-homed to both AWGRs
  t.add_edge(t.olt_id, 0, awgr0, per_awgr, all);
  t.add_edge(t.olt_id, 0, awgr1, per_awgr, all);
  // set splitters joined through the central AWG
  for (int s = 0; s < n_sets; ++s) {
    for (int k = 0; k < interconnect_fibers; ++k) {
      t.add_edge(splitters[static_cast<std::size_t>(s)], 1, interconnect, 0, all);
    }
  }
  return t;
}

// Point-to-point PON: groups of subgroups, subgroup splitters, paired
// inter-group subgroup links, one OLT-facing subgroup per group,
// intra-group AP all-to-all, APs forward transit traffic.
inline Topology build_p2p_pon(int n_aps = 8, int n_groups = 2, int n_subgroups = 2,
                              double rate_gbps = 10.0, int n_wavelengths = 4) {
  if (n_groups <= 0 || n_subgroups <= 0 || n_aps % (n_groups * n_subgroups) != 0) {
    throw std::invalid_argument("build_p2p_pon: n_aps must divide into subgroups");
  }
  Topology t;
  t.name = "p2p_pon";
  t.n_wavelengths = n_wavelengths;
  t.rate_gbps = rate_gbps;
  const int per_sub = n_aps / (n_groups * n_subgroups);
  const int per_group = n_aps / n_groups;
  const std::uint32_t all = t.all_wavelengths();

  for (int i = 0; i < n_aps; ++i) {
    t.ap_ids.push_back(t.add_node(NodeKind::ap, 2, "ap" + std::to_string(i)));
  }
  std::vector<std::vector<int>> splitters(static_cast<std::size_t>(n_groups));
  for (int g = 0; g < n_groups; ++g) {
    for (int s = 0; s < n_subgroups; ++s) {
      splitters[static_cast<std::size_t>(g)].push_back(
          t.add_node(NodeKind::coupler, per_sub + n_groups,
                     "splitter_g" + std::to_string(g) + "s" + std::to_string(s)));
    }
  }
  t.olt_id = t.add_node(NodeKind::olt, n_groups, "olt");

  for (int i = 0; i < n_aps; ++i) {
    const int g = i / per_group;
    const int s = (i % per_group) / per_sub;
    t.add_edge(t.ap_ids[static_cast<std::size_t>(i)], 0,
               splitters[static_cast<std::size_t>(g)][static_cast<std::size_t>(s)], 0, all);
  }
  // intra-group passive all-to-all between APs
  for (int g = 0; g < n_groups; ++g) {
    for (int i = 0; i < per_group; ++i) {
      for (int j = i + 1; j < per_group; ++j) {
        t.add_edge(t.ap_ids[static_cast<std::size_t>(g * per_group + i)], 1,
                   t.ap_ids[static_cast<std::size_t>(g * per_group + j)], 1, all);
      }
    }
  }
  // each subgroup links to the same-index subgroup of every other group
  for (int g = 0; g < n_groups; ++g) {
    for (int g2 = g + 1; g2 < n_groups; ++g2) {
      for (int s = 0; s < n_subgroups; ++s) {
        t.add_edge(splitters[static_cast<std::size_t>(g)][static_cast<std::size_t>(s)], 0,
                   splitters[static_cast<std::size_t>(g2)][static_cast<std::size_t>(s)], 0,
                   all);
      }
    }
  }
  // dedicated OLT-facing subgroup per group
  for (int g = 0; g < n_groups; ++g) {
    t.add_edge(splitters[static_cast<std::size_t>(g)][0], 0, t.olt_id, 0, all);
  }
  return t;
}

// Electronic-switch baseline: a star per switch, switches fully
// interconnected and each uplinked to the OLT.
inline Topology build_switch_baseline(int n_aps = 8, int aps_per_switch = 4,
                                      double rate_gbps = 10.0, int n_wavelengths = 4) {
  if (aps_per_switch <= 0 || n_aps % aps_per_switch != 0) {
    throw std::invalid_argument("build_switch_baseline: n_aps must divide into switches");
  }
  Topology t;
  t.name = "switch_baseline";
  t.n_wavelengths = n_wavelengths;
  t.rate_gbps = rate_gbps;
  const int n_switches = n_aps / aps_per_switch;
  const std::uint32_t all = t.all_wavelengths();

  for (int i = 0; i < n_aps; ++i) {
    t.ap_ids.push_back(t.add_node(NodeKind::ap, 1, "ap" + std::to_string(i)));
  }
  std::vector<int> switches;
  for (int s = 0; s < n_switches; ++s) {
    switches.push_back(t.add_node(NodeKind::sw, aps_per_switch + n_switches,
                                  "switch" + std::to_string(s)));
  }
  t.olt_id = t.add_node(NodeKind::olt, n_switches, "olt");

  for (int i = 0; i < n_aps; ++i) {
    t.add_edge(t.ap_ids[static_cast<std::size_t>(i)], 0,
               switches[static_cast<std::size_t>(i / aps_per_switch)], 0, all);
  }
  for (int s = 0; s < n_switches; ++s) {
    for (int s2 = s + 1; s2 < n_switches; ++s2) {
      t.add_edge(switches[static_cast<std::size_t>(s)], 0,
                 switches[static_cast<std::size_t>(s2)], 0, all);
    }
    t.add_edge(switches[static_cast<std::size_t>(s)], 0, t.olt_id, 0, all);
  }
  return t;
}

// --- queries -----------------------------------------------------------

namespace pon_detail {

inline bool is_active(NodeKind k) {
  return k == NodeKind::ap || k == NodeKind::olt || k == NodeKind::sw;
}

}  // namespace pon_detail

// Wavelength-feasible reachability avoiding failed nodes. Active nodes
// (APs, OLT, switches) may retune between hops; passive couplers and the
// AWG interconnect preserve the wavelength; AWGRs additionally enforce the
// cyclic port rule.
inline bool reachable(const Topology& t, int src, int dst, const std::set<int>& failed) {
  t.node(src);
  t.node(dst);
  if (failed.count(src) || failed.count(dst)) {
    throw std::invalid_argument("reachable: src/dst must be alive");
  }
  if (src == dst) return true;
  const auto adj = t.adjacency();
  const int W = t.n_wavelengths;

  // state: (edge, direction, wavelength); direction true = a->b
  std::vector<std::uint8_t> visited(t.edges.size() * 2 * static_cast<std::size_t>(W), 0);
  const auto state_id = [&](int e, bool dir, int w) {
    return (static_cast<std::size_t>(e) * 2 + (dir ? 1 : 0)) * static_cast<std::size_t>(W) + w;
  };
  std::deque<std::tuple<int, bool, int>> queue;

  const auto try_push = [&](int e, bool dir, int w) {
    const auto& edge = t.edges[static_cast<std::size_t>(e)];
    if (!(edge.wavelengths & (1u << w))) return;
    const int head = dir ? edge.b : edge.a;
    if (failed.count(head)) return;
    const auto sid = state_id(e, dir, w);
    if (visited[sid]) return;
    visited[sid] = 1;
    queue.emplace_back(e, dir, w);
  };

  for (const auto& [e, am_a] : adj[static_cast<std::size_t>(src)]) {
    for (int w = 0; w < W; ++w) try_push(e, am_a, w);
  }
  while (!queue.empty()) {
    const auto [e, dir, w] = queue.front();
    queue.pop_front();
    const auto& edge = t.edges[static_cast<std::size_t>(e)];
    const int head = dir ? edge.b : edge.a;
    const int entry_port = dir ? edge.port_b : edge.port_a;
    if (head == dst) return true;
    const NodeKind kind = t.node(head).kind;
    for (const auto& [e2, am_a] : adj[static_cast<std::size_t>(head)]) {
      const auto& next = t.edges[static_cast<std::size_t>(e2)];
      const int exit_port = am_a ? next.port_a : next.port_b;
      if (pon_detail::is_active(kind)) {
        for (int w2 = 0; w2 < W; ++w2) try_push(e2, am_a, w2);
      } else if (kind == NodeKind::awgr) {
        const int size = t.awgr_size.at(head);
        if (exit_port == awgr_output_port(entry_port, w % size, size)) {
          try_push(e2, am_a, w);
        }
      } else {
        try_push(e2, am_a, w);
      }
    }
  }
  return false;
}

namespace pon_detail {

// Enumerates wavelength-feasible simple paths src->dst, collecting the
// sets of intermediate nodes. Deduplicated and pruned of supersets.
inline std::vector<std::set<int>> simple_path_interiors(const Topology& t, int src, int dst,
                                                        std::size_t max_paths = 200000) {
  const auto adj = t.adjacency();
  const int W = t.n_wavelengths;
  std::set<std::set<int>> interiors;
  std::vector<std::uint8_t> on_path(t.nodes.size(), 0);
  std::vector<int> path_nodes;
  std::size_t expansions = 0;

  // walk(node, wavelength or -1 for "fresh", entry_port)
  const std::function<void(int, int, int)> walk = [&](int node, int wl, int entry_port) {
    if (++expansions > max_paths * 50) {
      throw std::runtime_error("simple_path_interiors: path enumeration guard tripped");
    }
    if (node == dst) {
      std::set<int> interior(path_nodes.begin(), path_nodes.end());
      interior.erase(src);
      interior.erase(dst);
      interiors.insert(std::move(interior));
      return;
    }
    if (interiors.size() > max_paths) {
      throw std::runtime_error("simple_path_interiors: too many paths");
    }
    const NodeKind kind = t.node(node).kind;
    for (const auto& [e, am_a] : adj[static_cast<std::size_t>(node)]) {
      const auto& edge = t.edges[static_cast<std::size_t>(e)];
      const int nxt = am_a ? edge.b : edge.a;
      const int exit_port = am_a ? edge.port_a : edge.port_b;
      const int next_entry = am_a ? edge.port_b : edge.port_a;
      if (on_path[static_cast<std::size_t>(nxt)]) continue;
      std::vector<int> wl_choices;
      if (node == src || is_active(kind)) {
        for (int w2 = 0; w2 < W; ++w2) {
          if (edge.wavelengths & (1u << w2)) wl_choices.push_back(w2);
        }
      } else if (kind == NodeKind::awgr) {
        const int size = t.awgr_size.at(node);
        if (exit_port == awgr_output_port(entry_port, wl % size, size) &&
            (edge.wavelengths & (1u << wl))) {
          wl_choices.push_back(wl);
        }
      } else {
        if (edge.wavelengths & (1u << wl)) wl_choices.push_back(wl);
      }
      for (int w2 : wl_choices) {
        on_path[static_cast<std::size_t>(nxt)] = 1;
        path_nodes.push_back(nxt);
        walk(nxt, w2, next_entry);
        path_nodes.pop_back();
        on_path[static_cast<std::size_t>(nxt)] = 0;
      }
    }
  };
  on_path[static_cast<std::size_t>(src)] = 1;
  walk(src, -1, -1);

  // drop strict supersets: they can never help a disjoint packing
  std::vector<std::set<int>> result;
  for (const auto& s : interiors) {
    bool dominated = false;
    for (const auto& o : interiors) {
      if (&o != &s && std::includes(s.begin(), s.end(), o.begin(), o.end()) && o != s) {
        dominated = true;
        break;
      }
    }
    if (!dominated) result.push_back(s);
  }
  return result;
}

}  // namespace pon_detail

// Maximum number of node-disjoint wavelength-feasible paths (interior
// nodes pairwise disjoint). Exact via path enumeration and packing; the
// desk-scale topologies stay tiny.
inline int disjoint_paths(const Topology& t, int src, int dst) {
  if (src == dst) throw std::invalid_argument("disjoint_paths: src == dst");
  const auto interiors = pon_detail::simple_path_interiors(t, src, dst);
  int best = 0;
  std::vector<std::uint8_t> used(t.nodes.size(), 0);
  const std::function<void(std::size_t, int)> pick = [&](std::size_t i, int count) {
    best = std::max(best, count);
    if (i >= interiors.size()) return;
    if (count + static_cast<int>(interiors.size() - i) <= best) return;
    for (std::size_t j = i; j < interiors.size(); ++j) {
      bool clash = false;
      for (int n : interiors[j]) {
        if (used[static_cast<std::size_t>(n)]) {
          clash = true;
          break;
        }
      }
      if (clash) continue;
      for (int n : interiors[j]) used[static_cast<std::size_t>(n)] = 1;
      pick(j + 1, count + 1);
      for (int n : interiors[j]) used[static_cast<std::size_t>(n)] = 0;
    }
  };
  pick(0, 0);
  return best;
}

// Minimum over balanced AP bipartitions of the capacity crossing the cut.
// Non-AP nodes join the side holding the majority of their already-placed
// neighbors (synchronous rounds, ties to side A); crossing capacity is the
// sum of capacities of edges with endpoints on opposite sides.
inline double bisection_bandwidth(const Topology& t) {
  const int n_aps = static_cast<int>(t.ap_ids.size());
  if (n_aps % 2 != 0 || n_aps == 0) {
    throw std::invalid_argument("bisection_bandwidth: AP count must be even and positive");
  }
  const int half = n_aps / 2;
  double best = -1.0;

  std::vector<int> pick(static_cast<std::size_t>(half) - 1);
  // ap_ids[0] pinned to side A; choose the remaining half-1 members
  const std::function<void(int, int)> choose = [&](int start, int depth) {
    if (depth == half - 1) {
      std::vector<int> side(t.nodes.size(), -1);  // 0 = A, 1 = B
      for (int ap : t.ap_ids) side[static_cast<std::size_t>(ap)] = 1;
      side[static_cast<std::size_t>(t.ap_ids[0])] = 0;
      for (int idx : pick) side[static_cast<std::size_t>(t.ap_ids[static_cast<std::size_t>(idx)])] = 0;

      const auto adj = t.adjacency();
      bool progressed = true;
      while (progressed) {
        progressed = false;
        std::vector<int> next = side;
        for (const auto& n : t.nodes) {
          if (side[static_cast<std::size_t>(n.id)] != -1) continue;
          int votes_a = 0;
          int votes_b = 0;
          for (const auto& [e, am_a] : adj[static_cast<std::size_t>(n.id)]) {
            const auto& edge = t.edges[static_cast<std::size_t>(e)];
            const int other = am_a ? edge.b : edge.a;
            const int s = side[static_cast<std::size_t>(other)];
            if (s == 0) ++votes_a;
            if (s == 1) ++votes_b;
          }
          if (votes_a + votes_b == 0) continue;
          next[static_cast<std::size_t>(n.id)] = (votes_b > votes_a) ? 1 : 0;
          progressed = true;
        }
        side = next;
      }
      double crossing = 0.0;
      for (const auto& e : t.edges) {
        const int sa = side[static_cast<std::size_t>(e.a)];
        const int sb = side[static_cast<std::size_t>(e.b)];
        if (sa != -1 && sb != -1 && sa != sb) crossing += e.capacity_gbps;
      }
      if (best < 0.0 || crossing < best) best = crossing;
      return;
    }
    for (int i = start; i <= n_aps - (half - 1 - depth); ++i) {
      pick[static_cast<std::size_t>(depth)] = i;
      choose(i + 1, depth + 1);
    }
  };
  if (half == 1) {
    pick.clear();
    choose(1, 0);
  } else {
    choose(1, 0);
  }
  return best;
}

// --- failure sweeps ----------------------------------------------------

struct FailureRecord {
  int failed_node = -1;
  NodeKind kind = NodeKind::ap;
  std::string label;
  std::vector<int> disconnected_aps;  // alive APs that lost the OLT
};

struct ResilienceReport {
  std::string topology_name;
  std::vector<FailureRecord> records;
  double ap_to_olt_survival_fraction = 1.0;
  double ap_pair_survival_fraction = 1.0;
  int max_disconnected = 0;
};

inline ResilienceReport failure_sweep(const Topology& t,
                                      const std::vector<NodeKind>& failure_kinds) {
  ResilienceReport rep;
  rep.topology_name = t.name;
  double olt_surv_sum = 0.0;
  double pair_surv_sum = 0.0;
  int n_cases = 0;

  for (const auto& n : t.nodes) {
    if (std::find(failure_kinds.begin(), failure_kinds.end(), n.kind) == failure_kinds.end())
      continue;
    if (n.id == t.olt_id) continue;
    const std::set<int> failed{n.id};
    FailureRecord rec;
    rec.failed_node = n.id;
    rec.kind = n.kind;
    rec.label = n.label;
    std::vector<int> alive_aps;
    for (int ap : t.ap_ids) {
      if (ap != n.id) alive_aps.push_back(ap);
    }
    for (int ap : alive_aps) {
      if (!reachable(t, ap, t.olt_id, failed)) rec.disconnected_aps.push_back(ap);
    }
    const double alive = static_cast<double>(alive_aps.size());
    olt_surv_sum += alive > 0 ? (alive - rec.disconnected_aps.size()) / alive : 1.0;
    int pairs = 0;
    int ok_pairs = 0;
    for (std::size_t i = 0; i < alive_aps.size(); ++i) {
      for (std::size_t j = i + 1; j < alive_aps.size(); ++j) {
        ++pairs;
        if (reachable(t, alive_aps[i], alive_aps[j], failed)) ++ok_pairs;
      }
    }
    pair_surv_sum += pairs > 0 ? static_cast<double>(ok_pairs) / pairs : 1.0;
    rep.max_disconnected =
        std::max(rep.max_disconnected, static_cast<int>(rec.disconnected_aps.size()));
    rep.records.push_back(std::move(rec));
    ++n_cases;
  }
  if (n_cases > 0) {
    rep.ap_to_olt_survival_fraction = olt_surv_sum / n_cases;
    rep.ap_pair_survival_fraction = pair_surv_sum / n_cases;
  }
  return rep;
}

}  // namespace owc
