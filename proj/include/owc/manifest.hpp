#pragma once

#include <sstream>
#include <stdexcept>
#include <string>

#include "json.hpp"
#include "owc/pon.hpp"

namespace owc {

// Topology manifest. Schema: {name, n_wavelengths, rate_gbps, olt_id,
// ap_ids, awgr_sizes: [[id,N]...], nodes: [{id,kind,ports,label}...],
// edges: [{a,port_a,b,port_b,wavelengths,capacity_gbps}...]}.
inline nlohmann::json topology_to_json(const Topology& t) {
  nlohmann::json j;
  j["name"] = t.name;
  j["n_wavelengths"] = t.n_wavelengths;
  j["rate_gbps"] = t.rate_gbps;
  j["olt_id"] = t.olt_id;
  j["ap_ids"] = t.ap_ids;
  j["awgr_sizes"] = nlohmann::json::array();
  for (const auto& [id, n] : t.awgr_size) {
    j["awgr_sizes"].push_back({id, n});
  }
  j["nodes"] = nlohmann::json::array();
  for (const auto& n : t.nodes) {
    j["nodes"].push_back({{"id", n.id},
                          {"kind", node_kind_name(n.kind)},
                          {"ports", n.ports},
                          {"label", n.label}});
  }
  j["edges"] = nlohmann::json::array();
  for (const auto& e : t.edges) {
    j["edges"].push_back({{"a", e.a},
                          {"port_a", e.port_a},
                          {"b", e.b},
                          {"port_b", e.port_b},
                          {"wavelengths", e.wavelengths},
                          {"capacity_gbps", e.capacity_gbps}});
  }
  return j;
}

inline Topology topology_from_json(const nlohmann::json& j) {
  Topology t;
  t.name = j.at("name").get<std::string>();
  t.n_wavelengths = j.at("n_wavelengths").get<int>();
  t.rate_gbps = j.at("rate_gbps").get<double>();
  t.olt_id = j.at("olt_id").get<int>();
  t.ap_ids = j.at("ap_ids").get<std::vector<int>>();
  for (const auto& pair : j.at("awgr_sizes")) {
    t.awgr_size[pair.at(0).get<int>()] = pair.at(1).get<int>();
  }
  for (const auto& jn : j.at("nodes")) {
    PonNode n;
    n.id = jn.at("id").get<int>();
    n.kind = node_kind_from_name(jn.at("kind").get<std::string>());
    n.ports = jn.at("ports").get<int>();
    n.label = jn.at("label").get<std::string>();
    if (n.id != static_cast<int>(t.nodes.size())) {
      throw std::invalid_argument("topology_from_json: node ids must be dense");
    }
    t.nodes.push_back(n);
  }
  for (const auto& je : j.at("edges")) {
    PonEdge e;
    e.a = je.at("a").get<int>();
    e.port_a = je.at("port_a").get<int>();
    e.b = je.at("b").get<int>();
    e.port_b = je.at("port_b").get<int>();
    e.wavelengths = je.at("wavelengths").get<std::uint32_t>();
    e.capacity_gbps = je.at("capacity_gbps").get<double>();
    t.edges.push_back(e);
  }
  return t;
}

inline std::string resilience_to_csv(const ResilienceReport& rep) {
  std::ostringstream os;
  os << "topology,failed_node,kind,label,n_disconnected,disconnected_aps\n";
  for (const auto& r : rep.records) {
    os << rep.topology_name << ',' << r.failed_node << ',' << node_kind_name(r.kind)
       << ',' << r.label << ',' << r.disconnected_aps.size() << ',';
    for (std::size_t i = 0; i < r.disconnected_aps.size(); ++i) {
      if (i) os << ';';
      os << r.disconnected_aps[i];
    }
    os << '\n';
  }
  return os.str();
}

}  // namespace owc
