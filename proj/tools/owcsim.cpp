// owcsim: trace the room channel, run assignment experiments, analyze the
// backhaul topologies, or self-check the solver against brute force.
//
// Exit codes: 0 ok, 2 config error, 3 solver guard violation,
// 4 validation/self-check failure.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "owc/allocator.hpp"
#include "owc/channel.hpp"
#include "owc/config.hpp"
#include "owc/linkmetrics.hpp"
#include "owc/manifest.hpp"
#include "owc/pon.hpp"
#include "owc/scenario.hpp"
#include "owc/util.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitGuard = 3;
constexpr int kExitValidation = 4;
constexpr const char* kVersion = "owcsim 1.0.0";

struct RunConfig {
  owc::SystemConfig system = owc::SystemConfig::table1_default();
  owc::DropPlan plan;
  std::vector<int> user_counts{1, 2, 3, 4, 5, 6, 7};
  std::vector<std::string> modes{"multi_ap", "single_ap"};
  std::vector<std::string> failures{"none", "ap1", "ap5", "ap1_and_ap5"};
};

owc::AssignMode parse_mode(const std::string& s) {
  if (s == "multi_ap") return owc::AssignMode::multi_ap;
  if (s == "single_ap") return owc::AssignMode::single_ap;
  throw std::invalid_argument("unknown mode: " + s);
}

owc::FailureScenario parse_failure(const std::string& s) {
  for (const auto& f : owc::all_failure_scenarios()) {
    if (f.name == s) return f;
  }
  throw std::invalid_argument("unknown failure scenario: " + s);
}

// Every reference-configuration value is a named key; absent keys keep the
// defaults.
RunConfig load_config(const std::string& path) {
  RunConfig rc;
  if (path.empty()) return rc;
  std::ifstream is(path);
  if (!is) throw std::invalid_argument("cannot open config: " + path);
  nlohmann::json j;
  is >> j;

  auto& sys = rc.system;
  if (j.contains("room")) {
    const auto& r = j["room"];
    sys.room.length = r.value("length_m", sys.room.length);
    sys.room.width = r.value("width_m", sys.room.width);
    sys.room.height = r.value("height_m", sys.room.height);
    sys.room.wall_ceiling_reflectance =
        r.value("wall_ceiling_reflectance", sys.room.wall_ceiling_reflectance);
    sys.room.floor_reflectance = r.value("floor_reflectance", sys.room.floor_reflectance);
    sys.room.first_order_element =
        r.value("first_order_element_m", sys.room.first_order_element);
    sys.room.second_order_element =
        r.value("second_order_element_m", sys.room.second_order_element);
  }
  if (j.contains("aps")) {
    const auto& a = j["aps"];
    std::vector<double> ws = a.value("width_positions_m", std::vector<double>{1.0, 3.0});
    std::vector<double> ls =
        a.value("length_positions_m", std::vector<double>{1.0, 3.0, 5.0, 7.0});
    sys.aps.clear();
    for (double w : ws) {
      for (double l : ls) {
        owc::ApSpec ap;
        ap.position = {l, w, sys.room.height};
        ap.semi_angle_half_power = a.value("semi_angle_half_power_deg", 60.0);
        ap.lds_per_ap = a.value("lds_per_ap", 12);
        if (a.contains("per_ld_power_w")) {
          const auto p = a["per_ld_power_w"].get<std::vector<double>>();
          if (p.size() != owc::kNumWavelengths) {
            throw std::invalid_argument("per_ld_power_w needs 4 entries (RYGB)");
          }
          for (int i = 0; i < owc::kNumWavelengths; ++i)
            ap.per_ld_power_w[static_cast<std::size_t>(i)] = p[static_cast<std::size_t>(i)];
        }
        sys.aps.push_back(ap);
      }
    }
  }
  if (j.contains("receiver")) {
    const auto& r = j["receiver"];
    auto& rx = sys.receiver;
    if (r.contains("branch_azimuths_deg")) {
      const auto az = r["branch_azimuths_deg"].get<std::vector<double>>();
      if (az.size() != owc::kNumBranches) {
        throw std::invalid_argument("branch_azimuths_deg needs 4 entries");
      }
      for (int f = 0; f < owc::kNumBranches; ++f)
        rx.branches[static_cast<std::size_t>(f)].azimuth_deg = az[static_cast<std::size_t>(f)];
    }
    for (auto& b : rx.branches) {
      b.elevation_deg = r.value("branch_elevation_deg", b.elevation_deg);
      b.fov_deg = r.value("branch_fov_deg", b.fov_deg);
      b.area_m2 = r.value("branch_area_m2", b.area_m2);
    }
    if (r.contains("responsivity_a_per_w")) {
      const auto rs = r["responsivity_a_per_w"].get<std::vector<double>>();
      if (rs.size() != owc::kNumWavelengths) {
        throw std::invalid_argument("responsivity_a_per_w needs 4 entries (RYGB)");
      }
      for (int i = 0; i < owc::kNumWavelengths; ++i)
        rx.responsivity_a_per_w[static_cast<std::size_t>(i)] = rs[static_cast<std::size_t>(i)];
    }
    rx.bandwidth_hz = r.value("bandwidth_hz", rx.bandwidth_hz);
    rx.noise_density_a_per_sqrthz =
        r.value("noise_density_a_per_sqrthz", rx.noise_density_a_per_sqrthz);
    rx.height_m = r.value("height_m", rx.height_m);
  }
  if (j.contains("sinr")) {
    sys.sinr.k_weight = j["sinr"].value("k_weight", sys.sinr.k_weight);
    sys.sinr.threshold_db = j["sinr"].value("threshold_db", sys.sinr.threshold_db);
  }
  sys.illumination_scale = j.value("illumination_scale", sys.illumination_scale);
  sys.grid = owc::default_grid(sys.room, sys.receiver.height_m);

  if (j.contains("drops")) {
    const auto& d = j["drops"];
    rc.plan.seed = d.value("seed", rc.plan.seed);
    rc.plan.n_drops = d.value("n_drops", rc.plan.n_drops);
    if (d.contains("user_counts")) rc.user_counts = d["user_counts"].get<std::vector<int>>();
  }
  rc.plan.n_locations = static_cast<int>(sys.grid.points.size());
  if (j.contains("modes")) rc.modes = j["modes"].get<std::vector<std::string>>();
  if (j.contains("failures")) rc.failures = j["failures"].get<std::vector<std::string>>();
  for (const auto& m : rc.modes) parse_mode(m);
  for (const auto& f : rc.failures) parse_failure(f);
  sys.room.check();
  return rc;
}

std::string fingerprint_hex(std::uint64_t fp) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fp));
  return buf;
}

nlohmann::json convention_metadata() {
  return {
      {"grid_layout", "8x4 cell centres at z=1m, index = width_row*8 + length_col"},
      {"user_sinr", "linear mean over the user's assigned links, converted to dB"},
      {"unassigned_sentinel_db", 0.0},
      {"drop_average", "mean of per-user dB values"},
      {"overall_average", "mean of per-drop averages"},
      {"wavelength_order", "R,Y,G,B"},
      {"failed_ap", "carries no data but keeps illuminating (noise term retained)"},
  };
}

void write_text(const std::filesystem::path& p, const std::string& content) {
  std::ofstream os(p, std::ios::binary);
  if (!os) throw std::runtime_error("cannot write " + p.string());
  os << content;
  if (!os) throw std::runtime_error("write failed for " + p.string());
}

owc::ChannelTensor ensure_channel(const RunConfig& rc, const std::filesystem::path& out,
                                  int workers, bool verbose = true) {
  std::filesystem::create_directories(out);
  const auto artifact = out / "channel.owc";
  const std::uint64_t fp = rc.system.fingerprint();
  if (std::filesystem::exists(artifact)) {
    try {
      auto ct = owc::load_channel_tensor(artifact.string());
      if (ct.config_fingerprint == fp) {
        if (verbose) std::cout << "trace up to date (fingerprint " << fingerprint_hex(fp)
                               << "), skipping\n";
        return ct;
      }
      if (verbose) std::cout << "fingerprint changed, retracing\n";
    } catch (const std::exception& e) {
      if (verbose) std::cout << "existing artifact unreadable (" << e.what() << "), retracing\n";
    }
  }
  auto ct = owc::build_channel_tensor(rc.system, workers);
  owc::save_channel_tensor(ct, artifact.string());
  if (verbose) {
    std::cout << "traced channel " << ct.n_locations << "x" << ct.n_branches << "x"
              << ct.n_aps << "x" << ct.n_wavelengths << " -> " << artifact.string()
              << " (fingerprint " << fingerprint_hex(fp) << ")\n";
  }
  return ct;
}

std::string csv_header_comment(std::uint64_t fp) {
  std::ostringstream os;
  os << "# " << kVersion << " fingerprint=" << fingerprint_hex(fp)
     << " conventions=" << convention_metadata().dump() << "\n";
  return os.str();
}

int cmd_trace(const RunConfig& rc, const std::filesystem::path& out, int workers) {
  ensure_channel(rc, out, workers);
  return kExitOk;
}

int cmd_experiment(const RunConfig& rc, const std::filesystem::path& out, int workers) {
  const auto channel = ensure_channel(rc, out, workers);
  const double sigma = owc::receiver_noise_variance(
      rc.system.receiver.noise_density_a_per_sqrthz, rc.system.receiver.bandwidth_hz);
  const std::uint64_t fp = rc.system.fingerprint();

  std::ostringstream drops_csv;
  drops_csv << csv_header_comment(fp)
            << "n_users,mode,failure,drop_id,user_id,location_index,n_assigned_aps,"
               "assigned,sinr_db,tuples\n";
  std::ostringstream fig4;  // per-drop averages, 1 user
  fig4 << csv_header_comment(fp) << "drop_id,mode,failure,avg_sinr_db\n";
  std::ostringstream fig5;  // AP-count histograms, multi_ap, no failure
  fig5 << csv_header_comment(fp) << "n_users,n_assigned_aps,count\n";
  std::ostringstream fig6;  // overall averages per user count and mode
  fig6 << csv_header_comment(fp) << "n_users,mode,failure,overall_avg_sinr_db,ap_count_mode\n";
  std::ostringstream fig7;  // failure scenario table
  fig7 << csv_header_comment(fp)
       << "n_users,mode,failure,overall_avg_sinr_db,unassigned_user_fraction\n";
  for (auto* os : {&drops_csv, &fig4, &fig5, &fig6, &fig7}) os->precision(12);

  nlohmann::json summary;
  summary["version"] = kVersion;
  summary["fingerprint"] = fingerprint_hex(fp);
  summary["conventions"] = convention_metadata();
  summary["seed"] = rc.plan.seed;
  summary["sigma_a2"] = sigma;
  summary["series"] = nlohmann::json::array();

  for (int n_users : rc.user_counts) {
    owc::DropPlan plan = rc.plan;
    plan.n_users = n_users;
    const auto drops = owc::generate_drops(plan);
    for (const auto& mode_name : rc.modes) {
      const auto mode = parse_mode(mode_name);
      for (const auto& failure_name : rc.failures) {
        const auto failure = parse_failure(failure_name);
        const auto stats = owc::run_experiment(channel, drops, failure, rc.system.sinr,
                                               sigma, mode, workers);
        for (const auto& ur : stats.user_results) {
          drops_csv << n_users << ',' << mode_name << ',' << failure_name << ','
                    << ur.drop_id << ',' << ur.user_id << ',' << ur.location_index << ','
                    << ur.n_assigned_aps << ',' << (ur.assigned ? 1 : 0) << ','
                    << ur.sinr_db << ',';
          for (std::size_t i = 0; i < ur.tuples.size(); ++i) {
            if (i) drops_csv << ';';
            drops_csv << ur.tuples[i];
          }
          drops_csv << '\n';
        }
        if (n_users == 1) {
          for (std::size_t d = 0; d < stats.per_drop_avg_sinr_db.size(); ++d) {
            fig4 << d << ',' << mode_name << ',' << failure_name << ','
                 << stats.per_drop_avg_sinr_db[d] << '\n';
          }
        }
        if (mode == owc::AssignMode::multi_ap && failure_name == "none") {
          for (const auto& [count, freq] : stats.ap_count_histogram) {
            fig5 << n_users << ',' << count << ',' << freq << '\n';
          }
        }
        if (failure_name == "none") {
          fig6 << n_users << ',' << mode_name << ',' << failure_name << ','
               << stats.overall_avg_sinr_db << ',' << stats.ap_count_mode << '\n';
        }
        fig7 << n_users << ',' << mode_name << ',' << failure_name << ','
             << stats.overall_avg_sinr_db << ',' << stats.unassigned_user_fraction << '\n';
        summary["series"].push_back({{"n_users", n_users},
                                     {"mode", mode_name},
                                     {"failure", failure_name},
                                     {"overall_avg_sinr_db", stats.overall_avg_sinr_db},
                                     {"ap_count_mode", stats.ap_count_mode},
                                     {"unassigned_user_fraction",
                                      stats.unassigned_user_fraction},
                                     {"per_drop_objective", stats.per_drop_objective}});
      }
    }
  }
  write_text(out / "drops.csv", drops_csv.str());
  write_text(out / "fig4_per_drop_sinr.csv", fig4.str());
  write_text(out / "fig5_ap_count_histogram.csv", fig5.str());
  write_text(out / "fig6_avg_sinr_vs_users.csv", fig6.str());
  write_text(out / "fig7_failure_table.csv", fig7.str());
  write_text(out / "summary.json", summary.dump(2) + "\n");
  std::cout << "experiment grid written to " << out.string() << "\n";
  return kExitOk;
}

int cmd_pon(const RunConfig& rc, const std::filesystem::path& out,
            const std::string& manifest_in) {
  std::filesystem::create_directories(out);
  std::vector<owc::Topology> topologies;
  if (!manifest_in.empty()) {
    std::ifstream is(manifest_in);
    if (!is) throw std::invalid_argument("cannot open manifest: " + manifest_in);
    nlohmann::json j;
    is >> j;
    topologies.push_back(owc::topology_from_json(j));
  } else {
    topologies.push_back(owc::build_awgr_pon());
    topologies.push_back(owc::build_p2p_pon());
    topologies.push_back(owc::build_switch_baseline());
  }

  std::ostringstream table;
  table << "topology,bisection_gbps,max_single_failure_disconnected,"
           "ap_to_olt_survival,ap_pair_survival\n";
  table.precision(12);
  std::ostringstream resilience;
  const std::vector<owc::NodeKind> kinds{owc::NodeKind::ap, owc::NodeKind::coupler,
                                         owc::NodeKind::awgr, owc::NodeKind::awg,
                                         owc::NodeKind::sw};
  for (const auto& t : topologies) {
    write_text(out / (t.name + "_manifest.json"),
               owc::topology_to_json(t).dump(2) + "\n");
    const auto rep = owc::failure_sweep(t, kinds);
    resilience << owc::resilience_to_csv(rep);
    table << t.name << ',' << owc::bisection_bandwidth(t) << ',' << rep.max_disconnected
          << ',' << rep.ap_to_olt_survival_fraction << ','
          << rep.ap_pair_survival_fraction << '\n';
  }
  write_text(out / "resilience.csv", resilience.str());
  write_text(out / "pon_comparison.csv", table.str());
  std::cout << table.str();
  (void)rc;
  return kExitOk;
}

int cmd_validate(const RunConfig& rc, std::uint64_t seed, int n_instances) {
  int failures = 0;
  const auto report = [&](const std::string& name, bool ok, const std::string& detail) {
    std::cout << (ok ? "PASS " : "FAIL ") << name;
    if (!detail.empty()) std::cout << " (" << detail << ")";
    std::cout << "\n";
    if (!ok) ++failures;
  };

  // closed-form channel checks
  {
    owc::ApSpec ap;
    ap.position = {0.0, 0.0, 2.0};
    owc::BranchSpec b;
    b.azimuth_deg = 0.0;
    b.elevation_deg = 90.0;
    b.fov_deg = 90.0;
    b.area_m2 = 20e-6;
    const double g = owc::los_gain(ap.position, ap.boresight, ap.lambertian_mode_n(),
                                   {0.0, 0.0, 0.0}, b.normal(), b.area_m2, b.fov_deg);
    const double expect = 2.0 * 20e-6 / (2.0 * owc::kPi * 4.0);
    std::ostringstream d;
    d.precision(10);
    d << "los=" << g;
    report("axial_los_gain", std::abs(g - expect) <= 1e-6 * expect, d.str());
  }
  {
    const double sigma = owc::receiver_noise_variance(
        rc.system.receiver.noise_density_a_per_sqrthz, rc.system.receiver.bandwidth_hz);
    std::ostringstream d;
    d.precision(10);
    d << "sigma=" << sigma << " A^2";
    report("noise_variance", std::abs(sigma - 3.4965e-14) <= 1e-4 * 3.4965e-14, d.str());
  }
  {
    const double z = rc.system.sinr.z_linear();
    std::ostringstream d;
    d.precision(10);
    d << "Z=" << z;
    report("sinr_threshold", std::abs(z - std::pow(10.0, 1.38)) <= 1e-9 * z, d.str());
  }

  // solver equivalence on random guarded instances
  owc::Rng rng(seed);
  int mismatches = 0;
  std::string first_bad;
  for (int i = 0; i < n_instances; ++i) {
    owc::ProblemInstance inst;
    inst.tensors.n_users = 1 + static_cast<int>(rng.bounded(2));
    inst.tensors.n_branches = 1 + static_cast<int>(rng.bounded(2));
    inst.tensors.n_aps = 1 + static_cast<int>(rng.bounded(2));
    inst.tensors.n_wavelengths = 1 + static_cast<int>(rng.bounded(2));
    const std::size_t n = static_cast<std::size_t>(inst.tensors.n_users) *
                          inst.tensors.n_branches * inst.tensors.n_aps *
                          inst.tensors.n_wavelengths;
    inst.sigma = 1.0;
    inst.params.k_weight = 1000.0;
    inst.params.threshold_db = 13.8;
    const double z = inst.params.z_linear();
    for (std::size_t k = 0; k < n; ++k) {
      const double u = static_cast<double>(rng.bounded(1000)) / 999.0;
      inst.tensors.R.push_back(z * (0.25 + 3.5 * u));  // straddles the threshold
      inst.tensors.N.push_back(static_cast<double>(rng.bounded(1000)) / 999.0);
    }
    inst.ap_available.assign(static_cast<std::size_t>(inst.tensors.n_aps), true);
    inst.mode = rng.bounded(2) ? owc::AssignMode::single_ap : owc::AssignMode::multi_ap;
    const auto exact = owc::solve_exact(inst);
    const auto brute = owc::solve_brute_force(inst);
    const double tol = 1e-9 * std::max(1.0, std::abs(brute.objective));
    if (std::abs(exact.objective - brute.objective) > tol || exact.S.S != brute.S.S) {
      ++mismatches;
      if (first_bad.empty()) {
        std::ostringstream d;
        d.precision(17);
        d << "instance " << i << " dims " << inst.tensors.n_users << "x"
          << inst.tensors.n_branches << "x" << inst.tensors.n_aps << "x"
          << inst.tensors.n_wavelengths << " mode "
          << (inst.mode == owc::AssignMode::multi_ap ? "multi_ap" : "single_ap")
          << " exact=" << exact.objective << " brute=" << brute.objective << " R=[";
        for (double v : inst.tensors.R) d << v << ' ';
        d << "] N=[";
        for (double v : inst.tensors.N) d << v << ' ';
        d << "]";
        first_bad = d.str();
      }
    }
  }
  report("solver_equivalence",
         mismatches == 0,
         mismatches == 0 ? std::to_string(n_instances) + " instances" : first_bad);

  return failures == 0 ? kExitOk : kExitValidation;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"owcsim: optical-wireless room simulator and backhaul analyzer"};
  app.set_version_flag("--version", kVersion);
  app.fallthrough();

  std::string config_path;
  std::string out_dir = "out";
  std::uint64_t seed_override = 0;
  bool seed_set = false;
  int workers = 1;
  app.add_option("-c,--config", config_path, "JSON config path")
      ->envname("OWCSIM_CONFIG");
  app.add_option("-o,--out", out_dir, "output directory");
  app.add_option("-s,--seed", seed_override, "drop seed override")
      ->each([&](const std::string&) { seed_set = true; });
  app.add_option("-w,--workers", workers, "worker thread count")
      ->check(CLI::PositiveNumber);

  auto* trace = app.add_subcommand("trace", "ray-trace the channel artifact");
  auto* experiment = app.add_subcommand("experiment", "run the drop/assignment grid");
  auto* pon = app.add_subcommand("pon", "build and analyze backhaul topologies");
  std::string manifest_in;
  pon->add_option("--manifest", manifest_in, "re-analyze a previously exported manifest");
  auto* validate = app.add_subcommand("validate", "run self-checks");
  int n_instances = 200;
  validate->add_option("--instances", n_instances, "random solver instances")
      ->check(CLI::PositiveNumber);
  app.require_subcommand(1);

  CLI11_PARSE(app, argc, argv);

  RunConfig rc;
  try {
    rc = load_config(config_path);
  } catch (const std::exception& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  }
  if (seed_set) rc.plan.seed = seed_override;

  try {
    if (*trace) return cmd_trace(rc, out_dir, workers);
    if (*experiment) return cmd_experiment(rc, out_dir, workers);
    if (*pon) return cmd_pon(rc, out_dir, manifest_in);
    if (*validate) return cmd_validate(rc, rc.plan.seed, n_instances);
  } catch (const std::invalid_argument& e) {
    std::cerr << "guard violation: " << e.what() << "\n";
    return kExitGuard;
  } catch (const std::domain_error& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  }
  return kExitOk;
}
