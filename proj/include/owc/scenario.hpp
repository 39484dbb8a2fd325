#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "owc/allocator.hpp"
#include "owc/channel.hpp"
#include "owc/config.hpp"
#include "owc/linkmetrics.hpp"
#include "owc/util.hpp"

namespace owc {

struct DropPlan {
  std::uint64_t seed = 1;
  int n_users = 1;
  int n_drops = 20;
  int n_locations = 32;
};

struct FailureScenario {
  std::string name;
  std::set<int> failed_aps;
};

inline FailureScenario failure_none() { return {"none", {}}; }
inline FailureScenario failure_ap1() { return {"ap1", {0}}; }  // 1st AP of the default layout
inline FailureScenario failure_ap5() { return {"ap5", {4}}; }  // 5th AP of the default layout
inline FailureScenario failure_ap1_and_ap5() { return {"ap1_and_ap5", {0, 4}}; }

inline std::vector<FailureScenario> all_failure_scenarios() {
  return {failure_none(), failure_ap1(), failure_ap5(), failure_ap1_and_ap5()};
}

// One drop = n_users distinct grid indices. mt19937_64 seeded once; drops
// drawn sequentially by partial Fisher-Yates, so (seed, plan) pins the
// whole sequence.
inline std::vector<std::vector<int>> generate_drops(const DropPlan& plan) {
  if (plan.n_users > plan.n_locations) {
    throw std::domain_error("generate_drops: more users than grid locations");
  }
  Rng rng(plan.seed);
  std::vector<std::vector<int>> drops;
  drops.reserve(static_cast<std::size_t>(plan.n_drops));
  for (int d = 0; d < plan.n_drops; ++d) {
    drops.push_back(rng.sample_without_replacement(plan.n_locations, plan.n_users));
  }
  return drops;
}

inline ProblemInstance build_instance(const ChannelTensor& channel,
                                      const std::vector<int>& drop,
                                      const FailureScenario& failure,
                                      const SinrParams& params, double sigma,
                                      AssignMode mode) {
  ProblemInstance inst;
  inst.tensors.n_users = static_cast<int>(drop.size());
  inst.tensors.n_branches = channel.n_branches;
  inst.tensors.n_aps = channel.n_aps;
  inst.tensors.n_wavelengths = channel.n_wavelengths;
  const std::size_t row = static_cast<std::size_t>(channel.n_branches) * channel.n_aps *
                          channel.n_wavelengths;
  inst.tensors.R.reserve(drop.size() * row);
  inst.tensors.N.reserve(drop.size() * row);
  for (int loc : drop) {
    if (loc < 0 || loc >= channel.n_locations) {
      throw std::out_of_range("build_instance: drop location out of range");
    }
    const std::size_t base = static_cast<std::size_t>(loc) * row;
    inst.tensors.R.insert(inst.tensors.R.end(), channel.R.begin() + base,
                          channel.R.begin() + base + row);
    inst.tensors.N.insert(inst.tensors.N.end(), channel.N.begin() + base,
                          channel.N.begin() + base + row);
  }
  inst.sigma = sigma;
  inst.params = params;
  inst.ap_available.assign(static_cast<std::size_t>(channel.n_aps), true);
  for (int a : failure.failed_aps) {
    if (a < 0 || a >= channel.n_aps) {
      throw std::out_of_range("build_instance: failed AP index out of range");
    }
    inst.ap_available[static_cast<std::size_t>(a)] = false;
  }
  inst.mode = mode;
  return inst;
}

// Per-(drop, user) outcome of one experiment.
struct UserResult {
  int drop_id = 0;
  int user_id = 0;
  int location_index = 0;
  int n_assigned_aps = 0;
  double sinr_db = 0.0;  // 0 dB sentinel for unassigned users
  bool assigned = false;
  std::vector<int> tuples;  // assigned linear tuple indices
};

struct ExperimentStats {
  std::vector<double> per_drop_avg_sinr_db;
  double overall_avg_sinr_db = 0.0;
  std::map<int, int> ap_count_histogram;
  int ap_count_mode = 0;
  double unassigned_user_fraction = 0.0;
  std::vector<double> per_drop_objective;
  std::vector<UserResult> user_results;
};

// How a user's multiple assigned links collapse into one SINR figure.
enum class SinrCombiner { linear_mean, max_link, min_link };

// Averaging conventions (recorded in every output file): a user's SINR is
// the linear combiner over their assigned links converted to dB; unassigned
// users contribute the 0 dB sentinel; drop average is the mean of per-user
// dB values; the overall figure is the mean over drops.
inline ExperimentStats run_experiment(const ChannelTensor& channel,
                                      const std::vector<std::vector<int>>& drops,
                                      const FailureScenario& failure,
                                      const SinrParams& params, double sigma,
                                      AssignMode mode, int workers = 1,
                                      SinrCombiner combiner = SinrCombiner::linear_mean) {
  ExperimentStats stats;
  const std::size_t n_drops = drops.size();
  std::vector<std::vector<UserResult>> per_drop_users(n_drops);
  std::vector<double> per_drop_avg(n_drops, 0.0);
  std::vector<double> per_drop_obj(n_drops, 0.0);

  parallel_for(n_drops, workers, [&](std::size_t d) {
    const auto& drop = drops[d];
    const ProblemInstance inst = build_instance(channel, drop, failure, params, sigma, mode);
    const AssignmentSolution sol = solve_exact(inst);
    per_drop_obj[d] = sol.objective;
    const auto& t = inst.tensors;
    std::vector<UserResult> users;
    double sum_db = 0.0;
    for (int u = 0; u < t.n_users; ++u) {
      UserResult ur;
      ur.drop_id = static_cast<int>(d);
      ur.user_id = u;
      ur.location_index = drop[static_cast<std::size_t>(u)];
      ur.n_assigned_aps = sol.per_user_ap_count[static_cast<std::size_t>(u)];
      double lin_sum = 0.0;
      double lin_max = 0.0;
      double lin_min = 0.0;
      int n_links = 0;
      for (int f = 0; f < t.n_branches; ++f) {
        for (int a = 0; a < t.n_aps; ++a) {
          for (int w = 0; w < t.n_wavelengths; ++w) {
            if (sol.S.at(u, f, a, w)) {
              const double g = sol.gamma[sol.S.index(u, f, a, w)];
              lin_sum += g;
              lin_max = n_links ? std::max(lin_max, g) : g;
              lin_min = n_links ? std::min(lin_min, g) : g;
              ++n_links;
              ur.tuples.push_back(static_cast<int>(sol.S.index(u, f, a, w)));
            }
          }
        }
      }
      if (n_links > 0) {
        ur.assigned = true;
        const double lin = combiner == SinrCombiner::max_link   ? lin_max
                           : combiner == SinrCombiner::min_link ? lin_min
                                                                : lin_sum / n_links;
        ur.sinr_db = to_db(lin);
      }
      sum_db += ur.sinr_db;
      users.push_back(std::move(ur));
    }
    per_drop_avg[d] = t.n_users > 0 ? sum_db / t.n_users : 0.0;
    per_drop_users[d] = std::move(users);
  });

  stats.per_drop_avg_sinr_db = per_drop_avg;
  stats.per_drop_objective = per_drop_obj;
  double total = 0.0;
  int unassigned = 0;
  int n_users_total = 0;
  for (std::size_t d = 0; d < n_drops; ++d) {
    total += per_drop_avg[d];
    for (auto& ur : per_drop_users[d]) {
      ++n_users_total;
      if (!ur.assigned) ++unassigned;
      ++stats.ap_count_histogram[ur.n_assigned_aps];
      stats.user_results.push_back(std::move(ur));
    }
  }
  stats.overall_avg_sinr_db = n_drops > 0 ? total / static_cast<double>(n_drops) : 0.0;
  stats.unassigned_user_fraction =
      n_users_total > 0 ? static_cast<double>(unassigned) / n_users_total : 0.0;
  int best_count = -1;
  for (const auto& [count, freq] : stats.ap_count_histogram) {
    if (freq > best_count) {  // map iteration is ascending: smallest count wins ties
      best_count = freq;
      stats.ap_count_mode = count;
    }
  }
  return stats;
}

struct ModeComparison {
  ExperimentStats single_ap;
  ExperimentStats multi_ap;
  std::vector<double> per_drop_delta_db;  // single minus multi
};

inline ModeComparison compare_modes(const ChannelTensor& channel,
                                    const std::vector<std::vector<int>>& drops,
                                    const FailureScenario& failure,
                                    const SinrParams& params, double sigma,
                                    int workers = 1) {
  ModeComparison cmp;
  cmp.single_ap =
      run_experiment(channel, drops, failure, params, sigma, AssignMode::single_ap, workers);
  cmp.multi_ap =
      run_experiment(channel, drops, failure, params, sigma, AssignMode::multi_ap, workers);
  for (std::size_t d = 0; d < drops.size(); ++d) {
    cmp.per_drop_delta_db.push_back(cmp.single_ap.per_drop_avg_sinr_db[d] -
                                    cmp.multi_ap.per_drop_avg_sinr_db[d]);
  }
  return cmp;
}

}  // namespace owc
