#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "owc/config.hpp"
#include "owc/linkmetrics.hpp"

namespace owc {

enum class AssignMode { multi_ap, single_ap };
enum class SolveStatus { optimal, infeasible_empty };

struct ProblemInstance {
  LinkTensors tensors;
  double sigma = 0.0;
  SinrParams params;
  std::vector<bool> ap_available;
  AssignMode mode = AssignMode::multi_ap;

  void check() const {
    const std::size_t expect = static_cast<std::size_t>(tensors.n_users) *
                               tensors.n_branches * tensors.n_aps * tensors.n_wavelengths;
    if (tensors.R.size() != expect || tensors.N.size() != expect) {
      throw std::invalid_argument("ProblemInstance: tensor shape mismatch");
    }
    if (ap_available.size() != static_cast<std::size_t>(tensors.n_aps)) {
      throw std::invalid_argument("ProblemInstance: availability mask shape mismatch");
    }
    if (!(sigma > 0.0)) throw std::domain_error("ProblemInstance: sigma must be positive");
  }
};

struct AssignmentSolution {
  AssignmentTensor S;
  std::vector<double> gamma;
  double objective = 0.0;
  SolveStatus status = SolveStatus::infeasible_empty;
  std::vector<int> per_user_ap_count;
};

namespace detail {

struct TupleRef {
  int u, f, a, w;
  int linear;
};

// Tie-break: among equal objectives keep the lexicographically smallest
// S over (u, f, a, wavelength) index order. Comparing the sorted index
// lists of assigned tuples: at the first difference, the list holding the
// larger index has a zero earlier, so it is the smaller bitstring.
inline bool lex_smaller(const std::vector<int>& a, const std::vector<int>& b) {
  const std::size_t n = std::min(a.size(), b.size());
  for (std::size_t k = 0; k < n; ++k) {
    if (a[k] != b[k]) return a[k] > b[k];
  }
  return a.size() < b.size();
}

inline double tie_tol(double best) { return 1e-12 * std::max(1.0, std::abs(best)); }

struct Incumbent {
  double objective = 0.0;
  std::vector<int> tuples;  // sorted linear indices; empty solution by default

  // Returns true if candidate was adopted.
  bool consider(double obj, const std::vector<int>& cand) {
    const double tol = tie_tol(std::max(std::abs(obj), std::abs(objective)));
    if (obj > objective + tol) {
      objective = obj;
      tuples = cand;
      return true;
    }
    if (obj >= objective - tol && lex_smaller(cand, tuples)) {
      tuples = cand;
      return true;
    }
    return false;
  }
};

// Shared search state: slot occupancy keyed by (ap, wavelength).
struct SlotState {
  int n_aps, n_wl;
  std::vector<int> occupant_user;  // -1 when free
  std::vector<int> occupant_branch;

  SlotState(int a, int w)
      : n_aps(a), n_wl(w),
        occupant_user(static_cast<std::size_t>(a) * w, -1),
        occupant_branch(static_cast<std::size_t>(a) * w, -1) {}

  std::size_t idx(int a, int w) const { return static_cast<std::size_t>(a) * n_wl + w; }
};

// Exact per-tuple SINR for a full assignment, identical term order to
// linkmetrics::sinr.
inline double leaf_gamma(const ProblemInstance& inst, const SlotState& slots,
                         int u, int f, int a, int w) {
  const auto& t = inst.tensors;
  double den = inst.sigma;
  for (int b = 0; b < t.n_aps; ++b) {
    if (b == a) continue;
    if (!inst.ap_available[static_cast<std::size_t>(b)]) {
      den += t.n(u, f, b, w);  // failed AP still illuminates
      continue;
    }
    const int occ_user = slots.occupant_user[slots.idx(b, w)];
    const int occ = (occ_user >= 0 && occ_user != u) ? 1 : 0;
    den += t.r(u, f, b, w) * occ + t.n(u, f, b, w) * (1 - occ);
  }
  return t.r(u, f, a, w) / den;
}

inline AssignmentSolution finalize(const ProblemInstance& inst,
                                   const std::vector<int>& tuples) {
  const auto& t = inst.tensors;
  AssignmentSolution sol;
  sol.S = AssignmentTensor(t.n_users, t.n_branches, t.n_aps, t.n_wavelengths);
  for (int linear : tuples) sol.S.S[static_cast<std::size_t>(linear)] = 1;

  sol.gamma.assign(sol.S.size(), 0.0);
  for (int linear : tuples) {
    const int w = linear % t.n_wavelengths;
    const int a = (linear / t.n_wavelengths) % t.n_aps;
    const int f = (linear / (t.n_wavelengths * t.n_aps)) % t.n_branches;
    const int u = linear / (t.n_wavelengths * t.n_aps * t.n_branches);
    sol.gamma[static_cast<std::size_t>(linear)] =
        sinr(t, sol.S, inst.ap_available, inst.sigma, u, f, a, w);
  }
  sol.objective = objective_value(sol.gamma, sol.S, inst.params.k_weight);
  sol.per_user_ap_count.assign(static_cast<std::size_t>(t.n_users), 0);
  for (int u = 0; u < t.n_users; ++u) {
    for (int a = 0; a < t.n_aps; ++a) {
      bool any = false;
      for (int f = 0; f < t.n_branches && !any; ++f) {
        for (int w = 0; w < t.n_wavelengths && !any; ++w) {
          any = sol.S.at(u, f, a, w) != 0;
        }
      }
      sol.per_user_ap_count[static_cast<std::size_t>(u)] += any ? 1 : 0;
    }
  }
  sol.status = (!tuples.empty() || t.n_users == 0) ? SolveStatus::optimal
                                                   : SolveStatus::infeasible_empty;
  return sol;
}

inline int tuple_linear(const LinkTensors& t, int u, int f, int a, int w) {
  return ((u * t.n_branches + f) * t.n_aps + a) * t.n_wavelengths + w;
}

// True when every cross-AP term is bit-identical between R and N over the
// available mask, which makes each tuple's SINR independent of S.
inline bool constant_gamma(const ProblemInstance& inst) {
  const auto& t = inst.tensors;
  for (int u = 0; u < t.n_users; ++u) {
    for (int f = 0; f < t.n_branches; ++f) {
      for (int b = 0; b < t.n_aps; ++b) {
        if (!inst.ap_available[static_cast<std::size_t>(b)]) continue;
        for (int w = 0; w < t.n_wavelengths; ++w) {
          if (t.r(u, f, b, w) != t.n(u, f, b, w)) return false;
        }
      }
    }
  }
  return true;
}

// Per-tuple SINR for the constant-gamma case, same summation order as
// leaf_gamma.
inline std::vector<double> constant_gammas(const ProblemInstance& inst) {
  const auto& t = inst.tensors;
  std::vector<double> g(t.R.size(), 0.0);
  for (int u = 0; u < t.n_users; ++u) {
    for (int f = 0; f < t.n_branches; ++f) {
      for (int a = 0; a < t.n_aps; ++a) {
        if (!inst.ap_available[static_cast<std::size_t>(a)]) continue;
        for (int w = 0; w < t.n_wavelengths; ++w) {
          double d = inst.sigma;
          for (int b = 0; b < t.n_aps; ++b) {
            if (b == a) continue;
            d += t.n(u, f, b, w);  // failed APs keep their illumination term
          }
          g[static_cast<std::size_t>(tuple_linear(t, u, f, a, w))] = t.r(u, f, a, w) / d;
        }
      }
    }
  }
  return g;
}

}  // namespace detail

// --- brute-force oracle ------------------------------------------------

// Exhaustive enumeration over all S satisfying the one-wavelength-per-
// (user, AP) and one-occupant-per-(AP, wavelength) constraints (and the
// single-AP cap in that mode), evaluating SINR, threshold and objective at
// every leaf. The enumeration walks (ap, wavelength) slots and picks an
// occupant (user, branch) or none per slot, which covers exactly the
// constraint-feasible assignments.
inline AssignmentSolution solve_brute_force(const ProblemInstance& inst,
                                            double max_leaves = 2e7) {
  inst.check();
  const auto& t = inst.tensors;

  std::vector<std::pair<int, int>> slots;  // (ap, wavelength), available APs only
  for (int a = 0; a < t.n_aps; ++a) {
    if (!inst.ap_available[static_cast<std::size_t>(a)]) continue;
    for (int w = 0; w < t.n_wavelengths; ++w) slots.emplace_back(a, w);
  }
  const double options = 1.0 + static_cast<double>(t.n_users) * t.n_branches;
  if (std::pow(options, static_cast<double>(slots.size())) > max_leaves) {
    throw std::invalid_argument("solve_brute_force: instance exceeds enumeration guard");
  }

  detail::SlotState state(t.n_aps, t.n_wavelengths);
  std::vector<std::vector<std::uint8_t>> user_ap_used(
      static_cast<std::size_t>(t.n_users),
      std::vector<std::uint8_t>(static_cast<std::size_t>(t.n_aps), 0));
  std::vector<int> user_links(static_cast<std::size_t>(t.n_users), 0);
  std::vector<int> chosen;  // linear tuple ids in slot order
  detail::Incumbent best;

  const auto evaluate_leaf = [&]() {
    std::vector<int> tuples = chosen;
    std::sort(tuples.begin(), tuples.end());
    double obj = 0.0;
    for (int linear : tuples) {
      const int w = linear % t.n_wavelengths;
      const int a = (linear / t.n_wavelengths) % t.n_aps;
      const int f = (linear / (t.n_wavelengths * t.n_aps)) % t.n_branches;
      const int u = linear / (t.n_wavelengths * t.n_aps * t.n_branches);
      const double g = detail::leaf_gamma(inst, state, u, f, a, w);
      if (g < inst.params.z_linear()) return;  // threshold violated
      obj += g + inst.params.k_weight;
    }
    best.consider(obj, tuples);
  };

  const std::function<void(std::size_t)> recurse = [&](std::size_t s) {
    if (s == slots.size()) {
      evaluate_leaf();
      return;
    }
    const auto [a, w] = slots[s];
    recurse(s + 1);  // slot left unused
    for (int u = 0; u < t.n_users; ++u) {
      if (user_ap_used[static_cast<std::size_t>(u)][static_cast<std::size_t>(a)]) continue;
      if (inst.mode == AssignMode::single_ap && user_links[static_cast<std::size_t>(u)] > 0)
        continue;
      for (int f = 0; f < t.n_branches; ++f) {
        state.occupant_user[state.idx(a, w)] = u;
        state.occupant_branch[state.idx(a, w)] = f;
        user_ap_used[static_cast<std::size_t>(u)][static_cast<std::size_t>(a)] = 1;
        ++user_links[static_cast<std::size_t>(u)];
        chosen.push_back(detail::tuple_linear(t, u, f, a, w));
        recurse(s + 1);
        chosen.pop_back();
        --user_links[static_cast<std::size_t>(u)];
        user_ap_used[static_cast<std::size_t>(u)][static_cast<std::size_t>(a)] = 0;
        state.occupant_user[state.idx(a, w)] = -1;
        state.occupant_branch[state.idx(a, w)] = -1;
      }
    }
  };
  recurse(0);
  return detail::finalize(inst, best.tuples);
}

namespace detail {

// Branch-and-bound over (ap, wavelength) slots for the general coupled
// case. Bound: actual SINR never exceeds the interference-free value with
// every competing AP at its smallest possible denominator term.
inline Incumbent solve_bnb(const ProblemInstance& inst) {
  const auto& t = inst.tensors;
  const double Z = inst.params.z_linear();
  const double K = inst.params.k_weight;

  std::vector<double> gamma_ub(t.R.size(), 0.0);
  for (int u = 0; u < t.n_users; ++u) {
    for (int f = 0; f < t.n_branches; ++f) {
      for (int a = 0; a < t.n_aps; ++a) {
        if (!inst.ap_available[static_cast<std::size_t>(a)]) continue;
        for (int w = 0; w < t.n_wavelengths; ++w) {
          double den = inst.sigma;
          for (int b = 0; b < t.n_aps; ++b) {
            if (b == a) continue;
            const double n = t.n(u, f, b, w);
            if (!inst.ap_available[static_cast<std::size_t>(b)]) {
              den += n;  // exact: a failed AP always illuminates
              continue;
            }
            den += (t.n_users > 1) ? std::min(t.r(u, f, b, w), n) : n;
          }
          gamma_ub[static_cast<std::size_t>(tuple_linear(t, u, f, a, w))] =
              t.r(u, f, a, w) / den;
        }
      }
    }
  }

  struct Option {
    int u, f, linear;
    double ub;
  };
  std::vector<std::pair<int, int>> slots;
  std::vector<std::vector<Option>> slot_options;
  for (int a = 0; a < t.n_aps; ++a) {
    if (!inst.ap_available[static_cast<std::size_t>(a)]) continue;
    for (int w = 0; w < t.n_wavelengths; ++w) {
      std::vector<Option> opts;
      for (int u = 0; u < t.n_users; ++u) {
        for (int f = 0; f < t.n_branches; ++f) {
          const int linear = tuple_linear(t, u, f, a, w);
          const double ub = gamma_ub[static_cast<std::size_t>(linear)];
          if (ub >= Z) opts.push_back({u, f, linear, ub});
        }
      }
      std::sort(opts.begin(), opts.end(),
                [](const Option& x, const Option& y) { return x.ub > y.ub; });
      slots.emplace_back(a, w);
      slot_options.push_back(std::move(opts));
    }
  }

  std::vector<double> suffix_best(slots.size() + 1, 0.0);
  for (std::size_t s = slots.size(); s-- > 0;) {
    const double slot_best =
        slot_options[s].empty() ? 0.0 : K + slot_options[s].front().ub;
    suffix_best[s] = suffix_best[s + 1] + std::max(0.0, slot_best);
  }

  SlotState state(t.n_aps, t.n_wavelengths);
  std::vector<std::vector<std::uint8_t>> user_ap_used(
      static_cast<std::size_t>(t.n_users),
      std::vector<std::uint8_t>(static_cast<std::size_t>(t.n_aps), 0));
  std::vector<int> user_links(static_cast<std::size_t>(t.n_users), 0);
  std::vector<int> chosen;
  double partial_ub = 0.0;  // sum of K + gamma_ub over chosen tuples
  Incumbent best;

  const auto evaluate_leaf = [&]() {
    std::vector<int> tuples = chosen;
    std::sort(tuples.begin(), tuples.end());
    double obj = 0.0;
    for (int linear : tuples) {
      const int w = linear % t.n_wavelengths;
      const int a = (linear / t.n_wavelengths) % t.n_aps;
      const int f = (linear / (t.n_wavelengths * t.n_aps)) % t.n_branches;
      const int u = linear / (t.n_wavelengths * t.n_aps * t.n_branches);
      const double g = leaf_gamma(inst, state, u, f, a, w);
      if (g < Z) return;
      obj += g + K;
    }
    best.consider(obj, tuples);
  };

  const std::function<void(std::size_t)> recurse = [&](std::size_t s) {
    if (partial_ub + suffix_best[s] < best.objective - tie_tol(best.objective)) return;
    if (s == slots.size()) {
      evaluate_leaf();
      return;
    }
    const auto [a, w] = slots[s];
    for (const auto& opt : slot_options[s]) {
      if (user_ap_used[static_cast<std::size_t>(opt.u)][static_cast<std::size_t>(a)])
        continue;
      if (inst.mode == AssignMode::single_ap &&
          user_links[static_cast<std::size_t>(opt.u)] > 0)
        continue;
      state.occupant_user[state.idx(a, w)] = opt.u;
      state.occupant_branch[state.idx(a, w)] = opt.f;
      user_ap_used[static_cast<std::size_t>(opt.u)][static_cast<std::size_t>(a)] = 1;
      ++user_links[static_cast<std::size_t>(opt.u)];
      chosen.push_back(opt.linear);
      partial_ub += K + opt.ub;
      recurse(s + 1);
      partial_ub -= K + opt.ub;
      chosen.pop_back();
      --user_links[static_cast<std::size_t>(opt.u)];
      user_ap_used[static_cast<std::size_t>(opt.u)][static_cast<std::size_t>(a)] = 0;
      state.occupant_user[state.idx(a, w)] = -1;
      state.occupant_branch[state.idx(a, w)] = -1;
    }
    recurse(s + 1);  // slot left unused
  };
  recurse(0);
  return best;
}

// Constant-gamma multi-AP case: constraints (3)-(4) couple tuples only
// within one AP, so the optimum decomposes into independent per-AP
// searches; merging per-AP lex-minimal optima yields the global
// lex-minimal optimum because the tuple index sets are disjoint.
inline Incumbent solve_constant_multi(const ProblemInstance& inst,
                                      const std::vector<double>& g) {
  const auto& t = inst.tensors;
  const double Z = inst.params.z_linear();
  const double K = inst.params.k_weight;
  Incumbent global;
  std::vector<int> all_tuples;

  for (int a = 0; a < t.n_aps; ++a) {
    if (!inst.ap_available[static_cast<std::size_t>(a)]) continue;

    struct Option {
      int u, f, linear;
      double val;  // K + gamma
    };
    std::vector<std::vector<Option>> per_wl(static_cast<std::size_t>(t.n_wavelengths));
    std::vector<double> wl_best(static_cast<std::size_t>(t.n_wavelengths), 0.0);
    for (int w = 0; w < t.n_wavelengths; ++w) {
      for (int u = 0; u < t.n_users; ++u) {
        for (int f = 0; f < t.n_branches; ++f) {
          const int linear = tuple_linear(t, u, f, a, w);
          const double gam = g[static_cast<std::size_t>(linear)];
          if (gam >= Z) {
            per_wl[static_cast<std::size_t>(w)].push_back({u, f, linear, K + gam});
            wl_best[static_cast<std::size_t>(w)] =
                std::max(wl_best[static_cast<std::size_t>(w)], K + gam);
          }
        }
      }
      std::sort(per_wl[static_cast<std::size_t>(w)].begin(),
                per_wl[static_cast<std::size_t>(w)].end(),
                [](const Option& x, const Option& y) { return x.val > y.val; });
    }
    std::vector<double> suffix(static_cast<std::size_t>(t.n_wavelengths) + 1, 0.0);
    for (int w = t.n_wavelengths; w-- > 0;) {
      suffix[static_cast<std::size_t>(w)] =
          suffix[static_cast<std::size_t>(w) + 1] + wl_best[static_cast<std::size_t>(w)];
    }

    Incumbent ap_best;
    std::vector<std::uint8_t> user_used(static_cast<std::size_t>(t.n_users), 0);
    std::vector<int> chosen;
    double cur = 0.0;
    const std::function<void(int)> recurse = [&](int w) {
      if (cur + suffix[static_cast<std::size_t>(w)] <
          ap_best.objective - tie_tol(ap_best.objective))
        return;
      if (w == t.n_wavelengths) {
        std::vector<int> tuples = chosen;
        std::sort(tuples.begin(), tuples.end());
        double obj = 0.0;
        for (int linear : tuples) obj += g[static_cast<std::size_t>(linear)] + K;
        ap_best.consider(obj, tuples);
        return;
      }
      for (const auto& opt : per_wl[static_cast<std::size_t>(w)]) {
        if (user_used[static_cast<std::size_t>(opt.u)]) continue;
        user_used[static_cast<std::size_t>(opt.u)] = 1;
        chosen.push_back(opt.linear);
        cur += opt.val;
        recurse(w + 1);
        cur -= opt.val;
        chosen.pop_back();
        user_used[static_cast<std::size_t>(opt.u)] = 0;
      }
      recurse(w + 1);  // wavelength unassigned
    };
    recurse(0);

    all_tuples.insert(all_tuples.end(), ap_best.tuples.begin(), ap_best.tuples.end());
  }

  std::sort(all_tuples.begin(), all_tuples.end());
  // Re-sum in global tuple order so the stored objective matches
  // objective_value() bit for bit.
  double obj = 0.0;
  for (int linear : all_tuples) obj += g[static_cast<std::size_t>(linear)] + K;
  global.objective = obj;
  global.tuples = std::move(all_tuples);
  return global;
}

// Constant-gamma single-AP case: one link per user; DFS over users with a
// per-user optimistic bound.
inline Incumbent solve_constant_single(const ProblemInstance& inst,
                                       const std::vector<double>& g) {
  const auto& t = inst.tensors;
  const double Z = inst.params.z_linear();
  const double K = inst.params.k_weight;

  struct Option {
    int a, w, linear;
    double val;
  };
  std::vector<std::vector<Option>> per_user(static_cast<std::size_t>(t.n_users));
  std::vector<double> user_best(static_cast<std::size_t>(t.n_users), 0.0);
  for (int u = 0; u < t.n_users; ++u) {
    for (int f = 0; f < t.n_branches; ++f) {
      for (int a = 0; a < t.n_aps; ++a) {
        if (!inst.ap_available[static_cast<std::size_t>(a)]) continue;
        for (int w = 0; w < t.n_wavelengths; ++w) {
          const int linear = tuple_linear(t, u, f, a, w);
          const double gam = g[static_cast<std::size_t>(linear)];
          if (gam >= Z) {
            per_user[static_cast<std::size_t>(u)].push_back({a, w, linear, K + gam});
            user_best[static_cast<std::size_t>(u)] =
                std::max(user_best[static_cast<std::size_t>(u)], K + gam);
          }
        }
      }
    }
    std::sort(per_user[static_cast<std::size_t>(u)].begin(),
              per_user[static_cast<std::size_t>(u)].end(),
              [](const Option& x, const Option& y) { return x.val > y.val; });
  }
  std::vector<double> suffix(static_cast<std::size_t>(t.n_users) + 1, 0.0);
  for (int u = t.n_users; u-- > 0;) {
    suffix[static_cast<std::size_t>(u)] =
        suffix[static_cast<std::size_t>(u) + 1] + user_best[static_cast<std::size_t>(u)];
  }

  Incumbent best;
  std::vector<std::uint8_t> slot_taken(
      static_cast<std::size_t>(t.n_aps) * t.n_wavelengths, 0);
  std::vector<int> chosen;
  double cur = 0.0;
  const std::function<void(int)> recurse = [&](int u) {
    if (cur + suffix[static_cast<std::size_t>(u)] < best.objective - tie_tol(best.objective))
      return;
    if (u == t.n_users) {
      std::vector<int> tuples = chosen;
      std::sort(tuples.begin(), tuples.end());
      double obj = 0.0;
      for (int linear : tuples) obj += g[static_cast<std::size_t>(linear)] + K;
      best.consider(obj, tuples);
      return;
    }
    for (const auto& opt : per_user[static_cast<std::size_t>(u)]) {
      const std::size_t si = static_cast<std::size_t>(opt.a) * t.n_wavelengths + opt.w;
      if (slot_taken[si]) continue;
      slot_taken[si] = 1;
      chosen.push_back(opt.linear);
      cur += opt.val;
      recurse(u + 1);
      cur -= opt.val;
      chosen.pop_back();
      slot_taken[si] = 0;
    }
    recurse(u + 1);  // user left unassigned
  };
  recurse(0);
  return best;
}

}  // namespace detail

// Exact optimum of the assignment objective subject to the wavelength,
// occupancy and threshold constraints plus the single-AP cap in single_ap
// mode. Uses the per-AP decomposition when R == N over the mask (SINRs
// independent of S), branch-and-bound otherwise.
inline AssignmentSolution solve_exact(const ProblemInstance& inst) {
  inst.check();
  const auto& t = inst.tensors;
  const bool any_ap =
      std::any_of(inst.ap_available.begin(), inst.ap_available.end(), [](bool b) { return b; });
  if (t.n_users == 0 || !any_ap) {
    return detail::finalize(inst, {});
  }
  detail::Incumbent best;
  if (detail::constant_gamma(inst)) {
    const auto g = detail::constant_gammas(inst);
    best = (inst.mode == AssignMode::multi_ap) ? detail::solve_constant_multi(inst, g)
                                               : detail::solve_constant_single(inst, g);
  } else {
    best = detail::solve_bnb(inst);
  }
  return detail::finalize(inst, best.tuples);
}

// --- validation --------------------------------------------------------

struct ValidationReport {
  bool mask_ok = true;       // no link on an unavailable AP
  bool wavelength_ok = true;  // one wavelength per (user, AP)
  bool occupancy_ok = true;   // one occupant per (AP, wavelength)
  bool threshold_ok = true;   // gamma >= Z for every assigned tuple
  bool mode_ok = true;       // single-AP cap honored in that mode
  bool gamma_ok = true;      // stored gammas match recomputation
  bool objective_ok = true;  // stored objective matches recomputation
  double max_gamma_delta_rel = 0.0;
  double objective_delta_rel = 0.0;
  std::vector<std::string> failures;

  bool passed() const {
    return mask_ok && wavelength_ok && occupancy_ok && threshold_ok && mode_ok &&
           gamma_ok && objective_ok;
  }
};

inline ValidationReport validate(const ProblemInstance& inst,
                                 const AssignmentSolution& sol) {
  inst.check();
  const auto& t = inst.tensors;
  ValidationReport rep;
  const auto fail = [&](bool& flag, const std::string& msg) {
    flag = false;
    rep.failures.push_back(msg);
  };

  for (int u = 0; u < t.n_users; ++u) {
    for (int f = 0; f < t.n_branches; ++f) {
      for (int a = 0; a < t.n_aps; ++a) {
        if (inst.ap_available[static_cast<std::size_t>(a)]) continue;
        for (int w = 0; w < t.n_wavelengths; ++w) {
          if (sol.S.at(u, f, a, w)) {
            fail(rep.mask_ok, "mask: link on unavailable AP " + std::to_string(a));
          }
        }
      }
    }
  }
  for (int u = 0; u < t.n_users; ++u) {
    int total_links = 0;
    for (int a = 0; a < t.n_aps; ++a) {
      int per_ap = 0;
      for (int f = 0; f < t.n_branches; ++f) {
        for (int w = 0; w < t.n_wavelengths; ++w) per_ap += sol.S.at(u, f, a, w);
      }
      if (per_ap > 1) {
        fail(rep.wavelength_ok, "wavelength: user " + std::to_string(u) + " has " +
                             std::to_string(per_ap) + " links in AP " + std::to_string(a));
      }
      total_links += per_ap;
    }
    if (inst.mode == AssignMode::single_ap && total_links > 1) {
      fail(rep.mode_ok, "mode: user " + std::to_string(u) + " holds " +
                            std::to_string(total_links) + " links in single-AP mode");
    }
  }
  for (int a = 0; a < t.n_aps; ++a) {
    for (int w = 0; w < t.n_wavelengths; ++w) {
      int occ = 0;
      for (int u = 0; u < t.n_users; ++u) {
        for (int f = 0; f < t.n_branches; ++f) occ += sol.S.at(u, f, a, w);
      }
      if (occ > 1) {
        fail(rep.occupancy_ok, "occupancy: slot (ap " + std::to_string(a) + ", wl " +
                             std::to_string(w) + ") assigned " + std::to_string(occ) +
                             " times");
      }
    }
  }
  if (!rep.occupancy_ok) return rep;  // gamma recomputation needs a sane bracket

  const double Z = inst.params.z_linear();
  std::vector<double> gammas(sol.S.size(), 0.0);
  for (int u = 0; u < t.n_users; ++u) {
    for (int f = 0; f < t.n_branches; ++f) {
      for (int a = 0; a < t.n_aps; ++a) {
        for (int w = 0; w < t.n_wavelengths; ++w) {
          if (!sol.S.at(u, f, a, w)) continue;
          const double gam = sinr(t, sol.S, inst.ap_available, inst.sigma, u, f, a, w);
          gammas[sol.S.index(u, f, a, w)] = gam;
          if (gam < Z) {
            fail(rep.threshold_ok,
                 "threshold: tuple (" + std::to_string(u) + "," + std::to_string(f) +
                                 "," + std::to_string(a) + "," + std::to_string(w) +
                                 ") gamma " + std::to_string(gam) + " < Z");
          }
        }
      }
    }
  }
  if (sol.gamma.size() == gammas.size()) {
    for (std::size_t i = 0; i < gammas.size(); ++i) {
      const double denom = std::max({std::abs(gammas[i]), std::abs(sol.gamma[i]), 1e-300});
      const double rel = std::abs(gammas[i] - sol.gamma[i]) / denom;
      rep.max_gamma_delta_rel = std::max(rep.max_gamma_delta_rel, rel);
    }
    if (rep.max_gamma_delta_rel >= 1e-9) fail(rep.gamma_ok, "gamma: recomputation mismatch");
  } else {
    fail(rep.gamma_ok, "gamma: shape mismatch");
  }
  const double obj = objective_value(gammas, sol.S, inst.params.k_weight);
  const double denom = std::max({std::abs(obj), std::abs(sol.objective), 1.0});
  rep.objective_delta_rel = std::abs(obj - sol.objective) / denom;
  if (rep.objective_delta_rel >= 1e-9) fail(rep.objective_ok, "objective: mismatch");
  return rep;
}

}  // namespace owc
