#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace owc {

inline double receiver_noise_variance(double noise_density_a_per_sqrthz,
                                      double bandwidth_hz) {
  if (!(noise_density_a_per_sqrthz > 0.0) || !(bandwidth_hz > 0.0)) {
    throw std::domain_error("receiver_noise_variance: inputs must be positive");
  }
  return noise_density_a_per_sqrthz * noise_density_a_per_sqrthz * bandwidth_hz;
}

inline double to_db(double linear) {
  if (!(linear > 0.0)) throw std::domain_error("to_db: value must be positive");
  return 10.0 * std::log10(linear);
}

inline double from_db(double db) { return std::pow(10.0, db / 10.0); }

// Binary assignment tensor S indexed [user][branch][AP][wavelength].
struct AssignmentTensor {
  int n_users = 0;
  int n_branches = 0;
  int n_aps = 0;
  int n_wavelengths = 0;
  std::vector<std::uint8_t> S;

  AssignmentTensor() = default;
  AssignmentTensor(int u, int f, int a, int w)
      : n_users(u), n_branches(f), n_aps(a), n_wavelengths(w),
        S(static_cast<std::size_t>(u) * f * a * w, 0) {}

  std::size_t index(int u, int f, int a, int w) const {
    return ((static_cast<std::size_t>(u) * n_branches + f) * n_aps + a) * n_wavelengths + w;
  }
  std::uint8_t at(int u, int f, int a, int w) const { return S[index(u, f, a, w)]; }
  void set(int u, int f, int a, int w, std::uint8_t v) { S[index(u, f, a, w)] = v; }
  std::size_t size() const { return S.size(); }
};

// Channel slices for the users of one problem, same indexing as S.
struct LinkTensors {
  int n_users = 0;
  int n_branches = 0;
  int n_aps = 0;
  int n_wavelengths = 0;
  std::vector<double> R;
  std::vector<double> N;

  std::size_t index(int u, int f, int a, int w) const {
    return ((static_cast<std::size_t>(u) * n_branches + f) * n_aps + a) * n_wavelengths + w;
  }
  double r(int u, int f, int a, int w) const { return R[index(u, f, a, w)]; }
  double n(int u, int f, int a, int w) const { return N[index(u, f, a, w)]; }
};

// SINR of tuple (u, f, a, wl) for assignment S. A failed AP carries no
// data: it cannot serve or interfere, but its lamps stay lit, so it keeps
// contributing its illumination-noise term. This keeps the optimal
// objective monotone under AP failures (a masked optimum stays feasible,
// with identical gammas, once the mask is lifted).
// The illumination bracket must stay in {0,1}; anything else means S
// violates the single-occupancy constraint and is rejected.
inline double sinr(const LinkTensors& t, const AssignmentTensor& S,
                   const std::vector<bool>& ap_available, double sigma, int u, int f,
                   int a, int wl) {
  if (u < 0 || u >= t.n_users || f < 0 || f >= t.n_branches || a < 0 || a >= t.n_aps ||
      wl < 0 || wl >= t.n_wavelengths) {
    throw std::out_of_range("sinr: tuple index out of range");
  }
  if (S.at(u, f, a, wl) == 0) return 0.0;
  double den = sigma;
  for (int b = 0; b < t.n_aps; ++b) {
    if (b == a) continue;
    if (!ap_available[static_cast<std::size_t>(b)]) {
      den += t.n(u, f, b, wl);
      continue;
    }
    int occupied_by_other = 0;
    for (int m = 0; m < t.n_users; ++m) {
      if (m == u) continue;
      for (int g = 0; g < t.n_branches; ++g) {
        occupied_by_other += S.at(m, g, b, wl);
      }
    }
    if (occupied_by_other > 1) {
      throw std::domain_error(
          "sinr: illumination bracket outside {0,1}; an (AP, wavelength) slot is "
          "over-occupied");
    }
    den += t.r(u, f, b, wl) * occupied_by_other +
           t.n(u, f, b, wl) * (1 - occupied_by_other);
  }
  return t.r(u, f, a, wl) / den;
}

// Objective: sum over all tuples of gamma + K * S.
inline double objective_value(const std::vector<double>& gammas, const AssignmentTensor& S,
                              double k_weight) {
  if (gammas.size() != S.size()) {
    throw std::invalid_argument("objective_value: shape mismatch");
  }
  double sum = 0.0;
  for (std::size_t i = 0; i < gammas.size(); ++i) {
    sum += gammas[i] + k_weight * S.S[i];
  }
  return sum;
}

}  // namespace owc
