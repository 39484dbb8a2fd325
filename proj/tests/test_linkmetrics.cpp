#include "catch_amalgamated.hpp"

#include <cmath>
#include <vector>

#include "owc/linkmetrics.hpp"
#include "owc/util.hpp"

using namespace owc;

namespace {

// Independent reference for the SINR denominator, written as the naive
// triple loop over interferers and illuminators.
double reference_sinr(const LinkTensors& t, const AssignmentTensor& S,
                      const std::vector<bool>& avail, double sigma, int u, int f, int a,
                      int wl) {
  if (!S.at(u, f, a, wl)) return 0.0;
  double interference = 0.0;
  double illumination = 0.0;
  for (int b = 0; b < t.n_aps; ++b) {
    if (b == a) continue;
    if (!avail[static_cast<std::size_t>(b)]) {
      illumination += t.n(u, f, b, wl);  // a failed AP still lights the room
      continue;
    }
    int occ = 0;
    for (int m = 0; m < t.n_users; ++m) {
      if (m == u) continue;
      for (int g = 0; g < t.n_branches; ++g) occ += S.at(m, g, b, wl);
    }
    if (occ == 1) {
      interference += t.r(u, f, b, wl);
    } else {
      illumination += t.n(u, f, b, wl);
    }
  }
  return t.r(u, f, a, wl) / (sigma + interference + illumination);
}

LinkTensors make_tensors(int u, int f, int a, int w) {
  LinkTensors t;
  t.n_users = u;
  t.n_branches = f;
  t.n_aps = a;
  t.n_wavelengths = w;
  t.R.assign(static_cast<std::size_t>(u) * f * a * w, 0.0);
  t.N = t.R;
  return t;
}

}  // namespace

TEST_CASE("receiver noise variance") {
  CHECK(receiver_noise_variance(4.47e-12, 1.75e9) ==
        Catch::Approx(3.4965e-14).epsilon(1e-4));
  CHECK(receiver_noise_variance(1.0, 1.0) == 1.0);
  CHECK(receiver_noise_variance(2e-12, 1e9) == Catch::Approx(4e-15).epsilon(1e-12));
  CHECK_THROWS_AS(receiver_noise_variance(0.0, 1.0), std::domain_error);
  CHECK_THROWS_AS(receiver_noise_variance(1.0, -1.0), std::domain_error);
}

TEST_CASE("dB conversions") {
  CHECK(to_db(1.0) == 0.0);
  CHECK(to_db(100.0) == Catch::Approx(20.0).epsilon(1e-12));
  CHECK(from_db(13.8) == Catch::Approx(23.9883).epsilon(1e-4));
  for (double v : {1e-6, 0.5, 3.0, 1e8}) {
    CHECK(from_db(to_db(v)) == Catch::Approx(v).epsilon(1e-12));
  }
  CHECK_THROWS_AS(to_db(0.0), std::domain_error);
  CHECK_THROWS_AS(to_db(-3.0), std::domain_error);
}

TEST_CASE("single-link SINR") {
  auto t = make_tensors(1, 1, 1, 1);
  t.R[0] = 1e-12;
  t.N[0] = 1e-12;
  AssignmentTensor S(1, 1, 1, 1);
  const std::vector<bool> avail{true};
  const double sigma = 3.4965e-14;

  CHECK(sinr(t, S, avail, sigma, 0, 0, 0, 0) == 0.0);  // unassigned
  S.set(0, 0, 0, 0, 1);
  const double g = sinr(t, S, avail, sigma, 0, 0, 0, 0);
  CHECK(g == Catch::Approx(28.5999).epsilon(1e-4));
  CHECK(to_db(g) == Catch::Approx(14.565).epsilon(1e-4));
  CHECK_THROWS_AS(sinr(t, S, avail, sigma, 0, 0, 1, 0), std::out_of_range);
  CHECK_THROWS_AS(sinr(t, S, avail, sigma, -1, 0, 0, 0), std::out_of_range);
}

TEST_CASE("co-channel interference from an occupied AP") {
  auto t = make_tensors(2, 1, 2, 1);
  // user 0: desired from AP 0, cross-channel from AP 1
  t.R[t.index(0, 0, 0, 0)] = 1e-12;
  t.R[t.index(0, 0, 1, 0)] = 1e-13;
  t.N[t.index(0, 0, 1, 0)] = 5e-14;
  // user 1: served by AP 1
  t.R[t.index(1, 0, 1, 0)] = 1e-12;
  AssignmentTensor S(2, 1, 2, 1);
  S.set(0, 0, 0, 0, 1);
  S.set(1, 0, 1, 0, 1);
  const std::vector<bool> avail{true, true};
  const double sigma = 3.4965e-14;

  const double g = sinr(t, S, avail, sigma, 0, 0, 0, 0);
  CHECK(g == Catch::Approx(1e-12 / (1e-13 + 3.4965e-14)).epsilon(1e-12));
  CHECK(g == Catch::Approx(7.409).epsilon(1e-3));

  // with AP 1 idle the bracket flips to the illumination term
  S.set(1, 0, 1, 0, 0);
  CHECK(sinr(t, S, avail, sigma, 0, 0, 0, 0) ==
        Catch::Approx(1e-12 / (5e-14 + 3.4965e-14)).epsilon(1e-12));

  // with AP 1 failed it stops interfering but keeps illuminating
  S.set(1, 0, 1, 0, 1);
  CHECK(sinr(t, S, {true, false}, sigma, 0, 0, 0, 0) ==
        Catch::Approx(1e-12 / (5e-14 + 3.4965e-14)).epsilon(1e-12));
}

TEST_CASE("SINR decreases with noise and matches the reference on random S") {
  Rng rng(77);
  for (int trial = 0; trial < 50; ++trial) {
    auto t = make_tensors(2, 2, 3, 2);
    for (auto& v : t.R) v = 1e-13 * (1 + static_cast<double>(rng.bounded(1000)));
    for (auto& v : t.N) v = 1e-13 * (1 + static_cast<double>(rng.bounded(1000)));
    AssignmentTensor S(2, 2, 3, 2);
    // one occupant per (AP, wavelength), one wavelength per (user, AP)
    for (int a = 0; a < 3; ++a) {
      for (int w = 0; w < 2; ++w) {
        const auto pick = rng.bounded(5);
        if (pick >= 4) continue;
        const int u = static_cast<int>(pick) / 2;
        const int f = static_cast<int>(pick) % 2;
        bool user_has_ap = false;
        for (int g = 0; g < 2 && !user_has_ap; ++g) {
          for (int ww = 0; ww < 2 && !user_has_ap; ++ww) {
            user_has_ap = S.at(u, g, a, ww) != 0;
          }
        }
        if (!user_has_ap) S.set(u, f, a, w, 1);
      }
    }
    const std::vector<bool> avail{true, true, trial % 2 == 0};
    for (int u = 0; u < 2; ++u) {
      for (int f = 0; f < 2; ++f) {
        for (int a = 0; a < 3; ++a) {
          if (!avail[static_cast<std::size_t>(a)]) continue;
          for (int w = 0; w < 2; ++w) {
            const double got = sinr(t, S, avail, 1e-13, u, f, a, w);
            const double want = S.at(u, f, a, w)
                                    ? reference_sinr(t, S, avail, 1e-13, u, f, a, w)
                                    : 0.0;
            CHECK(got == Catch::Approx(want).epsilon(1e-12).margin(0.0));
            if (S.at(u, f, a, w)) {
              CHECK(sinr(t, S, avail, 2e-13, u, f, a, w) < got);
            }
          }
        }
      }
    }
  }
}

TEST_CASE("deassigning a neighbor is neutral when N equals R") {
  auto t = make_tensors(2, 1, 2, 1);
  t.R[t.index(0, 0, 0, 0)] = 1e-12;
  t.R[t.index(0, 0, 1, 0)] = 2e-13;
  t.R[t.index(1, 0, 1, 0)] = 1e-12;
  t.N = t.R;
  AssignmentTensor S(2, 1, 2, 1);
  S.set(0, 0, 0, 0, 1);
  S.set(1, 0, 1, 0, 1);
  const std::vector<bool> avail{true, true};
  const double with_neighbor = sinr(t, S, avail, 1e-14, 0, 0, 0, 0);
  S.set(1, 0, 1, 0, 0);
  CHECK(sinr(t, S, avail, 1e-14, 0, 0, 0, 0) == with_neighbor);

  // with a dimmer idle level the neighbor's departure helps
  t.N[t.index(0, 0, 1, 0)] = 1e-13;
  S.set(1, 0, 1, 0, 1);
  const double occupied = sinr(t, S, avail, 1e-14, 0, 0, 0, 0);
  S.set(1, 0, 1, 0, 0);
  CHECK(sinr(t, S, avail, 1e-14, 0, 0, 0, 0) > occupied);
}

TEST_CASE("an over-occupied slot is rejected") {
  auto t = make_tensors(3, 1, 2, 1);
  for (auto& v : t.R) v = 1e-12;
  t.N = t.R;
  AssignmentTensor S(3, 1, 2, 1);
  S.set(0, 0, 0, 0, 1);
  S.set(1, 0, 1, 0, 1);
  S.set(2, 0, 1, 0, 1);  // second occupant of (AP 1, wl 0)
  const std::vector<bool> avail{true, true};
  CHECK_THROWS_AS(sinr(t, S, avail, 1e-14, 0, 0, 0, 0), std::domain_error);
}

TEST_CASE("objective value") {
  AssignmentTensor S(1, 1, 1, 1);
  std::vector<double> gammas{0.0};
  CHECK(objective_value(gammas, S, 1000.0) == 0.0);

  S.set(0, 0, 0, 0, 1);
  gammas[0] = 28.60;
  CHECK(objective_value(gammas, S, 1000.0) == Catch::Approx(1028.60).epsilon(1e-12));

  AssignmentTensor S2(1, 1, 2, 1);
  S2.set(0, 0, 0, 0, 1);
  S2.set(0, 0, 1, 0, 1);
  std::vector<double> g2{27.5, 27.5};
  CHECK(objective_value(g2, S2, 1000.0) == Catch::Approx(2055.0).epsilon(1e-12));

  CHECK_THROWS_AS(objective_value(g2, S, 1000.0), std::invalid_argument);
}
