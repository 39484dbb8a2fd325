#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "owc/util.hpp"
#include "owc/vec3.hpp"

namespace owc {

// Wavelength indices follow the RYGB order used throughout.
enum Wavelength : int { kRed = 0, kYellow = 1, kGreen = 2, kBlue = 3 };
inline constexpr int kNumWavelengths = 4;
inline constexpr int kNumBranches = 4;

// Lambertian mode number for a half-power semi-angle in degrees.
inline double lambertian_order(double semi_angle_deg) {
  if (!(semi_angle_deg > 0.0 && semi_angle_deg < 90.0)) {
    throw std::domain_error("lambertian_order: semi-angle must be in (0, 90) degrees");
  }
  return -std::log(2.0) / std::log(std::cos(deg_to_rad(semi_angle_deg)));
}

struct RoomConfig {
  double length = 8.0;  // x, m
  double width = 4.0;   // y, m
  double height = 3.0;  // z, m
  double wall_ceiling_reflectance = 0.8;
  double floor_reflectance = 0.3;
  double lambertian_order_surfaces = 1.0;
  double first_order_element = 0.05;   // m
  double second_order_element = 0.20;  // m

  void check() const {
    if (length <= 0 || width <= 0 || height <= 0)
      throw std::domain_error("RoomConfig: dimensions must be positive");
    if (wall_ceiling_reflectance < 0 || wall_ceiling_reflectance > 1 ||
        floor_reflectance < 0 || floor_reflectance > 1)
      throw std::domain_error("RoomConfig: reflectances must be in [0,1]");
    if (first_order_element <= 0 || second_order_element <= 0)
      throw std::domain_error("RoomConfig: element sizes must be positive");
  }
};

struct ApSpec {
  Vec3 position;                     // on the ceiling, z = room height
  Vec3 boresight{0.0, 0.0, -1.0};    // straight down
  double semi_angle_half_power = 60.0;  // degrees
  int lds_per_ap = 12;
  std::array<double, kNumWavelengths> per_ld_power_w{0.8, 0.5, 0.3, 0.3};

  double lambertian_mode_n() const { return lambertian_order(semi_angle_half_power); }

  // Total transmit power per wavelength: every LD contributes each colour.
  double transmit_power_w(int wavelength) const {
    return lds_per_ap * per_ld_power_w.at(static_cast<std::size_t>(wavelength));
  }
};

struct BranchSpec {
  double azimuth_deg = 0.0;
  double elevation_deg = 70.0;
  double fov_deg = 25.0;
  double area_m2 = 20e-6;

  Vec3 normal() const {
    const double a = deg_to_rad(azimuth_deg);
    const double e = deg_to_rad(elevation_deg);
    return {std::cos(e) * std::cos(a), std::cos(e) * std::sin(a), std::sin(e)};
  }
};

struct ReceiverSpec {
  std::array<BranchSpec, kNumBranches> branches;
  std::array<double, kNumWavelengths> responsivity_a_per_w{0.4, 0.435, 0.3, 0.2};
  double bandwidth_hz = 1.75e9;
  double noise_density_a_per_sqrthz = 4.47e-12;
  double height_m = 1.0;
};

struct LocationGrid {
  std::vector<Vec3> points;
};

// Table-1 AP layout: a 2x4 grid, width in {1,3} m, length in {1,3,5,7} m,
// on the ceiling. AP list order matches the table (AP1 first).
inline std::vector<ApSpec> default_aps(const RoomConfig& room) {
  std::vector<ApSpec> aps;
  for (double w : {1.0, 3.0}) {
    for (double l : {1.0, 3.0, 5.0, 7.0}) {
      ApSpec ap;
      ap.position = {l, w, room.height};
      aps.push_back(ap);
    }
  }
  return aps;
}

inline ReceiverSpec default_receiver() {
  ReceiverSpec rx;
  const double azimuths[kNumBranches] = {45.0, 135.0, 225.0, 315.0};
  for (int f = 0; f < kNumBranches; ++f) {
    rx.branches[static_cast<std::size_t>(f)].azimuth_deg = azimuths[f];
    rx.branches[static_cast<std::size_t>(f)].elevation_deg = 70.0;
    rx.branches[static_cast<std::size_t>(f)].fov_deg = 25.0;
    rx.branches[static_cast<std::size_t>(f)].area_m2 = 20e-6;
  }
  return rx;
}

// 32 cell centres of an 8x4 grid of 1m x 1m cells on the communication
// plane. Index = width_row * 8 + length_col.
inline LocationGrid default_grid(const RoomConfig& room, double plane_height = 1.0) {
  LocationGrid grid;
  const int nx = 8;
  const int ny = 4;
  const double dx = room.length / nx;
  const double dy = room.width / ny;
  for (int iy = 0; iy < ny; ++iy) {
    for (int ix = 0; ix < nx; ++ix) {
      grid.points.push_back({(ix + 0.5) * dx, (iy + 0.5) * dy, plane_height});
    }
  }
  return grid;
}

struct SinrParams {
  double k_weight = 1000.0;
  double threshold_db = 13.8;

  double z_linear() const { return std::pow(10.0, threshold_db / 10.0); }
};

// Full system configuration; defaults give the reference 8 x 4 x 3 m
// deployment (the "table1" configuration).
struct SystemConfig {
  RoomConfig room;
  std::vector<ApSpec> aps;
  ReceiverSpec receiver;
  LocationGrid grid;
  SinrParams sinr;
  double illumination_scale = 1.0;

  static SystemConfig table1_default() {
    SystemConfig cfg;
    cfg.aps = default_aps(cfg.room);
    cfg.receiver = default_receiver();
    cfg.grid = default_grid(cfg.room, cfg.receiver.height_m);
    return cfg;
  }

  // Stable content hash over every parameter that influences the channel
  // tensors; used to key trace artifacts.
  std::uint64_t fingerprint() const {
    std::ostringstream os;
    os.precision(17);
    os << "owc-config-v1;";
    os << room.length << ',' << room.width << ',' << room.height << ','
       << room.wall_ceiling_reflectance << ',' << room.floor_reflectance << ','
       << room.lambertian_order_surfaces << ',' << room.first_order_element << ','
       << room.second_order_element << ';';
    for (const auto& ap : aps) {
      os << ap.position.x << ',' << ap.position.y << ',' << ap.position.z << ','
         << ap.semi_angle_half_power << ',' << ap.lds_per_ap;
      for (double p : ap.per_ld_power_w) os << ',' << p;
      os << '|';
    }
    os << ';';
    for (const auto& b : receiver.branches) {
      os << b.azimuth_deg << ',' << b.elevation_deg << ',' << b.fov_deg << ','
         << b.area_m2 << '|';
    }
    for (double r : receiver.responsivity_a_per_w) os << r << ',';
    os << receiver.bandwidth_hz << ',' << receiver.noise_density_a_per_sqrthz << ','
       << receiver.height_m << ';';
    for (const auto& p : grid.points) os << p.x << ',' << p.y << ',' << p.z << '|';
    os << ';' << sinr.k_weight << ',' << sinr.threshold_db << ','
       << illumination_scale;
    return fnv1a64(os.str());
  }
};

}  // namespace owc
