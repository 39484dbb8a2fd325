#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "owc/config.hpp"
#include "owc/util.hpp"
#include "owc/vec3.hpp"

namespace owc {

struct SurfaceElement {
  Vec3 center;
  Vec3 normal;  // unit, into the room
  double area = 0.0;
  double reflectance = 0.0;
};

namespace detail {

// Lambertian LOS gain with degenerate geometry mapped to zero. The
// public los_gain below adds the coincident-point check; the tracer uses
// this form directly because element meshes legitimately contain points
// at or behind a transmitter.
inline double gain_or_zero(const Vec3& tx_pos, const Vec3& tx_normal, double tx_mode_n,
                           const Vec3& rx_pos, const Vec3& rx_normal, double rx_area,
                           double fov_deg) {
  const Vec3 ray = rx_pos - tx_pos;
  const double d2 = ray.norm2();
  if (d2 < 1e-18) return 0.0;
  const double d = std::sqrt(d2);
  const double cos_phi = tx_normal.dot(ray) / d;
  if (cos_phi <= 0.0) return 0.0;
  const double cos_theta = rx_normal.dot(ray * -1.0) / d;
  const double cos_fov = std::cos(deg_to_rad(fov_deg));
  if (cos_theta < cos_fov || cos_theta <= 0.0) return 0.0;
  const double radial = (tx_mode_n == 1.0) ? cos_phi : std::pow(cos_phi, tx_mode_n);
  return (tx_mode_n + 1.0) / (2.0 * kPi * d2) * radial * rx_area * cos_theta;
}

}  // namespace detail

inline double los_gain(const Vec3& tx_pos, const Vec3& tx_normal, double tx_mode_n,
                       const Vec3& rx_pos, const Vec3& rx_normal, double rx_area,
                       double fov_deg) {
  if ((rx_pos - tx_pos).norm2() < 1e-18) {
    throw std::domain_error("los_gain: coincident transmitter and receiver");
  }
  return detail::gain_or_zero(tx_pos, tx_normal, tx_mode_n, rx_pos, rx_normal, rx_area,
                              fov_deg);
}

namespace detail {

// One rectangular interior surface, gridded into near-square cells.
// Edge cells are clipped when the element size does not divide the span.
template <typename MakeElement>
void grid_surface(double span_u, double span_v, double element_size,
                  double reflectance, const MakeElement& make,
                  std::vector<SurfaceElement>& out) {
  const int nu = static_cast<int>(std::ceil(span_u / element_size - 1e-9));
  const int nv = static_cast<int>(std::ceil(span_v / element_size - 1e-9));
  for (int j = 0; j < nv; ++j) {
    const double v0 = j * element_size;
    const double v1 = std::min((j + 1) * element_size, span_v);
    for (int i = 0; i < nu; ++i) {
      const double u0 = i * element_size;
      const double u1 = std::min((i + 1) * element_size, span_u);
      SurfaceElement e = make(0.5 * (u0 + u1), 0.5 * (v0 + v1));
      e.area = (u1 - u0) * (v1 - v0);
      e.reflectance = reflectance;
      out.push_back(e);
    }
  }
}

}  // namespace detail

// All six interior surfaces in a fixed order: ceiling, floor, wall y=0,
// wall y=width, wall x=0, wall x=length. Row-major within each surface.
inline std::vector<SurfaceElement> discretize_room(const RoomConfig& room,
                                                   double element_size) {
  room.check();
  const double min_dim = std::min({room.length, room.width, room.height});
  if (!(element_size > 0.0) || element_size > min_dim) {
    throw std::domain_error("discretize_room: element size out of range");
  }
  const double rho_wc = room.wall_ceiling_reflectance;
  const double rho_fl = room.floor_reflectance;
  const double L = room.length;
  const double W = room.width;
  const double H = room.height;
  std::vector<SurfaceElement> out;

  detail::grid_surface(L, W, element_size, rho_wc,
                       [&](double u, double v) {
                         return SurfaceElement{{u, v, H}, {0, 0, -1}};
                       },
                       out);
  detail::grid_surface(L, W, element_size, rho_fl,
                       [&](double u, double v) {
                         return SurfaceElement{{u, v, 0}, {0, 0, 1}};
                       },
                       out);
  detail::grid_surface(L, H, element_size, rho_wc,
                       [&](double u, double v) {
                         return SurfaceElement{{u, 0, v}, {0, 1, 0}};
                       },
                       out);
  detail::grid_surface(L, H, element_size, rho_wc,
                       [&](double u, double v) {
                         return SurfaceElement{{u, W, v}, {0, -1, 0}};
                       },
                       out);
  detail::grid_surface(W, H, element_size, rho_wc,
                       [&](double u, double v) {
                         return SurfaceElement{{0, u, v}, {1, 0, 0}};
                       },
                       out);
  detail::grid_surface(W, H, element_size, rho_wc,
                       [&](double u, double v) {
                         return SurfaceElement{{L, u, v}, {-1, 0, 0}};
                       },
                       out);
  return out;
}

// Direct single-bounce sum: AP -> element -> receiver branch. Elements
// receive with a 90-degree FOV and re-emit as Lambertian sources of the
// room's surface order.
inline double first_order_gain(const ApSpec& ap, const Vec3& loc, const BranchSpec& branch,
                               const std::vector<SurfaceElement>& elements,
                               double surface_order = 1.0) {
  const double n_ap = ap.lambertian_mode_n();
  const Vec3 rxn = branch.normal();
  double sum = 0.0;
  for (const auto& e : elements) {
    const double g1 = detail::gain_or_zero(ap.position, ap.boresight, n_ap, e.center,
                                           e.normal, e.area, 90.0);
    if (g1 == 0.0) continue;
    const double g2 = detail::gain_or_zero(e.center, e.normal, surface_order, loc, rxn,
                                           branch.area_m2, branch.fov_deg);
    sum += g1 * e.reflectance * g2;
  }
  return sum;
}

// Direct two-bounce double sum: AP -> e1 -> e2 -> receiver branch. Kept as
// the reference evaluation; the factorized path in build_gain_map must
// match it within 1e-9 relative.
inline double second_order_gain(const ApSpec& ap, const Vec3& loc, const BranchSpec& branch,
                                const std::vector<SurfaceElement>& elements,
                                double surface_order = 1.0) {
  const double n_ap = ap.lambertian_mode_n();
  const Vec3 rxn = branch.normal();
  double sum = 0.0;
  for (std::size_t i = 0; i < elements.size(); ++i) {
    const auto& e1 = elements[i];
    const double g1 = detail::gain_or_zero(ap.position, ap.boresight, n_ap, e1.center,
                                           e1.normal, e1.area, 90.0);
    if (g1 == 0.0) continue;
    for (std::size_t j = 0; j < elements.size(); ++j) {
      if (i == j) continue;
      const auto& e2 = elements[j];
      const double g12 = detail::gain_or_zero(e1.center, e1.normal, surface_order,
                                              e2.center, e2.normal, e2.area, 90.0);
      if (g12 == 0.0) continue;
      const double g2 = detail::gain_or_zero(e2.center, e2.normal, surface_order, loc,
                                             rxn, branch.area_m2, branch.fov_deg);
      sum += g1 * e1.reflectance * g12 * e2.reflectance * g2;
    }
  }
  return sum;
}

// Optical DC gains indexed [location][branch][AP], flattened row-major.
struct GainMap {
  int n_locations = 0;
  int n_branches = 0;
  int n_aps = 0;
  std::vector<double> los;
  std::vector<double> first_order;
  std::vector<double> second_order;
  std::vector<double> total;

  std::size_t index(int loc, int branch, int ap) const {
    return (static_cast<std::size_t>(loc) * n_branches + branch) * n_aps + ap;
  }
};

// Factorized ray trace. Per output entry the reduction order over elements
// is fixed, so results are bit-identical for any worker count.
inline GainMap build_gain_map(const RoomConfig& room, const std::vector<ApSpec>& aps,
                              const ReceiverSpec& receiver, const LocationGrid& grid,
                              int workers = 1, double first_order_element_override = 0.0) {
  room.check();
  const int L = static_cast<int>(grid.points.size());
  const int F = kNumBranches;
  const int A = static_cast<int>(aps.size());
  const double surface_order = room.lambertian_order_surfaces;

  GainMap gm;
  gm.n_locations = L;
  gm.n_branches = F;
  gm.n_aps = A;
  const std::size_t total_entries = static_cast<std::size_t>(L) * F * A;
  gm.los.assign(total_entries, 0.0);
  gm.first_order.assign(total_entries, 0.0);
  gm.second_order.assign(total_entries, 0.0);
  gm.total.assign(total_entries, 0.0);

  // LOS
  parallel_for(total_entries, workers, [&](std::size_t idx) {
    const int ap = static_cast<int>(idx % A);
    const int f = static_cast<int>((idx / A) % F);
    const int loc = static_cast<int>(idx / (static_cast<std::size_t>(A) * F));
    const auto& b = receiver.branches[static_cast<std::size_t>(f)];
    gm.los[idx] = detail::gain_or_zero(aps[static_cast<std::size_t>(ap)].position,
                                       aps[static_cast<std::size_t>(ap)].boresight,
                                       aps[static_cast<std::size_t>(ap)].lambertian_mode_n(),
                                       grid.points[static_cast<std::size_t>(loc)],
                                       b.normal(), b.area_m2, b.fov_deg);
  });

  const auto trace_bounces = [&](const std::vector<SurfaceElement>& elems, bool second,
                                 std::vector<double>& out) {
    const std::size_t E = elems.size();
    // T[ap][e]: AP to element.
    std::vector<double> T(static_cast<std::size_t>(A) * E);
    parallel_for(E, workers, [&](std::size_t e) {
      for (int ap = 0; ap < A; ++ap) {
        T[static_cast<std::size_t>(ap) * E + e] = detail::gain_or_zero(
            aps[static_cast<std::size_t>(ap)].position,
            aps[static_cast<std::size_t>(ap)].boresight,
            aps[static_cast<std::size_t>(ap)].lambertian_mode_n(), elems[e].center,
            elems[e].normal, elems[e].area, 90.0);
      }
    });
    // G[e][loc*F+f]: element to receiver branch (reflectance applied).
    const std::size_t LF = static_cast<std::size_t>(L) * F;
    std::vector<double> G(E * LF);
    parallel_for(E, workers, [&](std::size_t e) {
      for (int loc = 0; loc < L; ++loc) {
        for (int f = 0; f < F; ++f) {
          const auto& b = receiver.branches[static_cast<std::size_t>(f)];
          G[e * LF + static_cast<std::size_t>(loc) * F + f] =
              elems[e].reflectance *
              detail::gain_or_zero(elems[e].center, elems[e].normal, surface_order,
                                   grid.points[static_cast<std::size_t>(loc)], b.normal(),
                                   b.area_m2, b.fov_deg);
        }
      }
    });

    std::vector<double> src = T;  // [A][E], source-to-final-element transfer
    if (second) {
      // Y[ap][e2] = sum_e1 T[ap][e1] * rho(e1) * g(e1->e2); the receiving
      // element's reflectance is already folded into G.
      std::vector<double> Y(static_cast<std::size_t>(A) * E, 0.0);
      parallel_for(E, workers, [&](std::size_t e2) {
        for (std::size_t e1 = 0; e1 < E; ++e1) {
          if (e1 == e2) continue;
          const double g12 = detail::gain_or_zero(elems[e1].center, elems[e1].normal,
                                                  surface_order, elems[e2].center,
                                                  elems[e2].normal, elems[e2].area, 90.0);
          if (g12 == 0.0) continue;
          const double w = elems[e1].reflectance * g12;
          for (int ap = 0; ap < A; ++ap) {
            Y[static_cast<std::size_t>(ap) * E + e2] +=
                T[static_cast<std::size_t>(ap) * E + e1] * w;
          }
        }
      });
      src.swap(Y);
    }

    parallel_for(total_entries, workers, [&](std::size_t idx) {
      const int ap = static_cast<int>(idx % A);
      const int f = static_cast<int>((idx / A) % F);
      const int loc = static_cast<int>(idx / (static_cast<std::size_t>(A) * F));
      const std::size_t lf = static_cast<std::size_t>(loc) * F + f;
      double sum = 0.0;
      for (std::size_t e = 0; e < E; ++e) {
        sum += src[static_cast<std::size_t>(ap) * E + e] * G[e * LF + lf];
      }
      out[idx] = sum;
    });
  };

  const double first_size =
      first_order_element_override > 0.0 ? first_order_element_override : room.first_order_element;
  trace_bounces(discretize_room(room, first_size), false, gm.first_order);
  trace_bounces(discretize_room(room, room.second_order_element), true, gm.second_order);

  for (std::size_t i = 0; i < total_entries; ++i) {
    gm.total[i] = gm.los[i] + gm.first_order[i] + gm.second_order[i];
  }
  return gm;
}

// Squared signal and background photocurrents, [loc][branch][AP][wavelength].
struct ChannelTensor {
  int n_locations = 0;
  int n_branches = 0;
  int n_aps = 0;
  int n_wavelengths = 0;
  double illumination_scale = 1.0;
  std::uint64_t config_fingerprint = 0;
  std::vector<double> R;  // A^2
  std::vector<double> N;  // A^2

  std::size_t index(int loc, int branch, int ap, int wl) const {
    return ((static_cast<std::size_t>(loc) * n_branches + branch) * n_aps + ap) *
               n_wavelengths +
           wl;
  }
};

inline ChannelTensor build_channel_tensor(const SystemConfig& cfg, const GainMap& gm) {
  ChannelTensor ct;
  ct.n_locations = gm.n_locations;
  ct.n_branches = gm.n_branches;
  ct.n_aps = gm.n_aps;
  ct.n_wavelengths = kNumWavelengths;
  ct.illumination_scale = cfg.illumination_scale;
  ct.config_fingerprint = cfg.fingerprint();
  const std::size_t total = static_cast<std::size_t>(gm.total.size()) * kNumWavelengths;
  ct.R.assign(total, 0.0);
  ct.N.assign(total, 0.0);
  const double s2 = cfg.illumination_scale * cfg.illumination_scale;
  for (int loc = 0; loc < gm.n_locations; ++loc) {
    for (int f = 0; f < gm.n_branches; ++f) {
      for (int ap = 0; ap < gm.n_aps; ++ap) {
        const double h = gm.total[gm.index(loc, f, ap)];
        for (int wl = 0; wl < kNumWavelengths; ++wl) {
          const double photocurrent =
              cfg.receiver.responsivity_a_per_w[static_cast<std::size_t>(wl)] *
              cfg.aps[static_cast<std::size_t>(ap)].transmit_power_w(wl) * h;
          const double r = photocurrent * photocurrent;
          const std::size_t i = ct.index(loc, f, ap, wl);
          ct.R[i] = r;
          ct.N[i] = s2 * r;
        }
      }
    }
  }
  return ct;
}

inline ChannelTensor build_channel_tensor(const SystemConfig& cfg, int workers = 1) {
  return build_channel_tensor(
      cfg, build_gain_map(cfg.room, cfg.aps, cfg.receiver, cfg.grid, workers));
}

// --- channel artifact file -------------------------------------------------
//
// Binary layout, little-endian:
//   bytes 0..7   magic "OWCHAN01"
//   u32          version (1)
//   u64          config fingerprint
//   u32 x4       dimensions L, F, A, W
//   f64          illumination_scale
//   f64 x L*F*A*W  R entries, row-major (loc, branch, ap, wavelength), A^2
//   f64 x L*F*A*W  N entries, same order

inline void save_channel_tensor(const ChannelTensor& ct, const std::string& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("save_channel_tensor: cannot open " + path);
  os.write("OWCHAN01", 8);
  const std::uint32_t version = 1;
  os.write(reinterpret_cast<const char*>(&version), sizeof(version));
  os.write(reinterpret_cast<const char*>(&ct.config_fingerprint), sizeof(std::uint64_t));
  const std::uint32_t dims[4] = {
      static_cast<std::uint32_t>(ct.n_locations), static_cast<std::uint32_t>(ct.n_branches),
      static_cast<std::uint32_t>(ct.n_aps), static_cast<std::uint32_t>(ct.n_wavelengths)};
  os.write(reinterpret_cast<const char*>(dims), sizeof(dims));
  os.write(reinterpret_cast<const char*>(&ct.illumination_scale), sizeof(double));
  os.write(reinterpret_cast<const char*>(ct.R.data()),
           static_cast<std::streamsize>(ct.R.size() * sizeof(double)));
  os.write(reinterpret_cast<const char*>(ct.N.data()),
           static_cast<std::streamsize>(ct.N.size() * sizeof(double)));
  if (!os) throw std::runtime_error("save_channel_tensor: write failed for " + path);
}

inline ChannelTensor load_channel_tensor(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("load_channel_tensor: cannot open " + path);
  char magic[8];
  is.read(magic, 8);
  if (!is || std::string(magic, 8) != "OWCHAN01") {
    throw std::runtime_error("load_channel_tensor: bad magic in " + path);
  }
  std::uint32_t version = 0;
  is.read(reinterpret_cast<char*>(&version), sizeof(version));
  if (version != 1) throw std::runtime_error("load_channel_tensor: unsupported version");
  ChannelTensor ct;
  is.read(reinterpret_cast<char*>(&ct.config_fingerprint), sizeof(std::uint64_t));
  std::uint32_t dims[4];
  is.read(reinterpret_cast<char*>(dims), sizeof(dims));
  ct.n_locations = static_cast<int>(dims[0]);
  ct.n_branches = static_cast<int>(dims[1]);
  ct.n_aps = static_cast<int>(dims[2]);
  ct.n_wavelengths = static_cast<int>(dims[3]);
  is.read(reinterpret_cast<char*>(&ct.illumination_scale), sizeof(double));
  const std::size_t total = static_cast<std::size_t>(dims[0]) * dims[1] * dims[2] * dims[3];
  ct.R.resize(total);
  ct.N.resize(total);
  is.read(reinterpret_cast<char*>(ct.R.data()),
          static_cast<std::streamsize>(total * sizeof(double)));
  is.read(reinterpret_cast<char*>(ct.N.data()),
          static_cast<std::streamsize>(total * sizeof(double)));
  if (!is) throw std::runtime_error("load_channel_tensor: truncated file " + path);
  return ct;
}

}  // namespace owc
