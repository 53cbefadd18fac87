#pragma once

#include <complex>
#include <cstdint>
#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "dnp2d/profile.hpp"

namespace dnp2d::field2d {

// Gridded density on the periodic square [-L/2, L/2)^2, n samples per axis
// (power of two), row-major with x varying over the first index.
struct Field2D {
  int n = 0;
  double L = 0.0;
  double t = 0.0;
  std::vector<double> values;

  double h() const { return L / n; }
  double cell_area() const { return h() * h(); }
  double mean() const;
  double total_charge() const { return mean() * L * L; }
  double& at(int i, int j) { return values[static_cast<std::size_t>(i) * n + j]; }
  double at(int i, int j) const { return values[static_cast<std::size_t>(i) * n + j]; }
  // coordinate of sample i along one axis
  double coord(int i) const { return -0.5 * L + h() * i; }
};

Field2D make_field(int n, double L, double t = 0.0);
bool same_grid(const Field2D& a, const Field2D& b);

// initial-data builders
Field2D gaussian_field(int n, double L, double mass, double sigma, double cx = 0.0,
                       double cy = 0.0);
// mass M concentrated in the cell containing the origin (value M/cellArea)
Field2D dirac_field(int n, double L, double mass);
Field2D self_similar_field(int n, double L, const profile::SelfSimilarProfile& p, double t0);
// band-limited smooth field from seeded low modes; identical continuum field
// for every n (spectral upsampling), squared when nonneg is requested
Field2D random_band_limited_field(int n, double L, int band, std::uint64_t seed,
                                  bool nonneg = true);

struct ScalingReport {
  double bilinear_discrepancy = 0.0;   // B(u_l, v_l) vs (B(u,v))_l, max norm
  double semigroup_discrepancy = 0.0;  // S(t)B(u_l,v_l) vs (S(l^2 t)B(u,v))_l
  bool band_limited = true;            // inputs within the dealias band
};

struct EstimateReport {
  double sup_ratio = 0.0;
  std::vector<std::pair<double, double>> series;  // (t, ratio)
};

class blow_up_error;

// FFT plans plus cached multiplier arrays for one (n, L) grid.  Constructed
// once per grid; used by one solver at a time (the scratch buffers are not
// shareable between concurrent calls).
class SpectralWorkspace {
 public:
  SpectralWorkspace(int n, double L);
  ~SpectralWorkspace();
  SpectralWorkspace(const SpectralWorkspace&) = delete;
  SpectralWorkspace& operator=(const SpectralWorkspace&) = delete;

  int n() const { return n_; }
  double L() const { return L_; }

  // spectral multiplication by exp(-|k|^2 s); s = 0 is the identity
  Field2D heat_apply(const Field2D& u, double s);

  // gradient of the zero-mean solution of -lap(phi) = u (k = 0 mode dropped)
  std::pair<Field2D, Field2D> potential_gradient(const Field2D& u);

  // plain spectral gradient of u
  std::pair<Field2D, Field2D> gradient(const Field2D& u);

  // B(u,v) = div(u grad phi_v), 2/3-rule dealiased; zero mean by construction
  Field2D bilinear_form(const Field2D& u, const Field2D& v);

  // discrete verification of the zero-scaling-order identities at lambda = 2:
  // the half-box fields reuse the same sample array
  ScalingReport scaling_check(const Field2D& u, const Field2D& v, double t);

  // exponential-Euler (order 1) or Heun-corrected (order 2) Duhamel stepping;
  // throws blow_up_error with the time stamp when the state stops being finite
  std::vector<Field2D> duhamel_solve(const Field2D& u0, double t_end, double dt, int order,
                                     std::span<const double> schedule, bool nonlinear = true);

  // t^{1/4} ||S(t) u0||_{4/3} on the given grid of times
  std::vector<std::pair<double, double>> besov_series(const Field2D& u0,
                                                      std::span<const double> t_grid);
  // max of the series: a lower-bound proxy of the sup over t > 0
  double besov_proxy(const Field2D& u0, std::span<const double> t_grid);

  // empirical ratio sup_t t^{3/4} ||S(t)B(u,v)||_{4/3} / (||u||_{4/3} ||v||_{4/3})
  EstimateReport estimate_check(const Field2D& u, const Field2D& v,
                                std::span<const double> t_grid);

  // max spectral magnitude outside the dealias band relative to the peak
  double band_excess(const Field2D& u);

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
  int n_;
  double L_;
};

class blow_up_error : public std::runtime_error {
 public:
  blow_up_error(const std::string& what, double t) : std::runtime_error(what), t_(t) {}
  double time() const noexcept { return t_; }

 private:
  double t_;
};

}  // namespace dnp2d::field2d
