#include "dnp2d/field2d.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

#include "dnp2d/analysis.hpp"
#include "dnp2d/kernels.hpp"

namespace dnp2d::field2d {

using profile::kPi;
using kern::cplx;

double Field2D::mean() const {
  return kern::sum(values) / static_cast<double>(values.size());
}

Field2D make_field(int n, double L, double t) {
  if (n < 4 || (n & (n - 1)) != 0)
    throw std::invalid_argument("Field2D: n must be a power of two >= 4");
  if (!(L > 0.0)) throw std::invalid_argument("Field2D: need L > 0");
  Field2D f;
  f.n = n;
  f.L = L;
  f.t = t;
  f.values.assign(static_cast<std::size_t>(n) * n, 0.0);
  return f;
}

bool same_grid(const Field2D& a, const Field2D& b) { return a.n == b.n && a.L == b.L; }

Field2D gaussian_field(int n, double L, double mass, double sigma, double cx, double cy) {
  if (!(sigma > 0.0)) throw std::invalid_argument("gaussian_field: need sigma > 0");
  Field2D f = make_field(n, L);
  const double amp = mass / (2.0 * kPi * sigma * sigma);
  for (int i = 0; i < n; ++i) {
    const double x = f.coord(i) - cx;
    for (int j = 0; j < n; ++j) {
      const double y = f.coord(j) - cy;
      f.at(i, j) = amp * std::exp(-(x * x + y * y) / (2.0 * sigma * sigma));
    }
  }
  return f;
}

Field2D dirac_field(int n, double L, double mass) {
  Field2D f = make_field(n, L);
  f.at(n / 2, n / 2) = mass / f.cell_area();  // cell at the origin
  return f;
}

Field2D self_similar_field(int n, double L, const profile::SelfSimilarProfile& p, double t0) {
  Field2D f = make_field(n, L, t0);
  for (int i = 0; i < n; ++i) {
    const double x = f.coord(i);
    for (int j = 0; j < n; ++j) {
      const double y = f.coord(j);
      f.at(i, j) = profile::self_similar_density(p, std::sqrt(x * x + y * y), t0);
    }
  }
  return f;
}

// ---------------------------------------------------------------------------

struct SpectralWorkspace::Impl {
  int n;
  double L;
  std::size_t nr;  // n*n
  std::size_t nc;  // n*(n/2+1)
  fftw_plan fwd = nullptr, bwd = nullptr;

  std::vector<double> rbuf;
  std::vector<cplx> spec, spec2, spec3, spec_u, spec_v;
  std::vector<double> k2;        // |k|^2 per r2c bin
  std::vector<double> gx_mult;   // kx/|k|^2, dealiased (for grad of potential)
  std::vector<double> gy_mult;
  std::vector<double> kx_grad;   // plain kx with Nyquist zeroed
  std::vector<double> ky_grad;
  std::vector<double> divx_mult;  // kx, dealiased (divergence of the product)
  std::vector<double> divy_mult;
  std::vector<double> dealias;    // 0/1 mask, 2/3 rule
  std::vector<double> work_a, work_b, work_c;

  Impl(int n_, double L_) : n(n_), L(L_) {
    nr = static_cast<std::size_t>(n) * n;
    nc = static_cast<std::size_t>(n) * (n / 2 + 1);
    rbuf.resize(nr);
    spec.resize(nc);
    spec2.resize(nc);
    spec3.resize(nc);
    spec_u.resize(nc);
    spec_v.resize(nc);
    work_a.resize(nr);
    work_b.resize(nr);
    work_c.resize(nr);
    fwd = fftw_plan_dft_r2c_2d(n, n, rbuf.data(), reinterpret_cast<fftw_complex*>(spec.data()),
                               FFTW_ESTIMATE);
    bwd = fftw_plan_dft_c2r_2d(n, n, reinterpret_cast<fftw_complex*>(spec.data()), rbuf.data(),
                               FFTW_ESTIMATE);

    k2.resize(nc);
    gx_mult.resize(nc);
    gy_mult.resize(nc);
    kx_grad.resize(nc);
    ky_grad.resize(nc);
    divx_mult.resize(nc);
    divy_mult.resize(nc);
    dealias.resize(nc);
    const int cutoff = n / 3;
    for (int i = 0; i < n; ++i) {
      const int fi = i <= n / 2 ? i : i - n;
      const double kx = 2.0 * kPi * fi / L;
      for (int j = 0; j <= n / 2; ++j) {
        const int fj = j;
        const double ky = 2.0 * kPi * fj / L;
        const std::size_t idx = static_cast<std::size_t>(i) * (n / 2 + 1) + j;
        const double ksq = kx * kx + ky * ky;
        k2[idx] = ksq;
        const double inv = ksq > 0.0 ? 1.0 / ksq : 0.0;
        // ik on the Nyquist line is not a real-field derivative; drop it
        const double kxg = (fi == -n / 2) ? 0.0 : kx;
        const double kyg = (fj == n / 2) ? 0.0 : ky;
        kx_grad[idx] = kxg;
        ky_grad[idx] = kyg;
        const double mask = (std::abs(fi) <= cutoff && std::abs(fj) <= cutoff) ? 1.0 : 0.0;
        dealias[idx] = mask;
        gx_mult[idx] = kxg * inv * mask;
        gy_mult[idx] = kyg * inv * mask;
        divx_mult[idx] = kxg * mask;
        divy_mult[idx] = kyg * mask;
      }
    }
  }

  ~Impl() {
    if (fwd) fftw_destroy_plan(fwd);
    if (bwd) fftw_destroy_plan(bwd);
  }

  void forward(const std::vector<double>& in, std::vector<cplx>& out) {
    std::copy(in.begin(), in.end(), rbuf.begin());
    fftw_execute_dft_r2c(fwd, rbuf.data(), reinterpret_cast<fftw_complex*>(out.data()));
  }

  // destroys `in`; result normalized by 1/n^2
  void inverse(std::vector<cplx>& in, std::vector<double>& out) {
    fftw_execute_dft_c2r(bwd, reinterpret_cast<fftw_complex*>(in.data()), rbuf.data());
    const double scale = 1.0 / static_cast<double>(nr);
    for (std::size_t i = 0; i < nr; ++i) out[i] = rbuf[i] * scale;
  }

};

SpectralWorkspace::SpectralWorkspace(int n, double L) : n_(n), L_(L) {
  if (n < 32 || (n & (n - 1)) != 0)
    throw std::invalid_argument("SpectralWorkspace: n must be a power of two >= 32");
  if (!(L > 0.0)) throw std::invalid_argument("SpectralWorkspace: need L > 0");
  impl_ = std::make_unique<Impl>(n, L);
}

SpectralWorkspace::~SpectralWorkspace() = default;

namespace {
void require_grid(const SpectralWorkspace& ws, const Field2D& f) {
  if (f.n != ws.n() || f.L != ws.L())
    throw std::invalid_argument("SpectralWorkspace: field grid mismatch");
}
}  // namespace

Field2D SpectralWorkspace::heat_apply(const Field2D& u, double s) {
  require_grid(*this, u);
  if (!(s >= 0.0)) throw std::invalid_argument("heat_apply: need s >= 0");
  Field2D out = u;
  if (s == 0.0) return out;
  impl_->forward(u.values, impl_->spec);
  kern::exp_scale(impl_->k2, s, impl_->spec);
  impl_->inverse(impl_->spec, out.values);
  return out;
}

std::pair<Field2D, Field2D> SpectralWorkspace::potential_gradient(const Field2D& u) {
  require_grid(*this, u);
  Field2D gx = make_field(n_, L_, u.t);
  Field2D gy = make_field(n_, L_, u.t);
  impl_->forward(u.values, impl_->spec_u);
  kern::scale_i(impl_->gx_mult, impl_->spec_u, impl_->spec);
  impl_->inverse(impl_->spec, gx.values);
  kern::scale_i(impl_->gy_mult, impl_->spec_u, impl_->spec);
  impl_->inverse(impl_->spec, gy.values);
  return {std::move(gx), std::move(gy)};
}

std::pair<Field2D, Field2D> SpectralWorkspace::gradient(const Field2D& u) {
  require_grid(*this, u);
  Field2D gx = make_field(n_, L_, u.t);
  Field2D gy = make_field(n_, L_, u.t);
  impl_->forward(u.values, impl_->spec_u);
  kern::scale_i(impl_->kx_grad, impl_->spec_u, impl_->spec);
  impl_->inverse(impl_->spec, gx.values);
  kern::scale_i(impl_->ky_grad, impl_->spec_u, impl_->spec);
  impl_->inverse(impl_->spec, gy.values);
  return {std::move(gx), std::move(gy)};
}

Field2D SpectralWorkspace::bilinear_form(const Field2D& u, const Field2D& v) {
  require_grid(*this, u);
  if (!same_grid(u, v)) throw std::invalid_argument("bilinear_form: u and v on different grids");
  auto& im = *impl_;

  im.forward(v.values, im.spec_v);
  // gradient of the potential of v, dealiased
  kern::scale_i(im.gx_mult, im.spec_v, im.spec);
  im.inverse(im.spec, im.work_a);
  kern::scale_i(im.gy_mult, im.spec_v, im.spec);
  im.inverse(im.spec, im.work_b);
  // u filtered into the same band so the quadratic product is alias-free
  if (&u == &v) {
    im.spec_u = im.spec_v;
  } else {
    im.forward(u.values, im.spec_u);
  }
  kern::scale(im.dealias, im.spec_u);
  im.inverse(im.spec_u, im.work_c);

  kern::vmul(im.work_c, im.work_a, im.work_a);  // u * dphi/dx
  kern::vmul(im.work_c, im.work_b, im.work_b);  // u * dphi/dy
  im.forward(im.work_a, im.spec2);
  im.forward(im.work_b, im.spec3);
  kern::scale_i(im.divx_mult, im.spec2, im.spec);
  kern::scale_i_acc(im.divy_mult, im.spec3, im.spec);

  Field2D out = make_field(n_, L_, u.t);
  im.inverse(im.spec, out.values);
  return out;
}

double SpectralWorkspace::band_excess(const Field2D& u) {
  require_grid(*this, u);
  auto& im = *impl_;
  im.forward(u.values, im.spec_u);
  double peak = 0.0, excess = 0.0;
  for (std::size_t i = 0; i < im.nc; ++i) {
    const double mag = std::abs(im.spec_u[i]);
    peak = std::max(peak, mag);
    if (im.dealias[i] == 0.0) excess = std::max(excess, mag);
  }
  return peak > 0.0 ? excess / peak : 0.0;
}

ScalingReport SpectralWorkspace::scaling_check(const Field2D& u, const Field2D& v, double t) {
  require_grid(*this, u);
  require_grid(*this, v);
  ScalingReport rep;
  rep.band_limited = band_excess(u) < 1e-13 && band_excess(v) < 1e-13;

  SpectralWorkspace half(n_, L_ / 2.0);
  Field2D u_half{n_, L_ / 2.0, u.t, u.values};  // f_lambda(x) = f(2x) on the nested grid
  Field2D v_half{n_, L_ / 2.0, v.t, v.values};

  Field2D b_big = bilinear_form(u, v);
  Field2D b_half = half.bilinear_form(u_half, v_half);
  double d1 = 0.0;
  for (std::size_t i = 0; i < b_big.values.size(); ++i)
    d1 = std::max(d1, std::abs(b_half.values[i] - b_big.values[i]));
  rep.bilinear_discrepancy = d1;

  Field2D sb_half = half.heat_apply(b_half, t);
  Field2D sb_big = heat_apply(b_big, 4.0 * t);
  double d2 = 0.0;
  for (std::size_t i = 0; i < sb_big.values.size(); ++i)
    d2 = std::max(d2, std::abs(sb_half.values[i] - sb_big.values[i]));
  rep.semigroup_discrepancy = d2;
  return rep;
}

std::vector<Field2D> SpectralWorkspace::duhamel_solve(const Field2D& u0, double t_end, double dt,
                                                      int order, std::span<const double> schedule,
                                                      bool nonlinear) {
  require_grid(*this, u0);
  if (!(dt > 0.0)) throw std::invalid_argument("duhamel_solve: need dt > 0");
  if (!(t_end > u0.t)) throw std::invalid_argument("duhamel_solve: need t_end > u0.t");
  if (order != 1 && order != 2) throw std::invalid_argument("duhamel_solve: order must be 1 or 2");
  for (std::size_t i = 0; i < schedule.size(); ++i) {
    if (schedule[i] <= u0.t || schedule[i] > t_end + 1e-12)
      throw std::invalid_argument("duhamel_solve: schedule times must lie in (t0, t_end]");
    if (i > 0 && schedule[i] <= schedule[i - 1])
      throw std::invalid_argument("duhamel_solve: schedule must be strictly increasing");
  }

  std::vector<Field2D> traj;
  Field2D u = u0;
  std::size_t si = 0;
  while (u.t < t_end - 1e-13) {
    double h = std::min(dt, t_end - u.t);
    if (si < schedule.size()) h = std::min(h, schedule[si] - u.t);
    const double t_next = u.t + h;
    if (order == 1) {
      if (nonlinear) {
        Field2D b = bilinear_form(u, u);
        kern::axpy(u.values, h, b.values, u.values);
      }
      u = heat_apply(u, h);
    } else {
      Field2D stage = u;
      if (nonlinear) {
        Field2D b0 = bilinear_form(u, u);
        kern::axpy(u.values, h, b0.values, stage.values);
        stage = heat_apply(stage, h);  // predictor
        Field2D b1 = bilinear_form(stage, stage);
        kern::axpy(u.values, 0.5 * h, b0.values, u.values);
        u = heat_apply(u, h);
        kern::axpy(u.values, 0.5 * h, b1.values, u.values);
      } else {
        u = heat_apply(u, h);
      }
    }
    u.t = t_next;
    if (!std::isfinite(kern::max_abs(u.values)))
      throw blow_up_error("duhamel_solve: state left the finite range", u.t);
    if (si < schedule.size() && std::abs(u.t - schedule[si]) < 1e-12) {
      traj.push_back(u);
      ++si;
    }
  }
  if (traj.empty() || traj.back().t < u.t - 1e-12) traj.push_back(u);
  return traj;
}

std::vector<std::pair<double, double>> SpectralWorkspace::besov_series(
    const Field2D& u0, std::span<const double> t_grid) {
  require_grid(*this, u0);
  std::vector<std::pair<double, double>> out;
  out.reserve(t_grid.size());
  for (double t : t_grid) {
    if (!(t > 0.0)) throw std::invalid_argument("besov_series: need t > 0");
    Field2D st = heat_apply(u0, t);
    out.emplace_back(t, std::pow(t, 0.25) * analysis::lp_norm(st, 4.0 / 3.0));
  }
  return out;
}

double SpectralWorkspace::besov_proxy(const Field2D& u0, std::span<const double> t_grid) {
  double m = 0.0;
  for (const auto& [t, v] : besov_series(u0, t_grid)) m = std::max(m, v);
  return m;
}

EstimateReport SpectralWorkspace::estimate_check(const Field2D& u, const Field2D& v,
                                                 std::span<const double> t_grid) {
  require_grid(*this, u);
  require_grid(*this, v);
  EstimateReport rep;
  const double nu = analysis::lp_norm(u, 4.0 / 3.0);
  const double nv = analysis::lp_norm(v, 4.0 / 3.0);
  const double den = nu * nv;
  if (den == 0.0) {
    for (double t : t_grid) rep.series.emplace_back(t, 0.0);
    return rep;
  }
  Field2D b = bilinear_form(u, v);
  for (double t : t_grid) {
    if (!(t > 0.0)) throw std::invalid_argument("estimate_check: need t > 0");
    Field2D sb = heat_apply(b, t);
    const double ratio = std::pow(t, 0.75) * analysis::lp_norm(sb, 4.0 / 3.0) / den;
    rep.series.emplace_back(t, ratio);
    rep.sup_ratio = std::max(rep.sup_ratio, ratio);
  }
  return rep;
}

Field2D random_band_limited_field(int n, double L, int band, std::uint64_t seed, bool nonneg) {
  if (band < 1 || band > n / 4)
    throw std::invalid_argument("random_band_limited_field: need 1 <= band <= n/4");
  Field2D g = make_field(n, L);
  // Fill r2c bins directly in an n-independent order; the inverse transform
  // sums bins without normalization, so the sampled function is the same
  // trigonometric polynomial on every grid.
  std::vector<cplx> bins(static_cast<std::size_t>(n) * (n / 2 + 1), cplx(0.0, 0.0));
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  const double amp = 1.0 / (2.0 * band + 1.0);
  auto bin_index = [n](int fx, int fy) {
    const int i = fx >= 0 ? fx : n + fx;
    return static_cast<std::size_t>(i) * (n / 2 + 1) + fy;
  };
  for (int fy = 0; fy <= band; ++fy) {
    for (int fx = -band; fx <= band; ++fx) {
      const double re = amp * normal(rng);
      const double im = amp * normal(rng);
      if (fy == 0) {
        if (fx < 0) continue;  // fixed by Hermitian symmetry
        if (fx == 0) {
          bins[bin_index(0, 0)] = cplx(re, 0.0);
        } else {
          bins[bin_index(fx, 0)] = cplx(re, im);
          bins[bin_index(-fx, 0)] = cplx(re, -im);
        }
      } else {
        bins[bin_index(fx, fy)] = cplx(re, im);
      }
    }
  }
  // reuse the workspace's c2r plan through a scratch copy (c2r destroys input)
  {
    struct Raw {
      fftw_plan plan;
      ~Raw() { fftw_destroy_plan(plan); }
    };
    std::vector<double> out(static_cast<std::size_t>(n) * n);
    Raw raw{fftw_plan_dft_c2r_2d(n, n, reinterpret_cast<fftw_complex*>(bins.data()), out.data(),
                                 FFTW_ESTIMATE)};
    fftw_execute(raw.plan);
    g.values = std::move(out);
  }
  if (nonneg)
    for (double& v : g.values) v = v * v;
  return g;
}

}  // namespace dnp2d::field2d
