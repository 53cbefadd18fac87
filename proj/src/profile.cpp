#include "dnp2d/profile.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>

#include "dnp2d/errors.hpp"
#include "dnp2d/ode.hpp"

namespace dnp2d::profile {

ShootParam mass_to_shoot(double M_phys) {
  if (!(M_phys > 0.0) || !std::isfinite(M_phys))
    throw std::invalid_argument("mass_to_shoot: M_phys must be positive and finite");
  const double m = M_phys / (2.0 * kPi);
  return ShootParam{m / (2.0 * m + 4.0)};
}

ProfileMass shoot_to_mass(ShootParam s) {
  if (!(s.a >= 0.0)) throw std::invalid_argument("shoot_to_mass: a must be >= 0");
  if (!(s.a < 0.5)) throw std::invalid_argument("shoot_to_mass: mass diverges for a >= 1/2");
  const double m = 4.0 * s.a / (1.0 - 2.0 * s.a);
  return ProfileMass{m, 2.0 * kPi * m};
}

double ode_rhs(double y, double xi, double xi_prime, double eps) {
  const double den = 2.0 * y + eps;
  if (den == 0.0) {
    if (xi != 0.0)
      throw std::domain_error("ode_rhs: singular at y = eps = 0 unless xi(0) = 0");
    return 0.5 * xi_prime * (xi_prime - 0.5);  // xi/y -> xi'(0)
  }
  return -0.25 * xi_prime + xi * xi_prime / den;
}

SelfSimilarProfile::SelfSimilarProfile(std::vector<double> y, std::vector<double> xi,
                                       std::vector<double> xi_prime, double a, double m_tail,
                                       double eps_reg, double tol)
    : y_(std::move(y)),
      xi_(std::move(xi)),
      xip_(std::move(xi_prime)),
      a_(a),
      m_tail_(m_tail),
      eps_(eps_reg),
      tol_(tol),
      xi_interp_(y_, xi_),
      xip_interp_(y_, xip_) {}

double SelfSimilarProfile::xi_at(double y) const {
  if (y <= y_.back()) return xi_interp_(y);
  if (!bounded())
    throw std::invalid_argument("SelfSimilarProfile: no tail model on the non-bounded branch");
  // consistent with the m_tail estimator: xi = m_tail - xi'(y)/delta
  return m_tail_ - xi_prime_at(y) / decay_rate();
}

double SelfSimilarProfile::xi_prime_at(double y) const {
  if (y <= y_.back()) return xip_interp_(y);
  if (!bounded())
    throw std::invalid_argument("SelfSimilarProfile: no tail model on the non-bounded branch");
  return xip_.back() * std::exp(-decay_rate() * (y - y_.back()));
}

namespace {

struct NodeLog {
  std::vector<double> y, xi, xip;
};

// Invariant slack: genuine violations are O(1) events, numerical jitter is
// bounded by the solver's accuracy envelope.
double slack(double tol, double ref) { return 100.0 * (1e-2 * tol + tol * std::abs(ref)); }

}  // namespace

SelfSimilarProfile integrate_profile(ShootParam s, double y_max, double tol, double eps) {
  const double a = s.a;
  if (!(a > 0.0) || !std::isfinite(a))
    throw std::invalid_argument("integrate_profile: need a > 0");
  if (!(y_max > 0.0)) throw std::invalid_argument("integrate_profile: need y_max > 0");
  if (!(tol > 0.0)) throw std::invalid_argument("integrate_profile: need tol > 0");
  if (!(eps >= 0.0)) throw std::invalid_argument("integrate_profile: need eps >= 0");

  const bool bounded = a < 0.5;
  const double A = bounded ? 4.0 * a / (1.0 - 2.0 * a) : 0.0;
  const double rate = 0.5 * (a - 0.5);  // exponent in the Eq.-(4.4) bound

  NodeLog log;
  log.y.push_back(0.0);
  log.xi.push_back(0.0);
  log.xip.push_back(a);

  double y_start;
  Rk45<2>::State state;
  if (eps > 0.0) {
    y_start = 0.0;
    state = {0.0, a};
  } else {
    // two-term Taylor start removes the 1/y singularity
    const double xpp0 = 0.5 * a * (a - 0.5);
    y_start = std::min(std::sqrt(tol), y_max / 16.0);
    state = {a * y_start + 0.5 * xpp0 * y_start * y_start, a + xpp0 * y_start};
    log.y.push_back(y_start);
    log.xi.push_back(state[0]);
    log.xip.push_back(state[1]);
  }

  auto rhs = [eps](double y, const Rk45<2>::State& v) -> Rk45<2>::State {
    return {v[1], ode_rhs(y, v[0], v[1], eps)};
  };

  auto check = [&](double y, const Rk45<2>::State& v) -> bool {
    const double xi = v[0], xp = v[1];
    if (!std::isfinite(xi) || !std::isfinite(xp)) return false;
    if (bounded) {
      const double sp = slack(tol, a);
      if (xp <= -sp || xp >= a + sp) return false;
      const double xpp = ode_rhs(y, xi, xp, eps);
      if (xpp >= slack(tol, 0.125) || xpp <= -0.125 - slack(tol, 0.125)) return false;
      if (xi <= -sp || xi >= a * y + slack(tol, a * y)) return false;
      const double bound = A * (1.0 - std::exp(rate * y));
      if (xi > bound + slack(tol, A)) return false;
    } else {
      if (xp <= 0.5 - slack(tol, 1.0)) return false;  // Lemma-4.2(i) regime
    }
    return true;
  };

  Rk45<2>::Options opt;
  opt.rtol = tol;
  opt.atol = 1e-2 * tol;
  opt.h0 = std::min(1e-3, y_max / 64.0);
  opt.h_max = std::min(0.5, std::max(y_max / 2048.0, 1e-3));

  try {
    Rk45<2>::integrate(rhs, y_start, y_max, state, opt, [&](double y, const Rk45<2>::State& v) {
      if (!check(y, v)) return false;
      log.y.push_back(y);
      log.xi.push_back(v[0]);
      log.xip.push_back(v[1]);
      return true;
    });
  } catch (const solver_error& e) {
    throw solver_error("integrate_profile: invariant lost (a=" + std::to_string(a) + ")",
                       e.location());
  }

  double m_tail;
  if (bounded) {
    const double delta = 0.5 * (0.5 - a);
    m_tail = log.xi.back() + log.xip.back() / delta;
  } else {
    m_tail = std::numeric_limits<double>::infinity();
  }
  return SelfSimilarProfile(std::move(log.y), std::move(log.xi), std::move(log.xip), a, m_tail,
                            eps, tol);
}

namespace {

// cumulative trapezoid on a uniform grid, in place friendly
void cumtrapz_uniform(std::span<const double> g, double h, std::span<double> out) {
  out[0] = 0.0;
  for (std::size_t i = 1; i < g.size(); ++i)
    out[i] = out[i - 1] + 0.5 * h * (g[i - 1] + g[i]);
}

}  // namespace

SelfSimilarProfile picard_solve(ShootParam s, double y0, double tol, int max_iter) {
  const double a = s.a;
  if (!(a >= 0.0) || !(a < 0.5))
    throw std::invalid_argument("picard_solve: need 0 <= a < 1/2");
  if (!(y0 > 0.0)) throw std::invalid_argument("picard_solve: need y0 > 0");
  if (!(tol > 0.0) || max_iter < 1)
    throw std::invalid_argument("picard_solve: need tol > 0 and max_iter >= 1");

  double yend = y0;
  for (int attempt = 0; attempt < 4; ++attempt, yend *= 0.5) {
    // quadrature grid fine enough that composite-trapezoid error stays below tol
    std::size_t n = static_cast<std::size_t>(yend * std::sqrt(10.0 / tol)) + 2;
    n = std::clamp<std::size_t>(n, 1025, (1u << 20) + 1);
    const double h = yend / static_cast<double>(n - 1);

    std::vector<double> y(n), xi(n), xp(n), g(n), inner(n), outer(n), nxi(n), nxp(n);
    for (std::size_t i = 0; i < n; ++i) {
      y[i] = static_cast<double>(i) * h;
      xi[i] = 4.0 * a * (1.0 - std::exp(-0.25 * y[i]));
      xp[i] = a * std::exp(-0.25 * y[i]);
    }
    if (a == 0.0)
      return SelfSimilarProfile(std::move(y), std::move(xi), std::move(xp), a, 0.0, 0.0, tol);

    double prev_resid = std::numeric_limits<double>::infinity();
    for (int it = 0; it < max_iter; ++it) {
      g[0] = a * xp[0];  // xi(s)/s -> a as s -> 0
      for (std::size_t i = 1; i < n; ++i) g[i] = std::exp(0.25 * y[i]) / y[i] * xi[i] * xp[i];
      cumtrapz_uniform(g, h, inner);
      for (std::size_t i = 0; i < n; ++i) {
        const double e = std::exp(-0.25 * y[i]);
        nxp[i] = a * e + 0.5 * e * inner[i];
        g[i] = e * inner[i];  // reuse g as the outer integrand
      }
      cumtrapz_uniform(g, h, outer);
      double resid = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        nxi[i] = 4.0 * a * (1.0 - std::exp(-0.25 * y[i])) + 0.5 * outer[i];
        resid = std::max(resid, std::abs(nxi[i] - xi[i]));
        resid = std::max(resid, std::abs(nxp[i] - xp[i]));
      }
      xi.swap(nxi);
      xp.swap(nxp);
      if (resid < tol) {
        const double delta = 0.5 * (0.5 - a);
        const double m_tail = xi.back() + xp.back() / delta;
        return SelfSimilarProfile(std::move(y), std::move(xi), std::move(xp), a, m_tail, 0.0,
                                  tol);
      }
      if (resid > 4.0 * prev_resid && resid > 1.0) break;  // diverging: shrink the interval
      prev_resid = resid;
    }
  }
  throw solver_error("picard_solve: no contraction down to y0/8", yend * 2.0);
}

SelfSimilarProfile profile_for_mass(double M_phys, double tol) {
  if (!(M_phys > 0.0) || !std::isfinite(M_phys))
    throw std::invalid_argument("profile_for_mass: M_phys must be positive and finite");
  if (!(tol > 0.0) || tol >= 1.0)
    throw std::invalid_argument("profile_for_mass: need 0 < tol < 1");

  const double m_target = M_phys / (2.0 * kPi);
  const double ode_tol = std::min(1e-10, 1e-2 * tol);

  auto mass_at = [&](double a) {
    // y_max from the a-priori tail bound xi'(y) <= a e^{-delta y}
    const double delta = 0.5 * (0.5 - a);
    double y_max = std::log(10.0 * a / (delta * std::max(tol, 1e-12) * m_target)) / delta;
    y_max = std::clamp(y_max, 50.0, 400.0);
    return integrate_profile(ShootParam{a}, y_max, ode_tol);
  };

  // closed-form seed; the true mass of that profile is below the target
  double a_lo = mass_to_shoot(M_phys).a;
  SelfSimilarProfile p_lo = mass_at(a_lo);
  double f_lo = p_lo.m_tail() - m_target;
  if (std::abs(f_lo) <= tol * m_target) return p_lo;

  double a_hi = a_lo;
  SelfSimilarProfile p_hi = p_lo;
  double f_hi = f_lo;
  for (int i = 0; i < 60 && f_hi < 0.0; ++i) {
    a_hi = 0.5 * (a_hi + 0.5);  // approach the a = 1/2 barrier geometrically
    p_hi = mass_at(a_hi);
    f_hi = p_hi.m_tail() - m_target;
  }
  if (f_hi < 0.0) throw solver_error("profile_for_mass: failed to bracket target mass", a_hi);

  // regula falsi with bisection fallback
  for (int it = 0; it < 200; ++it) {
    double a_mid = a_lo + (a_hi - a_lo) * (-f_lo) / (f_hi - f_lo);
    if (!(a_mid > a_lo) || !(a_mid < a_hi)) a_mid = 0.5 * (a_lo + a_hi);
    SelfSimilarProfile p_mid = mass_at(a_mid);
    const double f_mid = p_mid.m_tail() - m_target;
    if (std::abs(f_mid) <= tol * m_target) return p_mid;
    if (f_mid < 0.0) {
      a_lo = a_mid;
      f_lo = f_mid;
    } else {
      a_hi = a_mid;
      f_hi = f_mid;
    }
  }
  throw solver_error("profile_for_mass: calibration did not converge", 0.5 * (a_lo + a_hi));
}

double self_similar_density(const SelfSimilarProfile& p, double r, double t) {
  if (!(t > 0.0)) throw std::invalid_argument("self_similar_density: need t > 0");
  if (!(r >= 0.0)) throw std::invalid_argument("self_similar_density: need r >= 0");
  const double y = r * r / t;
  return 2.0 / t * p.xi_prime_at(y);
}

}  // namespace dnp2d::profile
