#pragma once

#include <span>
#include <vector>

#include "dnp2d/interp.hpp"

namespace dnp2d::profile {

inline constexpr double kPi = 3.14159265358979323846;

// Initial slope xi'(0) of the self-similar profile.  Bounded global profiles
// exist exactly for 0 < a < 1/2; larger values are representable but flagged
// non-bounded.
struct ShootParam {
  double a = 0.0;
};

// Dimensionless profile mass m = lim xi(y) and the physical total charge
// M_phys = 2*pi*m of the corresponding density.
struct ProfileMass {
  double m = 0.0;
  double M_phys = 0.0;
};

// a = m/(2m+4) with m = M_phys/(2*pi).  Throws std::invalid_argument for
// nonpositive or non-finite M_phys.
ShootParam mass_to_shoot(double M_phys);

// m = 4a/(1-2a), M_phys = 2*pi*m, for 0 <= a < 1/2.  Note this closed form
// is an upper bound for the integrated profile's actual mass, not an
// identity; see integrate_profile's m_tail.
ProfileMass shoot_to_mass(ShootParam s);

// xi'' = -xi'/4 + xi*xi'/(2y+eps); at y = eps = 0 the analytic limit
// (a/2)(a-1/2) with a = xi_prime (requires xi = 0 there).
double ode_rhs(double y, double xi, double xi_prime, double eps);

class SelfSimilarProfile {
 public:
  SelfSimilarProfile(std::vector<double> y, std::vector<double> xi, std::vector<double> xi_prime,
                     double a, double m_tail, double eps_reg, double tol);

  const std::vector<double>& y_grid() const { return y_; }
  const std::vector<double>& xi() const { return xi_; }
  const std::vector<double>& xi_prime() const { return xip_; }
  double a() const { return a_; }
  double m_tail() const { return m_tail_; }
  double eps_reg() const { return eps_; }
  double tol() const { return tol_; }
  bool bounded() const { return a_ < 0.5; }
  double y_max() const { return y_.back(); }

  // exponential decay rate of xi' from the a-priori estimate
  double decay_rate() const { return 0.5 * (0.5 - a_); }
  double mass_phys() const { return 2.0 * kPi * m_tail_; }

  // monotone interpolation inside the grid; exponential tail beyond it
  double xi_at(double y) const;
  double xi_prime_at(double y) const;

 private:
  std::vector<double> y_, xi_, xip_;
  double a_, m_tail_, eps_, tol_;
  PchipInterpolant xi_interp_, xip_interp_;
};

// Adaptive integration of the profile ODE from the series start at y = 0
// (regularized start when eps > 0).  Structural invariants of the bounded
// branch are checked at every accepted node; a violation beyond the solver's
// accuracy envelope raises solver_error carrying the offending y.
SelfSimilarProfile integrate_profile(ShootParam s, double y_max, double tol, double eps = 0.0);

// Fixed-point iteration of the integral operator
//   H(xi)(y) = 4a(1-e^{-y/4}) + 1/2 int_0^y e^{-t/4} int_0^t e^{s/4}/s xi xi' ds dt
// on [0, y0].  Retries on a halved interval when the iteration does not
// contract; raises solver_error when no interval contracts.
SelfSimilarProfile picard_solve(ShootParam s, double y0, double tol, int max_iter);

// Profile whose actual physical mass matches M_phys to relative tol.  Seeds
// the shooting parameter with the closed-form value and calibrates it against
// the integrated tail mass (the closed form alone overshoots).
SelfSimilarProfile profile_for_mass(double M_phys, double tol);

// u(r,t) = (2/t) xi'(r^2/t)
double self_similar_density(const SelfSimilarProfile& p, double r, double t);

}  // namespace dnp2d::profile
