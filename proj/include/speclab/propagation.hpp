#pragma once

#include "speclab/eigen.hpp"

namespace speclab {

struct WaveState {
  Field u;
  Field u_prev;
  double t = 0.0;
  double dt = 0.0;
};

/// cos(t sqrt(-L)) f through the spectral oracle.
Field cosine_spectral(const EigenSystem& es, double t, const Field& f);

/// cos(t sqrt(-L)) f by leapfrog with zero initial velocity:
/// u^{m+1} = 2u^m - u^{m-1} + dt^2 L u^m, first step u^0 + (dt^2/2) L u^0.
/// Requires dt <= 0.9 h / max(a) and t an integer multiple of dt. Kept free
/// of any spectral data so the two routes stay independent oracles.
WaveState cosine_leapfrog(const DiscreteOperator& op, double t, const Field& f, double dt);

/// Discrete wave energy (1/2)||(u - u_prev)/dt||_w^2 + (1/2) <-L u, u_prev>_w;
/// the leapfrog scheme conserves this exactly.
double wave_energy(const DiscreteOperator& op, const WaveState& s);

/// Raised-cosine bump of the given radius around a dof.
Field bump_field(const Geometry& g, int center, double radius);

struct ConeReport {
  double t = 0.0;
  double margin = 0.0;
  double outside_mass = 0.0;  // weighted L2 mass fraction outside the cone
  double threshold = 0.0;
  bool pass = false;
};

/// Weighted mass of the evolved field outside
/// {x : dist(x, supp f) <= speed * t + margin}, as a fraction of the total.
ConeReport lightcone_check(const DiscreteOperator& op, const Field& f, double t, double dt,
                           double margin, double threshold = 1e-8);
ConeReport lightcone_check_spectral(const EigenSystem& es, double speed, const Field& f,
                                    double t, double margin, double threshold = 1e-6);

struct DGEntry {
  double t = 0.0, r = 0.0, lhs = 0.0, rhs = 0.0, ratio = 0.0;
};
struct DGReport {
  std::vector<DGEntry> entries;
  double slack = 1.05;
  double r = 0.0;
  bool pass = false;
};

/// (e^{tL} u, v) <= e^{-r^2/4t} ||u|| ||v|| for bump fields on two balls at
/// distance r, over the given times. Preconditions r >= 4h and t >= h^2.
DGReport davies_gaffney_check(const EigenSystem& es, int center_u, int center_v,
                              double ball_radius, const std::vector<double>& t_grid,
                              double slack = 1.05);

struct CommutatorReport {
  double ratio = 0.0;   // sup_e |e^{-phi/2} [D, e^phi] e^{-phi/2}| / (r/t)
  double bound = 0.0;   // speed * (1 + 2h r/t)
  double speed = 1.0;
  bool pass = false;
};

/// Pointwise multiplier check for P = [D, e^phi], phi = (r/t) dist(x, U).
CommutatorReport commutator_condition_check(const DiscreteOperator& op, int center_u,
                                            double u_radius, double r, double t,
                                            double speed_limit);

struct GronwallEntry {
  double tau = 0.0, energy = 0.0, bound = 0.0;
};
struct GronwallReport {
  std::vector<GronwallEntry> entries;
  double rho = 0.0;
  bool pass = false;
};

/// E(tau) = sum w e^{phi} |e^{tau L} u|^2 against e^{rho^2 tau / 2} E(0) with
/// 5% slack, phi = rho * dist(x, U).
GronwallReport gronwall_check(const EigenSystem& es, const Field& u, int center_u,
                              double u_radius, double r, double t, int n_steps);

struct ResolventLimitReport {
  std::vector<double> h_err;     // ||H_n - H||_w
  std::vector<double> heat_err;  // ||e^{tL_n} f - e^{tL} f||_w
  std::vector<double> cos_err;   // same for the cosine
  bool pass = false;
};

/// Strong-resolvent style convergence: operators built from smooth potentials
/// H_n approximating a rough H; both semigroup and cosine errors must decay
/// (last <= 0.1 * first).
ResolventLimitReport resolvent_limit_check(const Mesh& mesh, const OperatorSpec& base,
                                           const Field& H_rough,
                                           const std::vector<Field>& H_seq, double t,
                                           const Field& f);

}  // namespace speclab
