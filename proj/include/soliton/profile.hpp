#pragma once

#include <memory>
#include <vector>

#include "soliton/chart.hpp"

namespace soliton {

/// (w, w', f, f') at one radius.
struct RadialState {
  double w = 0.0;
  double dw = 0.0;
  double f = 0.0;
  double df = 0.0;
};

/// Regular-center expansion w = r + w3 r^3 + w5 r^5, f = f0 + a r^2/2 + f4 r^4.
struct CenterSeries {
  double w3 = 0.0;
  double w5 = 0.0;
  double f0 = 0.0;
  double f4 = 0.0;
};

/// Center constants for dimension n, f''(0) = a, soliton constant rho (0 or -1/2).
/// f0 is 0 for steady profiles and -R(0) for expanding ones, so that
/// R + |grad f|^2 + f = 0 holds.
CenterSeries center_series(int n, double a, double rho);

/// Throws invalid_params outside n >= 3, a <= 0, rho in {0, -1/2}, eps in (0, 1e-2].
RadialState series_seed(int n, double a, double rho, double eps);

/// Derivatives w^(k), f^(k) for k = 0..order, from the soliton ODE itself
/// (Picard iteration in truncated univariate Taylor arithmetic).
struct RadialJets {
  std::vector<double> w;
  std::vector<double> f;
};

RadialJets radial_jets(int n, double rho, const RadialState& s, int order);

/// Ricci and scalar curvature of dr^2 + w^2 g_round from w, w', w''.
struct WarpedCurvature {
  double ric_rr = 0.0;
  double ric_sph = 0.0;      // coefficient of the round metric
  double ric_tangent = 0.0;  // ric_sph / w^2, the orthonormal-frame value
  double scalar = 0.0;
};

WarpedCurvature warped_curvature(int n, double w, double dw, double d2w);

/// Area of the unit (n-1)-sphere.
double sphere_area(int n);

struct ProfileOptions {
  double eps = 1e-4;
  double max_step = 0.0;  // 0 means rmax / 200
  std::size_t max_steps = 5'000'000;
};

/// Dense radial solution of Ric + Hess f = rho g for dr^2 + w(r)^2 g_round.
/// Immutable after construction.
class SolitonProfile {
 public:
  struct Node {
    double r;
    double w, dw, d2w;
    double f, df, d2f;
    double volume;  // omega_{n-1} * int_0^r w^{n-1}
  };

  SolitonProfile(int dim, double a, double rho, double tol, double eps, std::vector<Node> nodes);

  int dim() const noexcept { return dim_; }
  double a() const noexcept { return a_; }
  double rho() const noexcept { return rho_; }
  double tol() const noexcept { return tol_; }
  double eps() const noexcept { return eps_; }
  double rmax() const noexcept { return nodes_.back().r; }
  bool steady() const noexcept { return rho_ == 0.0; }
  const std::vector<Node>& nodes() const noexcept { return nodes_; }

  /// Quintic Hermite interpolation of w and f; exact at the nodes.
  /// Throws radius_outside_profile outside [eps, rmax].
  RadialState state(double r) const;
  RadialJets jets(double r, int order) const;
  double volume(double r) const;
  WarpedCurvature curvature(double r) const;
  double scalar(double r) const { return curvature(r).scalar; }

 private:
  std::size_t segment(double r) const;

  int dim_;
  double a_;
  double rho_;
  double tol_;
  double eps_;
  std::vector<Node> nodes_;
};

/// Adaptive Dormand-Prince integration from the series seed at eps to rmax.
/// Throws step_failure (naming the last good r) or invalid_params.
SolitonProfile integrate_profile(int n, double a, double rho, double rmax, double tol,
                                 const ProfileOptions& options = {});

/// Warped chart (r, theta_1..theta_{n-1}) on (eps, rmax) whose w-derivatives
/// come from the profile.
std::shared_ptr<WarpedChart> profile_metric_chart(std::shared_ptr<const SolitonProfile> profile);

struct PotentialFit {
  double c1 = 0.0;
  double c2 = 0.0;
  bool upper_ok = false;   // steady: -f <= sqrt(C0) r + |f(0)|; expanding: -f <= (r + 2 sqrt(K - f(0)))^2 / 4 - K
  bool lower_ok = false;   // steady: c1 r - c2 <= -f with c1 in (0, sqrt(C0)]; expanding: -f' >= delta r
  double upper_margin = 0.0;  // min over nodes of (bound - (-f))
  double scalar_floor = 0.0;  // expanding: K with R >= -K
  double hess_floor = 0.5;    // expanding: delta with Hess(-f)(d_r, d_r) >= delta
};

struct Asymptotics {
  bool degenerate = false;  // R identically zero (flat profile)
  double decay_const = 0.0;
  double decay_spread = 0.0;  // (max - min) / mean of r R over the fit window
  double volume_exponent = 0.0;
  PotentialFit potential;
  double center_limit = 0.0;
  double window_lo = 0.0;
  double window_hi = 0.0;
};

/// Fits over the last decade [rmax/10, rmax]. Steady profiles need rmax >= 500
/// (rmax_too_small).
Asymptotics asymptotics(const SolitonProfile& profile);

struct BrendleData {
  std::vector<double> r;
  std::vector<double> s;    // R(r), increasing
  std::vector<double> psi;
  std::vector<double> u;
  bool monotone = false;
  double x_residual = 0.0;  // max |R' + psi(R) f'| at the interval midpoints
};

/// psi(R(r)) = -R'(r)/f'(r) and u(s) for a normalized steady profile.
/// Throws psi_undefined (expanding) or non_monotone_r.
class BrendleTables {
 public:
  BrendleTables(std::shared_ptr<const SolitonProfile> profile, double psi_scale = 1.0);

  const BrendleData& data() const noexcept { return data_; }
  const SolitonProfile& profile() const noexcept { return *profile_; }
  double psi_scale() const noexcept { return psi_scale_; }

  /// Bryant psi at s, scaled by psi_scale; s must lie in the realized range.
  double psi(double s) const;
  /// u at the radius where R = s, evaluated through the radius parametrization.
  double u_at_radius(double r) const;
  double radius_of(double s) const;

 private:
  double psi_at_radius(double r) const;

  std::shared_ptr<const SolitonProfile> profile_;
  double psi_scale_;
  BrendleData data_;
  double r_half_ = 0.0;  // radius where R = 1/2
  std::vector<double> i2_;  // cumulative integral at the table radii
};

BrendleData brendle_tables(std::shared_ptr<const SolitonProfile> profile);

/// omega w^{n-1} e^{u(R)} (R' + psi(R) f') at each radius; throws radius_outside_profile.
std::vector<double> flux_scan(const BrendleTables& tables, const std::vector<double>& radii);

}  // namespace soliton
