#pragma once

#include <Eigen/Dense>
#include <vector>

#include "soliton/identities.hpp"
#include "soliton/models.hpp"

namespace soliton {

/// e[0] = grad f / |grad f| followed by a g-orthonormal completion, as
/// coordinate component vectors.
struct AdaptedFrame {
  std::vector<Eigen::VectorXd> e;
};

/// Throws critical_point when |grad f| < 1e-8.
AdaptedFrame adapted_frame(const SolitonStructure& s, const ChartPoint& p);

/// Geometry of the level set of f through p in the adapted frame, with
/// nu = grad f / |grad f| and h(X, Y) = Hess f(X, Y) / |grad f|.
struct LevelSurfaceData {
  AdaptedFrame frame;
  double grad_norm = 0.0;
  Eigen::MatrixXd h;          // (n-1) x (n-1)
  Eigen::MatrixXd h_ricci;    // -Ric(e_a, e_b) / |grad f|, the steady-soliton form
  double mean_curvature = 0.0;
  Eigen::VectorXd tangential_grad_scalar;  // dR(e_a), a >= 2
  double traceless_norm = 0.0;             // |h - H/(n-1) g_Sigma|
  Eigen::MatrixXd ricci_frame;             // Ric(e_i, e_j)
};

LevelSurfaceData level_data(const SolitonStructure& s, const ChartPoint& p);

struct D2Check {
  double lhs = 0.0;
  double rhs = 0.0;
  double residual = 0.0;  // |lhs - rhs| / max(lhs, 1e-14)
};

D2Check check_D2(const SolitonStructure& s, const ChartPoint& p);

/// m points on {f = c}, found by bracketing along fixed rays (radial lines at
/// fixed angles for profile charts, lines from the box center otherwise).
/// Throws level_not_found when no ray meets the level.
std::vector<ChartPoint> level_points(const SolitonStructure& s, double c, int m);

struct LevelBattery {
  std::vector<ChartPoint> points;
  double grad_sq_spread = 0.0;
  double scalar_spread = 0.0;
  double mixed_ricci = 0.0;        // max |Ric(e_1, e_a)|
  double umbilic_defect = 0.0;     // max |h - H/(n-1) g_Sigma|
  double mean_curvature_spread = 0.0;
  double lambda = 0.0;             // Ric(e_1, e_1), mean over points
  double mu = 0.0;                 // tangential eigenvalue, mean over points
  double lambda_spread = 0.0;
  double mu_spread = 0.0;
  double multiplicity_defect = 0.0;  // max |Ric_tangential - mu I|

  double max_violation() const;
  bool pass(double tol) const { return max_violation() < tol; }
};

LevelBattery prop32_battery(const SolitonStructure& s, double c, int m);

struct FiberCheck {
  std::vector<ChartPoint> points;
  double gauss_vs_formula = 0.0;  // Gauss-equation fiber Ricci vs 2R_aa - R/(n-1) + (n-2)H^2/(n-1)^2
  double weyl_1a1a = 0.0;
  double fiber_ricci = 0.0;       // mean of the fiber Ricci diagonal
  double round_defect = -1.0;     // profile charts: |fiber Ricci - (n-2)/w^2|; -1 otherwise

  double max() const;
};

/// Throws dimension_too_low for n < 4.
FiberCheck einstein_fiber_check(const SolitonStructure& s, double c, int m);

struct WeightedFlux {
  double flux = 0.0;      // omega w^{n-1} e^f D_ikj grad^i f grad^j f nu^k
  double bound = 0.0;     // omega w^{n-1} e^f (|Ric| + |R|) |grad f|^3
  double majorant = 0.0;  // 2 omega w^{n-1} e^f
};

/// Boundary term over the geodesic sphere of radius r on a profile-backed structure.
/// Throws invalid_params without a profile, radius_outside_profile outside (eps, rmax).
WeightedFlux weighted_flux(const SolitonStructure& s, double r);

}  // namespace soliton
