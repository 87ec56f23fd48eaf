#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "soliton/chart.hpp"
#include "soliton/curvature.hpp"
#include "soliton/profile.hpp"

namespace soliton {

constexpr std::uint64_t kDefaultSeed = 0x5011;

/// f, its coordinate gradient and covariant Hessian nabla_i nabla_j f at a point.
struct PotentialJet {
  double f = 0.0;
  std::vector<double> grad;
  RealTensor hess;
};

/// A metric chart with a potential f and soliton constant rho, Ric + Hess f = rho g.
/// Immutable after construction and safe to share across threads.
class SolitonStructure {
 public:
  SolitonStructure(std::string name, std::shared_ptr<const MetricChart> chart, ScalarFormula potential,
                   double rho, std::optional<double> c0, std::vector<double> box_lo,
                   std::vector<double> box_hi);

  const std::string& name() const noexcept { return name_; }
  int dim() const noexcept { return chart_->dim(); }
  const MetricChart& chart() const noexcept { return *chart_; }
  std::shared_ptr<const MetricChart> chart_ptr() const noexcept { return chart_; }
  const ScalarFormula& potential() const noexcept { return potential_; }
  double rho() const noexcept { return rho_; }
  bool steady() const noexcept { return rho_ == 0.0; }
  bool expanding() const noexcept { return rho_ == -0.5; }
  std::optional<double> c0() const noexcept { return c0_; }

  /// Registry tolerance for the pointwise soliton residual.
  double tolerance() const noexcept { return tolerance_; }
  void set_tolerance(double tol) { tolerance_ = tol; }

  /// Profile backing a rotationally symmetric model, else null.
  std::shared_ptr<const SolitonProfile> profile() const noexcept { return profile_; }
  void set_profile(std::shared_ptr<const SolitonProfile> profile) { profile_ = std::move(profile); }

  const std::vector<double>& box_lo() const noexcept { return box_lo_; }
  const std::vector<double>& box_hi() const noexcept { return box_hi_; }

  /// Taylor expansion of f about p. Throws point_outside_domain.
  Taylor potential_taylor(const ChartPoint& p, int order) const;

  /// Uses the given Christoffel symbols Gamma^a_bc for the Hessian.
  PotentialJet potential_jet(const ChartPoint& p, const RealTensor& christoffel) const;
  PotentialJet potential_jet(const ChartPoint& p) const;

  /// 2^{n+1} scrambled Sobol points in the model box, shifted by a
  /// Cranley-Patterson offset drawn from mt19937_64(seed).
  std::vector<ChartPoint> default_grid(std::uint64_t seed = kDefaultSeed) const;

 private:
  std::string name_;
  std::shared_ptr<const MetricChart> chart_;
  ScalarFormula potential_;
  double rho_;
  std::optional<double> c0_;
  std::vector<double> box_lo_;
  std::vector<double> box_hi_;
  double tolerance_ = 1e-10;
  std::shared_ptr<const SolitonProfile> profile_;
};

struct ModelParams {
  int dim = 0;                  // 0 picks the model default
  std::optional<double> a = std::nullopt;  // center value f''(0) for bryant / expander
  double linear = 0.0;          // line-cigar: coefficient of the linear term along the line
  double rmax = 60.0;           // profile models
  double tol = 1e-10;           // profile models
};

/// Registry names: flat, gaussian-expander, cigar, line-cigar, bryant, expander, sphere-factor.
/// Throws unknown_model or invalid_params.
SolitonStructure model(std::string_view name, const ModelParams& params = {});
const std::vector<std::string>& model_names();

/// Rotationally symmetric structure on (eps, rmax) x sphere box from a profile.
SolitonStructure profile_chart(std::shared_ptr<const SolitonProfile> profile);

}  // namespace soliton
