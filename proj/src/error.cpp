#include "soliton/error.hpp"

#include <iomanip>
#include <ostream>

#include "soliton/tensor.hpp"

namespace soliton {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::point_outside_domain: return "point-outside-domain";
    case ErrorCode::order_unsupported: return "order-unsupported";
    case ErrorCode::insufficient_jet_order: return "insufficient-jet-order";
    case ErrorCode::non_positive_definite: return "non-positive-definite";
    case ErrorCode::dimension_too_low: return "dimension-too-low";
    case ErrorCode::step_underflow: return "differencing-step-underflow";
    case ErrorCode::unknown_model: return "unknown-model";
    case ErrorCode::invalid_params: return "invalid-params";
    case ErrorCode::rho_unsupported: return "rho-unsupported";
    case ErrorCode::zero_c0: return "zero-C0";
    case ErrorCode::step_failure: return "step-failure";
    case ErrorCode::radius_outside_profile: return "radius-outside-profile";
    case ErrorCode::rmax_too_small: return "rmax-too-small";
    case ErrorCode::non_monotone_r: return "non-monotone-R";
    case ErrorCode::psi_undefined: return "psi-undefined";
    case ErrorCode::critical_point: return "critical-point";
    case ErrorCode::level_not_found: return "level-not-found";
  }
  return "unknown-error";
}

void dump_tensor(std::ostream& out, const RealTensor& t, const std::string& index_order) {
  out << "# " << index_order << " dim=" << t.dim() << " rank=" << t.rank() << '\n';
  const auto old = out.precision(17);
  for (double v : t.data()) out << v << '\n';
  out.precision(old);
}

}  // namespace soliton
