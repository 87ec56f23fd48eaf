#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace soliton {

enum class ErrorCode {
  point_outside_domain,
  order_unsupported,
  insufficient_jet_order,
  non_positive_definite,
  dimension_too_low,
  step_underflow,
  unknown_model,
  invalid_params,
  rho_unsupported,
  zero_c0,
  step_failure,
  radius_outside_profile,
  rmax_too_small,
  non_monotone_r,
  psi_undefined,
  critical_point,
  level_not_found,
};

std::string_view to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace soliton
