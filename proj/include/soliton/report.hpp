#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "json.hpp"
#include "soliton/identities.hpp"

namespace soliton {

inline constexpr const char* kToolVersion = "0.1.0";

struct VerifySpec {
  std::string model;
  ModelParams params;
  std::string suite = "all";
  std::map<std::string, double> tolerances;  // identity name -> override
  std::uint64_t seed = kDefaultSeed;
  bool timings = false;  // wall-clock times make the output run-dependent
};

struct RunReport {
  std::string tool_version = kToolVersion;
  VerifySpec spec;
  std::vector<IdentityReport> reports;
  bool overall_pass = false;
  std::map<std::string, double> timings;  // suite -> seconds
};

/// steady-identities, conformal-tensors, bach-divergence, level-geometry, asymptotics, brendle, all.
const std::vector<std::string>& suite_names();

/// A report meets its expectation when it passes, or fails while marked as an expected failure.
bool meets_expectation(const IdentityReport& r);
bool overall_pass(const std::vector<IdentityReport>& reports);

void to_json(nlohmann::json& j, const IdentityReport& r);
void from_json(const nlohmann::json& j, IdentityReport& r);
void to_json(nlohmann::json& j, const ModelParams& p);
void from_json(const nlohmann::json& j, ModelParams& p);
void to_json(nlohmann::json& j, const VerifySpec& s);
void from_json(const nlohmann::json& j, VerifySpec& s);
void to_json(nlohmann::json& j, const RunReport& r);
void from_json(const nlohmann::json& j, RunReport& r);

/// Two-space indented JSON followed by a newline.
std::string dump(const nlohmann::json& j);

/// Short model label such as bryant(3) or line-cigar(3,linear=0.5).
std::string model_label(const VerifySpec& spec, int dim);

/// Matrix of case x identity -> max residual, rows and columns sorted by name.
nlohmann::json merge_reports(const std::vector<RunReport>& reports);

/// r,w,dw,f,df,R,Ric_rr,Ric_sph,D_norm,B_norm per node, 17 significant digits.
/// D and B come from the generic curvature engine on the profile chart; they are
/// nan for r < 0.1 and at the interval ends, where the polar chart is unusable.
void write_profile_csv(std::ostream& os, const SolitonStructure& s);

/// r,R,rR,V per node.
void write_plot_csv(std::ostream& os, const SolitonProfile& profile);

/// decay_const, volume_exponent, potential_fit and center_limit (null fields
/// with asymptotics_error when the profile is too short).
nlohmann::json profile_summary(const SolitonProfile& profile);

}  // namespace soliton
