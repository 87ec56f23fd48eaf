#pragma once

#include <cstddef>
#include <functional>
#include <string_view>
#include <vector>

#include "soliton/report.hpp"

namespace soliton {

/// Worker cap from SOLITON_FORGE_THREADS (positive integer), else the hardware concurrency.
std::size_t worker_count();

/// Runs body(0..count-1) on up to worker_count() threads. Rethrows the
/// exception of the lowest failing index.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

/// Reports of one named suite (not "all") on s. label names the case.
/// Throws invalid_params when the suite does not apply to the model.
std::vector<IdentityReport> run_suite(const SolitonStructure& s, const VerifySpec& spec, std::string_view suite,
                                      const std::string& label);

/// Builds the model, runs the suite (every applicable suite for "all") over the
/// seeded default grid and assembles the report.
RunReport run_verify(const VerifySpec& spec);

}  // namespace soliton
