#pragma once

#include <string>
#include <vector>

#include "soliton/curvature.hpp"
#include "soliton/models.hpp"

namespace soliton {

/// max |R_ij + nabla_i nabla_j f - rho g_ij|.
double soliton_residual(const SolitonStructure& s, const ChartPoint& p);

struct HamiltonResiduals {
  double grad_scalar = 0.0;   // max |nabla_i R - 2 R_ij nabla^j f|
  double conservation = 0.0;  // |R + |grad f|^2 - C0| (steady) or |R + |grad f|^2 + f| (expanding)
};

/// Throws rho_unsupported unless rho is 0 or -1/2.
HamiltonResiduals hamilton_identities(const SolitonStructure& s, const ChartPoint& p);

/// Minimum scalar curvature over the points.
double scalar_nonneg_scan(const SolitonStructure& s, const std::vector<ChartPoint>& points);

/// The structure with g scaled by C0 so that R + |grad f|^2 = 1. Returns an
/// equal structure when C0 is already 1. Throws zero_c0 or invalid_params.
SolitonStructure normalize_steady(const SolitonStructure& s);

/// D_ijk for a soliton. Throws dimension_too_low for n < 3.
RealTensor d_tensor(const SolitonStructure& s, const ChartPoint& p);
RealTensor d_tensor(const CurvaturePack& pack, const PotentialJet& f);

/// max over the skew-symmetry and both trace conditions.
double d_symmetry_residual(const RealTensor& d, const RealTensor& g_inv);

/// max |D_ijk - C_ijk - W_ijkl nabla^l f|.
double check_DCW(const SolitonStructure& s, const ChartPoint& p);

struct BDCheck {
  RealTensor bach_term;  // (n-2) B_ij
  RealTensor rest;       // nabla^k D_ikj + (n-3)/(n-2) C_jli nabla^l f
  double residual = 0.0; // max |bach_term + rest|
};

/// Divergence of D by Richardson differencing of d_tensor (step h0).
BDCheck check_BD(const SolitonStructure& s, const ChartPoint& p, double h0 = 1e-3);

struct BachFlux {
  double div_bach_grad_f = 0.0;  // nabla^j B_ij nabla^i f
  double cotton_squared = 0.0;   // |C|^2
  double residual = 0.0;         // |div_bach_grad_f + |C|^2 / 2|
};

/// Three-dimensional identity div(B)(grad f) = -|C|^2 / 2.
BachFlux bach_flux_identity(const SolitonStructure& s, const ChartPoint& p, double h0 = 1e-3);

/// Named residual statistics for one identity over a set of points.
struct IdentityReport {
  std::string case_name;
  std::string identity;
  int dim = 0;
  std::vector<std::vector<double>> points;
  double max_abs_residual = 0.0;
  double tolerance = 0.0;
  bool pass = false;
  bool expected_failure = false;
};

}  // namespace soliton
