#pragma once

#include <filesystem>
#include <string>

#include <json.hpp>

#include "csrk/discretize.hpp"
#include "csrk/integrate.hpp"
#include "csrk/method.hpp"
#include "csrk/verify.hpp"

namespace csrk::io {

using nlohmann::json;

/// Shortest decimal that reads back to the same double.
std::string format_double(double value);

/// { label, B: [...], C: [...], alpha: [[...]] } with exact scalar strings.
/// `claims` is stored verbatim under "claims" when not null.
json method_to_json(const CsrkMethod& m, const json& claims = nullptr);
CsrkMethod method_from_json(const json& j);

/// Family-specific claims stored with a method, or null.
json method_claims(const json& j);

/// { verified_order_direct, order_residuals, breve: {B, C, D}, level_cap,
///   guaranteed_order, residuals: {symplectic, symmetric, energy}, flags, h_bound_per_unit_L }
json report_to_json(const PropertyReport& r);

/// { s, c, b, a, provenance }
json tableau_to_json(const ButcherTableau& t);
ButcherTableau tableau_from_json(const json& j);
/// One row per stage: c_i, bhat_i, a_i1..a_is.
std::string tableau_to_csv(const ButcherTableau& t);

/// { nodes, weights, id? }
Quadrature quadrature_from_json(const json& j);

/// Header t, z1..zd, iters; the initial row carries 0 iterations.
std::string trajectory_to_csv(const Trajectory& traj);

json read_json_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, const std::string& text);

}  // namespace csrk::io
