#include "csrk/io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "csrk/errors.hpp"

namespace csrk::io {

namespace {

[[noreturn]] void schema_error(const std::string& what) { throw Error(ErrorKind::ParseError, what); }

const json& field(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) schema_error(std::string("missing field '") + key + "'");
  return j.at(key);
}

Coeffs scalars_from(const json& j, const char* what) {
  if (!j.is_array()) schema_error(std::string(what) + " must be an array of exact strings");
  Coeffs out;
  for (const auto& v : j) {
    if (v.is_string()) {
      out.push_back(Scalar::parse(v.get<std::string>()));
    } else if (v.is_number_integer()) {
      out.push_back(Scalar(v.get<long>()));
    } else {
      schema_error(std::string(what) + " entries must be exact strings");
    }
  }
  return out;
}

json scalars_to(const Coeffs& c) {
  json out = json::array();
  for (const auto& v : c) out.push_back(v.to_string());
  return out;
}

std::vector<double> doubles_from(const json& j, const char* what) {
  if (!j.is_array()) schema_error(std::string(what) + " must be an array of numbers");
  std::vector<double> out;
  for (const auto& v : j) {
    if (!v.is_number()) schema_error(std::string(what) + " entries must be numbers");
    out.push_back(v.get<double>());
  }
  return out;
}

}  // namespace

std::string format_double(double value) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, res.ptr);
}

json method_to_json(const CsrkMethod& m, const json& claims) {
  json alpha = json::array();
  for (const auto& row : m.alpha()) alpha.push_back(scalars_to(row));
  json j = {{"label", m.label()}, {"B", scalars_to(m.b().coeffs())}, {"C", scalars_to(m.c().coeffs())}, {"alpha", alpha}};
  if (!claims.is_null()) j["claims"] = claims;
  return j;
}

CsrkMethod method_from_json(const json& j) {
  const json& alpha_j = field(j, "alpha");
  if (!alpha_j.is_array()) schema_error("alpha must be a matrix of exact strings");
  AlphaMatrix alpha;
  for (const auto& row : alpha_j) alpha.push_back(scalars_from(row, "alpha row"));
  std::string label;
  if (j.contains("label")) {
    if (!j["label"].is_string()) schema_error("label must be a string");
    label = j["label"].get<std::string>();
  }
  return new_method(std::move(alpha), UnivariatePoly(scalars_from(field(j, "B"), "B")),
                    UnivariatePoly(scalars_from(field(j, "C"), "C")), std::move(label));
}

json method_claims(const json& j) { return j.is_object() && j.contains("claims") ? j["claims"] : json(nullptr); }

json report_to_json(const PropertyReport& r) {
  json order_residuals = json::array();
  for (const auto& v : r.order_conditions.residuals) order_residuals.push_back(v.to_string());
  json energy = json::array();
  for (const auto& v : r.energy_residuals) energy.push_back(v.to_string());
  json breve = {{"B", r.breve.rho_unbounded ? json("unbounded") : json(r.breve.rho)},
                {"C", r.breve.eta},
                {"D", r.breve.zeta}};
  json residuals = {{"symplectic", r.symplectic_residual.to_string()},
                    {"symmetric", r.symmetric_residual ? json(r.symmetric_residual->to_string()) : json(nullptr)},
                    {"energy", energy}};
  json flags = {{"symplectic", r.symplectic}, {"symmetric", r.symmetric}, {"energy", r.energy_preserving}};
  return {{"verified_order_direct", r.order_conditions.order},
          {"order_residuals", order_residuals},
          {"breve", breve},
          {"level_cap", r.level_cap},
          {"guaranteed_order", r.guaranteed_order},
          {"residuals", residuals},
          {"flags", flags},
          {"h_bound_per_unit_L", r.h_bound_per_unit_l}};
}

json tableau_to_json(const ButcherTableau& t) {
  return {{"s", t.stages()}, {"c", t.c}, {"b", t.b}, {"a", t.a}, {"provenance", t.provenance}};
}

ButcherTableau tableau_from_json(const json& j) {
  const json& a_j = field(j, "a");
  if (!a_j.is_array()) schema_error("a must be a matrix of numbers");
  std::vector<std::vector<double>> a;
  for (const auto& row : a_j) a.push_back(doubles_from(row, "a row"));
  std::string provenance;
  if (j.contains("provenance") && j["provenance"].is_string()) provenance = j["provenance"].get<std::string>();
  ButcherTableau t = make_tableau(std::move(a), doubles_from(field(j, "b"), "b"), doubles_from(field(j, "c"), "c"),
                                  std::move(provenance));
  if (j.contains("s") && (!j["s"].is_number_integer() || j["s"].get<int>() != t.stages())) {
    schema_error("s does not match the tableau size");
  }
  return t;
}

std::string tableau_to_csv(const ButcherTableau& t) {
  std::string out;
  for (int i = 0; i < t.stages(); ++i) {
    out += format_double(t.c[i]) + "," + format_double(t.b[i]);
    for (double v : t.a[i]) out += "," + format_double(v);
    out += "\n";
  }
  return out;
}

Quadrature quadrature_from_json(const json& j) {
  std::string id = "custom";
  if (j.contains("id") && j["id"].is_string()) id = j["id"].get<std::string>();
  return custom_quadrature(doubles_from(field(j, "nodes"), "nodes"), doubles_from(field(j, "weights"), "weights"),
                           std::move(id));
}

std::string trajectory_to_csv(const Trajectory& traj) {
  std::string out = "t";
  const long d = traj.states.empty() ? 0 : traj.states.front().size();
  for (long k = 1; k <= d; ++k) out += ",z" + std::to_string(k);
  out += ",iters\n";
  for (std::size_t n = 0; n < traj.times.size(); ++n) {
    out += format_double(traj.times[n]);
    for (long k = 0; k < d; ++k) out += "," + format_double(traj.states[n][k]);
    out += "," + std::to_string(n == 0 ? 0 : traj.iterations[n - 1]) + "\n";
  }
  return out;
}

json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::IoError, "cannot open " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  try {
    return json::parse(ss.str());
  } catch (const json::exception& e) {
    throw Error(ErrorKind::ParseError, path.string() + ": " + e.what());
  }
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) {
    std::error_code ec;
    std::filesystem::create_directories(path.parent_path(), ec);
  }
  std::ofstream out(path);
  if (!out) throw Error(ErrorKind::IoError, "cannot write " + path.string());
  out << text;
  if (!out) throw Error(ErrorKind::IoError, "failed writing " + path.string());
}

}  // namespace csrk::io
