// Verification reports: named checks with values, tolerances and pass flags.
#pragma once

#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "kahler/core.hpp"

namespace kahler {

/// One named check. pass is recomputed from value, relation and tol, so a
/// stored report can be re-verified. Checks that do not apply carry
/// status "not_applicable" and count as passing.
struct Check {
  std::string name;
  double value = 0.0;
  double tol = 0.0;
  std::string relation = "<=";  // value <relation> tol
  bool pass = false;
  bool applicable = true;
  std::string note;

  static bool holds(double value, const std::string& rel, double tol) {
    if (std::isnan(value) || std::isnan(tol)) return false;
    if (rel == "<=") return value <= tol;
    if (rel == "<") return value < tol;
    if (rel == ">=") return value >= tol;
    if (rel == ">") return value > tol;
    if (rel == "==") return value == tol;
    throw Error(ErrorKind::InvalidArgument, "unknown check relation '" + rel + "'");
  }

  static Check make(std::string name, double value, std::string rel, double tol, std::string note = "") {
    Check c{std::move(name), value, tol, std::move(rel), false, true, std::move(note)};
    c.pass = holds(c.value, c.relation, c.tol);
    return c;
  }

  static Check not_applicable(std::string name, std::string note) {
    Check c{std::move(name), 0.0, 0.0, "==", true, false, std::move(note)};
    return c;
  }

  static Check failed(std::string name, std::string note) {
    Check c{std::move(name), std::nan(""), 0.0, "==", false, true, std::move(note)};
    return c;
  }
};

namespace detail {

inline nlohmann::json number(double v) {
  if (std::isfinite(v)) return v;
  if (std::isnan(v)) return nullptr;
  return v > 0 ? "inf" : "-inf";
}

inline double number_from(const nlohmann::json& j) {
  if (j.is_null()) return std::nan("");
  if (j.is_string()) return j.get<std::string>() == "inf" ? INFINITY : -INFINITY;
  return j.get<double>();
}

}  // namespace detail

struct VerificationReport {
  std::string scenario;
  nlohmann::json params = nlohmann::json::object();
  std::vector<Check> checks;
  nlohmann::json env = nlohmann::json::object();
  std::optional<std::string> error;  // pipeline error, embedded instead of thrown

  bool pass() const {
    if (error) return false;
    for (const auto& c : checks)
      if (!c.pass) return false;
    return !checks.empty();
  }

  void add(Check c) { checks.push_back(std::move(c)); }

  const Check* find(const std::string& name) const {
    for (const auto& c : checks)
      if (c.name == name) return &c;
    return nullptr;
  }

  nlohmann::json to_json() const {
    nlohmann::json cs = nlohmann::json::array();
    for (const auto& c : checks) {
      nlohmann::json j = {{"name", c.name},
                          {"value", detail::number(c.value)},
                          {"tol", detail::number(c.tol)},
                          {"relation", c.relation},
                          {"pass", c.pass}};
      if (!c.applicable) j["status"] = "not_applicable";
      if (!c.note.empty()) j["note"] = c.note;
      cs.push_back(std::move(j));
    }
    nlohmann::json out = {{"scenario", scenario}, {"params", params}, {"checks", cs}, {"env", env}, {"pass", pass()}};
    if (error) out["error"] = *error;
    return out;
  }

  static VerificationReport from_json(const nlohmann::json& j) {
    VerificationReport r;
    r.scenario = j.at("scenario").get<std::string>();
    r.params = j.at("params");
    r.env = j.at("env");
    for (const auto& c : j.at("checks")) {
      Check k;
      k.name = c.at("name").get<std::string>();
      k.value = detail::number_from(c.at("value"));
      k.tol = detail::number_from(c.at("tol"));
      k.relation = c.value("relation", "<=");
      k.pass = c.at("pass").get<bool>();
      k.applicable = c.value("status", "") != "not_applicable";
      k.note = c.value("note", "");
      r.checks.push_back(std::move(k));
    }
    if (j.contains("error")) r.error = j.at("error").get<std::string>();
    return r;
  }
};

/// Internal consistency of a stored report: every check's pass flag agrees
/// with its value, relation and tolerance, and the overall flag agrees with
/// the checks. Returns the list of problems (empty when consistent).
inline std::vector<std::string> report_inconsistencies(const nlohmann::json& j) {
  std::vector<std::string> bad;
  for (const char* key : {"scenario", "params", "checks", "env", "pass"})
    if (!j.contains(key)) bad.push_back(std::string("missing key '") + key + "'");
  if (!bad.empty()) return bad;
  const VerificationReport r = VerificationReport::from_json(j);
  for (const auto& c : r.checks) {
    if (!c.applicable) {
      if (!c.pass) bad.push_back(c.name + ": not-applicable check marked failing");
      continue;
    }
    bool expect = false;
    try {
      expect = Check::holds(c.value, c.relation, c.tol);
    } catch (const Error& e) {
      bad.push_back(c.name + ": " + e.what());
      continue;
    }
    if (expect != c.pass) bad.push_back(c.name + ": pass flag disagrees with value/tol");
  }
  if (r.pass() != j.at("pass").get<bool>()) bad.push_back("overall pass flag disagrees with the checks");
  return bad;
}

}  // namespace kahler
