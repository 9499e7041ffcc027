// Command-line front end: list, run, verify and sweep scenarios.
//
// Exit codes: 0 when every executed check passes, 1 when a check fails,
// 2 on usage or configuration errors. Every error goes to the error stream
// as one JSON object on one line.
#pragma once

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "kahler/report.hpp"
#include "kahler/scenarios.hpp"

namespace kahler::cli {

inline constexpr int kExitPass = 0;
inline constexpr int kExitCheckFailed = 1;
inline constexpr int kExitUsage = 2;

/// One machine-parsable error line.
inline std::string error_record(const std::string& kind, const std::string& message, int code) {
  return nlohmann::json{{"error", kind}, {"message", message}, {"exit", code}}.dump();
}

/// Writes to a temporary file next to `path`, then renames it over `path`.
/// On failure nothing is left at `path` that was not there before.
inline void write_atomically(const std::filesystem::path& path, const std::string& content) {
  namespace fs = std::filesystem;
  const fs::path dir = path.has_parent_path() ? path.parent_path() : fs::path(".");
  std::error_code ec;
  if (!fs::is_directory(dir, ec))
    throw Error(ErrorKind::Io, "output directory '" + dir.string() + "' does not exist");
  const fs::path tmp = dir / ("." + path.filename().string() + ".tmp");
  {
    std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
    if (!os) throw Error(ErrorKind::Io, "cannot open '" + tmp.string() + "' for writing");
    os << content;
    os.flush();
    if (!os) {
      os.close();
      fs::remove(tmp, ec);
      throw Error(ErrorKind::Io, "short write to '" + tmp.string() + "'");
    }
  }
  fs::rename(tmp, path, ec);
  if (ec) {
    std::error_code ignore;
    fs::remove(tmp, ignore);
    throw Error(ErrorKind::Io, "cannot move report into place at '" + path.string() + "': " + ec.message());
  }
}

inline std::string report_text(const VerificationReport& r) { return r.to_json().dump(2) + "\n"; }

namespace detail {

// Flag name -> ScenarioConfig field. Also the accepted sweep parameters.
inline const std::vector<std::string>& parameter_names() {
  static const std::vector<std::string> names = {"h",        "eps",           "eta",       "delta",
                                                 "n-radius", "nprime-radius", "quad-order"};
  return names;
}

inline void set_parameter(ScenarioConfig& c, const std::string& name, double v) {
  if (!std::isfinite(v)) throw Error(ErrorKind::InvalidArgument, name + " must be finite");
  if (name == "h") c.h = v;
  else if (name == "eps") c.eps = v;
  else if (name == "eta") c.eta = v;
  else if (name == "delta") c.delta = v;
  else if (name == "n-radius") c.n_radius = v;
  else if (name == "nprime-radius") c.nprime_radius = v;
  else if (name == "quad-order") {
    if (v != std::floor(v) || v < 2 || v > 64) throw Error(ErrorKind::InvalidArgument, "quad-order must be an integer in [2, 64]");
    c.quad_order = static_cast<int>(v);
  } else {
    throw Error(ErrorKind::InvalidArgument, "unknown parameter '" + name + "'");
  }
}

inline std::vector<double> parse_csv_values(const std::string& csv) {
  std::vector<double> out;
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(item, &used);
    } catch (const std::exception&) {
      throw Error(ErrorKind::InvalidArgument, "bad value '" + item + "' in --values");
    }
    if (used != item.size() || !std::isfinite(v))
      throw Error(ErrorKind::InvalidArgument, "bad value '" + item + "' in --values");
    out.push_back(v);
  }
  if (out.empty()) throw Error(ErrorKind::InvalidArgument, "--values is empty");
  return out;
}

inline std::string slug(const std::string& s) {
  std::string out;
  for (char ch : s) {
    const bool keep = (ch >= 'a' && ch <= 'z') || (ch >= 'A' && ch <= 'Z') || (ch >= '0' && ch <= '9') || ch == '.';
    out += keep ? ch : '_';
  }
  return out;
}

// Raw and smoothed potentials on every positivity plan at spacing h.
inline void dump_fields(const std::filesystem::path& dir, const Scenario& s, const SmoothedPushforward& f) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Error(ErrorKind::Io, "cannot create dump directory '" + dir.string() + "'");
  for (const auto& plan : s.positivity) {
    const auto nodes = plan.nodes(s.params.h);
    for (const auto& [tag, cocycle] : {std::pair{"raw", &f.raw}, std::pair{"smoothed", &f.smoothed}}) {
      const ScalarField& u = cocycle->potential(plan.chart);
      std::ostringstream os;
      write_csv(os, nodes, [&](const ComplexPoint& x) { return u(x); });
      write_atomically(dir / (s.id + "_" + slug(plan.name) + "_" + tag + ".csv"), os.str());
    }
  }
}

}  // namespace detail

/// Runs one command line. argv[0] is the program name.
inline int execute(const std::vector<std::string>& argv, std::ostream& out = std::cout,
                   std::ostream& err = std::cerr) {
  CLI::App app{"Push Kahler potentials forward along branched covers, smooth them, and verify the result"};
  app.require_subcommand(1);
  app.set_help_flag("--help", "print help");  // -h is taken by the grid spacing
  app.set_help_all_flag("--help-all");

  auto* list = app.add_subcommand("list", "print the scenarios and their defaults");

  std::string scenario, out_path, dump_dir;
  std::optional<double> h, eps, eta, delta, n_radius, nprime_radius;
  std::optional<int> quad_order;
  auto* run = app.add_subcommand("run", "run one scenario and write its report");
  run->add_option("--scenario", scenario, "scenario id")->required();
  run->add_option("--h", h, "grid spacing");
  run->add_option("--eps", eps, "mollifier radius");
  run->add_option("--eta", eta, "regularized-max width");
  run->add_option("--delta", delta, "shift amplitude");
  run->add_option("--n-radius", n_radius, "radius of N");
  run->add_option("--nprime-radius", nprime_radius, "radius of N'");
  run->add_option("--quad-order", quad_order, "mollifier quadrature order");
  run->add_option("--out", out_path, "report path (JSON)")->required();
  run->add_option("--dump-fields", dump_dir, "directory for CSV field dumps");

  std::string report_path;
  auto* verify = app.add_subcommand("verify", "re-check a stored report");
  verify->add_option("--report", report_path, "report path (JSON)")->required();

  std::string sweep_scenario, sweep_param, sweep_values, sweep_out;
  auto* sweep = app.add_subcommand("sweep", "run one scenario over several values of one parameter");
  sweep->add_option("--scenario", sweep_scenario, "scenario id")->required();
  sweep->add_option("--param", sweep_param, "parameter name")
      ->required()
      ->check(CLI::IsMember(detail::parameter_names()));
  sweep->add_option("--values", sweep_values, "comma-separated values")->required();
  sweep->add_option("--out", sweep_out, "sweep report path (JSON)")->required();

  std::vector<const char*> cargv;
  for (const auto& a : argv) cargv.push_back(a.c_str());
  if (cargv.empty()) cargv.push_back("kahler");
  try {
    app.parse(static_cast<int>(cargv.size()), cargv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitPass;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitPass;
  } catch (const CLI::ParseError& e) {
    err << error_record("usage", e.what(), kExitUsage) << "\n";
    return kExitUsage;
  }

  try {
    if (list->parsed()) {
      for (const auto& id : scenario_ids()) out << scenario_defaults(build_scenario(id)).dump() << "\n";
      return kExitPass;
    }

    if (run->parsed()) {
      ScenarioConfig cfg;
      cfg.h = h;
      cfg.eps = eps;
      cfg.eta = eta;
      cfg.delta = delta;
      cfg.n_radius = n_radius;
      cfg.nprime_radius = nprime_radius;
      cfg.quad_order = quad_order;
      for (const auto& v : {h, eps, eta, delta, n_radius, nprime_radius})
        if (v && !std::isfinite(*v)) throw Error(ErrorKind::InvalidArgument, "parameter overrides must be finite");
      const Scenario s = build_scenario(scenario, cfg);  // all overrides validated here
      std::optional<SmoothedPushforward> fields;
      const VerificationReport rep = run_scenario(s, dump_dir.empty() ? nullptr : &fields);
      write_atomically(out_path, report_text(rep));
      if (!dump_dir.empty() && fields) detail::dump_fields(dump_dir, s, *fields);
      if (rep.error) err << error_record("pipeline", *rep.error, kExitCheckFailed) << "\n";
      for (const auto& c : rep.checks)
        if (!c.pass) err << error_record("check_failed", c.name, kExitCheckFailed) << "\n";
      return rep.pass() ? kExitPass : kExitCheckFailed;
    }

    if (verify->parsed()) {
      std::ifstream is(report_path);
      if (!is) throw Error(ErrorKind::Io, "cannot read '" + report_path + "'");
      nlohmann::json j;
      try {
        j = nlohmann::json::parse(is);
      } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorKind::InvalidArgument, std::string("report is not JSON: ") + e.what());
      }
      std::vector<std::string> bad;
      try {
        bad = report_inconsistencies(j);
      } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorKind::InvalidArgument, std::string("malformed report: ") + e.what());
      }
      for (const auto& b : bad) err << error_record("inconsistent_report", b, kExitCheckFailed) << "\n";
      if (!bad.empty()) return kExitCheckFailed;
      const bool pass = j.at("pass").get<bool>();
      out << nlohmann::json{{"report", report_path}, {"consistent", true}, {"pass", pass}}.dump() << "\n";
      if (!pass) err << error_record("check_failed", "report records failing checks", kExitCheckFailed) << "\n";
      return pass ? kExitPass : kExitCheckFailed;
    }

    if (sweep->parsed()) {
      const std::vector<double> values = detail::parse_csv_values(sweep_values);
      build_scenario(sweep_scenario);  // unknown ids are usage errors, not sweep results
      nlohmann::json runs = nlohmann::json::array();
      bool all = true;
      for (double v : values) {
        nlohmann::json entry = {{"value", v}};
        try {
          ScenarioConfig cfg;
          detail::set_parameter(cfg, sweep_param, v);
          const VerificationReport rep = run_scenario(build_scenario(sweep_scenario, cfg));
          entry["pass"] = rep.pass();
          entry["report"] = rep.to_json();
        } catch (const Error& e) {
          entry["pass"] = false;
          entry["error"] = std::string(to_string(e.kind())) + ": " + e.what();
        }
        all = all && entry["pass"].get<bool>();
        runs.push_back(std::move(entry));
      }
      const nlohmann::json doc = {
          {"scenario", sweep_scenario}, {"param", sweep_param}, {"runs", runs}, {"pass", all}};
      write_atomically(sweep_out, doc.dump(2) + "\n");
      if (!all) err << error_record("check_failed", "sweep has failing runs", kExitCheckFailed) << "\n";
      return all ? kExitPass : kExitCheckFailed;
    }
  } catch (const Error& e) {
    err << error_record(to_string(e.kind()), e.what(), kExitUsage) << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    err << error_record("internal", e.what(), kExitUsage) << "\n";
    return kExitUsage;
  }
  err << error_record("usage", "no subcommand", kExitUsage) << "\n";
  return kExitUsage;
}

}  // namespace kahler::cli
