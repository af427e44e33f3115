#include "cvdc/cli.hpp"

#include "cvdc/resource_prep.hpp"

#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <ostream>

namespace cvdc::cli {

namespace {

using Json = nlohmann::ordered_json;

struct Output {
  Json meta;
  Json records = Json::array();
  std::vector<std::string> csv_header;
  std::vector<std::vector<std::string>> csv_rows;
};

std::string num(double x) {
  if (std::isnan(x)) return "nan";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

Json json_num(double x) {
  if (!std::isfinite(x)) return nullptr;
  return round_sig12(x);
}

Json json_taus(const std::vector<double>& taus) {
  auto a = Json::array();
  for (double t : taus) a.push_back(json_num(t));
  return a;
}

std::string taus_cell(const std::vector<double>& taus) {
  std::string s;
  for (std::size_t i = 0; i < taus.size(); ++i) {
    if (i) s += ';';
    s += num(taus[i]);
  }
  return s;
}

Json base_meta(const RunConfig& c) {
  Json meta;
  meta["command"] = std::string(command_name(c.command));
  meta["n_modes"] = c.n_modes;
  meta["units"] = c.bits ? "bits" : "nats";
  meta["convention"] = std::string(kConventionId);
  return meta;
}

std::string render(const Output& o, Format format) {
  if (format == Format::Json) {
    Json doc;
    doc["meta"] = o.meta;
    doc["records"] = o.records;
    return doc.dump(2) + "\n";
  }
  std::string s;
  for (std::size_t i = 0; i < o.csv_header.size(); ++i) s += (i ? "," : "") + o.csv_header[i];
  s += '\n';
  for (const auto& row : o.csv_rows) {
    for (std::size_t i = 0; i < row.size(); ++i) s += (i ? "," : "") + row[i];
    s += '\n';
  }
  return s;
}

int run_capacity(const RunConfig& c, Output& o) {
  const double unit = c.bits ? 1.0 / std::numbers::ln2 : 1.0;
  const auto rep = capacity(c.n_modes, c.taus, *c.nbar);
  Json r;
  r["taus"] = json_taus(rep.taus);
  r["nbar"] = json_num(rep.nbar);
  r["squeezing"] = json_num(rep.squeezing);
  r["sigma_msg_sq"] = json_num(rep.sigma_msg_sq);
  r["c_quantum"] = json_num(rep.c_quantum * unit);
  r["c_classical"] = json_num(rep.c_classical * unit);
  r["delta"] = json_num(rep.delta * unit);
  r["advantage"] = rep.delta > 0.0;
  o.csv_header = {"taus", "nbar", "squeezing", "sigma_msg_sq", "c_quantum", "c_classical", "delta", "advantage"};
  std::vector<std::string> row = {taus_cell(rep.taus),       num(rep.nbar),
                                  num(rep.squeezing),        num(rep.sigma_msg_sq),
                                  num(rep.c_quantum * unit), num(rep.c_classical * unit),
                                  num(rep.delta * unit),     rep.delta > 0.0 ? "1" : "0"};
  if (c.samples > 0) {
    const CapacityEvaluator eval(c.n_modes, c.taus);
    const auto mc = mutual_information_mc(eval.channel_at(*c.nbar), c.samples, c.seed);
    r["mc_estimate"] = json_num(mc.estimate * unit);
    r["mc_std_error"] = json_num(mc.std_error * unit);
    r["mc_samples"] = c.samples;
    r["seed"] = c.seed;
    o.csv_header.insert(o.csv_header.end(), {"mc_estimate", "mc_std_error", "mc_samples", "seed"});
    row.insert(row.end(), {num(mc.estimate * unit), num(mc.std_error * unit), std::to_string(c.samples),
                           std::to_string(c.seed)});
  }
  o.records.push_back(std::move(r));
  o.csv_rows.push_back(std::move(row));
  return kExitOk;
}

int run_threshold(const RunConfig& c, Output& o) {
  std::optional<double> th;
  std::vector<double> taus = c.taus;
  std::size_t ties = 0;
  if (taus.empty()) {
    const auto m = min_threshold_energy(c.n_modes, c.grid);
    th = m.nbar_th;
    taus = m.taus;
    ties = m.coarse_ties.size();
    o.meta["minimized_over_taus"] = true;
  } else {
    th = threshold_energy(c.n_modes, taus);
  }
  Json r;
  r["taus"] = json_taus(taus);
  r["nbar_th"] = th ? json_num(*th) : Json(nullptr);
  r["status"] = th ? "ok" : "no-root";
  if (ties) r["coarse_ties"] = ties;
  o.records.push_back(std::move(r));
  o.csv_header = {"taus", "nbar_th", "status"};
  o.csv_rows.push_back({taus_cell(taus), th ? num(*th) : "", th ? "ok" : "no-root"});
  return th ? kExitOk : kExitNoResult;
}

int run_breakeven(const RunConfig& c, Output& o) {
  const auto th = threshold_energy(c.n_modes, c.taus);
  const double r_be = th ? optimal_params(c.n_modes, *th).squeezing : std::nan("");
  Json r;
  r["taus"] = json_taus(c.taus);
  r["nbar_th"] = th ? json_num(*th) : Json(nullptr);
  r["r_break_even"] = json_num(r_be);
  r["status"] = th ? "ok" : "no-root";
  o.records.push_back(std::move(r));
  o.csv_header = {"taus", "nbar_th", "r_break_even", "status"};
  o.csv_rows.push_back({taus_cell(c.taus), th ? num(*th) : "", th ? num(r_be) : "", th ? "ok" : "no-root"});
  return th ? kExitOk : kExitNoResult;
}

int run_ratio(const RunConfig& c, Output& o) {
  const double nbar = (c.n_modes - 1) * std::exp(c.r) * std::sinh(c.r);
  const double ratio = asymptotic_ratio(c.n_modes, c.taus, c.r);
  Json r;
  r["taus"] = json_taus(c.taus);
  r["r"] = json_num(c.r);
  r["nbar"] = json_num(nbar);
  r["ratio"] = json_num(ratio);
  r["limit"] = json_num(static_cast<double>(c.n_modes) / (c.n_modes - 1));
  o.records.push_back(std::move(r));
  o.csv_header = {"taus", "r", "nbar", "ratio", "limit"};
  o.csv_rows.push_back(
      {taus_cell(c.taus), num(c.r), num(nbar), num(ratio), num(static_cast<double>(c.n_modes) / (c.n_modes - 1))});
  return kExitOk;
}

int run_verify(Output& o, std::ostream& err) {
  const auto checks = run_checkpoints();
  bool all = true;
  o.csv_header = {"name", "value", "expected", "tolerance", "tolerance_kind", "pass"};
  for (const auto& ck : checks) {
    all = all && ck.passed;
    Json r;
    r["name"] = ck.name;
    r["value"] = json_num(ck.value);
    r["expected"] = json_num(ck.expected);
    r["tolerance"] = json_num(ck.tolerance);
    r["tolerance_kind"] = ck.relative ? "relative" : "absolute";
    r["pass"] = ck.passed;
    o.records.push_back(std::move(r));
    o.csv_rows.push_back({ck.name, num(ck.value), num(ck.expected), num(ck.tolerance),
                          ck.relative ? "relative" : "absolute", ck.passed ? "1" : "0"});
    err << (ck.passed ? "[PASS] " : "[FAIL] ") << ck.name << " = " << num(ck.value) << " (expected "
        << num(ck.expected) << (ck.relative ? " rel " : " +- ") << num(ck.tolerance) << ")\n";
  }
  o.meta["all_passed"] = all;
  return all ? kExitOk : kExitCheckFailed;
}

}  // namespace

Command parse_command(std::string_view name) {
  if (name == "capacity") return Command::Capacity;
  if (name == "scan") return Command::Scan;
  if (name == "threshold") return Command::Threshold;
  if (name == "breakeven") return Command::Breakeven;
  if (name == "ratio") return Command::Ratio;
  if (name == "verify") return Command::Verify;
  throw ConfigError("unknown command '" + std::string(name) + "'");
}

std::string_view command_name(Command command) {
  switch (command) {
    case Command::Capacity: return "capacity";
    case Command::Scan: return "scan";
    case Command::Threshold: return "threshold";
    case Command::Breakeven: return "breakeven";
    case Command::Ratio: return "ratio";
    case Command::Verify: return "verify";
  }
  return "unknown";
}

Format parse_format(std::string_view name) {
  if (name == "csv") return Format::Csv;
  if (name == "json") return Format::Json;
  throw ConfigError("format must be csv or json, got '" + std::string(name) + "'");
}

void RunConfig::validate() const {
  if (command == Command::Verify) return;
  if (n_modes < 2) throw ConfigError("--modes must be >= 2");
  const bool needs_taus = command == Command::Capacity || command == Command::Breakeven || command == Command::Ratio;
  if (needs_taus && taus.empty()) throw ConfigError("--tau is required for this command");
  if (!taus.empty()) {
    if (static_cast<int>(taus.size()) != n_modes - 1) {
      throw ConfigError("--tau needs exactly n_modes - 1 comma-separated values");
    }
    for (double t : taus) {
      if (!(t >= 0.0 && t <= 1.0)) throw ConfigError("--tau values must lie in [0, 1]");
    }
  }
  if (command == Command::Capacity || command == Command::Scan) {
    if (!nbar) throw ConfigError("--nbar is required for this command");
    if (!(*nbar >= 0.0) || !std::isfinite(*nbar)) throw ConfigError("--nbar must be >= 0");
  }
  if (command == Command::Scan && grid < 8) throw ConfigError("--grid must be >= 8");
  if (command == Command::Threshold && taus.empty()) {
    if (n_modes != 3 && n_modes != 4) throw ConfigError("threshold minimization needs --modes 3 or 4");
    if (grid < 2) throw ConfigError("--grid must be >= 2");
  }
  if (command == Command::Ratio && !(r >= 10.0)) throw ConfigError("--r must be >= 10");
  if (samples > 0 && samples < 10000) throw ConfigError("--samples must be 0 or >= 10000");
}

int run(const RunConfig& config, std::ostream& out, std::ostream& err) {
  try {
    config.validate();
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << "\n";
    return kExitInvalidConfig;
  }

  std::string text;
  int status = kExitOk;
  try {
    if (config.command == Command::Scan) {
      const auto scan = region_scan(config.n_modes, *config.nbar, config.grid, config.workers);
      text = serialize_region(scan, config.format, config.bits);
      if (scan.advantage_count() == 0) {
        err << "note: no grid point shows a quantum advantage\n";
        status = kExitNoResult;
      }
    } else {
      Output o;
      o.meta = base_meta(config);
      switch (config.command) {
        case Command::Capacity: status = run_capacity(config, o); break;
        case Command::Threshold: status = run_threshold(config, o); break;
        case Command::Breakeven: status = run_breakeven(config, o); break;
        case Command::Ratio: status = run_ratio(config, o); break;
        case Command::Verify: status = run_verify(o, err); break;
        case Command::Scan: break;
      }
      text = render(o, config.format);
    }
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return kExitInvalidConfig;
  }

  if (config.out.empty()) {
    out << text;
  } else {
    std::ofstream file(config.out, std::ios::binary | std::ios::trunc);
    if (!file || !(file << text) || !file.flush()) {
      err << "error: cannot write " << config.out << "\n";
      return kExitInvalidConfig;
    }
  }
  return status;
}

}  // namespace cvdc::cli
