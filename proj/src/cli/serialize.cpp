#include "cvdc/cli.hpp"

#include "cvdc/resource_prep.hpp"

#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <numbers>
#include <sstream>

namespace cvdc::cli {

namespace {

std::string format_number(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

std::vector<std::string> split(std::string_view line, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = line.find(sep, start);
    out.emplace_back(line.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

double parse_double(const std::string& s) {
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (end == s.c_str() || *end != '\0') throw std::invalid_argument("parse_region: bad number '" + s + "'");
  return v;
}

int infer_grid(std::size_t count, int dims) {
  const int g = static_cast<int>(std::lround(std::pow(static_cast<double>(count), 1.0 / dims)));
  std::size_t check = 1;
  for (int k = 0; k < dims; ++k) check *= static_cast<std::size_t>(g);
  return check == count ? g : 0;
}

}  // namespace

double round_sig12(double x) {
  if (!std::isfinite(x) || x == 0.0) return x;
  return std::strtod(format_number(x).c_str(), nullptr);
}

std::string serialize_region(const RegionScan& scan, Format format, bool bits) {
  if (scan.records.empty()) throw std::invalid_argument("serialize_region: scan has no records");
  const double scale = bits ? 1.0 / std::numbers::ln2 : 1.0;
  const std::string unit = bits ? "bits" : "nats";
  const int dims = scan.n_modes - 1;

  if (format == Format::Csv) {
    std::string out;
    out.reserve(scan.records.size() * 48);
    for (int k = 0; k < dims; ++k) out += "tau" + std::to_string(k + 1) + ",";
    out += "delta_" + unit + ",advantage\n";
    for (const auto& rec : scan.records) {
      for (double t : rec.taus) {
        out += format_number(t);
        out += ',';
      }
      out += format_number(rec.delta * scale);
      out += rec.advantage ? ",1\n" : ",0\n";
    }
    return out;
  }

  nlohmann::ordered_json meta;
  meta["n_modes"] = scan.n_modes;
  meta["nbar"] = round_sig12(scan.nbar);
  meta["grid"] = scan.grid;
  meta["units"] = unit;
  meta["convention"] = std::string(kConventionId);
  meta["advantage_points"] = scan.advantage_count();
  auto records = nlohmann::ordered_json::array();
  for (const auto& rec : scan.records) {
    nlohmann::ordered_json r;
    auto taus = nlohmann::ordered_json::array();
    for (double t : rec.taus) taus.push_back(round_sig12(t));
    r["taus"] = std::move(taus);
    r["delta"] = round_sig12(rec.delta * scale);
    r["advantage"] = rec.advantage;
    records.push_back(std::move(r));
  }
  nlohmann::ordered_json doc;
  doc["meta"] = std::move(meta);
  doc["records"] = std::move(records);
  return doc.dump(1) + "\n";
}

RegionScan parse_region(std::string_view text, Format format) {
  RegionScan scan;
  if (format == Format::Csv) {
    std::vector<std::string> lines = split(text, '\n');
    while (!lines.empty() && lines.back().empty()) lines.pop_back();
    if (lines.empty()) throw std::invalid_argument("parse_region: empty CSV");
    const auto header = split(lines[0], ',');
    if (header.size() < 3 || header.back() != "advantage") throw std::invalid_argument("parse_region: bad CSV header");
    const int dims = static_cast<int>(header.size()) - 2;
    scan.n_modes = dims + 1;
    for (std::size_t i = 1; i < lines.size(); ++i) {
      const auto cells = split(lines[i], ',');
      if (static_cast<int>(cells.size()) != dims + 2) throw std::invalid_argument("parse_region: ragged CSV row");
      RegionRecord rec;
      for (int k = 0; k < dims; ++k) rec.taus.push_back(parse_double(cells[k]));
      rec.delta = parse_double(cells[dims]);
      rec.advantage = cells[dims + 1] == "1";
      scan.records.push_back(std::move(rec));
    }
    scan.grid = infer_grid(scan.records.size(), dims);
    return scan;
  }

  const auto doc = nlohmann::json::parse(text);
  const auto& meta = doc.at("meta");
  scan.n_modes = meta.at("n_modes").get<int>();
  scan.nbar = meta.at("nbar").get<double>();
  scan.grid = meta.at("grid").get<int>();
  for (const auto& r : doc.at("records")) {
    RegionRecord rec;
    rec.taus = r.at("taus").get<std::vector<double>>();
    rec.delta = r.at("delta").get<double>();
    rec.advantage = r.at("advantage").get<bool>();
    scan.records.push_back(std::move(rec));
  }
  return scan;
}

}  // namespace cvdc::cli
