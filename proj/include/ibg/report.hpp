#pragma once

#include "catalog.hpp"
#include "verify.hpp"

#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <sstream>

namespace ibg {

inline constexpr const char* kReportSchema = "ibg-report/1";

// Non-finite numbers have no JSON literal; they are written as strings.
inline json number_json(double v) {
  if (std::isfinite(v)) return v;
  if (std::isnan(v)) return "nan";
  return v > 0 ? "inf" : "-inf";
}

inline double number_from_json(const json& j) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) {
    const std::string s = j.get<std::string>();
    if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
  }
  throw Error(Errc::ConfigError, "expected a number in report");
}

inline json report_to_json(const VerificationReport& r) {
  json j;
  j["schema"] = kReportSchema;
  j["kind"] = r.kind;
  j["grid"] = {{"n", r.grid.n}, {"margin_stencils", static_cast<double>(r.grid.margin_stencils)}, {"points", r.points},
               {"skipped", r.skipped}};
  j["max"] = number_json(r.max);
  j["rms"] = number_json(r.rms);
  j["tol"] = number_json(r.tol);
  j["order"] = r.order ? number_json(*r.order) : json(nullptr);
  j["pass"] = r.pass;
  json wp = json::array();
  for (double x : r.worst_point) wp.push_back(number_json(x));
  j["worst_point"] = wp;
  return j;
}

inline VerificationReport report_from_json(const json& j) {
  try {
    if (j.at("schema").get<std::string>() != kReportSchema) throw Error(Errc::ConfigError, "unsupported report schema");
    VerificationReport r;
    r.kind = j.at("kind").get<std::string>();
    const json& g = j.at("grid");
    r.grid.n = g.at("n").get<std::vector<int>>();
    r.grid.margin_stencils = g.at("margin_stencils").get<double>();
    r.points = g.at("points").get<int>();
    r.skipped = g.at("skipped").get<int>();
    r.max = number_from_json(j.at("max"));
    r.rms = number_from_json(j.at("rms"));
    r.tol = number_from_json(j.at("tol"));
    if (!j.at("order").is_null()) r.order = number_from_json(j.at("order"));
    r.pass = j.at("pass").get<bool>();
    for (const auto& x : j.at("worst_point")) r.worst_point.push_back(number_from_json(x));
    return r;
  } catch (const json::exception& e) {
    throw Error(Errc::ConfigError, std::string("malformed report: ") + e.what());
  }
}

// Fixed layout so that re-runs are byte-identical.
inline std::string dump_report(const json& j) { return j.dump(2) + "\n"; }

inline void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error(Errc::OutOfDomain, "cannot write " + path);
  f << text;
  if (!f) throw Error(Errc::OutOfDomain, "write failed for " + path);
}

inline std::string format_real(Real v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", static_cast<double>(v));
  return buf;
}

// Grid dump of the entry's primary geometry: coordinates, then the upper
// triangle of the metric, then omega for Weyl structures.
inline std::string export_csv(const CatalogEntry& e, const std::vector<int>& grid, const FDConfig& cfg = {}) {
  std::ostringstream out;
  auto row = [&](const std::vector<std::string>& cells) {
    for (size_t i = 0; i < cells.size(); ++i) out << (i ? "," : "") << cells[i];
    out << '\n';
  };
  // a 4-point grid selects the 4-dimensional metric when the entry has both
  const bool want4 = e.metric4 && (!e.weyl || grid.size() == 4);
  if (e.weyl || e.metric4) {
    const MetricField& m = want4 ? *e.metric4 : e.weyl->metric;
    const Chart& c = m.chart;
    std::vector<std::string> head = c.names;
    for (int a = 0; a < c.dim; ++a)
      for (int b = a; b < c.dim; ++b) head.push_back("g" + std::to_string(a) + std::to_string(b));
    const bool with_omega = !want4;
    if (with_omega)
      for (int a = 0; a < c.dim; ++a) head.push_back("omega" + std::to_string(a));
    row(head);
    std::vector<int> n = grid.empty() ? std::vector<int>(c.dim, 5) : grid;
    int skipped = 0;
    for (const Vec& p : grid_points(c, GridSpec{n, 0}, cfg, &skipped)) {
      std::vector<std::string> cells;
      for (int a = 0; a < c.dim; ++a) cells.push_back(format_real(p(a)));
      const Mat g = m.g(p);
      for (int a = 0; a < c.dim; ++a)
        for (int b = a; b < c.dim; ++b) cells.push_back(format_real(g(a, b)));
      if (with_omega) {
        const Vec w = e.weyl->omega ? e.weyl->omega(p) : Vec::Zero(c.dim);
        for (int a = 0; a < c.dim; ++a) cells.push_back(format_real(w(a)));
      }
      row(cells);
    }
    return out.str();
  }
  if (e.riccati) {
    row({"r", "B00", "B01", "B02", "B10", "B11", "B12", "B20", "B21", "B22", "x", "y", "disc"});
    const int n = grid.empty() ? 11 : grid.at(0);
    for (int k = 0; k < n; ++k) {
      const Real r = n == 1 ? e.r_range.first
                            : e.r_range.first + (e.r_range.second - e.r_range.first) * k / (n - 1);
      const CMat3 B = e.riccati->at(r);
      const RiccatiInvariants inv = analyze(B);
      std::vector<std::string> cells{format_real(r)};
      for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) cells.push_back(format_real(B(i, j).real()));
      cells.push_back(format_real(inv.x.real()));
      cells.push_back(format_real(inv.y.real()));
      cells.push_back(format_real(inv.disc.real()));
      row(cells);
    }
    return out.str();
  }
  throw Error(Errc::BadParams, "entry '" + e.name + "' has no exportable grid geometry");
}

}  // namespace ibg
