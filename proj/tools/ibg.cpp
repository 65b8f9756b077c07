#include "ibg/pipeline.hpp"

#include <CLI11.hpp>

#include <iostream>

namespace {

std::vector<int> parse_grid_list(const std::string& s) {
  std::vector<int> g;
  if (s.empty()) return g;
  std::stringstream ss(s);
  for (std::string tok; std::getline(ss, tok, ',');) {
    try {
      size_t used = 0;
      const int v = std::stoi(tok, &used);
      if (used != tok.size() || v < 1) throw std::invalid_argument(tok);
      g.push_back(v);
    } catch (const std::exception&) {
      throw ibg::Error(ibg::Errc::ConfigError, "grid must be a comma-separated list of positive integers");
    }
  }
  return g;
}

int report_error(const std::exception& e) {
  std::cerr << "error: " << e.what() << "\n";
  if (const auto* ie = dynamic_cast<const ibg::Error*>(&e); ie && ie->code() == ibg::Errc::ConfigError)
    return ibg::kExitConfig;
  return ibg::kExitRuntime;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"ibg: build and verify integrable background geometries"};
  app.require_subcommand(1);

  auto* cat = app.add_subcommand("catalog", "catalog operations");
  auto* cat_list = cat->add_subcommand("list", "list catalog entries");
  bool list_json = false;
  cat_list->add_flag("--json", list_json, "print entries and declared checks as JSON");
  cat->require_subcommand(1);

  auto* run = app.add_subcommand("run", "run a pipeline config");
  std::string config_path, out_dir;
  bool no_timestamp = false;
  run->add_option("config", config_path, "pipeline config (JSON)")->required();
  run->add_option("--output-dir", out_dir, "override the config's output directory");
  run->add_flag("--no-timestamp", no_timestamp, "omit timestamps from reports");

  auto* ver = app.add_subcommand("verify", "verify a catalog object");
  std::string ref, kind, grid_s, out_file;
  double tol = 1e-8, fd_h = 1e-3;
  int fd_order = 4;
  ver->add_option("object", ref, "object reference name[:key=value,...]")->required();
  ver->add_option("--kind", kind, "check kind")->required();
  ver->add_option("--tol", tol, "tolerance")->check(CLI::PositiveNumber);
  ver->add_option("--grid", grid_s, "points per axis, e.g. 4,4,4");
  ver->add_option("--fd-h", fd_h, "finite-difference step")->check(CLI::PositiveNumber);
  ver->add_option("--fd-order", fd_order, "stencil order")->check(CLI::IsMember({2, 4, 6}));
  ver->add_option("--out", out_file, "write the report here instead of stdout");
  ver->add_flag("--no-timestamp", no_timestamp, "omit the timestamp");

  auto* exp = app.add_subcommand("export", "export a grid dump as CSV");
  exp->add_option("object", ref, "object reference name[:key=value,...]")->required();
  exp->add_option("--grid", grid_s, "points per axis, e.g. 5,5,5");
  exp->add_option("--out", out_file, "output CSV file")->required();
  exp->add_option("--fd-h", fd_h, "finite-difference step")->check(CLI::PositiveNumber);
  exp->add_option("--fd-order", fd_order, "stencil order")->check(CLI::IsMember({2, 4, 6}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : ibg::kExitConfig;
  }

  try {
    if (cat_list->parsed()) {
      if (list_json) {
        ibg::json out = ibg::json::array();
        for (const auto& name : ibg::catalog_names()) {
          const ibg::CatalogEntry e = ibg::catalog_get(name);
          ibg::json checks = ibg::json::array();
          for (const auto& c : e.checks)
            checks.push_back({{"kind", c.kind}, {"tol", static_cast<double>(c.tol)}, {"expect_pass", c.expect_pass},
                              {"grid", c.grid}});
          out.push_back({{"name", name}, {"summary", e.summary}, {"checks", checks}});
        }
        std::cout << out.dump(2) << "\n";
      } else {
        for (const auto& name : ibg::catalog_names()) std::cout << name << "\t" << ibg::catalog_get(name).summary << "\n";
      }
      return 0;
    }
    if (run->parsed()) {
      ibg::PipelineOptions opt;
      opt.timestamp = !no_timestamp;
      if (!out_dir.empty()) opt.output_dir = out_dir;
      ibg::json cfg;
      try {
        cfg = ibg::load_json_file(config_path);
      } catch (const std::exception& e) {
        return report_error(e);
      }
      return ibg::run_pipeline(cfg, opt).exit_code;
    }
    const ibg::FDConfig cfg{fd_h, fd_order};
    const ibg::ObjectRef r = ibg::parse_object_ref(ref);
    const std::vector<int> grid = parse_grid_list(grid_s);
    const ibg::CatalogEntry e = ibg::construct(r.entry, r.params);
    if (ver->parsed()) {
      const auto& kinds = ibg::check_kinds();
      if (std::find(kinds.begin(), kinds.end(), kind) == kinds.end())
        throw ibg::Error(ibg::Errc::ConfigError, "unknown check kind '" + kind + "'");
      const ibg::VerificationReport rep = ibg::run_check(e, kind, tol, grid, cfg);
      ibg::json j = ibg::report_to_json(rep);
      j["object"] = ref;
      if (!no_timestamp) j["timestamp"] = ibg::detail::utc_now();
      if (out_file.empty()) std::cout << ibg::dump_report(j);
      else ibg::write_text_file(out_file, ibg::dump_report(j));
      return rep.pass ? ibg::kExitPass : ibg::kExitFail;
    }
    ibg::write_text_file(out_file, ibg::export_csv(e, grid, cfg));
    return 0;
  } catch (const std::exception& e) {
    return report_error(e);
  }
}
