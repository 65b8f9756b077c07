#pragma once

#include "catalog.hpp"
#include "report.hpp"

#include <chrono>
#include <ctime>
#include <filesystem>
#include <iomanip>
#include <iostream>
#include <map>

namespace ibg {

inline constexpr const char* kPipelineSchema = "ibg-pipeline/1";

enum ExitCode : int { kExitPass = 0, kExitFail = 1, kExitConfig = 2, kExitRuntime = 3 };

// name or name:key=value,key=value. Values parse as JSON literals when they
// can (numbers, true/false) and are strings otherwise.
struct ObjectRef {
  std::string entry;
  json params = json::object();
};

inline ObjectRef parse_object_ref(const std::string& ref) {
  ObjectRef out;
  const auto colon = ref.find(':');
  out.entry = ref.substr(0, colon);
  if (out.entry.empty()) throw Error(Errc::ConfigError, "empty object reference");
  if (colon == std::string::npos) return out;
  std::stringstream ss(ref.substr(colon + 1));
  for (std::string kv; std::getline(ss, kv, ',');) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos || eq == 0) throw Error(Errc::ConfigError, "bad parameter '" + kv + "' in '" + ref + "'");
    const std::string key = kv.substr(0, eq), val = kv.substr(eq + 1);
    json v = json::parse(val, nullptr, false);
    if (v.is_discarded() || v.is_object() || v.is_array()) v = val;
    out.params[key] = v;
  }
  return out;
}

// Catalog failures while building from a reference are configuration errors.
inline CatalogEntry construct(const std::string& name, const json& params) {
  try {
    return catalog_get(name, params);
  } catch (const Error& e) {
    if (e.code() == Errc::UnknownEntry || e.code() == Errc::BadParams) throw Error(Errc::ConfigError, e.what());
    throw;
  }
}

struct PipelineOptions {
  bool timestamp = true;
  std::optional<std::string> output_dir;  // overrides the config
  std::ostream* log = &std::cout;
};

struct PipelineStep {
  enum class Type { Construct, Verify, Export } type;
  std::string target;
  std::string entry;
  json params = json::object();
  std::string kind;
  double tol = 0;
  std::vector<int> grid;
  std::string file;
};

struct Pipeline {
  FDConfig fd;
  std::string output_dir = ".";
  std::vector<PipelineStep> steps;
  std::map<std::string, CatalogEntry> objects;  // built during validation
};

namespace detail {

inline void allow_keys(const json& j, const std::string& where, std::initializer_list<const char*> keys) {
  if (!j.is_object()) throw Error(Errc::ConfigError, where + " must be an object");
  std::set<std::string> ok(keys.begin(), keys.end());
  for (const auto& [k, v] : j.items())
    if (!ok.count(k)) throw Error(Errc::ConfigError, where + ": unknown key '" + k + "'");
}

inline std::vector<int> parse_grid(const json& j, const std::string& where) {
  if (!j.is_array() || j.empty()) throw Error(Errc::ConfigError, where + ": grid must be a non-empty array");
  std::vector<int> g;
  for (const auto& x : j) {
    if (!x.is_number_integer() || x.get<int>() < 1) throw Error(Errc::ConfigError, where + ": grid entries must be positive integers");
    g.push_back(x.get<int>());
  }
  return g;
}

inline std::string safe_name(const std::string& s) {
  std::string o;
  for (char c : s) o += (std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-') ? c : '_';
  return o;
}

inline std::string utc_now() {
  const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  std::ostringstream s;
  s << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return s.str();
}

}  // namespace detail

// Full validation, including construction of every object, before anything runs.
inline Pipeline validate_pipeline(const json& cfg) {
  using detail::allow_keys;
  Pipeline p;
  allow_keys(cfg, "config", {"schema", "description", "output_dir", "fd", "steps"});
  if (!cfg.contains("schema") || cfg["schema"] != kPipelineSchema)
    throw Error(Errc::ConfigError, std::string("config schema must be \"") + kPipelineSchema + "\"");
  if (cfg.contains("output_dir")) {
    if (!cfg["output_dir"].is_string()) throw Error(Errc::ConfigError, "output_dir must be a string");
    p.output_dir = cfg["output_dir"].get<std::string>();
  }
  if (cfg.contains("fd")) {
    const json& fd = cfg["fd"];
    allow_keys(fd, "fd", {"h", "order"});
    if (fd.contains("h")) {
      if (!fd["h"].is_number() || !(fd["h"].get<double>() > 0)) throw Error(Errc::ConfigError, "fd.h must be positive");
      p.fd.h = fd["h"].get<double>();
    }
    if (fd.contains("order")) {
      if (!fd["order"].is_number_integer()) throw Error(Errc::ConfigError, "fd.order must be 2, 4 or 6");
      p.fd.order = fd["order"].get<int>();
      if (p.fd.order != 2 && p.fd.order != 4 && p.fd.order != 6) throw Error(Errc::ConfigError, "fd.order must be 2, 4 or 6");
    }
  }
  if (!cfg.contains("steps") || !cfg["steps"].is_array() || cfg["steps"].empty())
    throw Error(Errc::ConfigError, "steps must be a non-empty array");

  std::string last;
  const auto& kinds = check_kinds();
  for (size_t i = 0; i < cfg["steps"].size(); ++i) {
    const json& s = cfg["steps"][i];
    const std::string where = "steps[" + std::to_string(i) + "]";
    if (!s.is_object() || s.size() != 1) throw Error(Errc::ConfigError, where + " must have exactly one of construct, verify, export");
    const auto& [type, body] = *s.items().begin();
    PipelineStep st;
    auto resolve_target = [&](const char* what) {
      st.target = body.contains("target") ? body["target"].get<std::string>() : last;
      if (st.target.empty()) throw Error(Errc::ConfigError, where + ": " + what + " before any construct");
      if (!p.objects.count(st.target)) throw Error(Errc::ConfigError, where + ": unknown target '" + st.target + "'");
    };
    try {
      if (type == "construct") {
        allow_keys(body, where, {"id", "entry", "params"});
        st.type = PipelineStep::Type::Construct;
        st.entry = body.at("entry").get<std::string>();
        st.target = body.contains("id") ? body["id"].get<std::string>() : st.entry;
        if (body.contains("params")) st.params = body["params"];
        if (p.objects.count(st.target)) throw Error(Errc::ConfigError, where + ": duplicate id '" + st.target + "'");
        p.objects.emplace(st.target, construct(st.entry, st.params));
        last = st.target;
      } else if (type == "verify") {
        allow_keys(body, where, {"target", "kind", "tol", "grid"});
        st.type = PipelineStep::Type::Verify;
        resolve_target("verify");
        st.kind = body.at("kind").get<std::string>();
        if (std::find(kinds.begin(), kinds.end(), st.kind) == kinds.end())
          throw Error(Errc::ConfigError, where + ": unknown check kind '" + st.kind + "'");
        if (!body.at("tol").is_number() || !(body["tol"].get<double>() > 0))
          throw Error(Errc::ConfigError, where + ": tol must be a positive number");
        st.tol = body["tol"].get<double>();
        if (body.contains("grid")) st.grid = detail::parse_grid(body["grid"], where);
      } else if (type == "export") {
        allow_keys(body, where, {"target", "format", "grid", "file"});
        st.type = PipelineStep::Type::Export;
        resolve_target("export");
        if (body.contains("format") && body["format"] != "csv") throw Error(Errc::ConfigError, where + ": only csv export is supported");
        if (body.contains("grid")) st.grid = detail::parse_grid(body["grid"], where);
        st.file = body.contains("file") ? body["file"].get<std::string>() : detail::safe_name(st.target) + ".csv";
        if (st.file.empty() || st.file.find('/') != std::string::npos)
          throw Error(Errc::ConfigError, where + ": file must be a plain file name");
      } else {
        throw Error(Errc::ConfigError, where + ": unknown step type '" + type + "'");
      }
    } catch (const json::exception& e) {
      throw Error(Errc::ConfigError, where + ": " + e.what());
    }
    p.steps.push_back(std::move(st));
  }
  return p;
}

inline json load_json_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw Error(Errc::ConfigError, "cannot open " + path);
  json j = json::parse(f, nullptr, false);
  if (j.is_discarded()) throw Error(Errc::ConfigError, path + " is not valid JSON");
  return j;
}

struct PipelineResult {
  int exit_code = kExitPass;
  std::vector<std::string> artifacts;
  std::string message;
};

inline PipelineResult run_pipeline(const json& cfg, const PipelineOptions& opt = {}) {
  PipelineResult res;
  std::ostream& log = *opt.log;
  Pipeline p;
  try {
    p = validate_pipeline(cfg);
  } catch (const Error& e) {
    const bool cfg_err = e.code() == Errc::ConfigError;
    res.exit_code = cfg_err ? kExitConfig : kExitRuntime;
    res.message = e.what();
    log << (cfg_err ? "config error: " : "runtime error: ") << e.what() << "\n";
    return res;
  } catch (const std::exception& e) {
    res.exit_code = kExitRuntime;
    res.message = e.what();
    log << "runtime error: " << e.what() << "\n";
    return res;
  }
  const std::filesystem::path dir = opt.output_dir ? *opt.output_dir : p.output_dir;
  bool all_pass = true;
  try {
    std::filesystem::create_directories(dir);
    int n_verify = 0;
    for (size_t i = 0; i < p.steps.size(); ++i) {
      const PipelineStep& st = p.steps[i];
      std::ostringstream idx;
      idx << std::setw(3) << std::setfill('0') << i;
      if (st.type == PipelineStep::Type::Construct) {
        log << "construct " << st.target << " (" << st.entry << ")\n";
        continue;
      }
      const CatalogEntry& e = p.objects.at(st.target);
      if (st.type == PipelineStep::Type::Verify) {
        ++n_verify;
        const VerificationReport r = run_check(e, st.kind, st.tol, st.grid, p.fd);
        json j = report_to_json(r);
        j["object"] = st.target;
        if (opt.timestamp) j["timestamp"] = detail::utc_now();
        const auto path = dir / (idx.str() + "-" + detail::safe_name(st.target) + "-" + st.kind + ".json");
        write_text_file(path.string(), dump_report(j));
        res.artifacts.push_back(path.string());
        all_pass = all_pass && r.pass;
        log << (r.pass ? "pass " : "FAIL ") << st.target << " " << st.kind << std::setprecision(6) << " max=" << r.max
            << " tol=" << r.tol << "\n";
      } else {
        const auto path = dir / st.file;
        write_text_file(path.string(), export_csv(e, st.grid, p.fd));
        res.artifacts.push_back(path.string());
        log << "export " << st.target << " -> " << path.string() << "\n";
      }
    }
    if (n_verify == 0) log << "no verify steps\n";
  } catch (const std::exception& e) {
    res.exit_code = kExitRuntime;
    res.message = e.what();
    log << "runtime error: " << e.what() << "\n";
    return res;
  }
  res.exit_code = all_pass ? kExitPass : kExitFail;
  return res;
}

}  // namespace ibg
