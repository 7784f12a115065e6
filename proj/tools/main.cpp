// specshift batch CLI.  Thin front end: flags are folded into a RunConfig
// JSON object, handed to the shared library through the C API, and the
// returned report is written to --out-dir (report.json plus one CSV per
// table).  Exit status: 0 all declared tolerances passed, 1 a tolerance
// failed, 2 usage or input errors.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "specshift.h"

using json = nlohmann::json;

namespace {

std::vector<double> parse_double_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(std::stod(item));
  }
  return out;
}

std::vector<int> parse_int_list(const std::string& text) {
  // "4,8,16" or "4..32" (doubling range)
  const auto dots = text.find("..");
  std::vector<int> out;
  if (dots != std::string::npos) {
    const int lo = std::stoi(text.substr(0, dots));
    const int hi = std::stoi(text.substr(dots + 2));
    for (int v = lo; v <= hi; v *= 2) out.push_back(v);
  } else {
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
      if (!item.empty()) out.push_back(std::stoi(item));
    }
  }
  return out;
}

json function_field(const std::string& spec) {
  if (!spec.empty() && spec[0] == '{') return json::parse(spec);
  return spec;  // preset name or @file, resolved by the library
}

int emit_and_exit(const std::string& config_text, const std::string& out_dir) {
  char* report_text = nullptr;
  int pass = 0;
  const ss_status st = ss_run_json(config_text.c_str(), &report_text, &pass);
  if (st != SS_OK) {
    std::cerr << "error (" << ss_status_name(st) << "): " << ss_last_error() << "\n";
    return st == SS_ERR_PARSE || st == SS_ERR_INVALID_ARGUMENT || st == SS_ERR_IO ? 2 : 1;
  }
  const json report = json::parse(report_text);
  ss_string_free(report_text);

  std::filesystem::create_directories(out_dir);
  const auto write = [&](const std::string& name, const std::string& text) {
    std::ofstream f(std::filesystem::path(out_dir) / name, std::ios::binary);
    f << text;
  };
  write("report.json", report.dump(2) + "\n");
  if (report.contains("tables")) {
    for (const auto& [name, text] : report.at("tables").items())
      write(name + ".csv", text.get<std::string>());
  }

  std::cout << (pass ? "PASS" : "FAIL") << "  subcommand="
            << report.at("config").value("subcommand", "?")
            << "  config_hash=" << report.value("config_hash", "?") << "\n";
  if (report.contains("results")) {
    for (const auto& [key, value] : report.at("results").items()) {
      if (value.is_number() || value.is_boolean() || value.is_string())
        std::cout << "  " << key << " = " << value.dump() << "\n";
    }
  }
  std::cout << "artifacts: " << out_dir << "/report.json\n";
  return pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"specshift: divided differences, operator integrals, spectral shift, "
               "ideal norms (library version " + std::string(ss_version()) + ")"};
  app.require_subcommand(1);
  app.fallthrough();  // accept global flags after the subcommand name

  std::string config_path, out_dir = ".", f_spec = "gaussian";
  std::string lambda_text, routes = "all", dims_text, ideal = "weak", alphas_text;
  std::string scales_text, matrix_path, v_path;
  uint64_t seed = 12345;
  int n = 2, dim = 0, levels = 12, trials = 0;
  double tol = 0, truncation = 16.0, growth_tol = 2.0;

  app.add_option("--config", config_path, "JSON config file (flags override its fields)");
  app.add_option("--seed", seed, "master seed");
  app.add_option("--out-dir", out_dir, "artifact directory");
  app.add_option("--tol", tol, "declared tolerance for the pass/fail gate");
  app.add_option("--levels", levels, "dyadic levels m_max");
  app.add_option("--dims", dims_text, "dimension list, e.g. 8,16,32 or 4..32");
  app.add_option("--trials", trials, "trials per configuration");

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--f", f_spec,
                    "function: gaussian | rational | polynomial | @file.json | inline json");
    sub->add_option("--n", n, "order n");
    sub->add_option("--dim", dim, "matrix dimension");
    sub->add_option("--H", matrix_path, "matrix JSON file for H");
    sub->add_option("--V", v_path, "matrix JSON file for V");
    sub->add_option("--truncation", truncation, "lattice truncation radius T");
  };

  CLI::App* divdiff = app.add_subcommand("divdiff", "divided-difference routes");
  add_common(divdiff);
  divdiff->add_option("--lambda", lambda_text, "comma list of n+1 nodes");
  divdiff->add_option("--routes", routes, "all or comma list of routes");

  CLI::App* moi = app.add_subcommand("moi", "dyadic MOI convergence study");
  add_common(moi);
  moi->add_flag("--converge", "per-level error table (default behaviour)");

  CLI::App* deriv = app.add_subcommand("deriv", "Gateaux derivative route agreement");
  add_common(deriv);

  CLI::App* remainder = app.add_subcommand("remainder", "Taylor remainder scaling");
  add_common(remainder);
  remainder->add_option("--scales", scales_text, "comma list of V scalings");

  CLI::App* ssf = app.add_subcommand("ssf", "Krein spectral shift function");
  add_common(ssf);

  CLI::App* cyclic = app.add_subcommand("cyclic", "cyclic trace reduction residuals");
  add_common(cyclic);

  CLI::App* scan = app.add_subcommand("scan", "estimate-constant ensemble scan");
  add_common(scan);
  scan->add_option("--ideal", ideal, "weak | dmconvex");
  scan->add_option("--growth-tol", growth_tol, "allowed cross-dimension growth");

  CLI::App* norms = app.add_subcommand("norms", "ideal norm report for one matrix");
  add_common(norms);
  norms->add_option("--in", matrix_path, "matrix JSON file");

  CLI::App* propcheck = app.add_subcommand("propcheck", "quasi-norm inequality suite");
  add_common(propcheck);

  CLI::App* interp = app.add_subcommand("interp", "weak-norm boundedness scan");
  add_common(interp);
  interp->add_option("--alphas", alphas_text, "comma list of argument exponents");
  interp->add_option("--growth-tol", growth_tol, "allowed cross-dimension growth");

  CLI11_PARSE(app, argc, argv);
  CLI::App* sub = app.get_subcommands().front();

  json config;
  if (!config_path.empty()) {
    std::ifstream in(config_path);
    if (!in.good()) {
      std::cerr << "error: cannot open config " << config_path << "\n";
      return 2;
    }
    try {
      in >> config;
    } catch (const std::exception& e) {
      std::cerr << "error: config parse: " << e.what() << "\n";
      return 2;
    }
  }
  config["subcommand"] = sub->get_name();
  config["seed"] = seed;

  try {
    const auto passed = [&](const std::string& flag) { return sub->count(flag) > 0; };
    if (passed("--f") || !config.contains("f")) config["f"] = function_field(f_spec);
    if (passed("--n") || !config.contains("n")) config["n"] = n;
    if (passed("--dim") || (dim > 0 && !config.contains("dim"))) {
      if (dim > 0) config["dim"] = dim;
    }
    if (passed("--H")) config["H"] = matrix_path;
    if (passed("--V")) config["V"] = v_path;
    if (passed("--truncation")) config["truncation"] = truncation;
    if (app.count("--tol") && tol > 0) config["tol"] = tol;
    if (app.count("--levels")) config["levels"] = levels;
    if (app.count("--trials") && trials > 0) config["trials"] = trials;
    if (app.count("--dims") && !dims_text.empty()) config["dims"] = parse_int_list(dims_text);

    const std::string name = sub->get_name();
    if (name == "divdiff") {
      if (!lambda_text.empty()) config["lambda"] = parse_double_list(lambda_text);
      config["routes"] = routes;
      if (app.count("--levels")) config["level"] = levels;
      config.erase("levels");
    } else if (name == "remainder") {
      if (!scales_text.empty()) config["scales"] = parse_double_list(scales_text);
    } else if (name == "scan") {
      config["ideal"] = ideal;
      if (sub->count("--growth-tol")) config["growth_tol"] = growth_tol;
    } else if (name == "interp") {
      if (!alphas_text.empty()) config["alphas"] = parse_double_list(alphas_text);
      if (sub->count("--growth-tol")) config["growth_tol"] = growth_tol;
    } else if (name == "norms") {
      if (sub->count("--in")) config["matrix"] = matrix_path;
      config.erase("H");
    }
  } catch (const std::exception& e) {
    std::cerr << "error: bad flag value: " << e.what() << "\n";
    return 2;
  }

  return emit_and_exit(config.dump(), out_dir);
}
