/*
 * Copyright 2026 The Lopsided Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#include "lopsided/cli.hpp"
#include "lopsided/errors.hpp"

namespace {

using lopsided::cli::ExperimentConfig;

constexpr const char* kFooter = R"(CSV columns:
  bounds       alpha,beta,tau,d,uniform,thin_box,lopsided,applicable
  count-curve  label,parameters,total,trivial,nontrivial,elapsed
  count-sums   k,X,total,trivial,nontrivial,elapsed
  xi-sum       theta,eps,Y,partial_sum,c_eps,bound,bound_holds
  fit          slope,intercept,used
bounds --json writes every report with its diagnostics. detlab always writes JSON. Numbers use '.' as decimal point in every locale.
Exit codes: 0 success, 2 configuration error, 3 guard violation.)";

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exponent bounds and desk-scale counters for points in lopsided boxes"};
  app.footer(kFooter);
  app.require_subcommand(1);

  std::string config_path, form, box, x_grid, d_grid, a_grid, y_grid, samples_text;
  std::string variant, method, out;
  int k = 0, curve_degree = 0;
  double eps = 0, theta = 0;
  std::uint64_t prime_cap = 0, prime_min = 0, samples = 0, seed = 0;
  unsigned workers = 0;
  bool as_json = false;

  app.add_option("--config", config_path, "JSON experiment config; flags override it");
  app.add_option("--form", form, "form text such as \"x1^2+x2^2-x3^2\" or JSON terms");
  app.add_option("--box", box, "box P1,P2,P3");
  app.add_option("--k", k, "power k");
  app.add_option("--x-grid", x_grid, "comma-separated X values");
  app.add_option("--eps", eps, "epsilon");
  app.add_option("--degree", d_grid, "comma-separated determinant degrees D");
  app.add_option("--cap-a", a_grid, "comma-separated exponent-set caps A");
  app.add_option("--prime-cap", prime_cap, "largest prime scanned / prime product cap");
  app.add_option("--prime-min", prime_min, "smallest prime scanned by detlab");
  app.add_option("--workers", workers, "worker threads");
  app.add_option("--out", out, "output file (default stdout)");
  app.add_flag("--json", as_json, "JSON output");
  app.add_option("--variant", variant, "count-sums: naive, pipeline, three-one");
  app.add_option("--method", method, "count-curve: bruteforce, solver");
  app.add_option("--samples", samples, "bounds: number of random profiles");
  app.add_option("--seed", seed, "bounds: RNG seed");
  app.add_option("--curve-degree", curve_degree, "bounds: curve degree d");
  app.add_option("--theta", theta, "xi-sum: exponent theta");
  app.add_option("--y-grid", y_grid, "xi-sum: comma-separated Y values");
  app.add_option("--fit-samples", samples_text, "fit: X:count pairs, comma-separated");

  for (const char* name : {"bounds", "theta-table", "count-curve", "count-sums",
                           "detlab", "xi-sum", "fit"}) {
    app.add_subcommand(name)->fallthrough();
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return lopsided::cli::kExitConfig;
  }

  ExperimentConfig config;
  try {
    if (!config_path.empty()) {
      std::ifstream in(config_path);
      if (!in) throw lopsided::InputError("cannot read config " + config_path);
      std::stringstream ss;
      ss << in.rdbuf();
      nlohmann::json doc;
      try {
        doc = nlohmann::json::parse(ss.str());
      } catch (const nlohmann::json::parse_error& e) {
        throw lopsided::InputError(std::string("config is not JSON: ") + e.what());
      }
      config = ExperimentConfig::FromJson(doc);
    }
    config.command = app.get_subcommands().front()->get_name();
    auto given = [&](const char* flag) { return app.count(flag) > 0; };
    if (given("--form")) config.form = form;
    if (given("--box")) {
      const auto v = lopsided::cli::ParseDoubleList(box);
      if (v.size() != 3) throw lopsided::InputError("--box needs three values");
      config.box = std::array<double, 3>{v[0], v[1], v[2]};
    }
    if (given("--k")) config.k = k;
    if (given("--x-grid")) config.x_grid = lopsided::cli::ParseUintList(x_grid);
    if (given("--eps")) config.eps = eps;
    if (given("--degree")) {
      config.d_grid.clear();
      for (auto d : lopsided::cli::ParseUintList(d_grid)) config.d_grid.push_back(static_cast<int>(d));
    }
    if (given("--cap-a")) config.a_grid = lopsided::cli::ParseDoubleList(a_grid);
    if (given("--prime-cap")) config.prime_cap = prime_cap;
    if (given("--prime-min")) config.prime_min = prime_min;
    if (given("--workers")) config.workers = workers;
    if (given("--out")) config.out = out;
    if (given("--json")) config.as_json = as_json;
    if (given("--variant")) config.variant = variant;
    if (given("--method")) config.method = method;
    if (given("--samples")) config.samples = samples;
    if (given("--seed")) config.seed = seed;
    if (given("--curve-degree")) config.curve_degree = curve_degree;
    if (given("--theta")) config.theta = theta;
    if (given("--y-grid")) config.y_grid = lopsided::cli::ParseUintList(y_grid);
    if (given("--fit-samples")) config.fit_samples = lopsided::cli::ParseSamples(samples_text);
  } catch (const lopsided::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return lopsided::cli::kExitConfig;
  }

  const auto result = lopsided::cli::RunExperiment(config);
  if (!result.message.empty()) std::cerr << result.message << '\n';
  if (result.exit_code != lopsided::cli::kExitOk) return result.exit_code;
  try {
    if (config.out.empty()) {
      std::cout << result.text;
    } else {
      lopsided::cli::WriteOutputAtomically(config.out, result.text);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return lopsided::cli::kExitConfig;
  }
  return lopsided::cli::kExitOk;
}
