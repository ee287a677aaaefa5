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

// Experiment front end shared by the command-line tool and its tests.

#ifndef LOPSIDED_CLI_HPP_
#define LOPSIDED_CLI_HPP_

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

namespace lopsided::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitGuard = 3;

// One JSON document per experiment; command-line flags override fields.
struct ExperimentConfig {
  std::string command;  // bounds, theta-table, count-curve, count-sums,
                        // detlab, xi-sum, fit
  std::optional<std::string> form;
  std::optional<std::array<double, 3>> box;
  int k = 4;
  std::vector<std::uint64_t> x_grid;
  double eps = 0.01;
  std::vector<int> d_grid{2};           // determinant degree D
  std::vector<double> a_grid;           // exponent-set cap A; empty picks D b3
  std::uint64_t prime_cap = 0;
  std::uint64_t prime_min = 3;
  std::string out;
  unsigned workers = 1;
  bool as_json = false;

  std::string variant = "naive";       // count-sums: naive, pipeline, three-one
  std::string method = "bruteforce";   // count-curve: bruteforce, solver
  std::uint64_t samples = 1000;        // bounds sweep size
  std::uint64_t seed = 1;
  int curve_degree = 3;                // bounds sweep degree d
  double theta = 0.625;
  std::vector<std::uint64_t> y_grid;   // xi-sum
  std::vector<std::pair<double, double>> fit_samples;

  // Throws InputError on unknown keys or wrong types.
  static ExperimentConfig FromJson(const nlohmann::json& doc);
  nlohmann::json ToJson() const;
  // Throws InputError when a grid is empty or a guard is not positive.
  void Validate() const;
};

struct ThetaRow {
  std::string name;
  std::array<double, 5> values{};  // k = 4..8
};

std::vector<ThetaRow> RunThetaTable();

// Truncates to three decimals; appends ".." unless the value is exact.
std::string FormatTheta(double v);
std::string FormatThetaTable(const std::vector<ThetaRow>& rows);

struct ExperimentOutput {
  int exit_code = kExitOk;
  std::string text;     // CSV or JSON document
  std::string message;  // diagnostics for stderr
};

// Runs the configured sub-experiment. Errors map to exit codes 2 (config)
// and 3 (guard); no output text is produced on failure.
ExperimentOutput RunExperiment(const ExperimentConfig& config);

// Writes text to path through a temporary file and rename, so a failed run
// leaves nothing behind.
void WriteOutputAtomically(const std::string& path, const std::string& text);

// "a,b,c" parsers; throw InputError.
std::vector<std::uint64_t> ParseUintList(const std::string& text);
std::vector<double> ParseDoubleList(const std::string& text);
std::vector<std::pair<double, double>> ParseSamples(const std::string& text);

// Number formatting independent of the global locale.
std::string FormatDouble(double v, int precision = 12);

}  // namespace lopsided::cli

#endif  // LOPSIDED_CLI_HPP_
