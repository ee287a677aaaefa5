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

// Exact desk-scale counters: integer points on a curve in a box, solutions
// of w^k + x^k = y^k + z^k by meet-in-the-middle, an independent counter
// built on the odd-kernel lattice decomposition, and log-log fitting.

#ifndef LOPSIDED_COUNTERS_HPP_
#define LOPSIDED_COUNTERS_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include "lopsided/forms.hpp"

namespace lopsided {

struct SolutionQuadruple {
  std::uint64_t w = 0;
  std::uint64_t x = 0;
  std::uint64_t y = 0;
  std::uint64_t z = 0;

  // Throws InputError unless all entries are positive and
  // w^k + x^k = y^k + z^k.
  static SolutionQuadruple Make(std::uint64_t w, std::uint64_t x,
                                std::uint64_t y, std::uint64_t z, int k);

  friend auto operator<=>(const SolutionQuadruple&, const SolutionQuadruple&) = default;
};

// {y, z} = {w, x} as multisets.
bool ClassifyTrivial(const SolutionQuadruple& q, int k);

struct CountResult {
  std::string label;
  std::string parameters;
  std::uint64_t total = 0;
  std::uint64_t trivial = 0;
  std::uint64_t nontrivial = 0;
  double elapsed = 0.0;  // seconds
  // Filled when requested: one entry per unordered non-trivial solution,
  // written as (w, x, y, z) with x < y <= z < w.
  std::vector<SolutionQuadruple> representatives;
};

struct CountOptions {
  unsigned workers = 1;
  bool collect_solutions = false;
  std::uint64_t max_pairs = 50'000'000;   // stored sums for meet-in-the-middle
  std::uint64_t max_points = 200'000'000; // scanned triples for curves
  std::uint64_t max_x = 20'000;           // pipeline time guard
};

// Primitive x in Z^3 with |x_i| <= floor(P_i) and F(x) = 0, by scanning every
// triple; x and -x are both counted. Throws GuardError when more than
// max_points triples would be scanned.
CountResult CountCurveBruteforce(const TernaryForm& form, const BoxTriple& box,
                                 const CountOptions& options = {});

// Same count through PrimitiveZeros (solves for x3 exactly).
CountResult CountCurveSolver(const TernaryForm& form, const BoxTriple& box,
                             const CountOptions& options = {});

enum class SumsVariant { kTwoTwo, kThreeOne };

// Two-two: ordered (w, x, y, z) in [1, X]^4 with w^k + x^k = y^k + z^k.
// Three-one: ordered (w, x, y, z) with w^k + x^k + y^k = z^k; none are
// trivial. Throws InputError for k < 2, GuardError beyond max_pairs.
CountResult CountSumsNaive(int k, std::uint64_t x_max,
                           SumsVariant variant = SumsVariant::kTwoTwo,
                           const CountOptions& options = {});

// Non-trivial two-two solutions via v1 = z - x, v2 = z + x and the lattices
// {xi(v1) | w^k - y^k}. total and trivial are filled as in CountSumsNaive,
// with trivial = 2X^2 - X taken from the closed form. Throws InputError for
// k < 4, GuardError on overflow or beyond max_x.
CountResult CountSumsPipeline(int k, std::uint64_t x_max,
                              const CountOptions& options = {});

// Number of distinct ordered quadruples in the symmetry orbit of q.
int OrbitSize(const SolutionQuadruple& q);

struct FitResult {
  double slope = 0.0;
  double intercept = 0.0;
  std::size_t used = 0;
};

// Least squares of log(count) against log(X). Non-positive counts are
// dropped; fewer than 3 remaining samples throws InputError.
FitResult FitExponent(const std::vector<std::pair<double, double>>& samples);

}  // namespace lopsided

#endif  // LOPSIDED_COUNTERS_HPP_
