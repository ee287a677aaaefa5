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

// Exponent bounds for rational points on plane curves in lopsided boxes,
// and for non-trivial solutions of w^k + x^k = y^k + z^k.
//
// Every curve bound is reported as an exponent c in units of log P3: the
// bound reads N(F; P) << P3^{c + eps}. Paucity bounds are exponents of X.
// All arithmetic is double precision.

#ifndef LOPSIDED_EXPONENT_CALCULUS_HPP_
#define LOPSIDED_EXPONENT_CALCULUS_HPP_

#include <array>
#include <optional>
#include <string>

#include "lopsided/forms.hpp"

namespace lopsided {

inline constexpr double kDefaultEpsilon = 0.01;

// alpha = log P1 / log P3, beta = log P2 / log P3, tau = log T / (d log P3).
struct BoxProfile {
  double alpha = 0.0;
  double beta = 0.0;
  double tau = 0.0;
  int degree = 1;

  // Present only when built from a form and a box.
  std::optional<std::array<double, 3>> log_box;
  std::optional<double> log_t;
  std::optional<Exponent3> f_triple;
  bool f_triple_tie = false;

  // T >= P3, which every absolutely irreducible form satisfies. A flag, not
  // a precondition: raw profiles need not come from a form.
  bool t_at_least_p3 = true;

  // Throws InputError unless 0 <= alpha <= beta <= 1, tau <= 1, degree >= 1.
  static BoxProfile FromRaw(double alpha, double beta, double tau, int degree);
};

// Requires 1 <= P1 <= P2 <= P3 and P3 > 1.
BoxProfile MakeProfile(const TernaryForm& form, const BoxTriple& box);

struct BoundReport {
  std::string bound;
  // The exponent the report stands behind. For a lopsided report outside
  // its regime this is the fallback exponent of the uniform bound.
  double exponent = 0.0;
  // The bound's own closed form, evaluated even outside its hypotheses.
  double formula_exponent = 0.0;
  bool applicable = true;
  std::string diagnostics;
};

// (P1 P2 P3 / T^{1/d})^{1/d}: exponent (alpha + beta + 1 - tau) / d.
BoundReport BoundUniform(const BoxProfile& profile);

// exp(log P2 log P3 / log T): exponent beta / (d tau). Intended for
// alpha = 0; evaluated with a warning otherwise. Throws DegenerateError when
// tau = 0.
BoundReport BoundThinBox(const BoxProfile& profile);

// [alpha beta + (alpha + beta - alpha beta)(tau - alpha - beta)]
//   / [d (tau - alpha)(tau - beta)],
// applicable when tau >= alpha + beta. Computed as g(0)/d and cross-checked
// against the closed form.
BoundReport BoundLopsided(const BoxProfile& profile);

double LopsidedClosedForm(double alpha, double beta, double tau, int degree);

struct GValue {
  double g = 0.0;
  double h1 = 0.0;
  double h2 = 0.0;
  double h3 = 0.0;
  double alpha_x = 0.0;
  double beta_x = 0.0;
  double tau_x = 0.0;
};

// alpha(x) = (alpha + x)/(1 + kappa x), beta(x) = (beta + 2x)/(1 + kappa x),
// tau(x) = (tau + 3x)/(1 + kappa x);
// h1 = (alpha + beta - alpha beta)/(tau - alpha), h2 = (1 - beta)/(tau - alpha),
// h3 = alpha^2/(tau - beta), g = h1 - h2 h3, all at x.
// Throws DegenerateError if tau(x) - beta(x) or tau(x) - alpha(x) is below
// 1e-15.
GValue GEval(const BoxProfile& profile, double kappa, double x);

// Derivatives of alpha(x), beta(x), tau(x) in closed form.
std::array<double, 3> ProfileDerivatives(const BoxProfile& profile,
                                         double kappa, double x);

struct PerturbedProfile {
  BoxProfile base;
  Exponent3 f_triple{};
  int kappa_num = 0;
  int kappa_den = 1;
  double kappa = 0.0;
  double delta = 0.0;
  double epsilon = 0.0;
  // b_i = log B_i with B1 = P1 P3^delta, B2 = P2 P3^{2 delta},
  // B3 = P3^{1 + kappa delta}.
  std::array<double, 3> b{};
  double log_t_prime = 0.0;
  double c = 0.0;  // 1/delta + kappa
  // 0 < b1 < b2 < b3 <= c b1 and b3 <= c (b_j - b_i) for i < j.
  bool spacing_holds = false;
  // log T' >= d b1 + d b2.
  bool lowt_holds = false;
};

// From a form and box. Throws RegimeError when P1 = 1 (use BoundThinBox) or
// when f3 = 0.
PerturbedProfile Perturb(const TernaryForm& form, const BoxTriple& box,
                         double epsilon = kDefaultEpsilon);

// From log P_i and the maximal triple directly; log T is sum f_i log P_i.
PerturbedProfile PerturbLogs(const std::array<double, 3>& log_box,
                             const Exponent3& f_triple,
                             double epsilon = kDefaultEpsilon);

struct PerturbationGapReport {
  double gap = 0.0;  // g(delta) - g(0)
  double delta = 0.0;
  double epsilon = 0.0;
  std::array<double, 3> component_change{};  // |h_i(delta) - h_i(0)|
  std::array<double, 3> component_bound{};   // 72 d^3, 60 d^3, 24 d, times delta
  std::array<bool, 3> component_ok{};
  bool within_epsilon = false;
};

// Throws RegimeError unless tau >= alpha + beta.
PerturbationGapReport PerturbationGap(const BoxProfile& profile, double kappa,
                       double epsilon);

double DeltaForEpsilon(double epsilon, int degree);

struct OptimizationConstants {
  double lambda = 0.0;
  double phi = 0.0;
  double gamma = 0.0;
  int big_d = 1;
  double a_star = 0.0;  // gamma D / phi
  bool lowt_holds = false;
  bool a_star_in_range = false;  // D b2 < a_star <= D b3
};

// Direct evaluation from b, d and log T'. Throws RegimeError if phi <= 0,
// since a_star is then undefined.
OptimizationConstants ComputeOptimizationConstants(
    const std::array<double, 3>& b, int degree, double log_t_prime, int big_d);

// Requires log T' >= d b1 + d b2; throws RegimeError otherwise.
OptimizationConstants MakeOptimizationConstants(const PerturbedProfile& p,
                                                int big_d);

// (lambda A^2 + gamma D^2) / (lambda A + phi D)^2. Throws DegenerateError on
// a vanishing denominator.
double FOfA(const OptimizationConstants& consts, double a);

// Main term of log p beyond which the determinant vanishes:
// [d b1 b2 b3 + (b1 b3 + b2 b3 - b1 b2)(L - d b1 - d b2)]
//   / [(L - d b1)(L - d b2)], L = log T'.
// The (1 + o(1)) factor is not modelled.
double PrimeThresholdLog(const std::array<double, 3>& b, int degree,
                         double log_t_prime);

struct PaucityRow {
  int k = 0;
  double five_thirds = 0.0;     // 5/3
  double uniform = 0.0;     // max(1, 3/sqrt k + 2/(k-1))
  double sharpened = 0.0;  // max(1, 3/sqrt k + 2/k)
  double lopsided = 0.0;   // 3/2 + 1/(2k-2)
  double Best() const;
};

// Throws InputError when k < 4.
PaucityRow PaucityExponents(int k);

}  // namespace lopsided

#endif  // LOPSIDED_EXPONENT_CALCULUS_HPP_
