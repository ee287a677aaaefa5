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

#include "lopsided/exponent_calculus.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "lopsided/errors.hpp"

namespace lopsided {
namespace {

constexpr double kCrossCheckTol = 1e-10;
constexpr double kDegenerateTol = 1e-12;
constexpr double kDenominatorFloor = 1e-15;

bool LeqTol(double a, double b) {
  return a <= b + 1e-12 * std::max({1.0, std::abs(a), std::abs(b)});
}

}  // namespace

BoxProfile BoxProfile::FromRaw(double alpha, double beta, double tau,
                               int degree) {
  if (degree < 1) throw InputError("degree must be at least 1");
  if (!(std::isfinite(alpha) && std::isfinite(beta) && std::isfinite(tau))) {
    throw InputError("profile entries must be finite");
  }
  if (!(0.0 <= alpha && alpha <= beta && beta <= 1.0)) {
    throw InputError("profile requires 0 <= alpha <= beta <= 1");
  }
  if (tau > 1.0 + 1e-12) throw InputError("profile requires tau <= 1");
  BoxProfile p;
  p.alpha = alpha;
  p.beta = beta;
  p.tau = tau;
  p.degree = degree;
  p.t_at_least_p3 = tau * degree >= 1.0 - 1e-12;
  return p;
}

BoxProfile MakeProfile(const TernaryForm& form, const BoxTriple& box) {
  ValidateBox(box);
  if (!(box[2] > 1.0)) throw DegenerateError("P3 must exceed 1");
  const MaximalMonomial m = ComputeT(form, box);
  const std::array<double, 3> logs{std::log(box[0]), std::log(box[1]),
                                   std::log(box[2])};
  const int d = form.degree();
  BoxProfile p;
  p.alpha = logs[0] / logs[2];
  p.beta = logs[1] / logs[2];
  p.tau = m.log_t / (d * logs[2]);
  p.degree = d;
  p.log_box = logs;
  p.log_t = m.log_t;
  p.f_triple = m.triple;
  p.f_triple_tie = m.tie();
  p.t_at_least_p3 = m.log_t >= logs[2] * (1.0 - 1e-12);
  return p;
}

BoundReport BoundUniform(const BoxProfile& profile) {
  BoundReport r;
  r.bound = "uniform";
  r.exponent = (profile.alpha + profile.beta + 1.0 - profile.tau) / profile.degree;
  r.formula_exponent = r.exponent;
  return r;
}

BoundReport BoundThinBox(const BoxProfile& profile) {
  if (std::abs(profile.tau) < kDenominatorFloor) {
    throw DegenerateError("tau = 0 in the P1 = 1 bound");
  }
  BoundReport r;
  r.bound = "thin-box";
  r.exponent = profile.beta / (profile.degree * profile.tau);
  r.formula_exponent = r.exponent;
  if (profile.alpha != 0.0) {
    r.diagnostics = "warning: stated for P1 = 1 but alpha != 0";
  }
  return r;
}

double LopsidedClosedForm(double alpha, double beta, double tau, int degree) {
  const double num =
      alpha * beta + (alpha + beta - alpha * beta) * (tau - alpha - beta);
  return num / (degree * (tau - alpha) * (tau - beta));
}

BoundReport BoundLopsided(const BoxProfile& profile) {
  const double a = profile.alpha;
  const double b = profile.beta;
  const double t = profile.tau;
  const BoundReport fallback = BoundUniform(profile);

  BoundReport r;
  r.bound = "lopsided";
  // At alpha = 0 the factor tau - beta cancels and the bound is beta/(d tau),
  // finite even when tau = beta.
  if (a <= kDegenerateTol && t > kDegenerateTol) {
    r.formula_exponent = b / (profile.degree * t);
    r.exponent = r.formula_exponent;
    r.applicable = t >= b - kDegenerateTol;
    r.diagnostics = "alpha = 0: reduces to the P1 = 1 bound";
    if (!r.applicable) {
      r.exponent = fallback.exponent;
      r.diagnostics += "; tau < beta: outside regime, fallback to the uniform bound";
    }
    return r;
  }
  if (std::abs(t - a) <= kDegenerateTol || std::abs(t - b) <= kDegenerateTol) {
    r.applicable = false;
    r.exponent = fallback.exponent;
    r.formula_exponent = std::numeric_limits<double>::quiet_NaN();
    r.diagnostics = "degenerate: tau equals alpha or beta; fallback to the uniform bound";
    return r;
  }
  r.formula_exponent = LopsidedClosedForm(a, b, t, profile.degree);
  r.applicable = t >= a + b - kDegenerateTol;

  std::ostringstream diag;
  if (t - b > kDenominatorFloor && t - a > kDenominatorFloor) {
    const double via_g = GEval(profile, 3.0, 0.0).g / profile.degree;
    const double diff = std::abs(via_g - r.formula_exponent);
    diag << (diff <= kCrossCheckTol * std::max(1.0, std::abs(via_g))
                 ? "g(0)/d cross-check ok"
                 : "g(0)/d cross-check FAILED");
  } else {
    diag << "tau < beta: g(0) undefined, closed form only";
  }
  if (r.applicable) {
    r.exponent = r.formula_exponent;
  } else {
    r.exponent = fallback.exponent;
    diag << "; tau < alpha + beta: outside regime, fallback to the uniform bound";
  }
  r.diagnostics = diag.str();
  return r;
}

GValue GEval(const BoxProfile& profile, double kappa, double x) {
  if (x < 0.0) throw InputError("g is defined for x >= 0");
  const double s = 1.0 + kappa * x;
  GValue v;
  v.alpha_x = (profile.alpha + x) / s;
  v.beta_x = (profile.beta + 2.0 * x) / s;
  v.tau_x = (profile.tau + 3.0 * x) / s;
  const double tb = v.tau_x - v.beta_x;
  const double ta = v.tau_x - v.alpha_x;
  if (tb < kDenominatorFloor || ta < kDenominatorFloor) {
    throw DegenerateError("tau(x) - beta(x) or tau(x) - alpha(x) too small");
  }
  v.h1 = (v.alpha_x + v.beta_x - v.alpha_x * v.beta_x) / ta;
  v.h2 = (1.0 - v.beta_x) / ta;
  v.h3 = v.alpha_x * v.alpha_x / tb;
  v.g = v.h1 - v.h2 * v.h3;
  return v;
}

std::array<double, 3> ProfileDerivatives(const BoxProfile& profile,
                                         double kappa, double x) {
  const double s2 = (1.0 + kappa * x) * (1.0 + kappa * x);
  return {(1.0 - kappa * profile.alpha) / s2,
          (2.0 - kappa * profile.beta) / s2,
          (3.0 - kappa * profile.tau) / s2};
}

double DeltaForEpsilon(double epsilon, int degree) {
  if (!(epsilon > 0.0)) throw InputError("epsilon must be positive");
  const double d = degree;
  return epsilon / (180.0 * d * d * d);
}

PerturbedProfile PerturbLogs(const std::array<double, 3>& log_box,
                             const Exponent3& f_triple, double epsilon) {
  if (!(log_box[0] > 0.0)) {
    throw RegimeError("P1 = 1: use the P1 = 1 bound instead of perturbing");
  }
  if (!(log_box[0] <= log_box[1] && log_box[1] <= log_box[2])) {
    throw InputError("box sides must satisfy P1 <= P2 <= P3");
  }
  if (f_triple[0] < 0 || f_triple[1] < 0 || f_triple[2] < 0) {
    throw InputError("maximal triple must be non-negative");
  }
  if (f_triple[2] == 0) throw RegimeError("f3 = 0: perturbation undefined");

  const int d = f_triple[0] + f_triple[1] + f_triple[2];
  const double log_t = f_triple[0] * log_box[0] + f_triple[1] * log_box[1] +
                       f_triple[2] * log_box[2];

  PerturbedProfile p;
  p.base = BoxProfile::FromRaw(log_box[0] / log_box[2], log_box[1] / log_box[2],
                               log_t / (d * log_box[2]), d);
  p.base.log_box = log_box;
  p.base.log_t = log_t;
  p.base.f_triple = f_triple;
  p.f_triple = f_triple;

  int num = 2 * f_triple[0] + f_triple[1] + 3 * f_triple[2];
  int den = f_triple[2];
  const int g = std::gcd(num, den);
  p.kappa_num = num / g;
  p.kappa_den = den / g;
  p.kappa = static_cast<double>(num) / den;
  p.epsilon = epsilon;
  p.delta = DeltaForEpsilon(epsilon, d);
  p.c = 1.0 / p.delta + p.kappa;

  const double l3 = log_box[2];
  p.b = {log_box[0] + p.delta * l3, log_box[1] + 2.0 * p.delta * l3,
         (1.0 + p.kappa * p.delta) * l3};
  p.log_t_prime =
      f_triple[0] * p.b[0] + f_triple[1] * p.b[1] + f_triple[2] * p.b[2];

  const auto& b = p.b;
  p.spacing_holds = 0.0 < b[0] && b[0] < b[1] && b[1] < b[2] &&
                    LeqTol(b[2], p.c * b[0]) &&
                    LeqTol(b[2], p.c * (b[1] - b[0])) &&
                    LeqTol(b[2], p.c * (b[2] - b[0])) &&
                    LeqTol(b[2], p.c * (b[2] - b[1]));
  p.lowt_holds = LeqTol(d * b[0] + d * b[1], p.log_t_prime);
  return p;
}

PerturbedProfile Perturb(const TernaryForm& form, const BoxTriple& box,
                         double epsilon) {
  ValidateBox(box);
  if (!(box[0] > 1.0)) {
    throw RegimeError("P1 = 1: use the P1 = 1 bound instead of perturbing");
  }
  const MaximalMonomial m = ComputeT(form, box);
  PerturbedProfile p = PerturbLogs(
      {std::log(box[0]), std::log(box[1]), std::log(box[2])}, m.triple, epsilon);
  p.base.f_triple_tie = m.tie();
  return p;
}

PerturbationGapReport PerturbationGap(const BoxProfile& profile, double kappa,
                       double epsilon) {
  if (profile.tau < profile.alpha + profile.beta - kDegenerateTol) {
    throw RegimeError("the perturbation gap needs tau >= alpha + beta");
  }
  const int d = profile.degree;
  const double d3 = static_cast<double>(d) * d * d;
  PerturbationGapReport r;
  r.epsilon = epsilon;
  r.delta = DeltaForEpsilon(epsilon, d);
  const GValue at0 = GEval(profile, kappa, 0.0);
  const GValue atd = GEval(profile, kappa, r.delta);
  r.gap = atd.g - at0.g;
  r.component_change = {std::abs(atd.h1 - at0.h1), std::abs(atd.h2 - at0.h2),
                        std::abs(atd.h3 - at0.h3)};
  r.component_bound = {72.0 * d3 * r.delta, 60.0 * d3 * r.delta,
                       24.0 * d * r.delta};
  for (int i = 0; i < 3; ++i) {
    r.component_ok[i] = r.component_change[i] <= r.component_bound[i];
  }
  r.within_epsilon = r.gap <= epsilon;
  return r;
}

OptimizationConstants ComputeOptimizationConstants(
    const std::array<double, 3>& b, int degree, double log_t_prime, int big_d) {
  if (big_d < 1) throw InputError("D must be positive");
  const double q = (b[2] - b[0]) * (b[2] - b[1]);
  if (!(q > 0.0)) throw DegenerateError("need b1, b2 < b3");
  const double d = degree;
  OptimizationConstants c;
  c.big_d = big_d;
  c.lambda = (d * b[2] - log_t_prime) / q;
  c.phi = (d * b[0] * b[1] + b[2] * (log_t_prime - d * b[0] - d * b[1])) / q;
  c.gamma = c.phi * (b[0] + b[1]) + c.lambda * b[0] * b[1];
  c.lowt_holds = LeqTol(d * b[0] + d * b[1], log_t_prime);
  if (!(c.phi > kDenominatorFloor * std::max(1.0, std::abs(c.gamma)))) {
    throw RegimeError("phi <= 0: turning point undefined");
  }
  c.a_star = c.gamma * big_d / c.phi;
  c.a_star_in_range = big_d * b[1] < c.a_star && LeqTol(c.a_star, big_d * b[2]);
  return c;
}

OptimizationConstants MakeOptimizationConstants(const PerturbedProfile& p,
                                                int big_d) {
  if (!p.lowt_holds) throw RegimeError("log T' < d b1 + d b2");
  return ComputeOptimizationConstants(p.b, p.base.degree, p.log_t_prime, big_d);
}

double FOfA(const OptimizationConstants& consts, double a) {
  const double dd = consts.big_d;
  const double den = consts.lambda * a + consts.phi * dd;
  if (std::abs(den) < kDenominatorFloor) {
    throw DegenerateError("lambda A + phi D vanishes");
  }
  return (consts.lambda * a * a + consts.gamma * dd * dd) / (den * den);
}

double PrimeThresholdLog(const std::array<double, 3>& b, int degree,
                         double log_t_prime) {
  const double d = degree;
  const double u = log_t_prime - d * b[0] - d * b[1];
  const double num =
      d * b[0] * b[1] * b[2] + (b[0] * b[2] + b[1] * b[2] - b[0] * b[1]) * u;
  const double den = (log_t_prime - d * b[0]) * (log_t_prime - d * b[1]);
  if (std::abs(den) < kDenominatorFloor) {
    throw DegenerateError("prime threshold denominator vanishes");
  }
  return num / den;
}

double PaucityRow::Best() const {
  return std::min({five_thirds, uniform, sharpened, lopsided});
}

PaucityRow PaucityExponents(int k) {
  if (k < 4) throw InputError("paucity exponents need k >= 4");
  const double kk = k;
  PaucityRow r;
  r.k = k;
  r.five_thirds = 5.0 / 3.0;
  r.uniform = std::max(1.0, 3.0 / std::sqrt(kk) + 2.0 / (kk - 1.0));
  r.sharpened = std::max(1.0, 3.0 / std::sqrt(kk) + 2.0 / kk);
  r.lopsided = 1.5 + 1.0 / (2.0 * kk - 2.0);
  return r;
}

}  // namespace lopsided
