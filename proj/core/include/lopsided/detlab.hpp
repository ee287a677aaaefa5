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

// Desk-scale model of the determinant method: weighted exponent sets, the
// sums behind the size estimate for the determinant, mod-p fibers of curve
// points, exact determinants with their p-adic order, and auxiliary forms.

#ifndef LOPSIDED_DETLAB_HPP_
#define LOPSIDED_DETLAB_HPP_

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "lopsided/forms.hpp"

namespace lopsided {

// E(A): exponent triples e of degree D with sigma(e) = sum e_i b_i <= A and
// e_j < f_j for some j.
struct ExponentSet {
  int big_d = 1;
  double a = 0.0;
  std::array<double, 3> b{};
  Exponent3 f_triple{};
  std::vector<Exponent3> members;  // lexicographic order

  std::size_t size() const noexcept { return members.size(); }
  double Sigma(const Exponent3& e) const;
  // The defining predicate, independent of the enumeration.
  bool Admits(const Exponent3& e) const;
};

// Throws InputError unless D >= 1, 0 < b1 < b2 < b3 and f >= 0 with
// sum f >= 1. sigma <= A is tested with relative slack 1e-12.
ExponentSet BuildExponentSet(int big_d, double a, const std::array<double, 3>& b,
                             const Exponent3& f_triple);

// M_jk for 1-based distinct j, k: pairs (m_j, m_k), m_j descending.
std::vector<std::array<int, 2>> BuildMjk(int big_d, double a,
                                         const std::array<double, 3>& b, int j,
                                         int k);

// Per index i (0-based slot for i = 1, 2, 3), with {j, k} the other two.
struct SumCompareSlot {
  int i = 0;
  std::array<int, 2> jk{};
  std::size_t e_i_count = 0;       // #E_i, E_i = {e in E(A) : e_i < f_i}
  double e_i_sigma_sum = 0.0;      // sum over E_i of sigma(e)
  std::size_t mjk_count = 0;       // #M_jk
  double mjk_tau_sum = 0.0;        // sum over M_jk of tau
  double closed_tau_sum = 0.0;     // (1/2) sum* (A^2 - D^2 b_h^2)/(b_g - b_h)
  double closed_count = 0.0;       // sum* (A - D b_h)/(b_g - b_h)
  double tau_residual = 0.0;       // mjk_tau_sum - closed_tau_sum
  double shift_residual = 0.0;    // e_i_sigma_sum - f_i mjk_tau_sum
};

struct SumCompareRecord {
  int big_d = 1;
  double a = 0.0;
  std::array<SumCompareSlot, 3> slots{};
  std::size_t e_count = 0;          // E = #E(A)
  double e_sigma_sum = 0.0;         // sum over E(A) of sigma(e)
  std::size_t e_union_count = 0;    // sum_i #E_i
  std::size_t e_overlap_count = 0;  // sum_{i<j} #(E_i cap E_j)
  double e_closed_lower = 0.0;      // sum_i f_i closed_count_i
  double e_relative_gap = 0.0;      // |E - e_closed_lower| / E
  double max_tau_residual = 0.0;    // max_i |tau_residual_i|
};

// Requires D b2 < A <= D b3; throws InputError otherwise.
SumCompareRecord SumCompare(int big_d, double a, const std::array<double, 3>& b,
                            const Exponent3& f_triple);

// R_jk = #{m_j + m_k = D : A < tau(m_j, m_k) <= A + d b3}, 1-based j, k.
std::int64_t BoundaryBandCount(int big_d, double a,
                               const std::array<double, 3>& b, int j, int k,
                               int degree);

using ProjPoint = std::array<std::uint64_t, 3>;

// Non-singular points of F = 0 over F_p with first nonzero coordinate 1,
// lexicographic order. Throws InputError unless p is prime and p does not
// divide every coefficient, GuardError when p > 20000.
std::vector<ProjPoint> ModPCurvePoints(const TernaryForm& form, std::uint64_t p);

struct ModPFiber {
  std::uint64_t p = 0;
  ProjPoint t{};
  IntPoint3 box{};
  std::vector<IntPoint3> points;  // lexicographic order
};

// True iff x = lambda t mod p for some lambda != 0.
bool OnLine(const IntPoint3& x, const ProjPoint& t, std::uint64_t p);

// Partitions the given zeros by residue line. Points whose line is not in
// `ts` are dropped.
std::vector<ModPFiber> FibersFromPoints(const std::vector<IntPoint3>& zeros,
                                        const IntPoint3& box, std::uint64_t p,
                                        const std::vector<ProjPoint>& ts);

ModPFiber Fiber(const TernaryForm& form, const IntPoint3& box, std::uint64_t p,
                const ProjPoint& t);

// One representative of each pair {x, -x}: the one whose first nonzero
// coordinate is positive, sorted lexicographically.
std::vector<IntPoint3> SignNormalizedPoints(const std::vector<IntPoint3>& points);

struct DeterminantRecord {
  std::size_t e = 0;
  BigInt delta;
  std::optional<std::int64_t> nu_p;  // nullopt stands for +infinity
  double log_abs_delta = 0.0;        // -inf when delta = 0
  double log_bound = 0.0;            // log(E^E prod B^e)
  bool bound_holds = false;          // |delta| <= E^E prod B^e, exact
  std::optional<double> nu_ratio;    // nu_p / E^2
  std::vector<IntPoint3> rows;

  bool vanished() const { return delta == 0; }
};

// Rows are the first E sign-normalized fiber points. Throws InputError when
// E = 0 or fewer than E such points exist.
DeterminantRecord DeterminantDelta(const ModPFiber& fiber,
                                   const ExponentSet& eset);

struct AuxiliaryResult {
  TernaryForm form;
  std::size_t rank = 0;
  bool vanishes_on_fiber = false;
  bool divisible_by_f = false;
};

// Exact rational kernel of the evaluation matrix over all sign-normalized
// fiber points. Returns nullopt when the columns are independent. The form
// is the kernel vector of the first free column, scaled to primitive
// integers with positive leading coefficient.
std::optional<AuxiliaryResult> AuxiliaryForm(const TernaryForm& f,
                                             const ModPFiber& fiber,
                                             const ExponentSet& eset);

// Rank of the evaluation matrix of the sign-normalized fiber points.
std::size_t EvaluationRank(const ModPFiber& fiber, const ExponentSet& eset);

// Target prime size log^2(||F|| B3) and the smallest prime above it.
struct TargetPrime {
  double size = 0.0;
  std::uint64_t p = 2;
};
TargetPrime ChooseTargetPrime(const TernaryForm& form, double b3);

struct VanishingTrace {
  std::uint64_t p = 0;
  ProjPoint t{};
  std::size_t fiber_size = 0;  // sign-normalized points
  bool tested = false;         // fiber_size >= E
  std::optional<DeterminantRecord> det;
  std::size_t rank = 0;
  std::optional<AuxiliaryResult> auxiliary;
};

struct VanishingScan {
  IntPoint3 box{};
  ExponentSet eset;
  double log_t = 0.0;
  // Main-term threshold from the optimisation; nullopt outside its regime.
  std::optional<double> theory_log_threshold;
  std::optional<double> f_of_a;
  std::vector<VanishingTrace> traces;
  // Smallest scanned prime beyond which every tested determinant vanished.
  std::optional<std::uint64_t> empirical_threshold;
  std::size_t nonzero_below = 0;
  std::size_t tested_above = 0;
};

// Runs fibers and determinants for every prime in `primes` (ascending). The
// box must satisfy 1 <= B1 < B2 < B3; b_i = log B_i and f is the maximal
// triple for the box.
VanishingScan ScanVanishing(const TernaryForm& form, const IntPoint3& box,
                            int big_d, double a,
                            const std::vector<std::uint64_t>& primes);

}  // namespace lopsided

#endif  // LOPSIDED_DETLAB_HPP_
