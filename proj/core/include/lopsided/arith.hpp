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

// Number-theoretic substrate for the equal-sums decomposition: odd
// squarefree kernels, k-th power residue classes, the lattices covering
// {(w, y) : xi | w^k - y^k}, two-dimensional reduction and exact lattice
// point enumeration.

#ifndef LOPSIDED_ARITH_HPP_
#define LOPSIDED_ARITH_HPP_

#include <cstdint>
#include <functional>
#include <vector>

#include "lopsided/forms.hpp"

namespace lopsided {

bool IsPrime(std::uint64_t n);
std::uint64_t NextPrime(std::uint64_t n);  // smallest prime >= n
std::vector<std::uint64_t> PrimesUpTo(std::uint64_t n);
std::uint64_t PowMod(std::uint64_t base, std::uint64_t exp, std::uint64_t mod);

struct SquarefreeKernel {
  std::uint64_t xi = 1;
  int omega = 0;
  std::vector<std::uint64_t> primes;
};

// Product of the distinct odd primes dividing n >= 1.
SquarefreeKernel OddSquarefreeKernel(std::uint64_t n);

// {(a, b) mod p : a^k = b^k mod p} = {(lambda b, b)} over the k-th roots of
// unity lambda. For b = 0 this is the single class (0, 0).
struct ResiduePairSet {
  std::uint64_t modulus = 0;
  int k = 0;
  std::vector<std::uint64_t> lambdas;  // sorted, lambda^k = 1 mod p

  bool Contains(std::uint64_t a, std::uint64_t b) const;
  std::vector<std::array<std::uint64_t, 2>> Pairs() const;
};

// Throws InputError unless p is an odd prime. Roots are found by scanning
// residues, which is fine for p up to about 10^6.
ResiduePairSet PowerResiduePairs(int k, std::uint64_t p);

// Rank-2 sublattice of Z^2 with basis e1, e2.
struct PlaneLattice {
  IntPair e1{1, 0};
  IntPair e2{0, 1};
  std::int64_t det = 1;  // |det(e1, e2)|

  bool Contains(const IntPair& v) const;
  double Norm1() const;
  double Norm2() const;
};

PlaneLattice MakeLattice(const IntPair& e1, const IntPair& e2);

// Lattices whose union is {(w, y) : xi | w^k - y^k}: one lattice
// {w = L y mod xi} of determinant xi per CRT combination L of per-prime
// roots of unity. Returned Gauss-reduced, in increasing order of L.
// Throws InputError unless xi is odd and squarefree.
std::vector<PlaneLattice> CrtLattices(int k, std::uint64_t xi);

// Residue L mod xi of each lattice from CrtLattices, in the same order.
std::vector<std::uint64_t> CrtMultipliers(int k, std::uint64_t xi);

// Lagrange-Gauss reduction: e1 is a shortest nonzero vector, e2 a shortest
// vector completing a basis, det(e1, e2) > 0, e1 has positive first nonzero
// coordinate. Among equal-length choices the lexicographically largest
// vector is taken. Throws DegenerateError for a dependent basis.
PlaneLattice GaussReduce(const PlaneLattice& lattice);

// Half-plane a w + b y >= c.
struct HalfPlane {
  std::int64_t a = 0;
  std::int64_t b = 0;
  std::int64_t c = 0;
};

// Visits every lattice point inside the bounded polygon given by the box
// [w_lo, w_hi] x [y_lo, y_hi] and any extra half-planes. The visitor may be
// empty. Returns the number of points. Points are produced through the
// parametrisation (w, y) = u1 e1 + u2 e2, one u2-stripe at a time.
std::uint64_t ForEachLatticePoint(
    const PlaneLattice& lattice, std::int64_t w_lo, std::int64_t w_hi,
    std::int64_t y_lo, std::int64_t y_hi,
    const std::vector<HalfPlane>& extra,
    const std::function<void(std::int64_t, std::int64_t)>& visit);

std::uint64_t LatticePointsInBox(const PlaneLattice& lattice, std::int64_t w_lo,
                                 std::int64_t w_hi, std::int64_t y_lo,
                                 std::int64_t y_hi);

struct XiSumResult {
  double theta = 0.0;
  std::uint64_t y = 0;
  double epsilon = 0.0;
  double partial_sum = 0.0;  // sum_{n <= Y} xi(n)^{-theta}
  double a_eps = 0.0;        // (1 - 2^{-eps})^{-1}
  // prod_{p <= prime_cap} (1 + p^{-1-eps} A_eps): a lower estimate of c_eps.
  double c_eps = 0.0;
  // c_eps times exp(A_eps cap^{-eps} / eps), an upper estimate of the full
  // product.
  double c_eps_upper = 0.0;
  std::uint64_t prime_cap = 0;
  double bound = 0.0;  // c_eps Y^{1 - theta + eps}
  bool bound_holds = false;
};

// Throws InputError unless 0 < theta <= 1 and eps > 0. prime_cap = 0 picks
// max(Y, 10^6).
XiSumResult XiSum(double theta, std::uint64_t y, double eps,
                  std::uint64_t prime_cap = 0);

// Partial sums of xi(n)^{-theta} at each requested Y (sorted ascending),
// from one sieve pass.
std::vector<double> XiPartialSums(double theta,
                                  const std::vector<std::uint64_t>& ys);

}  // namespace lopsided

#endif  // LOPSIDED_ARITH_HPP_
