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

#include "lopsided/arith.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "lopsided/errors.hpp"

namespace lopsided {
namespace {

using Int128 = __int128;
using UInt128 = unsigned __int128;

std::uint64_t MulMod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
  return static_cast<std::uint64_t>(static_cast<UInt128>(a) * b % m);
}

std::int64_t FloorDiv(Int128 num, Int128 den) {
  if (den < 0) {
    num = -num;
    den = -den;
  }
  Int128 q = num / den;
  if (num % den != 0 && num < 0) --q;
  return static_cast<std::int64_t>(q);
}

std::int64_t CeilDiv(Int128 num, Int128 den) {
  if (den < 0) {
    num = -num;
    den = -den;
  }
  Int128 q = num / den;
  if (num % den != 0 && num > 0) ++q;
  return static_cast<std::int64_t>(q);
}

Int128 Dot(const IntPair& a, const IntPair& b) {
  return static_cast<Int128>(a[0]) * b[0] + static_cast<Int128>(a[1]) * b[1];
}

Int128 Cross(const IntPair& a, const IntPair& b) {
  return static_cast<Int128>(a[0]) * b[1] - static_cast<Int128>(a[1]) * b[0];
}

IntPair Combine(std::int64_t s, const IntPair& a, std::int64_t t,
                const IntPair& b) {
  return {s * a[0] + t * b[0], s * a[1] + t * b[1]};
}

IntPair Negate(const IntPair& v) { return {-v[0], -v[1]}; }

IntPair SignNormalize(const IntPair& v) {
  if (v[0] < 0 || (v[0] == 0 && v[1] < 0)) return Negate(v);
  return v;
}

std::uint64_t InverseMod(std::uint64_t a, std::uint64_t m) {
  Int128 t = 0, new_t = 1;
  Int128 r = m, new_r = a % m;
  while (new_r != 0) {
    const Int128 q = r / new_r;
    t -= q * new_t;
    std::swap(t, new_t);
    r -= q * new_r;
    std::swap(r, new_r);
  }
  if (r != 1) throw InputError("value not invertible modulo m");
  if (t < 0) t += m;
  return static_cast<std::uint64_t>(t);
}

void NeumaierAdd(double value, double& sum, double& comp) {
  const double t = sum + value;
  if (std::abs(sum) >= std::abs(value)) {
    comp += (sum - t) + value;
  } else {
    comp += (value - t) + sum;
  }
  sum = t;
}

std::vector<std::uint64_t> OddKernelTable(std::uint64_t n) {
  std::vector<std::uint64_t> xi(n + 1, 1);
  std::vector<bool> composite(n + 1, false);
  for (std::uint64_t p = 2; p <= n; ++p) {
    if (composite[p]) continue;
    for (std::uint64_t m = p * p; m <= n; m += p) composite[m] = true;
    if (p == 2) continue;
    for (std::uint64_t m = p; m <= n; m += p) xi[m] *= p;
  }
  return xi;
}

}  // namespace

std::uint64_t PowMod(std::uint64_t base, std::uint64_t exp, std::uint64_t mod) {
  if (mod == 1) return 0;
  std::uint64_t result = 1;
  base %= mod;
  while (exp > 0) {
    if (exp & 1) result = MulMod(result, base, mod);
    base = MulMod(base, base, mod);
    exp >>= 1;
  }
  return result;
}

bool IsPrime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t p : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL,
                          23ULL, 29ULL, 31ULL, 37ULL}) {
    if (n % p == 0) return n == p;
  }
  std::uint64_t d = n - 1;
  int s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  // Deterministic for all 64-bit n with these bases.
  for (std::uint64_t a : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL,
                          23ULL, 29ULL, 31ULL, 37ULL}) {
    std::uint64_t x = PowMod(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool witness = true;
    for (int r = 1; r < s; ++r) {
      x = MulMod(x, x, n);
      if (x == n - 1) {
        witness = false;
        break;
      }
    }
    if (witness) return false;
  }
  return true;
}

std::uint64_t NextPrime(std::uint64_t n) {
  if (n <= 2) return 2;
  std::uint64_t c = n | 1;
  while (!IsPrime(c)) c += 2;
  return c;
}

std::vector<std::uint64_t> PrimesUpTo(std::uint64_t n) {
  std::vector<std::uint64_t> out;
  if (n < 2) return out;
  std::vector<bool> composite(n + 1, false);
  for (std::uint64_t p = 2; p <= n; ++p) {
    if (composite[p]) continue;
    out.push_back(p);
    for (std::uint64_t m = p * p; m <= n; m += p) composite[m] = true;
  }
  return out;
}

SquarefreeKernel OddSquarefreeKernel(std::uint64_t n) {
  if (n == 0) throw InputError("kernel of 0 is undefined");
  SquarefreeKernel k;
  while (n % 2 == 0) n /= 2;
  for (std::uint64_t p = 3; p * p <= n; p += 2) {
    if (n % p != 0) continue;
    k.primes.push_back(p);
    k.xi *= p;
    while (n % p == 0) n /= p;
  }
  if (n > 1) {
    k.primes.push_back(n);
    k.xi *= n;
  }
  k.omega = static_cast<int>(k.primes.size());
  return k;
}

bool ResiduePairSet::Contains(std::uint64_t a, std::uint64_t b) const {
  a %= modulus;
  b %= modulus;
  if (b == 0) return a == 0;
  const std::uint64_t ratio = MulMod(a, InverseMod(b, modulus), modulus);
  return std::binary_search(lambdas.begin(), lambdas.end(), ratio);
}

std::vector<std::array<std::uint64_t, 2>> ResiduePairSet::Pairs() const {
  std::vector<std::array<std::uint64_t, 2>> out{{0, 0}};
  for (std::uint64_t b = 1; b < modulus; ++b) {
    for (std::uint64_t l : lambdas) out.push_back({MulMod(l, b, modulus), b});
  }
  std::sort(out.begin(), out.end());
  return out;
}

ResiduePairSet PowerResiduePairs(int k, std::uint64_t p) {
  if (k < 1) throw InputError("k must be positive");
  if (p % 2 == 0 || !IsPrime(p)) throw InputError("modulus must be an odd prime");
  ResiduePairSet s;
  s.modulus = p;
  s.k = k;
  for (std::uint64_t l = 1; l < p; ++l) {
    if (PowMod(l, static_cast<std::uint64_t>(k), p) == 1) s.lambdas.push_back(l);
  }
  return s;
}

bool PlaneLattice::Contains(const IntPair& v) const {
  const Int128 d = Cross(e1, e2);
  const Int128 u1 = Cross(v, e2);
  const Int128 u2 = Cross(e1, v);
  return u1 % d == 0 && u2 % d == 0;
}

double PlaneLattice::Norm1() const { return std::hypot(double(e1[0]), double(e1[1])); }
double PlaneLattice::Norm2() const { return std::hypot(double(e2[0]), double(e2[1])); }

PlaneLattice MakeLattice(const IntPair& e1, const IntPair& e2) {
  const Int128 d = Cross(e1, e2);
  if (d == 0) throw DegenerateError("lattice basis is degenerate");
  PlaneLattice l;
  l.e1 = e1;
  l.e2 = e2;
  l.det = static_cast<std::int64_t>(d < 0 ? -d : d);
  return l;
}

std::vector<std::uint64_t> CrtMultipliers(int k, std::uint64_t xi) {
  if (xi == 0 || xi % 2 == 0) throw InputError("xi must be odd and positive");
  const SquarefreeKernel ker = OddSquarefreeKernel(xi);
  if (ker.xi != xi) throw InputError("xi must be squarefree");

  std::vector<std::uint64_t> residues{0};
  std::uint64_t modulus = 1;
  for (std::uint64_t p : ker.primes) {
    const ResiduePairSet roots = PowerResiduePairs(k, p);
    const std::uint64_t inv = InverseMod(modulus % p, p);
    std::vector<std::uint64_t> next;
    next.reserve(residues.size() * roots.lambdas.size());
    for (std::uint64_t r : residues) {
      for (std::uint64_t l : roots.lambdas) {
        const std::uint64_t diff = (l + p - r % p) % p;
        const std::uint64_t t = MulMod(diff, inv, p);
        next.push_back(r + modulus * t);
      }
    }
    modulus *= p;
    residues = std::move(next);
  }
  std::sort(residues.begin(), residues.end());
  return residues;
}

std::vector<PlaneLattice> CrtLattices(int k, std::uint64_t xi) {
  std::vector<PlaneLattice> out;
  const auto si = static_cast<std::int64_t>(xi);
  for (std::uint64_t l : CrtMultipliers(k, xi)) {
    out.push_back(GaussReduce(
        MakeLattice({si, 0}, {static_cast<std::int64_t>(l), 1})));
  }
  return out;
}

PlaneLattice GaussReduce(const PlaneLattice& lattice) {
  IntPair a = lattice.e1;
  IntPair b = lattice.e2;
  const Int128 det = Cross(a, b);
  if (det == 0) throw DegenerateError("lattice basis is degenerate");
  if (Dot(a, a) > Dot(b, b)) std::swap(a, b);
  while (true) {
    const Int128 aa = Dot(a, a);
    const Int128 ab = Dot(a, b);
    // Nearest integer to ab / aa.
    const std::int64_t mu = FloorDiv(2 * ab + aa, 2 * aa);
    b = Combine(1, b, -mu, a);
    if (Dot(b, b) < aa) {
      std::swap(a, b);
    } else {
      break;
    }
  }

  // Shortest vectors of a reduced basis lie among +-a, +-b, +-(a +- b).
  struct Candidate {
    IntPair v;
    IntPair completion;
  };
  const Int128 shortest = Dot(a, a);
  std::vector<Candidate> firsts;
  const std::array<std::array<std::int64_t, 4>, 4> combos{{
      {1, 0, 0, 1}, {0, 1, -1, 0}, {1, 1, 0, 1}, {1, -1, 0, 1}}};
  for (const auto& c : combos) {
    const IntPair v = Combine(c[0], a, c[1], b);
    if (Dot(v, v) != shortest) continue;
    IntPair comp = Combine(c[2], a, c[3], b);
    if (SignNormalize(v) != v) comp = Negate(comp);
    firsts.push_back({SignNormalize(v), comp});
  }
  const Candidate& first = *std::max_element(
      firsts.begin(), firsts.end(),
      [](const Candidate& x, const Candidate& y) { return x.v < y.v; });
  const IntPair e1 = first.v;

  const Int128 e1e1 = Dot(e1, e1);
  const std::int64_t m0 = FloorDiv(-2 * Dot(first.completion, e1) + e1e1, 2 * e1e1);
  Int128 best_norm = -1;
  IntPair e2{};
  for (std::int64_t m = m0 - 1; m <= m0 + 1; ++m) {
    IntPair v = Combine(1, first.completion, m, e1);
    if (Cross(e1, v) < 0) v = Negate(v);
    const Int128 n = Dot(v, v);
    if (best_norm < 0 || n < best_norm || (n == best_norm && v > e2)) {
      best_norm = n;
      e2 = v;
    }
  }
  return MakeLattice(e1, e2);
}

std::uint64_t ForEachLatticePoint(
    const PlaneLattice& lattice, std::int64_t w_lo, std::int64_t w_hi,
    std::int64_t y_lo, std::int64_t y_hi, const std::vector<HalfPlane>& extra,
    const std::function<void(std::int64_t, std::int64_t)>& visit) {
  if (w_lo > w_hi || y_lo > y_hi) return 0;
  const IntPair& e1 = lattice.e1;
  const IntPair& e2 = lattice.e2;
  const Int128 det = Cross(e1, e2);
  if (det == 0) throw DegenerateError("lattice basis is degenerate");

  std::vector<HalfPlane> planes{{1, 0, w_lo}, {-1, 0, -w_hi}, {0, 1, y_lo},
                                {0, -1, -y_hi}};
  planes.insert(planes.end(), extra.begin(), extra.end());

  // u2 = cross(e1, (w, y)) / det over the box corners.
  std::int64_t u2_lo = std::numeric_limits<std::int64_t>::max();
  std::int64_t u2_hi = std::numeric_limits<std::int64_t>::min();
  for (std::int64_t w : {w_lo, w_hi}) {
    for (std::int64_t y : {y_lo, y_hi}) {
      const Int128 num = Cross(e1, {w, y});
      u2_lo = std::min(u2_lo, CeilDiv(num, det));
      u2_hi = std::max(u2_hi, FloorDiv(num, det));
    }
  }

  std::uint64_t count = 0;
  for (std::int64_t u2 = u2_lo; u2 <= u2_hi; ++u2) {
    std::int64_t lo = std::numeric_limits<std::int64_t>::min();
    std::int64_t hi = std::numeric_limits<std::int64_t>::max();
    bool empty = false;
    for (const HalfPlane& h : planes) {
      const Int128 coeff = static_cast<Int128>(h.a) * e1[0] +
                           static_cast<Int128>(h.b) * e1[1];
      const Int128 rest = static_cast<Int128>(h.c) -
                          u2 * (static_cast<Int128>(h.a) * e2[0] +
                                static_cast<Int128>(h.b) * e2[1]);
      if (coeff > 0) {
        lo = std::max(lo, CeilDiv(rest, coeff));
      } else if (coeff < 0) {
        hi = std::min(hi, FloorDiv(rest, coeff));
      } else if (rest > 0) {
        empty = true;
        break;
      }
    }
    if (empty || lo > hi) continue;
    count += static_cast<std::uint64_t>(hi - lo + 1);
    if (visit) {
      for (std::int64_t u1 = lo; u1 <= hi; ++u1) {
        visit(u1 * e1[0] + u2 * e2[0], u1 * e1[1] + u2 * e2[1]);
      }
    }
  }
  return count;
}

std::uint64_t LatticePointsInBox(const PlaneLattice& lattice, std::int64_t w_lo,
                                 std::int64_t w_hi, std::int64_t y_lo,
                                 std::int64_t y_hi) {
  return ForEachLatticePoint(lattice, w_lo, w_hi, y_lo, y_hi, {}, {});
}

std::vector<double> XiPartialSums(double theta,
                                  const std::vector<std::uint64_t>& ys) {
  if (ys.empty()) return {};
  if (!std::is_sorted(ys.begin(), ys.end())) {
    throw InputError("Y values must be sorted");
  }
  const std::vector<std::uint64_t> xi = OddKernelTable(ys.back());
  std::vector<double> out;
  out.reserve(ys.size());
  double sum = 0.0, comp = 0.0;
  std::size_t next = 0;
  for (std::uint64_t n = 1; n <= ys.back() && next < ys.size(); ++n) {
    NeumaierAdd(std::pow(static_cast<double>(xi[n]), -theta), sum, comp);
    while (next < ys.size() && ys[next] == n) {
      out.push_back(sum + comp);
      ++next;
    }
  }
  while (out.size() < ys.size()) out.push_back(0.0);  // Y = 0 entries
  return out;
}

XiSumResult XiSum(double theta, std::uint64_t y, double eps,
                  std::uint64_t prime_cap) {
  if (!(theta > 0.0 && theta <= 1.0)) {
    throw InputError("theta must lie in (0, 1]");
  }
  if (!(eps > 0.0)) throw InputError("eps must be positive");
  if (y < 1) throw InputError("Y must be at least 1");
  XiSumResult r;
  r.theta = theta;
  r.y = y;
  r.epsilon = eps;
  r.partial_sum = XiPartialSums(theta, {y}).front();
  r.a_eps = 1.0 / (1.0 - std::pow(2.0, -eps));
  r.prime_cap = prime_cap == 0 ? std::max<std::uint64_t>(y, 1'000'000) : prime_cap;

  double log_c = 0.0, comp = 0.0;
  for (std::uint64_t p : PrimesUpTo(r.prime_cap)) {
    NeumaierAdd(std::log1p(std::pow(static_cast<double>(p), -1.0 - eps) * r.a_eps),
                log_c, comp);
  }
  log_c += comp;
  r.c_eps = std::exp(log_c);
  r.c_eps_upper = std::exp(
      log_c + r.a_eps * std::pow(static_cast<double>(r.prime_cap), -eps) / eps);
  r.bound = r.c_eps * std::pow(static_cast<double>(y), 1.0 - theta + eps);
  r.bound_holds = r.partial_sum <= r.bound;
  return r;
}

}  // namespace lopsided
