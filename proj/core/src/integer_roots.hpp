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

// Exact integer roots of a univariate integer polynomial on an interval.
//
// q is split into runs on which it is strictly monotone over the integers,
// using the sign events of its forward differences Dq(n) = q(n+1) - q(n),
// found recursively. Each run holds at most one root, located by bisection.
// Only exact evaluations are used.

#ifndef LOPSIDED_SRC_INTEGER_ROOTS_HPP_
#define LOPSIDED_SRC_INTEGER_ROOTS_HPP_

#include <gmpxx.h>

#include <algorithm>
#include <cstdint>
#include <vector>

namespace lopsided::internal {

using Int128 = __int128;

inline int Sign(Int128 v) { return (v > 0) - (v < 0); }
inline int Sign(const mpz_class& v) { return sgn(v); }

// Exact for |v| < 2^127.
inline Int128 ToInt128(const BigInt& v) {
  const BigInt mag = abs(v);
  const BigInt high = mag >> 64;
  const BigInt low = mag - (high << 64);
  unsigned __int128 u = static_cast<unsigned __int128>(mpz_get_ui(high.get_mpz_t())) << 64;
  u |= mpz_get_ui(low.get_mpz_t());
  const Int128 out = static_cast<Int128>(u);
  return sgn(v) < 0 ? -out : out;
}

// Coefficients low-to-high; trailing zeros are trimmed by the caller.
template <class V>
V EvaluatePoly(const std::vector<V>& coeffs, std::int64_t n) {
  V acc = 0;
  const V x = static_cast<V>(n);
  for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) {
    acc = acc * x + *it;
  }
  return acc;
}

template <class V>
std::vector<V> ForwardDifference(const std::vector<V>& coeffs) {
  if (coeffs.size() <= 1) return {};
  std::vector<V> out(coeffs.size() - 1, V(0));
  for (std::size_t j = 1; j < coeffs.size(); ++j) {
    // c_j ((n+1)^j - n^j) = c_j sum_{i<j} C(j, i) n^i
    V binom = 1;
    for (std::size_t i = 0; i < j; ++i) {
      out[i] += coeffs[j] * binom;
      binom = binom * static_cast<V>(j - i) / static_cast<V>(i + 1);
    }
  }
  return out;
}

template <class V>
class IntegerRootFinder {
 public:
  // coeffs must describe a polynomial that is not identically zero.
  explicit IntegerRootFinder(std::vector<V> coeffs) {
    while (!coeffs.empty() && Sign(coeffs.back()) == 0) coeffs.pop_back();
    diffs_.push_back(std::move(coeffs));
    while (diffs_.back().size() > 1) {
      diffs_.push_back(ForwardDifference(diffs_.back()));
    }
  }

  std::vector<std::int64_t> Roots(std::int64_t lo, std::int64_t hi) const {
    std::vector<std::int64_t> out;
    if (diffs_.front().empty() || lo > hi) return out;
    for (std::int64_t n : Events(0, lo, hi)) {
      if (Sign(Eval(0, n)) == 0) out.push_back(n);
    }
    return out;
  }

 private:
  V Eval(std::size_t level, std::int64_t n) const {
    return EvaluatePoly(diffs_[level], n);
  }

  // Sorted n in [lo, hi] with h(n) == 0, or n < hi and h changes sign
  // between n and n + 1, where h is the level-th difference.
  std::vector<std::int64_t> Events(std::size_t level, std::int64_t lo,
                                   std::int64_t hi) const {
    std::vector<std::int64_t> out;
    if (lo > hi || diffs_[level].size() <= 1) return out;  // nonzero constant

    const std::vector<std::int64_t> inner =
        lo < hi ? Events(level + 1, lo, hi - 1) : std::vector<std::int64_t>{};

    auto monotone_run = [&](std::int64_t a, std::int64_t b) {
      const int sa = Sign(Eval(level, a));
      if (sa == 0) {
        out.push_back(a);
        return;
      }
      if (Sign(Eval(level, b)) == sa) return;
      std::int64_t left = a;
      std::int64_t right = b;
      while (right - left > 1) {
        const std::int64_t mid = left + (right - left) / 2;
        if (Sign(Eval(level, mid)) == sa) {
          left = mid;
        } else {
          right = mid;
        }
      }
      out.push_back(Sign(Eval(level, right)) == 0 ? right : left);
    };

    std::int64_t start = lo;
    for (std::int64_t e : inner) {
      monotone_run(start, e);
      const int se = Sign(Eval(level, e));
      if (se == 0 || se * Sign(Eval(level, e + 1)) < 0) out.push_back(e);
      start = e + 1;
    }
    monotone_run(start, hi);

    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
  }

  std::vector<std::vector<V>> diffs_;
};

}  // namespace lopsided::internal

#endif  // LOPSIDED_SRC_INTEGER_ROOTS_HPP_
