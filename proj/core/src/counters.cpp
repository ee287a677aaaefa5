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

#include "lopsided/counters.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>
#include <sstream>
#include <thread>
#include <unordered_set>

#include "lopsided/arith.hpp"
#include "integer_roots.hpp"
#include "lopsided/errors.hpp"

namespace lopsided {
namespace {

using internal::Int128;
using Clock = std::chrono::steady_clock;

double Seconds(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

unsigned WorkerCount(const CountOptions& o) { return std::max(1u, o.workers); }

// Runs body(worker) on `workers` threads, or inline for one.
template <typename Body>
void RunWorkers(unsigned workers, Body body) {
  if (workers == 1) {
    body(0u);
    return;
  }
  std::vector<std::thread> pool;
  for (unsigned t = 0; t < workers; ++t) pool.emplace_back(body, t);
  for (auto& th : pool) th.join();
}

// Whether 2 * coeff * X^k stays below 2^124.
bool PowerFitsInt128(int k, double x_max, double coeff = 1.0) {
  return std::log2(2.0 * coeff) + k * std::log2(std::max(1.0, x_max)) < 124.0;
}

Int128 Pow128(std::uint64_t v, int k) {
  Int128 r = 1;
  for (int i = 0; i < k; ++i) r *= static_cast<Int128>(v);
  return r;
}

BigInt PowBig(std::uint64_t v, int k) {
  BigInt r;
  mpz_ui_pow_ui(r.get_mpz_t(), v, static_cast<unsigned long>(k));
  return r;
}

template <typename K>
K PowerOf(std::uint64_t v, int k) {
  if constexpr (std::is_same_v<K, Int128>) {
    return Pow128(v, k);
  } else {
    return PowBig(v, k);
  }
}

template <typename K>
struct PairSum {
  K sum;
  std::uint32_t a;  // a <= b
  std::uint32_t b;
};

template <typename K>
bool SumLess(const PairSum<K>& l, const PairSum<K>& r) {
  if (l.sum != r.sum) return l.sum < r.sum;
  if (l.a != r.a) return l.a < r.a;
  return l.b < r.b;
}

// Unordered pairs 1 <= a <= b <= X with an+-b^k, sorted by (sum, a, b).
template <typename K>
std::vector<PairSum<K>> PairSums(const std::vector<K>& pw, std::uint64_t x_max,
                                 bool difference, unsigned workers) {
  std::vector<std::vector<PairSum<K>>> parts(workers);
  RunWorkers(workers, [&](unsigned t) {
    for (std::uint64_t a = 1 + t; a <= x_max; a += workers) {
      if (difference) {
        for (std::uint64_t b = a + 1; b <= x_max; ++b) {
          parts[t].push_back({pw[b] - pw[a], static_cast<std::uint32_t>(a),
                              static_cast<std::uint32_t>(b)});
        }
      } else {
        for (std::uint64_t b = a; b <= x_max; ++b) {
          parts[t].push_back({pw[a] + pw[b], static_cast<std::uint32_t>(a),
                              static_cast<std::uint32_t>(b)});
        }
      }
    }
  });
  std::vector<PairSum<K>> all;
  for (auto& p : parts) {
    all.insert(all.end(), std::make_move_iterator(p.begin()),
               std::make_move_iterator(p.end()));
  }
  std::sort(all.begin(), all.end(), SumLess<K>);
  return all;
}

template <typename K>
void NaiveTwoTwo(int k, std::uint64_t x_max, const CountOptions& o,
                 CountResult& res) {
  std::vector<K> pw(x_max + 1);
  for (std::uint64_t v = 0; v <= x_max; ++v) pw[v] = PowerOf<K>(v, k);
  const auto sums = PairSums<K>(pw, x_max, false, WorkerCount(o));
  for (std::size_t i = 0; i < sums.size();) {
    std::size_t j = i;
    std::uint64_t ordered = 0;
    while (j < sums.size() && sums[j].sum == sums[i].sum) {
      const bool distinct = sums[j].a < sums[j].b;
      ordered += distinct ? 2 : 1;
      res.trivial += distinct ? 4 : 1;
      ++j;
    }
    res.total += ordered * ordered;
    if (o.collect_solutions) {
      for (std::size_t p = i; p < j; ++p) {
        for (std::size_t q = p + 1; q < j; ++q) {
          res.representatives.push_back(
              {sums[p].b, sums[p].a, sums[q].a, sums[q].b});
        }
      }
    }
    i = j;
  }
}

template <typename K>
void NaiveThreeOne(int k, std::uint64_t x_max, const CountOptions& o,
                   CountResult& res) {
  std::vector<K> pw(x_max + 1);
  for (std::uint64_t v = 0; v <= x_max; ++v) pw[v] = PowerOf<K>(v, k);
  const auto sums = PairSums<K>(pw, x_max, false, WorkerCount(o));
  const auto diffs = PairSums<K>(pw, x_max, true, WorkerCount(o));
  std::size_t j = 0;
  for (std::size_t i = 0; i < sums.size();) {
    std::size_t i2 = i;
    std::uint64_t ordered = 0;
    while (i2 < sums.size() && sums[i2].sum == sums[i].sum) {
      ordered += sums[i2].a < sums[i2].b ? 2 : 1;
      ++i2;
    }
    while (j < diffs.size() && diffs[j].sum < sums[i].sum) ++j;
    std::uint64_t matches = 0;
    for (std::size_t j2 = j; j2 < diffs.size() && diffs[j2].sum == sums[i].sum; ++j2) {
      ++matches;
    }
    res.total += ordered * matches;
    i = i2;
  }
}

std::string SumsParameters(int k, std::uint64_t x_max) {
  std::ostringstream os;
  os << "k=" << k << ";X=" << x_max;
  return os.str();
}

std::string BoxParameters(const TernaryForm& form, const BoxTriple& box) {
  std::ostringstream os;
  os.imbue(std::locale::classic());
  os << "F=" << form.ToString() << ";P=" << box[0] << ',' << box[1] << ','
     << box[2];
  return os.str();
}

IntPoint3 FloorBox(const BoxTriple& box) {
  IntPoint3 out{};
  for (int i = 0; i < 3; ++i) {
    if (!(box[i] >= 0.0) || box[i] > 1e9) throw InputError("box entries must lie in [0, 1e9]");
    out[i] = static_cast<std::int64_t>(std::floor(box[i]));
  }
  return out;
}

std::int64_t Gcd3(std::int64_t a, std::int64_t b, std::int64_t c) {
  return std::gcd(std::gcd(a, b), c);
}

}  // namespace

SolutionQuadruple SolutionQuadruple::Make(std::uint64_t w, std::uint64_t x,
                                          std::uint64_t y, std::uint64_t z,
                                          int k) {
  if (w == 0 || x == 0 || y == 0 || z == 0) {
    throw InputError("quadruple entries must be positive");
  }
  if (k < 1) throw InputError("k must be positive");
  if (PowBig(w, k) + PowBig(x, k) != PowBig(y, k) + PowBig(z, k)) {
    throw InputError("not a solution of w^k + x^k = y^k + z^k");
  }
  return {w, x, y, z};
}

bool ClassifyTrivial(const SolutionQuadruple& q, int /*k*/) {
  return (q.y == q.w && q.z == q.x) || (q.y == q.x && q.z == q.w);
}

int OrbitSize(const SolutionQuadruple& q) {
  std::vector<SolutionQuadruple> orbit{
      {q.w, q.x, q.y, q.z}, {q.x, q.w, q.y, q.z}, {q.w, q.x, q.z, q.y},
      {q.x, q.w, q.z, q.y}, {q.y, q.z, q.w, q.x}, {q.z, q.y, q.w, q.x},
      {q.y, q.z, q.x, q.w}, {q.z, q.y, q.x, q.w}};
  std::sort(orbit.begin(), orbit.end());
  return static_cast<int>(std::unique(orbit.begin(), orbit.end()) - orbit.begin());
}

CountResult CountCurveBruteforce(const TernaryForm& form, const BoxTriple& box,
                                 const CountOptions& options) {
  const auto start = Clock::now();
  const IntPoint3 b = FloorBox(box);
  const double cells =
      double(2 * b[0] + 1) * double(2 * b[1] + 1) * double(2 * b[2] + 1);
  if (cells > static_cast<double>(options.max_points)) {
    throw GuardError("box too large for an exhaustive scan");
  }

  // Int128 evaluation when sum |c| prod B_i^e_i stays well inside range.
  double log2_bound = -1e300;
  for (const Term3& t : form.terms()) {
    double l = std::log2(std::abs(t.coeff.get_d()));
    for (int i = 0; i < 3; ++i) l += t.exps[i] * std::log2(double(b[i]) + 1.0);
    log2_bound = std::max(log2_bound, l);
  }
  const bool narrow =
      log2_bound + std::log2(double(form.terms().size())) < 120.0;

  CountResult res;
  res.label = "count-curve-bruteforce";
  res.parameters = BoxParameters(form, box);
  const auto& terms = form.terms();
  for (std::int64_t x1 = -b[0]; x1 <= b[0]; ++x1) {
    for (std::int64_t x2 = -b[1]; x2 <= b[1]; ++x2) {
      for (std::int64_t x3 = -b[2]; x3 <= b[2]; ++x3) {
        if (Gcd3(x1, x2, x3) != 1) continue;
        bool zero;
        if (narrow) {
          Int128 acc = 0;
          for (const Term3& t : terms) {
            Int128 v = internal::ToInt128(t.coeff);
            for (int e = 0; e < t.exps[0]; ++e) v *= x1;
            for (int e = 0; e < t.exps[1]; ++e) v *= x2;
            for (int e = 0; e < t.exps[2]; ++e) v *= x3;
            acc += v;
          }
          zero = acc == 0;
        } else {
          zero = form.Evaluate(IntPoint3{x1, x2, x3}) == 0;
        }
        if (zero) ++res.total;
      }
    }
  }
  res.nontrivial = res.total;
  res.elapsed = Seconds(start);
  return res;
}

CountResult CountCurveSolver(const TernaryForm& form, const BoxTriple& box,
                             const CountOptions& options) {
  const auto start = Clock::now();
  CountResult res;
  res.label = "count-curve-solver";
  res.parameters = BoxParameters(form, box);
  res.total = PrimitiveZeros(form, FloorBox(box), options.max_points).size();
  res.nontrivial = res.total;
  res.elapsed = Seconds(start);
  return res;
}

CountResult CountSumsNaive(int k, std::uint64_t x_max, SumsVariant variant,
                           const CountOptions& options) {
  if (k < 2) throw InputError("k must be at least 2");
  if (x_max > std::numeric_limits<std::uint32_t>::max()) throw GuardError("X too large");
  const double pairs = double(x_max) * double(x_max + 1) / 2.0;
  const double stored = variant == SumsVariant::kTwoTwo ? pairs : 2.0 * pairs;
  if (stored > static_cast<double>(options.max_pairs)) {
    throw GuardError("meet-in-the-middle table exceeds the memory guard");
  }
  const auto start = Clock::now();
  CountResult res;
  res.parameters = SumsParameters(k, x_max);
  const bool narrow = PowerFitsInt128(k, double(x_max));
  if (variant == SumsVariant::kTwoTwo) {
    res.label = "count-sums-naive";
    if (narrow) {
      NaiveTwoTwo<Int128>(k, x_max, options, res);
    } else {
      NaiveTwoTwo<BigInt>(k, x_max, options, res);
    }
  } else {
    res.label = "count-sums-naive-three-one";
    if (narrow) {
      NaiveThreeOne<Int128>(k, x_max, options, res);
    } else {
      NaiveThreeOne<BigInt>(k, x_max, options, res);
    }
  }
  res.nontrivial = res.total - res.trivial;
  std::sort(res.representatives.begin(), res.representatives.end());
  res.elapsed = Seconds(start);
  return res;
}

CountResult CountSumsPipeline(int k, std::uint64_t x_max,
                              const CountOptions& options) {
  if (k < 4) throw InputError("the pipeline needs k >= 4");
  if (x_max > options.max_x) throw GuardError("X exceeds the pipeline guard");
  // v1 f(v1, v2) = 2^{k-1}(z^k - x^k) <= 2^{k-1} (2X)^k.
  if (!PowerFitsInt128(k, 2.0 * double(x_max), std::ldexp(1.0, k - 1))) {
    throw GuardError("pipeline values overflow 128-bit arithmetic");
  }
  const auto start = Clock::now();
  const BinaryForm f = EqualSumsBinaryForm(k);
  std::vector<std::pair<int, Int128>> f_terms;  // (power of v1, coefficient)
  for (const Term2& t : f.terms()) {
    f_terms.emplace_back(t.exps[0], static_cast<Int128>(t.coeff.get_si()));
  }
  std::vector<Int128> pw(x_max + 1);
  for (std::uint64_t v = 0; v <= x_max; ++v) pw[v] = Pow128(v, k);
  const Int128 scale = static_cast<Int128>(1) << (k - 1);

  auto value = [&](std::int64_t v1, std::int64_t v2) {
    Int128 acc = 0;
    for (const auto& [e1, c] : f_terms) {
      Int128 term = c;
      for (int e = 0; e < e1; ++e) term *= v1;
      for (int e = 0; e < k - 1 - e1; ++e) term *= v2;
      acc += term;
    }
    return acc * v1;
  };

  const std::int64_t xm = static_cast<std::int64_t>(x_max);
  const unsigned workers = WorkerCount(options);
  std::vector<std::vector<SolutionQuadruple>> found(workers);

  RunWorkers(workers, [&](unsigned t) {
    std::unordered_set<std::uint64_t> seen;
    for (std::int64_t v1 = 1 + t; v1 + 2 <= xm; v1 += workers) {
      const std::uint64_t xi = OddSquarefreeKernel(v1).xi;
      const auto lattices = CrtLattices(k, xi);
      seen.clear();
      for (const PlaneLattice& lat : lattices) {
        ForEachLatticePoint(
            lat, 2, xm, 1, xm - 1, {{1, -1, 1}},
            [&](std::int64_t w, std::int64_t y) {
              if (lattices.size() > 1 &&
                  !seen.insert(static_cast<std::uint64_t>(w) * (x_max + 1) + y).second) {
                return;
              }
              const Int128 target = scale * (pw[w] - pw[y]);
              std::int64_t lo = v1 + 1, hi = 2 * xm;
              if (value(v1, lo) > target || value(v1, hi) < target) return;
              while (lo < hi) {
                const std::int64_t mid = lo + (hi - lo) / 2;
                if (value(v1, mid) < target) {
                  lo = mid + 1;
                } else {
                  hi = mid;
                }
              }
              if (value(v1, lo) != target) return;
              const std::int64_t v2 = lo;
              if ((v2 - v1) % 2 != 0) return;
              const std::int64_t z = (v2 + v1) / 2;
              const std::int64_t x = (v2 - v1) / 2;
              if (!(1 <= x && x < y && y <= z && z < w)) return;
              found[t].push_back({static_cast<std::uint64_t>(w),
                                  static_cast<std::uint64_t>(x),
                                  static_cast<std::uint64_t>(y),
                                  static_cast<std::uint64_t>(z)});
            });
      }
    }
  });

  CountResult res;
  res.label = "count-sums-pipeline";
  res.parameters = SumsParameters(k, x_max);
  for (auto& part : found) {
    for (const auto& q : part) {
      res.nontrivial += static_cast<std::uint64_t>(OrbitSize(q));
      if (options.collect_solutions) res.representatives.push_back(q);
    }
  }
  std::sort(res.representatives.begin(), res.representatives.end());
  res.trivial = 2 * x_max * x_max - x_max;
  res.total = res.trivial + res.nontrivial;
  res.elapsed = Seconds(start);
  return res;
}

FitResult FitExponent(const std::vector<std::pair<double, double>>& samples) {
  std::vector<std::pair<double, double>> pts;
  for (const auto& [x, c] : samples) {
    if (c > 0.0 && x > 0.0) pts.emplace_back(std::log(x), std::log(c));
  }
  if (pts.size() < 3) throw InputError("need at least 3 samples with positive counts");
  const double n = static_cast<double>(pts.size());
  double mx = 0.0, my = 0.0;
  for (const auto& [x, y] : pts) {
    mx += x;
    my += y;
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0;
  for (const auto& [x, y] : pts) {
    sxx += (x - mx) * (x - mx);
    sxy += (x - mx) * (y - my);
  }
  if (sxx == 0.0) throw InputError("samples need at least two distinct X");
  FitResult r;
  r.slope = sxy / sxx;
  r.intercept = my - r.slope * mx;
  r.used = pts.size();
  return r;
}

}  // namespace lopsided
