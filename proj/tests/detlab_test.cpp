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

#include "lopsided/detlab.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <map>
#include <random>
#include <set>

#include "lopsided/errors.hpp"

namespace lopsided {
namespace {

const std::array<double, 3> kB123{1, 2, 3};

std::vector<Exponent3> EnumerateOracle(int big_d, double a,
                                       const std::array<double, 3>& b,
                                       const Exponent3& f) {
  std::vector<Exponent3> out;
  for (int e1 = 0; e1 <= big_d; ++e1)
    for (int e2 = 0; e1 + e2 <= big_d; ++e2) {
      const int e3 = big_d - e1 - e2;
      const double s = e1 * b[0] + e2 * b[1] + e3 * b[2];
      if (s > a * (1 + 1e-12)) continue;
      if (e1 < f[0] || e2 < f[1] || e3 < f[2]) out.push_back({e1, e2, e3});
    }
  std::sort(out.begin(), out.end());
  return out;
}

TEST(ExponentSet, Example) {
  ExponentSet s = BuildExponentSet(2, 5.0, kB123, {1, 1, 1});
  EXPECT_EQ(s.members, (std::vector<Exponent3>{
                           {0, 1, 1}, {0, 2, 0}, {1, 0, 1}, {1, 1, 0}, {2, 0, 0}}));
  EXPECT_EQ(s.size(), 5u);
  EXPECT_FALSE(s.Admits({0, 0, 2}));
}

TEST(ExponentSet, EmptyAndFull) {
  EXPECT_TRUE(BuildExponentSet(4, 3.9, kB123, {1, 1, 2}).members.empty());
  ExponentSet full = BuildExponentSet(4, 12.0, kB123, {5, 5, 5});
  EXPECT_EQ(full.size(), 15u);
  EXPECT_THROW(BuildExponentSet(2, 5.0, {2, 1, 3}, {1, 1, 1}), InputError);
  EXPECT_THROW(BuildExponentSet(0, 5.0, kB123, {1, 1, 1}), InputError);
}

TEST(ExponentSet, MatchesOracleAndPredicate) {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> u(0.1, 3.0);
  for (int trial = 0; trial < 300; ++trial) {
    std::array<double, 3> b{u(rng), u(rng), u(rng)};
    std::sort(b.begin(), b.end());
    if (b[1] - b[0] < 1e-3 || b[2] - b[1] < 1e-3) continue;
    const int big_d = 1 + static_cast<int>(rng() % 12);
    const int d = 1 + static_cast<int>(rng() % 4);
    const int f3 = static_cast<int>(rng() % (d + 1));
    const int f1 = static_cast<int>(rng() % (d - f3 + 1));
    const Exponent3 f{f1, d - f3 - f1, f3};
    const double a = big_d * (b[0] + (b[2] - b[0]) * u(rng) / 3.0);
    ExponentSet s = BuildExponentSet(big_d, a, b, f);
    EXPECT_EQ(s.members, EnumerateOracle(big_d, a, b, f));
    for (const Exponent3& e : s.members) EXPECT_TRUE(s.Admits(e));
    EXPECT_TRUE(std::is_sorted(s.members.begin(), s.members.end()));
  }
}

TEST(BuildMjk, Examples) {
  EXPECT_EQ(BuildMjk(2, 5.0, kB123, 1, 2),
            (std::vector<std::array<int, 2>>{{2, 0}, {1, 1}, {0, 2}}));
  EXPECT_EQ(BuildMjk(2, 5.0, kB123, 2, 3),
            (std::vector<std::array<int, 2>>{{2, 0}, {1, 1}}));
  EXPECT_TRUE(BuildMjk(5, 9.9, kB123, 2, 3).empty());
  EXPECT_THROW(BuildMjk(2, 5.0, kB123, 2, 2), InputError);
}

TEST(SumCompare, ClosedSumForWideCap) {
  for (int big_d : {10, 40, 100}) {
    const double a = 2.5 * big_d;
    SumCompareRecord r = SumCompare(big_d, a, kB123, {1, 1, 1});
    const SumCompareSlot& s3 = r.slots[2];
    EXPECT_EQ(s3.jk, (std::array<int, 2>{1, 2}));
    EXPECT_NEAR(s3.mjk_tau_sum, 3.0 * big_d * (big_d + 1) / 2.0, 1e-9);
    EXPECT_EQ(s3.mjk_count, static_cast<std::size_t>(big_d + 1));
  }
  EXPECT_THROW(SumCompare(10, 15.0, kB123, {1, 1, 1}), InputError);
  EXPECT_THROW(SumCompare(10, 31.0, kB123, {1, 1, 1}), InputError);
}

TEST(SumCompare, CountsAgainstEnumeration) {
  for (int big_d : {12, 30, 61}) {
    const double a = 2.5 * big_d;
    const Exponent3 f{1, 1, 1};
    SumCompareRecord r = SumCompare(big_d, a, kB123, f);
    std::vector<Exponent3> all = EnumerateOracle(big_d, a, kB123, f);
    EXPECT_EQ(r.e_count, all.size());
    std::array<std::size_t, 3> counts{};
    std::array<double, 3> sums{};
    std::size_t overlap = 0;
    double sigma_total = 0;
    for (const Exponent3& e : all) {
      const double s = e[0] + 2.0 * e[1] + 3.0 * e[2];
      sigma_total += s;
      int in = 0;
      for (int i = 0; i < 3; ++i)
        if (e[i] < f[i]) {
          ++counts[i];
          sums[i] += s;
          ++in;
        }
      overlap += in * (in - 1) / 2;
    }
    EXPECT_NEAR(r.e_sigma_sum, sigma_total, 1e-9 * sigma_total);
    std::size_t union_count = 0;
    for (int i = 0; i < 3; ++i) {
      EXPECT_EQ(r.slots[i].e_i_count, counts[i]);
      EXPECT_NEAR(r.slots[i].e_i_sigma_sum, sums[i], 1e-9 * std::max(1.0, sums[i]));
      union_count += counts[i];
      // With f_i = 1, E_i is the set with e_i = 0, i.e. M_jk.
      EXPECT_EQ(r.slots[i].mjk_count, counts[i]);
    }
    EXPECT_EQ(r.e_union_count, union_count);
    EXPECT_EQ(r.e_overlap_count, overlap);
    EXPECT_LE(r.e_union_count - r.e_count, r.e_overlap_count);
    EXPECT_LE(r.e_overlap_count, 3u);
  }
}

TEST(SumCompare, ResidualsScaleWithA) {
  // Residuals of the closed forms grow at most linearly in A.
  std::vector<double> ratios;
  for (int big_d : {50, 100, 200}) {
    const double a = 2.5 * big_d;
    SumCompareRecord r = SumCompare(big_d, a, kB123, {1, 1, 1});
    ratios.push_back(r.max_tau_residual / a);
  }
  for (double c : ratios) EXPECT_LT(c, 1.0);
  EXPECT_LE(ratios[2], ratios[0] + 1e-9);
}

TEST(BoundaryBandCount, Example) {
  // tau = 100 - m1 in (75, 84]: m1 = 16..24.
  EXPECT_EQ(BoundaryBandCount(50, 75.0, kB123, 1, 2, 3), 9);
}

TEST(BoundaryBandCount, OracleAndBound) {
  std::mt19937_64 rng(22);
  std::uniform_real_distribution<double> u(0.1, 5.0);
  for (int trial = 0; trial < 500; ++trial) {
    std::array<double, 3> b{u(rng), u(rng), u(rng)};
    std::sort(b.begin(), b.end());
    if (b[1] - b[0] < 1e-2 || b[2] - b[1] < 1e-2) continue;
    const int big_d = 1 + static_cast<int>(rng() % 80);
    const int d = 1 + static_cast<int>(rng() % 4);
    const double a = big_d * b[0] + (big_d * (b[2] - b[0])) * u(rng) / 5.0;
    for (auto [j, k] : {std::pair{1, 2}, std::pair{1, 3}, std::pair{2, 3}}) {
      std::int64_t want = 0;
      for (int mj = 0; mj <= big_d; ++mj) {
        const double t = mj * b[j - 1] + (big_d - mj) * b[k - 1];
        want += (t > a && t <= a + d * b[2]);
      }
      const std::int64_t got = BoundaryBandCount(big_d, a, b, j, k, d);
      EXPECT_EQ(got, want);
      EXPECT_LE(got, d * b[2] / (b[k - 1] - b[j - 1]) + 1 + 1e-9);
    }
  }
}

std::vector<ProjPoint> CurvePointsOracle(const TernaryForm& f, std::uint64_t p) {
  std::vector<ProjPoint> out;
  auto residue = [&](const BigInt& v) {
    BigInt m = v % static_cast<unsigned long>(p);
    if (m < 0) m += static_cast<unsigned long>(p);
    return m.get_ui();
  };
  for (std::uint64_t a = 0; a < p; ++a)
    for (std::uint64_t b = 0; b < p; ++b)
      for (std::uint64_t c = 0; c < p; ++c) {
        ProjPoint t{a, b, c};
        // First nonzero coordinate 1.
        const std::uint64_t lead = a ? a : (b ? b : c);
        if (lead != 1) continue;
        IntPoint3 x{static_cast<std::int64_t>(a), static_cast<std::int64_t>(b),
                    static_cast<std::int64_t>(c)};
        if (residue(f.Evaluate(x)) != 0) continue;
        bool smooth = false;
        for (int v = 0; v < 3; ++v) {
          auto part = f.Partial(v);
          if (part.empty()) continue;
          smooth |= residue(TernaryForm::FromTerms(part).Evaluate(x)) != 0;
        }
        if (smooth) out.push_back(t);
      }
  std::sort(out.begin(), out.end());
  return out;
}

TEST(ModPCurvePoints, ConicCounts) {
  TernaryForm conic = ParseForm("x1^2 + x2^2 - x3^2");
  EXPECT_EQ(ModPCurvePoints(conic, 5).size(), 6u);
  EXPECT_EQ(ModPCurvePoints(conic, 3).size(), 4u);
  for (std::uint64_t p : {3, 5, 7, 11, 13, 29, 31}) {
    EXPECT_EQ(ModPCurvePoints(conic, p).size(), p + 1);
  }
}

TEST(ModPCurvePoints, MatchesOracleAndDropsSingular) {
  std::vector<TernaryForm> forms = {ParseForm("x1^2*x3 - x2^3"),
                                    ParseForm("x1^3 + x2^3 - 7*x3^3"),
                                    ParseForm("x1^2 + x2^2 - x3^2"),
                                    ParseForm("x1*x2*x3 + x1^3 - 2*x2^2*x3")};
  for (const TernaryForm& f : forms)
    for (std::uint64_t p : {2, 3, 5, 7, 11, 13, 17}) {
      EXPECT_EQ(ModPCurvePoints(f, p), CurvePointsOracle(f, p))
          << f.ToString() << " p=" << p;
    }
  // The cusp point (0 : 0 : 1) is singular and never listed.
  for (std::uint64_t p : {5, 7, 11}) {
    auto pts = ModPCurvePoints(ParseForm("x1^2*x3 - x2^3"), p);
    EXPECT_EQ(std::count(pts.begin(), pts.end(), ProjPoint{0, 0, 1}), 0);
  }
  EXPECT_THROW(ModPCurvePoints(ParseForm("x1^2 - x2^2"), 9), InputError);
  EXPECT_THROW(ModPCurvePoints(ParseForm("5*x1^2 - 5*x2^2"), 5), InputError);
  EXPECT_THROW(ModPCurvePoints(ParseForm("x1^2 - x2^2"), 20011), GuardError);
}

TEST(Fiber, PartitionOfConicPoints) {
  TernaryForm conic = ParseForm("x1^2 + x2^2 - x3^2");
  const IntPoint3 box{5, 5, 5};
  const std::uint64_t p = 13;
  std::vector<IntPoint3> zeros = PrimitiveZeros(conic, box);
  ASSERT_EQ(zeros.size(), 24u);
  auto ts = ModPCurvePoints(conic, p);
  std::map<IntPoint3, int> seen;
  for (const ProjPoint& t : ts) {
    ModPFiber fb = Fiber(conic, box, p, t);
    for (const IntPoint3& x : fb.points) {
      EXPECT_TRUE(OnLine(x, t, p));
      ++seen[x];
    }
  }
  // Every point lies in exactly one fiber: the conic is smooth mod 13 and
  // no zero in the box vanishes mod 13.
  EXPECT_EQ(seen.size(), zeros.size());
  for (auto& [x, n] : seen) EXPECT_EQ(n, 1);
  auto fibers = FibersFromPoints(zeros, box, p, ts);
  std::size_t total = 0;
  for (const ModPFiber& fb : fibers) total += fb.points.size();
  EXPECT_EQ(total, zeros.size());
}

TEST(Fiber, SignNormalization) {
  std::vector<IntPoint3> pts{{3, 4, 5}, {-3, -4, -5}, {0, -1, 1}, {0, 1, -1}};
  EXPECT_EQ(SignNormalizedPoints(pts),
            (std::vector<IntPoint3>{{0, 1, -1}, {3, 4, 5}}));
}

TEST(DeterminantDelta, SinglePoint) {
  ExponentSet s;
  s.big_d = 3;
  s.members = {{1, 2, 0}};
  ModPFiber fb{7, {1, 2, 3}, {10, 10, 10}, {{2, 3, 5}}};
  DeterminantRecord r = DeterminantDelta(fb, s);
  EXPECT_EQ(r.delta, 18);
  EXPECT_TRUE(r.bound_holds);
}

TEST(DeterminantDelta, CongruentRowsGiveValuation) {
  ExponentSet s;
  s.big_d = 1;
  s.members = {{1, 0, 0}, {0, 1, 0}};
  ModPFiber fb{7, {1, 3, 0}, {20, 20, 20}, {{1, 3, 0}, {2, 6, 1}}};
  // Rows (1,3) and (2,6) are dependent already; use (1,3) and (8,3).
  fb.points = {{1, 3, 0}, {8, 3, 0}};
  DeterminantRecord r = DeterminantDelta(fb, s);
  EXPECT_EQ(abs(r.delta), 21);
  ASSERT_TRUE(r.nu_p.has_value());
  EXPECT_GE(*r.nu_p, 1);
  fb.points = {{1, 3, 0}, {2, 6, 0}};
  DeterminantRecord z = DeterminantDelta(fb, s);
  EXPECT_TRUE(z.vanished());
  EXPECT_FALSE(z.nu_p.has_value());
}

BigInt DeterminantOracle(std::vector<std::vector<mpq_class>> m) {
  const std::size_t n = m.size();
  mpq_class det = 1;
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t piv = c;
    while (piv < n && m[piv][c] == 0) ++piv;
    if (piv == n) return 0;
    if (piv != c) {
      std::swap(m[piv], m[c]);
      det = -det;
    }
    det *= m[c][c];
    for (std::size_t r = c + 1; r < n; ++r) {
      const mpq_class q = m[r][c] / m[c][c];
      for (std::size_t k = c; k < n; ++k) m[r][k] -= q * m[c][k];
    }
  }
  return det.get_num();
}

TEST(DeterminantDelta, ConicFibersExact) {
  TernaryForm conic = ParseForm("x1^2 + x2^2 - x3^2");
  const IntPoint3 box{50, 50, 50};
  const std::uint64_t p = 13;
  std::array<double, 3> b{std::log(50.0), std::log(60.0), std::log(70.0)};
  ExponentSet s = BuildExponentSet(2, 2 * b[2], b, {2, 0, 0});
  ASSERT_GT(s.size(), 0u);
  std::vector<IntPoint3> zeros = PrimitiveZeros(conic, box);
  auto fibers = FibersFromPoints(zeros, box, p, ModPCurvePoints(conic, p));
  int tested = 0;
  for (const ModPFiber& fb : fibers) {
    auto rows = SignNormalizedPoints(fb.points);
    if (rows.size() < s.size()) continue;
    DeterminantRecord r = DeterminantDelta(fb, s);
    std::vector<std::vector<mpq_class>> m;
    for (std::size_t i = 0; i < s.size(); ++i) {
      std::vector<mpq_class> row;
      for (const Exponent3& e : s.members) {
        BigInt v = 1;
        for (int c = 0; c < 3; ++c)
          for (int q = 0; q < e[c]; ++q) v *= rows[i][c];
        row.emplace_back(v);
      }
      m.push_back(row);
    }
    EXPECT_EQ(abs(r.delta), abs(DeterminantOracle(m)));
    EXPECT_TRUE(r.bound_holds);
    if (!r.vanished()) {
      BigInt pe;
      mpz_ui_pow_ui(pe.get_mpz_t(), p, *r.nu_p);
      EXPECT_EQ(r.delta % pe, 0);
      EXPECT_NE(r.delta % (pe * static_cast<unsigned long>(p)), 0);
      EXPECT_NEAR(*r.nu_ratio, static_cast<double>(*r.nu_p) / (s.size() * s.size()),
                  1e-15);
      EXPECT_LE(r.log_abs_delta, r.log_bound + 1e-9);
    }
    ++tested;
  }
  EXPECT_GT(tested, 0);
}

TEST(AuxiliaryForm, PencilThroughOnePoint) {
  TernaryForm conic = ParseForm("x1^2 + x2^2 - x3^2");
  ExponentSet s;
  s.big_d = 1;
  s.members = {{0, 0, 1}, {0, 1, 0}};
  ModPFiber fb{13, {1, 9, 7}, {5, 5, 5}, {{3, 4, 5}}};
  auto g = AuxiliaryForm(conic, fb, s);
  ASSERT_TRUE(g.has_value());
  EXPECT_EQ(g->rank, 1u);
  EXPECT_EQ(g->form.Evaluate(IntPoint3{3, 4, 5}), 0);
  EXPECT_TRUE(g->vanishes_on_fiber);
  EXPECT_FALSE(g->divisible_by_f);
}

TEST(AuxiliaryForm, EmptyFiberPicksFirstMonomial) {
  TernaryForm conic = ParseForm("x1^2 + x2^2 - x3^2");
  ExponentSet s;
  s.big_d = 2;
  s.members = {{0, 1, 1}, {1, 1, 0}, {2, 0, 0}};
  ModPFiber fb{13, {1, 0, 1}, {5, 5, 5}, {}};
  auto g = AuxiliaryForm(conic, fb, s);
  ASSERT_TRUE(g.has_value());
  EXPECT_EQ(g->form, ParseForm("x2*x3"));
}

TEST(AuxiliaryForm, DeepConicFiber) {
  TernaryForm conic = ParseForm("x1^2 + x2^2 - x3^2");
  const IntPoint3 box{60, 200, 300};
  std::array<double, 3> b{std::log(60.0), std::log(200.0), std::log(300.0)};
  ExponentSet s = BuildExponentSet(2, 2 * b[2], b, {0, 0, 2});
  std::vector<IntPoint3> zeros = PrimitiveZeros(conic, box);
  int produced = 0;
  for (std::uint64_t p : {101, 211, 307}) {
    for (const ModPFiber& fb :
         FibersFromPoints(zeros, box, p, ModPCurvePoints(conic, p))) {
      if (EvaluationRank(fb, s) == s.size()) continue;
      auto g = AuxiliaryForm(conic, fb, s);
      ASSERT_TRUE(g.has_value());
      EXPECT_EQ(g->form.degree(), 2);
      EXPECT_TRUE(g->vanishes_on_fiber);
      EXPECT_FALSE(g->divisible_by_f);
      for (const IntPoint3& x : fb.points) EXPECT_EQ(g->form.Evaluate(x), 0);
      ++produced;
    }
  }
  EXPECT_GT(produced, 0);
}

TEST(ChooseTargetPrime, SmallestPrimeAboveSize) {
  TargetPrime t = ChooseTargetPrime(ParseForm("x1^2 + x2^2 - 3*x3^2"), 1000.0);
  const double l = std::log(3.0) + std::log(1000.0);
  EXPECT_NEAR(t.size, l * l, 1e-12);
  EXPECT_GE(static_cast<double>(t.p), t.size);
  for (std::uint64_t q = static_cast<std::uint64_t>(std::ceil(t.size)); q < t.p; ++q) {
    bool prime = q >= 2;
    for (std::uint64_t r = 2; r * r <= q; ++r) prime &= q % r != 0;
    EXPECT_FALSE(prime);
  }
}

TEST(ScanVanishing, SmallScanIsConsistent) {
  TernaryForm conic = ParseForm("x1^2 + x2^2 - x3^2");
  const IntPoint3 box{20, 300, 400};
  const double a = 2 * std::log(400.0);
  VanishingScan scan = ScanVanishing(conic, box, 2, a, {3, 5, 7, 11, 13, 101, 211});
  EXPECT_GT(scan.eset.size(), 0u);
  std::size_t tested = 0;
  for (const VanishingTrace& tr : scan.traces) {
    EXPECT_GT(tr.fiber_size, 0u);
    EXPECT_EQ(tr.tested, tr.fiber_size >= scan.eset.size());
    EXPECT_EQ(tr.det.has_value(), tr.tested);
    if (tr.det) {
      ++tested;
      EXPECT_TRUE(tr.det->bound_holds);
      EXPECT_EQ(tr.det->vanished(), tr.rank < scan.eset.size());
    }
    EXPECT_EQ(tr.auxiliary.has_value(), tr.rank < scan.eset.size());
    if (tr.auxiliary) {
      EXPECT_TRUE(tr.auxiliary->vanishes_on_fiber);
      EXPECT_FALSE(tr.auxiliary->divisible_by_f);
    }
  }
  EXPECT_GT(tested, 0u);
  EXPECT_THROW(ScanVanishing(conic, {1, 300, 400}, 2, a, {3}), InputError);
  EXPECT_THROW(ScanVanishing(conic, {30, 20, 400}, 2, a, {3}), InputError);
}

}  // namespace
}  // namespace lopsided
