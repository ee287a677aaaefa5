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

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include "lopsided/arith.hpp"
#include "lopsided/errors.hpp"
#include "lopsided/exponent_calculus.hpp"

namespace lopsided {
namespace {

double Slack(double a) { return 1e-12 * std::max(1.0, std::abs(a)); }

void ValidateWeights(int big_d, const std::array<double, 3>& b) {
  if (big_d < 1) throw InputError("D must be positive");
  if (!(0.0 < b[0] && b[0] < b[1] && b[1] < b[2])) {
    throw InputError("need 0 < b1 < b2 < b3");
  }
}

void ValidatePair(int j, int k) {
  if (j < 1 || j > 3 || k < 1 || k > 3 || j == k) {
    throw InputError("j, k must be distinct elements of {1, 2, 3}");
  }
}

std::uint64_t Residue(std::int64_t x, std::uint64_t p) {
  const std::int64_t sp = static_cast<std::int64_t>(p);
  std::int64_t r = x % sp;
  if (r < 0) r += sp;
  return static_cast<std::uint64_t>(r);
}

std::uint64_t MulMod(std::uint64_t a, std::uint64_t b, std::uint64_t p) {
  return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b % p);
}

std::uint64_t EvalMod(const std::vector<Term3>& terms, const ProjPoint& t,
                      std::uint64_t p) {
  std::uint64_t acc = 0;
  for (const Term3& term : terms) {
    std::uint64_t v = mpz_fdiv_ui(term.coeff.get_mpz_t(), p);
    for (int i = 0; i < 3 && v != 0; ++i) {
      v = MulMod(v, PowMod(t[i], static_cast<std::uint64_t>(term.exps[i]), p), p);
    }
    acc = (acc + v) % p;
  }
  return acc;
}

// Canonical projective representative of x mod p, or nullopt if x = 0 mod p.
std::optional<ProjPoint> ProjectiveClass(const IntPoint3& x, std::uint64_t p) {
  ProjPoint r{Residue(x[0], p), Residue(x[1], p), Residue(x[2], p)};
  int lead = 0;
  while (lead < 3 && r[lead] == 0) ++lead;
  if (lead == 3) return std::nullopt;
  const std::uint64_t inv = PowMod(r[lead], p - 2, p);
  for (auto& c : r) c = MulMod(c, inv, p);
  return r;
}

IntPoint3 SignNormalize(const IntPoint3& x) {
  for (std::int64_t c : x) {
    if (c > 0) return x;
    if (c < 0) return {-x[0], -x[1], -x[2]};
  }
  return x;
}

BigInt Monomial(const IntPoint3& x, const Exponent3& e) {
  BigInt out = 1;
  for (int i = 0; i < 3; ++i) {
    BigInt base = static_cast<long>(x[i]);
    BigInt pw;
    mpz_pow_ui(pw.get_mpz_t(), base.get_mpz_t(), static_cast<unsigned long>(e[i]));
    out *= pw;
  }
  return out;
}

// Fraction-free Gaussian elimination.
BigInt BareissDeterminant(std::vector<std::vector<BigInt>> m) {
  const std::size_t n = m.size();
  if (n == 0) return 1;
  int sign = 1;
  BigInt prev = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (m[k][k] == 0) {
      std::size_t r = k + 1;
      while (r < n && m[r][k] == 0) ++r;
      if (r == n) return 0;
      std::swap(m[k], m[r]);
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      for (std::size_t j = k + 1; j < n; ++j) {
        m[i][j] = m[i][j] * m[k][k] - m[i][k] * m[k][j];
        mpz_divexact(m[i][j].get_mpz_t(), m[i][j].get_mpz_t(), prev.get_mpz_t());
      }
    }
    prev = m[k][k];
  }
  return sign * m[n - 1][n - 1];
}

struct Echelon {
  std::vector<std::vector<mpq_class>> rows;
  std::vector<std::size_t> pivots;
};

Echelon ReducedRowEchelon(const std::vector<IntPoint3>& points,
                          const ExponentSet& eset) {
  const std::size_t cols = eset.size();
  Echelon ech;
  for (const IntPoint3& x : points) {
    std::vector<mpq_class> row(cols);
    for (std::size_t c = 0; c < cols; ++c) row[c] = mpq_class(Monomial(x, eset.members[c]));
    ech.rows.push_back(std::move(row));
  }
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < ech.rows.size(); ++c) {
    std::size_t piv = r;
    while (piv < ech.rows.size() && ech.rows[piv][c] == 0) ++piv;
    if (piv == ech.rows.size()) continue;
    std::swap(ech.rows[r], ech.rows[piv]);
    const mpq_class inv = 1 / ech.rows[r][c];
    for (auto& v : ech.rows[r]) v *= inv;
    for (std::size_t i = 0; i < ech.rows.size(); ++i) {
      if (i == r || ech.rows[i][c] == 0) continue;
      const mpq_class factor = ech.rows[i][c];
      for (std::size_t j = c; j < cols; ++j) ech.rows[i][j] -= factor * ech.rows[r][j];
    }
    ech.pivots.push_back(c);
    ++r;
  }
  ech.rows.resize(r);
  return ech;
}

}  // namespace

double ExponentSet::Sigma(const Exponent3& e) const {
  return e[0] * b[0] + e[1] * b[1] + e[2] * b[2];
}

bool ExponentSet::Admits(const Exponent3& e) const {
  if (e[0] < 0 || e[1] < 0 || e[2] < 0) return false;
  if (e[0] + e[1] + e[2] != big_d) return false;
  if (Sigma(e) > a + Slack(a)) return false;
  return e[0] < f_triple[0] || e[1] < f_triple[1] || e[2] < f_triple[2];
}

ExponentSet BuildExponentSet(int big_d, double a, const std::array<double, 3>& b,
                             const Exponent3& f_triple) {
  ValidateWeights(big_d, b);
  if (f_triple[0] < 0 || f_triple[1] < 0 || f_triple[2] < 0 ||
      f_triple[0] + f_triple[1] + f_triple[2] < 1) {
    throw InputError("f must be non-negative with positive sum");
  }
  ExponentSet s;
  s.big_d = big_d;
  s.a = a;
  s.b = b;
  s.f_triple = f_triple;
  for (int e1 = 0; e1 <= big_d; ++e1) {
    for (int e2 = 0; e1 + e2 <= big_d; ++e2) {
      const Exponent3 e{e1, e2, big_d - e1 - e2};
      if (s.Admits(e)) s.members.push_back(e);
    }
  }
  return s;
}

std::vector<std::array<int, 2>> BuildMjk(int big_d, double a,
                                         const std::array<double, 3>& b, int j,
                                         int k) {
  ValidatePair(j, k);
  if (big_d < 0) throw InputError("D must be non-negative");
  std::vector<std::array<int, 2>> out;
  for (int mj = big_d; mj >= 0; --mj) {
    const int mk = big_d - mj;
    if (mj * b[j - 1] + mk * b[k - 1] <= a + Slack(a)) out.push_back({mj, mk});
  }
  return out;
}

SumCompareRecord SumCompare(int big_d, double a, const std::array<double, 3>& b,
                            const Exponent3& f_triple) {
  ValidateWeights(big_d, b);
  if (!(a > big_d * b[1] && a <= big_d * b[2] + Slack(a))) {
    throw InputError("A must satisfy D b2 < A <= D b3");
  }
  const ExponentSet eset = BuildExponentSet(big_d, a, b, f_triple);
  SumCompareRecord rec;
  rec.big_d = big_d;
  rec.a = a;
  rec.e_count = eset.size();
  for (const Exponent3& e : eset.members) rec.e_sigma_sum += eset.Sigma(e);

  const double dd = big_d;
  for (int i = 1; i <= 3; ++i) {
    SumCompareSlot& s = rec.slots[i - 1];
    s.i = i;
    s.jk = i == 1 ? std::array<int, 2>{2, 3}
                  : (i == 2 ? std::array<int, 2>{1, 3} : std::array<int, 2>{1, 2});
    for (const Exponent3& e : eset.members) {
      if (e[i - 1] < f_triple[i - 1]) {
        ++s.e_i_count;
        s.e_i_sigma_sum += eset.Sigma(e);
      }
    }
    const auto mjk = BuildMjk(big_d, a, b, s.jk[0], s.jk[1]);
    s.mjk_count = mjk.size();
    for (const auto& m : mjk) {
      s.mjk_tau_sum += m[0] * b[s.jk[0] - 1] + m[1] * b[s.jk[1] - 1];
    }
    for (int flip = 0; flip < 2; ++flip) {
      const double bg = b[s.jk[flip] - 1];
      const double bh = b[s.jk[1 - flip] - 1];
      if (!(bh < a / dd)) continue;
      s.closed_tau_sum += 0.5 * (a * a - dd * dd * bh * bh) / (bg - bh);
      s.closed_count += (a - dd * bh) / (bg - bh);
    }
    s.tau_residual = s.mjk_tau_sum - s.closed_tau_sum;
    s.shift_residual = s.e_i_sigma_sum - f_triple[i - 1] * s.mjk_tau_sum;
    rec.e_union_count += s.e_i_count;
    rec.e_closed_lower += f_triple[i - 1] * s.closed_count;
    rec.max_tau_residual = std::max(rec.max_tau_residual, std::abs(s.tau_residual));
  }
  for (const Exponent3& e : eset.members) {
    int hits = 0;
    for (int i = 0; i < 3; ++i) hits += e[i] < f_triple[i] ? 1 : 0;
    rec.e_overlap_count += static_cast<std::size_t>(hits * (hits - 1) / 2);
  }
  rec.e_relative_gap =
      rec.e_count == 0 ? 0.0
                       : std::abs(static_cast<double>(rec.e_count) - rec.e_closed_lower) /
                             static_cast<double>(rec.e_count);
  return rec;
}

std::int64_t BoundaryBandCount(int big_d, double a,
                               const std::array<double, 3>& b, int j, int k,
                               int degree) {
  ValidatePair(j, k);
  if (big_d < 0) throw InputError("D must be non-negative");
  if (degree < 1) throw InputError("degree must be positive");
  const double upper = a + degree * b[2];
  std::int64_t count = 0;
  for (int mj = 0; mj <= big_d; ++mj) {
    const double tau = mj * b[j - 1] + (big_d - mj) * b[k - 1];
    if (tau > a && tau <= upper) ++count;
  }
  return count;
}

std::vector<ProjPoint> ModPCurvePoints(const TernaryForm& form, std::uint64_t p) {
  if (!IsPrime(p)) throw InputError("p must be prime");
  if (p > 20000) throw GuardError("p too large for a projective plane scan");
  bool reduces = false;
  for (const Term3& t : form.terms()) {
    if (mpz_fdiv_ui(t.coeff.get_mpz_t(), p) != 0) reduces = true;
  }
  if (!reduces) throw InputError("p divides every coefficient");

  std::array<std::vector<Term3>, 3> partials;
  for (int v = 0; v < 3; ++v) partials[v] = form.Partial(v);

  std::vector<ProjPoint> out;
  auto consider = [&](const ProjPoint& t) {
    if (EvalMod(form.terms(), t, p) != 0) return;
    for (int v = 0; v < 3; ++v) {
      if (EvalMod(partials[v], t, p) != 0) {
        out.push_back(t);
        return;
      }
    }
  };
  consider({0, 0, 1});
  for (std::uint64_t c = 0; c < p; ++c) consider({0, 1, c});
  for (std::uint64_t b2 = 0; b2 < p; ++b2) {
    for (std::uint64_t c = 0; c < p; ++c) consider({1, b2, c});
  }
  return out;
}

bool OnLine(const IntPoint3& x, const ProjPoint& t, std::uint64_t p) {
  const auto cls = ProjectiveClass(x, p);
  if (!cls) return false;
  const auto tc = ProjectiveClass(
      {static_cast<std::int64_t>(t[0]), static_cast<std::int64_t>(t[1]),
       static_cast<std::int64_t>(t[2])},
      p);
  return tc && *cls == *tc;
}

std::vector<ModPFiber> FibersFromPoints(const std::vector<IntPoint3>& zeros,
                                        const IntPoint3& box, std::uint64_t p,
                                        const std::vector<ProjPoint>& ts) {
  std::vector<ModPFiber> fibers;
  std::map<ProjPoint, std::size_t> index;
  for (const ProjPoint& t : ts) {
    index.emplace(t, fibers.size());
    fibers.push_back({p, t, box, {}});
  }
  for (const IntPoint3& x : zeros) {
    const auto cls = ProjectiveClass(x, p);
    if (!cls) continue;
    const auto it = index.find(*cls);
    if (it != index.end()) fibers[it->second].points.push_back(x);
  }
  for (auto& f : fibers) std::sort(f.points.begin(), f.points.end());
  return fibers;
}

ModPFiber Fiber(const TernaryForm& form, const IntPoint3& box, std::uint64_t p,
                const ProjPoint& t) {
  ModPFiber fiber{p, t, box, {}};
  for (const IntPoint3& x : PrimitiveZeros(form, box)) {
    if (OnLine(x, t, p)) fiber.points.push_back(x);
  }
  return fiber;
}

std::vector<IntPoint3> SignNormalizedPoints(const std::vector<IntPoint3>& points) {
  std::vector<IntPoint3> out;
  out.reserve(points.size());
  for (const IntPoint3& x : points) out.push_back(SignNormalize(x));
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

DeterminantRecord DeterminantDelta(const ModPFiber& fiber,
                                   const ExponentSet& eset) {
  const std::size_t e = eset.size();
  if (e == 0) throw InputError("empty exponent set");
  std::vector<IntPoint3> rows = SignNormalizedPoints(fiber.points);
  if (rows.size() < e) throw InputError("fiber has fewer than E points");
  rows.resize(e);

  std::vector<std::vector<BigInt>> m(e, std::vector<BigInt>(e));
  for (std::size_t r = 0; r < e; ++r) {
    for (std::size_t c = 0; c < e; ++c) m[r][c] = Monomial(rows[r], eset.members[c]);
  }

  DeterminantRecord rec;
  rec.e = e;
  rec.rows = rows;
  rec.delta = BareissDeterminant(std::move(m));

  BigInt bound;
  mpz_ui_pow_ui(bound.get_mpz_t(), e, e);
  rec.log_bound = static_cast<double>(e) * std::log(static_cast<double>(e));
  for (const Exponent3& ex : eset.members) {
    bound *= Monomial({std::abs(fiber.box[0]), std::abs(fiber.box[1]),
                       std::abs(fiber.box[2])},
                      ex);
    for (int i = 0; i < 3; ++i) {
      rec.log_bound += ex[i] * std::log(static_cast<double>(fiber.box[i]));
    }
  }
  const BigInt abs_delta = abs(rec.delta);
  rec.bound_holds = abs_delta <= bound;

  if (rec.delta == 0) {
    rec.log_abs_delta = -std::numeric_limits<double>::infinity();
    return rec;
  }
  long exp2 = 0;
  const double mant = mpz_get_d_2exp(&exp2, abs_delta.get_mpz_t());
  rec.log_abs_delta = std::log(mant) + static_cast<double>(exp2) * std::log(2.0);

  BigInt rest;
  BigInt prime = static_cast<unsigned long>(fiber.p);
  rec.nu_p = static_cast<std::int64_t>(
      mpz_remove(rest.get_mpz_t(), abs_delta.get_mpz_t(), prime.get_mpz_t()));
  rec.nu_ratio = static_cast<double>(*rec.nu_p) / static_cast<double>(e * e);
  return rec;
}

std::size_t EvaluationRank(const ModPFiber& fiber, const ExponentSet& eset) {
  return ReducedRowEchelon(SignNormalizedPoints(fiber.points), eset).pivots.size();
}

std::optional<AuxiliaryResult> AuxiliaryForm(const TernaryForm& f,
                                             const ModPFiber& fiber,
                                             const ExponentSet& eset) {
  const std::size_t cols = eset.size();
  if (cols == 0) return std::nullopt;
  const Echelon ech = ReducedRowEchelon(SignNormalizedPoints(fiber.points), eset);
  if (ech.pivots.size() == cols) return std::nullopt;

  std::size_t free_col = 0;
  while (std::find(ech.pivots.begin(), ech.pivots.end(), free_col) != ech.pivots.end()) {
    ++free_col;
  }
  std::vector<mpq_class> v(cols, 0);
  v[free_col] = 1;
  for (std::size_t r = 0; r < ech.pivots.size(); ++r) v[ech.pivots[r]] = -ech.rows[r][free_col];

  BigInt den = 1;
  for (const auto& q : v) mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), q.get_den_mpz_t());
  std::vector<Term3> terms;
  BigInt g = 0;
  for (std::size_t c = 0; c < cols; ++c) {
    if (v[c] == 0) continue;
    const mpq_class scaled = v[c] * den;
    terms.push_back({eset.members[c], scaled.get_num()});
    mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), terms.back().coeff.get_mpz_t());
  }
  const int sign = sgn(terms.front().coeff) < 0 ? -1 : 1;
  for (auto& t : terms) {
    mpz_divexact(t.coeff.get_mpz_t(), t.coeff.get_mpz_t(), g.get_mpz_t());
    t.coeff *= sign;
  }

  AuxiliaryResult res{TernaryForm::FromTerms(std::move(terms)), ech.pivots.size(),
                      true, false};
  for (const IntPoint3& x : fiber.points) {
    if (res.form.Evaluate(x) != 0) res.vanishes_on_fiber = false;
  }
  res.divisible_by_f = Divides(f, res.form);
  return res;
}

TargetPrime ChooseTargetPrime(const TernaryForm& form, double b3) {
  if (!(b3 >= 1.0)) throw InputError("B3 must be at least 1");
  const BigInt norm = form.MaxAbsCoefficient();
  const double l = std::log(norm.get_d()) + std::log(b3);
  TargetPrime tp;
  tp.size = l * l;
  tp.p = NextPrime(static_cast<std::uint64_t>(std::ceil(tp.size)));
  return tp;
}

VanishingScan ScanVanishing(const TernaryForm& form, const IntPoint3& box,
                            int big_d, double a,
                            const std::vector<std::uint64_t>& primes) {
  if (!(1 <= box[0] && box[0] < box[1] && box[1] < box[2])) {
    throw InputError("detlab box needs 1 <= B1 < B2 < B3");
  }
  if (!std::is_sorted(primes.begin(), primes.end())) {
    throw InputError("primes must be ascending");
  }
  const BoxTriple real_box{static_cast<double>(box[0]), static_cast<double>(box[1]),
                           static_cast<double>(box[2])};
  const MaximalMonomial mm = ComputeT(form, real_box);
  const std::array<double, 3> b{std::log(real_box[0]), std::log(real_box[1]),
                                std::log(real_box[2])};
  // B1 = 1 gives b1 = 0; the weights must stay strictly positive.
  if (!(b[0] > 0.0)) throw InputError("detlab box needs B1 >= 2");

  VanishingScan scan;
  scan.box = box;
  scan.eset = BuildExponentSet(big_d, a, b, mm.triple);
  scan.log_t = mm.log_t;
  const int d = form.degree();
  if (d * b[0] + d * b[1] <= mm.log_t) {
    scan.theory_log_threshold = PrimeThresholdLog(b, d, mm.log_t);
  }
  try {
    scan.f_of_a = FOfA(ComputeOptimizationConstants(b, d, mm.log_t, big_d), a);
  } catch (const Error&) {
    scan.f_of_a.reset();
  }

  const std::vector<IntPoint3> zeros = PrimitiveZeros(form, box);
  const std::size_t e = scan.eset.size();
  for (std::uint64_t p : primes) {
    const auto ts = ModPCurvePoints(form, p);
    for (const ModPFiber& fiber : FibersFromPoints(zeros, box, p, ts)) {
      VanishingTrace tr;
      tr.p = p;
      tr.t = fiber.t;
      tr.fiber_size = SignNormalizedPoints(fiber.points).size();
      if (tr.fiber_size == 0) continue;
      tr.tested = e > 0 && tr.fiber_size >= e;
      if (tr.tested) tr.det = DeterminantDelta(fiber, scan.eset);
      tr.rank = EvaluationRank(fiber, scan.eset);
      tr.auxiliary = AuxiliaryForm(form, fiber, scan.eset);
      scan.traces.push_back(std::move(tr));
    }
  }

  // Walk down from the largest prime while every tested determinant is zero.
  std::optional<std::uint64_t> threshold;
  for (auto it = primes.rbegin(); it != primes.rend(); ++it) {
    bool all_zero = true;
    for (const auto& tr : scan.traces) {
      if (tr.p == *it && tr.det && !tr.det->vanished()) all_zero = false;
    }
    if (!all_zero) break;
    threshold = *it;
  }
  scan.empirical_threshold = threshold;
  if (threshold) {
    for (const auto& tr : scan.traces) {
      if (!tr.det) continue;
      if (tr.p >= *threshold) {
        ++scan.tested_above;
      } else if (!tr.det->vanished()) {
        ++scan.nonzero_below;
      }
    }
  }
  return scan;
}

}  // namespace lopsided
