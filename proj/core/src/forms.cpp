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

#include "lopsided/forms.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <numeric>
#include <sstream>

#include "integer_roots.hpp"
#include "lopsided/errors.hpp"

namespace lopsided {
namespace {

using internal::Int128;

int TermDegree(const Exponent3& e) { return e[0] + e[1] + e[2]; }

BigInt PowBig(const BigInt& base, int exp) {
  BigInt out;
  mpz_pow_ui(out.get_mpz_t(), base.get_mpz_t(), static_cast<unsigned long>(exp));
  return out;
}

BigInt Binomial(int n, int k) {
  BigInt out;
  mpz_bin_uiui(out.get_mpz_t(), static_cast<unsigned long>(n),
               static_cast<unsigned long>(k));
  return out;
}

void AppendMonomial(std::ostringstream& os, const BigInt& coeff, bool first,
                    const std::vector<std::pair<std::string, int>>& factors) {
  const bool negative = sgn(coeff) < 0;
  const BigInt mag = abs(coeff);
  if (first) {
    if (negative) os << "-";
  } else {
    os << (negative ? " - " : " + ");
  }
  bool wrote = false;
  if (mag != 1 || std::all_of(factors.begin(), factors.end(),
                              [](const auto& f) { return f.second == 0; })) {
    os << mag.get_str();
    wrote = true;
  }
  for (const auto& [name, power] : factors) {
    if (power == 0) continue;
    if (wrote) os << "*";
    os << name;
    if (power > 1) os << "^" << power;
    wrote = true;
  }
}

}  // namespace

TernaryForm TernaryForm::FromTerms(std::vector<Term3> terms) {
  std::map<Exponent3, BigInt> merged;
  for (auto& t : terms) {
    if (t.exps[0] < 0 || t.exps[1] < 0 || t.exps[2] < 0) {
      throw InputError("negative exponent in form term");
    }
    merged[t.exps] += t.coeff;
  }
  std::vector<Term3> kept;
  for (auto& [e, c] : merged) {
    if (sgn(c) != 0) kept.push_back({e, c});
  }
  if (kept.empty()) throw ZeroFormError("form is identically zero");
  const int d = TermDegree(kept.front().exps);
  for (const auto& t : kept) {
    if (TermDegree(t.exps) != d) {
      throw InhomogeneousError("form is not homogeneous");
    }
  }
  if (d < 1) throw InputError("form must have degree at least 1");
  return TernaryForm(d, std::move(kept));
}

BigInt TernaryForm::Evaluate(const std::array<BigInt, 3>& x) const {
  BigInt acc = 0;
  for (const auto& t : terms_) {
    acc += t.coeff * PowBig(x[0], t.exps[0]) * PowBig(x[1], t.exps[1]) *
           PowBig(x[2], t.exps[2]);
  }
  return acc;
}

BigInt TernaryForm::Evaluate(const IntPoint3& x) const {
  return Evaluate(std::array<BigInt, 3>{BigInt(static_cast<long>(x[0])),
                                        BigInt(static_cast<long>(x[1])),
                                        BigInt(static_cast<long>(x[2]))});
}

std::vector<Term3> TernaryForm::Partial(int var) const {
  std::vector<Term3> out;
  for (const auto& t : terms_) {
    if (t.exps[var] == 0) continue;
    Term3 d = t;
    d.coeff *= t.exps[var];
    d.exps[var] -= 1;
    out.push_back(std::move(d));
  }
  return out;
}

BigInt TernaryForm::MaxAbsCoefficient() const {
  BigInt best = 0;
  for (const auto& t : terms_) best = std::max(best, BigInt(abs(t.coeff)));
  return best;
}

std::string TernaryForm::ToString() const {
  std::ostringstream os;
  bool first = true;
  for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
    AppendMonomial(os, it->coeff, first,
                   {{"x1", it->exps[0]}, {"x2", it->exps[1]}, {"x3", it->exps[2]}});
    first = false;
  }
  return os.str();
}

TernaryForm operator*(const TernaryForm& a, const TernaryForm& b) {
  std::vector<Term3> prod;
  prod.reserve(a.terms_.size() * b.terms_.size());
  for (const auto& s : a.terms_) {
    for (const auto& t : b.terms_) {
      prod.push_back({{s.exps[0] + t.exps[0], s.exps[1] + t.exps[1],
                       s.exps[2] + t.exps[2]},
                      s.coeff * t.coeff});
    }
  }
  return TernaryForm::FromTerms(std::move(prod));
}

BinaryForm BinaryForm::FromTerms(std::vector<Term2> terms) {
  std::map<std::array<int, 2>, BigInt> merged;
  for (auto& t : terms) {
    if (t.exps[0] < 0 || t.exps[1] < 0) {
      throw InputError("negative exponent in binary form term");
    }
    merged[t.exps] += t.coeff;
  }
  std::vector<Term2> kept;
  for (auto& [e, c] : merged) {
    if (sgn(c) != 0) kept.push_back({e, c});
  }
  if (kept.empty()) throw ZeroFormError("binary form is identically zero");
  const int d = kept.front().exps[0] + kept.front().exps[1];
  for (const auto& t : kept) {
    if (t.exps[0] + t.exps[1] != d) {
      throw InhomogeneousError("binary form is not homogeneous");
    }
  }
  if (d < 1) throw InputError("binary form must have degree at least 1");
  return BinaryForm(d, std::move(kept));
}

BigInt BinaryForm::Evaluate(const BigInt& v1, const BigInt& v2) const {
  BigInt acc = 0;
  for (const auto& t : terms_) {
    acc += t.coeff * PowBig(v1, t.exps[0]) * PowBig(v2, t.exps[1]);
  }
  return acc;
}

BigInt BinaryForm::Coefficient(int e1, int e2) const {
  for (const auto& t : terms_) {
    if (t.exps[0] == e1 && t.exps[1] == e2) return t.coeff;
  }
  return 0;
}

std::string BinaryForm::ToString(std::string_view var1,
                                 std::string_view var2) const {
  std::ostringstream os;
  bool first = true;
  for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
    AppendMonomial(os, it->coeff, first,
                   {{std::string(var1), it->exps[0]},
                    {std::string(var2), it->exps[1]}});
    first = false;
  }
  return os.str();
}

void ValidateBox(const BoxTriple& box) {
  for (double p : box) {
    if (!std::isfinite(p) || p < 1.0) {
      throw InputError("box sides must be finite and at least 1");
    }
  }
  if (!(box[0] <= box[1] && box[1] <= box[2])) {
    throw InputError("box sides must satisfy P1 <= P2 <= P3");
  }
}

MaximalMonomial ComputeT(const TernaryForm& form, const BoxTriple& box) {
  ValidateBox(box);
  const std::array<double, 3> logs{std::log(box[0]), std::log(box[1]),
                                   std::log(box[2])};
  auto log_size = [&](const Exponent3& e) {
    return e[0] * logs[0] + e[1] * logs[1] + e[2] * logs[2];
  };
  double best = -INFINITY;
  for (const auto& t : form.terms()) best = std::max(best, log_size(t.exps));
  const double tol = 1e-12 * std::max(1.0, std::abs(best));

  MaximalMonomial out;
  out.log_t = best;
  for (const auto& t : form.terms()) {
    if (best - log_size(t.exps) <= tol) out.maximizers.push_back(t.exps);
  }
  auto key = [](const Exponent3& e) { return Exponent3{e[2], e[1], e[0]}; };
  out.triple = *std::max_element(
      out.maximizers.begin(), out.maximizers.end(),
      [&](const Exponent3& a, const Exponent3& b) { return key(a) < key(b); });
  return out;
}

BinaryForm EqualSumsBinaryForm(int k) {
  if (k < 2) throw InputError("k must be at least 2");
  std::vector<Term2> terms;
  for (int j = 0; 2 * j < k; ++j) {
    terms.push_back({{2 * j, k - 2 * j - 1}, Binomial(k, 2 * j + 1)});
  }
  return BinaryForm::FromTerms(std::move(terms));
}

BinaryForm SubstituteLatticeBasis(int k, const IntPair& e1, const IntPair& e2) {
  if (k < 1) throw InputError("k must be positive");
  const BigInt a = static_cast<long>(e1[0]);
  const BigInt b = static_cast<long>(e2[0]);
  const BigInt c = static_cast<long>(e1[1]);
  const BigInt d = static_cast<long>(e2[1]);
  if (a * d - b * c == 0) throw DegenerateError("lattice basis is degenerate");
  const BigInt scale = PowBig(BigInt(2), k - 1);
  std::vector<Term2> terms;
  for (int i = 0; i <= k; ++i) {
    const BigInt w_part = PowBig(a, i) * PowBig(b, k - i);
    const BigInt y_part = PowBig(c, i) * PowBig(d, k - i);
    terms.push_back({{i, k - i}, scale * Binomial(k, i) * (w_part - y_part)});
  }
  return BinaryForm::FromTerms(std::move(terms));
}

bool Divides(const TernaryForm& f, const TernaryForm& g) {
  if (g.degree() < f.degree()) return false;
  using Remainder = std::map<Exponent3, mpq_class, std::greater<>>;
  Remainder rem;
  for (const auto& t : g.terms()) rem[t.exps] = mpq_class(t.coeff);

  // Lex-leading term of f; a single generator is its own Groebner basis, so
  // the remainder vanishes iff f divides g over Q.
  const Term3& lead = f.terms().back();
  const mpq_class lead_coeff(lead.coeff);
  std::map<Exponent3, mpq_class> quotient;

  while (!rem.empty()) {
    const auto [m, c] = *rem.begin();
    Exponent3 shift{};
    for (int i = 0; i < 3; ++i) {
      shift[i] = m[i] - lead.exps[i];
      if (shift[i] < 0) return false;
    }
    const mpq_class q = c / lead_coeff;
    quotient[shift] += q;
    for (const auto& t : f.terms()) {
      const Exponent3 e{t.exps[0] + shift[0], t.exps[1] + shift[1],
                        t.exps[2] + shift[2]};
      auto it = rem.try_emplace(e, 0).first;
      it->second -= q * mpq_class(t.coeff);
      if (sgn(it->second) == 0) rem.erase(it);
    }
  }
  for (auto& [e, q] : quotient) {
    q.canonicalize();
    if (q.get_den() != 1) return false;
  }
  return true;
}

namespace {

// Caller guarantees |v| < 2^126.
// Per-e3 coefficient polynomials of the form, as functions of (x1, x2).
template <class V>
struct SlicedForm {
  std::vector<std::vector<std::pair<std::array<int, 2>, V>>> by_e3;

  static SlicedForm Build(const TernaryForm& form) {
    SlicedForm s;
    int max_e3 = 0;
    for (const auto& t : form.terms()) max_e3 = std::max(max_e3, t.exps[2]);
    s.by_e3.resize(max_e3 + 1);
    for (const auto& t : form.terms()) {
      V c;
      if constexpr (std::is_same_v<V, Int128>) {
        c = internal::ToInt128(t.coeff);
      } else {
        c = t.coeff;
      }
      s.by_e3[t.exps[2]].push_back({{t.exps[0], t.exps[1]}, c});
    }
    return s;
  }

  std::vector<V> Slice(const std::vector<V>& pow1,
                       const std::vector<V>& pow2) const {
    std::vector<V> q(by_e3.size(), V(0));
    for (std::size_t j = 0; j < by_e3.size(); ++j) {
      for (const auto& [e, c] : by_e3[j]) q[j] += c * pow1[e[0]] * pow2[e[1]];
    }
    return q;
  }
};

template <class V>
std::vector<V> Powers(std::int64_t x, int max_exp) {
  std::vector<V> p(max_exp + 1);
  p[0] = 1;
  for (int i = 1; i <= max_exp; ++i) p[i] = p[i - 1] * static_cast<V>(x);
  return p;
}

std::int64_t Gcd3(std::int64_t a, std::int64_t b, std::int64_t c) {
  return std::gcd(std::gcd(std::abs(a), std::abs(b)), std::abs(c));
}

template <class V>
std::vector<IntPoint3> ZerosImpl(const TernaryForm& form, const IntPoint3& box) {
  const SlicedForm<V> sliced = SlicedForm<V>::Build(form);
  const int d = form.degree();
  std::vector<IntPoint3> out;
  for (std::int64_t x1 = -box[0]; x1 <= box[0]; ++x1) {
    const auto p1 = Powers<V>(x1, d);
    for (std::int64_t x2 = -box[1]; x2 <= box[1]; ++x2) {
      const auto p2 = Powers<V>(x2, d);
      std::vector<V> q = sliced.Slice(p1, p2);
      while (!q.empty() && internal::Sign(q.back()) == 0) q.pop_back();
      if (q.empty()) {
        for (std::int64_t x3 = -box[2]; x3 <= box[2]; ++x3) {
          if (Gcd3(x1, x2, x3) == 1) out.push_back({x1, x2, x3});
        }
        continue;
      }
      if (q.size() == 1) continue;
      internal::IntegerRootFinder<V> finder(std::move(q));
      for (std::int64_t x3 : finder.Roots(-box[2], box[2])) {
        if (Gcd3(x1, x2, x3) == 1) out.push_back({x1, x2, x3});
      }
    }
  }
  return out;
}

// Whether every intermediate of the exact root search fits in 128 bits.
bool FitsInt128(const TernaryForm& form, const IntPoint3& box) {
  const int d = form.degree();
  BigInt bound = 0;
  for (const auto& t : form.terms()) {
    BigInt m = abs(t.coeff);
    for (int i = 0; i < 3; ++i) {
      m *= PowBig(BigInt(static_cast<long>(box[i] + d + 1)), t.exps[i]);
    }
    bound += m;
  }
  bound *= PowBig(BigInt(2), d + 1);
  return mpz_sizeinbase(bound.get_mpz_t(), 2) < 120;
}

}  // namespace

std::vector<IntPoint3> PrimitiveZeros(const TernaryForm& form,
                                      const IntPoint3& box,
                                      std::uint64_t max_pairs) {
  for (auto b : box) {
    if (b < 0) throw InputError("box bounds must be non-negative");
  }
  const double pairs = (2.0 * box[0] + 1.0) * (2.0 * box[1] + 1.0);
  if (pairs > static_cast<double>(max_pairs)) {
    throw GuardError("box too large for exhaustive scan");
  }
  if (FitsInt128(form, box)) return ZerosImpl<Int128>(form, box);
  return ZerosImpl<BigInt>(form, box);
}

}  // namespace lopsided
