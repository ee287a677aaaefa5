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

// Exact integer ternary and binary forms.
//
// Forms are sparse: a sorted list of (exponent, coefficient) pairs with
// arbitrary-precision coefficients. All values are immutable once built.

#ifndef LOPSIDED_FORMS_HPP_
#define LOPSIDED_FORMS_HPP_

#include <gmpxx.h>

#include <array>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace lopsided {

using BigInt = mpz_class;
using Exponent3 = std::array<int, 3>;
using IntPoint3 = std::array<std::int64_t, 3>;
using IntPair = std::array<std::int64_t, 2>;

// Real box side lengths (P1, P2, P3) with 1 <= P1 <= P2 <= P3.
using BoxTriple = std::array<double, 3>;

struct Term3 {
  Exponent3 exps{};
  BigInt coeff;

  friend bool operator==(const Term3&, const Term3&) = default;
};

struct Term2 {
  std::array<int, 2> exps{};
  BigInt coeff;

  friend bool operator==(const Term2&, const Term2&) = default;
};

class TernaryForm {
 public:
  // Merges duplicate exponent triples and drops zero coefficients.
  // Throws ZeroFormError, InhomogeneousError, or InputError (negative
  // exponents).
  static TernaryForm FromTerms(std::vector<Term3> terms);

  int degree() const noexcept { return degree_; }
  // Sorted lexicographically by exponent triple.
  const std::vector<Term3>& terms() const noexcept { return terms_; }

  BigInt Evaluate(const std::array<BigInt, 3>& x) const;
  BigInt Evaluate(const IntPoint3& x) const;

  // Terms of the partial derivative in x_{var+1}, var in {0, 1, 2}. Empty
  // when the derivative vanishes identically.
  std::vector<Term3> Partial(int var) const;

  BigInt MaxAbsCoefficient() const;
  std::string ToString() const;

  friend TernaryForm operator*(const TernaryForm& a, const TernaryForm& b);
  friend bool operator==(const TernaryForm&, const TernaryForm&) = default;

 private:
  TernaryForm(int degree, std::vector<Term3> terms)
      : degree_(degree), terms_(std::move(terms)) {}

  int degree_ = 0;
  std::vector<Term3> terms_;
};

class BinaryForm {
 public:
  static BinaryForm FromTerms(std::vector<Term2> terms);

  int degree() const noexcept { return degree_; }
  const std::vector<Term2>& terms() const noexcept { return terms_; }

  BigInt Evaluate(const BigInt& v1, const BigInt& v2) const;
  // Coefficient of v1^e1 v2^e2, zero when absent.
  BigInt Coefficient(int e1, int e2) const;
  std::string ToString(std::string_view var1 = "v1",
                       std::string_view var2 = "v2") const;

  friend bool operator==(const BinaryForm&, const BinaryForm&) = default;

 private:
  BinaryForm(int degree, std::vector<Term2> terms)
      : degree_(degree), terms_(std::move(terms)) {}

  int degree_ = 0;
  std::vector<Term2> terms_;
};

// Parses sums of monomials such as "x1^2*x3 - 3*x2^3". Throws SyntaxError,
// InhomogeneousError, ZeroFormError.
TernaryForm ParseForm(std::string_view text);

// Parses {"terms": [[e1, e2, e3, coeff], ...]}. Coefficients may be JSON
// integers or decimal strings.
TernaryForm ParseFormJson(std::string_view json_text);
std::string FormToJson(const TernaryForm& form);

// Accepts either syntax: text starting with '{' is read as JSON.
TernaryForm ParseFormAny(std::string_view text);

struct MaximalMonomial {
  double log_t = 0.0;
  Exponent3 triple{};
  // Every stored monomial attaining the maximum (within relative 1e-12).
  std::vector<Exponent3> maximizers;
  bool tie() const noexcept { return maximizers.size() > 1; }
};

void ValidateBox(const BoxTriple& box);

// T = max over monomials of P1^e1 P2^e2 P3^e3. Ties go to the
// lexicographically largest (e3, e2, e1).
MaximalMonomial ComputeT(const TernaryForm& form, const BoxTriple& box);

// f(v1, v2) = sum_{0 <= j < k/2} C(k, 2j+1) v1^{2j} v2^{k-2j-1}.
BinaryForm EqualSumsBinaryForm(int k);

// Expansion of 2^{k-1}((u1 e1[0] + u2 e2[0])^k - (u1 e1[1] + u2 e2[1])^k),
// i.e. 2^{k-1}(w^k - y^k) under (w, y) = u1 e1 + u2 e2. Variables are
// (u1, u2). Throws DegenerateError when e1, e2 are dependent.
BinaryForm SubstituteLatticeBasis(int k, const IntPair& e1, const IntPair& e2);

// True iff g = f * h for some integer form h.
bool Divides(const TernaryForm& f, const TernaryForm& g);

// All primitive integer zeros x of the form with |x_i| <= box[i], sorted
// lexicographically. Scans (x1, x2) and solves exactly for x3. Throws
// GuardError if more than max_pairs (x1, x2) pairs would be scanned.
std::vector<IntPoint3> PrimitiveZeros(const TernaryForm& form,
                                      const IntPoint3& box,
                                      std::uint64_t max_pairs = 50'000'000);

}  // namespace lopsided

#endif  // LOPSIDED_FORMS_HPP_
