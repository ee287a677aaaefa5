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

#include <nlohmann/json.hpp>

#include <cctype>
#include <string>

#include "lopsided/errors.hpp"
#include "lopsided/forms.hpp"

namespace lopsided {
namespace {

// Recursive descent over: expr := [+-] term {(+|-) term};
// term := factor {'*' factor}; factor := integer | x1|x2|x3 ['^' integer].
class Parser {
 public:
  explicit Parser(std::string_view text) {
    for (char c : text) {
      if (!std::isspace(static_cast<unsigned char>(c))) text_.push_back(c);
    }
  }

  std::vector<Term3> Parse() {
    if (text_.empty()) throw SyntaxError("empty form text");
    std::vector<Term3> terms;
    bool negative = false;
    if (Peek() == '+' || Peek() == '-') negative = Get() == '-';
    terms.push_back(ParseTerm(negative));
    while (pos_ < text_.size()) {
      const char op = Get();
      if (op != '+' && op != '-') Fail("expected '+' or '-'");
      terms.push_back(ParseTerm(op == '-'));
    }
    return terms;
  }

 private:
  char Peek() const { return pos_ < text_.size() ? text_[pos_] : '\0'; }
  char Get() { return pos_ < text_.size() ? text_[pos_++] : '\0'; }

  [[noreturn]] void Fail(const std::string& what) const {
    throw SyntaxError(what + " at offset " + std::to_string(pos_) +
                      " of \"" + text_ + "\"");
  }

  std::string Digits() {
    std::string out;
    while (std::isdigit(static_cast<unsigned char>(Peek()))) out.push_back(Get());
    if (out.empty()) Fail("expected digits");
    return out;
  }

  int SmallInt() {
    const std::string d = Digits();
    if (d.size() > 6) Fail("exponent too large");
    return std::stoi(d);
  }

  Term3 ParseTerm(bool negative) {
    Term3 t;
    t.coeff = negative ? -1 : 1;
    ParseFactor(t);
    while (Peek() == '*') {
      Get();
      ParseFactor(t);
    }
    return t;
  }

  void ParseFactor(Term3& t) {
    const char c = Peek();
    if (std::isdigit(static_cast<unsigned char>(c))) {
      t.coeff *= BigInt(Digits());
      return;
    }
    if (c != 'x') Fail("expected a coefficient or x1, x2, x3");
    Get();
    const char v = Get();
    if (v < '1' || v > '3') Fail("unknown variable");
    int power = 1;
    if (Peek() == '^') {
      Get();
      power = SmallInt();
    }
    t.exps[v - '1'] += power;
  }

  std::string text_;
  std::size_t pos_ = 0;
};

BigInt JsonCoefficient(const nlohmann::json& c) {
  if (c.is_number_integer()) {
    return c.is_number_unsigned() ? BigInt(std::to_string(c.get<std::uint64_t>()))
                                  : BigInt(std::to_string(c.get<std::int64_t>()));
  }
  if (c.is_string()) {
    BigInt out;
    if (out.set_str(c.get<std::string>(), 10) != 0) {
      throw SyntaxError("coefficient string is not a decimal integer");
    }
    return out;
  }
  throw SyntaxError("coefficient must be an integer or a decimal string");
}

}  // namespace

TernaryForm ParseForm(std::string_view text) {
  return TernaryForm::FromTerms(Parser(text).Parse());
}

TernaryForm ParseFormJson(std::string_view json_text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::parse_error& e) {
    throw SyntaxError(std::string("invalid JSON: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("terms") || !doc["terms"].is_array()) {
    throw SyntaxError("expected an object with a \"terms\" array");
  }
  std::vector<Term3> terms;
  for (const auto& entry : doc["terms"]) {
    if (!entry.is_array() || entry.size() != 4) {
      throw SyntaxError("each term must be [e1, e2, e3, coeff]");
    }
    Term3 t;
    for (int i = 0; i < 3; ++i) {
      if (!entry[i].is_number_integer()) {
        throw SyntaxError("exponents must be integers");
      }
      const auto e = entry[i].get<std::int64_t>();
      if (e < 0) throw InputError("negative exponent");
      if (e > 1'000'000) throw InputError("exponent too large");
      t.exps[i] = static_cast<int>(e);
    }
    t.coeff = JsonCoefficient(entry[3]);
    terms.push_back(std::move(t));
  }
  return TernaryForm::FromTerms(std::move(terms));
}

std::string FormToJson(const TernaryForm& form) {
  nlohmann::json terms = nlohmann::json::array();
  for (const Term3& t : form.terms()) {
    nlohmann::json coeff;
    if (t.coeff.fits_slong_p()) {
      coeff = t.coeff.get_si();
    } else {
      coeff = t.coeff.get_str();
    }
    terms.push_back({t.exps[0], t.exps[1], t.exps[2], coeff});
  }
  return nlohmann::json{{"terms", terms}}.dump();
}

TernaryForm ParseFormAny(std::string_view text) {
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first != std::string_view::npos && text[first] == '{') {
    return ParseFormJson(text);
  }
  return ParseForm(text);
}

}  // namespace lopsided
