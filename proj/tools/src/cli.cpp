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

#include "lopsided/cli.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>
#include <set>
#include <sstream>

#include "lopsided/arith.hpp"
#include "lopsided/counters.hpp"
#include "lopsided/detlab.hpp"
#include "lopsided/errors.hpp"
#include "lopsided/exponent_calculus.hpp"
#include "lopsided/forms.hpp"

namespace lopsided::cli {
namespace {

using nlohmann::json;

const std::set<std::string> kCommands{"bounds",  "theta-table", "count-curve",
                                      "count-sums", "detlab", "xi-sum", "fit"};

std::string CsvField(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string Trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> SplitComma(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(Trim(item));
  if (out.empty() || std::any_of(out.begin(), out.end(),
                                 [](const std::string& s) { return s.empty(); })) {
    throw InputError("malformed list \"" + text + "\"");
  }
  return out;
}

double ToDouble(const std::string& s) {
  double v = 0.0;
  const auto r = std::from_chars(s.data(), s.data() + s.size(), v);
  if (r.ec != std::errc() || r.ptr != s.data() + s.size()) {
    throw InputError("not a number: \"" + s + "\"");
  }
  return v;
}

std::uint64_t ToUint(const std::string& s) {
  std::uint64_t v = 0;
  const auto r = std::from_chars(s.data(), s.data() + s.size(), v);
  if (r.ec != std::errc() || r.ptr != s.data() + s.size()) {
    throw InputError("not a non-negative integer: \"" + s + "\"");
  }
  return v;
}

template <typename T>
T Field(const json& doc, const char* key) {
  try {
    return doc.at(key).get<T>();
  } catch (const json::exception& e) {
    throw InputError(std::string("config field \"") + key + "\": " + e.what());
  }
}

std::vector<std::uint64_t> PrimesBetween(std::uint64_t lo, std::uint64_t hi) {
  std::vector<std::uint64_t> out;
  for (std::uint64_t p : PrimesUpTo(hi)) {
    if (p >= lo && p % 2 == 1) out.push_back(p);
  }
  return out;
}

std::string RowFromCount(const CountResult& r, int k, std::uint64_t x) {
  std::ostringstream os;
  os << k << ',' << x << ',' << r.total << ',' << r.trivial << ',' << r.nontrivial
     << ',' << FormatDouble(r.elapsed, 6) << '\n';
  return os.str();
}

json CountJson(const CountResult& r) {
  json reps = json::array();
  for (const auto& q : r.representatives) reps.push_back({q.w, q.x, q.y, q.z});
  return {{"label", r.label},         {"parameters", r.parameters},
          {"total", r.total},         {"trivial", r.trivial},
          {"nontrivial", r.nontrivial}, {"elapsed", r.elapsed},
          {"representatives", reps}};
}

json ReportJson(const BoundReport& r) {
  return {{"bound", r.bound},
          {"exponent", r.exponent},
          {"formula_exponent",
           std::isfinite(r.formula_exponent) ? json(r.formula_exponent) : json(nullptr)},
          {"applicable", r.applicable},
          {"diagnostics", r.diagnostics}};
}

std::string RunBounds(const ExperimentConfig& c, std::string& message) {
  std::ostringstream os;
  os << "alpha,beta,tau,d,uniform,thin_box,lopsided,applicable\n";
  json rows = json::array();
  auto emit = [&](const BoxProfile& p) {
    const BoundReport uni = BoundUniform(p);
    const BoundReport thin = BoundThinBox(p);
    const BoundReport lop = BoundLopsided(p);
    if (c.as_json) {
      rows.push_back({{"alpha", p.alpha},
                      {"beta", p.beta},
                      {"tau", p.tau},
                      {"d", p.degree},
                      {"reports", {ReportJson(uni), ReportJson(thin), ReportJson(lop)}}});
      return;
    }
    os << FormatDouble(p.alpha) << ',' << FormatDouble(p.beta) << ','
       << FormatDouble(p.tau) << ',' << p.degree << ',' << FormatDouble(uni.exponent)
       << ',' << FormatDouble(thin.exponent) << ',' << FormatDouble(lop.exponent) << ','
       << (lop.applicable ? 1 : 0) << '\n';
  };
  if (c.form && c.box) {
    const BoxProfile p = MakeProfile(ParseFormAny(*c.form), *c.box);
    emit(p);
    if (p.f_triple) {
      const Exponent3& f = *p.f_triple;
      if (c.as_json) {
        rows.back()["f_triple"] = {f[0], f[1], f[2]};
        rows.back()["f_triple_tie"] = p.f_triple_tie;
      }
      if (p.f_triple_tie) {
        message = "note: several monomials attain T; maximal triple taken as (" +
                  std::to_string(f[0]) + "," + std::to_string(f[1]) + "," +
                  std::to_string(f[2]) + ")";
      }
    }
  } else {
    std::mt19937_64 rng(c.seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const double d = c.curve_degree;
    for (std::uint64_t i = 0; i < c.samples; ++i) {
      const double beta = unit(rng);
      const double alpha = beta * unit(rng);
      const double lo = std::max(beta, 1.0 / d);
      const double tau = lo + (1.0 - lo) * unit(rng);
      emit(BoxProfile::FromRaw(alpha, beta, tau, c.curve_degree));
    }
  }
  if (c.as_json) return rows.dump(2) + "\n";
  return os.str();
}

std::string RunCountCurve(const ExperimentConfig& c) {
  const TernaryForm form = ParseFormAny(*c.form);
  CountOptions opts;
  opts.workers = c.workers;
  const CountResult r = c.method == "solver" ? CountCurveSolver(form, *c.box, opts)
                                             : CountCurveBruteforce(form, *c.box, opts);
  if (c.as_json) return CountJson(r).dump(2) + "\n";
  std::ostringstream os;
  os << "label,parameters,total,trivial,nontrivial,elapsed\n"
     << r.label << ',' << CsvField(r.parameters) << ',' << r.total << ','
     << r.trivial << ',' << r.nontrivial << ',' << FormatDouble(r.elapsed, 6) << '\n';
  return os.str();
}

std::string RunCountSums(const ExperimentConfig& c, std::string& message) {
  CountOptions opts;
  opts.workers = c.workers;
  opts.collect_solutions = c.as_json;
  std::ostringstream os;
  json rows = json::array();
  os << "k,X,total,trivial,nontrivial,elapsed\n";
  for (std::uint64_t x : c.x_grid) {
    CountResult r;
    if (c.variant == "pipeline") {
      r = CountSumsPipeline(c.k, x, opts);
    } else if (c.variant == "three-one") {
      r = CountSumsNaive(c.k, x, SumsVariant::kThreeOne, opts);
    } else {
      r = CountSumsNaive(c.k, x, SumsVariant::kTwoTwo, opts);
    }
    os << RowFromCount(r, c.k, x);
    rows.push_back(CountJson(r));
  }
  message.clear();
  if (c.as_json) return json{{"k", c.k}, {"variant", c.variant}, {"rows", rows}}.dump(2) + "\n";
  return os.str();
}

json TraceJson(const VanishingTrace& tr, std::size_t e) {
  json j{{"p", tr.p},
         {"t", {tr.t[0], tr.t[1], tr.t[2]}},
         {"E", e},
         {"fiber_size", tr.fiber_size},
         {"tested", tr.tested},
         {"rank", tr.rank}};
  if (tr.det) {
    j["log_abs_delta"] = tr.det->vanished() ? json(nullptr) : json(tr.det->log_abs_delta);
    j["nu_p"] = tr.det->nu_p ? json(*tr.det->nu_p) : json("inf");
    j["vanished"] = tr.det->vanished();
    j["bound_holds"] = tr.det->bound_holds;
  } else {
    j["log_abs_delta"] = nullptr;
    j["nu_p"] = nullptr;
    j["vanished"] = nullptr;
  }
  if (tr.auxiliary) {
    j["auxiliary_form"] = tr.auxiliary->form.ToString();
    j["auxiliary_vanishes"] = tr.auxiliary->vanishes_on_fiber;
    j["auxiliary_divisible_by_f"] = tr.auxiliary->divisible_by_f;
  } else {
    j["auxiliary_form"] = nullptr;
  }
  return j;
}

std::string RunDetlab(const ExperimentConfig& c) {
  const TernaryForm form = ParseFormAny(*c.form);
  IntPoint3 box{};
  for (int i = 0; i < 3; ++i) box[i] = static_cast<std::int64_t>(std::floor((*c.box)[i]));
  const auto primes = PrimesBetween(c.prime_min, c.prime_cap);
  json scans = json::array();
  for (int big_d : c.d_grid) {
    std::vector<double> caps = c.a_grid;
    if (caps.empty()) caps.push_back(big_d * std::log(static_cast<double>(box[2])));
    for (double a : caps) {
      const VanishingScan s = ScanVanishing(form, box, big_d, a, primes);
      json traces = json::array();
      for (const auto& tr : s.traces) traces.push_back(TraceJson(tr, s.eset.size()));
      json members = json::array();
      for (const auto& e : s.eset.members) members.push_back({e[0], e[1], e[2]});
      scans.push_back({
          {"D", big_d},
          {"A", a},
          {"E", s.eset.size()},
          {"exponent_set", members},
          {"log_t", s.log_t},
          {"theory_log_threshold",
           s.theory_log_threshold ? json(*s.theory_log_threshold) : json(nullptr)},
          {"f_of_a", s.f_of_a ? json(*s.f_of_a) : json(nullptr)},
          {"empirical_threshold",
           s.empirical_threshold ? json(*s.empirical_threshold) : json(nullptr)},
          {"nonzero_below", s.nonzero_below},
          {"tested_above", s.tested_above},
          {"traces", traces},
      });
    }
  }
  return json{{"form", form.ToString()},
              {"box", {box[0], box[1], box[2]}},
              {"scans", scans}}
             .dump(2) +
         "\n";
}

std::string RunXiSum(const ExperimentConfig& c, std::string& message) {
  std::vector<std::uint64_t> ys = c.y_grid;
  std::sort(ys.begin(), ys.end());
  const XiSumResult top = XiSum(c.theta, ys.back(), c.eps, c.prime_cap);
  const std::vector<double> sums = XiPartialSums(c.theta, ys);
  std::ostringstream os;
  os << "theta,eps,Y,partial_sum,c_eps,bound,bound_holds\n";
  std::vector<std::pair<double, double>> samples;
  json rows = json::array();
  for (std::size_t i = 0; i < ys.size(); ++i) {
    const double bound =
        top.c_eps * std::pow(static_cast<double>(ys[i]), 1.0 - c.theta + c.eps);
    const bool holds = sums[i] <= bound;
    os << FormatDouble(c.theta) << ',' << FormatDouble(c.eps) << ',' << ys[i] << ','
       << FormatDouble(sums[i]) << ',' << FormatDouble(top.c_eps) << ','
       << FormatDouble(bound) << ',' << (holds ? 1 : 0) << '\n';
    rows.push_back({{"Y", ys[i]}, {"partial_sum", sums[i]}, {"bound", bound},
                    {"bound_holds", holds}});
    samples.emplace_back(static_cast<double>(ys[i]), sums[i]);
  }
  if (samples.size() >= 3) {
    message = "fitted slope " + FormatDouble(FitExponent(samples).slope, 6) +
              ", target " + FormatDouble(1.0 - c.theta, 6);
  }
  if (c.as_json) {
    json doc{{"theta", c.theta}, {"eps", c.eps}, {"c_eps", top.c_eps},
             {"c_eps_upper", top.c_eps_upper}, {"prime_cap", top.prime_cap},
             {"rows", rows}};
    if (samples.size() >= 3) doc["slope"] = FitExponent(samples).slope;
    return doc.dump(2) + "\n";
  }
  return os.str();
}

std::string RunFit(const ExperimentConfig& c) {
  const FitResult f = FitExponent(c.fit_samples);
  if (c.as_json) {
    return json{{"slope", f.slope}, {"intercept", f.intercept}, {"used", f.used}}.dump(2) +
           "\n";
  }
  return "slope,intercept,used\n" + FormatDouble(f.slope) + ',' +
         FormatDouble(f.intercept) + ',' + std::to_string(f.used) + '\n';
}

}  // namespace

std::string FormatDouble(double v, int precision) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general,
                               precision);
  return std::string(buf, r.ptr);
}

std::vector<std::uint64_t> ParseUintList(const std::string& text) {
  std::vector<std::uint64_t> out;
  for (const auto& s : SplitComma(text)) out.push_back(ToUint(s));
  return out;
}

std::vector<double> ParseDoubleList(const std::string& text) {
  std::vector<double> out;
  for (const auto& s : SplitComma(text)) out.push_back(ToDouble(s));
  return out;
}

std::vector<std::pair<double, double>> ParseSamples(const std::string& text) {
  std::vector<std::pair<double, double>> out;
  for (const auto& s : SplitComma(text)) {
    const auto colon = s.find(':');
    if (colon == std::string::npos) throw InputError("samples are X:count pairs");
    out.emplace_back(ToDouble(Trim(s.substr(0, colon))), ToDouble(Trim(s.substr(colon + 1))));
  }
  return out;
}

ExperimentConfig ExperimentConfig::FromJson(const json& doc) {
  if (!doc.is_object()) throw InputError("config must be a JSON object");
  static const std::set<std::string> kKeys{
      "command", "form",    "box",       "k",         "x_grid",  "eps",
      "d_grid",  "a_grid",  "prime_cap", "prime_min", "out",     "workers",
      "json",    "variant", "method",    "samples",   "seed",    "curve_degree",
      "theta",   "y_grid",  "fit_samples"};
  for (const auto& [key, value] : doc.items()) {
    if (!kKeys.count(key)) throw InputError("unknown config field \"" + key + "\"");
  }
  ExperimentConfig c;
  if (doc.contains("command")) c.command = Field<std::string>(doc, "command");
  if (doc.contains("form")) {
    const json& f = doc.at("form");
    c.form = f.is_string() ? f.get<std::string>() : f.dump();
  }
  if (doc.contains("box")) c.box = Field<std::array<double, 3>>(doc, "box");
  if (doc.contains("k")) c.k = Field<int>(doc, "k");
  if (doc.contains("x_grid")) c.x_grid = Field<std::vector<std::uint64_t>>(doc, "x_grid");
  if (doc.contains("eps")) c.eps = Field<double>(doc, "eps");
  if (doc.contains("d_grid")) c.d_grid = Field<std::vector<int>>(doc, "d_grid");
  if (doc.contains("a_grid")) c.a_grid = Field<std::vector<double>>(doc, "a_grid");
  if (doc.contains("prime_cap")) c.prime_cap = Field<std::uint64_t>(doc, "prime_cap");
  if (doc.contains("prime_min")) c.prime_min = Field<std::uint64_t>(doc, "prime_min");
  if (doc.contains("out")) c.out = Field<std::string>(doc, "out");
  if (doc.contains("workers")) c.workers = Field<unsigned>(doc, "workers");
  if (doc.contains("json")) c.as_json = Field<bool>(doc, "json");
  if (doc.contains("variant")) c.variant = Field<std::string>(doc, "variant");
  if (doc.contains("method")) c.method = Field<std::string>(doc, "method");
  if (doc.contains("samples")) c.samples = Field<std::uint64_t>(doc, "samples");
  if (doc.contains("seed")) c.seed = Field<std::uint64_t>(doc, "seed");
  if (doc.contains("curve_degree")) c.curve_degree = Field<int>(doc, "curve_degree");
  if (doc.contains("theta")) c.theta = Field<double>(doc, "theta");
  if (doc.contains("y_grid")) c.y_grid = Field<std::vector<std::uint64_t>>(doc, "y_grid");
  if (doc.contains("fit_samples")) {
    c.fit_samples = Field<std::vector<std::pair<double, double>>>(doc, "fit_samples");
  }
  return c;
}

json ExperimentConfig::ToJson() const {
  json j{{"command", command}, {"k", k},           {"x_grid", x_grid},
         {"eps", eps},         {"d_grid", d_grid}, {"a_grid", a_grid},
         {"prime_cap", prime_cap}, {"prime_min", prime_min}, {"out", out},
         {"workers", workers}, {"json", as_json},     {"variant", variant},
         {"method", method},   {"samples", samples}, {"seed", seed},
         {"curve_degree", curve_degree}, {"theta", theta}, {"y_grid", y_grid},
         {"fit_samples", fit_samples}};
  if (form) j["form"] = *form;
  if (box) j["box"] = *box;
  return j;
}

void ExperimentConfig::Validate() const {
  if (!kCommands.count(command)) throw InputError("unknown command \"" + command + "\"");
  if (workers < 1) throw InputError("workers must be positive");
  auto need_form_box = [&] {
    if (!form) throw InputError(command + " needs --form");
    if (!box) throw InputError(command + " needs --box");
  };
  if (command == "bounds") {
    if (form.has_value() != box.has_value()) {
      throw InputError("bounds takes both --form and --box, or neither");
    }
    if (!form && samples == 0) throw InputError("samples must be positive");
    if (curve_degree < 1) throw InputError("curve degree must be positive");
  } else if (command == "count-curve") {
    need_form_box();
    if (method != "bruteforce" && method != "solver") {
      throw InputError("method must be bruteforce or solver");
    }
  } else if (command == "count-sums") {
    if (x_grid.empty()) throw InputError("count-sums needs a nonempty --x-grid");
    if (variant != "naive" && variant != "pipeline" && variant != "three-one") {
      throw InputError("variant must be naive, pipeline or three-one");
    }
    if (std::find(x_grid.begin(), x_grid.end(), 0u) != x_grid.end()) {
      throw InputError("X values must be positive");
    }
  } else if (command == "detlab") {
    need_form_box();
    if (d_grid.empty()) throw InputError("detlab needs a nonempty --degree grid");
    if (prime_cap < prime_min || prime_cap == 0) {
      throw InputError("detlab needs --prime-cap >= --prime-min");
    }
  } else if (command == "xi-sum") {
    if (y_grid.empty()) throw InputError("xi-sum needs a nonempty --y-grid");
    if (std::find(y_grid.begin(), y_grid.end(), 0u) != y_grid.end()) {
      throw InputError("Y values must be positive");
    }
  } else if (command == "fit") {
    if (fit_samples.size() < 3) throw InputError("fit needs at least 3 samples");
  }
}

std::vector<ThetaRow> RunThetaTable() {
  std::vector<ThetaRow> rows{{"five-thirds", {}},
                             {"3/sqrt(k)+2/(k-1)", {}},
                             {"3/sqrt(k)+2/k", {}},
                             {"3/2+1/(2k-2)", {}}};
  for (int k = 4; k <= 8; ++k) {
    const PaucityRow r = PaucityExponents(k);
    rows[0].values[k - 4] = r.five_thirds;
    rows[1].values[k - 4] = r.uniform;
    rows[2].values[k - 4] = r.sharpened;
    rows[3].values[k - 4] = r.lopsided;
  }
  return rows;
}

std::string FormatTheta(double v) {
  const double scaled = v * 1000.0;
  const double nearest = std::round(scaled);
  const bool exact = std::abs(scaled - nearest) < 1e-9;
  const double truncated = exact ? nearest : std::floor(scaled);
  char buf[32];
  const auto r = std::to_chars(buf, buf + sizeof buf, truncated / 1000.0,
                               std::chars_format::fixed, 3);
  std::string out(buf, r.ptr);
  return exact ? out : out + "..";
}

std::string FormatThetaTable(const std::vector<ThetaRow>& rows) {
  std::ostringstream os;
  os << "bound               k=4      k=5      k=6      k=7      k=8\n";
  for (const ThetaRow& row : rows) {
    std::string name = row.name;
    name.resize(18, ' ');
    os << name;
    for (double v : row.values) {
      std::string cell = FormatTheta(v);
      cell.resize(9, ' ');
      os << ' ' << cell;
    }
    os << '\n';
  }
  return os.str();
}

void WriteOutputAtomically(const std::string& path, const std::string& text) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  const fs::path tmp = target.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw InputError("cannot open " + tmp.string() + " for writing");
    out << text;
    if (!out) {
      out.close();
      fs::remove(tmp);
      throw InputError("failed writing " + tmp.string());
    }
  }
  fs::rename(tmp, target);
}

ExperimentOutput RunExperiment(const ExperimentConfig& config) {
  ExperimentOutput out;
  try {
    config.Validate();
    const std::string& cmd = config.command;
    if (cmd == "bounds") {
      out.text = RunBounds(config, out.message);
    } else if (cmd == "theta-table") {
      const auto rows = RunThetaTable();
      if (config.as_json) {
        json j = json::array();
        for (const auto& r : rows) {
          json cells = json::object();
          for (int k = 4; k <= 8; ++k) cells[std::to_string(k)] = r.values[k - 4];
          j.push_back({{"bound", r.name}, {"theta", cells}});
        }
        out.text = j.dump(2) + "\n";
      } else {
        out.text = FormatThetaTable(rows);
      }
    } else if (cmd == "count-curve") {
      out.text = RunCountCurve(config);
    } else if (cmd == "count-sums") {
      out.text = RunCountSums(config, out.message);
    } else if (cmd == "detlab") {
      out.text = RunDetlab(config);
    } else if (cmd == "xi-sum") {
      out.text = RunXiSum(config, out.message);
    } else {
      out.text = RunFit(config);
    }
  } catch (const GuardError& e) {
    out = {kExitGuard, "", std::string("guard: ") + e.what()};
  } catch (const Error& e) {
    out = {kExitConfig, "", std::string("error: ") + e.what()};
  } catch (const nlohmann::json::exception& e) {
    out = {kExitConfig, "", std::string("error: ") + e.what()};
  }
  return out;
}

}  // namespace lopsided::cli
