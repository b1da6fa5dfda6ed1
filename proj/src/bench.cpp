// Copyright 2026 The mdlsynth Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "mdlsynth/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <map>
#include <sstream>
#include <utility>

#include "mdlsynth/error.hpp"
#include "mdlsynth/log.hpp"
#include "mdlsynth/oracle.hpp"
#include "mdlsynth/peephole.hpp"
#include "mdlsynth/rng.hpp"

namespace mdlsynth {
namespace {

void append_cz(Circuit& c, int a, int b) {
  c.append(Gate::h(b));
  c.append(Gate::cx(a, b));
  c.append(Gate::h(b));
}

Circuit ghz(int n) {
  Circuit c(n);
  c.append(Gate::h(0));
  for (int i = 1; i < n; ++i) c.append(Gate::cx(0, i));
  return c;
}

Circuit cluster(int n) {
  Circuit c(n);
  for (int q = 0; q < n; ++q) c.append(Gate::h(q));
  for (int q = 0; q + 1 < n; ++q) append_cz(c, q, q + 1);
  return c;
}

Circuit phase_gadget(int n) {
  Circuit c(n);
  for (int q = 0; q + 1 < n; ++q) c.append(Gate::cx(q, q + 1));
  c.append(Gate::t(n - 1));
  for (int q = n - 2; q >= 0; --q) c.append(Gate::cx(q, q + 1));
  return c;
}

// [[5,1,3]] encoder as a ring graph state: copy the data qubit into all five
// qubits, rotate to the X basis and entangle along the 5-cycle.
Circuit perfect_code() {
  Circuit c(5);
  for (int q = 1; q < 5; ++q) c.append(Gate::cx(0, q));
  for (int q = 0; q < 5; ++q) c.append(Gate::h(q));
  for (int q = 0; q + 1 < 5; ++q) append_cz(c, q, q + 1);
  append_cz(c, 0, 4);
  return c;
}

std::optional<int> published_count(const std::string& family, int n) {
  static const std::map<std::pair<std::string, int>, int> table{
      {{"ghz", 4}, 4},     {{"cluster", 4}, 7}, {{"phase_gadget", 4}, 7}, {{"ghz", 5}, 5},
      {{"cluster", 5}, 9}, {{"phase_gadget", 5}, 9}};
  auto it = table.find({family, n});
  if (it == table.end()) return std::nullopt;
  return it->second;
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

}  // namespace

StructuredTarget build_structured(const std::string& name) {
  StructuredTarget t;
  t.name = name;
  if (name == "perfect_513") {
    t.qubits = 5;
    t.circuit = optimize(perfect_code());
    t.reference_gates = 14;
    return t;
  }
  const auto us = name.rfind('_');
  if (us != std::string::npos && us + 2 == name.size()) {
    const std::string family = name.substr(0, us);
    const int n = name.back() - '0';
    if (n >= 2 && n <= kMaxQubits) {
      Circuit c;
      if (family == "ghz") c = ghz(n);
      if (family == "cluster") c = cluster(n);
      if (family == "phase_gadget") c = phase_gadget(n);
      if (c.size() > 0) {
        t.qubits = n;
        t.circuit = optimize(c);
        t.reference_gates = published_count(family, n);
        return t;
      }
    }
  }
  throw Error(ErrorCode::kInvalidArgument,
              "unknown structured target '" + name +
                  "' (expected ghz_N, cluster_N, phase_gadget_N with N in 2..5, or perfect_513)");
}

std::vector<std::string> structured_catalog() {
  return {"ghz_4", "cluster_4", "phase_gadget_4", "ghz_5",
          "cluster_5", "phase_gadget_5", "perfect_513"};
}

std::vector<BenchTarget> structured_suite(std::span<const std::string> names) {
  std::vector<BenchTarget> out;
  for (const std::string& n : names) {
    StructuredTarget s = build_structured(n);
    out.push_back({s.name, static_cast<int>(t_count(s.circuit)), s.circuit,
                   circuit_unitary(s.circuit)});
  }
  return out;
}

std::vector<BenchTarget> random_suite(const RandomSuiteConfig& cfg) {
  if (cfg.per_bucket < 0 || cfg.t_min < 0 || cfg.t_max < cfg.t_min) {
    throw Error(ErrorCode::kInvalidArgument, "random suite: invalid bucket configuration");
  }
  SamplerConfig sampler;
  sampler.qubits = cfg.qubits;
  sampler.t_count = {cfg.t_min, cfg.t_max};
  sampler.gate_count = cfg.gate_count;
  sampler.seed = cfg.seed;
  sampler.max_attempts = 1000000;
  sampler.validate();
  std::vector<BenchTarget> out;
  for (int k = cfg.t_min; k <= cfg.t_max; ++k) {
    Rng rng = make_rng(cfg.seed, "suite", static_cast<std::uint64_t>(k));
    for (int i = 0; i < cfg.per_bucket; ++i) {
      Circuit c = sample_circuit_with_t_count(sampler, k, rng);
      Unitary u = circuit_unitary(c);
      out.push_back({"random_n" + std::to_string(cfg.qubits) + "_t" + std::to_string(k) + "_" +
                         std::to_string(i),
                     k, std::move(c), std::move(u)});
    }
  }
  return out;
}

std::size_t BenchReport::successes() const {
  return static_cast<std::size_t>(
      std::count_if(targets.begin(), targets.end(), [](const TargetResult& t) { return t.success; }));
}

double BenchReport::success_rate() const {
  return targets.empty() ? 0.0
                         : static_cast<double>(successes()) / static_cast<double>(targets.size());
}

BenchReport run_suite(std::span<const BenchTarget> targets, const MlpModel& model,
                      const SearchConfig& cfg, SuiteOptions opts) {
  cfg.validate();
  const auto start = std::chrono::steady_clock::now();
  BenchReport rep;
  rep.search = cfg;
  for (const BenchTarget& t : targets) {
    const SynthesisResult res = synthesize(t.unitary, model, cfg);
    TargetResult r;
    r.name = t.name;
    r.qubits = t.unitary.qubits();
    r.bucket = t.bucket;
    r.reference_gates = t.reference.size();
    r.success = res.success();
    r.trials_used = res.trials_used;
    r.first_success = res.first_success();
    r.wall_time_s = res.wall_time_s;
    if (res.success()) {
      r.gates = res.circuit->size();
      r.t_count = t_count(*res.circuit);
      r.fidelity = res.achieved_fidelity;
      std::ostringstream os;
      for (std::size_t i = 0; i < res.circuit->size(); ++i) {
        os << (i ? "; " : "") << (*res.circuit)[i].to_string();
      }
      r.circuit = os.str();
    }
    if (opts.oracle_depth > 0) {
      const OracleResult o = exact_mdl(t.unitary, opts.oracle_depth, cfg.threshold);
      if (o.found()) r.oracle_mdl = o.depth;
    }
    log::info("bench " + r.name + ": " +
              (r.success ? std::to_string(r.gates) + " gates" : std::string("unsolved")));
    rep.targets.push_back(std::move(r));
  }

  std::map<std::pair<int, int>, BucketSummary> buckets;
  for (const TargetResult& r : rep.targets) {
    BucketSummary& b = buckets[{r.qubits, r.bucket}];
    b.qubits = r.qubits;
    b.bucket = r.bucket;
    ++b.targets;
    if (r.success) {
      ++b.successes;
      b.mean_gates += static_cast<double>(r.gates);
    }
  }
  for (auto& [key, b] : buckets) {
    if (b.successes > 0) b.mean_gates /= static_cast<double>(b.successes);
    rep.buckets.push_back(b);
  }
  rep.wall_time_s =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return rep;
}

std::pair<double, double> wilson_interval(std::size_t successes, std::size_t total, double z) {
  if (total == 0) return {0.0, 1.0};
  const double n = static_cast<double>(total);
  const double p = static_cast<double>(successes) / n;
  const double z2 = z * z;
  const double denom = 1.0 + z2 / n;
  const double centre = (p + z2 / (2.0 * n)) / denom;
  const double half = z * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n)) / denom;
  return {std::max(0.0, centre - half), std::min(1.0, centre + half)};
}

std::vector<BudgetPoint> budget_curve(const BenchReport& report, std::span<const int> budgets) {
  for (std::size_t i = 0; i < budgets.size(); ++i) {
    if (budgets[i] < 1 || (i > 0 && budgets[i] <= budgets[i - 1])) {
      throw Error(ErrorCode::kInvalidArgument, "budgets must be positive and ascending");
    }
  }
  std::vector<BudgetPoint> out;
  for (int b : budgets) {
    BudgetPoint p;
    p.budget = b;
    for (const TargetResult& t : report.targets) {
      if (static_cast<std::size_t>(b) > t.trials_used) {
        throw Error(ErrorCode::kInvalidArgument,
                    "budget " + std::to_string(b) + " exceeds the " +
                        std::to_string(t.trials_used) + " trials run for " + t.name);
      }
      ++p.total;
      if (t.first_success && *t.first_success < static_cast<std::size_t>(b)) ++p.successes;
    }
    p.rate = p.total ? static_cast<double>(p.successes) / static_cast<double>(p.total) : 0.0;
    std::tie(p.ci_low, p.ci_high) = wilson_interval(p.successes, p.total, kZ99);
    out.push_back(p);
  }
  return out;
}

std::vector<BudgetPoint> budget_sweep(std::span<const BenchTarget> targets, const MlpModel& model,
                                      SearchConfig cfg, std::span<const int> budgets,
                                      BenchReport* report) {
  if (budgets.empty()) throw Error(ErrorCode::kInvalidArgument, "empty budget list");
  cfg.trials = *std::max_element(budgets.begin(), budgets.end());
  BenchReport rep = run_suite(targets, model, cfg);
  std::vector<BudgetPoint> curve = budget_curve(rep, budgets);
  if (report) *report = std::move(rep);
  return curve;
}

nlohmann::json report_to_json(const BenchReport& report) {
  using nlohmann::json;
  json j;
  const SearchConfig& s = report.search;
  j["search"] = {{"beam_width", s.beam_width},
                 {"max_steps", s.max_steps},
                 {"temperature", s.temperature},
                 {"threshold", s.threshold},
                 {"trials", s.trials},
                 {"seed", s.seed},
                 {"permutation_trials", s.permutation_trials},
                 {"inverse_trials", s.inverse_trials}};
  json targets = json::array();
  json timing = json::object();
  for (const TargetResult& t : report.targets) {
    json r = {{"name", t.name},
              {"qubits", t.qubits},
              {"t_bucket", t.bucket},
              {"reference_gates", t.reference_gates},
              {"success", t.success},
              {"gates", t.gates},
              {"t_count", t.t_count},
              {"fidelity", t.fidelity},
              {"trials_used", t.trials_used},
              {"circuit", t.circuit}};
    r["first_success_trial"] = t.first_success ? json(*t.first_success) : json(nullptr);
    r["oracle_mdl"] = t.oracle_mdl ? json(*t.oracle_mdl) : json(nullptr);
    targets.push_back(std::move(r));
    timing["targets"][t.name] = t.wall_time_s;
  }
  j["targets"] = std::move(targets);
  json buckets = json::array();
  for (const BucketSummary& b : report.buckets) {
    buckets.push_back({{"qubits", b.qubits},
                       {"t_bucket", b.bucket},
                       {"targets", b.targets},
                       {"successes", b.successes},
                       {"mean_gates", b.mean_gates}});
  }
  j["buckets"] = std::move(buckets);
  j["successes"] = report.successes();
  j["success_rate"] = report.success_rate();
  timing["total_s"] = report.wall_time_s;
  j["timing"] = std::move(timing);
  return j;
}

std::string report_to_csv(const BenchReport& report) {
  std::ostringstream os;
  os << "name,qubits,t_bucket,reference_gates,success,gates,t_count,fidelity,trials_used,"
        "first_success_trial,oracle_mdl,wall_time_s\n";
  for (const TargetResult& t : report.targets) {
    os << t.name << ',' << t.qubits << ',' << t.bucket << ',' << t.reference_gates << ','
       << (t.success ? 1 : 0) << ',' << t.gates << ',' << t.t_count << ',' << fmt(t.fidelity)
       << ',' << t.trials_used << ',' << (t.first_success ? std::to_string(*t.first_success) : "")
       << ',' << (t.oracle_mdl ? std::to_string(*t.oracle_mdl) : "") << ','
       << fmt(t.wall_time_s) << '\n';
  }
  return os.str();
}

std::string budget_curve_to_csv(std::span<const BudgetPoint> curve) {
  std::ostringstream os;
  os << "budget,successes,total,success_rate,ci99_low,ci99_high\n";
  for (const BudgetPoint& p : curve) {
    os << p.budget << ',' << p.successes << ',' << p.total << ',' << fmt(p.rate) << ','
       << fmt(p.ci_low) << ',' << fmt(p.ci_high) << '\n';
  }
  return os.str();
}

nlohmann::json budget_curve_to_json(std::span<const BudgetPoint> curve) {
  nlohmann::json j = nlohmann::json::array();
  for (const BudgetPoint& p : curve) {
    j.push_back({{"budget", p.budget},
                 {"successes", p.successes},
                 {"total", p.total},
                 {"success_rate", p.rate},
                 {"ci99_low", p.ci_low},
                 {"ci99_high", p.ci_high}});
  }
  return j;
}

std::string budget_curve_svg(std::span<const BudgetPoint> curve) {
  const double w = 480, h = 320, left = 56, right = 16, top = 16, bottom = 48;
  const double pw = w - left - right, ph = h - top - bottom;
  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w << "\" height=\"" << h
     << "\" font-family=\"sans-serif\" font-size=\"11\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  os << "<line x1=\"" << left << "\" y1=\"" << top + ph << "\" x2=\"" << left + pw << "\" y2=\""
     << top + ph << "\" stroke=\"black\"/>\n";
  os << "<line x1=\"" << left << "\" y1=\"" << top << "\" x2=\"" << left << "\" y2=\"" << top + ph
     << "\" stroke=\"black\"/>\n";
  for (int i = 0; i <= 4; ++i) {
    const double y = top + ph * (1.0 - i / 4.0);
    os << "<text x=\"" << left - 6 << "\" y=\"" << y + 4 << "\" text-anchor=\"end\">"
       << fmt(i / 4.0) << "</text>\n";
  }
  os << "<text x=\"" << left + pw / 2 << "\" y=\"" << h - 10
     << "\" text-anchor=\"middle\">trial budget (log scale)</text>\n";
  if (!curve.empty()) {
    const double lo = std::log(static_cast<double>(curve.front().budget));
    const double hi = std::log(static_cast<double>(curve.back().budget));
    auto x_of = [&](int b) {
      return hi > lo ? left + pw * (std::log(static_cast<double>(b)) - lo) / (hi - lo)
                     : left + pw / 2;
    };
    auto y_of = [&](double r) { return top + ph * (1.0 - r); };
    os << "<polygon fill=\"#9ecae1\" fill-opacity=\"0.5\" points=\"";
    for (const BudgetPoint& p : curve) os << x_of(p.budget) << ',' << y_of(p.ci_high) << ' ';
    for (auto it = curve.rbegin(); it != curve.rend(); ++it) {
      os << x_of(it->budget) << ',' << y_of(it->ci_low) << ' ';
    }
    os << "\"/>\n<polyline fill=\"none\" stroke=\"#08519c\" stroke-width=\"2\" points=\"";
    for (const BudgetPoint& p : curve) os << x_of(p.budget) << ',' << y_of(p.rate) << ' ';
    os << "\"/>\n";
    for (const BudgetPoint& p : curve) {
      os << "<circle cx=\"" << x_of(p.budget) << "\" cy=\"" << y_of(p.rate)
         << "\" r=\"3\" fill=\"#08519c\"/>\n";
      os << "<text x=\"" << x_of(p.budget) << "\" y=\"" << top + ph + 14
         << "\" text-anchor=\"middle\">" << p.budget << "</text>\n";
    }
  }
  os << "</svg>\n";
  return os.str();
}

std::string bucket_heatmap_svg(const BenchReport& report) {
  std::vector<int> qubits, tcounts;
  for (const BucketSummary& b : report.buckets) {
    qubits.push_back(b.qubits);
    tcounts.push_back(b.bucket);
  }
  std::sort(qubits.begin(), qubits.end());
  qubits.erase(std::unique(qubits.begin(), qubits.end()), qubits.end());
  std::sort(tcounts.begin(), tcounts.end());
  tcounts.erase(std::unique(tcounts.begin(), tcounts.end()), tcounts.end());
  const double cell = 40, left = 48, top = 16;
  const double w = left + cell * static_cast<double>(tcounts.size()) + 16;
  const double h = top + cell * static_cast<double>(qubits.size()) + 40;
  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w << "\" height=\"" << h
     << "\" font-family=\"sans-serif\" font-size=\"11\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  for (const BucketSummary& b : report.buckets) {
    const auto xi = std::find(tcounts.begin(), tcounts.end(), b.bucket) - tcounts.begin();
    const auto yi = std::find(qubits.begin(), qubits.end(), b.qubits) - qubits.begin();
    const double rate =
        b.targets ? static_cast<double>(b.successes) / static_cast<double>(b.targets) : 0.0;
    const int shade = static_cast<int>(std::lround(255.0 * (1.0 - rate)));
    const double x = left + cell * static_cast<double>(xi), y = top + cell * static_cast<double>(yi);
    os << "<rect x=\"" << x << "\" y=\"" << y << "\" width=\"" << cell << "\" height=\"" << cell
       << "\" fill=\"rgb(" << shade << ',' << shade << ",255)\" stroke=\"white\"/>\n";
    os << "<text x=\"" << x + cell / 2 << "\" y=\"" << y + cell / 2 + 4
       << "\" text-anchor=\"middle\">" << fmt(std::round(rate * 100.0) / 100.0) << "</text>\n";
  }
  for (std::size_t i = 0; i < tcounts.size(); ++i) {
    os << "<text x=\"" << left + cell * (static_cast<double>(i) + 0.5) << "\" y=\""
       << top + cell * static_cast<double>(qubits.size()) + 14 << "\" text-anchor=\"middle\">"
       << tcounts[i] << "</text>\n";
  }
  for (std::size_t i = 0; i < qubits.size(); ++i) {
    os << "<text x=\"" << left - 6 << "\" y=\"" << top + cell * (static_cast<double>(i) + 0.5) + 4
       << "\" text-anchor=\"end\">n=" << qubits[i] << "</text>\n";
  }
  os << "<text x=\"" << left + cell * static_cast<double>(tcounts.size()) / 2 << "\" y=\"" << h - 6
     << "\" text-anchor=\"middle\">T-count</text>\n";
  os << "</svg>\n";
  return os.str();
}

}  // namespace mdlsynth
