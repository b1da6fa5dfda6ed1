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

#include "mdlsynth/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <unordered_set>

#include "mdlsynth/bench.hpp"
#include "mdlsynth/circuit_io.hpp"
#include "mdlsynth/error.hpp"
#include "mdlsynth/log.hpp"
#include "mdlsynth/metrics.hpp"
#include "mdlsynth/oracle.hpp"
#include "mdlsynth/peephole.hpp"
#include "mdlsynth/search.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace mdlsynth {
namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::vector<int> parse_int_list(const std::string& text) {
  std::vector<int> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stoi(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw UsageError("expected a comma-separated integer list, got '" + text + "'");
    }
  }
  if (out.empty()) throw UsageError("empty integer list");
  return out;
}

std::string circuit_line(const Circuit& c) {
  std::string s;
  for (std::size_t i = 0; i < c.size(); ++i) s += (i ? "; " : "") + c[i].to_string();
  return s;
}

std::unique_ptr<ExampleSource> make_source(const StreamConfig& cfg, int workers) {
  if (workers > 1) return std::make_unique<ParallelStreamSource>(cfg, workers);
  return std::make_unique<StreamSource>(cfg);
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// Every distinct unitary reachable with at most max_depth gates, each with a
// shortest circuit.
std::vector<Circuit> enumerate_targets(int qubits, int max_depth) {
  std::vector<Circuit> out{Circuit(qubits)};
  std::vector<std::pair<Unitary, Circuit>> frontier{{Unitary::identity(qubits), Circuit(qubits)}};
  std::unordered_set<CanonicalKey, CanonicalKeyHash> seen{canonical_key(frontier[0].first)};
  const auto actions = action_set(qubits);
  for (int d = 1; d <= max_depth; ++d) {
    std::vector<std::pair<Unitary, Circuit>> next;
    for (const auto& [u, c] : frontier) {
      for (const Gate& g : actions) {
        Unitary v = u.left_multiplied(g);
        if (!seen.insert(canonical_key(v)).second) continue;
        Circuit cc = c;
        cc.append(g);
        out.push_back(cc);
        next.emplace_back(std::move(v), std::move(cc));
      }
    }
    frontier = std::move(next);
  }
  return out;
}

json search_config_json(const SearchConfig& s) {
  return {{"beam_width", s.beam_width},   {"max_steps", s.max_steps},
          {"temperature", s.temperature}, {"threshold", s.threshold},
          {"trials", s.trials},           {"seed", s.seed},
          {"permutation_trials", s.permutation_trials},
          {"inverse_trials", s.inverse_trials}};
}

}  // namespace

DeskPreset desk_preset(int qubits, std::uint64_t seed) {
  if (qubits < 1 || qubits > kMaxQubits) {
    throw Error(ErrorCode::kInvalidArgument, "qubits must lie in [1, 5]");
  }
  DeskPreset p;
  SamplerConfig& s = p.stream.sampler;
  s.qubits = qubits;
  s.seed = seed;
  static constexpr int kMaxGates[] = {0, 16, 12, 12, 12, 12};
  // Larger T-counts rarely survive optimization at these lengths.
  static constexpr int kMaxT[] = {0, 5, 6, 4, 3, 3};
  s.gate_count = {1, kMaxGates[qubits]};
  s.t_count = {0, kMaxT[qubits]};
  s.max_attempts = 100000;

  TrainConfig& t = p.train;
  t.seed = seed;
  if (qubits == 1) {
    t.hidden = {64, 32};
  } else if (qubits <= 3) {
    t.hidden = {256, 128, 64};
  } else {
    t.hidden = {512, 256, 64};
  }
  t.batch_size = 128;
  t.grad_accumulation = 1;
  t.epochs = 30;
  t.steps_per_epoch = 250;
  t.warmup_steps = 200;
  t.cosine_t_max = t.total_steps();
  t.peak_lr = 1e-3;
  t.fresh_per_step = 64;
  t.validation_size = 1024;
  return p;
}

std::vector<TrainingExample> validation_examples(StreamConfig cfg, std::size_t n) {
  cfg.sampler.seed = derive_seed(cfg.sampler.seed, "validation");
  ExampleStream stream(cfg);
  std::vector<TrainingExample> out;
  out.reserve(n);
  while (out.size() < n) out.push_back(stream.next());
  return out;
}

fs::path confined_path(const fs::path& out_dir, const fs::path& relative) {
  if (relative.empty()) throw Error(ErrorCode::kInvalidArgument, "empty output path");
  if (relative.is_absolute()) {
    throw Error(ErrorCode::kInvalidArgument,
                "output path " + relative.string() + " must be relative to the output directory");
  }
  const fs::path root = fs::weakly_canonical(fs::absolute(out_dir));
  const fs::path full = fs::weakly_canonical(root / relative);
  const auto [mismatch, unused] = std::mismatch(root.begin(), root.end(), full.begin(), full.end());
  if (mismatch != root.end()) {
    throw Error(ErrorCode::kInvalidArgument,
                "output path " + relative.string() + " escapes the output directory " + root.string());
  }
  std::error_code ec;
  fs::create_directories(full.parent_path(), ec);
  if (ec) throw Error(ErrorCode::kIo, "cannot create " + full.parent_path().string() + ": " + ec.message());
  return full;
}

json run_quickstart(const QuickstartConfig& cfg, const fs::path& out_dir) {
  const auto t0 = std::chrono::steady_clock::now();
  json timing;
  DeskPreset preset = desk_preset(cfg.qubits, cfg.seed);
  preset.train.epochs = cfg.epochs;
  preset.train.steps_per_epoch = cfg.steps_per_epoch;
  preset.train.cosine_t_max = preset.train.total_steps();
  preset.train.warmup_steps = std::min<long>(preset.train.warmup_steps, preset.train.total_steps() / 10);
  const auto validation = validation_examples(preset.stream, 512);

  auto source = make_source(preset.stream, cfg.workers);
  TrainResult tr = train(*source, validation, cfg.qubits, preset.train);
  save_model(tr.model, confined_path(out_dir, "model.mdlm"));
  write_text_file(confined_path(out_dir, "metrics.csv"), format_metrics_csv(tr.log));
  timing["train_s"] = seconds_since(t0);

  json report;
  report["qubits"] = cfg.qubits;
  report["seed"] = cfg.seed;
  report["workers"] = cfg.workers;
  report["model"] = {{"layers", tr.model.layer_dims()},
                     {"parameters", tr.model.parameter_count()},
                     {"examples_consumed", tr.examples_consumed}};
  const EpochMetrics& last = tr.log.back();
  report["training"] = {{"epochs", tr.log.size()},
                        {"final_train_mse", last.train_mse},
                        {"final_val_mse", last.val_mse},
                        {"final_val_mae", last.val_mae},
                        {"final_val_r2", last.val_r2}};

  SearchConfig search;
  search.trials = cfg.trials;
  search.seed = derive_seed(cfg.seed, "search");
  search.workers = cfg.workers;

  // Random suite, scored at the 0.9 protocol threshold.
  RandomSuiteConfig rs;
  rs.qubits = cfg.qubits;
  rs.per_bucket = cfg.per_bucket;
  rs.t_max = cfg.t_max;
  rs.gate_count = {1, 12};
  rs.seed = derive_seed(cfg.seed, "suite");
  const auto random_targets = random_suite(rs);
  SearchConfig random_search = search;
  random_search.threshold = 0.9;
  const auto t1 = std::chrono::steady_clock::now();
  BenchReport random_rep = run_suite(random_targets, tr.model, random_search);
  timing["random_suite_s"] = seconds_since(t1);
  json rj = report_to_json(random_rep);
  timing["random_suite"] = rj["timing"];
  rj.erase("timing");
  write_text_file(confined_path(out_dir, "random.json"), rj.dump(2) + "\n");
  write_text_file(confined_path(out_dir, "random.csv"), report_to_csv(random_rep));
  report["random"] = {{"targets", random_rep.targets.size()},
                      {"successes", random_rep.successes()},
                      {"success_rate", random_rep.success_rate()},
                      {"buckets", rj["buckets"]}};

  std::vector<int> budgets;
  for (int b : {1, 5, 25, 100}) {
    if (b < cfg.trials) budgets.push_back(b);
  }
  budgets.push_back(cfg.trials);
  const auto curve = budget_curve(random_rep, budgets);
  write_text_file(confined_path(out_dir, "sweep.csv"), budget_curve_to_csv(curve));
  write_text_file(confined_path(out_dir, "sweep.svg"), budget_curve_svg(curve));
  write_text_file(confined_path(out_dir, "heatmap.svg"), bucket_heatmap_svg(random_rep));
  report["sweep"] = budget_curve_to_json(curve);

  if (cfg.qubits >= 2) {
    std::vector<std::string> names;
    for (const char* family : {"ghz_", "cluster_", "phase_gadget_"}) {
      names.push_back(family + std::to_string(cfg.qubits));
    }
    if (cfg.qubits == 5) names.push_back("perfect_513");
    const auto t2 = std::chrono::steady_clock::now();
    BenchReport srep = run_suite(structured_suite(names), tr.model, search);
    timing["structured_suite_s"] = seconds_since(t2);
    json sj = report_to_json(srep);
    sj.erase("timing");
    write_text_file(confined_path(out_dir, "structured.json"), sj.dump(2) + "\n");
    report["structured"] = sj["targets"];
  } else {
    // One qubit: every unitary of depth <= 4 is an exhaustive target list.
    std::vector<BenchTarget> targets;
    std::size_t i = 0;
    for (const Circuit& c : enumerate_targets(1, 4)) {
      targets.push_back({"depth" + std::to_string(c.size()) + "_" + std::to_string(i++),
                         static_cast<int>(t_count(c)), c, circuit_unitary(c)});
    }
    const auto t2 = std::chrono::steady_clock::now();
    BenchReport erep = run_suite(targets, tr.model, search);
    timing["enumerated_suite_s"] = seconds_since(t2);
    json ej = report_to_json(erep);
    ej.erase("timing");
    write_text_file(confined_path(out_dir, "enumerated.json"), ej.dump(2) + "\n");
    report["enumerated"] = {{"targets", erep.targets.size()}, {"successes", erep.successes()}};
  }
  report["search"] = search_config_json(search);
  timing["total_s"] = seconds_since(t0);
  report["timing"] = timing;
  write_text_file(confined_path(out_dir, "quickstart.json"), report.dump(2) + "\n");
  return report;
}

int run_cli(int argc, char** argv) {
  CLI::App app{"mdlsynth: Clifford+T circuit synthesis with a learned description-length model"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "Expand all help");

  std::uint64_t seed = 0;
  int workers = 1;
  std::string log_level = "warn";
  std::string out_dir = ".";
  app.add_option("--seed", seed, "Root seed for every random stream");
  app.add_option("--workers", workers, "Worker threads")
      ->envname("MDLSYNTH_WORKERS")
      ->check(CLI::Range(1, 256));
  app.add_option("--log-level", log_level, "debug, info, warn, error or off");
  app.add_option("--out-dir", out_dir, "Directory all outputs are written under")
      ->envname("MDLSYNTH_OUT_DIR");

  auto out = [&](const std::string& rel) { return confined_path(out_dir, rel); };
  auto print = [](const json& j) { std::cout << j.dump(2) << std::endl; };

  // gen
  auto* gen = app.add_subcommand("gen", "Generate a labelled dataset");
  int gen_qubits = 2;
  long gen_examples = 0;
  int gen_tmin = 0, gen_tmax = -1, gen_gmin = 1, gen_gmax = -1;
  bool gen_no_curriculum = false;
  std::string gen_out = "data.mdld";
  gen->add_option("--qubits", gen_qubits)->check(CLI::Range(1, kMaxQubits));
  gen->add_option("--examples,--count", gen_examples, "Number of examples")->required()->check(CLI::PositiveNumber);
  gen->add_option("--t-min", gen_tmin);
  gen->add_option("--t-max", gen_tmax);
  gen->add_option("--gates-min", gen_gmin);
  gen->add_option("--gates-max", gen_gmax);
  gen->add_flag("--no-curriculum", gen_no_curriculum, "Only emit the full-circuit example");
  gen->add_option("--out", gen_out);

  // train
  auto* tr = app.add_subcommand("train", "Train a description-length model");
  int tr_qubits = 2;
  std::string tr_data, tr_out = "model.mdlm", tr_metrics = "metrics.csv", tr_hidden;
  std::optional<int> tr_epochs, tr_steps, tr_batch, tr_replay, tr_val;
  std::optional<double> tr_lr;
  tr->add_option("--qubits", tr_qubits)->check(CLI::Range(1, kMaxQubits));
  tr->add_option("--data", tr_data, "Dataset file; streams fresh data when omitted")->check(CLI::ExistingFile);
  bool tr_stream = false;
  tr->add_flag("--stream", tr_stream, "Stream fresh data (the default without --data)")->excludes("--data");
  tr->add_option("--hidden", tr_hidden, "Hidden widths, e.g. 256,128,64");
  tr->add_option("--epochs", tr_epochs);
  tr->add_option("--steps-per-epoch", tr_steps);
  tr->add_option("--batch", tr_batch);
  tr->add_option("--lr", tr_lr, "Peak learning rate");
  tr->add_option("--replay", tr_replay);
  tr->add_option("--validation-size", tr_val);
  tr->add_option("--out", tr_out);
  tr->add_option("--metrics", tr_metrics);

  // synth
  auto* sy = app.add_subcommand("synth", "Synthesize a circuit for a target");
  std::string sy_target, sy_model, sy_out, sy_report;
  SearchConfig scfg;
  bool no_perm = false, no_inv = false;
  sy->add_option("--target", sy_target, ".circ circuit or .mat unitary")->required()->check(CLI::ExistingFile);
  sy->add_option("--model", sy_model)->required()->check(CLI::ExistingFile);
  auto add_search_flags = [&](CLI::App* sub) {
    sub->add_option("--beam", scfg.beam_width);
    sub->add_option("--trials", scfg.trials);
    sub->add_option("--tau", scfg.temperature);
    sub->add_option("--threshold", scfg.threshold);
    sub->add_option("--max-steps", scfg.max_steps);
    sub->add_flag("--no-permutations", no_perm);
    sub->add_flag("--no-inverse", no_inv);
  };
  add_search_flags(sy);
  sy->add_option("--out", sy_out, "Write the circuit here");
  sy->add_option("--report", sy_report, "Write a JSON report here");

  // oracle
  auto* orc = app.add_subcommand("oracle", "Exact minimum gate count by exhaustive search");
  std::string or_target, or_out;
  int or_depth = 6;
  double or_threshold = kDefaultThreshold;
  std::size_t or_budget = kDefaultStateBudget;
  orc->add_option("--target", or_target)->required()->check(CLI::ExistingFile);
  orc->add_option("--max-depth", or_depth)->check(CLI::Range(0, 30));
  orc->add_option("--threshold", or_threshold);
  orc->add_option("--state-budget", or_budget);
  orc->add_option("--out", or_out);

  // optimize
  auto* opt = app.add_subcommand("optimize", "Peephole-optimize a circuit");
  std::string op_in, op_out;
  opt->add_option("--circuit", op_in)->required()->check(CLI::ExistingFile);
  opt->add_option("--out", op_out);

  // bench
  auto* bench = app.add_subcommand("bench", "Benchmark suites");
  bench->require_subcommand(1);
  std::string b_model, b_out, b_csv, b_budgets = "1,5,25,100";
  std::vector<std::string> b_targets;
  int b_qubits = 0, b_per_bucket = 20, b_tmin = 0, b_tmax = 8, b_gmax = 12, b_oracle = 0;
  bool b_svg = false;
  auto add_bench_common = [&](CLI::App* sub) {
    sub->add_option("--model", b_model)->required()->check(CLI::ExistingFile);
    add_search_flags(sub);
    sub->add_option("--out", b_out, "JSON report");
    sub->add_option("--csv", b_csv, "CSV report");
    sub->add_flag("--emit-svg", b_svg, "Also write SVG plots next to the JSON report");
  };
  auto add_random = [&](CLI::App* sub) {
    sub->add_option("--qubits", b_qubits, "Defaults to the model's width");
    sub->add_option("--per-bucket", b_per_bucket);
    sub->add_option("--t-min", b_tmin);
    sub->add_option("--t-max", b_tmax);
    sub->add_option("--gates-max", b_gmax);
    sub->add_option("--oracle-depth", b_oracle, "Record exact minima up to this depth");
  };
  auto* b_struct = bench->add_subcommand("structured", "Structured reference circuits");
  add_bench_common(b_struct);
  b_struct->add_option("--targets", b_targets, "Names; defaults to every row the model can take");
  auto* b_rand = bench->add_subcommand("random", "Random targets bucketed by T-count");
  add_bench_common(b_rand);
  add_random(b_rand);
  auto* b_sweep = bench->add_subcommand("sweep", "Success rate against trial budget");
  add_bench_common(b_sweep);
  add_random(b_sweep);
  b_sweep->add_option("--budgets", b_budgets);

  // metrics-trace
  auto* mt = app.add_subcommand("metrics-trace", "Distances along a circuit's synthesis path");
  std::string mt_circuit, mt_target, mt_model, mt_out;
  mt->add_option("--circuit", mt_circuit)->required()->check(CLI::ExistingFile);
  mt->add_option("--target", mt_target, "Defaults to the circuit's own unitary")->check(CLI::ExistingFile);
  mt->add_option("--model", mt_model)->check(CLI::ExistingFile);
  mt->add_option("--out", mt_out, "CSV file; stdout when omitted");

  // quickstart
  auto* qs = app.add_subcommand("quickstart", "Data, training and benchmarks in one run");
  QuickstartConfig qcfg;
  qs->add_option("--qubits", qcfg.qubits)->check(CLI::Range(1, kMaxQubits));
  qs->add_option("--epochs", qcfg.epochs);
  qs->add_option("--steps-per-epoch", qcfg.steps_per_epoch);
  qs->add_option("--trials", qcfg.trials);
  qs->add_option("--per-bucket", qcfg.per_bucket);
  qs->add_option("--t-max", qcfg.t_max);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    log::set_level(log::parse_level(log_level));
    log::set_run_id(std::to_string(seed));
    scfg.seed = seed;
    scfg.workers = workers;
    scfg.permutation_trials = !no_perm;
    scfg.inverse_trials = !no_inv;

    if (*gen) {
      StreamConfig sc = desk_preset(gen_qubits, seed).stream;
      if (gen_tmax >= 0) sc.sampler.t_count = {gen_tmin, gen_tmax};
      else sc.sampler.t_count.lo = gen_tmin;
      if (gen_gmax >= 0) sc.sampler.gate_count = {gen_gmin, gen_gmax};
      else sc.sampler.gate_count.lo = gen_gmin;
      sc.examples.curriculum = !gen_no_curriculum;
      try {
        sc.sampler.validate();
      } catch (const Error& e) {
        throw UsageError(e.what());
      }
      Dataset data{gen_qubits, {}};
      auto src = make_source(sc, workers);
      while (data.examples.size() < static_cast<std::size_t>(gen_examples)) {
        data.examples.push_back(*src->next());
      }
      const fs::path path = out(gen_out);
      write_dataset(data, path);
      print({{"examples", data.examples.size()}, {"qubits", gen_qubits}, {"out", path.string()}});
      return 0;
    }

    if (*tr) {
      DeskPreset p = desk_preset(tr_qubits, seed);
      TrainConfig& tc = p.train;
      if (!tr_hidden.empty()) tc.hidden = parse_int_list(tr_hidden);
      if (tr_epochs) tc.epochs = *tr_epochs;
      if (tr_steps) tc.steps_per_epoch = *tr_steps;
      if (tr_batch) tc.batch_size = *tr_batch;
      if (tr_lr) tc.peak_lr = *tr_lr;
      if (tr_replay) tc.replay_buffer = *tr_replay;
      if (tr_val) tc.validation_size = *tr_val;
      tc.cosine_t_max = tc.total_steps();
      tc.warmup_steps = std::min<long>(tc.warmup_steps, tc.total_steps() / 10);
      try {
        tc.validate();
      } catch (const Error& e) {
        throw UsageError(e.what());
      }
      std::vector<TrainingExample> validation;
      std::unique_ptr<ExampleSource> src;
      if (!tr_data.empty()) {
        Dataset d = read_dataset(tr_data);
        if (d.qubits != tr_qubits) {
          throw Error(ErrorCode::kDimensionMismatch,
                      "dataset has " + std::to_string(d.qubits) + " qubits, --qubits is " +
                          std::to_string(tr_qubits));
        }
        const std::size_t nval =
            std::min<std::size_t>(static_cast<std::size_t>(tc.validation_size), d.examples.size() / 5);
        validation.assign(d.examples.end() - static_cast<std::ptrdiff_t>(nval), d.examples.end());
        d.examples.resize(d.examples.size() - nval);
        src = std::make_unique<VectorSource>(std::move(d.examples));
      } else {
        validation = validation_examples(p.stream, static_cast<std::size_t>(tc.validation_size));
        src = make_source(p.stream, workers);
      }
      const auto t0 = std::chrono::steady_clock::now();
      TrainResult res = train(*src, validation, tr_qubits, tc);
      const fs::path mpath = out(tr_out);
      save_model(res.model, mpath);
      write_text_file(out(tr_metrics), format_metrics_csv(res.log));
      const EpochMetrics& last = res.log.back();
      print({{"model", mpath.string()},
             {"layers", res.model.layer_dims()},
             {"examples_consumed", res.examples_consumed},
             {"final_val_mse", last.val_mse},
             {"final_val_mae", last.val_mae},
             {"timing", {{"train_s", seconds_since(t0)}}}});
      return 0;
    }

    if (*sy) {
      try {
        scfg.validate();
      } catch (const Error& e) {
        throw UsageError(e.what());
      }
      const Unitary target = read_target_file(sy_target);
      const MlpModel model = load_model(sy_model);
      const SynthesisResult res = synthesize(target, model, scfg);
      json j;
      j["success"] = res.success();
      j["gates"] = res.success() ? json(res.circuit->size()) : json(nullptr);
      j["t_count"] = res.success() ? json(t_count(*res.circuit)) : json(nullptr);
      j["fidelity"] = res.achieved_fidelity;
      j["circuit"] = res.success() ? json(circuit_line(*res.circuit)) : json(nullptr);
      j["trials_used"] = res.trials_used;
      j["steps_used"] = res.steps_used;
      j["search"] = search_config_json(scfg);
      json trials = json::array();
      for (const TrialRecord& t : res.trials) {
        trials.push_back({{"index", t.index},
                          {"permutation", t.variant.permutation},
                          {"inverse", t.variant.inverse},
                          {"success", t.success},
                          {"gates", t.gates},
                          {"raw_gates", t.raw_gates},
                          {"fidelity", t.fidelity},
                          {"steps", t.steps}});
      }
      j["trials"] = std::move(trials);
      j["timing"] = {{"wall_time_s", res.wall_time_s}};
      if (res.success() && !sy_out.empty()) write_circuit_file(*res.circuit, out(sy_out));
      if (!sy_report.empty()) write_text_file(out(sy_report), j.dump(2) + "\n");
      json summary = j;
      summary.erase("trials");
      print(summary);
      return 0;
    }

    if (*orc) {
      const Unitary target = read_target_file(or_target);
      const OracleResult r = exact_mdl(target, or_depth, or_threshold, or_budget);
      json j{{"found", r.found()}, {"states", r.states}, {"threshold", or_threshold}};
      if (r.found()) {
        j["depth"] = r.depth;
        j["fidelity"] = r.fidelity;
        j["circuit"] = circuit_line(*r.circuit);
        if (!or_out.empty()) write_circuit_file(*r.circuit, out(or_out));
      } else {
        j["lower_bound"] = r.depth + 1;
      }
      print(j);
      return 0;
    }

    if (*opt) {
      const Circuit c = read_circuit_file(op_in);
      const Circuit o = optimize(c);
      if (!op_out.empty()) write_circuit_file(o, out(op_out));
      print({{"input_gates", c.size()},
             {"output_gates", o.size()},
             {"t_count", t_count(o)},
             {"circuit", circuit_line(o)}});
      return 0;
    }

    if (*bench) {
      try {
        scfg.validate();
      } catch (const Error& e) {
        throw UsageError(e.what());
      }
      const MlpModel model = load_model(b_model);
      auto write_reports = [&](const BenchReport& rep, const std::string& default_name) {
        const fs::path jpath = out(b_out.empty() ? default_name + ".json" : b_out);
        write_text_file(jpath, report_to_json(rep).dump(2) + "\n");
        if (!b_csv.empty()) write_text_file(out(b_csv), report_to_csv(rep));
        if (b_svg) {
          fs::path rel = fs::path(b_out.empty() ? default_name + ".json" : b_out);
          rel.replace_extension(".heatmap.svg");
          write_text_file(out(rel.string()), bucket_heatmap_svg(rep));
        }
        return jpath;
      };
      auto random_targets = [&] {
        RandomSuiteConfig rs;
        rs.qubits = b_qubits > 0 ? b_qubits : model.qubits();
        rs.per_bucket = b_per_bucket;
        rs.t_min = b_tmin;
        rs.t_max = b_tmax;
        rs.gate_count = {1, b_gmax};
        rs.seed = derive_seed(seed, "suite");
        try {
          return random_suite(rs);
        } catch (const Error& e) {
          if (e.code() == ErrorCode::kInvalidArgument) throw UsageError(e.what());
          throw;
        }
      };
      if (*b_struct) {
        std::vector<std::string> names = b_targets;
        if (names.empty()) {
          for (const std::string& n : structured_catalog()) {
            if (build_structured(n).qubits <= model.qubits()) names.push_back(n);
          }
        }
        const BenchReport rep = run_suite(structured_suite(names), model, scfg);
        const fs::path p = write_reports(rep, "structured");
        print({{"successes", rep.successes()}, {"targets", rep.targets.size()}, {"out", p.string()}});
        return 0;
      }
      if (*b_rand) {
        const BenchReport rep = run_suite(random_targets(), model, scfg, {b_oracle});
        const fs::path p = write_reports(rep, "random");
        print({{"successes", rep.successes()},
               {"targets", rep.targets.size()},
               {"success_rate", rep.success_rate()},
               {"out", p.string()}});
        return 0;
      }
      if (*b_sweep) {
        const std::vector<int> budgets = parse_int_list(b_budgets);
        if (!std::is_sorted(budgets.begin(), budgets.end()) || budgets.front() < 1) {
          throw UsageError("--budgets must be positive and ascending");
        }
        BenchReport rep;
        const auto curve = budget_sweep(random_targets(), model, scfg, budgets, &rep);
        const fs::path jpath = out(b_out.empty() ? "sweep.json" : b_out);
        write_text_file(jpath, json{{"curve", budget_curve_to_json(curve)},
                                    {"report", report_to_json(rep)}}
                                   .dump(2) + "\n");
        write_text_file(out(b_csv.empty() ? "sweep.csv" : b_csv), budget_curve_to_csv(curve));
        if (b_svg) {
          fs::path rel = fs::path(b_out.empty() ? "sweep.json" : b_out);
          rel.replace_extension(".svg");
          write_text_file(out(rel.string()), budget_curve_svg(curve));
        }
        print({{"curve", budget_curve_to_json(curve)}, {"out", jpath.string()}});
        return 0;
      }
    }

    if (*mt) {
      const Circuit c = read_circuit_file(mt_circuit);
      const Unitary target = mt_target.empty() ? circuit_unitary(c) : read_target_file(mt_target);
      if (target.qubits() != c.qubits()) {
        throw Error(ErrorCode::kDimensionMismatch, "circuit and target registers differ");
      }
      std::optional<MlpModel> model;
      if (!mt_model.empty()) {
        model = load_model(mt_model);
        check_model_compatible(*model, c.qubits());
      }
      std::ostringstream csv;
      csv << "step,d_hs,d_worst,f_avg,predicted_mdl\n";
      csv.precision(10);
      Unitary r = target;
      std::vector<double> features(model ? feature_width(model->qubits()) : 0);
      const Unitary id = Unitary::identity(c.qubits());
      for (std::size_t t = 0; t <= c.size(); ++t) {
        if (t > 0) r.right_multiply_in_place(c[t - 1], /*adjoint=*/true);
        csv << t << ',' << hs_distance(r, id) << ',' << worst_case_distance(r, id) << ','
            << fidelity_to_identity(r) << ',';
        if (model) {
          residual_features_into(r, model->qubits(), features);
          csv << model->predict(features);
        }
        csv << '\n';
      }
      if (mt_out.empty()) {
        std::cout << csv.str();
      } else {
        write_text_file(out(mt_out), csv.str());
      }
      return 0;
    }

    if (*qs) {
      qcfg.seed = seed;
      qcfg.workers = workers;
      if (qcfg.epochs < 1 || qcfg.steps_per_epoch < 1 || qcfg.trials < 1 || qcfg.per_bucket < 0 ||
          qcfg.t_max < 0) {
        throw UsageError("quickstart sizes must be positive");
      }
      json rep = run_quickstart(qcfg, out_dir);
      print(rep);
      return 0;
    }
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n" << app.help();
    return 2;
  } catch (const Error& e) {
    std::cerr << "error[" << error_code_name(e.code()) << "]: " << e.what() << std::endl;
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << std::endl;
    return 1;
  }
  return 2;
}

}  // namespace mdlsynth
