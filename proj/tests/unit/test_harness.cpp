#include "doctest.h"

#include <filesystem>
#include <set>

#include "qinterf/harness/config.hpp"
#include "qinterf/harness/correlate.hpp"
#include "qinterf/harness/csv.hpp"
#include "qinterf/harness/experiment.hpp"
#include "qinterf/harness/plot.hpp"
#include "qinterf/harness/sweep.hpp"
#include "qinterf/harness/tworoom_experiment.hpp"

using namespace qinterf::harness;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("qinterf-test-" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

ExperimentConfig tiny(const std::string& extra = "") {
  std::string text = R"({"env":"cartpole","hidden":8,"buffer":200,"M":40,"iterations":4,"batch":8,"eval_rollouts":3,
                         "eval_buffer":50,"window":3,"step_size":0.001)";
  text += extra + "}";
  return parse_config(text);
}

IterationRecord record(int iter, double interference, double degradation, double ret = 1.0) {
  IterationRecord r;
  r.iter = iter;
  r.iter_interference = interference;
  r.iter_degradation = degradation;
  r.return_disc = ret;
  r.return_undisc = ret;
  return r;
}

std::size_t count(const std::string& haystack, const std::string& needle) {
  std::size_t n = 0;
  for (std::size_t pos = haystack.find(needle); pos != std::string::npos; pos = haystack.find(needle, pos + 1)) ++n;
  return n;
}

}  // namespace

TEST_CASE("config defaults follow the standard hyperparameters") {
  const ExperimentConfig c = parse_config("{}");
  CHECK(c.batch == 64);
  CHECK(c.step_size == 3e-4);
  CHECK(c.iterations == 400);
  CHECK(c.optimizer == "adam");
  CHECK(c.eval_rollouts == 50);
  CHECK(c.eval_buffer == 1000);
  CHECK(c.window == 200);
}

TEST_CASE("config errors") {
  CHECK_THROWS_AS(parse_config(R"({"hiden": 64})"), std::invalid_argument);
  CHECK_THROWS_AS(parse_config(R"({"hidden": "wide"})"), std::invalid_argument);
  CHECK_THROWS_AS(parse_config(R"({"hidden": 64)"), std::invalid_argument);
  CHECK_THROWS_AS(parse_config(R"([1, 2])"), std::invalid_argument);
  CHECK_THROWS_AS(parse_config(R"({"env": "pong"})"), std::invalid_argument);
  CHECK_THROWS_AS(parse_config(R"({"env": "tworoom"})"), std::invalid_argument);
  CHECK_THROWS_AS(parse_config(R"({"algorithm": "ga", "batch": 63})"), std::invalid_argument);
  CHECK_THROWS_AS(parse_config(R"({"epsilon": 1.5})"), std::invalid_argument);
  CHECK_THROWS_AS(parse_config(R"({"optimizer": "lbfgs"})"), std::invalid_argument);
}

TEST_CASE("config serialization is canonical and the run id follows it") {
  const ExperimentConfig a = parse_config(R"({"seed": 3, "hidden": 128})");
  const ExperimentConfig b = parse_config(to_json(a));
  CHECK(to_json(a) == to_json(b));
  CHECK(run_id(a) == run_id(b));
  CHECK(run_id(a).size() == 16);
  ExperimentConfig c = a;
  c.seed = 4;
  CHECK(run_id(a) != run_id(c));
}

TEST_CASE("variant labels and the large batch transform") {
  ExperimentConfig c = parse_config(R"({"variant": "dqi-no-target"})");
  CHECK(c.variant_label() == "dqi-no-target");
  c.algorithm = "oa";
  CHECK(c.variant_label() == "oa+dqi-no-target");
  const ExperimentConfig large = large_batch_config(parse_config("{}"), 10);
  CHECK(large.effective_batch() == 640);
  CHECK(large_batch_config(parse_config("{}"), 40).effective_batch() == 2560);
}

TEST_CASE("csv number formatting round-trips") {
  for (double v : {0.1, -31.744540498961264, 1e-300, 12345678.9, 0.0}) CHECK(parse_double(format_double(v)) == v);
  CHECK(format_double(std::nan("")) == "nan");
  CHECK(std::isnan(parse_double("nan")));
  CHECK_THROWS_AS(parse_double("1.0x"), std::invalid_argument);
  CHECK(split_csv_line("a,,b") == std::vector<std::string>{"a", "", "b"});
}

TEST_CASE("summary over a window uses only the most recent iterations") {
  std::vector<IterationRecord> recs;
  for (int i = 1; i <= 400; ++i) recs.push_back(record(i, i <= 200 ? 1000.0 : i - 200, i <= 200 ? -5.0 : 1.0));
  const RunSummary s = summarize(recs, 200);
  CHECK(s.interference_across_iters == 190.0);
  CHECK(s.degradation == 1.0);
  CHECK(s.status == "ok");
  for (int i = 0; i < 200; ++i) recs[static_cast<std::size_t>(i)].iter_interference = -1.0;
  CHECK(summarize(recs, 200).interference_across_iters == 190.0);
}

TEST_CASE("summary of a diverged run covers the completed iterations") {
  std::vector<IterationRecord> recs{record(1, 1, 0), record(2, 3, 2)};
  IterationRecord bad = record(3, NAN, NAN);
  bad.status = kStatusDiverged;
  recs.push_back(bad);
  const RunSummary s = summarize(recs, 200);
  CHECK(s.status == "diverged");
  CHECK(s.interference_across_iters == 3.0);
  CHECK(std::isnan(summarize(std::vector<IterationRecord>{bad}, 5).mean_return));
}

TEST_CASE("a run writes the schema, is deterministic and verifies") {
  const fs::path out = scratch("run");
  const ExperimentConfig c = tiny();
  const RunResult a = run_experiment(c, out / "a");
  const RunResult b = run_experiment(c, out / "b");
  CHECK(a.env_steps == 4 * 40);
  CHECK(a.records.size() == 4);
  const std::string csv_a = read_file((out / "a" / a.run_id / "iterations.csv").string());
  CHECK(csv_a == read_file((out / "b" / b.run_id / "iterations.csv").string()));
  CHECK(csv_a.substr(0, csv_a.find('\n')) ==
        "run_id,seed,env,variant,hidden,buffer,M,iter,return_disc,return_undisc,iter_interference,iter_degradation,"
        "status");
  for (const auto& r : a.records) CHECK(r.iter_interference >= 0.0);
  const VerifyReport ok = verify(out / "a" / a.run_id);
  CHECK(ok.ok());
  CHECK(ok.runs_checked == 1);

  // Tampering with a summary scalar is caught.
  const fs::path summary = out / "a" / a.run_id / "summary.csv";
  CsvTable t = read_csv(summary.string());
  t.rows[0][t.column("degradation")] = "123";
  {
    CsvWriter w(summary.string(), t.header);
    w.write_row(t.rows[0]);
  }
  CHECK_FALSE(verify(out / "a" / a.run_id).ok());
  CHECK_FALSE(verify(out / "nothing-here").ok());
}

TEST_CASE("400 iterations of 200 steps are 80000 environment steps") {
  const ExperimentConfig c = parse_config(
      R"({"env":"cartpole","hidden":2,"hidden_layers":1,"buffer":100,"M":200,"iterations":400,"batch":1,
          "optimizer":"sgd","step_size":0.0,"eval_rollouts":1,"eval_buffer":1,"interference_stride":1000})");
  CHECK(run_experiment(c).env_steps == 80000);
}

TEST_CASE("large batch with factor 1 and GA with lambda 0 reproduce the DQI run") {
  const ExperimentConfig base = tiny();
  const RunResult dqi = run_experiment(base);
  const RunResult large = run_experiment(large_batch_config(base, 1));
  ExperimentConfig ga = base;
  ga.algorithm = "ga";
  ga.ga_lambda = 0.0;
  const RunResult gar = run_experiment(ga);
  for (std::size_t i = 0; i < dqi.records.size(); ++i) {
    CHECK(dqi.records[i].return_disc == large.records[i].return_disc);
    CHECK(dqi.records[i].iter_interference == large.records[i].iter_interference);
    CHECK(dqi.records[i].return_disc == gar.records[i].return_disc);
    CHECK(dqi.records[i].iter_interference == gar.records[i].iter_interference);
  }
}

TEST_CASE("every algorithm runs") {
  for (const char* extra : {R"(,"algorithm":"oa","oa_inner_updates":2,"oa_meta_step":0.5)",
                            R"(,"algorithm":"ga","ga_lambda":1.0)", R"(,"algorithm":"large","large_factor":2)",
                            R"(,"env":"acrobot","variant":"dqi-no-target")", R"(,"optimizer":"rmsprop")"}) {
    const RunResult r = run_experiment(tiny(extra));
    CHECK(r.records.size() == 4);
    CHECK(r.summary.status == "ok");
  }
}

TEST_CASE("grid expansion") {
  GridSpec g = parse_grid(R"({"base": {"iterations": 10}, "axes": {"buffer": [1000, 10000], "hidden": [64, 256]}})");
  const auto configs = g.expand(3);
  CHECK(configs.size() == 12);
  CHECK(configs[0].buffer == 1000);
  CHECK(configs[0].hidden == 64);
  CHECK(configs[1].seed == 1);
  CHECK(configs[3].hidden == 256);
  CHECK(configs[6].buffer == 10000);
  std::set<std::string> ids;
  for (const auto& c : configs) ids.insert(run_id(c));
  CHECK(ids.size() == 12);
  CHECK(paper_scale_grid().expand(10).size() == 360);
  CHECK(desk_correlation_grid().expand(5).size() == 20);
  CHECK_THROWS_AS(parse_grid(R"({"axes": {"hidden": []}})"), std::invalid_argument);
  CHECK_THROWS_AS(parse_grid(R"({"axes": {"hidden": [64]}, "extra": 1})"), std::invalid_argument);
  CHECK_THROWS_AS(parse_grid(R"({"axes": {"hiden": [64]}})"), std::invalid_argument);
}

TEST_CASE("sweep results do not depend on parallelism") {
  const fs::path out = scratch("sweep");
  GridSpec g;
  g.base_json = to_json(tiny());
  g.axes = {{"hidden", {"4", "8"}}, {"buffer", {"100", "200"}}};
  const auto configs = g.expand(2);
  const SweepOutcome one = run_sweep(configs, 1, out / "j1");
  const SweepOutcome three = run_sweep(configs, 3, out / "j3");
  CHECK(one.summaries.size() == 8);
  const std::string s1 = read_file((out / "j1" / "summary.csv").string());
  CHECK(s1 == read_file((out / "j3" / "summary.csv").string()));
  CHECK(read_csv((out / "j1" / "summary.csv").string()).rows.size() == 8);
  const VerifyReport report = verify(out / "j3");
  CHECK(report.ok());
  CHECK(report.runs_checked == 8);
}

TEST_CASE("pearson and spearman") {
  const std::vector<double> x{-2, -1, 0, 1, 2};
  std::vector<double> lin, cube;
  for (double v : x) {
    lin.push_back(2 * v + 3);
    cube.push_back(v * v * v);
  }
  CHECK(*pearson(x, lin) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(*spearman(x, lin) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(*spearman(x, cube) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(*pearson(x, cube) == doctest::Approx(0.9429903335828896).epsilon(1e-14));
  const std::vector<double> flat(5, 1.0);
  CHECK_FALSE(pearson(flat, x).has_value());
  CHECK_FALSE(spearman(flat, x).has_value());
  CHECK(average_ranks(std::vector<double>{3, 1, 2, 2}) == std::vector<double>{4, 1, 2.5, 2.5});
}

TEST_CASE("correlating a summary csv skips diverged rows") {
  const fs::path dir = scratch("corr");
  const std::string path = (dir / "s.csv").string();
  write_file(path,
             "run_id,interference_across_iters,degradation,status\n"
             "a,1,2,ok\nb,2,4,ok\nc,3,6,ok\nd,4,-100,diverged\ne,nan,1,ok\n");
  const Correlation c = correlate_csv(path, "interference_across_iters", "degradation");
  CHECK(c.n == 3);
  CHECK(*c.pearson == doctest::Approx(1.0));
  CHECK(correlate_csv(path, "interference_across_iters", "degradation", true).n == 4);
  CHECK_THROWS_AS(correlate_csv(path, "missing", "degradation"), std::invalid_argument);
  write_file(path, "run_id,interference_across_iters,degradation,status\na,1,2,ok\nb,2,4,ok\n");
  CHECK_THROWS_AS(correlate_csv(path, "interference_across_iters", "degradation"), std::invalid_argument);
}

TEST_CASE("moving average") {
  CHECK(moving_average({1, 2, 3, 4}, 2) == std::vector<double>{1, 1.5, 2.5, 3.5});
  CHECK(moving_average({5}, 10) == std::vector<double>{5});
}

TEST_CASE("scatter plot: one marker per run, interference clipped at 1") {
  CsvTable t;
  t.header = {"run_id", "interference_across_iters", "degradation", "status", "hidden"};
  for (int i = 0; i < 12; ++i) {
    t.rows.push_back({"r" + std::to_string(i), format_double(i == 0 ? 7.5 : 0.05 * i), format_double(i), "ok",
                      i % 2 ? "64" : "256"});
  }
  const std::string svg = render_plot(PlotKind::scatter, {t});
  CHECK(svg.rfind("<svg", 0) == 0);
  CHECK(count(svg, "class=\"marker\"") == 12);
  CHECK(svg == render_plot(PlotKind::scatter, {t}));
  // the clipped run sits exactly at interference 1
  CsvTable at_one = t;
  at_one.rows[0][1] = "1";
  CHECK(svg == render_plot(PlotKind::scatter, {at_one}));
}

TEST_CASE("plots reject empty or mismatched input without writing") {
  const fs::path dir = scratch("plot");
  const std::string empty = (dir / "empty.csv").string();
  CsvWriter(empty, iteration_csv_header());
  const std::string svg = (dir / "out.svg").string();
  CHECK_THROWS_AS(emit_plot(PlotKind::curves, {empty}, svg), std::invalid_argument);
  CHECK_FALSE(fs::exists(svg));
  CHECK_THROWS_AS(emit_plot(PlotKind::scatter, {empty}, svg), std::invalid_argument);
  CHECK_FALSE(fs::exists(svg));
  CHECK_THROWS_AS(parse_plot_kind("pie"), std::invalid_argument);
}

TEST_CASE("curves and per-run plots from a run") {
  const fs::path out = scratch("plots-run");
  const RunResult r = run_experiment(tiny(), out);
  const std::string csv = (out / r.run_id / "iterations.csv").string();
  for (PlotKind kind : {PlotKind::curves, PlotKind::per_run}) {
    const std::string path = (out / "fig.svg").string();
    emit_plot(kind, {csv}, path);
    const std::string svg = read_file(path);
    CHECK(svg.find("moving average") != std::string::npos);
    CHECK(svg.find("<polyline") != std::string::npos);
  }
}

TEST_CASE("two-room with tile coding: room-1 knowledge survives room-2 training") {
  const fs::path out = scratch("tworoom");
  TwoRoomConfig c;
  c.agent = "tilecode-linear";
  c.steps = 30000;
  c.eval_every = 2500;
  c.eval_buffer = 200;
  const TwoRoomResult r = run_tworoom(c, out);
  CHECK(r.switch_step == 10000);
  CHECK(r.records.size() == 13);
  const ForgettingSummary f = summarize_forgetting(r, 20000);
  CHECK(f.max_post_interference == 0.0);
  CHECK(f.max_post_deviation == 0.0);
  bool learned_something = false;
  for (const auto& rec : r.records) {
    if (rec.step > r.switch_step) CHECK(rec.active_room == 1);
    learned_something = learned_something || rec.room1_return_undisc == -38.0;
  }
  CHECK(learned_something);
  const std::string csv = (out / "tworoom-tilecode-linear-seed0.csv").string();
  CHECK(read_csv(csv).rows.size() == 13);
  emit_plot(PlotKind::tworoom, {csv}, (out / "tworoom.svg").string());
  CHECK(fs::exists(out / "tworoom.svg"));
}

TEST_CASE("two-room DQI agent switches rooms on an iteration boundary") {
  TwoRoomConfig c;
  c.agent = "dqi-target";
  c.steps = 1300;
  c.eval_every = 400;
  c.hidden = 8;
  c.M = 100;
  c.batch = 8;
  const TwoRoomResult r = run_tworoom(c);
  CHECK(r.switch_step == 400);
  CHECK(r.records.front().step == 0);
  CHECK(r.records.back().step == 1300);
  CHECK_THROWS_AS(run_tworoom(TwoRoomConfig{.agent = "sarsa"}), std::invalid_argument);
}
