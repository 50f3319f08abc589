#include <iostream>

#include <CLI11.hpp>

#include "mids/cli/commands.hpp"
#include "mids/common/error.hpp"

using namespace mids::cli;

int main(int argc, char** argv) {
  CLI::App app{"Multi-agent Bayesian intrusion detection toolkit"};
  app.require_subcommand(1);
  Options o;
  std::string format = "table";

  const auto config = [&](CLI::App* s) { s->add_option("--config", o.config, "Experiment config (key = value)"); };
  const auto seed = [&](CLI::App* s) { s->add_option("--seed", o.seed, "Overrides the config seed"); };
  const auto dataset = [&](CLI::App* s) { s->add_option("--dataset", o.dataset, "KDD file, plain or gzip"); };
  const auto bundle = [&](CLI::App* s, bool required) {
    auto* opt = s->add_option("--bundle", o.bundle, "Model bundle directory");
    if (required) opt->required();
  };
  const auto fmt = [&](CLI::App* s) {
    s->add_option("--format", format, "Output layout")->check(CLI::IsMember({"table", "records"}));
  };

  auto* train = app.add_subcommand("train", "Sample, discretize, learn and section; write a bundle");
  config(train), seed(train), dataset(train), bundle(train, true);
  auto* evaluate = app.add_subcommand("evaluate", "Classify the held-out split and report per-class rates");
  config(evaluate), seed(evaluate), dataset(evaluate), bundle(evaluate, true), fmt(evaluate);
  auto* section = app.add_subcommand("section", "Show the sectioning the config gives for a bundle's network");
  config(section), seed(section), dataset(section), bundle(section, true), fmt(section);
  auto* infer = app.add_subcommand("infer", "Posteriors of every variable given evidence");
  config(infer), bundle(infer, true), fmt(infer);
  infer->add_option("--evidence", o.evidence, "Comma-separated name=state pairs");
  auto* trust_sim = app.add_subcommand("trust-sim", "Run one trust round on a scenario");
  config(trust_sim), fmt(trust_sim);
  trust_sim->add_option("--scenario", o.scenario, "Scenario file");
  trust_sim->add_option("--trace", o.trace, "Write the replayable trace here");
  auto* detect_run = app.add_subcommand("detect-run", "Stream held-out records through the agent runtime");
  config(detect_run), seed(detect_run), dataset(detect_run), bundle(detect_run, true), fmt(detect_run);
  detect_run->add_option("--trace", o.trace, "Trace file (default <bundle>/detect-run.trace)");
  detect_run->add_option("--alerts", o.alerts, "Alert log (default <bundle>/alerts.log)");
  auto* review = app.add_subcommand("review-alerts", "Apply administrator decisions and learn confirmed anomalies");
  config(review), seed(review), dataset(review), bundle(review, true);
  review->add_option("--decisions", o.decisions, "One '<id> confirm [label]' or '<id> reject' per line")->required();
  review->add_option("--alerts", o.alerts, "Alert log (default <bundle>/alerts.log)");
  auto* replay = app.add_subcommand("replay", "Re-run a saved trace and compare byte for byte");
  replay->add_option("--trace", o.trace, "Trace file")->required();
  replay->add_option("--scenario", o.scenario, "Override the scenario named in the trace");
  config(replay), bundle(replay, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }
  o.format = format == "records" ? Format::Records : Format::Table;

  try {
    if (train->parsed()) return cmd_train(o, std::cout);
    if (evaluate->parsed()) return cmd_evaluate(o, std::cout);
    if (section->parsed()) return cmd_section(o, std::cout);
    if (infer->parsed()) return cmd_infer(o, std::cout);
    if (trust_sim->parsed()) return cmd_trust_sim(o, std::cout);
    if (detect_run->parsed()) return cmd_detect_run(o, std::cout);
    if (review->parsed()) return cmd_review_alerts(o, std::cout);
    if (replay->parsed()) return cmd_replay(o, std::cout);
  } catch (const mids::Error& e) {
    std::cerr << "mids: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "mids: internal error: " << e.what() << '\n';
    return kExitFailure;
  }
  return kExitUsage;
}
