// Runs the acceptance criteria and prints one PASS/FAIL line for each.
//   acceptance [--criterion N]
// Exit 0 when every selected criterion passes, 1 otherwise.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "experiments.hpp"
#include "mids/bayes/enumerate.hpp"
#include "mids/bayes/junction_tree.hpp"
#include "mids/cli/commands.hpp"
#include "mids/common/error.hpp"
#include "mids/common/text.hpp"
#include "mids/msbn/ljf.hpp"
#include "mids/trust/dtm.hpp"
#include "random_nets.hpp"
#include "sma_sweep.hpp"

using namespace mids;
namespace fs = std::filesystem;

namespace {

const fs::path kSource = MIDS_SOURCE_DIR;
const fs::path kWork = fs::path(MIDS_BINARY_DIR) / "acceptance_work";

struct Result {
  bool pass = false;
  std::string detail;
};

double linf(const std::vector<double>& a, const std::vector<double>& b) {
  double m = a.size() == b.size() ? 0 : INFINITY;
  for (std::size_t i = 0; i < std::min(a.size(), b.size()); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

std::string sci(double v) {
  std::ostringstream s;
  s.precision(2);
  s << std::scientific << v;
  return s.str();
}

Result inference_oracle() {
  Rng rng(2024);
  double worst = 0;
  for (int trial = 0; trial < 200; ++trial) {
    testing::RandomNetOptions o;
    o.variables = 2 + rng.uniform(11);
    o.max_parents = 1 + rng.uniform(4);
    const auto net = testing::random_net(rng, o);
    const auto e = testing::random_evidence(rng, net, rng.uniform(net.size()));
    const auto jt = bayes::propagate(bayes::compile(net), e);
    const auto truth = bayes::brute_force_marginals(net, e);
    for (bayes::VarId v = 0; v < net.size(); ++v) {
      worst = std::max(worst, linf(bayes::query_posterior(jt, v).probabilities, truth[v].probabilities));
    }
  }
  return {worst <= 1e-9, "200 networks, max L-inf " + sci(worst)};
}

Result msbn_equivalence() {
  Rng rng(77);
  std::size_t done = 0, attempts = 0;
  double worst = 0, worst_link = 0;
  while (done < 60 && attempts < 2000) {
    ++attempts;
    testing::RandomNetOptions o;
    o.variables = 6 + rng.uniform(10);
    o.max_parents = 1 + rng.uniform(3);
    o.connected = true;
    const auto net = testing::random_net(rng, o);
    const auto m = testing::random_sectioning(rng, net, 1 + rng.uniform(3));
    if (m.subnet_count() < 2 || m.subnet_count() > 4) continue;
    ++done;
    auto ljf = msbn::compile_ljf(m);
    const auto global = testing::random_evidence(rng, net, 1 + rng.uniform(4));
    for (const auto& [v, s] : global) {
      const auto holders = m.holders(v);
      ljf.enter_evidence({holders[rng.uniform(holders.size())], bayes::Evidence{{v, s}}});
    }
    ljf.full_communication();
    const auto jt = bayes::propagate(bayes::compile(net), global);
    for (const auto& s : m.subnets()) {
      for (auto v : s.variables) {
        worst = std::max(worst, linf(ljf.local_posterior(s.id, v).probabilities, bayes::query_posterior(jt, v).probabilities));
      }
    }
    for (const auto& d : m.dsepsets()) {
      for (auto v : d.variables) {
        worst_link = std::max(worst_link, linf(ljf.local_posterior(d.a, v).probabilities,
                                               ljf.local_posterior(d.b, v).probabilities));
      }
    }
  }
  return {done >= 50 && worst <= 1e-9 && worst_link <= 1e-9,
          std::to_string(done) + " sectionings, max L-inf " + sci(worst) + ", link disagreement " + sci(worst_link)};
}

Result sma_sweep() {
  std::string detail;
  bool ok = true;
  for (std::size_t n = 3; n <= 6; ++n) {
    const auto s = testing::sweep_sma(n);
    ok = ok && s.ok();
    detail += "n=" + std::to_string(n) + ": " + std::to_string(s.runs) + " runs, max " + std::to_string(s.max_messages) +
              " msgs (bound " + std::to_string(2 * n * (n - 1) + (n - 1)) + ")";
    if (!s.ok()) detail += " FIRST FAILURE " + s.first_failure;
    if (n < 6) detail += "; ";
  }
  return {ok, detail};
}

Result dtm_cases() {
  const std::vector<std::string> files = {"dtm_case_1.txt", "dtm_case_1_literal.txt", "dtm_case_2.txt",
                                          "dtm_case_3.txt", "dtm_case_3_relayed.txt", "dtm_case_3_agrees.txt",
                                          "dtm_case_4.txt"};
  std::string failures;
  for (const auto& f : files) {
    const auto s = trust::load_scenario(kSource / "scenarios" / f);
    const auto o = trust::run_scenario(s, false);
    for (const auto& m : o.mismatches) failures += ' ' + f + "[" + m + "]";
  }
  return {failures.empty(), std::to_string(files.size()) + " scenarios" + (failures.empty() ? "" : ";" + failures)};
}

Result kdd_envelope() {
  fs::path data;
  if (const char* env = std::getenv("KDD_DATASET")) data = env;
  for (const char* name : {"data/kddcup.data_10_percent.gz", "data/kddcup.data_10_percent"}) {
    if (data.empty() && fs::exists(kSource / name)) data = kSource / name;
  }
  if (data.empty() || !fs::exists(data)) {
    return {false, "KDD-99 10% file not available (set KDD_DATASET or place data/kddcup.data_10_percent.gz); "
                   "criterion not evaluated"};
  }
  cli::Options o;
  o.config = kSource / "config/kdd.conf";
  o.dataset = data;
  const auto c = cli::resolve_config(o);
  const auto bundle = cli::train_bundle(c);
  const auto e = cli::evaluate_bundle(c, bundle);
  std::map<std::string, double> rate;
  for (const auto& m : e.report.classes) rate[m.name] = m.detection_rate;
  const bool envelope = rate["DoS"] >= 0.90 && rate["Probe"] >= 0.80 && rate["Normal"] >= 0.90;
  const bool order = rate["DoS"] > rate["Probe"] && rate["Probe"] > rate["U2R"] && rate["U2R"] > rate["R2L"];
  std::string detail;
  for (const char* k : {"DoS", "Probe", "U2R", "R2L", "Normal"}) detail += std::string(k) + '=' + text::format_fixed(rate[k], 4) + ' ';
  detail += envelope ? "envelope ok" : "envelope missed";
  detail += order ? ", ordering ok" : ", ordering violated";
  return {envelope && order, detail};
}

Result novelty() {
  const auto o = testing::novelty_experiment(42);
  return {o.anomaly_rate_before >= 0.95 && o.detection_after >= 0.90,
          "anomaly before update " + text::format_fixed(o.anomaly_rate_before, 3) + ", detection after " +
              text::format_fixed(o.detection_after, 3) + " (" + std::to_string(o.alerts) + " alerts confirmed)"};
}

Result fault_tolerance() {
  const auto o = testing::compromise_experiment(42, 2, 50);
  const bool exact = o.attacked.isolations.size() == 1 && o.attacked.isolations[0].host == 2;
  const bool recovered = o.first_clean_epoch < o.attacked.epochs.size() && o.max_gap_after <= 1e-6;
  const bool replay = o.replay.trace == o.attacked.trace;
  std::string isolated;
  for (const auto& i : o.attacked.isolations) isolated += ' ' + std::to_string(i.host) + "@tick" + std::to_string(i.tick);
  return {o.attacked.hosts == 10 && exact && recovered && replay && o.clean.isolations.empty(),
          std::to_string(o.attacked.hosts) + " hosts, isolated:" + (isolated.empty() ? " none" : isolated) +
              ", max gap from epoch " + std::to_string(o.first_clean_epoch) + " " + sci(o.max_gap_after) +
              (replay ? ", replay identical" : ", replay DIFFERS")};
}

int run(const std::string& cmd) {
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::map<std::string, std::string> snapshot(const fs::path& dir) {
  std::map<std::string, std::string> out;
  for (const auto& e : fs::recursive_directory_iterator(dir)) {
    if (e.is_regular_file()) out[fs::relative(e.path(), dir).string()] = text::read_file(e.path());
  }
  return out;
}

Result cli_determinism() {
  const std::string mids = MIDS_CLI_PATH;
  const auto dir = kWork / "cli";
  const auto conf = (kSource / "tests/data/kdd_like.conf").string();
  const auto scenario = (kSource / "scenarios/dtm_case_4.txt").string();
  const std::vector<std::pair<std::string, int>> steps = {
      {"train --config " + conf + " --bundle B > train.out", 0},
      {"evaluate --config " + conf + " --bundle B > evaluate.out", 0},
      {"evaluate --config " + conf + " --bundle B --format records > evaluate.records", 0},
      {"section --config " + conf + " --bundle B > section.out", 0},
      {"infer --bundle B --evidence protocol_type=v0 > infer.out", 0},
      {"trust-sim --scenario " + scenario + " --trace trust.trace > trust.out", 0},
      {"detect-run --config " + conf + " --bundle B --trace detect.trace > detect.out", 0},
      {"replay --trace trust.trace > replay_trust.out", 0},
      {"replay --trace detect.trace > replay_detect.out", 0},
      {"review-alerts --config " + conf + " --bundle B --decisions decisions.txt > review.out", 0},
      {"train --config " + conf + " --dataset missing.csv --bundle X > /dev/null 2> missing.err", 2},
  };
  std::vector<std::map<std::string, std::string>> runs;
  std::string problems;
  for (int pass = 0; pass < 2; ++pass) {
    fs::remove_all(dir);
    fs::create_directories(dir);
    text::write_file(dir / "decisions.txt", "1 confirm\n2 reject\n");
    for (const auto& [step, want] : steps) {
      const int got = run("cd '" + dir.string() + "' && '" + mids + "' " + step);
      if (got != want) problems += " [" + step.substr(0, step.find(' ')) + " exit " + std::to_string(got) + "]";
    }
    runs.push_back(snapshot(dir));
  }
  std::size_t differing = 0;
  for (const auto& [name, contents] : runs[0]) {
    const auto it = runs[1].find(name);
    if (it == runs[1].end() || it->second != contents) {
      ++differing;
      problems += " [" + name + " differs]";
    }
  }
  if (runs[0].size() != runs[1].size()) problems += " [file sets differ]";
  const auto err = runs[0].count("missing.err") ? runs[0]["missing.err"] : "";
  if (err.find("missing.csv") == std::string::npos) problems += " [missing-dataset message does not name the path]";
  return {problems.empty(), std::to_string(steps.size()) + " invocations x2, " + std::to_string(runs[0].size()) +
                                " output files, " + std::to_string(differing) + " differing" + problems};
}

struct Criterion {
  int number;
  std::string name;
  double budget_seconds;
  std::function<Result()> check;
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Acceptance criteria"};
  int only = 0;
  app.add_option("--criterion", only, "Run just this criterion (1-8)")->check(CLI::Range(1, 8));
  CLI11_PARSE(app, argc, argv);

  const std::vector<Criterion> all = {
      {1, "junction tree vs enumeration", 60, inference_oracle},
      {2, "sectioned vs monolithic inference", 120, msbn_equivalence},
      {3, "signed-message agreement sweep", 120, sma_sweep},
      {4, "trust case fixtures", 10, dtm_cases},
      {5, "KDD-99 detection envelope", 600, kdd_envelope},
      {6, "novel attack learning", 60, novelty},
      {7, "compromise, isolation and recovery", 60, fault_tolerance},
      {8, "CLI determinism", 60, cli_determinism},
  };
  bool ok = true;
  for (const auto& c : all) {
    if (only != 0 && c.number != only) continue;
    const auto start = std::chrono::steady_clock::now();
    Result r;
    try {
      r = c.check();
    } catch (const std::exception& e) {
      r = {false, std::string("threw ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (secs > c.budget_seconds) {
      r.pass = false;
      r.detail += "; over the " + text::format_fixed(c.budget_seconds, 0) + " s budget";
    }
    ok = ok && r.pass;
    std::cout << "criterion " << c.number << ' ' << (r.pass ? "PASS" : "FAIL") << "  " << c.name << ": " << r.detail
              << " (" << text::format_fixed(secs, 2) << " s)" << std::endl;
  }
  return ok ? 0 : 1;
}
