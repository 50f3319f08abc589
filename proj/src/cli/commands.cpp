#include "mids/cli/commands.hpp"

#include <algorithm>
#include <iostream>
#include <map>

#include "mids/agents/knowledge.hpp"
#include "mids/agents/runtime.hpp"
#include "mids/bayes/network_io.hpp"
#include "mids/common/error.hpp"
#include "mids/common/rng.hpp"
#include "mids/common/text.hpp"
#include "mids/detect/learn.hpp"
#include "mids/msbn/ljf.hpp"
#include "mids/simnet/network.hpp"
#include "mids/trust/dtm.hpp"

namespace mids::cli {

namespace {

constexpr std::string_view kTraceMagic = "# mids-trace ";
constexpr std::string_view kDefaultNewClass = "NewAttack";

std::filesystem::path require_bundle_dir(const Options& o) {
  if (!o.bundle) throw Error(ErrorCode::InvalidArgument, "--bundle is required");
  return *o.bundle;
}

Bundle open_bundle(const Options& o, const ExperimentConfig& c) { return read_bundle(require_bundle_dir(o), c.hash()); }

detect::KddData load_dataset(const ExperimentConfig& c) {
  auto data = detect::parse_kdd(c.require_dataset());
  data.require_clean();
  return data;
}

// Class index of every parsed record in `classes`, via the label map.
std::vector<std::uint32_t> record_classes(const detect::KddData& data, const ExperimentConfig& c,
                                          const std::vector<std::string>& classes) {
  const auto map = detect::LabelMap::load(c.labels_path());
  std::vector<std::uint32_t> by_label(data.labels.size());
  for (std::size_t l = 0; l < data.labels.size(); ++l) {
    const auto name = detect::to_string(map.map(data.labels[l]));
    const auto it = std::find(classes.begin(), classes.end(), name);
    if (it == classes.end()) throw Error(ErrorCode::UnknownLabel, "class '" + std::string(name) + "' is not in the model");
    by_label[l] = static_cast<std::uint32_t>(it - classes.begin());
  }
  std::vector<std::uint32_t> out;
  out.reserve(data.records.size());
  for (const auto& r : data.records) out.push_back(by_label[r.label]);
  return out;
}

msbn::Msbn section_for(const bayes::BayesNet& net, const ExperimentConfig& c) {
  if (c.sectioning) return msbn::load_sectioning(*c.sectioning, net);
  return msbn::auto_section(net, c.subnets);
}

std::string join(const std::vector<double>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) out += (i ? "," : "") + text::format_double(v[i]);
  return out;
}

std::string pad(std::string s, std::size_t width) {
  if (s.size() < width) s.append(width - s.size(), ' ');
  return s;
}

std::string trace_header(std::string_view kind, const std::vector<std::pair<std::string, std::string>>& inputs) {
  std::string out = std::string(kTraceMagic) + std::string(kind) + '\n';
  for (const auto& [k, v] : inputs) out += "# " + k + ' ' + v + '\n';
  return out;
}

// --- trust-sim ---------------------------------------------------------

struct TrustRun {
  trust::Scenario scenario;
  trust::ScenarioOutcome outcome;
  std::string trace;
};

TrustRun run_trust(const std::filesystem::path& scenario_path) {
  TrustRun r;
  r.scenario = trust::load_scenario(scenario_path);
  simnet::Network<std::string> net({r.scenario.hosts, r.scenario.seed, 1, 1});
  for (auto h : r.scenario.isolated) net.isolate(h);
  r.outcome = trust::run_scenario(r.scenario, true);
  simnet::log_dtm_round(net.trace(), 0, r.outcome.result);
  for (auto h : r.outcome.result.newly_isolated) net.isolate(h);
  r.trace = trace_header("trust-sim", {{"scenario", scenario_path.string()}}) + net.trace().to_text();
  return r;
}

// --- detect-run --------------------------------------------------------

struct DetectRun {
  agents::RuntimeReport report;
  detect::DiscreteDataset records;
  std::string trace;
};

DetectRun run_detect(const Options& o) {
  const auto c = resolve_config(o);
  const auto b = open_bundle(o, c);
  const auto data = load_dataset(c);
  const auto& classes = b.net.variable(detect::kClassVar).states;
  const auto rc = record_classes(data, c, classes);
  // A class-stratified slice of the held-out records.
  std::vector<std::uint32_t> strata;
  for (auto r : b.test) strata.push_back(rc[r]);
  const auto n = std::min(c.detect_records, b.test.size());
  std::vector<std::size_t> rows;
  for (auto i : detect::stratified_sample(strata, n, derive_seed(c.require_seed(), 3))) rows.push_back(b.test[i]);

  auto binning = b.binning;
  binning.classes = classes;
  DetectRun run;
  run.records = detect::apply_binning(binning, data, rows, rc);
  agents::RuntimeConfig rt;
  rt.policy = c.policy();
  rt.key_seed = c.require_seed();
  if (c.compromise_host) rt.compromise = simnet::Compromise{*c.compromise_host, c.compromise_tick};
  run.report = agents::run_distributed(b.msbn, run.records, rt);
  run.trace = trace_header("detect-run", {{"config", o.config ? o.config->string() : ""},
                                          {"bundle", o.bundle->string()},
                                          {"seed", std::to_string(c.require_seed())}}) +
              run.report.trace;
  return run;
}

std::map<std::string, std::string> trace_inputs(std::string_view contents) {
  std::map<std::string, std::string> out;
  for (auto line : text::split(contents, '\n')) {
    if (!text::starts_with(line, "#")) break;
    if (text::starts_with(line, kTraceMagic)) {
      out["kind"] = std::string(line.substr(kTraceMagic.size()));
      continue;
    }
    const auto rest = text::trim(line.substr(1));
    const auto sp = rest.find(' ');
    out[std::string(rest.substr(0, sp))] = sp == std::string_view::npos ? "" : std::string(rest.substr(sp + 1));
  }
  return out;
}

}  // namespace

ExperimentConfig resolve_config(const Options& o) {
  ExperimentConfig c;
  std::vector<std::string> overridden;
  if (o.dataset) overridden.emplace_back("dataset");
  if (o.scenario) overridden.emplace_back("scenario");
  if (o.config) c = load_config(*o.config, overridden);
  if (o.seed) c.seed = o.seed;
  if (o.dataset) {
    if (!std::filesystem::exists(*o.dataset)) throw Error(ErrorCode::Io, "dataset file not found: " + o.dataset->string());
    c.dataset = *o.dataset;
  }
  if (o.scenario) c.scenario = *o.scenario;
  return c;
}

Bundle train_bundle(const ExperimentConfig& c) {
  const auto pipeline = c.pipeline();
  const auto data = load_dataset(c);
  const auto part = detect::partition(data, detect::LabelMap::load(c.labels_path()), pipeline);
  auto model = detect::train_model(data, part, pipeline);
  Bundle b;
  b.training = detect::discretize_rows(model, data, part, part.train);
  b.msbn = section_for(model.net, c);
  b.net = std::move(model.net);
  b.binning = std::move(model.binning);
  b.test = part.test;
  b.config_hash = c.hash();
  return b;
}

Evaluation evaluate_bundle(const ExperimentConfig& c, const Bundle& b) {
  const auto data = load_dataset(c);
  Evaluation e;
  e.classes = b.net.variable(detect::kClassVar).states;
  auto binning = b.binning;
  binning.classes = e.classes;
  const auto test = detect::apply_binning(binning, data, b.test, record_classes(data, c, e.classes));
  e.report = detect::evaluate(b.net, test, c.tau, &e.predictions);
  return e;
}

int cmd_train(const Options& o, std::ostream& out) {
  const auto c = resolve_config(o);
  const auto dir = require_bundle_dir(o);
  const auto b = train_bundle(c);
  write_bundle(dir, b);
  out << "bundle\t" << dir.string() << '\n'
      << "config\t" << b.config_hash << '\n'
      << "training rows\t" << b.training.rows() << '\n'
      << "test rows\t" << b.test.size() << '\n'
      << "features\t" << b.training.width() << '\n'
      << "subnets\t" << b.msbn.subnet_count() << '\n';
  for (const auto& w : b.binning.warnings) out << "warning\t" << w << '\n';
  return kExitOk;
}

int cmd_evaluate(const Options& o, std::ostream& out) {
  const auto c = resolve_config(o);
  const auto dir = require_bundle_dir(o);
  const auto b = open_bundle(o, c);
  const auto e = evaluate_bundle(c, b);
  const auto table = detect::format_report_table(e.report);
  const auto records = detect::format_report_records(e.report);
  text::write_file(dir / "report.txt", table);
  text::write_file(dir / "report.records", records);
  text::write_file(dir / "predictions.tsv", detect::format_prediction_log(e.classes, e.predictions));
  out << (o.format == Format::Table ? table : records);
  return kExitOk;
}

int cmd_section(const Options& o, std::ostream& out) {
  const auto c = resolve_config(o);
  const auto b = open_bundle(o, c);
  const auto m = section_for(b.net, c);
  if (o.format == Format::Records) {
    out << msbn::serialize_sectioning(m);
    return kExitOk;
  }
  out << "subnet  vars  cpts  neighbors  variables\n";
  for (const auto& s : m.subnets()) {
    std::string nb, vars;
    for (auto n : s.neighbors) nb += (nb.empty() ? "" : ",") + std::to_string(n);
    for (auto v : s.variables) vars += (vars.empty() ? "" : " ") + b.net.variable(v).name;
    out << pad(std::to_string(s.id), 8) << pad(std::to_string(s.variables.size()), 6)
        << pad(std::to_string(m.owned_cpts(s.id).size()), 6) << pad(nb.empty() ? "-" : nb, 11) << vars << '\n';
  }
  for (const auto& d : m.dsepsets()) {
    std::string vars;
    for (auto v : d.variables) vars += ' ' + b.net.variable(v).name;
    out << "link " << d.a << '-' << d.b << ':' << vars << '\n';
  }
  return kExitOk;
}

int cmd_infer(const Options& o, std::ostream& out) {
  const auto b = read_bundle(require_bundle_dir(o));
  bayes::Evidence ev;
  for (auto item : text::split(o.evidence, ',')) {
    item = text::trim(item);
    if (item.empty()) continue;
    const auto eq = item.find('=');
    if (eq == std::string_view::npos) throw Error(ErrorCode::InvalidArgument, "evidence must be name=state");
    const auto v = b.net.require(text::trim(item.substr(0, eq)));
    const auto state = std::string(text::trim(item.substr(eq + 1)));
    const auto& states = b.net.variable(v).states;
    const auto it = std::find(states.begin(), states.end(), state);
    ev.set(v, it != states.end() ? static_cast<std::size_t>(it - states.begin()) : text::parse_uint(state, "state"));
  }
  ev.check_against(b.net);
  auto ljf = msbn::compile_ljf(b.msbn);
  for (const auto& s : b.msbn.subnets()) {
    bayes::Evidence local;
    for (auto [v, st] : ev) {
      if (b.msbn.contains(s.id, v)) local.set(v, st);
    }
    if (!local.empty()) ljf.enter_evidence({s.id, local});
  }
  ljf.full_communication();
  const auto& classes = b.net.variable(detect::kClassVar).states;
  for (const auto& var : b.net.variables()) {
    const auto p = ljf.local_posterior(b.msbn.holders(var.id).front(), var.id);
    if (o.format == Format::Records) {
      out << "variable=" << var.name << " p=" << join(p.probabilities) << '\n';
      continue;
    }
    out << pad(var.name, 28);
    for (std::size_t s = 0; s < var.states.size(); ++s) {
      out << ' ' << var.states[s] << '=' << text::format_fixed(p.probabilities[s], 6);
    }
    out << '\n';
  }
  const auto post = ljf.local_posterior(b.msbn.holders(detect::kClassVar).front(), detect::kClassVar).probabilities;
  const auto d = detect::decide(post, detect::normal_index(classes), resolve_config(o).tau);
  out << "decision\t" << detect::to_string(d.kind) << '\t' << classes[d.cls] << '\n';
  return kExitOk;
}

int cmd_trust_sim(const Options& o, std::ostream& out) {
  const auto c = resolve_config(o);
  if (!c.scenario) throw Error(ErrorCode::InvalidArgument, "no scenario given (--scenario or config key 'scenario')");
  const auto run = run_trust(*c.scenario);
  if (o.format == Format::Table) {
    out << trust::format_outcome(run.scenario, run.outcome, false);
  } else {
    for (const auto& inst : run.outcome.result.instances) {
      out << "host=" << inst.leader << " choice=" << trust::to_string(inst.choice) << " majority=" << int(inst.majority)
          << " verdict=" << trust::to_string(inst.verdict) << " messages=" << inst.sma.messages << '\n';
    }
  }
  if (o.trace) text::write_file(*o.trace, run.trace);
  for (const auto& m : run.outcome.mismatches) std::cerr << "expectation failed: " << m << '\n';
  return run.outcome.mismatches.empty() ? kExitOk : kExitFailure;
}

int cmd_detect_run(const Options& o, std::ostream& out) {
  const auto run = run_detect(o);
  const auto dir = *o.bundle;
  text::write_file(o.trace ? *o.trace : dir / "detect-run.trace", run.trace);
  text::write_file(o.alerts ? *o.alerts : dir / "alerts.log", agents::format_alert_log(run.report.alerts));
  const auto& classes = run.records.classes;
  const auto normal = detect::normal_index(classes);
  const auto tau = resolve_config(o).tau;
  if (o.format == Format::Table) out << "epoch  record    truth     decision     class     p\n";
  std::size_t correct = 0;
  for (std::size_t e = 0; e < run.report.epochs.size(); ++e) {
    const auto& ep = run.report.epochs[e];
    const auto& post = ep.class_posterior[0];
    const auto d = detect::decide(post, normal, tau);
    const auto& truth = classes[run.records.labels[e]];
    correct += d.kind != detect::DecisionKind::Anomaly && d.cls == run.records.labels[e] ? 1 : 0;
    if (o.format == Format::Table) {
      out << pad(std::to_string(ep.epoch), 7) << pad(std::to_string(ep.record), 10) << pad(truth, 10)
          << pad(std::string(detect::to_string(d.kind)), 13) << pad(classes[d.cls], 10)
          << text::format_fixed(post[d.cls], 4) << '\n';
    } else {
      out << "epoch=" << ep.epoch << " record=" << ep.record << " truth=" << truth << " decision=" << detect::to_string(d.kind)
          << " class=" << classes[d.cls] << " p=" << join(post) << '\n';
    }
  }
  out << "records\t" << run.report.epochs.size() << "\ncorrect\t" << correct << "\nalerts\t" << run.report.alerts.size()
      << "\nsuspicions\t" << run.report.suspicions << "\nisolated";
  for (const auto& iso : run.report.isolations) out << ' ' << iso.host << '@' << iso.tick;
  out << '\n';
  return kExitOk;
}

int cmd_review_alerts(const Options& o, std::ostream& out) {
  const auto c = resolve_config(o);
  const auto dir = require_bundle_dir(o);
  auto b = open_bundle(o, c);
  if (!o.decisions) throw Error(ErrorCode::InvalidArgument, "--decisions is required");
  const auto alerts_path = o.alerts ? *o.alerts : dir / "alerts.log";
  auto alerts = agents::parse_alert_log(text::read_file(alerts_path));
  const auto decisions = agents::parse_decisions(text::read_file(*o.decisions));
  const auto outcome = agents::review_alerts(alerts, decisions, std::string(kDefaultNewClass));
  out << "decisions\t" << decisions.size() << "\nconfirmed\t" << outcome.confirmed << "\nrejected\t" << outcome.rejected
      << '\n';
  if (decisions.empty()) {
    out << "no changes\n";
    return kExitOk;
  }
  agents::Knowledgebase kb{b.net, b.msbn, b.training};
  for (const auto& [label, group] : outcome.new_classes) {
    std::vector<std::vector<std::uint16_t>> rows;
    for (const auto* a : group) rows.push_back(a->row);
    const auto before = kb.net.arity(detect::kClassVar);
    kb = agents::update_knowledgebase(kb, label, rows, c.kb_min_records, c.alpha);
    out << "learned\t" << label << " from " << rows.size() << " record(s); class arity " << before << " -> "
        << kb.net.arity(detect::kClassVar) << '\n';
  }
  if (!outcome.new_classes.empty()) {
    b.net = kb.net;
    b.msbn = kb.msbn;
    b.training = kb.training;
    b.binning.classes = b.net.variable(detect::kClassVar).states;
    write_bundle(dir, b);
  }
  text::write_file(alerts_path, agents::format_alert_log(alerts));
  return kExitOk;
}

int cmd_replay(const Options& o, std::ostream& out) {
  if (!o.trace) throw Error(ErrorCode::InvalidArgument, "--trace is required");
  const auto saved = text::read_file(*o.trace);
  const auto inputs = trace_inputs(saved);
  const auto kind = inputs.count("kind") ? inputs.at("kind") : "";
  std::string again;
  if (kind == "trust-sim") {
    again = run_trust(o.scenario ? *o.scenario : std::filesystem::path(inputs.at("scenario"))).trace;
  } else if (kind == "detect-run") {
    Options re = o;
    if (!re.config && !inputs.at("config").empty()) re.config = inputs.at("config");
    if (!re.bundle) re.bundle = inputs.at("bundle");
    if (!re.seed) re.seed = text::parse_uint(inputs.at("seed"), "seed");
    again = run_detect(re).trace;
  } else {
    throw Error(ErrorCode::ParseError, o.trace->string() + " is not a trace written by this tool");
  }
  if (again == saved) {
    out << "identical\t" << text::split(saved, '\n').size() - 1 << " lines\n";
    return kExitOk;
  }
  const auto a = text::split(saved, '\n');
  const auto b = text::split(again, '\n');
  std::size_t i = 0;
  while (i < a.size() && i < b.size() && a[i] == b[i]) ++i;
  out << "differs at line " << i + 1 << "\nsaved:  " << (i < a.size() ? a[i] : "<end>")
      << "\nreplay: " << (i < b.size() ? b[i] : "<end>") << '\n';
  return kExitFailure;
}

}  // namespace mids::cli
