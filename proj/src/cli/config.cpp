#include "mids/cli/config.hpp"

#include <algorithm>

#include "mids/common/error.hpp"
#include "mids/common/text.hpp"

namespace mids::cli {

namespace {

void require_exists(const std::filesystem::path& p, std::string_view key) {
  if (!std::filesystem::exists(p)) {
    throw Error(ErrorCode::Io, std::string(key) + " file not found: " + p.string());
  }
}

}  // namespace

std::uint64_t ExperimentConfig::require_seed() const {
  if (!seed) throw Error(ErrorCode::InvalidArgument, "a seed is required (config key 'seed' or --seed)");
  return *seed;
}

const std::filesystem::path& ExperimentConfig::require_dataset() const {
  if (!dataset) throw Error(ErrorCode::InvalidArgument, "no dataset given (config key 'dataset' or --dataset)");
  require_exists(*dataset, "dataset");
  return *dataset;
}

std::filesystem::path ExperimentConfig::labels_path() const {
  const auto p = labels ? *labels : source.parent_path() / "kdd_labels.txt";
  require_exists(p, "labels");
  return p;
}

detect::PipelineConfig ExperimentConfig::pipeline() const {
  detect::PipelineConfig c;
  c.seed = require_seed();
  c.sample_size = sample_size;
  c.train_fraction = split;
  c.discretize.bins = bins;
  c.discretize.features = features;
  c.alpha = alpha;
  return c;
}

agents::DetectionPolicy ExperimentConfig::policy() const {
  agents::DetectionPolicy p{tau, local_period, remote_period};
  p.validate();
  return p;
}

std::string ExperimentConfig::model_identity() const {
  std::string out;
  const auto put = [&](std::string_view k, const std::string& v) { out += std::string(k) + " = " + v + '\n'; };
  // Name and size rather than the full path, so a bundle survives a move.
  put("dataset", dataset ? dataset->filename().string() + ' ' + std::to_string(std::filesystem::file_size(*dataset)) : "");
  put("seed", seed ? std::to_string(*seed) : "");
  put("sample_size", std::to_string(sample_size));
  put("split", text::format_double(split));
  put("bins", std::to_string(bins));
  put("alpha", text::format_double(alpha));
  std::string f;
  for (const auto& s : features) f += (f.empty() ? "" : ",") + s;
  put("features", f);
  put("sectioning", sectioning ? text::hex64(text::fnv1a(text::read_file(*sectioning))) : std::to_string(subnets));
  return out;
}

std::string ExperimentConfig::hash() const { return text::hex64(text::fnv1a(model_identity())); }

ExperimentConfig parse_config(std::string_view contents, const std::filesystem::path& base_dir,
                              const std::vector<std::string>& overridden) {
  ExperimentConfig c;
  const auto path = [&](const std::string& v, std::string_view key) {
    auto p = std::filesystem::path(v);
    if (p.is_relative()) p = base_dir / p;
    p = p.lexically_normal();
    require_exists(p, key);
    return p;
  };
  for (const auto& [key, value] : text::parse_key_values(contents)) {
    if (std::find(overridden.begin(), overridden.end(), key) != overridden.end()) continue;
    if (key == "dataset") {
      c.dataset = path(value, key);
    } else if (key == "labels") {
      c.labels = path(value, key);
    } else if (key == "sectioning") {
      c.sectioning = path(value, key);
    } else if (key == "scenario") {
      c.scenario = path(value, key);
    } else if (key == "seed") {
      c.seed = text::parse_uint(value, key);
    } else if (key == "sample_size") {
      c.sample_size = text::parse_uint(value, key);
    } else if (key == "split") {
      c.split = text::parse_double(value, key);
      if (!(c.split > 0 && c.split < 1)) throw Error(ErrorCode::ParseError, "split must lie in (0, 1)");
    } else if (key == "bins") {
      c.bins = text::parse_uint(value, key);
      if (c.bins < 2) throw Error(ErrorCode::ParseError, "bins must be at least 2");
    } else if (key == "alpha") {
      c.alpha = text::parse_double(value, key);
    } else if (key == "features") {
      for (auto f : text::split(value, ',')) {
        if (!text::trim(f).empty()) c.features.emplace_back(text::trim(f));
      }
    } else if (key == "tau") {
      c.tau = text::parse_double(value, key);
    } else if (key == "subnets") {
      c.subnets = text::parse_uint(value, key);
    } else if (key == "local_period") {
      c.local_period = text::parse_uint(value, key);
    } else if (key == "remote_period") {
      c.remote_period = text::parse_uint(value, key);
    } else if (key == "kb_min_records") {
      c.kb_min_records = text::parse_uint(value, key);
    } else if (key == "detect_records") {
      c.detect_records = text::parse_uint(value, key);
    } else if (key == "compromise_host") {
      c.compromise_host = static_cast<simnet::HostId>(text::parse_uint(value, key));
    } else if (key == "compromise_tick") {
      c.compromise_tick = text::parse_uint(value, key);
    } else {
      throw Error(ErrorCode::ParseError, "unknown config key '" + key + "'");
    }
  }
  return c;
}

ExperimentConfig load_config(const std::filesystem::path& p, const std::vector<std::string>& overridden) {
  if (!std::filesystem::exists(p)) throw Error(ErrorCode::Io, "config file not found: " + p.string());
  auto c = parse_config(text::read_file(p), p.parent_path(), overridden);
  c.source = p;
  return c;
}

}  // namespace mids::cli
