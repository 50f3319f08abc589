#include "mids/cli/bundle.hpp"

#include <map>

#include "mids/bayes/network_io.hpp"
#include "mids/common/error.hpp"
#include "mids/common/text.hpp"

namespace mids::cli {

namespace {

constexpr std::string_view kManifestHeader = "mids-bundle 1";
const std::vector<std::string> kFiles = {"network.txt", "binning.txt", "sectioning.txt", "train.tsv", "test.txt"};

std::string serialize_test(const std::vector<std::size_t>& rows) {
  std::string out;
  for (auto r : rows) out += std::to_string(r) + '\n';
  return out;
}

}  // namespace

std::string serialize_rows(const detect::DiscreteDataset& d) {
  std::string out = "classes";
  for (const auto& c : d.classes) out += ' ' + c;
  out += '\n';
  for (std::size_t r = 0; r < d.rows(); ++r) {
    out += std::to_string(d.ids[r]) + '\t' + std::to_string(d.labels[r]) + '\t';
    for (std::size_t f = 0; f < d.width(); ++f) out += (f ? " " : "") + std::to_string(d.value(r, f));
    out += '\n';
  }
  return out;
}

detect::DiscreteDataset parse_rows(std::string_view contents, const detect::BinningSpec& binning) {
  detect::DiscreteDataset d;
  for (const auto& a : binning.attributes) {
    if (!a.degenerate()) d.features.push_back({a.name, a.state_names()});
  }
  std::vector<std::uint16_t> cells(d.width());
  std::size_t line_no = 0;
  for (auto line : text::split(contents, '\n')) {
    ++line_no;
    if (text::trim(line).empty()) continue;
    if (line_no == 1) {
      auto f = text::split_ws(line);
      if (f.empty() || f[0] != "classes") throw Error(ErrorCode::ParseError, "train.tsv must start with 'classes'");
      for (std::size_t i = 1; i < f.size(); ++i) d.classes.emplace_back(f[i]);
      continue;
    }
    const auto parts = text::split(line, '\t');
    const std::string where = "train.tsv line " + std::to_string(line_no);
    if (parts.size() != 3) throw Error(ErrorCode::ParseError, where + ": expected 3 tab-separated fields");
    const auto values = text::split_ws(parts[2]);
    if (values.size() != d.width()) throw Error(ErrorCode::ParseError, where + ": wrong number of cells");
    for (std::size_t f = 0; f < values.size(); ++f) {
      const auto v = text::parse_uint(values[f], "cell");
      if (v >= d.features[f].states.size()) throw Error(ErrorCode::ParseError, where + ": state out of range");
      cells[f] = static_cast<std::uint16_t>(v);
    }
    const auto label = text::parse_uint(parts[1], "label");
    if (label >= d.classes.size()) throw Error(ErrorCode::ParseError, where + ": label out of range");
    d.add_row(cells, static_cast<std::uint16_t>(label), text::parse_uint(parts[0], "id"));
  }
  return d;
}

void write_bundle(const std::filesystem::path& dir, const Bundle& b) {
  std::filesystem::create_directories(dir);
  const std::map<std::string, std::string> files = {
      {"network.txt", bayes::serialize_network(b.net)},
      {"binning.txt", detect::serialize_binning(b.binning)},
      {"sectioning.txt", msbn::serialize_sectioning(b.msbn)},
      {"train.tsv", serialize_rows(b.training)},
      {"test.txt", serialize_test(b.test)},
  };
  std::string manifest = std::string(kManifestHeader) + "\nconfig " + b.config_hash + '\n';
  for (const auto& name : kFiles) {
    const auto& contents = files.at(name);
    text::write_file(dir / name, contents);
    manifest += "file " + name + ' ' + text::hex64(text::fnv1a(contents)) + '\n';
  }
  text::write_file(dir / "manifest.txt", manifest);
}

Bundle read_bundle(const std::filesystem::path& dir, const std::optional<std::string>& expected_config) {
  if (!std::filesystem::is_directory(dir)) throw Error(ErrorCode::Io, "bundle directory not found: " + dir.string());
  const auto manifest = text::read_file(dir / "manifest.txt");
  Bundle b;
  std::map<std::string, std::string> hashes;
  std::size_t line_no = 0;
  for (auto line : text::split(manifest, '\n')) {
    ++line_no;
    if (text::trim(line).empty()) continue;
    const auto f = text::split_ws(line);
    if (line_no == 1) {
      if (text::trim(line) != kManifestHeader) throw Error(ErrorCode::BundleMismatch, "not a bundle manifest");
    } else if (f.size() == 2 && f[0] == "config") {
      b.config_hash = std::string(f[1]);
    } else if (f.size() == 3 && f[0] == "file") {
      hashes[std::string(f[1])] = std::string(f[2]);
    } else {
      throw Error(ErrorCode::BundleMismatch, "manifest line " + std::to_string(line_no) + " is not understood");
    }
  }
  if (expected_config && *expected_config != b.config_hash) {
    throw Error(ErrorCode::BundleMismatch, "bundle was trained with config " + b.config_hash + ", current config is " +
                                               *expected_config);
  }
  std::map<std::string, std::string> contents;
  for (const auto& name : kFiles) {
    const auto it = hashes.find(name);
    if (it == hashes.end()) throw Error(ErrorCode::BundleMismatch, "manifest does not list " + name);
    contents[name] = text::read_file(dir / name);
    if (text::hex64(text::fnv1a(contents[name])) != it->second) {
      throw Error(ErrorCode::BundleMismatch, name + " does not match its manifest hash");
    }
  }
  b.net = bayes::parse_network(contents["network.txt"]);
  b.binning = detect::parse_binning(contents["binning.txt"]);
  b.msbn = msbn::section_network(b.net, msbn::parse_sectioning(contents["sectioning.txt"], b.net));
  b.training = parse_rows(contents["train.tsv"], b.binning);
  for (auto line : text::split(contents["test.txt"], '\n')) {
    if (!text::trim(line).empty()) b.test.push_back(text::parse_uint(text::trim(line), "test record"));
  }
  return b;
}

}  // namespace mids::cli
