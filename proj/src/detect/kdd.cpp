#include "mids/detect/kdd.hpp"

#include <zlib.h>

#include <charconv>
#include <unordered_map>

#include "mids/common/error.hpp"
#include "mids/common/text.hpp"

namespace mids::detect {

const std::array<AttributeInfo, kKddAttributes>& kdd_schema() {
  static const std::array<AttributeInfo, kKddAttributes> schema = {{
      {"duration", false},
      {"protocol_type", true},
      {"service", true},
      {"flag", true},
      {"src_bytes", false},
      {"dst_bytes", false},
      {"land", true},
      {"wrong_fragment", false},
      {"urgent", false},
      {"hot", false},
      {"num_failed_logins", false},
      {"logged_in", true},
      {"num_compromised", false},
      {"root_shell", false},
      {"su_attempted", false},
      {"num_root", false},
      {"num_file_creations", false},
      {"num_shells", false},
      {"num_access_files", false},
      {"num_outbound_cmds", false},
      {"is_host_login", true},
      {"is_guest_login", true},
      {"count", false},
      {"srv_count", false},
      {"serror_rate", false},
      {"srv_serror_rate", false},
      {"rerror_rate", false},
      {"srv_rerror_rate", false},
      {"same_srv_rate", false},
      {"diff_srv_rate", false},
      {"srv_diff_host_rate", false},
      {"dst_host_count", false},
      {"dst_host_srv_count", false},
      {"dst_host_same_srv_rate", false},
      {"dst_host_diff_srv_rate", false},
      {"dst_host_same_src_port_rate", false},
      {"dst_host_srv_diff_host_rate", false},
      {"dst_host_serror_rate", false},
      {"dst_host_srv_serror_rate", false},
      {"dst_host_rerror_rate", false},
      {"dst_host_srv_rerror_rate", false},
  }};
  return schema;
}

void KddData::require_clean() const {
  if (errors.empty()) return;
  const auto& e = errors.front();
  throw Error(ErrorCode::MalformedLine, "line " + std::to_string(e.line) + ": " + e.reason + " (" +
                                            std::to_string(errors.size()) + " bad line(s))");
}

namespace {

class Parser {
 public:
  explicit Parser(KddData& out) : out_(out) {}

  void line(std::string_view s) {
    ++line_no_;
    if (!s.empty() && s.back() == '\r') s.remove_suffix(1);
    if (text::trim(s).empty()) return;
    const auto fields = text::split(s, ',');
    if (fields.size() != kKddAttributes + 1) {
      out_.errors.push_back({line_no_, "expected 42 fields, found " + std::to_string(fields.size())});
      return;
    }
    ConnectionRecord r;
    const auto& schema = kdd_schema();
    for (std::size_t a = 0; a < kKddAttributes; ++a) {
      const auto f = text::trim(fields[a]);
      if (schema[a].symbolic) {
        if (f.empty()) return fail("empty value for " + std::string(schema[a].name));
        r.values[a] = static_cast<double>(intern(symbol_ids_[a], out_.symbols[a], f));
        continue;
      }
      double v = 0;
      const auto [ptr, ec] = std::from_chars(f.data(), f.data() + f.size(), v);
      if (ec != std::errc() || ptr != f.data() + f.size()) {
        return fail("non-numeric value '" + std::string(f) + "' for " + std::string(schema[a].name));
      }
      r.values[a] = v;
    }
    auto label = text::trim(fields[kKddAttributes]);
    if (!label.empty() && label.back() == '.') label.remove_suffix(1);
    if (label.empty()) return fail("empty label");
    r.label = intern(label_ids_, out_.labels, label);
    out_.records.push_back(r);
  }

 private:
  void fail(std::string reason) { out_.errors.push_back({line_no_, std::move(reason)}); }

  static std::uint32_t intern(std::unordered_map<std::string, std::uint32_t>& ids, std::vector<std::string>& names,
                              std::string_view s) {
    const auto [it, fresh] = ids.try_emplace(std::string(s), static_cast<std::uint32_t>(names.size()));
    if (fresh) names.emplace_back(s);
    return it->second;
  }

  KddData& out_;
  std::size_t line_no_ = 0;
  std::unordered_map<std::string, std::uint32_t> label_ids_;
  std::array<std::unordered_map<std::string, std::uint32_t>, kKddAttributes> symbol_ids_;
};

}  // namespace

KddData parse_kdd_text(std::string_view contents) {
  KddData out;
  Parser p(out);
  std::size_t start = 0;
  while (start < contents.size()) {
    auto end = contents.find('\n', start);
    if (end == std::string_view::npos) end = contents.size();
    p.line(contents.substr(start, end - start));
    start = end + 1;
  }
  return out;
}

KddData parse_kdd(const std::filesystem::path& path) {
  // gzread passes uncompressed files through unchanged.
  gzFile f = gzopen(path.c_str(), "rb");
  if (f == nullptr) throw Error(ErrorCode::Io, "cannot open '" + path.string() + "'");
  KddData out;
  Parser p(out);
  std::string pending;
  std::vector<char> buf(1 << 16);
  for (;;) {
    const int n = gzread(f, buf.data(), static_cast<unsigned>(buf.size()));
    if (n < 0) {
      int code = 0;
      const std::string msg = gzerror(f, &code);
      gzclose(f);
      throw Error(ErrorCode::Io, "reading '" + path.string() + "': " + msg);
    }
    if (n == 0) break;
    pending.append(buf.data(), static_cast<std::size_t>(n));
    std::size_t start = 0;
    for (auto nl = pending.find('\n'); nl != std::string::npos; nl = pending.find('\n', start)) {
      p.line(std::string_view(pending).substr(start, nl - start));
      start = nl + 1;
    }
    pending.erase(0, start);
  }
  gzclose(f);
  if (!pending.empty()) p.line(pending);
  return out;
}

std::string_view to_string(AttackClass c) {
  switch (c) {
    case AttackClass::DoS: return "DoS";
    case AttackClass::R2L: return "R2L";
    case AttackClass::U2R: return "U2R";
    case AttackClass::Probe: return "Probe";
    case AttackClass::Normal: return "Normal";
  }
  return "?";
}

AttackClass parse_attack_class(std::string_view s) {
  for (auto c : kAttackClasses) {
    if (to_string(c) == s) return c;
  }
  throw Error(ErrorCode::UnknownLabel, "unknown attack class '" + std::string(s) + "'");
}

LabelMap LabelMap::parse(std::string_view contents) {
  LabelMap m;
  for (const auto& [label, cls] : text::parse_key_values(contents)) m.entries_[label] = parse_attack_class(cls);
  if (m.entries_.empty()) throw Error(ErrorCode::ParseError, "label map is empty");
  return m;
}

LabelMap LabelMap::load(const std::filesystem::path& path) { return parse(text::read_file(path)); }

AttackClass LabelMap::map(std::string_view label) const {
  const auto it = entries_.find(label);
  if (it == entries_.end()) throw Error(ErrorCode::UnknownLabel, "label '" + std::string(label) + "' is not mapped");
  return it->second;
}

}  // namespace mids::detect
