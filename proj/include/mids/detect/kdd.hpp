#pragma once

// KDD-Cup-99 connection records: 41 comma-separated attributes followed by
// the label, e.g. "0,tcp,http,SF,181,5450,0,...,0.00,normal."

#include <array>
#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace mids::detect {

inline constexpr std::size_t kKddAttributes = 41;

struct AttributeInfo {
  std::string_view name;
  bool symbolic;
};

// Attribute names and kinds in file order.
const std::array<AttributeInfo, kKddAttributes>& kdd_schema();

// Symbolic attributes hold an index into KddData::symbols[attribute].
struct ConnectionRecord {
  std::array<double, kKddAttributes> values{};
  std::uint32_t label = 0;  // index into KddData::labels
};

struct LineError {
  std::size_t line = 0;
  std::string reason;
};

struct KddData {
  std::vector<ConnectionRecord> records;
  std::vector<std::string> labels;
  std::array<std::vector<std::string>, kKddAttributes> symbols;
  std::vector<LineError> errors;

  std::string_view label(const ConnectionRecord& r) const { return labels[r.label]; }
  // Throws MalformedLine naming the first bad line if any line failed.
  void require_clean() const;
};

// Blank lines are skipped; a trailing '.' on the label is stripped. Bad
// lines are collected in `errors` and left out of `records`.
KddData parse_kdd_text(std::string_view text);
// Reads plain or gzip-compressed files (by content, not extension).
// Throws Io if the file cannot be opened.
KddData parse_kdd(const std::filesystem::path& path);

enum class AttackClass : std::uint8_t { DoS, R2L, U2R, Probe, Normal };
inline constexpr std::array<AttackClass, 5> kAttackClasses = {AttackClass::DoS, AttackClass::R2L, AttackClass::U2R,
                                                               AttackClass::Probe, AttackClass::Normal};
std::string_view to_string(AttackClass c);
// Throws UnknownLabel.
AttackClass parse_attack_class(std::string_view s);

// `label = Class` per line, as in config/kdd_labels.txt.
class LabelMap {
 public:
  static LabelMap parse(std::string_view text);
  static LabelMap load(const std::filesystem::path& path);

  // Throws UnknownLabel.
  AttackClass map(std::string_view label) const;
  const std::map<std::string, AttackClass, std::less<>>& entries() const { return entries_; }

 private:
  std::map<std::string, AttackClass, std::less<>> entries_;
};

}  // namespace mids::detect
