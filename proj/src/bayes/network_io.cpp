#include "mids/bayes/network_io.hpp"

#include <map>

#include "mids/common/text.hpp"

namespace mids::bayes {

namespace {

[[noreturn]] void fail(std::size_t line, const std::string& what) {
  throw Error(ErrorCode::ParseError, "network line " + std::to_string(line) + ": " + what);
}

}  // namespace

BayesNet parse_network(std::string_view contents) {
  enum class Section { None, Variables, Edges, Cpts };
  Section section = Section::None;
  BayesNet net;
  std::map<VarId, std::vector<VarId>> parents;
  std::map<VarId, std::map<std::size_t, std::vector<double>>> rows;

  std::size_t line_no = 0;
  for (auto line : text::split(contents, '\n')) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = text::trim(line);
    if (line.empty()) continue;
    if (line == "variables") {
      section = Section::Variables;
      continue;
    }
    if (line == "edges") {
      section = Section::Edges;
      continue;
    }
    if (line == "cpts") {
      section = Section::Cpts;
      continue;
    }
    switch (section) {
      case Section::None: fail(line_no, "content before any section header");
      case Section::Variables: {
        const auto fields = text::split_ws(line);
        if (fields.size() < 3) fail(line_no, "variable needs an id, a name and states");
        const auto id = text::parse_uint(fields[0], "variable id");
        if (id != net.size()) fail(line_no, "variable ids must be 0..n-1 in order");
        std::vector<std::string> states(fields.begin() + 2, fields.end());
        net.add_variable(std::string(fields[1]), std::move(states));
        break;
      }
      case Section::Edges: {
        const auto colon = line.find(':');
        if (colon == std::string_view::npos) fail(line_no, "expected '<child>: <parents>'");
        const auto child = static_cast<VarId>(text::parse_uint(line.substr(0, colon), "child"));
        if (child >= net.size()) fail(line_no, "unknown child id");
        if (parents.count(child)) fail(line_no, "child listed twice in edges");
        auto& list = parents[child];
        for (auto f : text::split_ws(line.substr(colon + 1))) {
          const auto p = static_cast<VarId>(text::parse_uint(f, "parent"));
          if (p >= net.size()) fail(line_no, "unknown parent id");
          list.push_back(p);
        }
        break;
      }
      case Section::Cpts: {
        const auto fields = text::split_ws(line);
        if (fields.size() < 3) fail(line_no, "cpt line needs child, row and probabilities");
        const auto child = static_cast<VarId>(text::parse_uint(fields[0], "child"));
        if (child >= net.size()) fail(line_no, "unknown child id");
        const auto row = static_cast<std::size_t>(text::parse_uint(fields[1], "row"));
        std::vector<double> probs;
        for (std::size_t i = 2; i < fields.size(); ++i) {
          probs.push_back(text::parse_double(fields[i], "probability"));
        }
        if (probs.size() != net.arity(child)) fail(line_no, "row length differs from arity");
        if (!rows[child].emplace(row, std::move(probs)).second) fail(line_no, "duplicate row");
        break;
      }
    }
  }

  for (VarId v = 0; v < net.size(); ++v) {
    std::vector<VarId> ps = parents.count(v) ? parents[v] : std::vector<VarId>{};
    std::size_t expected_rows = 1;
    for (VarId p : ps) expected_rows *= net.arity(p);
    const auto& r = rows[v];
    if (r.size() != expected_rows || (!r.empty() && r.rbegin()->first != expected_rows - 1)) {
      throw Error(ErrorCode::ParseError, "variable " + std::to_string(v) + " has " +
                                             std::to_string(r.size()) + " cpt rows, expected " +
                                             std::to_string(expected_rows));
    }
    std::vector<double> table;
    for (const auto& [_, probs] : r) table.insert(table.end(), probs.begin(), probs.end());
    net.set_cpt(v, std::move(ps), std::move(table));
  }
  require_valid(net);
  return net;
}

std::string serialize_network(const BayesNet& net) {
  std::string out = "variables\n";
  for (const auto& v : net.variables()) {
    out += std::to_string(v.id) + ' ' + v.name;
    for (const auto& s : v.states) out += ' ' + s;
    out += '\n';
  }
  out += "edges\n";
  for (const auto& c : net.cpts()) {
    if (c.parents.empty()) continue;
    out += std::to_string(c.child) + ':';
    for (VarId p : c.parents) out += ' ' + std::to_string(p);
    out += '\n';
  }
  out += "cpts\n";
  for (const auto& c : net.cpts()) {
    const std::size_t arity = net.arity(c.child);
    const std::size_t rows = c.table.size() / arity;
    for (std::size_t r = 0; r < rows; ++r) {
      out += std::to_string(c.child) + ' ' + std::to_string(r);
      for (std::size_t s = 0; s < arity; ++s) out += ' ' + text::format_double(c.table[r * arity + s]);
      out += '\n';
    }
  }
  return out;
}

BayesNet load_network(const std::filesystem::path& path) {
  return parse_network(text::read_file(path));
}

void save_network(const BayesNet& net, const std::filesystem::path& path) {
  text::write_file(path, serialize_network(net));
}

}  // namespace mids::bayes
