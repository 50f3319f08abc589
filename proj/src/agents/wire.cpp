#include "mids/agents/wire.hpp"

#include "mids/common/error.hpp"
#include "mids/common/text.hpp"

namespace mids::agents {

namespace {

[[noreturn]] void malformed(const std::string& why) { throw Error(ErrorCode::MalformedLine, why); }

std::vector<double> parse_doubles(std::string_view s) {
  std::vector<double> out;
  if (s.empty()) return out;
  for (auto f : text::split(s, ',')) out.push_back(text::parse_double(f, "probability"));
  return out;
}

std::string join_doubles(std::span<const double> v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ',';
    out += text::format_double(v[i]);
  }
  return out;
}

}  // namespace

std::string_view to_string(MessageType t) {
  switch (t) {
    case MessageType::Register: return "REGISTER";
    case MessageType::Lookup: return "LOOKUP";
    case MessageType::Query: return "QUERY";
    case MessageType::Subscribe: return "SUBSCRIBE";
    case MessageType::Belief: return "BELIEF";
    case MessageType::Alert: return "ALERT";
    case MessageType::Trust: return "TRUST";
  }
  return "?";
}

MessageType parse_message_type(std::string_view s) {
  for (auto t : {MessageType::Register, MessageType::Lookup, MessageType::Query, MessageType::Subscribe,
                 MessageType::Belief, MessageType::Alert, MessageType::Trust}) {
    if (to_string(t) == s) return t;
  }
  malformed("unknown message type '" + std::string(s) + "'");
}

std::string format_wire(const WireMessage& m) {
  for (const auto* s : {&m.sender, &m.recipient}) {
    if (s->empty() || s->find_first_of(" \t\n") != std::string::npos) {
      throw Error(ErrorCode::InvalidArgument, "agent ids must be nonempty and without whitespace");
    }
  }
  if (m.payload.find_first_of("\t\n") != std::string::npos) {
    throw Error(ErrorCode::InvalidArgument, "payload must not contain tabs or newlines");
  }
  return std::string(to_string(m.type)) + '\t' + m.sender + '\t' + m.recipient + '\t' + std::to_string(m.timestamp) +
         '\t' + m.payload;
}

WireMessage parse_wire(std::string_view line) {
  if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
  const auto f = text::split(line, '\t');
  if (f.size() != 5) malformed("expected 5 tab-separated fields, found " + std::to_string(f.size()));
  WireMessage m;
  m.type = parse_message_type(f[0]);
  m.sender = std::string(f[1]);
  m.recipient = std::string(f[2]);
  if (m.sender.empty() || m.recipient.empty()) malformed("empty sender or recipient");
  try {
    m.timestamp = text::parse_uint(f[3], "timestamp");
  } catch (const Error& e) {
    malformed(e.what());
  }
  m.payload = std::string(f[4]);
  return m;
}

std::map<std::string, std::string> payload_fields(std::string_view payload) {
  std::map<std::string, std::string> out;
  for (auto tok : text::split_ws(payload)) {
    const auto eq = tok.find('=');
    if (eq == std::string_view::npos || eq == 0) malformed("payload field '" + std::string(tok) + "' is not key=value");
    out[std::string(tok.substr(0, eq))] = std::string(tok.substr(eq + 1));
  }
  return out;
}

std::string encode_posteriors(const std::vector<bayes::Posterior>& posts) {
  std::string out;
  for (const auto& p : posts) {
    if (!out.empty()) out += ' ';
    out += "v=" + std::to_string(p.variable) + ':' + join_doubles(p.probabilities);
  }
  return out;
}

std::vector<bayes::Posterior> decode_posteriors(std::string_view s) {
  std::vector<bayes::Posterior> out;
  for (auto tok : text::split_ws(s)) {
    if (!text::starts_with(tok, "v=")) continue;
    const auto colon = tok.find(':');
    if (colon == std::string_view::npos) malformed("posterior '" + std::string(tok) + "' lacks ':'");
    bayes::Posterior p;
    p.variable = static_cast<VarId>(text::parse_uint(tok.substr(2, colon - 2), "variable"));
    p.probabilities = parse_doubles(tok.substr(colon + 1));
    out.push_back(std::move(p));
  }
  return out;
}

std::string encode_potential(const bayes::Potential& p) {
  std::string vars, ar;
  for (std::size_t i = 0; i < p.vars().size(); ++i) {
    if (i) {
      vars += ',';
      ar += ',';
    }
    vars += std::to_string(p.vars()[i]);
    ar += std::to_string(p.arities()[i]);
  }
  return "vars=" + vars + " ar=" + ar + " p=" + join_doubles(p.values());
}

bayes::Potential decode_potential(const std::map<std::string, std::string>& fields) {
  const auto get = [&](const char* k) -> const std::string& {
    const auto it = fields.find(k);
    if (it == fields.end()) malformed(std::string("potential lacks '") + k + "'");
    return it->second;
  };
  std::vector<VarId> vars;
  std::vector<std::size_t> ar;
  if (!get("vars").empty()) {
    for (auto v : text::split(get("vars"), ',')) vars.push_back(static_cast<VarId>(text::parse_uint(v, "variable")));
    for (auto a : text::split(get("ar"), ',')) ar.push_back(text::parse_uint(a, "arity"));
  }
  if (vars.size() != ar.size()) malformed("potential variable and arity lists differ in length");
  bayes::Potential p(vars, ar, 0.0);
  const auto values = parse_doubles(get("p"));
  if (values.size() != p.size()) malformed("potential has the wrong number of entries");
  std::copy(values.begin(), values.end(), p.values().begin());
  return p;
}

}  // namespace mids::agents
