#include "kalikow/sequence.hpp"

#include <numeric>
#include <sstream>

namespace kalikow {

namespace {

Ordinal value_from_json(const nlohmann::json& j) {
  if (j.is_number_unsigned() || j.is_number_integer())
    return Ordinal::nat(j.get<std::uint64_t>());
  if (j.is_string()) return Ordinal::parse(j.get<std::string>());
  throw ConfigError("sequence json: carrier value must be a number or CNF string");
}

nlohmann::json value_to_json(const Ordinal& v) {
  if (v.is_nat()) return v.as_nat();
  return v.to_string();
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

std::vector<Ordinal> parse_values(const std::string& s) {
  std::vector<Ordinal> out;
  if (s.empty()) return out;
  for (const auto& part : split(s, ',')) out.push_back(Ordinal::parse(part));
  return out;
}

std::string render_values(const std::vector<Ordinal>& vs) {
  std::string out;
  for (std::size_t i = 0; i < vs.size(); ++i) {
    if (i) out += ",";
    out += vs[i].to_string();
  }
  return out;
}

}  // namespace

SequenceSpec SequenceSpec::eventually_periodic(std::vector<Ordinal> head,
                                               std::vector<Ordinal> cycle) {
  if (cycle.empty()) throw ConfigError("sequence: cycle must be nonempty");
  SequenceSpec s;
  s.kind = Kind::eventually_periodic;
  s.head = std::move(head);
  s.cycle = std::move(cycle);
  return s;
}

SequenceSpec SequenceSpec::ramp(std::uint64_t slope, std::uint64_t offset) {
  SequenceSpec s;
  s.kind = Kind::ramp;
  s.slope = slope;
  s.offset = offset;
  return s;
}

Ordinal SequenceSpec::entry(std::uint64_t n) const {
  if (auto it = edits.find(n); it != edits.end()) return it->second;
  if (kind == Kind::ramp) return Ordinal::nat(slope * n + offset);
  if (n < head.size()) return head[n];
  return cycle[(n - head.size()) % cycle.size()];
}

std::vector<Ordinal> SequenceSpec::prefix(std::uint64_t n) const {
  std::vector<Ordinal> out;
  out.reserve(n);
  for (std::uint64_t i = 0; i < n; ++i) out.push_back(entry(i));
  return out;
}

SequenceSpec SequenceSpec::perturbed(
    const std::map<std::uint64_t, Ordinal>& more_edits) const {
  SequenceSpec s = *this;
  for (const auto& [i, v] : more_edits) s.edits[i] = v;
  return s;
}

std::uint64_t SequenceSpec::settled_index() const {
  std::uint64_t n = kind == Kind::eventually_periodic ? head.size() : 0;
  if (!edits.empty()) n = std::max(n, edits.rbegin()->first + 1);
  return n;
}

std::uint64_t SequenceSpec::cycle_length() const {
  return kind == Kind::eventually_periodic ? cycle.size() : 1;
}

std::string SequenceSpec::to_string() const {
  std::string out;
  if (kind == Kind::ramp)
    out = "ramp:" + std::to_string(slope) + "," + std::to_string(offset);
  else
    out = "ep:" + render_values(head) + ";" + render_values(cycle);
  if (!edits.empty()) {
    out += ";";
    bool first = true;
    for (const auto& [i, v] : edits) {
      if (!first) out += ",";
      first = false;
      out += std::to_string(i) + "=" + v.to_string();
    }
  }
  return out;
}

SequenceSpec SequenceSpec::parse(const std::string& text) {
  auto colon = text.find(':');
  if (colon == std::string::npos)
    throw ConfigError("sequence parse: expected 'ep:...' or 'ramp:...' in '" + text + "'");
  std::string tag = text.substr(0, colon);
  auto parts = split(text.substr(colon + 1), ';');
  SequenceSpec s;
  std::size_t edit_part;
  if (tag == "ep") {
    if (parts.size() < 2)
      throw ConfigError("sequence parse: ep needs 'head;cycle' in '" + text + "'");
    s = eventually_periodic(parse_values(parts[0]), parse_values(parts[1]));
    edit_part = 2;
  } else if (tag == "ramp") {
    auto nums = split(parts[0], ',');
    if (nums.size() != 2)
      throw ConfigError("sequence parse: ramp needs 'slope,offset' in '" + text + "'");
    s = ramp(Ordinal::parse(nums[0]).as_nat(), Ordinal::parse(nums[1]).as_nat());
    edit_part = 1;
  } else {
    throw ConfigError("sequence parse: unknown kind '" + tag + "'");
  }
  if (parts.size() > edit_part + 1)
    throw ConfigError("sequence parse: too many ';' segments in '" + text + "'");
  if (parts.size() == edit_part + 1 && !parts[edit_part].empty()) {
    for (const auto& e : split(parts[edit_part], ',')) {
      auto eq = e.find('=');
      if (eq == std::string::npos)
        throw ConfigError("sequence parse: edit needs 'index=value' in '" + text + "'");
      s.edits[Ordinal::parse(e.substr(0, eq)).as_nat()] = Ordinal::parse(e.substr(eq + 1));
    }
  }
  return s;
}

nlohmann::json SequenceSpec::to_json() const {
  nlohmann::json j;
  if (kind == Kind::ramp) {
    j["kind"] = "ramp";
    j["slope"] = slope;
    j["offset"] = offset;
  } else {
    j["kind"] = "ep";
    j["head"] = nlohmann::json::array();
    for (const auto& v : head) j["head"].push_back(value_to_json(v));
    j["cycle"] = nlohmann::json::array();
    for (const auto& v : cycle) j["cycle"].push_back(value_to_json(v));
  }
  if (!edits.empty()) {
    nlohmann::json e = nlohmann::json::object();
    for (const auto& [i, v] : edits) e[std::to_string(i)] = value_to_json(v);
    j["edits"] = std::move(e);
  }
  return j;
}

SequenceSpec SequenceSpec::from_json(const nlohmann::json& j) {
  std::string kind = j.at("kind").get<std::string>();
  SequenceSpec s;
  if (kind == "ep") {
    std::vector<Ordinal> head, cycle;
    if (j.contains("head"))
      for (const auto& v : j.at("head")) head.push_back(value_from_json(v));
    for (const auto& v : j.at("cycle")) cycle.push_back(value_from_json(v));
    s = eventually_periodic(std::move(head), std::move(cycle));
  } else if (kind == "ramp") {
    s = ramp(j.at("slope").get<std::uint64_t>(), j.at("offset").get<std::uint64_t>());
  } else {
    throw ConfigError("sequence json: unknown kind '" + kind + "'");
  }
  if (j.contains("edits"))
    for (const auto& [key, v] : j.at("edits").items())
      s.edits[std::stoull(key)] = value_from_json(v);
  return s;
}

PairRelation certify_relation(const SequenceSpec& a, const SequenceSpec& b) {
  using K = SequenceSpec::Kind;
  // Compare past every head and edit: there both sequences are purely
  // periodic (or affine), so one aligned window decides all later indices.
  std::uint64_t start = std::max(a.settled_index(), b.settled_index());
  if (a.kind == K::ramp && b.kind == K::ramp)
    return (a.slope == b.slope && a.offset == b.offset) ? PairRelation::almost_equal
                                                        : PairRelation::divergent;
  if (a.kind != b.kind) {
    const SequenceSpec& r = a.kind == K::ramp ? a : b;
    const SequenceSpec& e = a.kind == K::ramp ? b : a;
    if (r.slope != 0) return PairRelation::divergent;
    for (std::uint64_t n = start; n < start + e.cycle_length(); ++n)
      if (e.entry(n) != Ordinal::nat(r.offset)) return PairRelation::divergent;
    return PairRelation::almost_equal;
  }
  std::uint64_t period = std::lcm(a.cycle_length(), b.cycle_length());
  for (std::uint64_t n = start; n < start + period; ++n)
    if (a.entry(n) != b.entry(n)) return PairRelation::divergent;
  return PairRelation::almost_equal;
}

PairSpec PairSpec::make(SequenceSpec left, SequenceSpec right, PairRelation declared) {
  if (certify_relation(left, right) != declared)
    throw ConfigError("pair: declared relation contradicts the structural certificate");
  return {std::move(left), std::move(right), declared};
}

PairSpec PairSpec::certified(SequenceSpec left, SequenceSpec right) {
  PairRelation r = certify_relation(left, right);
  return {std::move(left), std::move(right), r};
}

std::uint64_t PairSpec::combined_cycle_length() const {
  return std::lcm(left.cycle_length(), right.cycle_length());
}

std::uint64_t PairSpec::agreement_index() const {
  if (relation != PairRelation::almost_equal)
    throw ConfigError("pair: agreement index defined for almost-equal pairs only");
  return std::max(left.settled_index(), right.settled_index());
}

std::string PairSpec::to_string() const {
  return left.to_string() + "|" + right.to_string();
}

PairSpec PairSpec::parse(const std::string& text) {
  auto bar = text.find('|');
  if (bar == std::string::npos)
    throw ConfigError("pair parse: expected 'left|right' in '" + text + "'");
  return certified(SequenceSpec::parse(text.substr(0, bar)),
                   SequenceSpec::parse(text.substr(bar + 1)));
}

nlohmann::json PairSpec::to_json() const {
  return {{"left", left.to_json()},
          {"right", right.to_json()},
          {"relation",
           relation == PairRelation::almost_equal ? "almost-equal" : "divergent"}};
}

PairSpec PairSpec::from_json(const nlohmann::json& j) {
  PairSpec p = certified(SequenceSpec::from_json(j.at("left")),
                         SequenceSpec::from_json(j.at("right")));
  if (j.contains("relation")) {
    std::string want = j.at("relation").get<std::string>();
    std::string got = p.relation == PairRelation::almost_equal ? "almost-equal" : "divergent";
    if (want != got)
      throw ConfigError("pair json: declared relation contradicts the certificate");
  }
  return p;
}

}  // namespace kalikow
