#include "netauction/instance_io.hpp"

#include <algorithm>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>

#include "json.hpp"

namespace netauction {

using nlohmann::json;

ParseError::ParseError(const std::string& message, std::size_t line, std::size_t column)
    : std::runtime_error(message), line_(line), column_(column) {}

namespace {

// Raised while walking the parsed document; `path` is a JSON pointer used to
// recover a source position afterwards.
struct SemanticError {
  std::vector<std::string> path;
  std::string message;
};

std::pair<std::size_t, std::size_t> line_column(std::string_view text, std::size_t offset) {
  std::size_t line = 1, col = 1;
  for (std::size_t i = 0; i < offset && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return {line, col};
}

// Minimal scanner that finds the source offset of the value at a path, or of
// the deepest prefix of that path that exists.
class Locator {
 public:
  explicit Locator(std::string_view s) : s_(s) {}

  std::size_t find(const std::vector<std::string>& path) {
    i_ = 0;
    ws();
    best_ = i_;
    descend(path, 0);
    return best_;
  }

 private:
  void ws() {
    while (i_ < s_.size() && (s_[i_] == ' ' || s_[i_] == '\n' || s_[i_] == '\r' || s_[i_] == '\t')) ++i_;
  }

  std::string read_string() {
    std::string out;
    ++i_;  // opening quote
    while (i_ < s_.size() && s_[i_] != '"') {
      if (s_[i_] == '\\') ++i_;
      if (i_ < s_.size()) out.push_back(s_[i_++]);
    }
    ++i_;
    return out;
  }

  void skip_value() {
    ws();
    if (i_ >= s_.size()) return;
    char c = s_[i_];
    if (c == '"') {
      read_string();
    } else if (c == '{' || c == '[') {
      char close = c == '{' ? '}' : ']';
      ++i_;
      ws();
      while (i_ < s_.size() && s_[i_] != close) {
        if (c == '{') {
          read_string();
          ws();
          ++i_;  // colon
        }
        skip_value();
        ws();
        if (i_ < s_.size() && s_[i_] == ',') ++i_;
        ws();
      }
      ++i_;
    } else {
      while (i_ < s_.size() && std::string_view(",}] \n\r\t").find(s_[i_]) == std::string_view::npos) ++i_;
    }
  }

  void descend(const std::vector<std::string>& path, std::size_t k) {
    ws();
    best_ = i_;
    if (k == path.size() || i_ >= s_.size()) return;
    char c = s_[i_];
    if (c == '{') {
      ++i_;
      ws();
      while (i_ < s_.size() && s_[i_] != '}') {
        std::size_t key_pos = i_;
        std::string key = read_string();
        ws();
        ++i_;
        if (key == path[k]) {
          best_ = key_pos;
          descend(path, k + 1);
          return;
        }
        skip_value();
        ws();
        if (i_ < s_.size() && s_[i_] == ',') ++i_;
        ws();
      }
    } else if (c == '[') {
      std::size_t want = 0;
      try {
        want = std::stoul(path[k]);
      } catch (...) {
        return;
      }
      ++i_;
      for (std::size_t idx = 0;; ++idx) {
        ws();
        if (i_ >= s_.size() || s_[i_] == ']') return;
        if (idx == want) {
          descend(path, k + 1);
          return;
        }
        skip_value();
        ws();
        if (i_ < s_.size() && s_[i_] == ',') ++i_;
      }
    }
  }

  std::string_view s_;
  std::size_t i_ = 0;
  std::size_t best_ = 0;
};

class Reader {
 public:
  using Path = std::vector<std::string>;

  [[noreturn]] static void fail(const Path& path, const std::string& msg) { throw SemanticError{path, msg}; }

  static const json& field(const json& obj, const Path& path, const char* key) {
    if (!obj.is_object()) fail(path, "expected an object");
    auto it = obj.find(key);
    if (it == obj.end()) fail(path, std::string("missing field '") + key + "'");
    return *it;
  }

  static Path at(Path p, const std::string& key) {
    p.push_back(key);
    return p;
  }

  static Money money(const json& v, const Path& path) {
    try {
      if (v.is_number_integer()) return Money(v.get<std::int64_t>());
      if (v.is_number_float()) return Money::from_double(v.get<double>());
      if (v.is_string()) return Money::parse(v.get<std::string>());
    } catch (const std::exception& e) {
      fail(path, e.what());
    }
    fail(path, "expected a number or a numeric string");
  }

  static std::int64_t integer(const json& v, const Path& path) {
    if (!v.is_number_integer()) fail(path, "expected an integer");
    return v.get<std::int64_t>();
  }
};

struct PendingAgent {
  AgentId id;
  json neighbors;
  Reader::Path path;
};

template <class M>
NeighborSet resolve(const json& list, const Reader::Path& path, const std::map<std::string, AgentId>& by_name,
                    const M& m) {
  if (!list.is_array()) Reader::fail(path, "neighbors must be an array");
  NeighborSet out;
  for (std::size_t k = 0; k < list.size(); ++k) {
    const json& v = list[k];
    auto p = Reader::at(path, std::to_string(k));
    if (v.is_number_integer()) {
      auto raw = v.get<std::int64_t>();
      if (raw < 0) Reader::fail(p, "negative agent id");
      AgentId id{static_cast<std::uint32_t>(raw)};
      if (id != kRequester && !m.has_agent(id)) Reader::fail(p, "unknown agent id " + std::to_string(raw));
      out.insert(id);
    } else if (v.is_string()) {
      auto name = v.get<std::string>();
      if (name == "p" || name == "requester") {
        out.insert(kRequester);
        continue;
      }
      auto it = by_name.find(name);
      if (it == by_name.end()) Reader::fail(p, "unknown agent '" + name + "'");
      out.insert(it->second);
    } else {
      Reader::fail(p, "neighbor must be an id or a name");
    }
  }
  return out;
}

// Reads ids, names and invitation lists common to every variant; `fill` sets
// the variant-specific fields of one agent.
template <class M, class Fill>
void read_agents(M& m, const json& doc, const char* key, const json& requester_neighbors, Fill fill) {
  Reader::Path list_path{key};
  const json& list = Reader::field(doc, {}, key);
  if (!list.is_array()) Reader::fail(list_path, "expected an array");
  std::map<std::string, AgentId> by_name;
  std::vector<PendingAgent> pending;
  for (std::size_t k = 0; k < list.size(); ++k) {
    const json& a = list[k];
    auto path = Reader::at(list_path, std::to_string(k));
    if (!a.is_object()) Reader::fail(path, "expected an object");
    std::int64_t raw = a.contains("id") ? Reader::integer(a["id"], Reader::at(path, "id")) : static_cast<std::int64_t>(k + 1);
    if (raw <= 0 || raw >= std::numeric_limits<std::uint32_t>::max())
      Reader::fail(Reader::at(path, "id"), "agent ids must be positive");
    AgentId id{static_cast<std::uint32_t>(raw)};
    if (m.has_agent(id)) Reader::fail(Reader::at(path, "id"), "duplicate agent id");
    std::string name = a.contains("name") ? a["name"].get<std::string>() : std::to_string(raw);
    if (!by_name.emplace(name, id).second) Reader::fail(Reader::at(path, "name"), "duplicate agent name");
    m.names[id] = name;
    fill(m.agents[id], a, path);
    pending.push_back({id, a.contains("neighbors") ? a["neighbors"] : json::array(), Reader::at(path, "neighbors")});
  }
  for (auto& p : pending) m.agents[p.id].neighbors = resolve(p.neighbors, p.path, by_name, m);
  m.requester.neighbors = resolve(requester_neighbors, {"requester", "neighbors"}, by_name, m);
}

json neighbors_of(const NeighborSet& s) {
  json out = json::array();
  for (AgentId id : s) out.push_back(id.value);
  return out;
}

json money_json(const Money& m) {
  if (m.is_integer()) return m.numerator();
  return m.to_string();
}

AnyInstance read_document(const json& doc) {
  if (!doc.is_object()) Reader::fail({}, "instance must be a JSON object");
  const json& v = Reader::field(doc, {}, "variant");
  if (!v.is_string()) Reader::fail({"variant"}, "variant must be a string");
  const std::string variant = v.get<std::string>();
  const json& req = Reader::field(doc, {}, "requester");
  const Reader::Path rp{"requester"};
  const json& req_neighbors = req.contains("neighbors") ? req["neighbors"] : json::array();

  if (variant == "homogeneous") {
    HomogeneousInstance m;
    m.requester.demand = Reader::integer(Reader::field(req, rp, "demand"), Reader::at(rp, "demand"));
    m.requester.reserve_unit = Reader::money(Reader::field(req, rp, "reserve"), Reader::at(rp, "reserve"));
    read_agents(m, doc, "suppliers", req_neighbors, [](SupplierHM& s, const json& a, const Reader::Path& p) {
      s.ability = Reader::integer(Reader::field(a, p, "ability"), Reader::at(p, "ability"));
      s.unit_cost = Reader::money(Reader::field(a, p, "cost"), Reader::at(p, "cost"));
    });
    return m;
  }

  if (variant == "heterogeneous") {
    HeterogeneousInstance m;
    const json& tasks = Reader::field(req, rp, "tasks");
    if (!tasks.is_array()) Reader::fail(Reader::at(rp, "tasks"), "tasks must be an array of names");
    std::map<std::string, TaskIndex> task_index;
    for (std::size_t k = 0; k < tasks.size(); ++k) {
      if (!tasks[k].is_string()) Reader::fail(Reader::at(Reader::at(rp, "tasks"), std::to_string(k)), "task names must be strings");
      auto name = tasks[k].get<std::string>();
      if (!task_index.emplace(name, static_cast<TaskIndex>(k)).second)
        Reader::fail(Reader::at(Reader::at(rp, "tasks"), std::to_string(k)), "duplicate task");
      m.requester.task_names.push_back(name);
    }
    const json& reserve = Reader::field(req, rp, "reserve");
    auto reserve_path = Reader::at(rp, "reserve");
    m.requester.reserve.resize(tasks.size());
    if (reserve.is_object()) {
      for (const auto& [name, idx] : task_index) {
        if (!reserve.contains(name)) Reader::fail(reserve_path, "no reserve for task '" + name + "'");
        m.requester.reserve[idx] = Reader::money(reserve[name], Reader::at(reserve_path, name));
      }
      for (const auto& [name, value] : reserve.items())
        if (!task_index.count(name)) Reader::fail(Reader::at(reserve_path, name), "reserve for unknown task");
    } else if (reserve.is_array() && reserve.size() == tasks.size()) {
      for (std::size_t k = 0; k < reserve.size(); ++k)
        m.requester.reserve[k] = Reader::money(reserve[k], Reader::at(reserve_path, std::to_string(k)));
    } else {
      Reader::fail(reserve_path, "reserve must map every task to a value");
    }
    read_agents(m, doc, "suppliers", req_neighbors, [&](SupplierHT& s, const json& a, const Reader::Path& p) {
      const json& ab = Reader::field(a, p, "ability");
      if (!ab.is_array()) Reader::fail(Reader::at(p, "ability"), "ability must be an array of task names");
      for (std::size_t k = 0; k < ab.size(); ++k) {
        auto tp = Reader::at(Reader::at(p, "ability"), std::to_string(k));
        if (!ab[k].is_string()) Reader::fail(tp, "task names must be strings");
        auto it = task_index.find(ab[k].get<std::string>());
        if (it == task_index.end()) Reader::fail(tp, "unknown task '" + ab[k].get<std::string>() + "'");
        s.bundle.push_back(it->second);
      }
      std::sort(s.bundle.begin(), s.bundle.end());
      s.bundle.erase(std::unique(s.bundle.begin(), s.bundle.end()), s.bundle.end());
      s.total_cost = Reader::money(Reader::field(a, p, "cost"), Reader::at(p, "cost"));
    });
    return m;
  }

  if (variant == "forward") {
    ForwardInstance m;
    m.requester.units = req.contains("units") ? Reader::integer(req["units"], Reader::at(rp, "units")) : 1;
    read_agents(m, doc, "bidders", req_neighbors, [](Bidder& b, const json& a, const Reader::Path& p) {
      b.valuation = Reader::money(Reader::field(a, p, "value"), Reader::at(p, "value"));
    });
    return m;
  }

  Reader::fail({"variant"}, "unknown variant '" + variant + "'");
}

template <class M, class Write>
json agents_json(const M& m, Write write) {
  json list = json::array();
  for (const auto& [id, a] : m.agents) {
    json e;
    e["id"] = id.value;
    auto it = m.names.find(id);
    if (it != m.names.end()) e["name"] = it->second;
    write(e, a);
    e["neighbors"] = neighbors_of(a.neighbors);
    list.push_back(std::move(e));
  }
  return list;
}

json to_json(const HomogeneousInstance& m) {
  json doc;
  doc["variant"] = "homogeneous";
  doc["requester"] = {{"demand", m.requester.demand},
                      {"reserve", money_json(m.requester.reserve_unit)},
                      {"neighbors", neighbors_of(m.requester.neighbors)}};
  doc["suppliers"] = agents_json(m, [](json& e, const SupplierHM& s) {
    e["ability"] = s.ability;
    e["cost"] = money_json(s.unit_cost);
  });
  return doc;
}

json to_json(const HeterogeneousInstance& m) {
  json doc;
  doc["variant"] = "heterogeneous";
  json reserve = json::object();
  for (std::size_t t = 0; t < m.requester.task_count(); ++t)
    reserve[m.requester.task_names[t]] = money_json(m.requester.reserve[t]);
  doc["requester"] = {{"tasks", m.requester.task_names},
                      {"reserve", reserve},
                      {"neighbors", neighbors_of(m.requester.neighbors)}};
  doc["suppliers"] = agents_json(m, [&](json& e, const SupplierHT& s) {
    json bundle = json::array();
    for (TaskIndex t : s.bundle) bundle.push_back(m.requester.task_names[t]);
    e["ability"] = bundle;
    e["cost"] = money_json(s.total_cost);
  });
  return doc;
}

json to_json(const ForwardInstance& m) {
  json doc;
  doc["variant"] = "forward";
  doc["requester"] = {{"units", m.requester.units}, {"neighbors", neighbors_of(m.requester.neighbors)}};
  doc["bidders"] = agents_json(m, [](json& e, const Bidder& b) { e["value"] = money_json(b.valuation); });
  return doc;
}

}  // namespace

AnyInstance parse_instance(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    std::size_t offset = e.byte > 0 ? e.byte - 1 : 0;
    auto [line, col] = line_column(text, offset);
    throw ParseError(e.what(), line, col);
  }
  try {
    AnyInstance inst = read_document(doc);
    std::visit([](const auto& m) { m.validate(); }, inst);
    return inst;
  } catch (const SemanticError& e) {
    auto [line, col] = line_column(text, Locator(text).find(e.path));
    std::string where;
    for (const auto& p : e.path) where += "/" + p;
    throw ParseError(where.empty() ? e.message : where + ": " + e.message, line, col);
  } catch (const json::exception& e) {
    throw ParseError(e.what(), 1, 1);
  } catch (const std::invalid_argument& e) {
    throw ParseError(e.what(), 1, 1);
  }
}

AnyInstance load_instance(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open " + path, 0, 0);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_instance(buf.str());
}

std::string serialize_instance(const AnyInstance& instance) {
  return std::visit([](const auto& m) { return to_json(m).dump(2); }, instance) + "\n";
}

InstanceVariant variant_of(const AnyInstance& instance) {
  switch (instance.index()) {
    case 0: return InstanceVariant::Homogeneous;
    case 1: return InstanceVariant::Heterogeneous;
    default: return InstanceVariant::Forward;
  }
}

std::string witness_to_json(const DeviationWitness& w, const NameLookup& name_of) {
  auto type = [&](const ReportedType& t) {
    json names = json::array();
    for (AgentId id : t.neighbors) names.push_back(name_of(id));
    return json{{"value", t.value.to_string()}, {"neighbors", names}};
  };
  json j{{"property", to_string(w.property)},
         {"agent", name_of(w.agent)},
         {"agent_id", w.agent.value},
         {"true_type", type(w.true_type)},
         {"reference_type", type(w.reference_type)},
         {"reported_type", type(w.reported_type)},
         {"reference_allocation", w.reference_allocation},
         {"reported_allocation", w.reported_allocation},
         {"truthful_utility", w.truthful_utility.to_string()},
         {"deviant_utility", w.deviant_utility.to_string()}};
  return j.dump();
}

}  // namespace netauction
