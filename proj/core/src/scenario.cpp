#include <sstream>

#include <nlohmann/json.hpp>

#include "fogsec/errors.hpp"
#include "fogsec/fogsim.hpp"

namespace fogsec::sim {

Layer parse_layer(std::string_view s) {
  if (s == "perception") return Layer::perception;
  if (s == "fog") return Layer::fog;
  if (s == "cloud") return Layer::cloud;
  if (s == "application") return Layer::application;
  throw ProtocolError("unknown layer: " + std::string(s));
}

std::string layer_name(Layer l) {
  switch (l) {
    case Layer::perception: return "perception";
    case Layer::fog: return "fog";
    case Layer::cloud: return "cloud";
    case Layer::application: return "application";
  }
  return "?";
}

Flow parse_flow(std::string_view s) {
  if (s == "aggregation") return Flow::aggregation;
  if (s == "data-sharing") return Flow::data_sharing;
  if (s == "access-control") return Flow::access_control;
  if (s == "computation") return Flow::computation;
  throw ProtocolError("unknown flow: " + std::string(s));
}

std::string flow_name(Flow f) {
  switch (f) {
    case Flow::aggregation: return "aggregation";
    case Flow::data_sharing: return "data-sharing";
    case Flow::access_control: return "access-control";
    case Flow::computation: return "computation";
  }
  return "?";
}

long Scenario::param(const std::string& key, long fallback) const {
  auto it = params.find(key);
  return it == params.end() ? fallback : it->second;
}

Scenario parse_scenario(std::string_view text) {
  Scenario sc;
  std::istringstream in{std::string(text)};
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::string key;
    if (!(ls >> key)) continue;
    auto fail = [&](const std::string& why) {
      throw ProtocolError("scenario line " + std::to_string(lineno) + ": " + why);
    };
    if (key == "name") {
      ls >> sc.name;
    } else if (key == "flow") {
      std::string f;
      ls >> f;
      sc.flow = parse_flow(f);
    } else if (key == "backend") {
      std::string b;
      ls >> b;
      if (b == "curve") sc.backend = Backend::curve;
      else if (b == "mock") sc.backend = Backend::mock;
      else fail("unknown backend " + b);
    } else if (key == "seed") {
      ls >> sc.seed;
    } else if (key == "param") {
      std::string k;
      long v = 0;
      if (!(ls >> k >> v)) fail("param needs a name and a value");
      sc.params[k] = v;
    } else if (key == "policy") {
      std::string rest;
      std::getline(ls, rest);
      auto start = rest.find_first_not_of(" \t");
      sc.policy_text = start == std::string::npos ? "" : rest.substr(start);
    } else if (key == "entity") {
      EntitySpec e;
      std::string layer;
      if (!(ls >> e.id >> layer)) fail("entity needs an id and a layer");
      e.layer = parse_layer(layer);
      std::string role;
      while (ls >> role) {
        if (role == "proxy") e.roles.proxy = true;
        else if (role == "pkg") e.roles.pkg = true;
        else if (role == "ta") e.roles.ta = true;
        else if (role == "authority") e.roles.authority = true;
        else fail("unknown role " + role);
      }
      sc.entities.push_back(e);
    } else if (key == "link") {
      std::string a, b;
      long lat = 0;
      if (!(ls >> a >> b >> lat)) fail("link needs src, dst and latency");
      sc.latency[a][b] = lat;
    } else if (key == "step") {
      std::string s;
      if (!(ls >> s)) fail("step needs a name");
      sc.steps.push_back(s);
    } else if (key == "assert") {
      std::string rest;
      std::getline(ls, rest);
      auto start = rest.find_first_not_of(" \t");
      if (start == std::string::npos) fail("empty assertion");
      sc.asserts.push_back(rest.substr(start));
    } else {
      fail("unknown directive " + key);
    }
  }
  if (sc.name.empty()) throw ProtocolError("scenario has no name");
  if (sc.steps.empty()) throw ProtocolError("scenario has no steps");
  if (sc.entities.empty()) throw ProtocolError("scenario has no entities");
  return sc;
}

const std::map<std::string, std::string>& builtin_scenarios() {
  static const std::map<std::string, std::string> scenarios = {
      {"secure-data-aggregation", R"(name secure-data-aggregation
flow aggregation
backend mock
seed 42
param n 7
param msg_size 100
entity TA fog ta
entity E perception
entity F fog
step setup
step sign
step aggregate
step upload
step verify
)"},
      {"secure-data-sharing", R"(name secure-data-sharing
flow data-sharing
backend mock
seed 43
entity S perception
entity PKG fog pkg
entity F1 fog
entity P fog proxy
entity C cloud
entity R application
step pkg-setup
step extract-partial
step user-keygen
step encrypt
step rekeygen
step upload
step forward
step store
step reencrypt
step request
step notify
step deliver
step decrypt
assert step-cost reencrypt P=1 M=1
)"},
      {"fine-grained-access-control", R"(name fine-grained-access-control
flow access-control
backend mock
seed 44
param attrs 3
entity A1 perception
entity A2 perception
entity F1 fog
entity F2 fog
entity AA fog authority
entity C cloud
step authority-setup
step keygen-user
step intermediate-encrypt
step offload
step full-encrypt
step store
step transform-key
step send-key
step fetch
step download
step partial-decrypt
step respond
step full-decrypt
)"},
      {"secure-computation", R"(name secure-computation
flow computation
backend mock
seed 45
entity PF1 fog proxy
entity PF2 fog proxy
entity C cloud
step keygen-pf1
step keygen-pf2
step encrypt
step upload
step query
step forward-query
step eval
step rekeygen
step reencrypt
step eval-transformed
step reply
step respond
step decrypt
)"},
  };
  return scenarios;
}

Scenario load_builtin(const std::string& name) {
  auto it = builtin_scenarios().find(name);
  if (it == builtin_scenarios().end())
    throw ProtocolError("unknown scenario: " + name);
  return parse_scenario(it->second);
}

void ByteLedger::record(const MessageRecord& m) {
  messages_.push_back(m);
  totals_[{m.src, m.dst}] += m.size;
}

std::size_t ByteLedger::link_total(const std::string& src,
                                   const std::string& dst) const {
  auto it = totals_.find({src, dst});
  return it == totals_.end() ? 0 : it->second;
}

std::size_t ByteLedger::sent_total(const std::string& src) const {
  std::size_t sum = 0;
  for (const auto& [link, bytes] : totals_) {
    if (link.first == src) sum += bytes;
  }
  return sum;
}

std::string ByteLedger::csv() const {
  std::ostringstream os;
  os << "seq,src,dst,type,bytes,sent_at,delivered_at\n";
  int i = 0;
  for (const auto& m : messages_) {
    os << i++ << ',' << m.src << ',' << m.dst << ',' << m.type << ',' << m.size
       << ',' << m.sent_at << ',' << m.delivered_at << '\n';
  }
  for (const auto& [link, bytes] : totals_) {
    os << "total," << link.first << ',' << link.second << ",," << bytes
       << ",,\n";
  }
  return os.str();
}

std::string RunResult::transcript_jsonl() const {
  std::ostringstream os;
  for (const auto& t : transcript) {
    nlohmann::json j;
    j["seq"] = t.seq;
    j["time"] = t.time;
    j["entity"] = t.entity;
    j["step"] = t.step;
    if (!t.task.empty()) j["task"] = t.task;
    if (t.msg) {
      j["msg"] = {{"src", t.msg->src},
                  {"dst", t.msg->dst},
                  {"type", t.msg->type},
                  {"bytes", t.msg->size},
                  {"sent_at", t.msg->sent_at},
                  {"delivered_at", t.msg->delivered_at}};
    }
    j["cost"] = {{"P", t.cost.pairings},        {"E", t.cost.exponentiations},
                 {"M", t.cost.multiplications}, {"H", t.cost.hashes},
                 {"D", t.cost.divisions},       {"S", t.cost.subtractions}};
    if (!t.note.empty()) j["note"] = t.note;
    os << j.dump() << '\n';
  }
  return os.str();
}

}  // namespace fogsec::sim
