#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "fogsec/aggsign.hpp"
#include "fogsec/clpre.hpp"
#include "fogsec/costmodel.hpp"
#include "fogsec/homopre.hpp"
#include "fogsec/mabe.hpp"
#include "fogsec/pairing.hpp"

namespace fogsec::sim {

/// Deterministic single-threaded replay of the four protocol flows over a
/// four-layer topology (perception / fog / cloud / application). Entities
/// exchange serialized payloads only; every send passes the authentication
/// hook, lands in the byte ledger and advances the logical clock by the link
/// latency. Same seed, same bytes.

enum class Layer { perception, fog, cloud, application };
Layer parse_layer(std::string_view s);
std::string layer_name(Layer l);

struct Roles {
  bool proxy = false;
  bool pkg = false;
  bool ta = false;
  bool authority = false;
};

struct EntitySpec {
  std::string id;
  Layer layer = Layer::perception;
  Roles roles;
};

enum class Flow { aggregation, data_sharing, access_control, computation };
Flow parse_flow(std::string_view s);
std::string flow_name(Flow f);

struct Scenario {
  std::string name;
  Flow flow = Flow::aggregation;
  Backend backend = Backend::mock;
  std::uint64_t seed = 1;
  std::map<std::string, long> params;  // n, msg_size, attrs, request_size, ...
  std::string policy_text;             // access-control flow
  std::vector<EntitySpec> entities;
  std::map<std::string, std::map<std::string, long>> latency;  // src -> dst
  std::vector<std::string> steps;
  std::vector<std::string> asserts;

  long param(const std::string& key, long fallback) const;
};

/// Line-based scenario text: `name`, `flow`, `backend`, `seed`, `param k v`,
/// `policy ...`, `entity id layer [roles...]`, `link a b latency`, `step s`,
/// `assert ...`; '#' starts a comment.
Scenario parse_scenario(std::string_view text);

/// The four flows of the architecture, one scenario each.
const std::map<std::string, std::string>& builtin_scenarios();
Scenario load_builtin(const std::string& name);

struct MessageRecord {
  std::string src, dst, type;
  std::size_t size = 0;
  long sent_at = 0;
  long delivered_at = 0;
};

class ByteLedger {
 public:
  void record(const MessageRecord& m);
  const std::vector<MessageRecord>& messages() const { return messages_; }
  std::size_t link_total(const std::string& src, const std::string& dst) const;
  /// Sum over every message with the given sender.
  std::size_t sent_total(const std::string& src) const;
  std::string csv() const;

 private:
  std::vector<MessageRecord> messages_;
  std::map<std::pair<std::string, std::string>, std::size_t> totals_;
};

struct TranscriptStep {
  int seq = 0;
  long time = 0;
  std::string entity;
  std::string step;     // protocol-step name
  std::string task;     // costmodel task id, "" when none applies
  std::optional<MessageRecord> msg;
  OpCounter cost;       // counter delta of the executing entity
  std::string note;
};

struct RunResult {
  bool ok = false;
  std::string failure;
  ByteLedger ledger;
  std::map<std::string, OpCounter> counters;
  std::vector<TranscriptStep> transcript;
  std::map<std::string, std::vector<std::pair<std::string, Bytes>>> cloud_blobs;
  /// Canonical encodings of the plaintexts the run moved end to end;
  /// diagnostic surface for the honest-but-curious cloud check.
  std::vector<Bytes> plaintext_encodings;

  std::string transcript_jsonl() const;
};

/// (src, dst, payload type) -> deliver? Sees no key material.
using AuthHook =
    std::function<bool(const std::string&, const std::string&, const std::string&)>;

class Simulator {
 public:
  Simulator(Scenario scenario, std::shared_ptr<const Pairing> pairing,
            AuthHook hook = {});

  /// Validates the topology against the flow's required cast; throws
  /// ProtocolError on a missing role.
  void build_topology();

  RunResult run();

 private:
  struct Impl;
  std::shared_ptr<Impl> impl_;
};

/// Convenience: setup pairing from the scenario's backend and seed, build and
/// run.
RunResult run_scenario(const Scenario& scenario, AuthHook hook = {});

/// Collects per-task measured counts/bytes from a transcript for
/// costmodel::compare (counts and message bytes accumulate per task id).
std::map<std::string, costmodel::Measured> measured_tasks(const RunResult& r);

}  // namespace fogsec::sim
