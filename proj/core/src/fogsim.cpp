#include "fogsec/fogsim.hpp"

#include <sstream>

#include "fogsec/errors.hpp"
#include "fogsec/lsss.hpp"

namespace fogsec::sim {

namespace {

struct SimEntity {
  EntitySpec spec;
  Ctx ctx;
  Rng rng;
  std::map<std::string, Bytes> inbox;  // latest payload per message type

  // aggregation
  std::optional<aggsign::KeyPair> agg_keys;
  std::vector<Bytes> agg_packets;
  std::vector<aggsign::Signature> agg_sigs;
  std::optional<aggsign::Signature> agg_sig;

  // data sharing
  std::optional<clpre::PkgState> pkg;
  std::optional<clpre::UserKeys> cl_keys;
  std::optional<clpre::Ciphertext> cl_ct;
  std::optional<clpre::ReEncKey> cl_rk;
  std::optional<clpre::ReEncCiphertext> cl_rct;

  // access control
  std::optional<mabe::AuthorityKeys> mabe_auth;
  std::optional<GT> mabe_d;
  std::optional<mabe::Intermediate> mabe_inter;
  std::optional<mabe::UserKey> mabe_uk;
  std::optional<mabe::TransformedKey> mabe_tk;
  std::optional<Scalar> mabe_r;
  std::optional<mabe::Ciphertext> mabe_ct;
  std::optional<mabe::PartialCiphertext> mabe_pct;

  // computation
  std::optional<homopre::KeyPair> homo_keys;
  std::optional<homopre::Ciphertext> homo_ct;
  std::optional<homopre::ReKey> homo_rk;
  std::optional<homopre::EvalProgram> homo_prog;

  // cloud storage
  std::vector<std::pair<std::string, Bytes>> stored;

  SimEntity(EntitySpec s, std::shared_ptr<const Pairing> p, Rng r)
      : spec(std::move(s)), ctx(std::move(p)), rng(r) {}
};

// public values published during setup phases; never holds a secret
struct Board {
  std::optional<G1> agg_pk;
  std::optional<G1> mpk;
  struct UserPub {
    G1 g_i;
    clpre::PublicKey pub;
  };
  std::map<std::string, UserPub> clpre_users;
  mabe::AuthorityDirectory mabe_dir;
  std::map<std::string, homopre::PublicKey> homo_pks;
};

}  // namespace

struct Simulator::Impl {
  Scenario sc;
  std::shared_ptr<const Pairing> pairing;
  AuthHook hook;
  std::map<std::string, SimEntity> entities;
  std::vector<std::string> order;  // entity ids in declaration order
  Board board;
  Rng scenario_rng;

  RunResult result;
  long clock = 0;
  int seq = 0;
  bool built = false;

  // expected end-state values (the scenario's own oracle)
  std::optional<GT> expect_clpre_m;
  std::optional<GT> expect_mabe_d;
  std::optional<GT> expect_homo;

  Impl(Scenario s, std::shared_ptr<const Pairing> p, AuthHook h)
      : sc(std::move(s)), pairing(std::move(p)), hook(std::move(h)),
        scenario_rng(sc.seed) {}

  SimEntity& entity(const std::string& id) {
    auto it = entities.find(id);
    if (it == entities.end()) throw ProtocolError("unknown entity: " + id);
    return it->second;
  }

  // ---- topology -----------------------------------------------------------

  std::vector<std::string> with_layer(Layer l, bool require_proxy = false) {
    std::vector<std::string> out;
    for (const auto& id : order) {
      const auto& e = entities.at(id);
      if (e.spec.layer == l && (!require_proxy || e.spec.roles.proxy))
        out.push_back(id);
    }
    return out;
  }

  std::optional<std::string> with_role(bool Roles::* role) {
    for (const auto& id : order) {
      if (entities.at(id).spec.roles.*role) return id;
    }
    return std::nullopt;
  }

  std::string require_one(const std::vector<std::string>& v, const char* what) {
    if (v.empty())
      throw ProtocolError(std::string("scenario requires ") + what);
    return v[0];
  }

  // flow cast, resolved by build_topology
  std::map<std::string, std::string> cast;

  void build() {
    for (const auto& spec : sc.entities) {
      if (entities.count(spec.id))
        throw ProtocolError("duplicate entity id: " + spec.id);
      entities.emplace(spec.id,
                       SimEntity(spec, pairing,
                                 scenario_rng.fork("entity:" + spec.id)));
      order.push_back(spec.id);
    }
    auto perception = with_layer(Layer::perception);
    auto fog = with_layer(Layer::fog);
    auto cloud = with_layer(Layer::cloud);
    auto app = with_layer(Layer::application);
    auto proxies = with_layer(Layer::fog, true);

    switch (sc.flow) {
      case Flow::aggregation: {
        cast["E"] = require_one(perception, "a perception device");
        std::string f;
        for (const auto& id : fog) {
          if (!entities.at(id).spec.roles.ta) {
            f = id;
            break;
          }
        }
        if (f.empty()) f = require_one(fog, "a fog node");
        cast["F"] = f;
        if (auto ta = with_role(&Roles::ta)) cast["TA"] = *ta;
        break;
      }
      case Flow::data_sharing: {
        cast["S"] = require_one(perception, "a perception-layer sender");
        auto pkg = with_role(&Roles::pkg);
        if (!pkg) throw ProtocolError("scenario requires a PKG-role entity");
        cast["PKG"] = *pkg;
        if (proxies.empty())
          throw ProtocolError("scenario requires a proxy-role fog node");
        cast["P"] = proxies[0];
        // the sender's nearest fog: prefer a plain fog node over the PKG or
        // the proxy
        std::string f1;
        for (const auto& id : fog) {
          const auto& roles = entities.at(id).spec.roles;
          if (!roles.proxy && !roles.pkg) {
            f1 = id;
            break;
          }
        }
        cast["F1"] = f1.empty() ? proxies[0] : f1;
        cast["C"] = require_one(cloud, "a cloud entity");
        cast["R"] = require_one(app, "an application-layer receiver");
        break;
      }
      case Flow::access_control: {
        if (perception.size() < 2)
          throw ProtocolError(
              "scenario requires owner and requester perception devices");
        cast["A1"] = perception[0];
        cast["A2"] = perception[1];
        cast["F1"] = require_one(fog, "a fog node");
        cast["F2"] = fog.size() > 1 ? fog[1] : fog[0];
        auto aa = with_role(&Roles::authority);
        if (!aa) throw ProtocolError("scenario requires an attribute authority");
        cast["AA"] = *aa;
        cast["C"] = require_one(cloud, "a cloud entity");
        break;
      }
      case Flow::computation: {
        if (proxies.size() < 2)
          throw ProtocolError("scenario requires two proxy-role fog nodes");
        cast["PF1"] = proxies[0];
        cast["PF2"] = proxies[1];
        cast["C"] = require_one(cloud, "a cloud entity");
        break;
      }
    }
    built = true;
  }

  // ---- engine helpers -------------------------------------------------------

  long link_latency(const std::string& src, const std::string& dst) const {
    auto it = sc.latency.find(src);
    if (it == sc.latency.end()) return 0;
    auto jt = it->second.find(dst);
    return jt == it->second.end() ? 0 : jt->second;
  }

  MessageRecord send(const std::string& src, const std::string& dst,
                     const std::string& type, Bytes payload) {
    if (hook && !hook(src, dst, type))
      throw ProtocolError("authentication hook denied " + src + " -> " + dst +
                          " (" + type + ")");
    MessageRecord m;
    m.src = src;
    m.dst = dst;
    m.type = type;
    m.size = payload.size();
    m.sent_at = clock;
    m.delivered_at = clock + link_latency(src, dst);
    clock = m.delivered_at;
    result.ledger.record(m);
    auto& receiver = entity(dst);
    if (receiver.spec.layer == Layer::cloud &&
        (type.ends_with(".store") || type == "mabe.ct" || type == "homo.ct" ||
         type == "homo.result")) {
      receiver.stored.emplace_back(type, payload);
    }
    receiver.inbox[type] = std::move(payload);
    return m;
  }

  void record(const std::string& entity_id, const std::string& step,
              const std::string& task, OpCounter cost,
              std::optional<MessageRecord> msg = std::nullopt,
              std::string note = "") {
    TranscriptStep t;
    t.seq = seq++;
    t.time = clock;
    t.entity = entity_id;
    t.step = step;
    t.task = task;
    t.msg = std::move(msg);
    t.cost = cost;
    t.note = std::move(note);
    result.transcript.push_back(std::move(t));
    ++clock;
  }

  template <typename Fn>
  OpCounter counted(SimEntity& e, Fn&& fn) {
    OpCounter before = e.ctx.counter();
    fn();
    return e.ctx.counter() - before;
  }

  void require_layer(const SimEntity& e, Layer l, const std::string& step) {
    if (e.spec.layer != l)
      throw ProtocolError("step '" + step + "' must run on the " +
                          layer_name(l) + " layer, not on " + e.spec.id);
  }

  Bytes inbox_take(SimEntity& e, const std::string& type,
                   const std::string& step) {
    auto it = e.inbox.find(type);
    if (it == e.inbox.end())
      throw ProtocolError("step '" + step + "' ran before any '" + type +
                          "' message reached " + e.spec.id);
    return it->second;
  }

  // ---- flows ----------------------------------------------------------------

  aggsign::FrameMode frame_mode() const {
    return sc.param("bls", 0) != 0 ? aggsign::FrameMode::bls
                                   : aggsign::FrameMode::aggregate;
  }

  void step_aggregation(const std::string& step) {
    SimEntity& E = entity(cast.at("E"));
    SimEntity& F = entity(cast.at("F"));
    const long n = sc.param("n", 7);
    const long msg_size = sc.param("msg_size", 100);
    const bool agg_mode = frame_mode() == aggsign::FrameMode::aggregate;

    if (step == "setup") {
      if (cast.count("TA")) {
        SimEntity& TA = entity(cast.at("TA"));
        aggsign::KeyPair kp;
        OpCounter cost = counted(TA, [&] { kp = aggsign::keygen(TA.ctx, TA.rng); });
        board.agg_pk = kp.pk;
        Bytes payload = pairing->serialize(kp.sk);
        append(payload, pairing->serialize(kp.pk));
        auto msg = send(TA.spec.id, E.spec.id, "provision", payload);
        record(TA.spec.id, step, "", cost, msg, "device key issued");
        Bytes in = inbox_take(E, "provision", step);
        aggsign::KeyPair ekp;
        ekp.sk = pairing->parse_scalar(
            BytesView(in).subspan(0, Pairing::kScalarBytes));
        ekp.pk =
            pairing->parse_g1(BytesView(in).subspan(Pairing::kScalarBytes));
        E.agg_keys = ekp;
      } else {
        OpCounter cost = counted(E, [&] {
          E.agg_keys = aggsign::keygen(E.ctx, E.rng);
          board.agg_pk = E.agg_keys->pk;
        });
        record(E.spec.id, step, "", cost);
      }
      return;
    }
    if (step == "sign") {
      require_layer(E, Layer::perception, step);
      if (!E.agg_keys) throw ProtocolError("sign before setup");
      OpCounter cost = counted(E, [&] {
        E.agg_packets.clear();
        E.agg_sigs.clear();
        for (long i = 0; i < n; ++i) {
          Bytes pkt(static_cast<std::size_t>(msg_size));
          E.rng.fill(pkt);
          E.agg_packets.push_back(pkt);
          E.agg_sigs.push_back(aggsign::sign(E.ctx, pkt, E.agg_keys->sk));
        }
      });
      record(E.spec.id, step, agg_mode ? "II.sign-aggregate" : "II.sign-bls",
             cost);
      return;
    }
    if (step == "aggregate") {
      if (!agg_mode)
        throw ProtocolError("aggregate step requires aggregate mode");
      if (E.agg_sigs.empty()) throw ProtocolError("aggregate before sign");
      OpCounter cost = counted(E, [&] {
        E.agg_sig = aggsign::aggregate(E.ctx, E.agg_sigs);
      });
      record(E.spec.id, step, "II.aggregate", cost);
      return;
    }
    if (step == "upload") {
      if (E.agg_packets.empty()) throw ProtocolError("upload before sign");
      aggsign::SignedFrame frame;
      frame.packets = E.agg_packets;
      frame.mode = frame_mode();
      if (agg_mode) {
        if (!E.agg_sig) throw ProtocolError("upload before aggregate");
        frame.sigs = {*E.agg_sig};
      } else {
        frame.sigs = E.agg_sigs;
      }
      Bytes payload = aggsign::frame_payload(*pairing, frame);
      // the canonical payload reproduces the accounting formula exactly
      if (payload.size() !=
          aggsign::frame_wire_size(static_cast<std::size_t>(n),
                                   static_cast<std::size_t>(msg_size),
                                   frame.mode))
        throw ProtocolError("frame payload disagrees with the wire-size formula");
      auto msg = send(E.spec.id, F.spec.id, "agg.frame", payload);
      record(E.spec.id, step,
             agg_mode ? "II.frame-aggregate" : "II.frame-bls", OpCounter{}, msg);
      return;
    }
    if (step == "verify") {
      require_layer(F, Layer::fog, step);
      Bytes payload = inbox_take(F, "agg.frame", step);
      if (!board.agg_pk) throw ProtocolError("verify before setup");
      // split the headerless frame using the scenario's packet geometry
      const std::size_t body = static_cast<std::size_t>(n) *
                               static_cast<std::size_t>(msg_size);
      if (payload.size() < body) throw ProtocolError("frame too short");
      std::vector<Bytes> packets;
      for (long i = 0; i < n; ++i) {
        auto off = static_cast<std::size_t>(i) * msg_size;
        packets.emplace_back(payload.begin() + off,
                             payload.begin() + off + msg_size);
      }
      BytesView sig_bytes = BytesView(payload).subspan(body);
      aggsign::Params prm;
      const std::size_t expected =
          (agg_mode ? 1 : static_cast<std::size_t>(n)) * prm.signature_size;
      if (sig_bytes.size() != expected)
        throw ProtocolError("frame signature section has the wrong length");
      bool valid = false;
      OpCounter cost;
      if (agg_mode) {
        aggsign::Signature agg{pairing->parse_compressed(sig_bytes)};
        cost = counted(F, [&] {
          valid = aggsign::verify_aggregate(F.ctx, packets, agg, *board.agg_pk);
        });
        record(F.spec.id, step, "II.verify-aggregate", cost, std::nullopt,
               valid ? "signature valid" : "signature invalid");
      } else {
        std::vector<aggsign::Signature> sigs;
        for (long i = 0; i < n; ++i) {
          sigs.push_back({pairing->parse_compressed(
              sig_bytes.subspan(static_cast<std::size_t>(i) * prm.signature_size,
                                prm.signature_size))});
        }
        cost = counted(F, [&] {
          valid = true;
          for (long i = 0; i < n; ++i) {
            valid = aggsign::verify_single(F.ctx, packets[i], sigs[i],
                                           *board.agg_pk) &&
                    valid;
          }
        });
        record(F.spec.id, step, "II.verify-bls", cost, std::nullopt,
               valid ? "signatures valid" : "signature invalid");
      }
      if (!valid) throw ProtocolError("frame verification failed");
      return;
    }
    if (step == "summary") {
      SimEntity& C = entity(require_one(with_layer(Layer::cloud),
                                        "a cloud entity for summaries"));
      Bytes payload(static_cast<std::size_t>(sc.param("summary_size", 256)));
      auto msg = send(F.spec.id, C.spec.id, "summary", payload);
      record(F.spec.id, step, "", OpCounter{}, msg, "periodic summary");
      return;
    }
    throw ProtocolError("unknown aggregation step: " + step);
  }

  void step_data_sharing(const std::string& step) {
    SimEntity& S = entity(cast.at("S"));
    SimEntity& PKG = entity(cast.at("PKG"));
    SimEntity& F1 = entity(cast.at("F1"));
    SimEntity& P = entity(cast.at("P"));
    SimEntity& C = entity(cast.at("C"));
    SimEntity& R = entity(cast.at("R"));
    const long request_size = sc.param("request_size", 64);

    if (step == "pkg-setup") {
      OpCounter cost = counted(PKG, [&] {
        PKG.pkg = clpre::pkg_setup(PKG.ctx, PKG.rng);
        board.mpk = PKG.pkg->mpk;
      });
      record(PKG.spec.id, step, "", cost);
      return;
    }
    if (step == "extract-partial") {
      if (!PKG.pkg) throw ProtocolError("extract-partial before pkg-setup");
      for (SimEntity* u : {&S, &R}) {
        G1 partial;
        OpCounter cost = counted(PKG, [&] {
          partial = clpre::extract_partial_key(PKG.ctx, *PKG.pkg,
                                               to_bytes(u->spec.id));
        });
        auto msg = send(PKG.spec.id, u->spec.id, "clpre.partial",
                        pairing->serialize(partial));
        record(PKG.spec.id, step, "", cost, msg,
               "partial key for " + u->spec.id);
      }
      return;
    }
    if (step == "user-keygen") {
      if (!board.mpk) throw ProtocolError("user-keygen before pkg-setup");
      for (SimEntity* u : {&S, &R}) {
        Bytes pb = inbox_take(*u, "clpre.partial", step);
        G1 partial = pairing->parse_g1(pb);
        bool sender = u == &S;
        OpCounter cost = counted(*u, [&] {
          u->cl_keys = clpre::user_keygen(u->ctx, u->rng, partial,
                                          to_bytes(u->spec.id), *board.mpk,
                                          sender);
          board.clpre_users[u->spec.id] = {u->cl_keys->g_i, u->cl_keys->pub};
        });
        record(u->spec.id, step, sender ? "III.key-generation" : "", cost);
      }
      return;
    }
    if (step == "encrypt") {
      require_layer(S, Layer::perception, step);
      if (!S.cl_keys) throw ProtocolError("encrypt before user-keygen");
      GT m = pairing->random_gt(S.rng);
      expect_clpre_m = m;
      result.plaintext_encodings.push_back(pairing->serialize(m));
      OpCounter cost = counted(S, [&] {
        S.cl_ct = clpre::encrypt(S.ctx, S.rng, m, *S.cl_keys);
      });
      record(S.spec.id, step, "III.encryption", cost);
      return;
    }
    if (step == "rekeygen") {
      if (!S.cl_keys) throw ProtocolError("rekeygen before user-keygen");
      const auto& rpub = board.clpre_users.at(R.spec.id);
      OpCounter cost = counted(S, [&] {
        S.cl_rk = clpre::rekeygen(S.ctx, S.rng, *S.cl_keys, rpub.g_i, rpub.pub.X);
      });
      record(S.spec.id, step, "III.re-encryption-key-generation", cost);
      return;
    }
    if (step == "upload") {
      if (!S.cl_ct || !S.cl_rk) throw ProtocolError("upload before encrypt/rekeygen");
      Bytes payload = clpre::upload_message(*pairing, *S.cl_ct, *S.cl_rk);
      auto msg = send(S.spec.id, F1.spec.id, "clpre.upload", payload);
      record(S.spec.id, step, "III.sender-upload", OpCounter{}, msg);
      return;
    }
    if (step == "forward") {
      Bytes payload = inbox_take(F1, "clpre.upload", step);
      auto msg = send(F1.spec.id, P.spec.id, "clpre.upload", payload);
      record(F1.spec.id, step, "", OpCounter{}, msg, "routed to proxy fog");
      return;
    }
    if (step == "store") {
      require_layer(P, Layer::fog, step);
      Bytes payload = inbox_take(P, "clpre.upload", step);
      P.cl_ct = clpre::parse_ciphertext(
          *pairing, BytesView(payload).subspan(0, 3 * Pairing::kElementBytes));
      P.cl_rk = clpre::parse_rekey(
          *pairing, BytesView(payload).subspan(3 * Pairing::kElementBytes));
      Bytes blob = clpre::serialize(*pairing, *P.cl_ct);
      auto msg = send(P.spec.id, C.spec.id, "clpre.store", blob);
      record(P.spec.id, step, "", OpCounter{}, msg, "ciphertext archived");
      return;
    }
    if (step == "reencrypt") {
      require_layer(P, Layer::fog, step);
      if (!P.spec.roles.proxy)
        throw ProtocolError("re-encryption requires the proxy role");
      if (!P.cl_ct || !P.cl_rk) throw ProtocolError("reencrypt before store");
      OpCounter cost = counted(P, [&] {
        P.cl_rct = clpre::reencrypt(P.ctx, *P.cl_ct, *P.cl_rk);
      });
      record(P.spec.id, step, "III.re-encryption", cost);
      return;
    }
    if (step == "request") {
      Bytes payload(static_cast<std::size_t>(request_size));
      auto msg = send(R.spec.id, C.spec.id, "request", payload);
      record(R.spec.id, step, "", OpCounter{}, msg, "data request");
      return;
    }
    if (step == "notify") {
      Bytes payload(static_cast<std::size_t>(request_size));
      auto msg = send(C.spec.id, P.spec.id, "notify", payload);
      record(C.spec.id, step, "", OpCounter{}, msg, "cloud notifies source fog");
      return;
    }
    if (step == "deliver") {
      if (!P.cl_rct) throw ProtocolError("deliver before reencrypt");
      Bytes payload = clpre::serialize(*pairing, *P.cl_rct);
      auto msg = send(P.spec.id, R.spec.id, "clpre.deliver", payload);
      record(P.spec.id, step, "III.fog-delivery", OpCounter{}, msg);
      return;
    }
    if (step == "decrypt") {
      require_layer(R, Layer::application, step);
      Bytes payload = inbox_take(R, "clpre.deliver", step);
      clpre::ReEncCiphertext rct = clpre::parse_reenc(*pairing, payload);
      if (!R.cl_keys) throw ProtocolError("decrypt before user-keygen");
      GT m{};
      OpCounter cost = counted(R, [&] {
        m = clpre::decrypt(R.ctx, rct, *R.cl_keys);
      });
      bool match = expect_clpre_m && m == *expect_clpre_m;
      record(R.spec.id, step, "", cost, std::nullopt,
             match ? "plaintext recovered" : "plaintext MISMATCH");
      if (!match) throw ProtocolError("receiver plaintext differs from sender");
      return;
    }
    throw ProtocolError("unknown data-sharing step: " + step);
  }

  std::vector<std::string> mabe_attrs() const {
    std::vector<std::string> attrs;
    const long x = sc.param("attrs", 3);
    for (long i = 1; i <= x; ++i) attrs.push_back("a" + std::to_string(i));
    return attrs;
  }

  lsss::Policy mabe_policy() const {
    if (!sc.policy_text.empty()) return lsss::parse_policy(sc.policy_text);
    auto attrs = mabe_attrs();
    lsss::Policy p = lsss::Policy::leaf(attrs[0]);
    for (std::size_t i = 1; i < attrs.size(); ++i)
      p = lsss::Policy::and_of(std::move(p), lsss::Policy::leaf(attrs[i]));
    return p;
  }

  void step_access_control(const std::string& step) {
    SimEntity& A1 = entity(cast.at("A1"));
    SimEntity& A2 = entity(cast.at("A2"));
    SimEntity& F1 = entity(cast.at("F1"));
    SimEntity& F2 = entity(cast.at("F2"));
    SimEntity& AA = entity(cast.at("AA"));
    SimEntity& C = entity(cast.at("C"));
    const long request_size = sc.param("request_size", 64);

    if (step == "authority-setup") {
      auto attrs = mabe_attrs();
      OpCounter cost = counted(AA, [&] {
        AA.mabe_auth = mabe::authority_setup(
            AA.ctx, AA.rng, std::set<std::string>(attrs.begin(), attrs.end()));
        board.mabe_dir.enroll(*AA.mabe_auth);
      });
      record(AA.spec.id, step, "", cost);
      return;
    }
    if (step == "keygen-user") {
      if (!AA.mabe_auth) throw ProtocolError("keygen-user before authority-setup");
      auto attrs = mabe_attrs();
      mabe::UserKey uk;
      OpCounter cost = counted(AA, [&] {
        uk = mabe::keygen_user(AA.ctx, *AA.mabe_auth, to_bytes(A2.spec.id),
                               std::set<std::string>(attrs.begin(), attrs.end()));
      });
      Bytes payload;
      append_u32_be(payload, static_cast<std::uint32_t>(uk.K.size()));
      for (const auto& [attr, k] : uk.K) {
        append_u32_be(payload, static_cast<std::uint32_t>(attr.size()));
        append(payload, to_bytes(attr));
        append(payload, pairing->serialize(k));
      }
      auto msg = send(AA.spec.id, A2.spec.id, "mabe.userkey", payload);
      record(AA.spec.id, step, "", cost, msg, "attribute keys issued");
      Bytes in = inbox_take(A2, "mabe.userkey", step);
      mabe::UserKey parsed;
      parsed.id = to_bytes(A2.spec.id);
      std::size_t off = 0;
      std::uint32_t cnt = read_u32_be(in, off);
      off += 4;
      for (std::uint32_t i = 0; i < cnt; ++i) {
        std::uint32_t len = read_u32_be(in, off);
        off += 4;
        std::string attr(reinterpret_cast<const char*>(in.data() + off), len);
        off += len;
        parsed.K.emplace(attr, pairing->parse_g1(BytesView(in).subspan(
                                   off, Pairing::kElementBytes)));
        off += Pairing::kElementBytes;
      }
      A2.mabe_uk = parsed;
      return;
    }
    if (step == "intermediate-encrypt") {
      require_layer(A1, Layer::perception, step);
      GT d = pairing->random_gt(A1.rng);
      expect_mabe_d = d;
      result.plaintext_encodings.push_back(pairing->serialize(d));
      A1.mabe_d = d;
      OpCounter cost = counted(A1, [&] {
        A1.mabe_inter = mabe::intermediate_encrypt(A1.ctx, A1.rng, mabe_attrs(),
                                                   board.mabe_dir);
      });
      record(A1.spec.id, step, "IV.intermediate-encryption", cost);
      return;
    }
    if (step == "offload") {
      if (!A1.mabe_inter) throw ProtocolError("offload before intermediate-encrypt");
      Bytes payload = mabe::offline_message(*pairing, *A1.mabe_d, *A1.mabe_inter);
      auto msg = send(A1.spec.id, F1.spec.id, "mabe.offload", payload);
      record(A1.spec.id, step, "IV.intermediate-encryption", OpCounter{}, msg,
             "plaintext and intermediate state to trusted fog");
      auto [d, inter] = mabe::parse_offline_message(
          *pairing, inbox_take(F1, "mabe.offload", step));
      F1.mabe_d = d;
      F1.mabe_inter = inter;
      return;
    }
    if (step == "full-encrypt") {
      require_layer(F1, Layer::fog, step);
      if (!F1.mabe_inter) throw ProtocolError("full-encrypt before offload");
      OpCounter cost = counted(F1, [&] {
        F1.mabe_ct = mabe::full_encrypt(F1.ctx, F1.rng, *F1.mabe_d,
                                        *F1.mabe_inter, mabe_policy());
      });
      record(F1.spec.id, step, "IV.full-encryption", cost);
      return;
    }
    if (step == "store") {
      if (!F1.mabe_ct) throw ProtocolError("store before full-encrypt");
      Bytes blob = mabe::serialize(*pairing, *F1.mabe_ct);
      auto msg = send(F1.spec.id, C.spec.id, "mabe.ct", blob);
      record(F1.spec.id, step, "IV.full-encryption", OpCounter{}, msg,
             "ciphertext archived");
      return;
    }
    if (step == "transform-key") {
      require_layer(A2, Layer::perception, step);
      if (!A2.mabe_uk) throw ProtocolError("transform-key before keygen-user");
      OpCounter cost = counted(A2, [&] {
        auto [tk, r] = mabe::transform_key(A2.ctx, A2.rng, *A2.mabe_uk);
        A2.mabe_tk = tk;
        A2.mabe_r = r;
      });
      record(A2.spec.id, step, "IV.key-transformation", cost);
      return;
    }
    if (step == "send-key") {
      if (!A2.mabe_tk) throw ProtocolError("send-key before transform-key");
      Bytes payload = mabe::serialize(*pairing, *A2.mabe_tk);
      auto msg = send(A2.spec.id, F2.spec.id, "mabe.tk", payload);
      record(A2.spec.id, step, "IV.key-transformation", OpCounter{}, msg);
      F2.mabe_tk = mabe::parse_transformed_key(
          *pairing, inbox_take(F2, "mabe.tk", step));
      return;
    }
    if (step == "fetch") {
      Bytes payload(static_cast<std::size_t>(request_size));
      auto msg = send(F2.spec.id, C.spec.id, "request", payload);
      record(F2.spec.id, step, "", OpCounter{}, msg, "ciphertext requested");
      return;
    }
    if (step == "download") {
      const Bytes* blob = nullptr;
      for (const auto& [type, data] : C.stored) {
        if (type == "mabe.ct") blob = &data;
      }
      if (!blob) throw ProtocolError("download before store");
      auto msg = send(C.spec.id, F2.spec.id, "mabe.ct", *blob);
      record(C.spec.id, step, "", OpCounter{}, msg);
      F2.mabe_ct = mabe::parse_ciphertext(*pairing,
                                          inbox_take(F2, "mabe.ct", step));
      return;
    }
    if (step == "partial-decrypt") {
      require_layer(F2, Layer::fog, step);
      if (!F2.mabe_ct || !F2.mabe_tk)
        throw ProtocolError("partial-decrypt before download/send-key");
      OpCounter cost = counted(F2, [&] {
        F2.mabe_pct = mabe::partial_decrypt(F2.ctx, *F2.mabe_ct, *F2.mabe_tk);
      });
      record(F2.spec.id, step, "IV.partial-decryption", cost);
      return;
    }
    if (step == "respond") {
      if (!F2.mabe_pct) throw ProtocolError("respond before partial-decrypt");
      Bytes payload = mabe::serialize(*pairing, *F2.mabe_pct);
      auto msg = send(F2.spec.id, A2.spec.id, "mabe.partial", payload);
      record(F2.spec.id, step, "IV.partial-decryption", OpCounter{}, msg);
      return;
    }
    if (step == "full-decrypt") {
      require_layer(A2, Layer::perception, step);
      Bytes payload = inbox_take(A2, "mabe.partial", step);
      mabe::PartialCiphertext pct = mabe::parse_partial(*pairing, payload);
      if (!A2.mabe_r) throw ProtocolError("full-decrypt before transform-key");
      GT d{};
      OpCounter cost = counted(A2, [&] {
        d = mabe::full_decrypt(A2.ctx, pct, *A2.mabe_r);
      });
      bool match = expect_mabe_d && d == *expect_mabe_d;
      record(A2.spec.id, step, "IV.full-decryption", cost, std::nullopt,
             match ? "plaintext recovered" : "plaintext MISMATCH");
      if (!match) throw ProtocolError("requester plaintext differs from owner");
      return;
    }
    throw ProtocolError("unknown access-control step: " + step);
  }

  void step_computation(const std::string& step) {
    SimEntity& PF1 = entity(cast.at("PF1"));
    SimEntity& PF2 = entity(cast.at("PF2"));
    SimEntity& C = entity(cast.at("C"));

    if (step == "keygen-pf1" || step == "keygen-pf2") {
      SimEntity& node = step == "keygen-pf1" ? PF1 : PF2;
      require_layer(node, Layer::fog, step);
      OpCounter cost = counted(node, [&] {
        node.homo_keys = homopre::keygen(node.ctx, node.rng);
        board.homo_pks[node.spec.id] = homopre::public_part(*node.homo_keys);
      });
      record(node.spec.id, step,
             step == "keygen-pf1" ? "V.key-generation-p1" : "V.key-generation-p2",
             cost);
      return;
    }
    if (step == "encrypt") {
      if (!PF1.homo_keys) throw ProtocolError("encrypt before keygen-pf1");
      GT d = pairing->random_gt(PF1.rng);
      // builtin evaluation squares twice: expected = d^4
      expect_homo = pairing->gt_exp(d, pairing->scalar(4));
      result.plaintext_encodings.push_back(pairing->serialize(d));
      result.plaintext_encodings.push_back(pairing->serialize(*expect_homo));
      OpCounter cost = counted(PF1, [&] {
        PF1.homo_ct = homopre::encrypt(PF1.ctx, PF1.rng, d,
                                       board.homo_pks.at(PF1.spec.id),
                                       homopre::Level::second);
      });
      record(PF1.spec.id, step, "V.encryption", cost);
      return;
    }
    if (step == "upload") {
      if (!PF1.homo_ct) throw ProtocolError("upload before encrypt");
      Bytes blob = homopre::serialize(*pairing, *PF1.homo_ct);
      auto msg = send(PF1.spec.id, C.spec.id, "homo.ct", blob);
      record(PF1.spec.id, step, "V.pf1-roundtrip", OpCounter{}, msg,
             "encrypted datum archived");
      return;
    }
    if (step == "query") {
      homopre::EvalProgram prog;
      prog.ops.push_back({homopre::EvalOp::Kind::mul_ct, 0, GT{}});
      PF2.homo_prog = prog;
      Bytes payload = homopre::serialize(*pairing, prog);
      auto msg = send(PF2.spec.id, C.spec.id, "homo.query", payload);
      record(PF2.spec.id, step, "V.pf2-request", OpCounter{}, msg,
             "evaluation requested");
      return;
    }
    if (step == "forward-query") {
      Bytes prog_bytes = inbox_take(C, "homo.query", step);
      const Bytes* ct_blob = nullptr;
      for (const auto& [type, data] : C.stored) {
        if (type == "homo.ct") ct_blob = &data;
      }
      if (!ct_blob) throw ProtocolError("forward-query before upload");
      Bytes payload = *ct_blob;
      append(payload, prog_bytes);
      auto msg = send(C.spec.id, PF1.spec.id, "homo.query", payload);
      record(C.spec.id, step, "", OpCounter{}, msg, "<CT, f1> forwarded");
      Bytes in = inbox_take(PF1, "homo.query", step);
      PF1.homo_ct = homopre::parse_ciphertext(
          *pairing, BytesView(in).subspan(0, 2 * Pairing::kElementBytes),
          homopre::Level::second);
      PF1.homo_prog = homopre::parse_program(
          *pairing, BytesView(in).subspan(2 * Pairing::kElementBytes));
      return;
    }
    if (step == "eval") {
      require_layer(PF1, Layer::fog, step);
      if (!PF1.homo_ct || !PF1.homo_prog)
        throw ProtocolError("eval before forward-query");
      OpCounter cost = counted(PF1, [&] {
        std::vector<homopre::Ciphertext> inputs{*PF1.homo_ct};
        PF1.homo_ct = homopre::run_program(PF1.ctx, PF1.rng, *PF1.homo_prog,
                                           inputs,
                                           board.homo_pks.at(PF1.spec.id));
      });
      record(PF1.spec.id, step, "V.computation-encrypted", cost,
             std::nullopt, "meta-result computed");
      return;
    }
    if (step == "rekeygen") {
      if (!PF1.homo_keys) throw ProtocolError("rekeygen before keygen-pf1");
      OpCounter cost = counted(PF1, [&] {
        PF1.homo_rk = homopre::rekeygen(PF1.ctx, PF1.homo_keys->sk,
                                        board.homo_pks.at(PF2.spec.id).pk2);
      });
      record(PF1.spec.id, step, "V.re-encryption-key-generation", cost);
      return;
    }
    if (step == "reencrypt") {
      if (!PF1.homo_rk) throw ProtocolError("reencrypt before rekeygen");
      OpCounter cost = counted(PF1, [&] {
        PF1.homo_ct = homopre::reencrypt(PF1.ctx, *PF1.homo_ct, *PF1.homo_rk);
      });
      record(PF1.spec.id, step, "V.re-encryption", cost, std::nullopt,
             "meta-result switched to PF2's key");
      return;
    }
    if (step == "eval-transformed") {
      require_layer(PF1, Layer::fog, step);
      OpCounter cost = counted(PF1, [&] {
        std::vector<homopre::Ciphertext> inputs{*PF1.homo_ct};
        homopre::EvalProgram prog;
        prog.ops.push_back({homopre::EvalOp::Kind::mul_ct, 0, GT{}});
        PF1.homo_ct = homopre::run_program(PF1.ctx, PF1.rng, prog, inputs,
                                           board.homo_pks.at(PF2.spec.id));
      });
      record(PF1.spec.id, step, "V.computation-transformed", cost);
      return;
    }
    if (step == "reply") {
      Bytes blob = homopre::serialize(*pairing, *PF1.homo_ct);
      auto msg = send(PF1.spec.id, C.spec.id, "homo.result", blob);
      record(PF1.spec.id, step, "V.pf1-roundtrip", OpCounter{}, msg,
             "final result to cloud");
      return;
    }
    if (step == "respond") {
      const Bytes* blob = nullptr;
      for (const auto& [type, data] : C.stored) {
        if (type == "homo.result") blob = &data;
      }
      if (!blob) throw ProtocolError("respond before reply");
      auto msg = send(C.spec.id, PF2.spec.id, "homo.result", *blob);
      record(C.spec.id, step, "", OpCounter{}, msg);
      return;
    }
    if (step == "decrypt") {
      require_layer(PF2, Layer::fog, step);
      Bytes payload = inbox_take(PF2, "homo.result", step);
      homopre::Ciphertext ct = homopre::parse_ciphertext(
          *pairing, payload, homopre::Level::first);
      GT res{};
      OpCounter cost = counted(PF2, [&] {
        res = homopre::decrypt(PF2.ctx, ct, PF2.homo_keys->sk);
      });
      bool match = expect_homo && res == *expect_homo;
      record(PF2.spec.id, step, "V.decryption", cost, std::nullopt,
             match ? "result recovered" : "result MISMATCH");
      if (!match)
        throw ProtocolError("decrypted result differs from the plaintext product");
      return;
    }
    throw ProtocolError("unknown computation step: " + step);
  }

  void dispatch(const std::string& step) {
    switch (sc.flow) {
      case Flow::aggregation: step_aggregation(step); break;
      case Flow::data_sharing: step_data_sharing(step); break;
      case Flow::access_control: step_access_control(step); break;
      case Flow::computation: step_computation(step); break;
    }
  }

  // ---- scripted assertion checks ----------------------------------------------

  void check_asserts() {
    for (const auto& line : sc.asserts) {
      std::istringstream is(line);
      std::string kind;
      is >> kind;
      if (kind == "ledger") {
        std::string src, dst;
        std::size_t expected = 0;
        is >> src >> dst >> expected;
        std::size_t got = result.ledger.link_total(src, dst);
        if (got != expected)
          throw ProtocolError("ledger assertion failed: " + src + " -> " + dst +
                              " carried " + std::to_string(got) + " bytes, expected " +
                              std::to_string(expected));
      } else if (kind == "step-cost") {
        std::string step_name;
        is >> step_name;
        const TranscriptStep* found = nullptr;
        for (const auto& t : result.transcript) {
          if (t.step == step_name && t.cost.total() > 0) {
            found = &t;
            break;
          }
        }
        if (!found)
          throw ProtocolError("step-cost assertion: no counted step named " +
                              step_name);
        OpCounter want;
        std::string term;
        while (is >> term) {
          auto eq = term.find('=');
          if (eq == std::string::npos)
            throw ProtocolError("bad step-cost term: " + term);
          std::uint64_t v = std::stoull(term.substr(eq + 1));
          switch (term[0]) {
            case 'P': want.pairings = v; break;
            case 'E': want.exponentiations = v; break;
            case 'M': want.multiplications = v; break;
            case 'H': want.hashes = v; break;
            case 'D': want.divisions = v; break;
            case 'S': want.subtractions = v; break;
            default: throw ProtocolError("bad step-cost category: " + term);
          }
        }
        if (!(found->cost == want))
          throw ProtocolError("step-cost assertion failed for " + step_name);
      } else {
        throw ProtocolError("unknown assertion: " + line);
      }
    }
  }

  RunResult run_all() {
    result = RunResult{};
    try {
      if (!built) build();
      for (const auto& step : sc.steps) dispatch(step);
      check_asserts();
      result.ok = true;
    } catch (const std::exception& e) {
      result.ok = false;
      result.failure = e.what();
    }
    for (const auto& id : order)
      result.counters[id] = entities.at(id).ctx.counter();
    for (const auto& id : order) {
      const auto& e = entities.at(id);
      if (e.spec.layer == Layer::cloud && !e.stored.empty())
        result.cloud_blobs[id] = e.stored;
    }
    return result;
  }
};

Simulator::Simulator(Scenario scenario, std::shared_ptr<const Pairing> pairing,
                     AuthHook hook)
    : impl_(std::make_shared<Impl>(std::move(scenario), std::move(pairing),
                                   std::move(hook))) {}

void Simulator::build_topology() { impl_->build(); }

RunResult Simulator::run() { return impl_->run_all(); }

RunResult run_scenario(const Scenario& scenario, AuthHook hook) {
  auto pairing = Pairing::setup(scenario.backend,
                                "scenario:" + std::to_string(scenario.seed));
  Simulator sim(scenario, pairing, std::move(hook));
  sim.build_topology();
  return sim.run();
}

std::map<std::string, costmodel::Measured> measured_tasks(const RunResult& r) {
  std::map<std::string, costmodel::Measured> out;
  for (const auto& t : r.transcript) {
    if (t.task.empty()) continue;
    auto& m = out[t.task];
    m.counts += t.cost;
    if (t.msg) m.bytes = m.bytes.value_or(0) + static_cast<long>(t.msg->size);
  }
  return out;
}

}  // namespace fogsec::sim
