#include "fogsec/mabe.hpp"


#include "fogsec/errors.hpp"

namespace fogsec::mabe {

void AuthorityDirectory::enroll(const AuthorityKeys& auth) {
  for (const auto& [attr, pub] : auth.pub) {
    if (table_.count(attr))
      throw ProtocolError("attribute already claimed by another authority: " +
                          attr);
  }
  for (const auto& [attr, pub] : auth.pub) table_.emplace(attr, pub);
}

const AttrPub& AuthorityDirectory::lookup(const std::string& attr) const {
  auto it = table_.find(attr);
  if (it == table_.end())
    throw ProtocolError("no authority publishes attribute: " + attr);
  return it->second;
}

AuthorityKeys authority_setup(Ctx& ctx, Rng& rng,
                              const std::set<std::string>& attrs) {
  if (attrs.empty()) throw ProtocolError("authority controls no attributes");
  AuthorityKeys out;
  for (const auto& attr : attrs) {
    Scalar a = ctx.group().random_nonzero_scalar(rng);
    Scalar b = ctx.group().random_nonzero_scalar(rng);
    AttrPub pub{ctx.gt_exp(ctx.z(), a), ctx.g1_exp(ctx.g(), b)};
    out.secrets.emplace(attr, std::make_pair(a, b));
    out.pub.emplace(attr, pub);
  }
  return out;
}

UserKey keygen_user(Ctx& ctx, const AuthorityKeys& auth, BytesView id,
                    const std::set<std::string>& attrs) {
  UserKey uk;
  uk.id.assign(id.begin(), id.end());
  G1 h_id = ctx.hash_to_g1(id);
  for (const auto& attr : attrs) {
    auto it = auth.secrets.find(attr);
    if (it == auth.secrets.end())
      throw ProtocolError("attribute not controlled by this authority: " + attr);
    const auto& [a, b] = it->second;
    // K = g^a * H1(id)^b
    G1 k = ctx.g1_mul(ctx.g1_exp(ctx.g(), a), ctx.g1_exp(h_id, b));
    uk.K.emplace(attr, k);
  }
  return uk;
}

Intermediate intermediate_encrypt(Ctx& ctx, Rng& rng,
                                  const std::vector<std::string>& attrs,
                                  const AuthorityDirectory& dir) {
  if (attrs.empty()) throw ProtocolError("datum carries no attributes");
  const Pairing& p = ctx.group();
  Intermediate out;
  for (const auto& attr : attrs) {
    const AttrPub& pub = dir.lookup(attr);
    IsSlot is;
    is.t = p.random_nonzero_scalar(rng);
    is.lambda_p = p.random_scalar(rng);
    is.omega_p = p.random_scalar(rng);
    is.attr = attr;

    IctSlot ict;
    // ict1 = Z^{lambda'} * (ê(g,g)^{a_k})^t
    ict.ict1 = ctx.gt_mul(ctx.gt_exp(ctx.z(), is.lambda_p),
                          ctx.gt_exp(pub.egg_a, is.t));
    ict.ict2 = ctx.g1_exp(ctx.g(), is.t);
    // ict3 = (g^{b_k})^t * g^{omega'}
    ict.ict3 = ctx.g1_mul(ctx.g1_exp(pub.g_b, is.t),
                          ctx.g1_exp(ctx.g(), is.omega_p));
    out.ict.push_back(ict);
    out.is.push_back(is);
  }
  return out;
}

Ciphertext full_encrypt(Ctx& ctx, Rng& rng, const GT& d,
                        const Intermediate& inter, const lsss::Policy& policy) {
  const Pairing& p = ctx.group();
  Ciphertext ct;
  ct.policy_text = lsss::to_string(policy);
  ct.structure = lsss::compile(policy, p.order());

  // one prepared slot per policy leaf, consumed in row order
  std::vector<bool> used(inter.is.size(), false);
  std::vector<std::size_t> slot_of_row;
  for (const auto& attr : ct.structure.row_attr) {
    std::size_t found = SIZE_MAX;
    for (std::size_t i = 0; i < inter.is.size(); ++i) {
      if (!used[i] && inter.is[i].attr == attr) {
        found = i;
        break;
      }
    }
    if (found == SIZE_MAX)
      throw ProtocolError("policy references attribute with no prepared slot: " +
                          attr);
    used[found] = true;
    slot_of_row.push_back(found);
  }

  Scalar m_s = p.random_nonzero_scalar(rng);
  ct.c0 = ctx.gt_mul(d, ctx.gt_exp(ctx.z(), m_s));

  std::vector<mpz_class> lambda =
      lsss::share(ct.structure, m_s.value(), false, rng);
  std::vector<mpz_class> omega = lsss::share(ct.structure, 0, true, rng);

  for (std::size_t x = 0; x < ct.structure.row_count(); ++x) {
    const IsSlot& is = inter.is[slot_of_row[x]];
    Ciphertext::Row row;
    row.ict = inter.ict[slot_of_row[x]];
    row.corr1 = ctx.sc_sub(p.scalar(lambda[x]), is.lambda_p);
    row.corr2 = ctx.sc_sub(p.scalar(omega[x]), is.omega_p);
    row.attr = is.attr;
    ct.rows.push_back(std::move(row));
  }
  return ct;
}

std::pair<TransformedKey, Scalar> transform_key(Ctx& ctx, Rng& rng,
                                                const UserKey& uk) {
  const Pairing& p = ctx.group();
  Scalar r = p.random_nonzero_scalar(rng);
  Scalar rinv = ctx.sc_inv(r);
  TransformedKey tk;
  tk.id = uk.id;
  for (const auto& [attr, k] : uk.K) tk.K_inv.emplace(attr, ctx.g1_exp(k, rinv));
  tk.h_id_inv = ctx.g1_exp(ctx.hash_to_g1(uk.id), rinv);
  return {tk, r};
}

PartialCiphertext partial_decrypt(Ctx& ctx, const Ciphertext& ct,
                                  const TransformedKey& tk) {
  const Pairing& p = ctx.group();
  std::set<std::string> attrs;
  for (const auto& [attr, k] : tk.K_inv) attrs.insert(attr);
  auto coeffs = lsss::satisfy(ct.structure, attrs);
  if (!coeffs)
    throw PolicyUnsatisfied("transformed key does not satisfy the policy");

  PartialCiphertext out;
  out.c0 = ct.c0;
  bool first = true;
  for (const auto& [x, c] : *coeffs) {
    const auto& row = ct.rows[x];
    Scalar cx = p.scalar(c);
    // ê(H1(id)^{1/r}, ict3 * g^{corr2}) / ê(K^{1/r}, ict2), to the c_x
    G1 c3 = ctx.g1_mul(row.ict.ict3, ctx.g1_exp(ctx.g(), row.corr2));
    GT num = ctx.pair(tk.h_id_inv, c3);
    GT den = ctx.pair(tk.K_inv.at(row.attr), row.ict.ict2);
    GT term1 = ctx.gt_exp(ctx.gt_div(num, den), cx);
    // (ict1 * Z^{corr1})^{c_x}
    GT term2 =
        ctx.gt_exp(ctx.gt_mul(row.ict.ict1, ctx.gt_exp(ctx.z(), row.corr1)), cx);
    if (first) {
      out.ct1 = term1;
      out.ct2 = term2;
      first = false;
    } else {
      out.ct1 = ctx.gt_mul(out.ct1, term1);
      out.ct2 = ctx.gt_mul(out.ct2, term2);
    }
  }
  return out;
}

GT full_decrypt(Ctx& ctx, const PartialCiphertext& pct, const Scalar& r) {
  GT blind = ctx.gt_mul(ctx.gt_exp(pct.ct1, r), pct.ct2);
  return ctx.gt_div(pct.c0, blind);
}

// -- wire encodings ------------------------------------------------------------

static constexpr std::size_t kE = Pairing::kElementBytes;
static constexpr std::size_t kS = Pairing::kScalarBytes;

namespace {

void put_string(Bytes& out, const std::string& s) {
  append_u32_be(out, static_cast<std::uint32_t>(s.size()));
  append(out, BytesView(reinterpret_cast<const std::uint8_t*>(s.data()), s.size()));
}

std::string get_string(BytesView in, std::size_t& off) {
  std::uint32_t len = read_u32_be(in, off);
  off += 4;
  if (off + len > in.size()) throw DecodeError("truncated string field");
  std::string s(reinterpret_cast<const char*>(in.data() + off), len);
  off += len;
  return s;
}

}  // namespace

Bytes serialize(const Pairing& p, const Ciphertext& ct) {
  Bytes out;
  append_u32_be(out, static_cast<std::uint32_t>(ct.structure.row_count()));
  append_u32_be(out, static_cast<std::uint32_t>(ct.structure.width()));
  put_string(out, ct.policy_text);
  append(out, p.serialize(ct.c0));
  for (const auto& row : ct.rows) {
    append(out, p.serialize(row.ict.ict1));
    append(out, p.serialize(row.ict.ict2));
    append(out, p.serialize(row.ict.ict3));
    append(out, p.serialize(row.corr1));
    append(out, p.serialize(row.corr2));
    put_string(out, row.attr);
  }
  return out;
}

Ciphertext parse_ciphertext(const Pairing& p, BytesView in) {
  std::size_t off = 0;
  std::uint32_t l = read_u32_be(in, off);
  off += 4;
  std::uint32_t m = read_u32_be(in, off);
  off += 4;
  Ciphertext ct;
  ct.policy_text = get_string(in, off);
  ct.structure = lsss::compile(lsss::parse_policy(ct.policy_text), p.order());
  if (ct.structure.row_count() != l || ct.structure.width() != m)
    throw DecodeError("access-structure header does not match the policy");
  if (in.size() < off + kE) throw DecodeError("truncated ciphertext");
  ct.c0 = p.parse_gt(in.subspan(off, kE));
  off += kE;
  for (std::uint32_t x = 0; x < l; ++x) {
    Ciphertext::Row row;
    if (in.size() < off + 3 * kE + 2 * kS) throw DecodeError("truncated row");
    row.ict.ict1 = p.parse_gt(in.subspan(off, kE));
    off += kE;
    row.ict.ict2 = p.parse_g1(in.subspan(off, kE));
    off += kE;
    row.ict.ict3 = p.parse_g1(in.subspan(off, kE));
    off += kE;
    row.corr1 = p.parse_scalar(in.subspan(off, kS));
    off += kS;
    row.corr2 = p.parse_scalar(in.subspan(off, kS));
    off += kS;
    row.attr = get_string(in, off);
    if (row.attr != ct.structure.row_attr[x])
      throw DecodeError("row label disagrees with the access structure");
    ct.rows.push_back(std::move(row));
  }
  if (off != in.size()) throw DecodeError("trailing bytes in ciphertext");
  return ct;
}

Bytes offline_message(const Pairing& p, const GT& d, const Intermediate& inter) {
  Bytes out;
  append(out, p.serialize(d));
  append_u32_be(out, static_cast<std::uint32_t>(inter.ict.size()));
  for (std::size_t i = 0; i < inter.ict.size(); ++i) {
    append(out, p.serialize(inter.ict[i].ict1));
    append(out, p.serialize(inter.ict[i].ict2));
    append(out, p.serialize(inter.ict[i].ict3));
    append(out, p.serialize(inter.is[i].t));
    append(out, p.serialize(inter.is[i].lambda_p));
    append(out, p.serialize(inter.is[i].omega_p));
    put_string(out, inter.is[i].attr);
  }
  return out;
}

std::pair<GT, Intermediate> parse_offline_message(const Pairing& p, BytesView in) {
  std::size_t off = 0;
  if (in.size() < kE) throw DecodeError("truncated offline message");
  GT d = p.parse_gt(in.subspan(0, kE));
  off += kE;
  std::uint32_t n = read_u32_be(in, off);
  off += 4;
  Intermediate inter;
  for (std::uint32_t i = 0; i < n; ++i) {
    if (in.size() < off + 3 * kE + 3 * kS) throw DecodeError("truncated slot");
    IctSlot ict;
    ict.ict1 = p.parse_gt(in.subspan(off, kE));
    off += kE;
    ict.ict2 = p.parse_g1(in.subspan(off, kE));
    off += kE;
    ict.ict3 = p.parse_g1(in.subspan(off, kE));
    off += kE;
    IsSlot is;
    is.t = p.parse_scalar(in.subspan(off, kS));
    off += kS;
    is.lambda_p = p.parse_scalar(in.subspan(off, kS));
    off += kS;
    is.omega_p = p.parse_scalar(in.subspan(off, kS));
    off += kS;
    is.attr = get_string(in, off);
    inter.ict.push_back(ict);
    inter.is.push_back(is);
  }
  if (off != in.size()) throw DecodeError("trailing bytes in offline message");
  return {d, inter};
}

Bytes serialize(const Pairing& p, const TransformedKey& tk) {
  Bytes out;
  put_string(out, std::string(tk.id.begin(), tk.id.end()));
  append_u32_be(out, static_cast<std::uint32_t>(tk.K_inv.size()));
  for (const auto& [attr, k] : tk.K_inv) {
    put_string(out, attr);
    append(out, p.serialize(k));
  }
  append(out, p.serialize(tk.h_id_inv));
  return out;
}

TransformedKey parse_transformed_key(const Pairing& p, BytesView in) {
  std::size_t off = 0;
  TransformedKey tk;
  std::string id = get_string(in, off);
  tk.id.assign(id.begin(), id.end());
  std::uint32_t n = read_u32_be(in, off);
  off += 4;
  for (std::uint32_t i = 0; i < n; ++i) {
    std::string attr = get_string(in, off);
    if (in.size() < off + kE) throw DecodeError("truncated transformed key");
    tk.K_inv.emplace(attr, p.parse_g1(in.subspan(off, kE)));
    off += kE;
  }
  if (in.size() < off + kE) throw DecodeError("truncated transformed key");
  tk.h_id_inv = p.parse_g1(in.subspan(off, kE));
  off += kE;
  if (off != in.size()) throw DecodeError("trailing bytes in transformed key");
  return tk;
}

Bytes serialize(const Pairing& p, const PartialCiphertext& pct) {
  Bytes out;
  append(out, p.serialize(pct.ct1));
  append(out, p.serialize(pct.ct2));
  append(out, p.serialize(pct.c0));
  return out;
}

PartialCiphertext parse_partial(const Pairing& p, BytesView in) {
  if (in.size() != 3 * kE)
    throw DecodeError("partial-decryption response must be 384 bytes");
  PartialCiphertext pct;
  pct.ct1 = p.parse_gt(in.subspan(0, kE));
  pct.ct2 = p.parse_gt(in.subspan(kE, kE));
  pct.c0 = p.parse_gt(in.subspan(2 * kE, kE));
  return pct;
}

}  // namespace fogsec::mabe
