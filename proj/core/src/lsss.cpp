#include "fogsec/lsss.hpp"

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <cstring>

#include <nlohmann/json.hpp>

#include "fogsec/errors.hpp"

namespace fogsec::lsss {

Policy Policy::leaf(std::string a) {
  Policy p;
  p.kind = Kind::leaf;
  p.attr = std::move(a);
  return p;
}

Policy Policy::and_of(Policy l, Policy r) {
  Policy p;
  p.kind = Kind::and_node;
  p.children.push_back(std::move(l));
  p.children.push_back(std::move(r));
  return p;
}

Policy Policy::or_of(Policy l, Policy r) {
  Policy p;
  p.kind = Kind::or_node;
  p.children.push_back(std::move(l));
  p.children.push_back(std::move(r));
  return p;
}

std::size_t Policy::leaf_count() const {
  if (kind == Kind::leaf) return 1;
  std::size_t n = 0;
  for (const auto& c : children) n += c.leaf_count();
  return n;
}

bool Policy::evaluate(const std::set<std::string>& attrs) const {
  switch (kind) {
    case Kind::leaf:
      return attrs.count(attr) != 0;
    case Kind::and_node:
      return children[0].evaluate(attrs) && children[1].evaluate(attrs);
    case Kind::or_node:
      return children[0].evaluate(attrs) || children[1].evaluate(attrs);
  }
  return false;
}

namespace {

struct Parser {
  std::string_view text;
  std::size_t pos = 0;

  void skip_ws() {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos])))
      ++pos;
  }

  bool at_end() {
    skip_ws();
    return pos >= text.size();
  }

  std::string next_token_peek() {
    skip_ws();
    std::size_t p = pos;
    std::string tok;
    while (p < text.size()) {
      char c = text[p];
      if (std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-' ||
          c == '.' || c == ':') {
        tok.push_back(c);
        ++p;
      } else {
        break;
      }
    }
    return tok;
  }

  static bool is_keyword(const std::string& tok, const char* kw) {
    if (tok.size() != std::strlen(kw)) return false;
    for (std::size_t i = 0; i < tok.size(); ++i) {
      if (std::toupper(static_cast<unsigned char>(tok[i])) != kw[i]) return false;
    }
    return true;
  }

  Policy parse_or() {
    Policy left = parse_and();
    while (true) {
      std::string tok = next_token_peek();
      if (is_keyword(tok, "OR")) {
        pos += tok.size();
        skip_ws();
        Policy right = parse_and();
        left = Policy::or_of(std::move(left), std::move(right));
      } else {
        return left;
      }
    }
  }

  Policy parse_and() {
    Policy left = parse_atom();
    while (true) {
      std::string tok = next_token_peek();
      if (is_keyword(tok, "AND")) {
        pos += tok.size();
        skip_ws();
        Policy right = parse_atom();
        left = Policy::and_of(std::move(left), std::move(right));
      } else {
        return left;
      }
    }
  }

  Policy parse_atom() {
    skip_ws();
    if (pos >= text.size()) throw ProtocolError("policy ended unexpectedly");
    if (text[pos] == '(') {
      ++pos;
      Policy inner = parse_or();
      skip_ws();
      if (pos >= text.size() || text[pos] != ')')
        throw ProtocolError("unbalanced parenthesis in policy");
      ++pos;
      return inner;
    }
    std::string tok = next_token_peek();
    if (tok.empty()) throw ProtocolError("expected attribute name in policy");
    if (is_keyword(tok, "AND") || is_keyword(tok, "OR"))
      throw ProtocolError("keyword in attribute position");
    pos += tok.size();
    return Policy::leaf(tok);
  }
};

}  // namespace

Policy parse_policy(std::string_view text) {
  Parser p{text};
  Policy out = p.parse_or();
  if (!p.at_end()) throw ProtocolError("trailing tokens in policy");
  return out;
}

std::string to_string(const Policy& p) {
  switch (p.kind) {
    case Policy::Kind::leaf:
      return p.attr;
    case Policy::Kind::and_node:
      return "(" + to_string(p.children[0]) + " AND " + to_string(p.children[1]) + ")";
    case Policy::Kind::or_node:
      return "(" + to_string(p.children[0]) + " OR " + to_string(p.children[1]) + ")";
  }
  return {};
}

namespace {

mpz_class mod_q(mpz_class v, const mpz_class& q) {
  mpz_mod(v.get_mpz_t(), v.get_mpz_t(), q.get_mpz_t());
  return v;
}

// recursive labeled-vector construction; vectors use small ints, reduced at
// the end
void convert(const Policy& node, std::vector<long> vec, std::size_t& counter,
             std::vector<std::pair<std::string, std::vector<long>>>& out) {
  switch (node.kind) {
    case Policy::Kind::leaf:
      out.emplace_back(node.attr, std::move(vec));
      return;
    case Policy::Kind::or_node:
      convert(node.children[0], vec, counter, out);
      convert(node.children[1], std::move(vec), counter, out);
      return;
    case Policy::Kind::and_node: {
      std::vector<long> left = vec;
      left.resize(counter, 0);
      left.push_back(1);
      std::vector<long> right(counter, 0);
      right.push_back(-1);
      ++counter;
      convert(node.children[0], std::move(left), counter, out);
      convert(node.children[1], std::move(right), counter, out);
      return;
    }
  }
}

}  // namespace

AccessStructure compile(const Policy& policy, const mpz_class& q) {
  if (policy.leaf_count() == 0) throw ProtocolError("policy has no leaves");
  std::size_t counter = 1;
  std::vector<std::pair<std::string, std::vector<long>>> labeled;
  convert(policy, {1}, counter, labeled);

  AccessStructure s;
  s.q = q;
  for (auto& [attr, vec] : labeled) {
    vec.resize(counter, 0);
    std::vector<mpz_class> row;
    row.reserve(counter);
    for (long v : vec) row.push_back(mod_q(mpz_class(v), q));
    s.rows.push_back(std::move(row));
    s.row_attr.push_back(attr);
  }
  return s;
}

std::optional<std::map<std::size_t, mpz_class>> satisfy(
    const AccessStructure& s, const std::set<std::string>& attrs) {
  std::vector<std::size_t> eligible;
  for (std::size_t i = 0; i < s.row_count(); ++i) {
    if (attrs.count(s.row_attr[i])) eligible.push_back(i);
  }
  if (eligible.empty()) return std::nullopt;

  // Solve M c = e1 where M's columns are the eligible rows of A (M is m x k).
  const std::size_t m = s.width();
  const std::size_t k = eligible.size();
  const mpz_class& q = s.q;
  std::vector<std::vector<mpz_class>> M(m, std::vector<mpz_class>(k + 1, 0));
  for (std::size_t j = 0; j < k; ++j) {
    for (std::size_t i = 0; i < m; ++i) M[i][j] = s.rows[eligible[j]][i];
  }
  M[0][k] = 1;  // target (1, 0, ..., 0)

  std::vector<std::size_t> pivot_col_of_row(m, SIZE_MAX);
  std::size_t rank_row = 0;
  for (std::size_t col = 0; col < k && rank_row < m; ++col) {
    std::size_t sel = SIZE_MAX;
    for (std::size_t i = rank_row; i < m; ++i) {
      if (M[i][col] != 0) {
        sel = i;
        break;
      }
    }
    if (sel == SIZE_MAX) continue;
    std::swap(M[rank_row], M[sel]);
    mpz_class inv;
    mpz_invert(inv.get_mpz_t(), M[rank_row][col].get_mpz_t(), q.get_mpz_t());
    for (std::size_t j = col; j <= k; ++j)
      M[rank_row][j] = mod_q(M[rank_row][j] * inv, q);
    for (std::size_t i = 0; i < m; ++i) {
      if (i == rank_row || M[i][col] == 0) continue;
      mpz_class f = M[i][col];
      for (std::size_t j = col; j <= k; ++j)
        M[i][j] = mod_q(M[i][j] - f * M[rank_row][j], q);
    }
    pivot_col_of_row[rank_row] = col;
    ++rank_row;
  }
  // consistency: rows whose coefficient part is all zero must have zero RHS
  for (std::size_t i = rank_row; i < m; ++i) {
    if (M[i][k] != 0) return std::nullopt;
  }

  std::vector<mpz_class> c(k, 0);
  for (std::size_t i = 0; i < rank_row; ++i) {
    c[pivot_col_of_row[i]] = M[i][k];  // free variables stay zero
  }
  std::map<std::size_t, mpz_class> out;
  for (std::size_t j = 0; j < k; ++j) {
    if (c[j] != 0) out[eligible[j]] = c[j];
  }
  if (out.empty()) {
    // all-zero solution can only hit a zero target; e1 is nonzero
    return std::nullopt;
  }
  return out;
}

std::vector<mpz_class> share(const AccessStructure& s, const mpz_class& secret,
                             bool zero_target, Rng& rng) {
  const mpz_class& q = s.q;
  std::vector<mpz_class> v(s.width());
  v[0] = zero_target ? mpz_class(0) : mod_q(secret, q);
  for (std::size_t i = 1; i < v.size(); ++i) v[i] = rng.below(q);
  std::vector<mpz_class> shares;
  shares.reserve(s.row_count());
  for (const auto& row : s.rows) {
    mpz_class acc = 0;
    for (std::size_t i = 0; i < row.size(); ++i) acc += row[i] * v[i];
    shares.push_back(mod_q(acc, q));
  }
  return shares;
}

std::string to_json(const AccessStructure& s) {
  nlohmann::json j;
  j["q"] = s.q.get_str();
  j["rho"] = s.row_attr;
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& row : s.rows) {
    nlohmann::json r = nlohmann::json::array();
    for (const auto& e : row) r.push_back(e.get_str());
    rows.push_back(r);
  }
  j["matrix"] = rows;
  return j.dump(2);
}

}  // namespace fogsec::lsss
