#pragma once

#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "fogsec/rng.hpp"

namespace fogsec::lsss {

/// Monotone boolean policies over attribute names, compiled to l x m access
/// matrices with a row→attribute map rho. Conversion is the recursive
/// AND/OR-to-matrix construction: an AND gate appends a column, an OR gate
/// duplicates the parent vector.

struct Policy {
  enum class Kind { leaf, and_node, or_node };
  Kind kind = Kind::leaf;
  std::string attr;  // leaf only
  std::vector<Policy> children;

  static Policy leaf(std::string a);
  static Policy and_of(Policy l, Policy r);
  static Policy or_of(Policy l, Policy r);
  std::size_t leaf_count() const;
  /// Truth value under a given attribute set.
  bool evaluate(const std::set<std::string>& attrs) const;
};

/// Grammar: ident | '(' expr ')' | expr AND expr | expr OR expr.
/// AND binds tighter than OR; keywords are case-insensitive.
Policy parse_policy(std::string_view text);
std::string to_string(const Policy& p);

struct AccessStructure {
  // entries reduced mod q: the conversion only produces {-1, 0, 1}
  std::vector<std::vector<mpz_class>> rows;
  std::vector<std::string> row_attr;  // rho
  mpz_class q;

  std::size_t row_count() const { return rows.size(); }
  std::size_t width() const { return rows.empty() ? 0 : rows[0].size(); }
};

AccessStructure compile(const Policy& policy, const mpz_class& q);

/// Reconstruction coefficients over rows whose attribute is in `attrs`,
/// satisfying sum c_x * A_x = (1, 0, ..., 0); nullopt when the target vector
/// is outside their span. Deterministic: Gaussian elimination with pivots
/// taken in row order, free variables zero.
std::optional<std::map<std::size_t, mpz_class>> satisfy(
    const AccessStructure& s, const std::set<std::string>& attrs);

/// Shares lambda_x = A_x . v with v = (s, v2..vm) random; zero_target shares
/// the zero secret (the omega vector of the encryption schemes).
std::vector<mpz_class> share(const AccessStructure& s, const mpz_class& secret,
                             bool zero_target, Rng& rng);

std::string to_json(const AccessStructure& s);

}  // namespace fogsec::lsss
