#pragma once
// Coefficients: rationals, optionally polynomials in commuting parameters.

#include <gmpxx.h>

#include <map>
#include <string>
#include <utility>
#include <vector>

namespace ncham {

using Rational = mpq_class;

std::string rat_str(const Rational& q);
Rational rat_parse(const std::string& s);  // "3", "-1/2"

// Global, append-only table of parameter names.  Ids follow first use,
// which is also the variable order used by grevlex.
int param_id(const std::string& name);
int param_lookup(const std::string& name);  // -1 if absent
const std::string& param_name(int id);

// sorted (param id, exponent>0)
using Mono = std::vector<std::pair<int, int>>;

int mono_degree(const Mono& m);
Mono mono_mul(const Mono& a, const Mono& b);
// grevlex, true if a > b
bool grevlex_greater(const Mono& a, const Mono& b);

class Coeff {
 public:
  Coeff() = default;
  Coeff(long v) : Coeff(Rational(v)) {}  // NOLINT
  Coeff(const Rational& q);              // NOLINT
  static Coeff param(int id, int power = 1);

  bool is_zero() const { return t_.empty(); }
  bool is_const() const { return t_.empty() || (t_.size() == 1 && t_[0].first.empty()); }
  Rational const_value() const;  // only meaningful if is_const()
  bool is_one() const;

  // terms sorted grevlex-descending
  const std::vector<std::pair<Mono, Rational>>& terms() const { return t_; }

  Coeff operator-() const;
  Coeff& operator+=(const Coeff& o);
  Coeff& operator-=(const Coeff& o);
  Coeff& operator*=(const Coeff& o);
  Coeff& operator*=(const Rational& q);
  friend Coeff operator+(Coeff a, const Coeff& b) { return a += b; }
  friend Coeff operator-(Coeff a, const Coeff& b) { return a -= b; }
  friend Coeff operator*(const Coeff& a, const Coeff& b);
  friend bool operator==(const Coeff& a, const Coeff& b) { return a.t_ == b.t_; }

  // sign of the leading term (grevlex); 0 for zero
  int lead_sign() const;
  const Rational& lead_coeff() const { return t_.front().second; }
  bool has_params() const;

  // Substitute values for all parameters appearing (missing ones -> error).
  Rational eval(const std::map<int, Rational>& at) const;
  // Substitute only the given parameters.
  Coeff subst(const std::map<int, Rational>& at) const;

  // Divide by the leading coefficient (grevlex).  Zero stays zero.
  Coeff monic() const;

  std::string str() const;  // "beta^2 - alpha*gamma"

 private:
  void add_term(const Mono& m, const Rational& q);
  std::vector<std::pair<Mono, Rational>> t_;
};

}  // namespace ncham
