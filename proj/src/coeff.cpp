#include "ncham/coeff.hpp"

#include <algorithm>
#include <mutex>
#include <shared_mutex>
#include <stdexcept>

namespace ncham {

std::string rat_str(const Rational& q) { return q.get_str(); }

Rational rat_parse(const std::string& s) {
  Rational q(s, 10);
  q.canonicalize();
  return q;
}

namespace {
struct ParamTable {
  std::shared_mutex mu;
  std::vector<std::string> names;
  std::map<std::string, int> ids;
};
ParamTable& params() {
  static ParamTable t;
  return t;
}
}  // namespace

int param_id(const std::string& name) {
  auto& t = params();
  {
    std::shared_lock lk(t.mu);
    auto it = t.ids.find(name);
    if (it != t.ids.end()) return it->second;
  }
  std::unique_lock lk(t.mu);
  auto it = t.ids.find(name);
  if (it != t.ids.end()) return it->second;
  int id = static_cast<int>(t.names.size());
  t.names.push_back(name);
  t.ids[name] = id;
  return id;
}

int param_lookup(const std::string& name) {
  auto& t = params();
  std::shared_lock lk(t.mu);
  auto it = t.ids.find(name);
  return it == t.ids.end() ? -1 : it->second;
}

const std::string& param_name(int id) {
  auto& t = params();
  std::shared_lock lk(t.mu);
  return t.names.at(static_cast<size_t>(id));
}

int mono_degree(const Mono& m) {
  int d = 0;
  for (auto& [v, e] : m) d += e;
  return d;
}

Mono mono_mul(const Mono& a, const Mono& b) {
  Mono r;
  size_t i = 0, j = 0;
  while (i < a.size() || j < b.size()) {
    if (j == b.size() || (i < a.size() && a[i].first < b[j].first)) {
      r.push_back(a[i++]);
    } else if (i == a.size() || b[j].first < a[i].first) {
      r.push_back(b[j++]);
    } else {
      r.emplace_back(a[i].first, a[i].second + b[j].second);
      ++i, ++j;
    }
  }
  return r;
}

// variables ordered x0 > x1 > ...; grevlex: higher degree wins, then the
// smaller exponent in the last variable wins.
bool grevlex_greater(const Mono& a, const Mono& b) {
  int da = mono_degree(a), db = mono_degree(b);
  if (da != db) return da > db;
  int maxv = -1;
  if (!a.empty()) maxv = std::max(maxv, a.back().first);
  if (!b.empty()) maxv = std::max(maxv, b.back().first);
  auto expo = [](const Mono& m, int v) {
    for (auto& [x, e] : m)
      if (x == v) return e;
    return 0;
  };
  for (int v = maxv; v >= 0; --v) {
    int ea = expo(a, v), eb = expo(b, v);
    if (ea != eb) return ea < eb;
  }
  return false;
}

Coeff::Coeff(const Rational& q) {
  if (q != 0) t_.emplace_back(Mono{}, q);
}

Coeff Coeff::param(int id, int power) {
  Coeff c;
  c.t_.emplace_back(Mono{{id, power}}, Rational(1));
  return c;
}

Rational Coeff::const_value() const {
  if (t_.empty()) return 0;
  if (!t_[0].first.empty()) throw std::logic_error("coefficient is not constant");
  return t_[0].second;
}

bool Coeff::is_one() const { return t_.size() == 1 && t_[0].first.empty() && t_[0].second == 1; }

bool Coeff::has_params() const {
  for (auto& [m, q] : t_)
    if (!m.empty()) return true;
  return false;
}

void Coeff::add_term(const Mono& m, const Rational& q) {
  if (q == 0) return;
  // terms kept grevlex-descending
  auto it = std::lower_bound(t_.begin(), t_.end(), m, [](const auto& term, const Mono& key) {
    return grevlex_greater(term.first, key);
  });
  if (it != t_.end() && it->first == m) {
    it->second += q;
    if (it->second == 0) t_.erase(it);
  } else {
    t_.insert(it, {m, q});
  }
}

Coeff Coeff::operator-() const {
  Coeff r = *this;
  for (auto& [m, q] : r.t_) q = -q;
  return r;
}

Coeff& Coeff::operator+=(const Coeff& o) {
  if (is_const() && o.is_const()) {
    Rational s = const_value() + o.const_value();
    *this = Coeff(s);
    return *this;
  }
  for (auto& [m, q] : o.t_) add_term(m, q);
  return *this;
}

Coeff& Coeff::operator-=(const Coeff& o) {
  if (is_const() && o.is_const()) {
    Rational s = const_value() - o.const_value();
    *this = Coeff(s);
    return *this;
  }
  for (auto& [m, q] : o.t_) add_term(m, -q);
  return *this;
}

Coeff operator*(const Coeff& a, const Coeff& b) {
  if (a.is_const() && b.is_const()) return Coeff(Rational(a.const_value() * b.const_value()));
  Coeff r;
  for (auto& [ma, qa] : a.t_)
    for (auto& [mb, qb] : b.t_) r.add_term(mono_mul(ma, mb), qa * qb);
  return r;
}

Coeff& Coeff::operator*=(const Coeff& o) {
  *this = *this * o;
  return *this;
}

Coeff& Coeff::operator*=(const Rational& q) {
  if (q == 0) {
    t_.clear();
    return *this;
  }
  for (auto& [m, c] : t_) c *= q;
  return *this;
}

int Coeff::lead_sign() const {
  if (t_.empty()) return 0;
  return sgn(t_.front().second);
}

Rational Coeff::eval(const std::map<int, Rational>& at) const {
  Rational s = 0;
  for (auto& [m, q] : t_) {
    Rational term = q;
    for (auto& [v, e] : m) {
      auto it = at.find(v);
      if (it == at.end()) throw std::runtime_error("no value for parameter " + param_name(v));
      for (int k = 0; k < e; ++k) term *= it->second;
    }
    s += term;
  }
  return s;
}

Coeff Coeff::subst(const std::map<int, Rational>& at) const {
  Coeff r;
  for (auto& [m, q] : t_) {
    Rational term = q;
    Mono rest;
    for (auto& [v, e] : m) {
      auto it = at.find(v);
      if (it == at.end()) {
        rest.emplace_back(v, e);
        continue;
      }
      for (int k = 0; k < e; ++k) term *= it->second;
    }
    r.add_term(rest, term);
  }
  return r;
}

Coeff Coeff::monic() const {
  if (t_.empty()) return *this;
  Coeff r = *this;
  Rational inv = 1 / t_.front().second;
  r *= inv;
  return r;
}

std::string Coeff::str() const {
  if (t_.empty()) return "0";
  std::string out;
  bool first = true;
  for (auto& [m, q] : t_) {
    Rational a = abs(q);
    bool neg = q < 0;
    if (first) {
      if (neg) out += "-";
    } else {
      out += neg ? " - " : " + ";
    }
    first = false;
    std::string mono;
    for (auto& [v, e] : m) {
      if (!mono.empty()) mono += "*";
      mono += param_name(v);
      if (e > 1) mono += "^" + std::to_string(e);
    }
    if (mono.empty())
      out += rat_str(a);
    else if (a == 1)
      out += mono;
    else
      out += rat_str(a) + "*" + mono;
  }
  return out;
}

}  // namespace ncham
