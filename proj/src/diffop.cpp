#include "ncham/diffop.hpp"

#include <algorithm>
#include <stdexcept>

namespace ncham {

// ---- OpEntry -------------------------------------------------------------

OpEntry OpEntry::shift_op(int p) { return term(Element(1), Element(1), p); }
OpEntry OpEntry::scalar(const Coeff& c) { return term(Element(c), Element(1), 0); }
OpEntry OpEntry::left(const Element& f) { return term(f, Element(1), 0); }
OpEntry OpEntry::right(const Element& f) { return term(Element(1), f, 0); }

OpEntry OpEntry::term(const Element& L, const Element& R, int p) {
  OpEntry e;
  e.s_.add(p, tensor(L, R));
  return e;
}

OpEntry OpEntry::operator-() const {
  OpEntry r;
  for (auto& [p, t] : s_.terms()) r.s_.add(p, -t);
  return r;
}
OpEntry& OpEntry::operator+=(const OpEntry& o) {
  s_ += o.s_;
  return *this;
}
OpEntry& OpEntry::operator-=(const OpEntry& o) {
  s_ -= o.s_;
  return *this;
}
OpEntry& OpEntry::operator*=(const Coeff& c) {
  Series<Tensor2> r;
  for (auto& [p, t] : s_.terms()) r.add(p, t * c);
  s_ = r;
  return *this;
}

OpEntry OpEntry::compose(const OpEntry& o) const {
  OpEntry r;
  for (auto& [p, t1] : s_.terms())
    for (auto& [q, t2] : o.s_.terms()) {
      Tensor2 acc;
      Tensor2 t2s = t_shift(t2, p);
      for (auto& [ab, c1] : t1.terms())
        for (auto& [cd, c2] : t2s.terms())
          acc.add({word_concat(ab[0], cd[0]), word_concat(cd[1], ab[1])}, c1 * c2);
      r.s_.add(p + q, acc);
    }
  return r;
}

OpEntry OpEntry::adjoint() const {
  OpEntry r;
  for (auto& [p, t] : s_.terms()) {
    Tensor2 sw;
    for (auto& [k, c] : t.terms()) sw.add({k[1], k[0]}, c);
    r.s_.add(-p, t_shift(sw, -p));
  }
  return r;
}

Element OpEntry::apply(const Element& h) const {
  Element r;
  for (auto& [p, t] : s_.terms()) {
    Element sh = shift(h, p);
    for (auto& [k, c] : t.terms()) r += Element::word(k[0], c) * sh * Element::word(k[1]);
  }
  return r;
}

OpEntry OpEntry::subst_params(const std::map<int, Rational>& at) const {
  OpEntry r;
  for (auto& [p, t] : s_.terms()) {
    Tensor2 u;
    for (auto& [k, c] : t.terms()) u.add(k, c.subst(at));
    r.s_.add(p, u);
  }
  return r;
}

bool OpEntry::has_params() const {
  for (auto& [p, t] : s_.terms())
    for (auto& [k, c] : t.terms())
      if (c.has_params()) return true;
  return false;
}

int OpEntry::min_power() const { return s_.is_zero() ? 0 : s_.terms().begin()->first; }
int OpEntry::max_power() const { return s_.is_zero() ? 0 : s_.terms().rbegin()->first; }

bool OpEntry::ultralocal() const {
  for (auto& [p, t] : s_.terms()) {
    if (p != 0) return false;
    for (auto& [k, c] : t.terms())
      for (auto& w : k)
        for (auto& l : w)
          if (l.shift != 0 || l.kind == Kind::NONLOCAL) return false;
  }
  return true;
}

static std::string coeff_factor(const Coeff& a) {
  if (a.terms().size() > 1) return "(" + a.str() + ")";
  return a.str();
}

std::string OpEntry::str(const Names& nm) const {
  if (s_.is_zero()) return "0";
  std::string s;
  bool first = true;
  for (auto& [p, t] : s_.terms())
    for (auto& [k, c] : t.terms()) {
      bool neg = c.lead_sign() < 0;
      if (first)
        s += neg ? "-" : "";
      else
        s += neg ? " - " : " + ";
      first = false;
      Coeff a = neg ? -c : c;
      std::vector<std::string> f;
      if (!a.is_one()) f.push_back(coeff_factor(a));
      if (!k[0].empty()) f.push_back("l(" + word_str(k[0], nm) + ")");
      if (!k[1].empty()) f.push_back("r(" + word_str(k[1], nm) + ")");
      if (p != 0) f.push_back("S^" + std::to_string(p));
      if (f.empty()) f.push_back("1");
      for (size_t i = 0; i < f.size(); ++i) s += (i ? "*" : "") + f[i];
    }
  return s;
}

// ---- DiffOp -------------------------------------------------------------

DiffOp::DiffOp(int n) : n_(n), local_(static_cast<size_t>(n * n)) {}

DiffOp DiffOp::scalar(const OpEntry& e) {
  DiffOp d(1);
  d.at(0, 0) = e;
  return d;
}

void DiffOp::add_nonlocal(NonlocalTerm t) {
  if (static_cast<int>(t.col.size()) != n_ || static_cast<int>(t.row.size()) != n_)
    throw std::invalid_argument("nonlocal tail has wrong length");
  nl_.push_back(std::move(t));
}

bool DiffOp::is_ultralocal() const {
  if (!nl_.empty()) return false;
  for (auto& e : local_)
    if (!e.ultralocal()) return false;
  return true;
}

bool DiffOp::has_params() const {
  for (auto& e : local_)
    if (e.has_params()) return true;
  for (auto& t : nl_) {
    for (auto& e : t.col)
      if (e.has_params()) return true;
    for (auto& e : t.row)
      if (e.has_params()) return true;
  }
  return false;
}

std::pair<int, int> DiffOp::order() const {
  int lo = 0, hi = 0;
  bool any = false;
  for (auto& e : local_) {
    if (e.is_zero()) continue;
    if (!any) {
      lo = e.min_power();
      hi = e.max_power();
      any = true;
    } else {
      lo = std::min(lo, e.min_power());
      hi = std::max(hi, e.max_power());
    }
  }
  return {lo, hi};
}

DiffOp DiffOp::operator-() const {
  DiffOp r = *this;
  r *= Coeff(-1);
  return r;
}

DiffOp& DiffOp::operator+=(const DiffOp& o) {
  if (n_ == 0) {
    *this = o;
    return *this;
  }
  if (o.n_ == 0) return *this;
  if (o.n_ != n_) throw std::invalid_argument("operator sizes differ");
  for (size_t i = 0; i < local_.size(); ++i) local_[i] += o.local_[i];
  for (auto& t : o.nl_) nl_.push_back(t);
  return *this;
}

DiffOp& DiffOp::operator-=(const DiffOp& o) { return *this += -o; }

DiffOp& DiffOp::operator*=(const Coeff& c) {
  for (auto& e : local_) e *= c;
  for (auto& t : nl_)
    for (auto& e : t.col) e *= c;
  return *this;
}

DiffOp DiffOp::subst_params(const std::map<int, Rational>& at) const {
  DiffOp r = *this;
  for (auto& e : r.local_) e = e.subst_params(at);
  for (auto& t : r.nl_) {
    for (auto& e : t.col) e = e.subst_params(at);
    for (auto& e : t.row) e = e.subst_params(at);
  }
  return r;
}

DiffOp DiffOp::normalized_tails() const {
  DiffOp r(n_);
  r.local_ = local_;
  for (auto& t : nl_) {
    if (t.tail == Tail::SINV1)
      for (int i = 0; i < n_; ++i)
        for (int j = 0; j < n_; ++j)
          r.at(i, j) += t.col[static_cast<size_t>(i)].compose(t.row[static_cast<size_t>(j)]);
    // split col by powers; S^p commutes with the tail
    std::map<int, NonlocalTerm> by_p;
    for (int i = 0; i < n_; ++i)
      for (auto& [p, tens] : t.col[static_cast<size_t>(i)].terms()) {
        auto& nt = by_p[p];
        if (nt.col.empty()) {
          nt.col.assign(static_cast<size_t>(n_), OpEntry());
          nt.row.assign(static_cast<size_t>(n_), OpEntry());
          for (int j = 0; j < n_; ++j)
            nt.row[static_cast<size_t>(j)] = OpEntry::shift_op(p).compose(t.row[static_cast<size_t>(j)]);
        }
        nt.col[static_cast<size_t>(i)].add(0, tens);
      }
    for (auto& [p, nt] : by_p) r.nl_.push_back(std::move(nt));
  }
  return r;
}

std::string DiffOp::str(const Names& nm) const {
  std::string s;
  if (n_ == 1) {
    s = at(0, 0).str(nm);
  } else {
    s = "[";
    for (int i = 0; i < n_; ++i) {
      s += i ? ", [ " : "[ ";
      for (int j = 0; j < n_; ++j) s += (j ? ", " : "") + at(i, j).str(nm);
      s += " ]";
    }
    s += "]";
  }
  for (auto& t : nl_) {
    s += " + col(";
    for (int i = 0; i < n_; ++i) s += (i ? ", " : "") + t.col[static_cast<size_t>(i)].str(nm);
    s += t.tail == Tail::INV1 ? ") inv1 row(" : ") Sinv1 row(";
    for (int i = 0; i < n_; ++i) s += (i ? ", " : "") + t.row[static_cast<size_t>(i)].str(nm);
    s += ")";
  }
  return s;
}

DiffOp adjoint(const DiffOp& K) {
  int n = K.size();
  DiffOp r(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) r.at(i, j) = K.at(j, i).adjoint();
  // (A T B)^dagger = B^dagger T^dagger A^dagger, with
  // ((S-1)^{-1})^dagger = -S(S-1)^{-1} and (S(S-1)^{-1})^dagger = -(S-1)^{-1}
  for (auto& t : K.nonlocal()) {
    NonlocalTerm a;
    for (int i = 0; i < n; ++i) a.col.push_back(-t.row[static_cast<size_t>(i)].adjoint());
    for (int j = 0; j < n; ++j) a.row.push_back(t.col[static_cast<size_t>(j)].adjoint());
    a.tail = t.tail == Tail::INV1 ? Tail::SINV1 : Tail::INV1;
    r.add_nonlocal(std::move(a));
  }
  return r;
}

namespace {
// nonlocal tails as a rational tensor: (i, col word pair) (x) (j, p, row word pair)
using TailKey = std::tuple<int, Word, Word, int, int, Word, Word>;

std::map<TailKey, Coeff> tail_tensor(const DiffOp& normalized) {
  std::map<TailKey, Coeff> m;
  int n = normalized.size();
  for (auto& t : normalized.nonlocal())
    for (int i = 0; i < n; ++i)
      for (auto& [p0, ct] : t.col[static_cast<size_t>(i)].terms())
        for (auto& [ck, cc] : ct.terms())
          for (int j = 0; j < n; ++j)
            for (auto& [p, rt] : t.row[static_cast<size_t>(j)].terms())
              for (auto& [rk, rc] : rt.terms()) {
                TailKey key{i, ck[0], ck[1], j, p, rk[0], rk[1]};
                auto& slot = m[key];
                slot += cc * rc;
                if (slot.is_zero()) m.erase(key);
              }
  return m;
}
}  // namespace

DiffOp skew_defect(const DiffOp& K) { return (K + adjoint(K)).normalized_tails(); }

bool is_zero_op(const DiffOp& K) {
  DiffOp N = K.normalized_tails();
  for (int i = 0; i < N.size(); ++i)
    for (int j = 0; j < N.size(); ++j)
      if (!N.at(i, j).is_zero()) return false;
  return tail_tensor(N).empty();
}

bool is_skewsymmetric(const DiffOp& K) { return is_zero_op(K + adjoint(K)); }

std::vector<Element> apply(const DiffOp& K, const std::vector<Element>& h) {
  int n = K.size();
  if (static_cast<int>(h.size()) != n) throw std::invalid_argument("apply: vector length mismatch");
  std::vector<Element> r(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) r[static_cast<size_t>(i)] += K.at(i, j).apply(h[static_cast<size_t>(j)]);
  for (auto& t : K.nonlocal()) {
    Element s;
    for (int j = 0; j < n; ++j) s += t.row[static_cast<size_t>(j)].apply(h[static_cast<size_t>(j)]);
    if (s.is_zero()) continue;
    Element rho = inv_s_minus_1(s);
    if (t.tail == Tail::SINV1) rho += s;
    for (int i = 0; i < n; ++i) r[static_cast<size_t>(i)] += t.col[static_cast<size_t>(i)].apply(rho);
  }
  return r;
}

std::vector<Element> theta_vector(int n) {
  std::vector<Element> th;
  for (int i = 0; i < n; ++i) th.push_back(Element::theta(i));
  return th;
}

std::vector<Element> apply_theta(const DiffOp& K) { return ncham::apply(K, theta_vector(K.size())); }

Element bivector_density(const DiffOp& K) {
  auto kt = apply_theta(K);
  Element P;
  for (int i = 0; i < K.size(); ++i) P += Element::theta(i) * kt[static_cast<size_t>(i)];
  P *= Coeff(Rational(1, 2));
  return P;
}

PolyVector bivector_of(const DiffOp& K) {
  if (!is_skewsymmetric(K)) throw std::invalid_argument("bivector_of: operator is not skewsymmetric");
  PolyVector pv;
  pv.repr = normal_form(bivector_density(K));
  pv.degree = 2;
  return pv;
}

bool BracketTable::ultralocal() const {
  for (auto& s : t)
    for (auto& [p, tens] : s.terms()) {
      if (p != 0) return false;
      for (auto& [k, c] : tens.terms())
        for (auto& w : k)
          for (auto& l : w)
            if (l.shift != 0) return false;
    }
  return true;
}

BracketTable to_bracket(const DiffOp& K) {
  if (!K.is_local()) throw std::invalid_argument("to_bracket: nonlocal operator");
  BracketTable T;
  T.n = K.size();
  T.t.resize(static_cast<size_t>(T.n * T.n));
  for (int i = 0; i < T.n; ++i)
    for (int j = 0; j < T.n; ++j)
      for (auto& [p, tens] : K.at(j, i).terms()) T.at(i, j).add(p, tens);
  return T;
}

DiffOp from_bracket(const BracketTable& T) {
  DiffOp K(T.n);
  for (int i = 0; i < T.n; ++i)
    for (int j = 0; j < T.n; ++j)
      for (auto& [p, tens] : T.at(j, i).terms()) K.at(i, j).add(p, tens);
  return K;
}

}  // namespace ncham
