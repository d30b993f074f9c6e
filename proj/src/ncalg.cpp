#include "ncham/ncalg.hpp"

#include <algorithm>
#include <deque>
#include <mutex>
#include <shared_mutex>
#include <stdexcept>

namespace ncham {

// ---- words -------------------------------------------------------------------

static bool inverse_pair(const Letter& a, const Letter& b) {
  if (a.comp != b.comp || a.shift != b.shift) return false;
  return (a.kind == Kind::GEN && b.kind == Kind::GEN_INV) ||
         (a.kind == Kind::GEN_INV && b.kind == Kind::GEN);
}

int word_degree(const Word& w) {
  int d = 0;
  for (auto& l : w) d += l.deg;
  return d;
}

void word_append(Word& a, const Letter& l) {
  if (!a.empty() && inverse_pair(a.back(), l))
    a.pop_back();
  else
    a.push_back(l);
}

Word word_concat(const Word& a, const Word& b) {
  Word r;
  r.reserve(a.size() + b.size());
  r = a;
  size_t j = 0;
  while (j < b.size() && !r.empty() && inverse_pair(r.back(), b[j])) {
    r.pop_back();
    ++j;
  }
  r.insert(r.end(), b.begin() + static_cast<long>(j), b.end());
  return r;
}

bool word_local(const Word& w) {
  for (auto& l : w)
    if (l.kind == Kind::NONLOCAL) return false;
  return true;
}

bool word_shift_range(const Word& w, int& lo, int& hi) {
  bool any = false;
  for (auto& l : w) {
    if (l.kind == Kind::NONLOCAL) continue;
    if (!any) {
      lo = hi = l.shift;
      any = true;
    } else {
      lo = std::min(lo, l.shift);
      hi = std::max(hi, l.shift);
    }
  }
  return any;
}

std::string Names::var(int i) const {
  if (i >= 0 && static_cast<size_t>(i) < vars.size()) return vars[static_cast<size_t>(i)];
  return "x" + std::to_string(i);
}

std::string letter_str(const Letter& l, const Names& nm) {
  auto sh = [&](int n) { return n == 0 ? std::string() : "[" + std::to_string(n) + "]"; };
  switch (l.kind) {
    case Kind::GEN:
      return nm.var(l.comp) + sh(l.shift);
    case Kind::GEN_INV:
      return nm.var(l.comp) + sh(l.shift) + "^-1";
    case Kind::THETA:
      return "th_" + nm.var(l.comp) + sh(l.shift);
    case Kind::NONLOCAL:
      return "rho" + std::to_string(l.comp);
  }
  return "?";
}

std::string word_str(const Word& w, const Names& nm) {
  if (w.empty()) return "1";
  std::string s;
  for (size_t i = 0; i < w.size(); ++i) {
    if (i) s += "*";
    s += letter_str(w[i], nm);
  }
  return s;
}

// ---- elements ----------------------------------------------------------------

Element::Element(const Coeff& c) {
  if (!c.is_zero()) t_.emplace(Word{}, c);
}

Element Element::word(const Word& w, const Coeff& c) {
  Element e;
  e.add(w, c);
  return e;
}

void Element::add(const Word& w, const Coeff& c) {
  if (c.is_zero()) return;
  auto [it, ins] = t_.try_emplace(w, c);
  if (!ins) {
    it->second += c;
    if (it->second.is_zero()) t_.erase(it);
  }
}

int Element::max_degree() const {
  int d = -1;
  for (auto& [w, c] : t_) d = std::max(d, word_degree(w));
  return d;
}

bool Element::homogeneous() const {
  int d = -1;
  for (auto& [w, c] : t_) {
    int dw = word_degree(w);
    if (d >= 0 && dw != d) return false;
    d = dw;
  }
  return true;
}

Element Element::part_of_degree(int d) const {
  Element r;
  for (auto& [w, c] : t_)
    if (word_degree(w) == d) r.t_.emplace(w, c);
  return r;
}

bool Element::has_nonlocal() const {
  for (auto& [w, c] : t_)
    if (!word_local(w)) return true;
  return false;
}

bool Element::has_theta() const {
  for (auto& [w, c] : t_)
    for (auto& l : w)
      if (l.kind == Kind::THETA) return true;
  return false;
}

bool Element::has_params() const {
  for (auto& [w, c] : t_)
    if (c.has_params()) return true;
  return false;
}

Coeff Element::coeff(const Word& w) const {
  auto it = t_.find(w);
  return it == t_.end() ? Coeff() : it->second;
}

Element Element::operator-() const {
  Element r = *this;
  for (auto& [w, c] : r.t_) c = -c;
  return r;
}

Element& Element::operator+=(const Element& o) {
  for (auto& [w, c] : o.t_) add(w, c);
  return *this;
}

Element& Element::operator-=(const Element& o) {
  for (auto& [w, c] : o.t_) add(w, -c);
  return *this;
}

Element& Element::operator*=(const Coeff& c) {
  if (c.is_zero()) {
    t_.clear();
    return *this;
  }
  if (c.is_one()) return *this;
  for (auto it = t_.begin(); it != t_.end();) {
    it->second *= c;
    if (it->second.is_zero())
      it = t_.erase(it);
    else
      ++it;
  }
  return *this;
}

Element operator*(const Element& a, const Element& b) {
  Element r;
  for (auto& [wa, ca] : a.t_)
    for (auto& [wb, cb] : b.t_) r.add(word_concat(wa, wb), ca * cb);
  return r;
}

Element mul(const Element& a, const Element& b) { return a * b; }

Element Element::subst_params(const std::map<int, Rational>& at) const {
  Element r;
  for (auto& [w, c] : t_) r.add(w, c.subst(at));
  return r;
}

std::string Element::str(const Names& nm) const {
  if (t_.empty()) return "0";
  std::vector<std::pair<const Word*, const Coeff*>> items;
  for (auto& [w, c] : t_) items.emplace_back(&w, &c);
  std::stable_sort(items.begin(), items.end(), [](auto& x, auto& y) {
    bool px = x.second->lead_sign() > 0, py = y.second->lead_sign() > 0;
    if (px != py) return px;
    if (x.first->size() != y.first->size()) return x.first->size() < y.first->size();
    return *x.first < *y.first;
  });
  std::string s;
  bool first = true;
  for (auto& [w, c] : items) {
    bool neg = c->lead_sign() < 0;
    if (neg)
      s += "-";
    else if (!first)
      s += "+";
    first = false;
    Coeff a = neg ? -*c : *c;
    std::string cs;
    if (a.terms().size() > 1)
      cs = "(" + a.str() + ")";
    else
      cs = a.str();
    if (w->empty()) {
      s += cs;
    } else {
      if (!a.is_one()) s += cs + "*";
      s += word_str(*w, nm);
    }
  }
  return s;
}

// ---- nonlocal registry -------------------------------------------------------

namespace {
struct Registry {
  std::shared_mutex mu;
  std::deque<NonlocalInfo> infos;
  std::map<std::string, int> ids;
};
Registry& registry() {
  static Registry r;
  return r;
}
std::string seed_key(const Element& e) {
  std::string k;
  for (auto& [w, c] : e.terms()) {
    for (auto& l : w)
      k += std::to_string(static_cast<int>(l.kind)) + ":" + std::to_string(l.comp) + ":" +
           std::to_string(l.shift) + ",";
    k += "=" + c.str() + ";";
  }
  return k;
}
}  // namespace

int nl_register(const Element& seed) {
  if (seed.is_zero()) throw std::invalid_argument("nonlocal symbol with zero seed");
  auto& r = registry();
  const std::string key = seed_key(seed);
  {
    std::shared_lock lk(r.mu);
    auto it = r.ids.find(key);
    if (it != r.ids.end()) return it->second;
  }
  int gen = 1, weight = 1;
  for (auto& [w, c] : seed.terms()) {
    int lw = 0;
    for (auto& l : w)
      if (l.kind == Kind::NONLOCAL) {
        gen = std::max(gen, nl_info(l.comp).generation + 1);
        lw += nl_info(l.comp).weight;
      }
    weight = std::max(weight, 1 + lw);
  }
  if (gen > kMaxGeneration)
    throw std::runtime_error("nonlocal generation cap exceeded (" + std::to_string(gen) + ")");
  if (!seed.homogeneous()) throw std::invalid_argument("nonlocal seed must be theta-homogeneous");
  std::unique_lock lk(r.mu);
  auto it = r.ids.find(key);
  if (it != r.ids.end()) return it->second;
  int id = static_cast<int>(r.infos.size());
  r.infos.push_back(NonlocalInfo{seed, gen, seed.max_degree(), weight});
  r.ids[key] = id;
  return id;
}

const NonlocalInfo& nl_info(int id) {
  auto& r = registry();
  std::shared_lock lk(r.mu);
  if (id < 0 || static_cast<size_t>(id) >= r.infos.size())
    throw std::out_of_range("unknown nonlocal symbol " + std::to_string(id));
  return r.infos[static_cast<size_t>(id)];
}

int nl_count() {
  auto& r = registry();
  std::shared_lock lk(r.mu);
  return static_cast<int>(r.infos.size());
}

Letter Letter::nonlocal(int id) {
  const auto& info = nl_info(id);
  return {Kind::NONLOCAL, id, 0, static_cast<std::uint8_t>(info.degree)};
}

// ---- shift -------------------------------------------------------------------

Word shift_local_word(const Word& w, int k) {
  Word r = w;
  for (auto& l : r) {
    if (l.kind == Kind::NONLOCAL) throw std::logic_error("shift_local_word on nonlocal word");
    l.shift += k;
  }
  return r;
}

// S^k rho
static Element shift_symbol(int id, int k) {
  Element r = Element::letter(Letter::nonlocal(id));
  if (k == 0) return r;
  const Element seed = nl_info(id).seed;
  if (k > 0) {
    for (int j = 0; j < k; ++j) r += shift(seed, j);
  } else {
    for (int j = k; j < 0; ++j) r -= shift(seed, j);
  }
  return r;
}

Element shift(const Element& a, int k) {
  if (k == 0) return a;
  Element r;
  for (auto& [w, c] : a.terms()) {
    if (word_local(w)) {
      r.add(shift_local_word(w, k), c);
      continue;
    }
    Element acc(c);
    Word run;
    for (auto& l : w) {
      if (l.kind == Kind::NONLOCAL) {
        if (!run.empty()) {
          acc = acc * Element::word(run);
          run.clear();
        }
        acc = acc * shift_symbol(l.comp, k);
      } else {
        Letter s = l;
        s.shift += k;
        run.push_back(s);
      }
    }
    if (!run.empty()) acc = acc * Element::word(run);
    r += acc;
  }
  return r;
}

bool local_antiderivative(const Element& a, Element& g) {
  g = Element();
  if (a.has_nonlocal()) return false;
  // group words into shift orbits: key = word moved to min shift 0
  std::map<Word, std::map<int, Coeff>> orbits;
  for (auto& [w, c] : a.terms()) {
    int lo = 0, hi = 0;
    if (!word_shift_range(w, lo, hi)) return false;  // constants are never exact
    orbits[shift_local_word(w, -lo)][lo] += c;
  }
  // (S-1) sum d_k w_k  has coefficient d_{k-1} - d_k at shift k
  for (auto& [w, cs] : orbits) {
    Coeff d;
    int k = cs.begin()->first;
    const int last = cs.rbegin()->first;
    for (; k <= last; ++k) {
      auto it = cs.find(k);
      if (it != cs.end()) d -= it->second;
      if (k < last) g.add(shift_local_word(w, k), d);
    }
    if (!d.is_zero()) return false;
  }
  return true;
}

namespace {
Element inv_s_minus_1_rational(const Element& a) {
  Element g;
  if (local_antiderivative(a, g)) return g;
  Element seed = a;
  int lo = 0;
  if (!a.has_nonlocal()) {
    bool first = true;
    for (auto& [w, c] : a.terms()) {
      int l = 0, h = 0;
      if (word_shift_range(w, l, h)) {
        lo = first ? l : std::min(lo, l);
        first = false;
      }
    }
    seed = shift(a, -lo);
  }
  Coeff lead = seed.terms().begin()->second;
  Coeff scale(1);
  if (lead.is_const() && !lead.is_one()) {
    scale = lead;
    seed *= Coeff(Rational(1) / lead.const_value());
  }
  int id = nl_register(seed);
  return shift(Element::letter(Letter::nonlocal(id)), lo) * scale;
}
}  // namespace

// Parametric input is split by parameter monomial first; (S-1)^{-1} is
// linear over Q[params], so every seed stays rational.
Element inv_s_minus_1(const Element& a) {
  if (a.is_zero()) return a;
  std::map<Mono, Element> parts;
  for (auto& [w, c] : a.terms())
    for (auto& [m, q] : c.terms()) parts[m].add(w, Coeff(q));
  Element out;
  for (auto& [m, part] : parts) {
    if (part.is_zero()) continue;
    Coeff mc(1);
    for (auto& [id, e] : m) mc *= Coeff::param(id, e);
    out += inv_s_minus_1_rational(part) * mc;
  }
  return out;
}

// ---- tensors -----------------------------------------------------------------

int tensor_slot_degree(const Word& w) { return word_degree(w); }

Tensor2 tensor(const Element& a, const Element& b) {
  Tensor2 t;
  for (auto& [wa, ca] : a.terms())
    for (auto& [wb, cb] : b.terms()) t.add({wa, wb}, ca * cb);
  return t;
}

Tensor3 tensor(const Element& a, const Element& b, const Element& c) {
  Tensor3 t;
  for (auto& [wa, ca] : a.terms())
    for (auto& [wb, cb] : b.terms())
      for (auto& [wc, cc] : c.terms()) t.add({wa, wb, wc}, ca * cb * cc);
  return t;
}

static bool odd(int x) { return (x & 1) != 0; }

Element t_mult(const Tensor2& t) {
  Element r;
  for (auto& [k, c] : t.terms()) r.add(word_concat(k[0], k[1]), c);
  return r;
}

Tensor2 t_sigma(const Tensor2& t) {
  Tensor2 r;
  for (auto& [k, c] : t.terms()) {
    bool neg = odd(word_degree(k[0]) * word_degree(k[1]));
    r.add({k[1], k[0]}, neg ? -c : c);
  }
  return r;
}

Tensor3 t_tau(const Tensor3& t) {
  Tensor3 r;
  for (auto& [k, c] : t.terms()) {
    bool neg = odd(word_degree(k[2]) * (word_degree(k[0]) + word_degree(k[1])));
    r.add({k[2], k[0], k[1]}, neg ? -c : c);
  }
  return r;
}

Tensor2 t_bullet(const Tensor2& x, const Tensor2& y) {
  Tensor2 r;
  for (auto& [a, ca] : x.terms())
    for (auto& [b, cb] : y.terms()) {
      bool neg = odd(word_degree(a[1]) * (word_degree(b[0]) + word_degree(b[1])));
      Coeff c = ca * cb;
      r.add({word_concat(a[0], b[0]), word_concat(b[1], a[1])}, neg ? -c : c);
    }
  return r;
}

Tensor2 t_star_right(const Tensor2& x, const Element& e) {
  Tensor2 r;
  for (auto& [a, ca] : x.terms())
    for (auto& [w, cw] : e.terms()) {
      bool neg = odd(word_degree(a[1]) * word_degree(w));
      Coeff c = ca * cw;
      r.add({word_concat(a[0], w), a[1]}, neg ? -c : c);
    }
  return r;
}

Tensor2 t_star_left(const Element& e, const Tensor2& x) {
  Tensor2 r;
  for (auto& [w, cw] : e.terms())
    for (auto& [a, ca] : x.terms()) {
      bool neg = odd(word_degree(w) * word_degree(a[0]));
      Coeff c = ca * cw;
      r.add({a[0], word_concat(w, a[1])}, neg ? -c : c);
    }
  return r;
}

Tensor3 t_otimes1(const Tensor2& x, const Element& e) {
  Tensor3 r;
  for (auto& [a, ca] : x.terms())
    for (auto& [w, cw] : e.terms()) {
      bool neg = odd(word_degree(a[1]) * word_degree(w));
      Coeff c = ca * cw;
      r.add({a[0], w, a[1]}, neg ? -c : c);
    }
  return r;
}

Tensor2 t_lmul(const Element& e, const Tensor2& x) {
  Tensor2 r;
  for (auto& [w, cw] : e.terms())
    for (auto& [a, ca] : x.terms()) r.add({word_concat(w, a[0]), a[1]}, cw * ca);
  return r;
}

Tensor2 t_rmul(const Tensor2& x, const Element& e) {
  Tensor2 r;
  for (auto& [a, ca] : x.terms())
    for (auto& [w, cw] : e.terms()) r.add({a[0], word_concat(a[1], w)}, ca * cw);
  return r;
}

Tensor3 t_otimes_right(const Tensor2& x, const Element& e) {
  Tensor3 r;
  for (auto& [a, ca] : x.terms())
    for (auto& [w, cw] : e.terms()) r.add({a[0], a[1], w}, ca * cw);
  return r;
}

Tensor3 t_otimes_left(const Element& e, const Tensor2& x) {
  Tensor3 r;
  for (auto& [w, cw] : e.terms())
    for (auto& [a, ca] : x.terms()) r.add({w, a[0], a[1]}, cw * ca);
  return r;
}

Tensor2 t_shift(const Tensor2& t, int k) {
  if (k == 0) return t;
  Tensor2 r;
  for (auto& [a, c] : t.terms()) {
    if (word_local(a[0]) && word_local(a[1])) {
      r.add({shift_local_word(a[0], k), shift_local_word(a[1], k)}, c);
    } else {
      r += tensor(shift(Element::word(a[0]), k), shift(Element::word(a[1]), k)) * c;
    }
  }
  return r;
}

Tensor3 t_shift(const Tensor3& t, int k) {
  if (k == 0) return t;
  Tensor3 r;
  for (auto& [a, c] : t.terms())
    r += tensor(shift(Element::word(a[0]), k), shift(Element::word(a[1]), k),
                shift(Element::word(a[2]), k)) *
         c;
  return r;
}

// ---- derivatives -------------------------------------------------------------

Tensor2 double_partial(const Element& a, const Letter& z) {
  if (z.kind != Kind::GEN && z.kind != Kind::THETA)
    throw std::invalid_argument("double_partial: variable must be a generator or theta");
  Tensor2 r;
  for (auto& [w, c] : a.terms()) {
    int pre = 0;
    for (size_t k = 0; k < w.size(); ++k) {
      const Letter& l = w[k];
      if (l.kind == Kind::NONLOCAL)
        throw std::logic_error("double_partial of an expression with nonlocal letters");
      if (l == z) {
        Word p(w.begin(), w.begin() + static_cast<long>(k));
        Word s(w.begin() + static_cast<long>(k) + 1, w.end());
        bool neg = z.deg && odd(pre);
        r.add({std::move(p), std::move(s)}, neg ? -c : c);
      } else if (z.kind == Kind::GEN && l.kind == Kind::GEN_INV && l.comp == z.comp &&
                 l.shift == z.shift) {
        Word p(w.begin(), w.begin() + static_cast<long>(k) + 1);
        Word s(w.begin() + static_cast<long>(k), w.end());
        r.add({std::move(p), std::move(s)}, -c);
      }
      pre += l.deg;
    }
  }
  return r;
}

std::vector<Letter> variables_of(const Element& a) {
  std::vector<Letter> v;
  for (auto& [w, c] : a.terms())
    for (auto& l : w) {
      if (l.kind == Kind::GEN || l.kind == Kind::GEN_INV)
        v.push_back(Letter::gen(l.comp, l.shift));
      else if (l.kind == Kind::THETA)
        v.push_back(l);
    }
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

Element derive(const Element& a, int parity, const LetterRule& on_gen, const LetterRule& on_theta,
               const LetterRule& on_nonlocal) {
  Element r;
  std::map<Letter, Element> memo;
  auto image = [&](const Letter& l) -> const Element& {
    auto it = memo.find(l);
    if (it != memo.end()) return it->second;
    Element d;
    switch (l.kind) {
      case Kind::GEN:
        d = on_gen(l);
        break;
      case Kind::GEN_INV: {
        Element x = on_gen(Letter::gen(l.comp, l.shift));
        Element li = Element::letter(l);
        d = -(li * x * li);
        break;
      }
      case Kind::THETA:
        d = on_theta ? on_theta(l) : Element();
        break;
      case Kind::NONLOCAL:
        if (!on_nonlocal) throw std::logic_error("derivation not defined on nonlocal letters");
        d = on_nonlocal(l);
        break;
    }
    return memo.emplace(l, std::move(d)).first->second;
  };
  for (auto& [w, c] : a.terms()) {
    int pre = 0;
    for (size_t k = 0; k < w.size(); ++k) {
      const Element& d = image(w[k]);
      if (!d.is_zero()) {
        Word p(w.begin(), w.begin() + static_cast<long>(k));
        Word s(w.begin() + static_cast<long>(k) + 1, w.end());
        bool neg = parity && odd(pre);
        Coeff cc = neg ? -c : c;
        for (auto& [dw, dc] : d.terms()) r.add(word_concat(word_concat(p, dw), s), cc * dc);
      }
      pre += w[k].deg;
    }
  }
  return r;
}

Element apply_evolutionary(const std::vector<Element>& X, const Element& a,
                           const LetterRule& on_nonlocal) {
  int parity = 0;
  for (auto& x : X)
    if (!x.is_zero()) {
      if (!x.homogeneous()) throw std::invalid_argument("characteristics must be homogeneous");
      parity = x.max_degree() & 1;
      break;
    }
  auto on_gen = [&](const Letter& l) -> Element {
    if (static_cast<size_t>(l.comp) >= X.size()) return Element();
    return shift(X[static_cast<size_t>(l.comp)], l.shift);
  };
  return derive(a, parity, on_gen, nullptr, on_nonlocal);
}

std::vector<Element> commutator_vf(const std::vector<Element>& X, const std::vector<Element>& Y) {
  std::vector<Element> r(std::max(X.size(), Y.size()));
  for (size_t i = 0; i < r.size(); ++i) {
    Element yi = i < Y.size() ? Y[i] : Element();
    Element xi = i < X.size() ? X[i] : Element();
    r[i] = apply_evolutionary(X, yi) - apply_evolutionary(Y, xi);
  }
  return r;
}

}  // namespace ncham
