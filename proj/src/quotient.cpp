#include "ncham/quotient.hpp"

#include <algorithm>
#include <cstdlib>
#include <functional>
#include <set>
#include <sstream>
#include <stdexcept>

namespace ncham {

namespace {

bool inverse_pair(const Letter& a, const Letter& b) {
  if (a.comp != b.comp || a.shift != b.shift) return false;
  return (a.kind == Kind::GEN && b.kind == Kind::GEN_INV) ||
         (a.kind == Kind::GEN_INV && b.kind == Kind::GEN);
}

// x ... x^-1  ~  ...   (rotation by an even letter)
Word cyclic_reduce(Word w) {
  size_t b = 0, e = w.size();
  while (e - b >= 2 && inverse_pair(w[e - 1], w[b])) {
    ++b;
    --e;
  }
  if (b == 0) return w;
  return Word(w.begin() + static_cast<long>(b), w.begin() + static_cast<long>(e));
}

// least graded rotation; false if the orbit contains -w
bool rotate_min(const Word& w, Word& out, int& sign) {
  const size_t L = w.size();
  out = w;
  sign = 1;
  if (L <= 1) return true;
  std::vector<int> pre(L + 1, 0);
  for (size_t i = 0; i < L; ++i) pre[i + 1] = pre[i] + w[i].deg;
  const int total = pre[L];
  bool seen_plus = false, seen_minus = false;
  Word cand(L);
  for (size_t r = 0; r < L; ++r) {
    for (size_t i = 0; i < L; ++i) cand[i] = w[(r + i) % L];
    int dp = pre[r], ds = total - dp;
    int s = ((dp * ds) & 1) ? -1 : 1;
    if (r == 0 || cand < out) {
      out = cand;
      sign = s;
      seen_plus = s > 0;
      seen_minus = s < 0;
    } else if (cand == out) {
      if (s > 0)
        seen_plus = true;
      else
        seen_minus = true;
    }
  }
  return !(seen_plus && seen_minus);
}

Word shift_locals(const Word& w, int k) {
  Word r = w;
  for (auto& l : r)
    if (l.kind != Kind::NONLOCAL) l.shift += k;
  return r;
}

// record  c*W ~ c*S^k W  as (S-1)-relations
void record_shift(Certificate* cert, const Coeff& c, const Word& w, int k) {
  if (!cert || k == 0) return;
  Element W = Element::word(w);
  if (k > 0) {
    for (int j = 0; j < k; ++j)
      for (const auto tmp_ = shift(W, j); auto& [m, cm] : tmp_.terms()) cert->relations.emplace_back(-(c * cm), m);
  } else {
    for (int j = k; j < 0; ++j)
      for (const auto tmp_ = shift(W, j); auto& [m, cm] : tmp_.terms()) cert->relations.emplace_back(c * cm, m);
  }
}

int level_of(const Word& w) {
  int s = 0;
  for (auto& l : w)
    if (l.kind == Kind::NONLOCAL) s += nl_info(l.comp).weight;
  return s;
}

}  // namespace

int nonlocal_level(const Word& w) { return level_of(w); }

bool canonical_word(const Word& w0, Word& out, int& sign) {
  Word w = cyclic_reduce(w0);
  int lo = 0, hi = 0;
  if (word_shift_range(w, lo, hi) && lo != 0) w = shift_locals(w, -lo);
  return rotate_min(w, out, sign);
}

PolyVector canonicalize(const Element& a) {
  if (a.has_nonlocal()) throw std::invalid_argument("canonicalize: nonlocal letters present");
  PolyVector pv;
  pv.repr = normal_form(a);
  pv.degree = std::max(0, pv.repr.max_degree());
  return pv;
}

Element cyclic_class(const Element& a) {
  Element r;
  for (auto& [w, c] : a.terms()) {
    Word out;
    int s = 1;
    if (rotate_min(cyclic_reduce(w), out, s)) r.add(out, s > 0 ? c : -c);
  }
  return r;
}

Element normal_form(const Element& a, Certificate* cert) {
  Element out;
  std::map<int, Element, std::greater<int>> work;
  for (auto& [w, c] : a.terms()) work[nonlocal_level(w)].add(w, c);
  while (!work.empty()) {
    auto it = work.begin();
    int level = it->first;
    Element E = std::move(it->second);
    work.erase(it);
    for (auto& [w0, c] : E.terms()) {
      Word w = cyclic_reduce(w0);
      int lo = 0, hi = 0;
      if (word_shift_range(w, lo, hi) && lo != 0) {
        int k = -lo;
        record_shift(cert, c, w, k);
        Word lead = shift_locals(w, k);
        if (level > 0) {
          Element rest = shift(Element::word(w), k);
          rest.add(lead, Coeff(-1));
          for (auto& [rw, rc] : rest.terms()) {
            int lv = nonlocal_level(rw);
            if (lv >= level) throw std::logic_error("normal_form: shift rewrite did not descend");
            work[lv].add(rw, c * rc);
          }
        }
        w = std::move(lead);
      }
      Word out_w;
      int s = 1;
      if (rotate_min(w, out_w, s)) out.add(out_w, s > 0 ? c : -c);
    }
  }
  return out;
}

std::string Certificate::summary() const {
  std::ostringstream os;
  os << relations.size() << " shift relations";
  if (kernel_relations) os << " (" << kernel_relations << " from pure nonlocal words)";
  os << ", excursion " << excursion << (verified ? ", re-substituted ok" : ", unverified");
  return os.str();
}

bool verify_certificate(const Element& a, const Certificate& c) {
  Element b = a;
  for (auto& [cf, m] : c.relations) {
    Element M = Element::word(m);
    b -= (shift(M, 1) - M) * cf;
  }
  return cyclic_class(b).is_zero();
}

int default_window() {
  if (const char* env = std::getenv("NCHAM_WINDOW")) {
    char* end = nullptr;
    long v = std::strtol(env, &end, 10);
    if (end && *end == '\0' && v >= 0) return static_cast<int>(v);
  }
  return kDefaultWindow;
}

namespace {

using ColKey = std::pair<int, Word>;  // (-level, word): higher levels first
using Row = std::map<ColKey, Coeff>;

ColKey key_of(const Word& w) { return {-nonlocal_level(w), w}; }

Row to_row(const Element& e) {
  Row r;
  for (auto& [w, c] : e.terms()) r.emplace(key_of(w), c);
  return r;
}

void row_axpy(Row& target, const Coeff& f, const Row& src) {
  for (auto& [k, v] : src) {
    Coeff add = f * v;
    if (add.is_zero()) continue;
    auto [it, ins] = target.try_emplace(k, add);
    if (!ins) {
      it->second += add;
      if (it->second.is_zero()) target.erase(it);
    }
  }
}

struct Pivot {
  Row row;                          // leading entry 1
  std::map<Word, Rational> comb;    // row = sum comb[m] * K(m)
};

void hull_of(const Element& a, int& lo, int& hi) {
  bool any = false;
  bool zero_in = false;
  for (auto& [w, c] : a.terms()) {
    int l = 0, h = 0;
    if (!word_local(w) || w.empty()) zero_in = true;
    if (word_shift_range(w, l, h)) {
      if (!any) {
        lo = l;
        hi = h;
        any = true;
      } else {
        lo = std::min(lo, l);
        hi = std::max(hi, h);
      }
    }
  }
  if (!any) lo = hi = 0;
  if (zero_in) {
    lo = std::min(lo, 0);
    hi = std::max(hi, 0);
  }
}

int excursion_of(const Certificate& c, int lo, int hi) {
  int e = 0;
  for (auto& [cf, m] : c.relations) {
    int l = 0, h = 0;
    if (!word_shift_range(m, l, h)) continue;
    e = std::max({e, lo - l, h - hi});
  }
  return e;
}

}  // namespace

Membership membership_reduce(const Element& a, int window) {
  if (window < -1) throw std::invalid_argument("membership window must be >= 0");
  if (window < 0) window = default_window();
  Membership res;
  Certificate cert;
  Element n = normal_form(a, &cert);

  Row target = to_row(n);
  std::map<Word, Coeff> lambda;                    // multipliers of K(m)

  if (!target.empty() && n.has_nonlocal()) {
    // symbols of positive degree reachable from n (through seeds too)
    std::set<int> atoms;
    std::set<int> degrees;
    std::vector<int> todo;
    for (auto& [w, c] : n.terms()) {
      degrees.insert(word_degree(w));
      for (auto& l : w)
        if (l.kind == Kind::NONLOCAL) todo.push_back(l.comp);
    }
    while (!todo.empty()) {
      int id = todo.back();
      todo.pop_back();
      if (!atoms.insert(id).second) continue;
      for (auto& [sw, sc] : nl_info(id).seed.terms())
        for (auto& l : sw)
          if (l.kind == Kind::NONLOCAL) todo.push_back(l.comp);
    }
    std::vector<Letter> A;
    for (int id : atoms) {
      Letter l = Letter::nonlocal(id);
      if (l.deg > 0) A.push_back(l);
    }
    std::vector<Pivot> pivots_list;
    std::map<ColKey, size_t> pivot_at;
    std::map<Word, Certificate> subcerts;
    std::set<Word> seen;
    size_t budget = 20000;

    auto add_relation = [&](const Word& m) {
      Word cm;
      int s = 1;
      if (!rotate_min(m, cm, s) || !seen.insert(cm).second) return;
      Certificate sub;
      Element M = Element::word(cm);
      Element K = normal_form(shift(M, 1) - M, &sub);
      if (K.is_zero()) return;
      Pivot p;
      p.row = to_row(K);
      p.comb[cm] = 1;
      subcerts.emplace(cm, std::move(sub));
      while (!p.row.empty()) {
        auto lead = p.row.begin();
        auto pit = pivot_at.find(lead->first);
        if (pit == pivot_at.end()) break;
        Coeff f = -lead->second;
        if (!f.is_const()) return;
        const Pivot& q = pivots_list[pit->second];
        row_axpy(p.row, f, q.row);
        for (auto& [mm, v] : q.comb) p.comb[mm] += f.const_value() * v;
      }
      if (p.row.empty()) return;
      const Coeff& lc = p.row.begin()->second;
      if (!lc.is_const()) return;
      Rational inv = 1 / lc.const_value();
      for (auto& [k, v] : p.row) v *= inv;
      for (auto& [mm, v] : p.comb) v *= inv;
      pivot_at[p.row.begin()->first] = pivots_list.size();
      pivots_list.push_back(std::move(p));
    };
    // all words over A of total degree D
    std::function<void(Word&, int)> gen = [&](Word& m, int left) {
      if (budget == 0) return;
      if (left == 0) {
        --budget;
        add_relation(m);
        return;
      }
      for (auto& l : A) {
        if (l.deg > left) continue;
        m.push_back(l);
        gen(m, left - l.deg);
        m.pop_back();
      }
    };
    for (int D : degrees) {
      if (D < 1 || A.empty()) continue;
      Word m;
      gen(m, D);
    }
    if (budget == 0) res.note = "pure-nonlocal relation space truncated";
    // reduce the target
    for (auto it = target.begin(); it != target.end();) {
      auto pit = pivot_at.find(it->first);
      if (pit == pivot_at.end()) {
        ++it;
        continue;
      }
      ColKey key = it->first;
      Coeff f = it->second;
      const Pivot& q = pivots_list[pit->second];
      row_axpy(target, -f, q.row);
      for (auto& [mm, v] : q.comb) lambda[mm] += f * Coeff(v);
      it = target.upper_bound(key);
    }
    for (auto& [mm, v] : lambda) {
      if (v.is_zero()) continue;
      cert.relations.emplace_back(v, mm);
      for (auto& [cf, w] : subcerts[mm].relations) cert.relations.emplace_back(-(cf * v), w);
      ++cert.kernel_relations;
    }
  }

  int lo = 0, hi = 0;
  hull_of(a, lo, hi);
  cert.excursion = excursion_of(cert, lo, hi);

  if (!target.empty()) {
    res.status = Membership::Residual;
    for (auto& [k, v] : target) res.residual.add(k.second, v);
    res.window = window;
    return res;
  }
  int w = window;
  for (int attempt = 0; attempt <= kWindowRetries; ++attempt) {
    if (cert.excursion <= w) {
      cert.verified = verify_certificate(a, cert);
      if (!cert.verified) throw std::logic_error("membership certificate failed re-substitution");
      res.status = Membership::Zero;
      res.cert = std::move(cert);
      res.window = w;
      return res;
    }
    w = std::max(1, w * 2);
  }
  res.status = Membership::Undecided;
  res.window = w;
  res.note = "window budget exhausted (needed shift excursion " + std::to_string(cert.excursion) + ")";
  return res;
}

Element variational_derivative(const Element& a, int comp, Flavor f) {
  if (a.has_nonlocal()) throw std::invalid_argument("variational derivative of nonlocal expression");
  Element r;
  Kind want = f == Flavor::U ? Kind::GEN : Kind::THETA;
  for (auto& z : variables_of(a)) {
    if (z.kind != want || z.comp != comp) continue;
    Tensor2 d = double_partial(a, z);
    r += shift(t_mult(t_sigma(d)), -z.shift);
  }
  return r;
}

}  // namespace ncham
