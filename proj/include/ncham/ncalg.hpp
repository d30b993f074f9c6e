#pragma once
// Noncommutative difference Laurent polynomials with odd theta letters and
// nonlocal letters, plus Sweedler tensors and their graded operations.

#include <array>
#include <compare>
#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "ncham/coeff.hpp"

namespace ncham {

enum class Kind : std::uint8_t { GEN = 0, GEN_INV = 1, THETA = 2, NONLOCAL = 3 };

struct Letter {
  Kind kind = Kind::GEN;
  std::int32_t comp = 0;   // component, or symbol id for NONLOCAL
  std::int32_t shift = 0;  // always 0 for NONLOCAL
  std::uint8_t deg = 0;    // theta-degree, derived from kind (or registry)

  auto operator<=>(const Letter& o) const {
    if (auto c = kind <=> o.kind; c != 0) return c;
    if (auto c = comp <=> o.comp; c != 0) return c;
    return shift <=> o.shift;
  }
  bool operator==(const Letter& o) const {
    return kind == o.kind && comp == o.comp && shift == o.shift;
  }

  static Letter gen(int i, int n = 0) { return {Kind::GEN, i, n, 0}; }
  static Letter inv(int i, int n = 0) { return {Kind::GEN_INV, i, n, 0}; }
  static Letter theta(int i, int n = 0) { return {Kind::THETA, i, n, 1}; }
  static Letter nonlocal(int id);  // degree from the registry
  bool local() const { return kind != Kind::NONLOCAL; }
};

using Word = std::vector<Letter>;

int word_degree(const Word& w);
// concatenation in the ideal quotient: x x^-1 pairs cancel at the junction
Word word_concat(const Word& a, const Word& b);
void word_append(Word& a, const Letter& l);
bool word_local(const Word& w);
// min/max shift over local letters; false if there are none
bool word_shift_range(const Word& w, int& lo, int& hi);

struct Names {
  std::vector<std::string> vars{"u", "v", "w", "x", "y", "z"};
  std::string var(int i) const;
};

std::string letter_str(const Letter& l, const Names& nm);
std::string word_str(const Word& w, const Names& nm);

class Element {
 public:
  using Map = std::map<Word, Coeff>;

  Element() = default;
  Element(const Coeff& c);  // NOLINT
  Element(long v) : Element(Coeff(v)) {}  // NOLINT
  static Element word(const Word& w, const Coeff& c = Coeff(1));
  static Element letter(const Letter& l) { return word(Word{l}); }
  static Element gen(int i, int n = 0) { return letter(Letter::gen(i, n)); }
  static Element inv(int i, int n = 0) { return letter(Letter::inv(i, n)); }
  static Element theta(int i, int n = 0) { return letter(Letter::theta(i, n)); }

  void add(const Word& w, const Coeff& c);
  const Map& terms() const { return t_; }
  bool is_zero() const { return t_.empty(); }
  size_t size() const { return t_.size(); }

  int max_degree() const;  // -1 for zero
  bool homogeneous() const;
  Element part_of_degree(int d) const;
  bool has_nonlocal() const;
  bool has_theta() const;
  bool has_params() const;
  Coeff coeff(const Word& w) const;

  Element operator-() const;
  Element& operator+=(const Element& o);
  Element& operator-=(const Element& o);
  Element& operator*=(const Coeff& c);
  friend Element operator+(Element a, const Element& b) { return a += b; }
  friend Element operator-(Element a, const Element& b) { return a -= b; }
  friend Element operator*(const Element& a, const Element& b);
  friend Element operator*(Element a, const Coeff& c) { return a *= c; }
  friend Element operator*(const Coeff& c, Element a) { return a *= c; }
  bool operator==(const Element& o) const { return t_ == o.t_; }

  Element subst_params(const std::map<int, Rational>& at) const;

  // display order: positive first, then shorter, then word order
  std::string str(const Names& nm = Names{}) const;

 private:
  Map t_;
};

Element mul(const Element& a, const Element& b);

// ---- nonlocal registry ----------------------------------------------------
// A symbol rho stands for (S-1)^{-1} seed.  One symbol per seed element, so
// only the whole seed becomes exact, never its individual words.
// The rewrite S rho = rho + seed keeps nonlocal letters at shift 0.
struct NonlocalInfo {
  Element seed;
  int generation = 1;
  int degree = 1;
  int weight = 1;  // 1 + highest nonlocal weight among the seed's words
};

int nl_register(const Element& seed);
const NonlocalInfo& nl_info(int id);  // references stay valid (append-only)
int nl_count();
constexpr int kMaxGeneration = 2;

// S^k applied to an element; nonlocal letters are rewritten.
Element shift(const Element& a, int k);
Word shift_local_word(const Word& w, int k);  // w must be local
// (S-1)^{-1} applied to an element.  Exact local input gets a local
// antiderivative; otherwise one symbol is registered for the (shift
// normalized, primitive) seed.
Element inv_s_minus_1(const Element& a);
// g with (S-1) g == a exactly, if a is local and such g exists
bool local_antiderivative(const Element& a, Element& g);

// ---- tensors ----------------------------------------------------------------
template <size_t N>
class Tensor {
 public:
  using Key = std::array<Word, N>;
  using Map = std::map<Key, Coeff>;

  void add(const Key& k, const Coeff& c) {
    if (c.is_zero()) return;
    auto [it, ins] = t_.try_emplace(k, c);
    if (!ins) {
      it->second += c;
      if (it->second.is_zero()) t_.erase(it);
    }
  }
  const Map& terms() const { return t_; }
  bool is_zero() const { return t_.empty(); }
  size_t size() const { return t_.size(); }
  Tensor& operator+=(const Tensor& o) {
    for (auto& [k, c] : o.t_) add(k, c);
    return *this;
  }
  Tensor& operator-=(const Tensor& o) {
    for (auto& [k, c] : o.t_) add(k, -c);
    return *this;
  }
  Tensor& operator*=(const Coeff& c) {
    if (c.is_zero()) {
      t_.clear();
      return *this;
    }
    for (auto& [k, v] : t_) v *= c;
    return *this;
  }
  Tensor operator-() const {
    Tensor r = *this;
    for (auto& [k, v] : r.t_) v = -v;
    return r;
  }
  friend Tensor operator+(Tensor a, const Tensor& b) { return a += b; }
  friend Tensor operator-(Tensor a, const Tensor& b) { return a -= b; }
  friend Tensor operator*(Tensor a, const Coeff& c) { return a *= c; }
  bool operator==(const Tensor& o) const { return t_ == o.t_; }

  std::string str(const Names& nm = Names{}) const {
    if (t_.empty()) return "0";
    std::string s;
    bool first = true;
    for (auto& [k, c] : t_) {
      std::string cs = c.str();
      bool neg = c.lead_sign() < 0;
      if (!first) s += neg ? " - " : " + ";
      else if (neg) s += "-";
      first = false;
      Coeff a = neg ? -c : c;
      if (!a.is_one()) s += (a.terms().size() > 1 ? "(" + a.str() + ")" : a.str()) + "*";
      for (size_t i = 0; i < N; ++i) {
        if (i) s += "(x)";
        s += word_str(k[i], nm);
      }
    }
    return s;
  }

 private:
  Map t_;
};

using Tensor2 = Tensor<2>;
using Tensor3 = Tensor<3>;

int tensor_slot_degree(const Word& w);

Tensor2 tensor(const Element& a, const Element& b);
Tensor3 tensor(const Element& a, const Element& b, const Element& c);

// graded operations
Element t_mult(const Tensor2& t);                         // m(a(x)b) = ab
Tensor2 t_sigma(const Tensor2& t);                        // (-1)^{|a||b|} b(x)a
Tensor3 t_tau(const Tensor3& t);                          // (-1)^{|c|(|a|+|b|)} c(x)a(x)b
Tensor2 t_bullet(const Tensor2& x, const Tensor2& y);     // (a(x)b).(c(x)d) = (-1)^{|b|(|c|+|d|)} ac(x)db
Tensor2 t_star_right(const Tensor2& x, const Element& c); // (a(x)b)*c = (-1)^{|b||c|} ac(x)b
Tensor2 t_star_left(const Element& a, const Tensor2& x);  // a*(b(x)c) = (-1)^{|a||b|} b(x)ac
Tensor3 t_otimes1(const Tensor2& x, const Element& c);    // (a(x)b)(x)_1 c = (-1)^{|b||c|} a(x)c(x)b
Tensor2 t_lmul(const Element& a, const Tensor2& x);       // a(b(x)c) = ab(x)c
Tensor2 t_rmul(const Tensor2& x, const Element& a);       // (b(x)c)a = b(x)ca
Tensor3 t_otimes_right(const Tensor2& x, const Element& c);  // (a(x)b)(x)c
Tensor3 t_otimes_left(const Element& a, const Tensor2& x);   // a(x)(b(x)c)
Tensor2 t_shift(const Tensor2& t, int k);
Tensor3 t_shift(const Tensor3& t, int k);

// Laurent series in lambda with tensor coefficients
template <class T>
class Series {
 public:
  void add(int p, const T& t) {
    if (t.is_zero()) return;
    auto& slot = s_[p];
    slot += t;
    if (slot.is_zero()) s_.erase(p);
  }
  const std::map<int, T>& terms() const { return s_; }
  bool is_zero() const { return s_.empty(); }
  Series& operator+=(const Series& o) {
    for (auto& [p, t] : o.s_) add(p, t);
    return *this;
  }
  Series& operator-=(const Series& o) {
    for (auto& [p, t] : o.s_) add(p, -t);
    return *this;
  }
  bool operator==(const Series& o) const { return s_ == o.s_; }
  T at(int p) const {
    auto it = s_.find(p);
    return it == s_.end() ? T{} : it->second;
  }
  T at_one() const {  // lambda = 1
    T r;
    for (auto& [p, t] : s_) r += t;
    return r;
  }
  std::string str(const Names& nm = Names{}) const {
    if (s_.empty()) return "0";
    std::string r;
    for (auto& [p, t] : s_) {
      if (!r.empty()) r += " + ";
      r += "[" + t.str(nm) + "]*lambda^" + std::to_string(p);
    }
    return r;
  }

 private:
  std::map<int, T> s_;
};

using LambdaSeries = Series<Tensor2>;

// two-parameter series for double Jacobi residuals: (lambda power, mu power)
using LambdaMuSeries = std::map<std::pair<int, int>, Tensor3>;

// ---- derivatives and derivations --------------------------------------------
// d a / d z, z a GEN or THETA letter (with component and shift)
Tensor2 double_partial(const Element& a, const Letter& z);

// letters (kind GEN or THETA) that occur, with their shifts
std::vector<Letter> variables_of(const Element& a);

// General (graded) derivation D of parity `parity` determined on letters.
// For GEN_INV the rule D(x^-1) = -x^-1 D(x) x^-1 is used.  Nonlocal letters
// are passed to `on_nonlocal` (error if empty).
using LetterRule = std::function<Element(const Letter&)>;
Element derive(const Element& a, int parity, const LetterRule& on_gen, const LetterRule& on_theta,
               const LetterRule& on_nonlocal = nullptr);

// X(a) = sum m((S^n X^i) * da/du^i_n); characteristics may be odd (formal
// fields such as K theta), then the graded rule applies.
Element apply_evolutionary(const std::vector<Element>& X, const Element& a,
                           const LetterRule& on_nonlocal = nullptr);

std::vector<Element> commutator_vf(const std::vector<Element>& X, const std::vector<Element>& Y);

}  // namespace ncham
