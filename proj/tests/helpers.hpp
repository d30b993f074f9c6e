#pragma once
// Shorthands shared by the test binaries.

#include <random>

#include "ncham/ncalg.hpp"
#include "ncham/quotient.hpp"

namespace th {

using namespace ncham;

inline Element u(int n = 0) { return Element::gen(0, n); }
inline Element v(int n = 0) { return Element::gen(1, n); }
inline Element ui(int n = 0) { return Element::inv(0, n); }
inline Element vi(int n = 0) { return Element::inv(1, n); }
inline Element t(int n = 0) { return Element::theta(0, n); }
inline Element z(int n = 0) { return Element::theta(1, n); }
inline Coeff q(long a, long b = 1) { return Coeff(Rational(a, b)); }

// random word over vars (and thetas) with small shifts
inline Word random_word(std::mt19937_64& rng, int nvars, int len, int thetas, int max_shift, bool inverses) {
  std::uniform_int_distribution<int> comp(0, nvars - 1), sh(-max_shift, max_shift), coin(0, 3);
  Word w;
  for (int i = 0; i < len; ++i) {
    Letter l = (inverses && coin(rng) == 0) ? Letter::inv(comp(rng), sh(rng)) : Letter::gen(comp(rng), sh(rng));
    w = word_concat(w, Word{l});
  }
  for (int k = 0; k < thetas; ++k) {
    std::uniform_int_distribution<size_t> pos(0, w.size());
    w.insert(w.begin() + static_cast<long>(pos(rng)), Letter::theta(comp(rng), sh(rng)));
  }
  return w;
}

inline Element random_element(std::mt19937_64& rng, int nvars, int terms, int max_len, int thetas = 0,
                              int max_shift = 1, bool inverses = false) {
  std::uniform_int_distribution<int> len(1, max_len), cf(-3, 3);
  Element e;
  for (int i = 0; i < terms; ++i) {
    int c = cf(rng);
    if (c == 0) c = 1;
    e += Element::word(random_word(rng, nvars, len(rng), thetas, max_shift, inverses), Coeff(c));
  }
  return e;
}

// lambda^k times a series
inline LambdaSeries times_lambda(const LambdaSeries& s, int k) {
  LambdaSeries r;
  for (auto& [p, x] : s.terms()) r.add(p + k, x);
  return r;
}

// lambda S applied to a series (S acts on both tensor factors)
inline LambdaSeries lambda_S(const LambdaSeries& s) {
  LambdaSeries r;
  for (auto& [p, x] : s.terms()) r.add(p + 1, t_shift(x, 1));
  return r;
}

// -{{a_{(lambda S)^-1} b}}^sigma, which skewsymmetry equates with {{b_lambda a}}
inline LambdaSeries skew_image(const LambdaSeries& s) {
  LambdaSeries r;
  for (auto& [p, x] : s.terms()) r.add(-p, -t_sigma(t_shift(x, -p)));
  return r;
}

}  // namespace th
