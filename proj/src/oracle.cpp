#include "ncham/oracle.hpp"

#include <cmath>
#include <stdexcept>

#include "ncham/quotient.hpp"

namespace ncham::oracle {

namespace {

template <class T>
struct Dual {
  T a{}, b{};  // a + b eps, eps^2 = 0
  Dual() = default;
  Dual(const T& x) : a(x) {}  // NOLINT
  Dual(const T& x, const T& y) : a(x), b(y) {}
  friend Dual operator+(const Dual& x, const Dual& y) { return {x.a + y.a, x.b + y.b}; }
  friend Dual operator-(const Dual& x, const Dual& y) { return {x.a - y.a, x.b - y.b}; }
  friend Dual operator*(const Dual& x, const Dual& y) { return {x.a * y.a, x.a * y.b + x.b * y.a}; }
  Dual& operator+=(const Dual& y) { return *this = *this + y; }
};

template <class T>
struct Mat {
  int n = 0;
  std::vector<T> a;
  explicit Mat(int n_ = 0) : n(n_), a(static_cast<size_t>(n_ * n_)) {}
  static Mat id(int n) {
    Mat m(n);
    for (int i = 0; i < n; ++i) m(i, i) = T(1);
    return m;
  }
  T& operator()(int i, int j) { return a[static_cast<size_t>(i * n + j)]; }
  const T& operator()(int i, int j) const { return a[static_cast<size_t>(i * n + j)]; }
  Mat& operator+=(const Mat& o) {
    for (size_t k = 0; k < a.size(); ++k) a[k] += o.a[k];
    return *this;
  }
  friend Mat operator*(const Mat& x, const Mat& y) {
    Mat r(x.n);
    for (int i = 0; i < x.n; ++i)
      for (int k = 0; k < x.n; ++k) {
        const T& xik = x(i, k);
        for (int j = 0; j < x.n; ++j) r(i, j) += xik * y(k, j);
      }
    return r;
  }
  friend Mat operator*(const T& c, Mat m) {
    for (auto& v : m.a) v = c * v;
    return m;
  }
  T trace() const {
    T t{};
    for (int i = 0; i < n; ++i) t += (*this)(i, i);
    return t;
  }
};

template <class T>
Mat<T> from_q(const QMat& q) {
  Mat<T> m(q.n);
  for (size_t k = 0; k < q.a.size(); ++k) {
    if constexpr (std::is_same_v<T, double>)
      m.a[k] = q.a[k].get_d();
    else
      m.a[k] = T(q.a[k]);
  }
  return m;
}

QMat to_q(const Mat<Rational>& m) {
  QMat q(m.n);
  q.a = m.a;
  return q;
}

// Gauss-Jordan; false if singular
template <class T>
bool invert(Mat<T> m, Mat<T>& out) {
  const int n = m.n;
  out = Mat<T>::id(n);
  for (int c = 0; c < n; ++c) {
    int piv = -1;
    if constexpr (std::is_same_v<T, double>) {
      double best = 0;
      for (int r = c; r < n; ++r)
        if (std::abs(m(r, c)) > best) best = std::abs(m(r, c)), piv = r;
      if (best < 1e-300) return false;
    } else {
      for (int r = c; r < n && piv < 0; ++r)
        if (m(r, c) != 0) piv = r;
      if (piv < 0) return false;
    }
    for (int j = 0; j < n; ++j) {
      std::swap(m(c, j), m(piv, j));
      std::swap(out(c, j), out(piv, j));
    }
    T d = m(c, c);
    for (int j = 0; j < n; ++j) {
      m(c, j) /= d;
      out(c, j) /= d;
    }
    for (int r = 0; r < n; ++r) {
      if (r == c) continue;
      T f = m(r, c);
      if (f == 0) continue;
      for (int j = 0; j < n; ++j) {
        m(r, j) -= f * m(c, j);
        out(r, j) -= f * out(c, j);
      }
    }
  }
  return true;
}

// values and inverses on the lattice, over any scalar
template <class T>
struct TPoint {
  int M = 1, N = 1;
  std::vector<std::vector<Mat<T>>> val, inv;
};

template <class T>
TPoint<T> lift(const LatticePoint& p) {
  TPoint<T> t;
  t.M = p.M;
  t.N = p.N;
  for (int i = 0; i < p.nvars; ++i) {
    t.val.emplace_back();
    t.inv.emplace_back();
    for (int n = 0; n < p.M; ++n) {
      t.val.back().push_back(from_q<T>(p.at(i, n)));
      t.inv.back().push_back(from_q<T>(p.inv_at(i, n)));
    }
  }
  return t;
}

int wrap(int n, int M) { return ((n % M) + M) % M; }

template <class T>
T coeff_value(const Coeff& c) {
  if (!c.is_const()) throw std::invalid_argument("oracle needs parameter-free input");
  if constexpr (std::is_same_v<T, double>)
    return c.const_value().get_d();
  else
    return T(c.const_value());
}

template <class T>
const Mat<T>& letter_value(const Letter& l, const TPoint<T>& p, int site) {
  if (l.comp >= static_cast<int>(p.val.size())) throw std::invalid_argument("oracle: unknown component");
  const int m = wrap(site + l.shift, p.M);
  switch (l.kind) {
    case Kind::GEN:
      return p.val[static_cast<size_t>(l.comp)][static_cast<size_t>(m)];
    case Kind::GEN_INV:
      return p.inv[static_cast<size_t>(l.comp)][static_cast<size_t>(m)];
    default:
      throw std::invalid_argument("oracle: theta or nonlocal letter");
  }
}

template <class T>
Mat<T> eval_word(const Word& w, const TPoint<T>& p, int site) {
  if (w.empty()) return Mat<T>::id(p.N);
  Mat<T> r = letter_value(w[0], p, site);
  for (size_t k = 1; k < w.size(); ++k) r = r * letter_value(w[k], p, site);
  return r;
}

template <class T>
Mat<T> eval_elem(const Element& a, const TPoint<T>& p, int site) {
  Mat<T> r(p.N);
  for (auto& [w, c] : a.terms()) r += coeff_value<T>(c) * eval_word(w, p, site);
  return r;
}

template <class T>
T eval_fun(const Element& a, const TPoint<T>& p) {
  T s{};
  for (int n = 0; n < p.M; ++n) s += eval_elem(a, p, n).trace();
  return s;
}

template <class T>
using Field = std::vector<std::vector<Mat<T>>>;  // [comp][site]

template <class T>
Field<T> zero_field(int nv, const TPoint<T>& p) {
  return Field<T>(static_cast<size_t>(nv), std::vector<Mat<T>>(static_cast<size_t>(p.M), Mat<T>(p.N)));
}

// d tr(X1...Xk) = sum_j tr(S_j P_j dX_j) with prefix P_j and suffix S_j
template <class T>
Field<T> grad(const Element& a, const TPoint<T>& p) {
  Field<T> G = zero_field(static_cast<int>(p.val.size()), p);
  for (int n = 0; n < p.M; ++n) {
    for (auto& [w, c] : a.terms()) {
      const size_t k = w.size();
      if (k == 0) continue;
      std::vector<Mat<T>> pre(k + 1, Mat<T>::id(p.N)), suf(k + 1, Mat<T>::id(p.N));
      for (size_t j = 0; j < k; ++j) pre[j + 1] = pre[j] * letter_value(w[j], p, n);
      for (size_t j = k; j-- > 0;) suf[j] = letter_value(w[j], p, n) * suf[j + 1];
      const T cv = coeff_value<T>(c);
      for (size_t j = 0; j < k; ++j) {
        const Letter& l = w[j];
        auto& slot = G[static_cast<size_t>(l.comp)][static_cast<size_t>(wrap(n + l.shift, p.M))];
        Mat<T> sp = suf[j + 1] * pre[j];
        if (l.kind == Kind::GEN) {
          slot += cv * sp;
        } else {
          const Mat<T>& X = letter_value(l, p, n);
          slot += (T(-1) * cv) * (X * sp * X);
        }
      }
    }
  }
  return G;
}

// (K h)^i_n = sum_j sum L_n h^j_{n+q} R_n
template <class T>
Field<T> apply_num(const DiffOp& K, const Field<T>& h, const TPoint<T>& p) {
  if (!K.is_local()) throw std::invalid_argument("oracle: nonlocal operators are excluded");
  const int nv = K.size();
  Field<T> out = zero_field(nv, p);
  for (int i = 0; i < nv; ++i)
    for (int j = 0; j < nv; ++j)
      for (auto& [q, t] : K.at(i, j).terms())
        for (auto& [key, c] : t.terms()) {
          const T cv = coeff_value<T>(c);
          for (int n = 0; n < p.M; ++n) {
            Mat<T> L = eval_word(key[0], p, n), R = eval_word(key[1], p, n);
            out[static_cast<size_t>(i)][static_cast<size_t>(n)] +=
                cv * (L * h[static_cast<size_t>(j)][static_cast<size_t>(wrap(n + q, p.M))] * R);
          }
        }
  return out;
}

template <class T>
T pairing(const Field<T>& a, const Field<T>& b) {
  T s{};
  for (size_t i = 0; i < a.size(); ++i)
    for (size_t n = 0; n < a[i].size(); ++n) s += (a[i][n] * b[i][n]).trace();
  return s;
}

template <class T>
T bracket_num(const DiffOp& K, const Element& A, const Element& B, const TPoint<T>& p) {
  return pairing(grad(A, p), apply_num(K, grad(B, p), p));
}

double absd(const Rational& q) { return std::abs(q.get_d()); }

// int tr dA . K dB, without the skewsymmetry precondition of the
// two-route bracket (negative controls go through here too)
Element symbolic_bracket(const DiffOp& K, const Element& A, const Element& B) {
  std::vector<Element> dB;
  for (int i = 0; i < K.size(); ++i) dB.push_back(variational_derivative(B, i));
  auto KdB = ncham::apply(K, dB);
  Element s;
  for (int i = 0; i < K.size(); ++i) s += variational_derivative(A, i) * KdB[static_cast<size_t>(i)];
  return canonicalize(s).repr;
}

}  // namespace

const QMat& LatticePoint::at(int comp, int site) const {
  return val[static_cast<size_t>(comp)][static_cast<size_t>(wrap(site, M))];
}
const QMat& LatticePoint::inv_at(int comp, int site) const {
  return inv[static_cast<size_t>(comp)][static_cast<size_t>(wrap(site, M))];
}

LatticePoint random_point(int nvars, std::mt19937_64& rng, int M, int N) {
  LatticePoint p;
  p.M = M;
  p.N = N;
  p.nvars = nvars;
  std::uniform_int_distribution<int> den(1, 4);
  for (int i = 0; i < nvars; ++i) {
    p.val.emplace_back();
    p.inv.emplace_back();
    for (int n = 0; n < M; ++n) {
      Mat<Rational> m(N), mi(N);
      do {
        for (auto& x : m.a) {
          int q = den(rng);
          std::uniform_int_distribution<int> num(-2 * q, 2 * q);
          x = Rational(num(rng), q);
          x.canonicalize();
        }
      } while (!invert(m, mi));
      p.val.back().push_back(to_q(m));
      p.inv.back().push_back(to_q(mi));
    }
  }
  return p;
}

QMat eval_density(const Element& a, const LatticePoint& p, int site) {
  return to_q(eval_elem(a, lift<Rational>(p), site));
}

Rational eval_functional(const Element& a, const LatticePoint& p) { return eval_fun(a, lift<Rational>(p)); }

double eval_functional_float(const Element& a, const LatticePoint& p) { return eval_fun(a, lift<double>(p)); }

std::vector<std::vector<QMat>> gradient(const Element& a, const LatticePoint& p) {
  auto G = grad(a, lift<Rational>(p));
  std::vector<std::vector<QMat>> out;
  for (auto& row : G) {
    out.emplace_back();
    for (auto& m : row) out.back().push_back(to_q(m));
  }
  return out;
}

Check directional_derivative_check(const Element& F, const std::vector<Element>& X, const LatticePoint& p, Mode mode,
                                   const std::vector<Element>* dF_override) {
  if (static_cast<int>(X.size()) != p.nvars) throw std::invalid_argument("field has the wrong number of components");
  Element pair;
  for (int i = 0; i < p.nvars; ++i) {
    Element d = dF_override ? (*dF_override)[static_cast<size_t>(i)] : variational_derivative(F, i);
    pair += d * X[static_cast<size_t>(i)];
  }
  Check c;
  if (mode == Mode::Rational) {
    const auto q = lift<Rational>(p);
    Rational lhs = eval_fun(pair, q);
    // F at p + eps X(p); (A + eps B)^-1 = A^-1 - eps A^-1 B A^-1
    TPoint<Dual<Rational>> d;
    d.M = p.M;
    d.N = p.N;
    for (int i = 0; i < p.nvars; ++i) {
      d.val.emplace_back();
      d.inv.emplace_back();
      for (int n = 0; n < p.M; ++n) {
        const Mat<Rational>& A = q.val[static_cast<size_t>(i)][static_cast<size_t>(n)];
        const Mat<Rational>& Ai = q.inv[static_cast<size_t>(i)][static_cast<size_t>(n)];
        Mat<Rational> B = eval_elem(X[static_cast<size_t>(i)], q, n);
        Mat<Rational> dAi = Rational(-1) * (Ai * B * Ai);
        Mat<Dual<Rational>> v(p.N), vi(p.N);
        for (size_t k = 0; k < A.a.size(); ++k) {
          v.a[k] = Dual<Rational>(A.a[k], B.a[k]);
          vi.a[k] = Dual<Rational>(Ai.a[k], dAi.a[k]);
        }
        d.val.back().push_back(v);
        d.inv.back().push_back(vi);
      }
    }
    Rational rhs = eval_fun(F, d).b;
    c.pass = lhs == rhs;
    c.err = c.pass ? 0 : absd(lhs - rhs) / std::max(1.0, absd(lhs));
    c.detail = "pairing " + lhs.get_str() + ", derivative " + rhs.get_str();
  } else {
    const auto q = lift<double>(p);
    double lhs = eval_fun(pair, q);
    // step scaled to how fast the inverses move along X; five-point stencil
    double speed = 1;
    for (int i = 0; i < p.nvars; ++i)
      for (int n = 0; n < p.M; ++n) {
        Mat<double> B = eval_elem(X[static_cast<size_t>(i)], q, n);
        double bi = 0, ai = 0;
        for (double x : B.a) bi = std::max(bi, std::abs(x));
        for (double x : q.inv[static_cast<size_t>(i)][static_cast<size_t>(n)].a) ai = std::max(ai, std::abs(x));
        speed = std::max(speed, bi * std::max(1.0, ai));
      }
    const double h = 1e-3 / speed;
    auto at = [&](double s) {
      TPoint<double> t = q;
      for (int i = 0; i < p.nvars; ++i)
        for (int n = 0; n < p.M; ++n) {
          Mat<double> B = eval_elem(X[static_cast<size_t>(i)], q, n);
          auto& m = t.val[static_cast<size_t>(i)][static_cast<size_t>(n)];
          for (size_t k = 0; k < m.a.size(); ++k) m.a[k] += s * B.a[k];
          if (!invert(m, t.inv[static_cast<size_t>(i)][static_cast<size_t>(n)]))
            throw std::runtime_error("oracle: singular matrix after perturbation");
        }
      return eval_fun(F, t);
    };
    double rhs = (at(-2 * h) - 8 * at(-h) + 8 * at(h) - at(2 * h)) / (12 * h);
    c.err = std::abs(lhs - rhs) / std::max(1.0, std::abs(lhs));
    c.pass = c.err <= 1e-8;
    c.detail = "pairing " + std::to_string(lhs) + ", central difference " + std::to_string(rhs);
  }
  return c;
}

Rational numeric_bracket(const DiffOp& K, const Element& A, const Element& B, const LatticePoint& p) {
  return bracket_num(K, A, B, lift<Rational>(p));
}

double numeric_bracket_float(const DiffOp& K, const Element& A, const Element& B, const LatticePoint& p) {
  return bracket_num(K, A, B, lift<double>(p));
}

Check numeric_bracket_jacobi(const DiffOp& K, const Element& A, const Element& B, const Element& C,
                             const LatticePoint& p, Mode mode) {
  Check c;
  const Element BC = symbolic_bracket(K, B, C), CA = symbolic_bracket(K, C, A), AB = symbolic_bracket(K, A, B);
  if (mode == Mode::Rational) {
    const auto q = lift<Rational>(p);
    Rational ab = bracket_num(K, A, B, q), ba = bracket_num(K, B, A, q);
    if (ab + ba != 0) {
      c.detail = "antisymmetry fails: {A,B} + {B,A} = " + Rational(ab + ba).get_str();
      c.err = 1;
      return c;
    }
    Rational sym = eval_fun(AB, q);
    if (sym != ab) {
      c.detail = "symbolic {A,B} = " + sym.get_str() + " but numeric " + ab.get_str();
      c.err = 1;
      return c;
    }
    Rational j = bracket_num(K, A, BC, q) + bracket_num(K, B, CA, q) + bracket_num(K, C, AB, q);
    c.pass = j == 0;
    c.err = c.pass ? 0 : 1;
    c.detail = "jacobi sum " + j.get_str();
  } else {
    const auto q = lift<double>(p);
    double ab = bracket_num(K, A, B, q), ba = bracket_num(K, B, A, q);
    // entries are O(1), so an absolute floor of 1 keeps exact zeros from
    // turning rounding noise into a relative error of order one
    double asym = std::abs(ab + ba) / std::max(1.0, std::abs(ab) + std::abs(ba));
    double t1 = bracket_num(K, A, BC, q), t2 = bracket_num(K, B, CA, q), t3 = bracket_num(K, C, AB, q);
    double jerr = std::abs(t1 + t2 + t3) / std::max(1.0, std::abs(t1) + std::abs(t2) + std::abs(t3));
    c.err = std::max(asym, jerr);
    c.pass = c.err <= 1e-8;
    c.detail = "antisymmetry " + std::to_string(asym) + ", jacobi " + std::to_string(jerr);
  }
  return c;
}

Element random_density(std::mt19937_64& rng, const RandomSpec& s) {
  std::uniform_int_distribution<int> len(s.min_len, s.max_len), comp(0, s.nvars - 1),
      sh(-s.max_shift, s.max_shift), cf(-3, 3), inv(0, 3);
  Element e;
  for (int t = 0; t < s.terms; ++t) {
    Word w;
    const int k = len(rng);
    for (int i = 0; i < k; ++i) {
      const int c = comp(rng), n = sh(rng);
      word_append(w, s.inverses && inv(rng) == 0 ? Letter::inv(c, n) : Letter::gen(c, n));
    }
    int x = 0;
    while (x == 0) x = cf(rng);
    e.add(w, Coeff(x));
  }
  return e;
}

TrialsReport jacobi_trials(const DiffOp& K, int trials, std::uint64_t seed) {
  if (!K.is_local()) throw std::invalid_argument("oracle: nonlocal operators are excluded");
  if (K.has_params()) throw std::invalid_argument("oracle: substitute parameter values first");
  std::mt19937_64 rng(seed);
  TrialsReport r;
  const bool ul = K.is_ultralocal();
  RandomSpec spec;
  spec.nvars = K.size();
  spec.min_len = 1;
  spec.max_len = 3;
  spec.max_shift = ul ? 0 : 1;
  spec.inverses = ul;
  for (int t = 0; t < trials; ++t) {
    LatticePoint p = random_point(K.size(), rng, ul ? 1 : 4, 3);
    Element A = random_density(rng, spec), B = random_density(rng, spec), C = random_density(rng, spec);
    Check q = numeric_bracket_jacobi(K, A, B, C, p, Mode::Rational);
    Check f = numeric_bracket_jacobi(K, A, B, C, p, Mode::Float);
    ++r.trials;
    r.worst_float_err = std::max(r.worst_float_err, f.err);
    if (q.pass && f.pass) {
      ++r.passed;
    } else if (r.first_failure.empty()) {
      r.first_failure = "trial " + std::to_string(t) + ": " + (q.pass ? f.detail : q.detail);
    }
  }
  return r;
}

}  // namespace ncham::oracle
