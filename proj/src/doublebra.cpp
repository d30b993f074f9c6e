#include "ncham/doublebra.hpp"

#include <stdexcept>

namespace ncham {

LambdaSeries lambda_bracket(const Element& a, const Element& b, const BracketTable& T) {
  if (a.has_theta() || b.has_theta() || a.has_nonlocal() || b.has_nonlocal())
    throw std::invalid_argument("lambda_bracket: arguments must be theta-free and local");
  LambdaSeries out;
  auto va = variables_of(a);
  auto vb = variables_of(b);
  // sigma of da/du^i_n, cached
  std::map<Letter, Tensor2> da;
  for (auto& z : va) da[z] = t_sigma(double_partial(a, z));
  for (auto& zb : vb) {
    Tensor2 db = double_partial(b, zb);
    if (db.is_zero()) continue;
    const int j = zb.comp, m = zb.shift;
    for (auto& [za, dc] : da) {
      if (dc.is_zero()) continue;
      const int i = za.comp, n = za.shift;
      if (i >= T.n || j >= T.n) throw std::out_of_range("lambda_bracket: component outside table");
      for (auto& [p, X] : T.at(i, j).terms()) {
        Tensor2 y = t_bullet(X, t_shift(dc, p - n));
        out.add(m + p - n, t_bullet(db, t_shift(y, m)));
      }
    }
  }
  return out;
}

Tensor2 ul_bracket(const Element& a, const Element& b, const BracketTable& T) {
  if (!T.ultralocal()) throw std::invalid_argument("ul_bracket: table is not ultralocal");
  return lambda_bracket(a, b, T).at(0);
}

namespace {

// {{a, x(x)y}}_L = {{a,x}} (x) y
Tensor3 bracket_L(const Element& a, const Tensor2& t, const BracketTable& T) {
  Tensor3 r;
  for (auto& [k, c] : t.terms()) {
    Tensor2 d = ul_bracket(a, Element::word(k[0]), T);
    for (auto& [dk, dc] : d.terms()) r.add({dk[0], dk[1], k[1]}, dc * c);
  }
  return r;
}

}  // namespace

Tensor3 triple_bracket(const Element& a, const Element& b, const Element& c, const BracketTable& T) {
  Tensor3 r = bracket_L(a, ul_bracket(b, c, T), T);
  r += t_tau(bracket_L(b, ul_bracket(c, a, T), T));
  r += t_tau(t_tau(bracket_L(c, ul_bracket(a, b, T), T)));
  return r;
}

namespace {

void lm_add(LambdaMuSeries& s, int p, int q, const Tensor3& t) {
  if (t.is_zero()) return;
  auto& slot = s[{p, q}];
  slot += t;
  if (slot.is_zero()) s.erase({p, q});
}

}  // namespace

std::vector<JacobiTerm> double_jacobi_residual(const BracketTable& T) {
  std::vector<JacobiTerm> out;
  const int n = T.n;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        Element a = Element::gen(i), b = Element::gen(j), c = Element::gen(k);
        LambdaMuSeries r;
        // {{a_l {{b_m c}}}}_L
        for (auto& [q, B] : T.at(j, k).terms())
          for (auto& [key, cf] : B.terms())
            for (const auto tmp_ = lambda_bracket(a, Element::word(key[0]), T); auto& [p, D] : tmp_.terms())
              for (auto& [dk, dc] : D.terms()) {
                Tensor3 t;
                t.add({dk[0], dk[1], key[1]}, dc * cf);
                lm_add(r, p, q, t);
              }
        // - {{b_m {{a_l c}}}}_R
        for (auto& [p, A] : T.at(i, k).terms())
          for (auto& [key, cf] : A.terms())
            for (const auto tmp_ = lambda_bracket(b, Element::word(key[1]), T); auto& [q, E] : tmp_.terms())
              for (auto& [ek, ec] : E.terms()) {
                Tensor3 t;
                t.add({key[0], ek[0], ek[1]}, -(ec * cf));
                lm_add(r, p, q, t);
              }
        // - {{ {{a_l b}}_{lm} c}}_L
        for (auto& [p, X] : T.at(i, j).terms())
          for (auto& [key, cf] : X.terms())
            for (const auto tmp_ = lambda_bracket(Element::word(key[0]), c, T); auto& [s, D] : tmp_.terms())
              for (auto& [dk, dc] : D.terms()) {
                Element y = shift(Element::word(key[1]), s);
                Tensor3 t;
                for (auto& [yw, yc] : y.terms()) t.add({dk[0], yw, dk[1]}, -(dc * cf * yc));
                lm_add(r, p + s, s, t);
              }
        if (!r.empty()) out.push_back({{i, j, k}, std::move(r)});
      }
  return out;
}

std::string jacobi_str(const std::vector<JacobiTerm>& r, const Names& nm) {
  std::string s;
  for (auto& t : r) {
    if (!s.empty()) s += "; ";
    s += "(" + nm.var(t.idx[0]) + "," + nm.var(t.idx[1]) + "," + nm.var(t.idx[2]) + "): ";
    bool first = true;
    for (auto& [pq, ten] : t.r) {
      if (!first) s += " + ";
      first = false;
      s += "[" + ten.str(nm) + "]*lambda^" + std::to_string(pq.first) + "*mu^" + std::to_string(pq.second);
    }
  }
  return s.empty() ? "0" : s;
}

Tensor3 quasi_rhs(const Element& a, const Element& b, const Element& c) {
  const Element one(1);
  Tensor3 r = tensor(c * a, b, one);
  r -= tensor(c * a, one, b);
  r -= tensor(c, a * b, one);
  r += tensor(c, a, b);
  r -= tensor(a, b, c);
  r += tensor(a, one, b * c);
  r += tensor(one, a * b, c);
  r -= tensor(one, a, b * c);
  return r;
}

std::vector<std::pair<std::array<int, 3>, Tensor3>> quasi_poisson_residual(const BracketTable& T,
                                                                           const Coeff& alpha) {
  if (!T.ultralocal()) throw std::invalid_argument("quasi-Poisson check needs an ultralocal operator");
  std::vector<std::pair<std::array<int, 3>, Tensor3>> out;
  for (int i = 0; i < T.n; ++i)
    for (int j = 0; j < T.n; ++j)
      for (int k = 0; k < T.n; ++k) {
        Element a = Element::gen(i), b = Element::gen(j), c = Element::gen(k);
        Tensor3 r = triple_bracket(a, b, c, T) - quasi_rhs(a, b, c) * alpha;
        if (!r.is_zero()) out.push_back({{i, j, k}, std::move(r)});
      }
  return out;
}

QuasiFit quasi_poisson_fit(const BracketTable& T) {
  if (!T.ultralocal()) throw std::invalid_argument("quasi-Poisson check needs an ultralocal operator");
  QuasiFit f;
  // alpha from the first rhs coefficient of the first triple: the rhs
  // coefficients are +-1, so alpha = lhs coefficient * sign
  Element u = Element::gen(0);
  Tensor3 lhs = triple_bracket(u, u, u, T);
  Tensor3 rhs = quasi_rhs(u, u, u);
  for (auto& [k, c] : rhs.terms()) {
    auto it = lhs.terms().find(k);
    Coeff l = it == lhs.terms().end() ? Coeff() : it->second;
    f.alpha = l * Coeff(Rational(1) / c.const_value());
    break;
  }
  f.residual = quasi_poisson_residual(T, *f.alpha);
  f.ok = f.residual.empty();
  if (!f.ok) f.note = "no alpha makes the triple bracket match the quasi-Poisson form";
  return f;
}

PolyVector functional_bracket_lambda(const Element& f, const Element& g, const BracketTable& T) {
  PolyVector r;
  r.repr = normal_form(-t_mult(lambda_bracket(f, g, T).at_one()));
  return r;
}

PolyVector functional_poisson_bracket(const PolyVector& F, const PolyVector& G, const DiffOp& K) {
  const int n = K.size();
  std::vector<Element> dF, dG;
  for (int i = 0; i < n; ++i) {
    dF.push_back(variational_derivative(F.repr, i));
    dG.push_back(variational_derivative(G.repr, i));
  }
  auto KdG = ncham::apply(K, dG);
  Element d;
  for (int i = 0; i < n; ++i) d += dF[static_cast<size_t>(i)] * KdG[static_cast<size_t>(i)];
  PolyVector r;
  if (d.has_nonlocal()) {
    // use skewsymmetry: {F,G} = -<dG, K dF>, often local when K dG is not
    auto KdF = ncham::apply(K, dF);
    Element e;
    for (int i = 0; i < n; ++i) e -= dG[static_cast<size_t>(i)] * KdF[static_cast<size_t>(i)];
    if (e.has_nonlocal()) throw std::runtime_error("functional bracket: nonlocal result");
    r.repr = normal_form(e);
    return r;
  }
  r.repr = normal_form(d);
  if (K.is_local()) {
    PolyVector l = functional_bracket_lambda(F.repr, G.repr, to_bracket(K));
    if (!(l == r))
      throw std::logic_error("functional bracket routes disagree: " + r.repr.str() + " vs " + l.repr.str());
  }
  return r;
}

}  // namespace ncham
