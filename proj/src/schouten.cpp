#include "ncham/schouten.hpp"

#include <stdexcept>

namespace ncham {

namespace {

// (lambda S)^k applied to a tensor, accumulated into out
void add_lshift(LambdaSeries& out, const Tensor2& t, int k) { out.add(k, t_shift(t, k)); }

LambdaSeries ds_homogeneous_b(const Element& a, const Element& b, int deg_b) {
  LambdaSeries out;
  auto va = variables_of(a);
  auto vb = variables_of(b);
  for (auto& zb : vb) {
    Tensor2 db = double_partial(b, zb);
    if (db.is_zero()) continue;
    const bool b_is_u = zb.kind == Kind::GEN;
    for (auto& za : va) {
      if (za.comp != zb.comp) continue;
      // pair u in b with theta in a, theta in b with u in a
      if (b_is_u == (za.kind == Kind::GEN)) continue;
      Tensor2 da = t_sigma(double_partial(a, za));
      if (da.is_zero()) continue;
      const int k = zb.shift - za.shift;
      LambdaSeries inner;
      add_lshift(inner, da, k);
      for (auto& [p, t] : inner.terms()) {
        Tensor2 term = t_bullet(db, t);
        if (!b_is_u && (deg_b & 1)) term = -term;
        out.add(p, term);
      }
    }
  }
  return out;
}


}  // namespace

LambdaSeries double_schouten(const Element& a, const Element& b) {
  if (a.has_nonlocal() || b.has_nonlocal())
    throw std::invalid_argument("double Schouten bracket of nonlocal elements");
  LambdaSeries out;
  std::map<int, Element> parts;
  for (auto& [w, c] : b.terms()) parts[word_degree(w)].add(w, c);
  for (auto& [d, bp] : parts) out += ds_homogeneous_b(a, bp, d);
  return out;
}

Tensor2 double_schouten_ul(const Element& a, const Element& b) { return double_schouten(a, b).at(0); }

PolyVector schouten(const Element& a, const Element& b) {
  PolyVector r;
  r.repr = normal_form(t_mult(double_schouten(a, b).at_one()));
  r.degree = std::max(0, r.repr.max_degree());
  return r;
}

PolyVector schouten(const PolyVector& A, const PolyVector& B) {
  PolyVector r = schouten(A.repr, B.repr);
  if (r.is_zero()) r.degree = std::max(0, A.degree + B.degree - 1);
  return r;
}

PolyVector vector_field(const std::vector<Element>& X) {
  Element d;
  for (size_t i = 0; i < X.size(); ++i) d += Element::theta(static_cast<int>(i)) * X[i];
  PolyVector r;
  r.repr = normal_form(d);
  r.degree = 1;
  return r;
}

std::vector<Element> characteristics(const PolyVector& V, int n) {
  std::vector<Element> X;
  for (int i = 0; i < n; ++i) X.push_back(variational_derivative(V.repr, i, Flavor::THETA));
  return X;
}

Element prolong_raw(const DiffOp& K, const Element& a) {
  const auto KT = apply_theta(K);
  std::map<int, Element> sym;
  LetterRule on_gen = [&](const Letter& l) { return shift(KT[static_cast<size_t>(l.comp)], l.shift); };
  LetterRule on_theta = [](const Letter&) { return Element(); };
  LetterRule on_nl = [&](const Letter& l) {
    auto it = sym.find(l.comp);
    if (it != sym.end()) return it->second;
    Element ps = prolong_raw(K, nl_info(l.comp).seed);
    Element r = inv_s_minus_1(ps);
    sym.emplace(l.comp, r);
    return r;
  };
  return derive(a, 1, on_gen, on_theta, on_nl);
}

Membership prolong(const DiffOp& K, const Element& density) {
  return membership_reduce(prolong_raw(K, density));
}

Membership prolong(const DiffOp& K, const PolyVector& B) { return prolong(K, B.repr); }

Torsion torsion(const DiffOp& K) {
  Torsion t;
  Element P = bivector_density(K);
  Element pr = prolong_raw(K, P);
  t.m = membership_reduce(pr);
  if (K.is_local()) {
    PolyVector pv;
    pv.repr = normal_form(P);
    pv.degree = 2;
    PolyVector pp = schouten(pv, pv);
    // [P,P] = 2 pr P with P = 1/2 int tr theta K theta
    Element lhs = pp.repr;
    Element rhs = normal_form(pr) * Coeff(2);
    if (!(lhs == rhs))
      throw std::logic_error("torsion cross-check failed: [P,P] != 2 pr P\n  [P,P]  = " + lhs.str() +
                             "\n  2 pr P = " + rhs.str());
    t.cross_checked = true;
  }
  return t;
}

Membership mixed_torsion(const DiffOp& K1, const DiffOp& K2) {
  Element a = prolong_raw(K1, bivector_density(K2)) + prolong_raw(K2, bivector_density(K1));
  return membership_reduce(a);
}

std::vector<Element> hamiltonian_vf(const PolyVector& P, const PolyVector& F, int n) {
  PolyVector v = schouten(P, F);
  v.repr = -v.repr;
  return characteristics(v, n);
}

PolyVector poisson_differential(const PolyVector& P, const PolyVector& B) { return schouten(P, B); }

PolyVector quasi_residual_on_functional(const PolyVector& Q, const PolyVector& f) {
  return schouten(schouten(Q, Q), f);
}

PolyVector lie_derivative(const std::vector<Element>& X, const PolyVector& Q) {
  return schouten(vector_field(X), Q);
}

}  // namespace ncham
