#include "ncham/catalogue.hpp"

namespace ncham::cat {

namespace {
const Element u = Element::gen(0);
const Element v = Element::gen(1);
Element U(int n) { return Element::gen(0, n); }
Element V(int n) { return Element::gen(1, n); }
OpEntry l(const Element& f) { return OpEntry::left(f); }
OpEntry r(const Element& f) { return OpEntry::right(f); }
OpEntry S(int p) { return OpEntry::shift_op(p); }
OpEntry one() { return OpEntry::scalar(Coeff(1)); }
Coeff half() { return Coeff(Rational(1, 2)); }

DiffOp mat2(const OpEntry& a, const OpEntry& b, const OpEntry& c, const OpEntry& d) {
  DiffOp K(2);
  K.at(0, 0) = a;
  K.at(0, 1) = b;
  K.at(1, 0) = c;
  K.at(1, 1) = d;
  return K;
}
}  // namespace

OpEntry c_(const Element& f) { return l(f) - r(f); }
OpEntry a_(const Element& f) { return l(f) + r(f); }

DiffOp shift_skew() { return DiffOp::scalar(S(1) - S(-1)); }
DiffOp ru_minus_lu() { return DiffOp::scalar(r(u) - l(u)); }

DiffOp ultralocal_family(const Coeff& alpha, const Coeff& beta, const Coeff& gamma) {
  OpEntry e = c_(u) * alpha + c_(u * u) * beta + (l(u * u).compose(r(u)) - l(u).compose(r(u * u))) * gamma;
  return DiffOp::scalar(e);
}

DiffOp H_p(int p) {
  OpEntry e = OpEntry::term(u * U(p), U(p) * u, p) - S(-p).compose(OpEntry::term(U(p) * u, u * U(p), 0));
  return DiffOp::scalar(e);
}

DiffOp H0_sc() {
  DiffOp K = DiffOp::scalar(a_(u).compose(c_(u)) * half());
  // -1/2 c_u (1+S)(S-1)^-1 c_u = -1/2 c_u (S-1)^-1 c_u - 1/2 c_u S(S-1)^-1 c_u
  K.add_nonlocal({{c_(u) * Coeff(Rational(-1, 2))}, Tail::INV1, {c_(u)}});
  K.add_nonlocal({{c_(u) * Coeff(Rational(-1, 2))}, Tail::SINV1, {c_(u)}});
  return K;
}

DiffOp volterra() {
  return DiffOp::scalar(r(u).compose(S(1)).compose(r(u)) - l(u).compose(S(-1)).compose(l(u))) - H0_sc();
}

DiffOp null_tails() {
  DiffOp K = mat2(r(u).compose(c_(u)), r(u).compose(c_(v)), c_(v).compose(r(u)), c_(v).compose(r(v)));
  K.add_nonlocal({{-c_(u), -c_(v)}, Tail::INV1, {c_(u), c_(v)}});
  return K;
}

DiffOp toda2() {
  DiffOp K = mat2(l(u).compose(S(-1)).compose(l(u)) - r(u).compose(S(1)).compose(r(u)),
                  l(u).compose(r(v)) - r(u).compose(S(1)).compose(r(v)),
                  -l(v).compose(r(u)) + l(v).compose(S(-1)).compose(l(u)),
                  S(-1).compose(l(u)) - r(u).compose(S(1)));
  return K + null_tails();
}

DiffOp H_tilde() {
  DiffOp K = mat2(-c_(u * u), l(u).compose(r(v)) - l(v).compose(r(u)) - l(u * v) + r(v * u),
                  r(v).compose(l(u)) - r(u).compose(l(v)) + r(u * v) - l(v * u), c_(v * v));
  K.add_nonlocal({{a_(u), -a_(v)}, Tail::SINV1, {c_(u), c_(v)}});
  K.add_nonlocal({{-c_(u), -c_(v)}, Tail::INV1, {a_(u), -a_(v)}});
  return K;
}

DiffOp H_alpha(const Coeff& alpha) {
  return H_tilde() + mat2(OpEntry(), r(v * u) * Coeff(-2) + OpEntry::scalar(alpha),
                          l(v * u) * Coeff(2) - OpEntry::scalar(alpha), OpEntry());
}

DiffOp H_check(const Coeff& alpha, const Coeff& beta) {
  return H_tilde() + mat2(OpEntry(), r(v * u) * beta + OpEntry::scalar(alpha),
                          -(l(v * u) * beta) - OpEntry::scalar(alpha), OpEntry());
}

DiffOp kaup() {
  DiffOp K = mat2(c_(u), l(v) + r(u), -r(v) - l(u), -c_(v));
  K.add_nonlocal({{-one(), one()}, Tail::SINV1, {c_(u), c_(v)}});
  K.add_nonlocal({{c_(u), c_(v)}, Tail::INV1, {one(), -one()}});
  return K;
}

DiffOp kontsevich() {
  return mat2(r(u * u) - l(u * u), l(u * v) + l(u).compose(r(v)) - l(v).compose(r(u)) + r(v * u),
              -r(u * v) + l(u).compose(r(v)) - l(v).compose(r(u)) - l(v * u), l(v * v) - r(v * v));
}

Element kaup_F() { return U(1) * v - u * v; }

Element ablowitz_ladik_G(const Coeff& a, const Coeff& b) {
  return (U(1) * v * a - u * V(1) * b) * half();
}

Element kontsevich_h() {
  Element ui = Element::inv(0), vi = Element::inv(1);
  return (u + v + ui + vi + ui * vi) * half();
}

std::vector<Element> kaup_flow() { return {(U(1) - u) * (u + v), (u + v) * (v - V(-1))}; }

std::vector<Element> ablowitz_ladik_flow(const Coeff& a, const Coeff& b) {
  return {(U(1) - U(1) * v * u) * a + (u * v * U(-1) - U(-1)) * b,
          (v * u * V(-1) - V(-1)) * a + (V(1) - V(1) * u * v) * b};
}

std::vector<Element> chen_lee_liu_flow() {
  return {(U(1) - u) * (Element(1) + v * u), (Element(1) + v * u) * (v - V(-1))};
}

std::vector<Element> kontsevich_flow() {
  Element ui = Element::inv(0), vi = Element::inv(1);
  return {u * v - u * vi - vi, -(v * u) + v * ui + ui};
}

}  // namespace ncham::cat
