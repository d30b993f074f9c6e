#pragma once
// Named operators, functionals and lattice flows used by the tests, the
// acceptance suite and the fixtures.  Components: u = 0, v = 1.

#include <vector>

#include "ncham/diffop.hpp"

namespace ncham::cat {

OpEntry c_(const Element& f);  // l_f - r_f
OpEntry a_(const Element& f);  // l_f + r_f

DiffOp shift_skew();    // S - S^-1  (H_c)
DiffOp ru_minus_lu();   // r_u - l_u
// alpha c_u + beta c_{u^2} + gamma (l_{u^2} r_u - l_u r_{u^2})
DiffOp ultralocal_family(const Coeff& alpha, const Coeff& beta, const Coeff& gamma);
// l_{u u_p} r_{u_p u} S^p - S^-p l_{u_p u} r_{u u_p}
DiffOp H_p(int p);
DiffOp H0_sc();
DiffOp volterra();
DiffOp null_tails();    // two-component null operator with (S-1)^-1 tails
DiffOp toda2();
DiffOp H_tilde();
DiffOp H_alpha(const Coeff& alpha);
// H_tilde + [[0, beta r_{vu} + alpha], [-beta l_{vu} - alpha, 0]]
DiffOp H_check(const Coeff& alpha, const Coeff& beta);
DiffOp kaup();
DiffOp kontsevich();

// densities (single representatives of the functionals)
Element kaup_F();                                     // u1 v - u v
Element ablowitz_ladik_G(const Coeff& a, const Coeff& b);  // 1/2 (a u1 v - b u v1)
Element kontsevich_h();                               // 1/2 (u + v + u^-1 + v^-1 + u^-1 v^-1)

std::vector<Element> kaup_flow();
std::vector<Element> ablowitz_ladik_flow(const Coeff& a, const Coeff& b);
std::vector<Element> chen_lee_liu_flow();
std::vector<Element> kontsevich_flow();

}  // namespace ncham::cat
