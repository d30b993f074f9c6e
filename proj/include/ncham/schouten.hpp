#pragma once
// Double Schouten (lambda) brackets, the Schouten bracket on polyvectors,
// prolongation pr_{K theta}, torsion and Hamiltonian vector fields.

#include <vector>

#include "ncham/diffop.hpp"
#include "ncham/quotient.hpp"

namespace ncham {

// [[a_lambda b]], graded, degree -1
LambdaSeries double_schouten(const Element& a, const Element& b);
// shift-free elements: the lambda^0 coefficient of the above
Tensor2 double_schouten_ul(const Element& a, const Element& b);

// [A, B] = int tr m [[A_lambda B]] at lambda = 1 (local densities only)
PolyVector schouten(const PolyVector& A, const PolyVector& B);
PolyVector schouten(const Element& a, const Element& b);

// 1-vector with characteristics X: int tr sum theta_i X^i
PolyVector vector_field(const std::vector<Element>& X);
// characteristics of a 1-vector (theta variational derivatives)
std::vector<Element> characteristics(const PolyVector& V, int n);

// pr_{K theta} a before reduction; symbols rho get fresh symbols with
// seed pr(seed(rho))
Element prolong_raw(const DiffOp& K, const Element& a);
Membership prolong(const DiffOp& K, const PolyVector& B);
Membership prolong(const DiffOp& K, const Element& density);

struct Torsion {
  Membership m;          // reduced pr_{K theta} P
  bool cross_checked = false;  // [P,P] == 2 pr P verified (local only)
};
// pre: K skewsymmetric.  Local K: exact, with the [P,P] cross-check.
Torsion torsion(const DiffOp& K);
// pr_{K1} P2 + pr_{K2} P1
Membership mixed_torsion(const DiffOp& K1, const DiffOp& K2);

// X_F = -[P, F]
std::vector<Element> hamiltonian_vf(const PolyVector& P, const PolyVector& F, int n);
PolyVector poisson_differential(const PolyVector& P, const PolyVector& B);
// [[Q,Q], f]
PolyVector quasi_residual_on_functional(const PolyVector& Q, const PolyVector& f);
// L_X Q = [X, Q]
PolyVector lie_derivative(const std::vector<Element>& X, const PolyVector& Q);

}  // namespace ncham
