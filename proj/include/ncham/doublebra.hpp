#pragma once
// Multiplicative double lambda-brackets from a generator table, triple
// brackets, double Jacobi and quasi-Poisson residuals, functional brackets.

#include <array>
#include <optional>
#include <vector>

#include "ncham/diffop.hpp"
#include "ncham/quotient.hpp"

namespace ncham {

// {{a_lambda b}} by the master formula; a, b theta-free
LambdaSeries lambda_bracket(const Element& a, const Element& b, const BracketTable& T);
// ultralocal double bracket {{a, b}} (lambda^0 part; T must be ultralocal)
Tensor2 ul_bracket(const Element& a, const Element& b, const BracketTable& T);

// {{a,b,c}} = {{a,{{b,c}}}}_L + tau {{b,{{c,a}}}}_L + tau^2 {{c,{{a,b}}}}_L
Tensor3 triple_bracket(const Element& a, const Element& b, const Element& c, const BracketTable& T);

struct JacobiTerm {
  std::array<int, 3> idx{};  // generator triple (a, b, c)
  LambdaMuSeries r;          // (lambda power, mu power) -> tensor
};
// nonzero residuals of the double Jacobi identity over generator triples
std::vector<JacobiTerm> double_jacobi_residual(const BracketTable& T);
std::string jacobi_str(const std::vector<JacobiTerm>& r, const Names& nm = Names{});

// right-hand side of the quasi-Poisson identity with alpha = 1
Tensor3 quasi_rhs(const Element& a, const Element& b, const Element& c);

struct QuasiFit {
  bool ok = false;
  std::optional<Coeff> alpha;          // fitted value (when some rhs coefficient is constant)
  std::vector<std::pair<std::array<int, 3>, Tensor3>> residual;  // {{a,b,c}} - alpha rhs, nonzero triples
  std::string note;
};
// pre: ultralocal table
QuasiFit quasi_poisson_fit(const BracketTable& T);
std::vector<std::pair<std::array<int, 3>, Tensor3>> quasi_poisson_residual(const BracketTable& T,
                                                                           const Coeff& alpha);

// {F, G} = int tr dF . K dG; for local K also -int tr m {{f_lambda g}} at
// lambda = 1, and the two are required to agree.
PolyVector functional_poisson_bracket(const PolyVector& F, const PolyVector& G, const DiffOp& K);
// lambda route only
PolyVector functional_bracket_lambda(const Element& f, const Element& g, const BracketTable& T);

}  // namespace ncham
