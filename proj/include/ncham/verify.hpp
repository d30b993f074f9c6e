#pragma once
// Verdicts: skewsymmetry, Poisson, quasi-Poisson, compatibility,
// Hamiltonian form, parameter conditions.

#include <optional>
#include <string>
#include <vector>

#include "ncham/diffop.hpp"
#include "ncham/doublebra.hpp"
#include "ncham/schouten.hpp"

namespace ncham {

enum class Status {
  Skew,
  NotSkew,
  Poisson,
  NotPoisson,
  NotPoissonQuasi,  // torsion != 0 but the bracket is quasi-Poisson (alpha attached)
  QuasiPoisson,
  NotQuasi,
  Compatible,
  NotCompatible,
  HamiltonianFormOK,
  Mismatch,
  Inconclusive,  // nonlocal residual that did not reduce: neither verified nor disproved
  Undecided,     // membership window exhausted
};

std::string status_name(Status s);  // snake_case, as in reports
std::optional<Status> status_from_name(const std::string& s);

struct Verdict {
  Status status = Status::Undecided;
  std::optional<std::string> residual;
  std::optional<Coeff> alpha;
  std::vector<Coeff> conditions;
  std::optional<std::string> certificate;
  std::string note;
};

Verdict check_skew(const DiffOp& K, const Names& nm = Names{});
Verdict check_poisson(const DiffOp& K, int window = -1, const Names& nm = Names{});
// mixed torsion pr_{K1} P2 + pr_{K2} P1
Verdict check_compatible(const DiffOp& K1, const DiffOp& K2, int window = -1, const Names& nm = Names{});
// pre: ultralocal K (std::invalid_argument otherwise)
Verdict check_quasi_poisson(const DiffOp& K, const Names& nm = Names{});
// K dF compared literally with X (no quotient)
Verdict check_hamiltonian_form(const DiffOp& K, const Element& F, const std::vector<Element>& X,
                               const Names& nm = Names{});

// K applied to the variational derivative of the density F
std::vector<Element> hamiltonian_flow(const DiffOp& K, const Element& F);

// coefficients of the reduced torsion residual, monic and deduplicated;
// empty when the torsion vanishes identically in the parameters
std::vector<Coeff> parametric_conditions(const DiffOp& K, int window = -1);
std::vector<Coeff> compatibility_conditions(const DiffOp& K1, const DiffOp& K2, int window = -1);
std::vector<Coeff> conditions_of(const Element& residual);

// "(A)*(B)" where a rank-one split of the words exists, else the plain sum
std::string factor_str(const Element& e, const Names& nm = Names{});
std::string flow_str(const std::vector<Element>& X, const Names& nm = Names{});

}  // namespace ncham
