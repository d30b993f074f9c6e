#include <doctest.h>

#include "helpers.hpp"
#include "ncham/catalogue.hpp"
#include "ncham/verify.hpp"

using namespace th;

namespace {

// fix the parameter order before any argument-order surprises
[[maybe_unused]] const int kParams = (param_id("alpha"), param_id("beta"), param_id("gamma"));

Coeff P(const char* n) { return Coeff::param(param_id(n)); }

std::vector<std::string> strs(const std::vector<Coeff>& cs) {
  std::vector<std::string> r;
  for (auto& c : cs) r.push_back(c.str());
  return r;
}

}  // namespace

TEST_CASE("status names round-trip") {
  for (int s = 0; s <= static_cast<int>(Status::Undecided); ++s) {
    auto st = static_cast<Status>(s);
    CHECK(status_from_name(status_name(st)) == st);
  }
  CHECK(status_name(Status::NotPoissonQuasi) == "not_poisson_quasi");
  CHECK(!status_from_name("maybe"));
}

TEST_CASE("skew verdicts") {
  CHECK(check_skew(cat::shift_skew()).status == Status::Skew);
  auto v = check_skew(DiffOp::scalar(OpEntry::left(u())));
  CHECK(v.status == Status::NotSkew);
  CHECK(v.residual);
  CHECK(check_poisson(DiffOp::scalar(OpEntry::left(u()))).status == Status::NotSkew);
}

TEST_CASE("Poisson verdicts") {
  CHECK(check_poisson(cat::shift_skew()).status == Status::Poisson);
  CHECK(check_poisson(cat::ru_minus_lu()).status == Status::Poisson);
  CHECK(check_poisson(cat::H_p(1)).status == Status::Poisson);
  auto hv = check_poisson(cat::volterra());
  CHECK(hv.status == Status::Poisson);
  CHECK(hv.certificate);
  for (long a : {-2L, 0L, 2L, 7L}) CHECK(check_poisson(cat::H_alpha(Coeff(a))).status == Status::Poisson);
  auto k = check_poisson(cat::kontsevich());
  CHECK(k.status == Status::NotPoissonQuasi);
  CHECK(k.residual);
  REQUIRE(k.alpha);
  CHECK(*k.alpha == Coeff(1));
  CHECK(k.conditions.empty());
  auto n = check_poisson(cat::ultralocal_family(1, 1, 0));
  CHECK(n.status == Status::NotPoissonQuasi);
  // a perturbed nonlocal operator: residual that does not reduce
  DiffOp bad = cat::H0_sc() + DiffOp::scalar(cat::a_(u()).compose(cat::c_(u())));
  auto b = check_poisson(bad);
  CHECK(b.status == Status::Inconclusive);
  CHECK(!b.note.empty());
}

TEST_CASE("compatibility") {
  CHECK(check_compatible(cat::H_p(1), cat::H_p(2)).status == Status::Compatible);
  CHECK(check_compatible(cat::H_p(1), cat::shift_skew()).status == Status::NotCompatible);
  CHECK(check_compatible(cat::ultralocal_family(1, 1, 1), cat::ultralocal_family(2, 2, 2)).status ==
        Status::Compatible);
  CHECK(check_compatible(cat::ultralocal_family(1, 2, 4), cat::ultralocal_family(0, 0, 1)).status ==
        Status::NotCompatible);
  CHECK(check_compatible(cat::ultralocal_family(1, 0, 0), cat::ultralocal_family(0, 0, 1)).status ==
        Status::NotCompatible);
}

TEST_CASE("quasi-Poisson verdicts") {
  auto k = check_quasi_poisson(cat::kontsevich());
  CHECK(k.status == Status::QuasiPoisson);
  REQUIRE(k.alpha);
  CHECK(*k.alpha == Coeff(1));
  auto f = check_quasi_poisson(cat::ultralocal_family(P("alpha"), P("beta"), P("gamma")));
  CHECK(f.status == Status::QuasiPoisson);
  REQUIRE(f.alpha);
  CHECK(f.alpha->str() == "beta^2 - alpha*gamma");
  CHECK_THROWS_AS(check_quasi_poisson(cat::shift_skew()), std::invalid_argument);
}

TEST_CASE("parametric conditions") {
  auto c = parametric_conditions(cat::ultralocal_family(P("alpha"), P("beta"), P("gamma")));
  CHECK(strs(c) == std::vector<std::string>{"beta^2 - alpha*gamma"});
  CHECK(parametric_conditions(cat::H_p(1)).empty());
  CHECK(parametric_conditions(cat::H_alpha(P("alpha"))).empty());
  auto h = parametric_conditions(cat::H_check(P("alpha"), P("beta")));
  CHECK(strs(h) == std::vector<std::string>{"alpha*beta + 2*alpha", "beta^2 + 2*beta"});
  auto cc = compatibility_conditions(cat::ultralocal_family(P("alpha"), P("beta"), P("gamma")),
                                     cat::ultralocal_family(P("a2"), P("b2"), P("g2")));
  REQUIRE(cc.size() == 1);
  Coeff want = P("beta") * P("b2") * Coeff(2) - P("alpha") * P("g2") - P("gamma") * P("a2");
  CHECK(cc[0] == want.monic());
}

TEST_CASE("Hamiltonian flows") {
  auto kf = hamiltonian_flow(cat::kaup(), cat::kaup_F());
  CHECK(flow_str(kf) == "((u[1]-u)*(u+v), (u+v)*(v-v[-1]))");
  CHECK(check_hamiltonian_form(cat::kaup(), cat::kaup_F(), cat::kaup_flow()).status == Status::HamiltonianFormOK);
  Coeff a = P("alpha"), b = P("beta");
  CHECK(check_hamiltonian_form(cat::H_alpha(2), cat::ablowitz_ladik_G(a, b), cat::ablowitz_ladik_flow(a, b)).status ==
        Status::HamiltonianFormOK);
  CHECK(check_hamiltonian_form(-cat::H_alpha(-2), cat::kaup_F() * q(1, 2), cat::chen_lee_liu_flow()).status ==
        Status::HamiltonianFormOK);
  CHECK(check_hamiltonian_form(cat::kontsevich(), cat::kontsevich_h(), cat::kontsevich_flow()).status ==
        Status::HamiltonianFormOK);
  auto wrong = cat::kaup_flow();
  wrong[1] = -wrong[1];
  CHECK(check_hamiltonian_form(cat::kaup(), cat::kaup_F(), wrong).status == Status::Mismatch);
}

TEST_CASE("factor printing") {
  CHECK(factor_str((u(1) - u()) * (u() + v())) == "(u[1]-u)*(u+v)");
  CHECK(factor_str(u() * v()) == "u*v");
  CHECK(factor_str(Element()) == "0");
}
