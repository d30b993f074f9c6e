#include <doctest.h>

#include "helpers.hpp"
#include "ncham/catalogue.hpp"
#include "ncham/schouten.hpp"

using namespace th;

namespace {

Element one() { return Element(1); }
int sgn(int e) { return e % 2 ? -1 : 1; }

PolyVector random_pv(std::mt19937_64& rng, int deg) {
  for (;;) {
    auto P = canonicalize(random_element(rng, 2, 2, 2, deg, 1, false));
    if (!P.is_zero()) return P;
  }
}

}  // namespace

TEST_CASE("double Schouten bracket on generators") {
  CHECK(double_schouten_ul(t(), u()) == tensor(one(), one()));
  CHECK(double_schouten_ul(z(), v()) == tensor(one(), one()));
  CHECK(double_schouten_ul(t(), v()).is_zero());
  CHECK(double_schouten_ul(t(), t()).is_zero());
  CHECK(double_schouten_ul(u() * v(), v() * u()).is_zero());
  CHECK(double_schouten(u(1), u() * v()).is_zero());
}

TEST_CASE("Schouten bracket: vector fields and functionals") {
  std::mt19937_64 rng(37);
  for (int i = 0; i < 15; ++i) {
    std::vector<Element> X{random_element(rng, 2, 2, 2), random_element(rng, 2, 2, 2)};
    std::vector<Element> Y{random_element(rng, 2, 2, 2), random_element(rng, 2, 2, 2)};
    auto f = random_element(rng, 2, 2, 3);
    auto g = random_element(rng, 2, 2, 3);
    CHECK(schouten(vector_field(X), canonicalize(f)) == canonicalize(apply_evolutionary(X, f)));
    CHECK(schouten(vector_field(X), vector_field(Y)) == vector_field(commutator_vf(X, Y)));
    CHECK(schouten(canonicalize(f), canonicalize(g)).is_zero());
    CHECK(characteristics(vector_field(X), 2) == std::vector<Element>{X[0], X[1]});
  }
}

TEST_CASE("Schouten bracket: graded skewsymmetry and Jacobi") {
  std::mt19937_64 rng(41);
  for (int i = 0; i < 15; ++i) {
    int da = i % 3, db = (i / 3) % 3, dc = (i + 1) % 2;
    auto A = random_pv(rng, da), B = random_pv(rng, db), C = random_pv(rng, dc);
    int e = (da - 1) * (db - 1);
    CHECK(schouten(B, A) == canonicalize(schouten(A, B).repr * Coeff(-sgn(e))));
    auto lhs = schouten(A, schouten(B, C));
    auto rhs = schouten(schouten(A, B), C).repr + schouten(B, schouten(A, C)).repr * Coeff(sgn(e));
    CHECK(lhs == canonicalize(rhs));
  }
}

TEST_CASE("prolongation") {
  CHECK(prolong(cat::ru_minus_lu(), canonicalize(u() * t() * t())).status == Membership::Zero);
  CHECK(prolong(cat::shift_skew(), canonicalize(t() * t(1))).status == Membership::Zero);
  auto m = prolong(cat::H0_sc(), bivector_density(cat::H0_sc()));
  CHECK(m.status == Membership::Zero);
  CHECK(verify_certificate(prolong_raw(cat::H0_sc(), bivector_density(cat::H0_sc())), m.cert));
}

TEST_CASE("torsion") {
  auto hc = torsion(cat::shift_skew());
  CHECK(hc.m.status == Membership::Zero);
  CHECK(hc.cross_checked);
  auto ul = torsion(cat::ultralocal_family(0, 0, 1));
  CHECK(ul.m.status == Membership::Zero);
  auto ko = torsion(cat::kontsevich());
  CHECK(ko.m.status == Membership::Residual);
  CHECK(ko.cross_checked);
  // [P,P] = 2 pr P on local operators
  for (auto& K : {cat::ru_minus_lu(), cat::H_p(1), cat::H_p(2), cat::kontsevich(), cat::ultralocal_family(1, 1, 0)}) {
    PolyVector P = bivector_of(K);
    auto pr = prolong(K, P);
    Element pp = schouten(P, P).repr;
    if (pr.status == Membership::Zero) CHECK(canonicalize(pp).is_zero());
    else CHECK(canonicalize(pp) == canonicalize(pr.residual * Coeff(2)));
  }
}

TEST_CASE("mixed torsion") {
  CHECK(mixed_torsion(cat::H_p(1), cat::H_p(2)).status == Membership::Zero);
  CHECK(mixed_torsion(cat::H_p(1), cat::shift_skew()).status == Membership::Residual);
}

TEST_CASE("Hamiltonian vector fields") {
  PolyVector Q = bivector_of(cat::kontsevich());
  CHECK(hamiltonian_vf(Q, canonicalize(cat::kontsevich_h()), 2) == cat::kontsevich_flow());
  auto zero = hamiltonian_vf(Q, canonicalize(Element(3)), 2);
  CHECK((zero[0].is_zero() && zero[1].is_zero()));
  std::mt19937_64 rng(43);
  for (auto& K : {cat::shift_skew(), cat::H_p(1), cat::ru_minus_lu()}) {
    auto f = random_element(rng, 1, 3, 3);
    auto X = hamiltonian_vf(bivector_of(K), canonicalize(f), 1);
    auto Y = apply(K, {variational_derivative(f, 0)});
    CHECK(canonicalize(X[0] - Y[0]).is_zero());
  }
}

TEST_CASE("Poisson differential") {
  PolyVector P = bivector_of(cat::shift_skew());
  CHECK(poisson_differential(P, canonicalize(u())).is_zero());
  CHECK(poisson_differential(P, PolyVector{}).is_zero());
  std::mt19937_64 rng(47);
  for (auto& K : {cat::shift_skew(), cat::H_p(1), cat::ru_minus_lu()}) {
    PolyVector PK = bivector_of(K);
    for (int d = 0; d < 2; ++d) {
      auto B = canonicalize(random_element(rng, 1, 2, 3, d, 1, false));
      CHECK(poisson_differential(PK, poisson_differential(PK, B)).is_zero());
    }
  }
}

TEST_CASE("quasi-Poisson residual on functionals") {
  PolyVector Q = bivector_of(cat::kontsevich());
  CHECK(!schouten(Q, Q).is_zero());
  CHECK(quasi_residual_on_functional(Q, canonicalize(u() * v())).is_zero());
  CHECK(quasi_residual_on_functional(Q, canonicalize(ui() * v() * v())).is_zero());
  auto X = hamiltonian_vf(Q, canonicalize(cat::kontsevich_h()), 2);
  CHECK(lie_derivative(X, Q).is_zero());
  PolyVector P = bivector_of(cat::H_p(1));
  CHECK(quasi_residual_on_functional(P, canonicalize(u() * u(1) * u(1))).is_zero());
}
