#include <doctest.h>

#include <cmath>

#include "helpers.hpp"
#include "ncham/catalogue.hpp"
#include "ncham/doublebra.hpp"
#include "ncham/oracle.hpp"

using namespace th;
namespace orc = ncham::oracle;

namespace {

Rational trace(const orc::QMat& m) {
  Rational t = 0;
  for (int i = 0; i < m.n; ++i) t += m(i, i);
  return t;
}

}  // namespace

TEST_CASE("evaluation on the lattice") {
  std::mt19937_64 rng(1);
  auto p = orc::random_point(2, rng, 3, 3);
  CHECK(orc::eval_functional(u(), p) == trace(p.at(0, 0)) + trace(p.at(0, 1)) + trace(p.at(0, 2)));
  CHECK(orc::eval_functional(u() * v(1) - v(1) * u(), p) == 0);
  auto f = u() * v(1) * ui(-1);
  CHECK(orc::eval_functional(shift(f, 1) - f, p) == 0);
  // u u^-1 = 1 at every site
  auto m = orc::eval_density(u() * ui() * Coeff(1), p, 1);
  CHECK(trace(m) == 3);
  CHECK(std::abs(orc::eval_functional_float(u() * u(1), p) - orc::eval_functional(u() * u(1), p).get_d()) < 1e-10);
}

TEST_CASE("directional derivative checks") {
  std::mt19937_64 rng(2);
  auto p = orc::random_point(1, rng);
  CHECK(orc::directional_derivative_check(u() * u(1), {u() * u()}, p).pass);
  CHECK(orc::directional_derivative_check(u() * u(1), {u() * u()}, p, orc::Mode::Float).pass);
  CHECK(orc::directional_derivative_check(Element(4), {u()}, p).pass);
  std::vector<Element> bad{u(1) + u(-1) + u()};
  CHECK(!orc::directional_derivative_check(u() * u(1), {u() * u()}, p, orc::Mode::Rational, &bad).pass);
  CHECK(!orc::directional_derivative_check(u() * u(1), {u() * u()}, p, orc::Mode::Float, &bad).pass);
  auto p2 = orc::random_point(2, rng);
  CHECK(orc::directional_derivative_check(cat::kontsevich_h(), {u() * v(1), v()}, p2).pass);
}

TEST_CASE("symbolic brackets agree with the numeric ones") {
  std::mt19937_64 rng(3);
  orc::RandomSpec s;
  for (int i = 0; i < 20; ++i) {
    const DiffOp K = i % 2 ? cat::H_p(1) : cat::shift_skew();
    auto p = orc::random_point(1, rng);
    auto A = orc::random_density(rng, s), B = orc::random_density(rng, s);
    auto sym = functional_poisson_bracket(canonicalize(A), canonicalize(B), K);
    Rational num = orc::numeric_bracket(K, A, B, p);
    CHECK(orc::eval_functional(sym.repr, p) == num);
    CHECK(std::abs(orc::numeric_bracket_float(K, A, B, p) - num.get_d()) <= 1e-10 * std::max(1.0, std::abs(num.get_d())));
  }
}

TEST_CASE("Jacobi on the lattice") {
  std::mt19937_64 rng(4);
  orc::RandomSpec s;
  auto p = orc::random_point(1, rng);
  auto A = orc::random_density(rng, s), B = orc::random_density(rng, s), C = orc::random_density(rng, s);
  CHECK(orc::numeric_bracket_jacobi(cat::H_p(1), A, B, C, p).pass);
  CHECK(orc::numeric_bracket_jacobi(cat::H_p(1), A, B, C, p, orc::Mode::Float).pass);
  CHECK(!orc::numeric_bracket_jacobi(DiffOp::scalar(OpEntry::left(u())), A, B, C, p).pass);

  auto r = orc::jacobi_trials(cat::kontsevich(), 5, 7);
  CHECK(r.passed == r.trials);
  auto ok = orc::jacobi_trials(cat::ultralocal_family(0, 0, 1), 5, 8);
  CHECK(ok.passed == ok.trials);
  DiffOp W = DiffOp::scalar(OpEntry::term(u() * u(), u(), 1));
  auto bad = orc::jacobi_trials(W - adjoint(W), 5, 9);
  CHECK(bad.passed < bad.trials);
  CHECK_THROWS(orc::jacobi_trials(cat::kaup(), 1, 1));
}
