#include <doctest.h>

#include "helpers.hpp"
#include "ncham/catalogue.hpp"
#include "ncham/doublebra.hpp"

using namespace th;

namespace {

Tensor3 cyc(const Tensor3& x) { return x + t_tau(x) + t_tau(t_tau(x)); }

Element one() { return Element(1); }

}  // namespace

TEST_CASE("lambda bracket: examples") {
  auto T = to_bracket(cat::shift_skew());
  LambdaSeries want;
  Tensor2 lr = tensor(one(), u()) + tensor(u(), one());
  want.add(1, lr);
  want.add(-1, -lr);
  CHECK(lambda_bracket(u(), u() * u(), T) == want);
  CHECK(lambda_bracket(u(1), u(), T) == times_lambda(lambda_bracket(u(), u(), T), -1));
  CHECK(lambda_bracket(u(), Element(5), T).is_zero());
}

TEST_CASE("lambda bracket: sesquilinearity, Leibniz, skewsymmetry on random inputs") {
  std::mt19937_64 rng(23);
  std::vector<DiffOp> ops{cat::shift_skew(), cat::H_p(1), cat::ultralocal_family(1, 2, 3), cat::kontsevich()};
  for (int i = 0; i < 50; ++i) {
    const DiffOp& K = ops[static_cast<size_t>(i) % ops.size()];
    int nv = K.size();
    auto T = to_bracket(K);
    bool ul = K.is_ultralocal();
    int sh = ul ? 0 : 1;
    auto a = random_element(rng, nv, 1, 2, 0, sh, true);
    auto b = random_element(rng, nv, 1, 2, 0, sh, true);
    auto c = random_element(rng, nv, 1, 2, 0, sh, false);
    auto ab = lambda_bracket(a, b, T);
    CHECK(lambda_bracket(shift(a, 1), b, T) == times_lambda(ab, -1));
    CHECK(lambda_bracket(a, shift(b, 1), T) == lambda_S(ab));
    LambdaSeries lhs = lambda_bracket(a, b * c, T), rhs;
    auto ac = lambda_bracket(a, c, T);
    for (auto& [p, x] : ac.terms()) rhs.add(p, t_lmul(b, x));
    for (auto& [p, x] : ab.terms()) rhs.add(p, t_rmul(x, c));
    CHECK(lhs == rhs);
    CHECK(lambda_bracket(b, a, T) == skew_image(ab));
    if (ul) {
      Tensor2 r = t_star_left(a, ul_bracket(b, c, T)) + t_star_right(ul_bracket(a, c, T), b);
      CHECK(ul_bracket(a * b, c, T) == r);
    }
  }
}

TEST_CASE("triple brackets") {
  auto P = to_bracket(cat::ultralocal_family(0, 0, 1));
  CHECK(triple_bracket(u(), u(), u(), P).is_zero());
  auto Q = to_bracket(cat::kontsevich());
  Tensor3 base = tensor(u() * u(), u(), one()) - tensor(u(), u() * u(), one());
  CHECK(triple_bracket(u(), u(), u(), Q) == cyc(base));
  CHECK(triple_bracket(u(), u(), u(), Q) == quasi_rhs(u(), u(), u()));
  Element uu = u() * u(), vu = v() * u(), uv = u() * v();
  Tensor3 uuv = tensor(one(), uu, v()) + tensor(v(), u(), u()) - tensor(u(), u(), v()) - tensor(v(), uu, one()) +
                tensor(vu, u(), one()) + tensor(u(), one(), uv) - tensor(one(), u(), uv) - tensor(vu, one(), u());
  CHECK(triple_bracket(u(), u(), v(), Q) == uuv);
  CHECK(triple_bracket(u(), u(), v(), Q) == quasi_rhs(u(), u(), v()));
  CHECK(triple_bracket(u(), u(), u(), to_bracket(DiffOp(1))).is_zero());
}

TEST_CASE("double Jacobi residual") {
  CHECK(double_jacobi_residual(to_bracket(cat::shift_skew())).empty());
  CHECK(double_jacobi_residual(to_bracket(cat::H_p(1))).empty());
  CHECK(double_jacobi_residual(to_bracket(cat::ultralocal_family(0, 0, 1))).empty());
  CHECK(!double_jacobi_residual(to_bracket(cat::kontsevich())).empty());
  CHECK(!double_jacobi_residual(to_bracket(cat::ultralocal_family(1, 1, 0))).empty());
}

TEST_CASE("quasi-Poisson fit") {
  auto k = quasi_poisson_fit(to_bracket(cat::kontsevich()));
  CHECK(k.ok);
  REQUIRE(k.alpha);
  CHECK(*k.alpha == Coeff(1));
  CHECK(quasi_poisson_residual(to_bracket(cat::kontsevich()), Coeff(1)).empty());
  auto f = quasi_poisson_fit(to_bracket(cat::ultralocal_family(1, 0, 1)));
  CHECK(f.ok);
  REQUIRE(f.alpha);
  // re-substitution of the fitted value
  CHECK(quasi_poisson_residual(to_bracket(cat::ultralocal_family(1, 0, 1)), *f.alpha).empty());
  CHECK(quasi_poisson_residual(to_bracket(cat::ultralocal_family(0, 0, 1)), Coeff(0)).empty());
  CHECK(!quasi_poisson_residual(to_bracket(cat::kontsevich()), Coeff(2)).empty());
}

TEST_CASE("functional bracket: examples") {
  PolyVector F = canonicalize(u() * u() * q(1, 2));
  CHECK(functional_poisson_bracket(F, F, cat::shift_skew()).is_zero());
  std::mt19937_64 rng(1);
  for (int i = 0; i < 5; ++i) {
    PolyVector A = canonicalize(random_element(rng, 1, 3, 3));
    CHECK(functional_poisson_bracket(A, A, cat::H_p(1)).is_zero());
  }
  // Kaup, F = tr(u1 v - u v), G = tr u: K dF is local, so {F,G} = -<dG, K dF>
  PolyVector KF = canonicalize(cat::kaup_F()), G = canonicalize(u());
  auto fg = functional_poisson_bracket(KF, G, cat::kaup());
  CHECK(fg == canonicalize(-apply(cat::kaup(), {variational_derivative(cat::kaup_F(), 0),
                                               variational_derivative(cat::kaup_F(), 1)})[0]));
  CHECK(fg.repr.str() == "u*u+u*v-u*u[1]-u[1]*v");
  CHECK(functional_poisson_bracket(G, KF, cat::kaup()) == canonicalize(-fg.repr));
}

TEST_CASE("functional bracket: skewsymmetry, Jacobi, well-posedness") {
  std::mt19937_64 rng(29);
  struct Case {
    DiffOp K;
    int sh;
  };
  std::vector<Case> cases{{cat::shift_skew(), 1}, {cat::H_p(1), 1}, {cat::ultralocal_family(1, 1, 1), 0},
                          {cat::kontsevich(), 0}};
  for (int i = 0; i < 12; ++i) {
    auto& c = cases[static_cast<size_t>(i) % cases.size()];
    int nv = c.K.size();
    auto f = random_element(rng, nv, 2, 3, 0, c.sh, c.sh == 0);
    auto g = random_element(rng, nv, 2, 2, 0, c.sh, false);
    auto h = random_element(rng, nv, 1, 2, 0, c.sh, false);
    PolyVector F = canonicalize(f), G = canonicalize(g), H = canonicalize(h);
    auto fg = functional_poisson_bracket(F, G, c.K);
    CHECK(functional_poisson_bracket(G, F, c.K) == canonicalize(-fg.repr));
    auto jac = functional_poisson_bracket(F, functional_poisson_bracket(G, H, c.K), c.K).repr +
               functional_poisson_bracket(G, functional_poisson_bracket(H, F, c.K), c.K).repr +
               functional_poisson_bracket(H, fg, c.K).repr;
    CHECK(canonicalize(jac).is_zero());
    CHECK(functional_bracket_lambda(f, g, to_bracket(c.K)) == fg);
    // the bracket only sees the class of f
    CHECK(functional_bracket_lambda(shift(f, 1) + g * h - h * g, g, to_bracket(c.K)) == fg);
  }
}
