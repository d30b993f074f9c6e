// Acceptance suite: one PASS/FAIL line per criterion, with wall time.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>

#include "helpers.hpp"
#include "ncham/catalogue.hpp"
#include "ncham/doublebra.hpp"
#include "ncham/dsl.hpp"
#include "ncham/oracle.hpp"
#include "ncham/verify.hpp"

using namespace th;
namespace fs = std::filesystem;
namespace orc = ncham::oracle;

namespace {

struct Ctx {
  std::vector<std::string> fails;
  void req(bool ok, const std::string& what) {
    if (!ok) fails.push_back(what);
  }
};

int failed_criteria = 0;

void criterion(int n, const std::string& title, double budget_s, const std::function<void(Ctx&)>& body) {
  Ctx c;
  auto t0 = std::chrono::steady_clock::now();
  try {
    body(c);
  } catch (const std::exception& e) {
    c.fails.push_back(std::string("exception: ") + e.what());
  }
  double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (s > budget_s) c.fails.push_back("over time budget " + std::to_string(budget_s) + " s");
  bool ok = c.fails.empty();
  if (!ok) ++failed_criteria;
  std::printf("%s  %2d  %-58s %8.2f s\n", ok ? "PASS" : "FAIL", n, title.c_str(), s);
  for (size_t i = 0; i < c.fails.size() && i < 8; ++i) std::printf("          - %s\n", c.fails[i].c_str());
  std::fflush(stdout);
}

Coeff P(const char* n) { return Coeff::param(param_id(n)); }

std::vector<std::string> strs(const std::vector<Coeff>& cs) {
  std::vector<std::string> r;
  for (auto& c : cs) r.push_back(c.str());
  return r;
}

bool poisson(const DiffOp& K) { return check_poisson(K).status == Status::Poisson; }

Rational rand_q(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> num(-5, 5), den(1, 3);
  return Rational(num(rng), den(rng));
}

PolyVector random_pv(std::mt19937_64& rng, int deg) {
  for (;;) {
    auto P = canonicalize(random_element(rng, 2, 2, 2, deg, 1, false));
    if (!P.is_zero()) return P;
  }
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

int main() {
  for (const char* n : {"alpha", "beta", "gamma", "a2", "b2", "g2"}) param_id(n);
  std::printf("criterion results (exact unless noted)\n");

  criterion(1, "S - S^-1 and r_u - l_u are Poisson", 2, [](Ctx& c) {
    c.req(poisson(cat::shift_skew()), "S - S^-1");
    c.req(poisson(cat::ru_minus_lu()), "r_u - l_u");
  });

  criterion(2, "ultralocal family: variety beta^2 - alpha*gamma", 10, [](Ctx& c) {
    Coeff a = P("alpha"), b = P("beta"), g = P("gamma");
    c.req(strs(parametric_conditions(cat::ultralocal_family(a, b, g))) ==
              std::vector<std::string>{"beta^2 - alpha*gamma"},
          "symbolic conditions");
    std::mt19937_64 rng(2024);
    for (int i = 0; i < 20; ++i) {
      Rational al = rand_q(rng), be = rand_q(rng), ga;
      bool on = i % 2 == 0;
      if (on) {
        if (al == 0) be = 0, ga = rand_q(rng);
        else ga = be * be / al;
      } else {
        do ga = rand_q(rng);
        while (be * be == al * ga);
      }
      bool got = poisson(cat::ultralocal_family(al, be, ga));
      c.req(got == on, "sample " + std::to_string(i) + (on ? " on" : " off") + " the variety");
    }
    Coeff a2 = P("a2"), b2 = P("b2"), g2 = P("g2");
    auto cc = compatibility_conditions(cat::ultralocal_family(a, b, g), cat::ultralocal_family(a2, b2, g2));
    Coeff want = b * b2 * Coeff(2) - a * g2 - g * a2;
    c.req(cc.size() == 1 && cc[0] == want.monic(), "symbolic compatibility condition");
    // points of the variety are s (1, t, t^2); the condition reads -s1 s2 (t1 - t2)^2
    for (int i = 0; i < 20; ++i) {
      Rational s1 = rand_q(rng), s2 = rand_q(rng), t1 = rand_q(rng), t2 = t1;
      if (s1 == 0) s1 = 1;
      if (s2 == 0) s2 = -2;
      bool on = i % 2 == 0;
      if (!on) t2 = t1 + Rational(1 + i, 3);
      auto K1 = cat::ultralocal_family(s1, Rational(s1 * t1), Rational(s1 * t1 * t1));
      auto K2 = cat::ultralocal_family(s2, Rational(s2 * t2), Rational(s2 * t2 * t2));
      bool got = check_compatible(K1, K2).status == Status::Compatible;
      c.req(got == on, "pair " + std::to_string(i) + (on ? " compatible" : " incompatible"));
    }
  });

  criterion(3, "order (-1,1): H_1, H_c Poisson, not compatible", 10, [](Ctx& c) {
    c.req(poisson(cat::H_p(1)), "H_1");
    c.req(poisson(cat::shift_skew()), "H_c");
    c.req(check_compatible(cat::H_p(1), cat::shift_skew()).status == Status::NotCompatible, "H_1 / H_c");
  });

  criterion(4, "H_p, p = 1..3, and random combinations", 30, [](Ctx& c) {
    for (int p = 1; p <= 3; ++p) c.req(poisson(cat::H_p(p)), "H_" + std::to_string(p));
    std::mt19937_64 rng(4);
    for (int i = 0; i < 4; ++i) {
      Rational c1 = rand_q(rng), c2 = rand_q(rng), c3 = rand_q(rng);
      DiffOp K = cat::H_p(1) * Coeff(c1) + cat::H_p(2) * Coeff(c2) + cat::H_p(3) * Coeff(c3);
      c.req(poisson(K), "combination " + std::to_string(i));
    }
  });

  criterion(5, "Volterra and H0_sc: Poisson with certificates", 60, [](Ctx& c) {
    for (auto& [name, K] : {std::pair{"H0_sc", cat::H0_sc()}, std::pair{"H_V", cat::volterra()}}) {
      auto v = check_poisson(K);
      c.req(v.status == Status::Poisson && v.certificate.has_value(), std::string(name) + " verdict");
      auto t = torsion(K);
      c.req(t.m.status == Membership::Zero && t.m.window <= 2, std::string(name) + " window");
      c.req(verify_certificate(prolong_raw(K, bivector_density(K)), t.m.cert), std::string(name) + " certificate");
    }
  });

  criterion(6, "two-component nonlocal operators and Toda", 300, [](Ctx& c) {
    c.req(poisson(cat::null_tails()), "null operator with tails");
    c.req(poisson(cat::H_tilde()), "H_tilde");
    c.req(poisson(cat::toda2()), "Toda second structure");
  });

  criterion(7, "H_alpha family, generic beta, Kaup", 300, [](Ctx& c) {
    for (long a : {-2L, 0L, 2L}) c.req(poisson(cat::H_alpha(Coeff(a))), "H_alpha at " + std::to_string(a));
    c.req(poisson(cat::H_alpha(P("alpha"))), "H_alpha symbolic");
    c.req(parametric_conditions(cat::H_alpha(P("alpha"))).empty(), "H_alpha conditions empty");
    c.req(strs(parametric_conditions(cat::H_check(P("alpha"), P("beta")))) ==
              std::vector<std::string>{"alpha*beta + 2*alpha", "beta^2 + 2*beta"},
          "generic beta conditions");
    c.req(poisson(cat::kaup()), "Kaup");
  });

  criterion(8, "lattice flows in Hamiltonian form", 30, [](Ctx& c) {
    Coeff a = P("alpha"), b = P("beta");
    auto ok = [](const Verdict& v) { return v.status == Status::HamiltonianFormOK; };
    c.req(ok(check_hamiltonian_form(cat::kaup(), cat::kaup_F(), cat::kaup_flow())), "Kaup");
    c.req(ok(check_hamiltonian_form(cat::H_alpha(2), cat::ablowitz_ladik_G(a, b), cat::ablowitz_ladik_flow(a, b))),
          "Ablowitz-Ladik");
    c.req(ok(check_hamiltonian_form(-cat::H_alpha(-2), cat::kaup_F() * q(1, 2), cat::chen_lee_liu_flow())),
          "Chen-Lee-Liu");
    c.req(flow_str(hamiltonian_flow(cat::kaup(), cat::kaup_F())) == "((u[1]-u)*(u+v), (u+v)*(v-v[-1]))",
          "Kaup flow text");
  });

  criterion(9, "Kontsevich: quasi-Poisson suite (f sampled)", 60, [](Ctx& c) {
    DiffOp K = cat::kontsevich();
    c.req(torsion(K).m.status == Membership::Residual, "torsion nonzero");
    auto f = quasi_poisson_fit(to_bracket(K));
    c.req(f.ok && f.alpha && *f.alpha == Coeff(1), "fitted alpha = 1");
    PolyVector Q = bivector_of(K);
    std::mt19937_64 rng(9);
    std::uniform_int_distribution<int> len(1, 4), pick(0, 3);
    int tested = 0;
    while (tested < 25) {
      Word w;
      int n = len(rng);
      for (int i = 0; i < n; ++i) {
        int k = pick(rng);
        w = word_concat(w, Word{k < 2 ? Letter::gen(k % 2) : Letter::inv(k % 2)});
      }
      PolyVector F = canonicalize(Element::word(w));
      if (F.is_zero() || w.empty()) continue;
      ++tested;
      c.req(quasi_residual_on_functional(Q, F).is_zero(), "[[Q,Q],f] for f = " + F.repr.str());
    }
    auto X = hamiltonian_vf(Q, canonicalize(cat::kontsevich_h()), 2);
    c.req(X == cat::kontsevich_flow(), "Hamiltonian vector field of h");
    c.req(lie_derivative(X, Q).is_zero(), "L_X Q = 0");
  });

  criterion(10, "structural property suites", 120, [](Ctx& c) {
    // torsion identity [P,P] = 2 pr P on local operators
    std::vector<DiffOp> local{cat::shift_skew(), cat::ru_minus_lu(), cat::H_p(1), cat::H_p(2), cat::H_p(3),
                              cat::kontsevich(), cat::ultralocal_family(1, 1, 1), cat::ultralocal_family(1, 2, 3)};
    for (size_t i = 0; i < local.size(); ++i) c.req(torsion(local[i]).cross_checked, "torsion identity #" + std::to_string(i));

    std::mt19937_64 rng(10);
    for (int i = 0; i < 50; ++i) {
      int da = i % 3, db = (i / 3) % 3, dc = (i / 9) % 3;
      auto A = random_pv(rng, da), B = random_pv(rng, db), C = random_pv(rng, dc);
      int e = (da - 1) * (db - 1);
      Coeff sg(e % 2 ? -1 : 1);
      c.req(schouten(B, A) == canonicalize(schouten(A, B).repr * (-sg)), "Schouten skew #" + std::to_string(i));
      auto rhs = schouten(schouten(A, B), C).repr + schouten(B, schouten(A, C)).repr * sg;
      c.req(schouten(A, schouten(B, C)) == canonicalize(rhs), "Schouten Jacobi #" + std::to_string(i));
    }

    std::vector<DiffOp> ops{cat::shift_skew(), cat::H_p(1), cat::H_p(2), cat::ultralocal_family(1, 2, 3),
                            cat::kontsevich()};
    for (int i = 0; i < 50; ++i) {
      const DiffOp& K = ops[static_cast<size_t>(i) % ops.size()];
      auto T = to_bracket(K);
      int nv = K.size(), sh = K.is_ultralocal() ? 0 : 1;
      auto a = random_element(rng, nv, 1, 2, 0, sh, true);
      auto b = random_element(rng, nv, 1, 2, 0, sh, true);
      auto d = random_element(rng, nv, 1, 2, 0, sh, false);
      auto ab = lambda_bracket(a, b, T);
      std::string tag = " #" + std::to_string(i);
      c.req(lambda_bracket(shift(a, 1), b, T) == times_lambda(ab, -1), "sesquilinearity (left)" + tag);
      c.req(lambda_bracket(a, shift(b, 1), T) == lambda_S(ab), "sesquilinearity (right)" + tag);
      LambdaSeries rhs;
      auto ad = lambda_bracket(a, d, T);
      for (auto& [p, x] : ad.terms()) rhs.add(p, t_lmul(b, x));
      for (auto& [p, x] : ab.terms()) rhs.add(p, t_rmul(x, d));
      c.req(lambda_bracket(a, b * d, T) == rhs, "Leibniz" + tag);
      c.req(lambda_bracket(b, a, T) == skew_image(ab), "skewsymmetry" + tag);
    }

    for (int i = 0; i < 20; ++i) {
      DiffOp K(2);
      for (int r = 0; r < 2; ++r)
        for (int s = 0; s < 2; ++s)
          K.at(r, s) = OpEntry::term(random_element(rng, 2, 2, 2, 0, 1, true), random_element(rng, 2, 1, 2), i % 5 - 2);
      c.req(is_zero_op(from_bracket(to_bracket(K)) - K), "operator/bracket round trip #" + std::to_string(i));
    }

    for (int i = 0; i < 50; ++i) {
      auto f = random_element(rng, 2, 3, 3, 0, 1, true);
      auto g = random_element(rng, 2, 1, 2, 0, 1, true);
      for (int k = 0; k < 2; ++k) {
        c.req(variational_derivative(shift(f, 1) - f, k).is_zero(), "delta of (S-1) image #" + std::to_string(i));
        c.req(variational_derivative(f * g - g * f, k).is_zero(), "delta of commutator #" + std::to_string(i));
      }
    }
  });

  criterion(11, "lattice oracle (rational exact, float <= 1e-8)", 120, [](Ctx& c) {
    const char* fx = std::getenv("NCHAM_FIXTURES");
    std::vector<std::pair<std::string, DiffOp>> certified;
    if (fx) {
      for (auto& e : fs::directory_iterator(fx)) {
        if (e.path().extension() != ".ncs") continue;
        auto s = dsl::parse(slurp(e.path()));
        for (auto& [name, K] : s.ops)
          if (K.is_local() && !K.has_params() && poisson(K))
            certified.emplace_back(e.path().stem().string() + ":" + name, K);
      }
    }
    c.req(certified.size() >= 5, "found " + std::to_string(certified.size()) + " certified local fixtures");
    std::uint64_t seed = 100;
    for (auto& [name, K] : certified) {
      auto r = orc::jacobi_trials(K, 10, seed++);
      c.req(r.passed == r.trials && r.worst_float_err <= 1e-8, name + ": " + r.first_failure);
    }
    std::mt19937_64 rng(11);
    orc::RandomSpec s;
    s.nvars = 2;
    s.inverses = true;
    for (int i = 0; i < 20; ++i) {
      auto p = orc::random_point(2, rng);
      auto F = orc::random_density(rng, s);
      std::vector<Element> X{orc::random_density(rng, s), orc::random_density(rng, s)};
      c.req(orc::directional_derivative_check(F, X, p).pass, "directional (rational) #" + std::to_string(i));
      c.req(orc::directional_derivative_check(F, X, p, orc::Mode::Float).pass, "directional (float) #" + std::to_string(i));
    }
  });

  std::printf("%d criteria failed\n", failed_criteria);
  return failed_criteria == 0 ? 0 : 1;
}
