#pragma once
// Numeric cross-check on a periodic lattice of square matrices: words are
// matrix products, shifts translate sites, int tr is the site sum of traces.
// Local operators only.

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "ncham/diffop.hpp"

namespace ncham::oracle {

enum class Mode { Rational, Float };

// dense N x N over mpq
struct QMat {
  int n = 0;
  std::vector<Rational> a;
  explicit QMat(int n_ = 0) : n(n_), a(static_cast<size_t>(n_ * n_)) {}
  Rational& operator()(int i, int j) { return a[static_cast<size_t>(i * n + j)]; }
  const Rational& operator()(int i, int j) const { return a[static_cast<size_t>(i * n + j)]; }
};

struct LatticePoint {
  int M = 4;      // sites
  int N = 3;      // matrix size
  int nvars = 1;
  std::vector<std::vector<QMat>> val;  // [component][site]
  std::vector<std::vector<QMat>> inv;  // inverses, same layout
  const QMat& at(int comp, int site) const;
  const QMat& inv_at(int comp, int site) const;
};

// entries uniform rationals in [-2, 2] (denominators up to 4); matrices
// are resampled until invertible
LatticePoint random_point(int nvars, std::mt19937_64& rng, int M = 4, int N = 3);

// density evaluated at a site (theta- and nonlocal-free, parameter-free)
QMat eval_density(const Element& a, const LatticePoint& p, int site);
// sum over sites of the trace
Rational eval_functional(const Element& a, const LatticePoint& p);
double eval_functional_float(const Element& a, const LatticePoint& p);

// matrix-level gradient: d int tr a [X] = sum_n tr(G_n^i X^i_n)
std::vector<std::vector<QMat>> gradient(const Element& a, const LatticePoint& p);

struct Check {
  bool pass = false;
  double err = 0;  // relative error (0 in rational mode when passing)
  std::string detail;
};

// int tr sum dF_i X^i (symbolic variational derivative) against the
// derivative of F along X: dual numbers (rational) or a five-point central
// difference with the step scaled to the inverses (float, 1e-8 relative)
Check directional_derivative_check(const Element& F, const std::vector<Element>& X, const LatticePoint& p,
                                   Mode mode = Mode::Rational, const std::vector<Element>* dF_override = nullptr);

// {A,B} computed from matrix gradients and the operator acting on matrix fields
Rational numeric_bracket(const DiffOp& K, const Element& A, const Element& B, const LatticePoint& p);
double numeric_bracket_float(const DiffOp& K, const Element& A, const Element& B, const LatticePoint& p);

// antisymmetry and the cyclic Jacobi sum, inner brackets symbolic, outer
// brackets numeric; also compares the symbolic {A,B} with the numeric one
Check numeric_bracket_jacobi(const DiffOp& K, const Element& A, const Element& B, const Element& C,
                             const LatticePoint& p, Mode mode = Mode::Rational);

struct RandomSpec {
  int nvars = 1;
  int min_len = 2;
  int max_len = 3;
  int max_shift = 1;
  int terms = 3;
  bool inverses = false;
};
Element random_density(std::mt19937_64& rng, const RandomSpec& s);

struct TrialsReport {
  int trials = 0;
  int passed = 0;
  double worst_float_err = 0;
  std::string first_failure;
};
// trials with random triples; M = 1 for ultralocal operators
TrialsReport jacobi_trials(const DiffOp& K, int trials, std::uint64_t seed);

}  // namespace ncham::oracle
