#pragma once
// Difference operators: local part sum l_L r_R S^p, weakly nonlocal tails
// col (S-1)^{-1} row, adjoints, application, bivectors, lambda-bracket tables.

#include <string>
#include <vector>

#include "ncham/ncalg.hpp"
#include "ncham/quotient.hpp"

namespace ncham {

// One scalar entry: power p -> sum L (x) R, acting as h -> sum L (S^p h) R.
class OpEntry {
 public:
  OpEntry() = default;
  static OpEntry shift_op(int p);                         // S^p
  static OpEntry scalar(const Coeff& c);                  // c * 1
  static OpEntry left(const Element& f);                  // l_f
  static OpEntry right(const Element& f);                 // r_f
  static OpEntry term(const Element& L, const Element& R, int p);

  const std::map<int, Tensor2>& terms() const { return s_.terms(); }
  bool is_zero() const { return s_.is_zero(); }
  void add(int p, const Tensor2& t) { s_.add(p, t); }

  OpEntry operator-() const;
  OpEntry& operator+=(const OpEntry& o);
  OpEntry& operator-=(const OpEntry& o);
  OpEntry& operator*=(const Coeff& c);
  friend OpEntry operator+(OpEntry a, const OpEntry& b) { return a += b; }
  friend OpEntry operator-(OpEntry a, const OpEntry& b) { return a -= b; }
  friend OpEntry operator*(OpEntry a, const Coeff& c) { return a *= c; }
  bool operator==(const OpEntry& o) const { return s_ == o.s_; }

  OpEntry compose(const OpEntry& o) const;  // (this o other)
  OpEntry adjoint() const;
  Element apply(const Element& h) const;
  OpEntry subst_params(const std::map<int, Rational>& at) const;
  bool has_params() const;

  // operator with the S powers moved out: returns this = sum_p M_p S^p
  int min_power() const;
  int max_power() const;
  bool ultralocal() const;  // only p = 0 and unshifted coefficients

  std::string str(const Names& nm = Names{}) const;  // DSL syntax

 private:
  Series<Tensor2> s_;
};

enum class Tail { INV1, SINV1 };  // (S-1)^{-1}, S(S-1)^{-1}

struct NonlocalTerm {
  std::vector<OpEntry> col;  // applied after the tail
  Tail tail = Tail::INV1;
  std::vector<OpEntry> row;  // applied before the tail
};

class DiffOp {
 public:
  DiffOp() = default;
  explicit DiffOp(int n);
  static DiffOp scalar(const OpEntry& e);

  int size() const { return n_; }
  OpEntry& at(int i, int j) { return local_[static_cast<size_t>(i * n_ + j)]; }
  const OpEntry& at(int i, int j) const { return local_[static_cast<size_t>(i * n_ + j)]; }
  const std::vector<NonlocalTerm>& nonlocal() const { return nl_; }
  void add_nonlocal(NonlocalTerm t);

  bool is_local() const { return nl_.empty(); }
  bool is_ultralocal() const;
  bool has_params() const;
  // order bounds (N, M) of the local part
  std::pair<int, int> order() const;

  DiffOp operator-() const;
  DiffOp& operator+=(const DiffOp& o);
  DiffOp& operator-=(const DiffOp& o);
  DiffOp& operator*=(const Coeff& c);
  friend DiffOp operator+(DiffOp a, const DiffOp& b) { return a += b; }
  friend DiffOp operator-(DiffOp a, const DiffOp& b) { return a -= b; }
  friend DiffOp operator*(DiffOp a, const Coeff& c) { return a *= c; }

  DiffOp subst_params(const std::map<int, Rational>& at) const;

  // S(S-1)^{-1} = 1 + (S-1)^{-1}; col entries made S-free (S moved to row)
  DiffOp normalized_tails() const;

  std::string str(const Names& nm = Names{}) const;  // DSL syntax

 private:
  int n_ = 0;
  std::vector<OpEntry> local_;
  std::vector<NonlocalTerm> nl_;
};

DiffOp adjoint(const DiffOp& K);
bool is_skewsymmetric(const DiffOp& K);
// K + K^dagger in normalized form (zero iff skew, up to the sufficient test
// on nonlocal tails described in the README)
DiffOp skew_defect(const DiffOp& K);
bool is_zero_op(const DiffOp& K);

std::vector<Element> apply(const DiffOp& K, const std::vector<Element>& h);
std::vector<Element> theta_vector(int n);
std::vector<Element> apply_theta(const DiffOp& K);  // K Theta

// raw density 1/2 sum_i theta_i (K Theta)^i
Element bivector_density(const DiffOp& K);
PolyVector bivector_of(const DiffOp& K);

// {{u^i_lambda u^j}} table, (i, j) -> series
struct BracketTable {
  int n = 0;
  std::vector<LambdaSeries> t;  // row-major (i, j)
  const LambdaSeries& at(int i, int j) const { return t[static_cast<size_t>(i * n + j)]; }
  LambdaSeries& at(int i, int j) { return t[static_cast<size_t>(i * n + j)]; }
  bool ultralocal() const;
};

BracketTable to_bracket(const DiffOp& K);
DiffOp from_bracket(const BracketTable& T);

}  // namespace ncham
