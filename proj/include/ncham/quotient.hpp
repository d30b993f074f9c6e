#pragma once
// The quotient by shifts and graded commutators: canonical densities of
// local functionals / polyvectors, the nonlocal membership solver, and
// variational derivatives.

#include <string>
#include <vector>

#include "ncham/ncalg.hpp"

namespace ncham {

struct PolyVector {
  Element repr;  // canonical density
  int degree = 0;
  bool is_zero() const { return repr.is_zero(); }
  bool operator==(const PolyVector& o) const { return repr == o.repr; }
};

// Canonical word for one cyclic/shift class.  Returns false if the word is
// zero in the quotient (its orbit contains minus itself).  Local words only.
bool canonical_word(const Word& w, Word& out, int& sign);

// Canonical representative in F-hat of a nonlocal-free element.
PolyVector canonicalize(const Element& a);

// Only graded cyclic rotations (no shifts); used to verify certificates.
Element cyclic_class(const Element& a);

// A witness that a lies in (S-1)A + [A,A]:
//   a - sum_i c_i (S m_i - m_i)  vanishes modulo graded commutators.
struct Certificate {
  std::vector<std::pair<Coeff, Word>> relations;  // (c_i, m_i)
  int kernel_relations = 0;                       // of which from pure-nonlocal words
  int excursion = 0;  // how far the m_i reach outside the input's shift hull
  bool verified = false;
  std::string summary() const;
};

// Normal form modulo (S-1)-images of words containing local letters and
// graded commutators.  For nonlocal-free input this equals canonicalize.
// If cert is non-null, the shift relations used are appended.
Element normal_form(const Element& a, Certificate* cert = nullptr);

// weighted count of nonlocal letters (a symbol weighs 1 + weight of its seed)
int nonlocal_level(const Word& w);

struct Membership {
  enum Status { Zero, Residual, Undecided } status = Undecided;
  Element residual;  // reduced representative when status == Residual
  Certificate cert;  // when status == Zero
  int window = 0;    // window at which the verdict was reached
  std::string note;
};

constexpr int kDefaultWindow = 2;
constexpr int kWindowRetries = 4;
// default window, honouring NCHAM_WINDOW
int default_window();

Membership membership_reduce(const Element& a, int window = -1);

// Re-substitute a certificate: returns true iff a - sum c (Sm - m) == 0
// modulo graded commutators.
bool verify_certificate(const Element& a, const Certificate& c);

enum class Flavor { U, THETA };
Element variational_derivative(const Element& a, int comp, Flavor f = Flavor::U);

}  // namespace ncham
