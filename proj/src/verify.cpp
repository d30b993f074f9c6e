#include "ncham/verify.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

namespace ncham {

namespace {

const std::vector<std::pair<Status, const char*>> kNames = {
    {Status::Skew, "skew"},
    {Status::NotSkew, "not_skew"},
    {Status::Poisson, "poisson"},
    {Status::NotPoisson, "not_poisson"},
    {Status::NotPoissonQuasi, "not_poisson_quasi"},
    {Status::QuasiPoisson, "quasi_poisson"},
    {Status::NotQuasi, "not_quasi"},
    {Status::Compatible, "compatible"},
    {Status::NotCompatible, "not_compatible"},
    {Status::HamiltonianFormOK, "hamiltonian_form_ok"},
    {Status::Mismatch, "mismatch"},
    {Status::Inconclusive, "inconclusive"},
    {Status::Undecided, "undecided"},
};

std::string quasi_residual_str(const std::vector<std::pair<std::array<int, 3>, Tensor3>>& r, const Names& nm) {
  std::string s;
  for (auto& [idx, t] : r) {
    if (!s.empty()) s += "; ";
    s += "{{" + nm.var(idx[0]) + "," + nm.var(idx[1]) + "," + nm.var(idx[2]) + "}} - alpha*rhs = " + t.str(nm);
  }
  return s;
}

const char* kNonlocalResidualNote =
    "unreduced residual of a nonlocal operator: not verified, but not disproved either";

// shared tail of check_poisson / check_compatible
Verdict from_membership(const Membership& m, bool local, Status yes, Status no, const Names& nm) {
  Verdict v;
  switch (m.status) {
    case Membership::Zero:
      v.status = yes;
      v.certificate = m.cert.summary() + ", window " + std::to_string(m.window);
      break;
    case Membership::Residual:
      v.residual = m.residual.str(nm);
      if (m.residual.has_params()) v.conditions = conditions_of(m.residual);
      if (local) {
        v.status = no;
      } else {
        v.status = Status::Inconclusive;
        v.note = kNonlocalResidualNote;
      }
      break;
    case Membership::Undecided:
      v.status = Status::Undecided;
      v.note = m.note;
      break;
  }
  if (!m.note.empty() && v.note.empty()) v.note = m.note;
  return v;
}

}  // namespace

std::string status_name(Status s) {
  for (auto& [k, n] : kNames)
    if (k == s) return n;
  return "?";
}

std::optional<Status> status_from_name(const std::string& s) {
  for (auto& [k, n] : kNames)
    if (s == n) return k;
  return std::nullopt;
}

Verdict check_skew(const DiffOp& K, const Names& nm) {
  Verdict v;
  DiffOp d = skew_defect(K);
  if (is_zero_op(d)) {
    v.status = Status::Skew;
  } else {
    v.status = Status::NotSkew;
    v.residual = d.str(nm);
    v.note = "K + K^dagger shown";
  }
  if (!K.is_local()) v.note += (v.note.empty() ? "" : "; ") + std::string("tails compared after normalization");
  return v;
}

Verdict check_poisson(const DiffOp& K, int window, const Names& nm) {
  Verdict sk = check_skew(K, nm);
  if (sk.status != Status::Skew) {
    sk.note = "not skewsymmetric, torsion not computed";
    return sk;
  }
  Torsion t = torsion(K);
  Membership m = t.m;
  // the window only matters for non-residual verdicts
  if (window >= 0 && window != default_window() && m.status != Membership::Residual)
    m = membership_reduce(prolong_raw(K, bivector_density(K)), window);
  Verdict v = from_membership(m, K.is_local(), Status::Poisson, Status::NotPoisson, nm);
  if (t.cross_checked && v.certificate) *v.certificate += ", [P,P] = 2 pr P cross-checked";
  if (v.status == Status::NotPoisson && K.is_ultralocal()) {
    QuasiFit q = quasi_poisson_fit(to_bracket(K));
    if (q.ok && q.alpha && !q.alpha->is_zero()) {
      v.status = Status::NotPoissonQuasi;
      v.alpha = q.alpha;
    }
  }
  if (K.has_params() && v.status == Status::NotPoisson)
    v.note = "residual is generic in the parameters; see conditions";
  return v;
}

Verdict check_compatible(const DiffOp& K1, const DiffOp& K2, int window, const Names& nm) {
  if (K1.size() != K2.size()) throw std::invalid_argument("compatibility of operators of different sizes");
  for (const DiffOp* K : {&K1, &K2}) {
    Verdict sk = check_skew(*K, nm);
    if (sk.status != Status::Skew) {
      sk.note = "an operand is not skewsymmetric";
      return sk;
    }
  }
  Membership m = membership_reduce(
      prolong_raw(K1, bivector_density(K2)) + prolong_raw(K2, bivector_density(K1)), window);
  return from_membership(m, K1.is_local() && K2.is_local(), Status::Compatible, Status::NotCompatible, nm);
}

Verdict check_quasi_poisson(const DiffOp& K, const Names& nm) {
  if (!K.is_ultralocal()) throw std::invalid_argument("quasi-Poisson check needs an ultralocal operator");
  Verdict sk = check_skew(K, nm);
  if (sk.status != Status::Skew) {
    sk.note = "not skewsymmetric";
    return sk;
  }
  QuasiFit q = quasi_poisson_fit(to_bracket(K));
  Verdict v;
  v.note = q.note;
  if (q.ok) {
    v.status = Status::QuasiPoisson;
    v.alpha = q.alpha ? *q.alpha : Coeff(0);
  } else {
    v.status = Status::NotQuasi;
    v.alpha = q.alpha;
    v.residual = quasi_residual_str(q.residual, nm);
  }
  return v;
}

std::vector<Element> hamiltonian_flow(const DiffOp& K, const Element& F) {
  std::vector<Element> dF;
  for (int i = 0; i < K.size(); ++i) dF.push_back(variational_derivative(F, i));
  return ncham::apply(K, dF);
}

Verdict check_hamiltonian_form(const DiffOp& K, const Element& F, const std::vector<Element>& X,
                               const Names& nm) {
  if (static_cast<int>(X.size()) != K.size()) throw std::invalid_argument("flow has the wrong number of components");
  auto got = hamiltonian_flow(K, F);
  Verdict v;
  v.status = Status::HamiltonianFormOK;
  std::string diff;
  for (size_t i = 0; i < X.size(); ++i) {
    Element d = got[i] - X[i];
    if (d.is_zero()) continue;
    v.status = Status::Mismatch;
    if (!diff.empty()) diff += "; ";
    diff += nm.var(static_cast<int>(i)) + "_t: computed - expected = " + d.str(nm);
  }
  if (v.status == Status::Mismatch) {
    v.residual = diff;
    for (auto& g : got)
      if (g.has_nonlocal()) v.note = "computed flow is nonlocal";
  }
  return v;
}

std::vector<Coeff> conditions_of(const Element& residual) {
  std::set<std::string> seen;
  std::vector<Coeff> out;
  for (auto& [w, c] : residual.terms()) {
    Coeff m = c.monic();
    if (m.is_zero() || !seen.insert(m.str()).second) continue;
    out.push_back(m);
  }
  std::sort(out.begin(), out.end(), [](const Coeff& a, const Coeff& b) { return a.str() < b.str(); });
  return out;
}

std::vector<Coeff> parametric_conditions(const DiffOp& K, int window) {
  if (!is_skewsymmetric(K)) throw std::invalid_argument("parametric conditions need a skewsymmetric operator");
  Membership m = membership_reduce(prolong_raw(K, bivector_density(K)), window);
  if (m.status == Membership::Undecided) throw std::runtime_error("membership undecided: " + m.note);
  return m.status == Membership::Zero ? std::vector<Coeff>{} : conditions_of(m.residual);
}

std::vector<Coeff> compatibility_conditions(const DiffOp& K1, const DiffOp& K2, int window) {
  Membership m =
      membership_reduce(prolong_raw(K1, bivector_density(K2)) + prolong_raw(K2, bivector_density(K1)), window);
  if (m.status == Membership::Undecided) throw std::runtime_error("membership undecided: " + m.note);
  return m.status == Membership::Zero ? std::vector<Coeff>{} : conditions_of(m.residual);
}

// ---- printing ----------------------------------------------------------------

namespace {

// split every word at a fixed position (from the left if k > 0, from the
// right if k < 0) and look for a rank-one coefficient matrix
bool try_split(const Element& e, int k, Element& A, Element& B) {
  std::map<Word, std::map<Word, Coeff>> M;
  for (auto& [w, c] : e.terms()) {
    const int n = static_cast<int>(w.size());
    const int at = k > 0 ? k : n + k;
    if (at < 0 || at > n) return false;
    Word p(w.begin(), w.begin() + at), s(w.begin() + at, w.end());
    M[p][s] = c;
  }
  if (M.size() < 2) return false;
  std::set<Word> cols;
  for (auto& [p, row] : M)
    for (auto& [s, c] : row) cols.insert(s);
  if (cols.size() < 2) return false;
  // constant pivot
  const Word* pi = nullptr;
  const Word* pj = nullptr;
  Coeff piv;
  for (auto& [p, row] : M) {
    for (auto& [s, c] : row)
      if (c.is_const()) {
        pi = &p;
        pj = &s;
        piv = c;
        break;
      }
    if (pi) break;
  }
  if (!pi) return false;
  auto at = [&](const Word& p, const Word& s) {
    auto it = M.find(p);
    if (it == M.end()) return Coeff();
    auto jt = it->second.find(s);
    return jt == it->second.end() ? Coeff() : jt->second;
  };
  for (auto& [p, row] : M)
    for (const Word& s : cols)
      if (!(at(p, s) * piv == at(p, *pj) * at(*pi, s))) return false;
  A = Element();
  B = Element();
  const Coeff inv(Rational(1) / piv.const_value());
  for (auto& [p, row] : M) A.add(p, at(p, *pj));
  for (const Word& s : cols) B.add(s, at(*pi, s) * inv);
  // prefer the sign with fewer minus signs, looking at A first
  auto negs = [](const Element& x) {
    int n = 0;
    for (auto& [w, c] : x.terms()) n += c.lead_sign() < 0 ? 2 : 0;
    return n - static_cast<int>(x.size());
  };
  const int na = negs(A), nb = negs(B);
  if (na > 0 || (na == 0 && (nb > 0 || (nb == 0 && A.str().front() == '-')))) {
    A = -A;
    B = -B;
  }
  return true;
}

std::string paren(const std::string& s, size_t terms) { return terms > 1 ? "(" + s + ")" : s; }

}  // namespace

std::string factor_str(const Element& e, const Names& nm) {
  if (e.size() < 2) return e.str(nm);
  size_t maxlen = 0;
  for (auto& [w, c] : e.terms()) maxlen = std::max(maxlen, w.size());
  for (int k = 1; k < static_cast<int>(maxlen); ++k) {
    for (int kk : {k, -k}) {
      Element A, B;
      if (!try_split(e, kk, A, B)) continue;
      if (A.size() < 2 || B.size() < 2) continue;
      return paren(factor_str(A, nm), A.size()) + "*" + paren(factor_str(B, nm), B.size());
    }
  }
  return e.str(nm);
}

std::string flow_str(const std::vector<Element>& X, const Names& nm) {
  std::string s = "(";
  for (size_t i = 0; i < X.size(); ++i) {
    if (i) s += ", ";
    s += factor_str(X[i], nm);
  }
  return s + ")";
}

}  // namespace ncham
