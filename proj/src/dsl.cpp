#include "ncham/dsl.hpp"

#include <json.hpp>

#include <algorithm>
#include <cctype>
#include <chrono>
#include <set>
#include <sstream>

#include "ncham/oracle.hpp"
#include "ncham/quotient.hpp"
#include "ncham/verify.hpp"

namespace ncham::dsl {

ParseError::ParseError(const std::string& msg, int l, int c)
    : std::runtime_error(std::to_string(l) + ":" + std::to_string(c) + ": " + msg), line(l), col(c) {}

namespace {

// ---- lexer ---------------------------------------------------------------------

struct Tok {
  enum Kind { Ident, Int, Str, Punct, End } kind = End;
  std::string s;
  int line = 1, col = 1;
};

std::vector<Tok> lex(const std::string& src) {
  std::vector<Tok> out;
  int line = 1, col = 1;
  size_t i = 0;
  auto adv = [&]() {
    if (src[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
    ++i;
  };
  while (i < src.size()) {
    const char ch = src[i];
    if (std::isspace(static_cast<unsigned char>(ch))) {
      adv();
      continue;
    }
    if (ch == '#' || (ch == '/' && i + 1 < src.size() && src[i + 1] == '/')) {
      while (i < src.size() && src[i] != '\n') adv();
      continue;
    }
    Tok t;
    t.line = line;
    t.col = col;
    if (std::isalpha(static_cast<unsigned char>(ch)) || ch == '_') {
      t.kind = Tok::Ident;
      while (i < src.size() && (std::isalnum(static_cast<unsigned char>(src[i])) || src[i] == '_')) {
        t.s += src[i];
        adv();
      }
    } else if (std::isdigit(static_cast<unsigned char>(ch))) {
      t.kind = Tok::Int;
      while (i < src.size() && std::isdigit(static_cast<unsigned char>(src[i]))) {
        t.s += src[i];
        adv();
      }
    } else if (ch == '"') {
      t.kind = Tok::Str;
      adv();
      while (i < src.size() && src[i] != '"') {
        t.s += src[i];
        adv();
      }
      if (i >= src.size()) throw ParseError("unterminated string", t.line, t.col);
      adv();
    } else if (std::string("()[],;=+-*/^").find(ch) != std::string::npos) {
      t.kind = Tok::Punct;
      t.s = std::string(1, ch);
      adv();
    } else {
      throw ParseError(std::string("unexpected character '") + ch + "'", line, col);
    }
    out.push_back(t);
  }
  Tok e;
  e.line = line;
  e.col = col;
  out.push_back(e);
  return out;
}

const std::set<std::string> kReserved = {"l", "r", "c", "a", "S", "col", "row", "inv1", "Sinv1", "tr",
                                         "op", "functional", "params", "vars", "check", "derive",
                                         "bracket", "conditions", "oracle", "expect"};

bool is_theta_name(const std::string& s) {
  return s == "th" || s == "theta" || s.rfind("th_", 0) == 0 || s.rfind("theta", 0) == 0;
}

// ---- operator values ------------------------------------------------------------

struct OV {
  bool mat = false;
  OpEntry e;
  DiffOp m;
};

bool as_coeff(const OpEntry& e, Coeff& c) {
  c = Coeff();
  for (auto& [p, t] : e.terms()) {
    if (p != 0) return false;
    for (auto& [k, v] : t.terms()) {
      if (!k[0].empty() || !k[1].empty()) return false;
      c = v;
    }
  }
  return true;
}

// ---- parser ------------------------------------------------------------------

class Parser {
 public:
  Parser(std::vector<Tok> toks, Script& s) : t_(std::move(toks)), s_(s) {}

  void script() {
    while (!at_end()) statement();
  }

  // standalone pieces (expect strings)
  Element elem_only() {
    Element e = elem();
    if (!at_end()) fail("trailing input");
    return e;
  }
  std::vector<Element> tuple_only() {
    std::vector<Element> v = tuple();
    if (!at_end()) fail("trailing input");
    return v;
  }

 private:
  std::vector<Tok> t_;
  size_t p_ = 0;
  Script& s_;
  bool allow_tr_ = false;

  const Tok& peek(size_t k = 0) const { return t_[std::min(p_ + k, t_.size() - 1)]; }
  bool at_end() const { return peek().kind == Tok::End; }
  [[noreturn]] void fail(const std::string& msg) const { throw ParseError(msg, peek().line, peek().col); }
  [[noreturn]] void fail_at(const Tok& t, const std::string& msg) const { throw ParseError(msg, t.line, t.col); }
  bool is(const std::string& p, size_t k = 0) const {
    const Tok& t = peek(k);
    return (t.kind == Tok::Punct || t.kind == Tok::Ident) && t.s == p;
  }
  bool accept(const std::string& p) {
    if (!is(p)) return false;
    ++p_;
    return true;
  }
  void expect(const std::string& p) {
    if (!accept(p)) fail("expected '" + p + "'" + (at_end() ? " at end of input" : " before '" + peek().s + "'"));
  }
  Tok ident() {
    if (peek().kind != Tok::Ident) fail("expected an identifier");
    return t_[p_++];
  }
  int integer() {
    bool neg = accept("-");
    if (peek().kind != Tok::Int) fail("expected an integer");
    int v = std::stoi(t_[p_++].s);
    return neg ? -v : v;
  }
  Rational number() {
    Rational q(t_[p_++].s, 10);
    if (is("/") && peek(1).kind == Tok::Int) {
      ++p_;
      Rational d(t_[p_++].s, 10);
      if (d == 0) fail("division by zero");
      q /= d;
    }
    return q;
  }

  int var_index(const std::string& n) const {
    for (int i = 0; i < s_.nvars; ++i)
      if (s_.names.vars[static_cast<size_t>(i)] == n) return i;
    return -1;
  }
  bool is_param(const std::string& n) const {
    return std::find(s_.params.begin(), s_.params.end(), n) != s_.params.end();
  }
  void check_new_name(const Tok& t) {
    if (is_theta_name(t.s)) fail_at(t, "'" + t.s + "': theta symbols are reserved");
    if (kReserved.count(t.s)) fail_at(t, "'" + t.s + "' is a reserved word");
    if (var_index(t.s) >= 0 || is_param(t.s) || s_.op(t.s) || s_.functional(t.s))
      fail_at(t, "'" + t.s + "' is already defined");
  }

  void statement() {
    Tok kw = ident();
    if (kw.s == "params" || kw.s == "vars") {
      do {
        Tok n = ident();
        check_new_name(n);
        if (kw.s == "params") {
          s_.params.push_back(n.s);
          param_id(n.s);
        } else {
          if (!s_.ops.empty() || !s_.functionals.empty()) fail_at(n, "variables must be declared before definitions");
          if (static_cast<size_t>(s_.nvars) < s_.names.vars.size())
            s_.names.vars[static_cast<size_t>(s_.nvars)] = n.s;
          else
            s_.names.vars.push_back(n.s);
          ++s_.nvars;
        }
      } while (!is(";") && !at_end());
      expect(";");
    } else if (kw.s == "op") {
      need_vars(kw);
      Tok n = ident();
      check_new_name(n);
      expect("=");
      Tok start = peek();
      OV v = opexpr();
      s_.ops.emplace_back(n.s, to_mat(v, start));
      expect(";");
    } else if (kw.s == "functional") {
      need_vars(kw);
      Tok n = ident();
      check_new_name(n);
      expect("=");
      allow_tr_ = true;
      Element e = elem();
      allow_tr_ = false;
      if (e.has_nonlocal()) fail_at(n, "nonlocal functional");
      s_.functionals.emplace_back(n.s, e);
      expect(";");
    } else if (kw.s == "check" || kw.s == "derive" || kw.s == "bracket" || kw.s == "conditions" ||
               kw.s == "oracle") {
      need_vars(kw);
      command(kw);
    } else {
      fail_at(kw, "unknown statement '" + kw.s + "'");
    }
  }

  void need_vars(const Tok& kw) {
    if (s_.nvars == 0) fail_at(kw, "declare variables first (vars u ...;)");
  }

  const DiffOp& op_arg() {
    Tok n = ident();
    const DiffOp* K = s_.op(n.s);
    if (!K) fail_at(n, "unknown operator '" + n.s + "'");
    last_args_.push_back(n.s);
    return *K;
  }
  void fun_arg() {
    Tok n = ident();
    if (!s_.functional(n.s)) fail_at(n, "unknown functional '" + n.s + "'");
    last_args_.push_back(n.s);
  }
  std::vector<std::string> last_args_;

  void command(const Tok& kw) {
    Command c;
    c.verb = kw.s;
    c.line = kw.line;
    last_args_.clear();
    if (kw.s == "check") {
      Tok w = ident();
      c.what = w.s;
      if (w.s == "skew" || w.s == "poisson" || w.s == "quasi") {
        op_arg();
      } else if (w.s == "compatible") {
        const DiffOp& a = op_arg();
        const DiffOp& b = op_arg();
        if (a.size() != b.size()) fail_at(w, "operators of different sizes");
      } else if (w.s == "hamiltonian") {
        op_arg();
        fun_arg();
        if (peek().kind != Tok::Str) fail("expected the flow as a string, e.g. \"(u[1]-u, v)\"");
        c.flow = sub_tuple(t_[p_++]);
      } else {
        fail_at(w, "unknown check '" + w.s + "' (skew, poisson, quasi, compatible, hamiltonian)");
      }
    } else if (kw.s == "derive") {
      Tok w = ident();
      if (w.s != "flow") fail_at(w, "expected 'derive flow'");
      c.what = "flow";
      op_arg();
      fun_arg();
    } else if (kw.s == "bracket") {
      op_arg();
      fun_arg();
      fun_arg();
    } else if (kw.s == "conditions") {
      op_arg();
      if (peek().kind == Tok::Ident && !is("expect")) op_arg();
    } else {  // oracle
      Tok w = ident();
      if (w.s != "jacobi") fail_at(w, "expected 'oracle jacobi'");
      c.what = "jacobi";
      op_arg();
    }
    c.args = last_args_;
    if (accept("expect")) c.expect = expectation(c);
    expect(";");
    s_.commands.push_back(std::move(c));
  }

  Expect expectation(const Command& c) {
    Expect e;
    const Tok start = peek();
    if (c.verb == "conditions") {
      e.kind = Expect::Conditions;
      if (accept("none")) {
        e.text = "none";
        return e;
      }
      do {
        if (peek().kind != Tok::Str) fail("expected a quoted parameter polynomial");
        Tok t = t_[p_++];
        Element x = sub_elem(t);
        if (x.size() > 1 || (x.size() == 1 && !x.terms().begin()->first.empty()))
          fail_at(t, "conditions are polynomials in the parameters only");
        e.conditions.push_back(x.is_zero() ? Coeff() : x.terms().begin()->second.monic());
        e.text += (e.text.empty() ? "" : ", ") + ("\"" + t.s + "\"");
      } while (accept(","));
      return e;
    }
    if (peek().kind == Tok::Str) {
      Tok t = t_[p_++];
      e.text = "\"" + t.s + "\"";
      if (c.verb == "derive") {
        e.kind = Expect::Value;
        e.value = sub_tuple(t);
      } else if (c.verb == "bracket") {
        e.kind = Expect::Value;
        e.value = {sub_elem(t)};
      } else {
        fail_at(t, "this command expects a status, not a value");
      }
      return e;
    }
    Tok t = ident();
    e.kind = Expect::Status;
    e.status = t.s;
    e.text = t.s;
    static const std::set<std::string> extra = {"derived", "match", "mismatch", "pass", "fail"};
    if (!status_from_name(t.s) && !extra.count(t.s)) fail_at(start, "unknown status '" + t.s + "'");
    return e;
  }

  // parse the contents of a string token in the same scope
  Element sub_elem(const Tok& t) {
    try {
      Parser q(lex(t.s), s_);
      return q.elem_only();
    } catch (const ParseError& e) {
      throw ParseError(std::string("in string: ") + e.what(), t.line, t.col);
    }
  }
  std::vector<Element> sub_tuple(const Tok& t) {
    std::vector<Element> v;
    try {
      Parser q(lex(t.s), s_);
      v = q.tuple_only();
    } catch (const ParseError& e) {
      throw ParseError(std::string("in string: ") + e.what(), t.line, t.col);
    }
    if (static_cast<int>(v.size()) != s_.nvars)
      fail_at(t, "flow needs " + std::to_string(s_.nvars) + " components, got " + std::to_string(v.size()));
    return v;
  }

  // "(e1, e2, ...)"; with one variable a bare element is fine too
  std::vector<Element> tuple() {
    std::vector<Element> v;
    if (s_.nvars > 1 || is("(")) {
      size_t save = p_;
      if (accept("(")) {
        v.push_back(elem());
        if (is(",") || s_.nvars > 1) {
          while (accept(",")) v.push_back(elem());
          expect(")");
          return v;
        }
        p_ = save;  // single parenthesised element
        v.clear();
      }
    }
    v.push_back(elem());
    return v;
  }

  // ---- elements ----
  Element elem() {
    Element r;
    bool first = true;
    while (true) {
      bool neg = false;
      if (accept("-"))
        neg = true;
      else if (!first && !accept("+"))
        break;
      else if (first)
        accept("+");
      Element t = eterm();
      r += neg ? -t : t;
      first = false;
      if (!is("+") && !is("-")) break;
    }
    return r;
  }
  Element eterm() {
    Element r = efactor();
    while (accept("*")) r = r * efactor();
    return r;
  }
  Element efactor() {
    bool single_var = peek().kind == Tok::Ident && var_index(peek().s) >= 0;
    int comp = -1, shift_n = 0;
    Element base;
    if (peek().kind == Tok::Int) {
      base = Element(Coeff(number()));
    } else if (accept("(")) {
      base = elem();
      expect(")");
    } else if (peek().kind == Tok::Ident) {
      Tok n = ident();
      if (n.s == "tr" && allow_tr_ && is("(")) {
        expect("(");
        base = elem();
        expect(")");
        single_var = false;
      } else if (is_theta_name(n.s)) {
        fail_at(n, "'" + n.s + "': theta symbols are reserved");
      } else if ((comp = var_index(n.s)) >= 0) {
        if (accept("[")) {
          shift_n = integer();
          expect("]");
        }
        base = Element::gen(comp, shift_n);
      } else if (is_param(n.s)) {
        int e = 1;
        if (accept("^")) {
          e = integer();
          if (e < 0) fail_at(n, "negative power of a parameter");
        }
        return e == 0 ? Element(1) : Element(Coeff::param(param_id(n.s), e));
      } else {
        fail_at(n, "unknown identifier '" + n.s + "'");
      }
    } else {
      fail("expected an expression");
    }
    if (accept("^")) {
      const Tok et = peek();
      int e = integer();
      if (e < 0) {
        if (!single_var) fail_at(et, "only a variable can be inverted");
        base = Element::inv(comp, shift_n);
        e = -e;
      }
      Element r(1);
      for (int k = 0; k < e; ++k) r = r * base;
      return r;
    }
    return base;
  }

  // ---- operators ----
  DiffOp to_mat(const OV& v, const Tok& at) const {
    if (v.mat) {
      if (v.m.size() != s_.nvars) fail_at(at, "operator size does not match the number of variables");
      return v.m;
    }
    if (s_.nvars != 1) fail_at(at, "an operator on " + std::to_string(s_.nvars) + " variables needs a matrix");
    return DiffOp::scalar(v.e);
  }
  OV promote(const OV& v, const Tok& at) const {
    if (v.mat) return v;
    OV r;
    r.mat = true;
    r.m = to_mat(v, at);
    return r;
  }

  OV opexpr() {
    const Tok start = peek();
    OV r;
    bool first = true;
    while (true) {
      bool neg = false;
      if (accept("-"))
        neg = true;
      else if (!first && !accept("+"))
        break;
      else if (first)
        accept("+");
      OV t = opterm();
      if (neg) {
        if (t.mat)
          t.m = -t.m;
        else
          t.e = -t.e;
      }
      if (first) {
        r = t;
      } else if (!r.mat && !t.mat) {
        r.e += t.e;
      } else {
        OV a = promote(r, start), b = promote(t, start);
        r = a;
        r.m += b.m;
      }
      first = false;
      if (!is("+") && !is("-")) break;
    }
    return r;
  }

  bool starts_factor() const {
    const Tok& t = peek();
    if (t.kind == Tok::Int) return true;
    if (t.kind == Tok::Punct) return t.s == "(" || t.s == "[";
    if (t.kind == Tok::Ident) return t.s != "expect" && t.s != "inv1" && t.s != "Sinv1";
    return false;
  }

  OV opterm() {
    const Tok start = peek();
    OV r = opfactor();
    while (true) {
      if (accept("*")) {
      } else if (!starts_factor()) {
        break;
      }
      OV f = opfactor();
      r = product(r, f, start);
    }
    return r;
  }

  OV product(const OV& a, const OV& b, const Tok& at) const {
    OV r;
    Coeff c;
    if (!a.mat && !b.mat) {
      r.e = a.e.compose(b.e);
      return r;
    }
    r.mat = true;
    if (!a.mat) {
      if (as_coeff(a.e, c)) {
        r.m = b.m * c;
        return r;
      }
      r.m = DiffOp(b.m.size());
      for (int i = 0; i < b.m.size(); ++i)
        for (int j = 0; j < b.m.size(); ++j) r.m.at(i, j) = a.e.compose(b.m.at(i, j));
      for (auto t : b.m.nonlocal()) {
        for (auto& x : t.col) x = a.e.compose(x);
        r.m.add_nonlocal(t);
      }
      return r;
    }
    if (!b.mat) {
      if (as_coeff(b.e, c)) {
        r.m = a.m * c;
        return r;
      }
      r.m = DiffOp(a.m.size());
      for (int i = 0; i < a.m.size(); ++i)
        for (int j = 0; j < a.m.size(); ++j) r.m.at(i, j) = a.m.at(i, j).compose(b.e);
      for (auto t : a.m.nonlocal()) {
        for (auto& x : t.row) x = x.compose(b.e);
        r.m.add_nonlocal(t);
      }
      return r;
    }
    if (!a.m.is_local() || !b.m.is_local()) fail_at(at, "composition of nonlocal operators is not supported");
    if (a.m.size() != b.m.size()) fail_at(at, "matrix sizes differ");
    const int n = a.m.size();
    r.m = DiffOp(n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) r.m.at(i, j) += a.m.at(i, k).compose(b.m.at(k, j));
    return r;
  }

  OpEntry entry_of(const OV& v, const Tok& at) const {
    if (v.mat) {
      if (v.m.size() == 1 && v.m.is_local()) return v.m.at(0, 0);
      fail_at(at, "expected a scalar operator here");
    }
    return v.e;
  }

  std::vector<OpEntry> entry_list(const std::string& what) {
    expect("(");
    std::vector<OpEntry> v;
    do {
      const Tok t = peek();
      v.push_back(entry_of(opexpr(), t));
    } while (accept(","));
    expect(")");
    if (static_cast<int>(v.size()) != s_.nvars)
      fail(what + " needs " + std::to_string(s_.nvars) + " entries, got " + std::to_string(v.size()));
    return v;
  }

  Element paren_elem() {
    expect("(");
    Element e = elem();
    expect(")");
    if (e.has_nonlocal()) fail("nonlocal symbol in a multiplication operator");
    return e;
  }

  OV opfactor() {
    const Tok t = peek();
    OV r;
    if (t.kind == Tok::Int) {
      r.e = OpEntry::scalar(Coeff(number()));
      return r;
    }
    if (accept("(")) {
      r = opexpr();
      expect(")");
      return r;
    }
    if (accept("[")) {
      std::vector<std::vector<OpEntry>> rows;
      do {
        expect("[");
        rows.emplace_back();
        do {
          const Tok s = peek();
          rows.back().push_back(entry_of(opexpr(), s));
        } while (accept(","));
        expect("]");
      } while (accept(","));
      expect("]");
      const size_t n = rows.size();
      for (auto& row : rows)
        if (row.size() != n) fail_at(t, "matrix must be square");
      if (static_cast<int>(n) != s_.nvars) fail_at(t, "matrix size does not match the number of variables");
      r.mat = true;
      r.m = DiffOp(static_cast<int>(n));
      for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < n; ++j) r.m.at(static_cast<int>(i), static_cast<int>(j)) = rows[i][j];
      return r;
    }
    if (t.kind != Tok::Ident) fail("expected an operator");
    Tok n = ident();
    if (n.s == "l" || n.s == "r" || n.s == "c" || n.s == "a") {
      Element f = paren_elem();
      OpEntry L = OpEntry::left(f), R = OpEntry::right(f);
      r.e = n.s == "l" ? L : n.s == "r" ? R : n.s == "c" ? L - R : L + R;
      return r;
    }
    if (n.s == "S") {
      int p = 1;
      if (accept("^")) p = integer();
      r.e = OpEntry::shift_op(p);
      return r;
    }
    if (n.s == "col") {
      NonlocalTerm nt;
      nt.col = entry_list("col");
      Tok tail = ident();
      if (tail.s == "inv1")
        nt.tail = Tail::INV1;
      else if (tail.s == "Sinv1")
        nt.tail = Tail::SINV1;
      else
        fail_at(tail, "expected inv1 or Sinv1");
      if (!is("row")) fail("expected row(...)");
      ident();
      nt.row = entry_list("row");
      r.mat = true;
      r.m = DiffOp(s_.nvars);
      r.m.add_nonlocal(nt);
      return r;
    }
    if (is_theta_name(n.s)) fail_at(n, "'" + n.s + "': theta symbols are reserved");
    if (is_param(n.s)) {
      int e = 1;
      if (accept("^")) {
        e = integer();
        if (e < 0) fail_at(n, "negative power of a parameter");
      }
      r.e = OpEntry::scalar(e == 0 ? Coeff(1) : Coeff::param(param_id(n.s), e));
      return r;
    }
    if (const DiffOp* K = s_.op(n.s)) {
      r.mat = true;
      r.m = *K;
      return r;
    }
    if (var_index(n.s) >= 0) fail_at(n, "variable '" + n.s + "' used as an operator; write l(" + n.s + ") or r(" + n.s + ")");
    fail_at(n, "unknown identifier '" + n.s + "'");
  }
};

// ---- running ----------------------------------------------------------------

std::vector<std::string> cond_strings(const std::vector<Coeff>& cs) {
  std::vector<std::string> v;
  for (auto& c : cs) v.push_back(c.str());
  return v;
}

bool same_conditions(const std::vector<Coeff>& a, const std::vector<Coeff>& b) {
  std::set<std::string> x, y;
  for (auto& c : a) x.insert(c.monic().str());
  for (auto& c : b) y.insert(c.monic().str());
  return x == y;
}

void fill(Report& r, const Verdict& v) {
  r.status = status_name(v.status);
  r.residual = v.residual;
  if (v.alpha) r.alpha = v.alpha->str();
  r.conditions = cond_strings(v.conditions);
  r.certificate = v.certificate;
  r.note = v.note;
}

}  // namespace

Report run_command(const Script& s, const Command& c, const RunOptions& opt) {
  Report r;
  r.command = c.label();
  for (size_t i = 0; i < c.args.size(); ++i) r.target += (i ? " " : "") + c.args[i];
  const Names& nm = s.names;
  auto op = [&](size_t i) -> const DiffOp& { return *s.op(c.args[i]); };
  auto fun = [&](size_t i) -> const Element& { return *s.functional(c.args[i]); };
  const auto t0 = std::chrono::steady_clock::now();
  try {
    if (c.verb == "check") {
      if (c.what == "skew") fill(r, check_skew(op(0), nm));
      else if (c.what == "poisson") fill(r, check_poisson(op(0), opt.window, nm));
      else if (c.what == "quasi") fill(r, check_quasi_poisson(op(0), nm));
      else if (c.what == "compatible") fill(r, check_compatible(op(0), op(1), opt.window, nm));
      else fill(r, check_hamiltonian_form(op(0), fun(1), c.flow, nm));
    } else if (c.verb == "derive") {
      auto X = hamiltonian_flow(op(0), fun(1));
      r.residual = flow_str(X, nm);
      r.status = "derived";
      if (c.expect.kind == Expect::Value) {
        bool ok = true;
        for (size_t i = 0; i < X.size(); ++i) ok = ok && X[i] == c.expect.value[i];
        r.status = ok ? "hamiltonian_form_ok" : "mismatch";
      }
    } else if (c.verb == "bracket") {
      PolyVector b = functional_poisson_bracket(canonicalize(fun(1)), canonicalize(fun(2)), op(0));
      r.residual = b.repr.str(nm);
      r.status = "derived";
      if (c.expect.kind == Expect::Value)
        r.status = canonicalize(c.expect.value[0]).repr == b.repr ? "match" : "mismatch";
    } else if (c.verb == "conditions") {
      auto cs = c.args.size() == 1 ? parametric_conditions(op(0), opt.window)
                                   : compatibility_conditions(op(0), op(1), opt.window);
      r.conditions = cond_strings(cs);
      r.status = "derived";
      if (c.expect.kind == Expect::Conditions)
        r.status = same_conditions(cs, c.expect.conditions) ? "match" : "mismatch";
      if (!cs.empty() && (!op(0).is_local() || (c.args.size() > 1 && !op(1).is_local())))
        r.note = "nonlocal operator: conditions are sufficient, unreduced terms may hide further cancellation";
    } else {  // oracle jacobi
      auto t = oracle::jacobi_trials(op(0), opt.oracle_trials, opt.seed);
      r.status = t.passed == t.trials ? "pass" : "fail";
      r.note = std::to_string(t.passed) + "/" + std::to_string(t.trials) +
               " trials (exact and float), worst float error " + std::to_string(t.worst_float_err);
      if (!t.first_failure.empty()) r.residual = t.first_failure;
    }
  } catch (const std::exception& e) {
    r.status = "error";
    r.note = e.what();
  }
  r.wall_ms = static_cast<long>(
      std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - t0).count());
  if (c.expect.kind != Expect::None) {
    r.expect_checked = true;
    r.expected = c.expect.text;
    if (c.expect.kind == Expect::Status)
      r.expect_ok = r.status == c.expect.status;
    else
      r.expect_ok = r.status == "match" || r.status == "hamiltonian_form_ok";
  }
  return r;
}

std::string Command::label() const { return what.empty() ? verb : verb + " " + what; }

const DiffOp* Script::op(const std::string& n) const {
  for (auto& [k, v] : ops)
    if (k == n) return &v;
  return nullptr;
}

const Element* Script::functional(const std::string& n) const {
  for (auto& [k, v] : functionals)
    if (k == n) return &v;
  return nullptr;
}

Script parse(const std::string& text) {
  Script s;
  s.names.vars.clear();
  Parser p(lex(text), s);
  p.script();
  return s;
}

std::string print(const Script& s) {
  std::ostringstream os;
  if (!s.params.empty()) {
    os << "params";
    for (auto& p : s.params) os << " " << p;
    os << ";\n";
  }
  os << "vars";
  for (int i = 0; i < s.nvars; ++i) os << " " << s.names.var(i);
  os << ";\n";
  for (auto& [n, K] : s.ops) os << "op " << n << " = " << K.str(s.names) << ";\n";
  for (auto& [n, f] : s.functionals) os << "functional " << n << " = tr(" << f.str(s.names) << ");\n";
  for (auto& c : s.commands) {
    os << c.label();
    for (auto& a : c.args) os << " " << a;
    if (!c.flow.empty()) os << " \"" << flow_str(c.flow, s.names) << "\"";
    switch (c.expect.kind) {
      case Expect::None:
        break;
      case Expect::Status:
        os << " expect " << c.expect.status;
        break;
      case Expect::Value:
        os << " expect \"" << (c.verb == "derive" ? flow_str(c.expect.value, s.names) : c.expect.value[0].str(s.names))
           << "\"";
        break;
      case Expect::Conditions:
        if (c.expect.conditions.empty()) {
          os << " expect none";
        } else {
          os << " expect ";
          for (size_t i = 0; i < c.expect.conditions.size(); ++i)
            os << (i ? ", " : "") << "\"" << c.expect.conditions[i].str() << "\"";
        }
        break;
    }
    os << ";\n";
  }
  return os.str();
}

std::vector<Report> run(const Script& s, const RunOptions& opt) {
  std::vector<Report> out;
  for (auto& c : s.commands) out.push_back(run_command(s, c, opt));
  return out;
}

std::string to_json(const Report& r) {
  using nlohmann::json;
  json j;
  j["command"] = r.command;
  j["target"] = r.target;
  j["status"] = r.status;
  j["residual"] = r.residual ? json(*r.residual) : json(nullptr);
  j["alpha"] = r.alpha ? json(*r.alpha) : json(nullptr);
  j["conditions"] = r.conditions;
  j["certificate"] = r.certificate ? json(*r.certificate) : json(nullptr);
  j["wall_ms"] = r.wall_ms;
  return j.dump();
}

std::string to_text(const Report& r) {
  std::ostringstream os;
  os << r.command << " " << r.target << ": " << r.status;
  if (r.alpha) os << " (alpha = " << *r.alpha << ")";
  os << "  [" << r.wall_ms << " ms]";
  if (r.expect_checked) os << (r.expect_ok ? "  expect ok" : "  EXPECTED " + r.expected);
  os << "\n";
  if (r.residual) os << "  " << (r.status == "derived" || r.status == "hamiltonian_form_ok" || r.status == "match" ? "value" : "residual") << ": " << *r.residual << "\n";
  if (!r.conditions.empty()) {
    os << "  conditions:";
    for (auto& c : r.conditions) os << " [" << c << "]";
    os << "\n";
  }
  if (r.certificate) os << "  certificate: " << *r.certificate << "\n";
  if (!r.note.empty()) os << "  note: " << r.note << "\n";
  return os.str();
}

}  // namespace ncham::dsl
