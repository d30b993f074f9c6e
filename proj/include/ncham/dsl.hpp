#pragma once
// The operator script language: parsing, printing and running commands.
//
//   params alpha beta;              vars u v;
//   op K = [[ c(u), l(v) + r(u) ], [ -r(v) - l(u), -c(v) ]]
//          - col(1, -1) Sinv1 row(c(u), c(v)) + col(c(u), c(v)) inv1 row(1, -1);
//   functional F = tr(u[1]*v - u*v);
//   check poisson K expect poisson;
//   derive flow K F expect "((u[1]-u)*(u+v), (u+v)*(v-v[-1]))";

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "ncham/diffop.hpp"

namespace ncham::dsl {

struct ParseError : std::runtime_error {
  int line, col;
  ParseError(const std::string& msg, int l, int c);
};

struct Expect {
  enum Kind { None, Status, Value, Conditions } kind = None;
  std::string status;                  // Status
  std::vector<Element> value;          // Value: flow components, or one functional
  std::vector<Coeff> conditions;       // Conditions
  std::string text;                    // as written
};

struct Command {
  std::string verb;   // check | derive | bracket | conditions | oracle
  std::string what;   // skew | poisson | quasi | compatible | hamiltonian | flow | jacobi | ""
  std::vector<std::string> args;       // operator / functional names
  std::vector<Element> flow;           // check hamiltonian: expected characteristics
  Expect expect;
  int line = 0;
  std::string label() const;           // e.g. "check poisson"
};

struct Script {
  std::vector<std::string> params;
  Names names;
  int nvars = 0;
  std::vector<std::pair<std::string, DiffOp>> ops;
  std::vector<std::pair<std::string, Element>> functionals;
  std::vector<Command> commands;
  const DiffOp* op(const std::string& n) const;
  const Element* functional(const std::string& n) const;
};

Script parse(const std::string& text);
// canonical text of a parsed script; parse(print(s)) prints the same again
std::string print(const Script& s);

struct Report {
  std::string command;
  std::string target;
  std::string status;
  std::optional<std::string> residual;  // derive/bracket: the computed value
  std::optional<std::string> alpha;
  std::vector<std::string> conditions;
  std::optional<std::string> certificate;
  long wall_ms = 0;
  std::string note;
  bool expect_checked = false;
  bool expect_ok = true;
  std::string expected;
};

struct RunOptions {
  int window = -1;        // -1: default (NCHAM_WINDOW or 2)
  int oracle_trials = 10;
  std::uint64_t seed = 1;
};

// one report per command; runtime errors inside a command become status
// "error" with the message in note
std::vector<Report> run(const Script& s, const RunOptions& opt = {});
Report run_command(const Script& s, const Command& c, const RunOptions& opt = {});

std::string to_json(const Report& r);
std::string to_text(const Report& r);

}  // namespace ncham::dsl
