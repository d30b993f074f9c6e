// ncham run <script> [--format json|text] [--window N] [--oracle-trials T] [--seed S]
// ncham print <script>
//
// exit status: 0 all commands ran (and met their expect clauses),
// 1 some expect clause failed, 2 parse or runtime error

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#include "ncham/dsl.hpp"

namespace {

bool slurp(const std::string& path, std::string& out) {
  std::ifstream in(path);
  if (!in) return false;
  std::stringstream ss;
  ss << in.rdbuf();
  out = ss.str();
  return true;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"ncham: Hamiltonian structures of nonabelian difference equations"};
  app.require_subcommand(1);

  std::string script, format = "json";
  ncham::dsl::RunOptions opt;
  auto* run = app.add_subcommand("run", "run the commands of a script");
  run->add_option("script", script, "script file")->required();
  run->add_option("--format", format, "json or text")->check(CLI::IsMember({"json", "text"}));
  run->add_option("--window", opt.window, "membership window (default NCHAM_WINDOW or 2)")
      ->check(CLI::NonNegativeNumber);
  run->add_option("--oracle-trials", opt.oracle_trials, "random triples per oracle command")
      ->check(CLI::PositiveNumber);
  run->add_option("--seed", opt.seed, "oracle seed");

  std::string pscript;
  auto* pr = app.add_subcommand("print", "parse a script and print it back in canonical form");
  pr->add_option("script", pscript, "script file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  const std::string& path = run->parsed() ? script : pscript;
  std::string text;
  if (!slurp(path, text)) {
    std::cerr << path << ": cannot read\n";
    return 2;
  }
  ncham::dsl::Script s;
  try {
    s = ncham::dsl::parse(text);
  } catch (const ncham::dsl::ParseError& e) {
    std::cerr << path << ":" << e.what() << "\n";
    return 2;
  }
  if (pr->parsed()) {
    std::cout << ncham::dsl::print(s);
    return 0;
  }

  int rc = 0;
  for (auto& c : s.commands) {
    const auto r = ncham::dsl::run_command(s, c, opt);
    std::cout << (format == "json" ? ncham::dsl::to_json(r) + "\n" : ncham::dsl::to_text(r)) << std::flush;
    if (r.status == "error") {
      std::cerr << path << ":" << c.line << ": " << r.command << " " << r.target << ": " << r.note << "\n";
      rc = 2;
    } else if (r.expect_checked && !r.expect_ok) {
      std::cerr << path << ":" << c.line << ": " << r.command << " " << r.target << ": got " << r.status
                << ", expected " << r.expected << "\n";
      if (rc == 0) rc = 1;
    }
  }
  return rc;
}
