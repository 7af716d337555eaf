// Command-line front end: parse, run, check, bisim and pds-dump.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <memory>
#include <random>
#include <sstream>
#include <string>

#include "shylock/bisim.hpp"
#include "shylock/checker.hpp"
#include "shylock/logic.hpp"
#include "shylock/semantics.hpp"
#include "shylock/syntax.hpp"

namespace {

enum Exit : int {
  kOk = 0,
  kViolated = 1,
  kBoundExceeded = 2,
  kBisimFailed = 3,
  kUsage = 64,
  kDataError = 65,
  kInternal = 70,
};

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string read_file(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw UsageError("cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::shared_ptr<const shylock::ProgramDecl> load(const std::string &path) {
  return std::make_shared<const shylock::ProgramDecl>(
      shylock::parse_program(read_file(path)));
}

int cmd_parse(const std::string &path) {
  std::cout << shylock::to_string(*load(path));
  return kOk;
}

int cmd_run(const std::string &path, const std::string &semantics,
            std::size_t steps, std::uint64_t seed, bool trace) {
  using namespace shylock;
  auto prog = load(path);
  Semantics sem =
      semantics == "concrete" ? Semantics::Concrete : Semantics::Abstract;
  Config c = initial_config(*prog, sem);
  std::mt19937_64 rng(seed);
  std::size_t taken = 0;
  Fault stop = Fault::None;
  while (taken < steps) {
    Successors next = step(c, *prog, sem);
    if (next.steps.empty()) {
      stop = next.fault;
      break;
    }
    Step &s = next.steps[rng() % next.steps.size()];
    c = std::move(s.next);
    ++taken;
    if (trace)
      std::cout << "#" << taken << " " << rule_name(s.rule) << " | "
                << dump_line(c.current) << " | stack-depth=" << c.stack.size()
                << "\n";
  }
  std::cerr << "stopped after " << taken << " steps: "
            << (stop == Fault::None ? "step limit" : fault_name(stop)) << "\n";
  std::cout << dump(c.current);
  return kOk;
}

int cmd_check(const std::string &path, const std::string &formula_text,
              const std::string &formula_file, std::size_t bound,
              const std::string &format, std::size_t max_controls) {
  using namespace shylock;
  auto prog = load(path);
  if (formula_text.empty() == formula_file.empty())
    throw UsageError("give exactly one of --formula and --formula-file");
  std::string text =
      formula_file.empty() ? formula_text : read_file(formula_file);
  Formula f = parse_formula(text, *prog);
  CheckOptions opts;
  opts.max_controls = max_controls;
  CheckResult res = check(prog, f, bound, opts);
  std::cout << res.render(format == "kv" ? Format::KeyValue : Format::Text);
  switch (res.verdict) {
  case Verdict::Holds:
    return kOk;
  case Verdict::Violated:
    return kViolated;
  case Verdict::BoundExceeded:
    return kBoundExceeded;
  }
  return kInternal;
}

int cmd_bisim(const std::string &path, std::size_t steps, std::size_t trials,
              std::uint64_t seed) {
  auto prog = load(path);
  auto report = shylock::lockstep_bisim(*prog, steps, trials, seed);
  std::cout << shylock::render(report);
  return report.ok() ? kOk : kBisimFailed;
}

int cmd_pds_dump(const std::string &path, std::size_t bound,
                 std::size_t max_controls) {
  shylock::CheckOptions opts;
  opts.max_controls = max_controls;
  std::cout << shylock::dump_pds(load(path), bound, opts);
  return kOk;
}

} // namespace

int main(int argc, char **argv) {
  CLI::App app{"Model checker for heap-manipulating recursive programs"};
  app.require_subcommand(1);

  std::string path;
  std::string semantics = "abstract";
  std::size_t steps = 1000;
  std::uint64_t seed = 0;
  bool trace = false;
  std::string formula, formula_file, format = "text";
  std::size_t bound = 1;
  std::size_t trials = 100;
  std::size_t bisim_steps = 50;
  std::size_t max_controls = shylock::CheckOptions{}.max_controls;

  auto *parse = app.add_subcommand("parse", "Print the validated program");
  parse->add_option("program", path, "Program file")->required();

  auto *run = app.add_subcommand("run", "Simulate one run");
  run->add_option("program", path, "Program file")->required();
  run->add_option("--semantics", semantics, "concrete or abstract")
      ->check(CLI::IsMember({"concrete", "abstract"}))
      ->capture_default_str();
  run->add_option("--steps", steps, "Maximum number of steps")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  run->add_option("--seed", seed, "Seed for resolving choices")
      ->capture_default_str();
  run->add_flag("--trace", trace, "Print every step");

  auto *chk = app.add_subcommand("check", "Check a temporal formula");
  chk->add_option("program", path, "Program file")->required();
  chk->add_option("--formula", formula, "Formula text");
  chk->add_option("--formula-file", formula_file, "File holding the formula");
  chk->add_option("--bound", bound, "Visible heap bound k")
      ->capture_default_str();
  chk->add_option("--format", format, "text or kv")
      ->check(CLI::IsMember({"text", "kv"}))
      ->capture_default_str();
  chk->add_option("--max-controls", max_controls,
                  "Give up after this many controls")
      ->capture_default_str();

  auto *bis = app.add_subcommand("bisim", "Lockstep concrete/abstract test");
  bis->add_option("program", path, "Program file")->required();
  bis->add_option("--steps", bisim_steps, "Steps per trial")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  bis->add_option("--trials", trials, "Number of trials")
      ->capture_default_str();
  bis->add_option("--seed", seed, "Scheduler seed")->capture_default_str();

  auto *dump = app.add_subcommand("pds-dump", "Print discovered rules");
  dump->add_option("program", path, "Program file")->required();
  dump->add_option("--bound", bound, "Visible heap bound k")
      ->capture_default_str();
  dump->add_option("--max-controls", max_controls,
                   "Give up after this many controls")
      ->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp &e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp &e) {
    return app.exit(e);
  } catch (const CLI::ParseError &e) {
    app.exit(e);
    return kUsage;
  }

  try {
    if (*parse)
      return cmd_parse(path);
    if (*run)
      return cmd_run(path, semantics, steps, seed, trace);
    if (*chk)
      return cmd_check(path, formula, formula_file, bound, format,
                       max_controls);
    if (*bis)
      return cmd_bisim(path, bisim_steps, trials, seed);
    if (*dump)
      return cmd_pds_dump(path, bound, max_controls);
  } catch (const UsageError &e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const shylock::ParseError &e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kDataError;
  } catch (const shylock::ValidationError &e) {
    std::cerr << "invalid program: " << e.what() << "\n";
    return kDataError;
  } catch (const std::exception &e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kInternal;
  }
  return kUsage;
}
