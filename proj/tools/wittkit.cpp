// wittkit command line: run ring-spec check files, print derived Witt
// polynomials, and reformat ring-spec files.

#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <sstream>

#include "wittkit/errors.hpp"
#include "wittkit/ringspec.hpp"
#include "wittkit/runner.hpp"
#include "wittkit/witt.hpp"
#include "wittkit/witt_checks.hpp"

namespace {

constexpr int kExitPass = 0;
constexpr int kExitFail = 1;
constexpr int kExitInput = 2;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw wittkit::InvalidSpec("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int cmd_run(const std::string& file, std::uint64_t seed, const std::string& json_out, unsigned jobs, bool no_timing) {
  wittkit::CheckPlan plan;
  try {
    plan = wittkit::parse_ringspec(read_file(file));
  } catch (const wittkit::Error& e) {
    std::cerr << file << ": " << e.what() << "\n";
    return kExitInput;
  }
  wittkit::RunOptions opts;
  opts.seed = seed;
  opts.jobs = jobs;
  opts.timing = !no_timing;
  const auto report = wittkit::run_checks(plan, opts);
  const std::string json = report.to_json(opts.timing).dump(2) + "\n";
  if (json_out == "-") {
    std::cout << json;
  } else {
    for (const auto& c : report.checks) {
      std::cout << to_string(c.verdict) << "  " << c.kind << " " << c.name;
      if (c.verdict == wittkit::Verdict::Error) std::cout << "  (" << c.details.value("message", "") << ")";
      std::cout << "\n";
    }
    std::cout << (report.pass() ? "overall: pass" : "overall: fail") << "\n";
    if (!json_out.empty()) {
      std::ofstream out(json_out, std::ios::binary);
      if (!out) {
        std::cerr << "cannot write " << json_out << "\n";
        return kExitInput;
      }
      out << json;
    }
  }
  return report.pass() ? kExitPass : kExitFail;
}

int cmd_derive(long p, int n) {
  if (p != 2 && p != 3 && p != 5) {
    std::cerr << "p must be 2, 3 or 5\n";
    return kExitInput;
  }
  if (n < 0 || n + 1 > wittkit::witt_index_cap()) {
    std::cerr << "n must be in 0.." << wittkit::witt_index_cap() - 1 << "\n";
    return kExitInput;
  }
  bool integral = true;
  for (const auto& r : wittkit::derive_all(p, n)) {
    std::cout << to_string(r.kind) << "_" << r.n << " = ";
    if (r.integral) {
      std::cout << wittkit::derive_witt_polynomial(p, r.n, r.kind).str() << "\n";
    } else {
      std::cout << "(not integral)\n";
      integral = false;
    }
  }
  return integral ? kExitPass : kExitFail;
}

int cmd_fmt(const std::string& file) {
  try {
    std::cout << wittkit::print_ringspec(wittkit::parse_ringspec(read_file(file), false));
  } catch (const wittkit::Error& e) {
    std::cerr << file << ": " << e.what() << "\n";
    return kExitInput;
  }
  return kExitPass;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact Witt vector and almost Cohen-Macaulay checks"};
  app.require_subcommand(1);

  auto* run = app.add_subcommand("run", "Run every check of a ring-spec file");
  std::string run_file, json_out;
  std::uint64_t seed = 1;
  unsigned jobs = 1;
  bool no_timing = false;
  run->add_option("file", run_file, "Ring-spec file")->required();
  run->add_option("--seed", seed, "Default seed for randomized checks");
  run->add_option("--json", json_out, "Write the JSON report here ('-' for stdout)");
  run->add_option("--jobs", jobs, "Checks to run concurrently")->check(CLI::Range(1u, 256u));
  run->add_flag("--no-timing", no_timing, "Omit wall times from the report");

  auto* derive = app.add_subcommand("derive-polys", "Print the universal Witt polynomials");
  long p = 2;
  int n = 2;
  derive->add_option("--p", p, "Prime")->required();
  derive->add_option("--n", n, "Largest index")->required();

  auto* fmt = app.add_subcommand("fmt", "Print a ring-spec file in canonical form");
  std::string fmt_file;
  fmt->add_option("file", fmt_file, "Ring-spec file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitPass : kExitInput;
  }

  if (*run) return cmd_run(run_file, seed, json_out, jobs, no_timing);
  if (*derive) return cmd_derive(p, n);
  return cmd_fmt(fmt_file);
}
