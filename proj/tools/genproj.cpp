#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "genproj/cli.hpp"

int main(int argc, char** argv) {
  using namespace genproj::cli;

  CLI::App app{"Tangent varieties, secants and generic projections of graph varieties"};
  app.require_subcommand(1);

  CommandOptions opts;
  std::string input, out_path, format = "human";
  double tol = 0, box = 0;
  int starts = 0;
  std::string center;

  auto add_common = [&](CLI::App* sub, bool needs_input) {
    if (needs_input) sub->add_option("input", input, "variety file, or @name for a built-in")->required();
    sub->add_option("--seed", opts.seed, "random seed")->capture_default_str();
    sub->add_option("--out", out_path, "write the report to this file");
    sub->add_option("--format", format, "human or machine")->check(CLI::IsMember({"human", "machine"}));
  };
  auto add_sampling = [&](CLI::App* sub) {
    sub->add_option("--trials", opts.trials, "number of random samples")->check(CLI::PositiveNumber);
    sub->add_option("--tol", tol, "relative rank tolerance")->check(CLI::PositiveNumber);
  };
  auto add_solver = [&](CLI::App* sub) {
    sub->add_option("--center", center, "projection center: 2n affine or 2n+1 projective values, or 'random'");
    sub->add_option("--starts", starts, "Newton start points")->check(CLI::PositiveNumber);
    sub->add_option("--box", box, "half-width of the start box")->check(CLI::PositiveNumber);
    sub->add_option("--trials", opts.trials, "samples for the fullness check")->check(CLI::PositiveNumber);
    sub->add_option("--tol", tol, "relative rank tolerance")->check(CLI::PositiveNumber);
  };

  auto* tan = app.add_subcommand("tan-check", "decide whether the tangent variety fills P^2n");
  add_common(tan, true);
  tan->add_option("--trials", opts.trials, "samples for randomized checks")->check(CLI::PositiveNumber);
  auto* sec = app.add_subcommand("secant-dim", "estimate the dimension of the secant variety");
  add_common(sec, true);
  add_sampling(sec);
  sec->add_option("--box", box, "half-width of the sampling box")->check(CLI::PositiveNumber);
  auto* dom = app.add_subcommand("dominance", "check that tangent-space intersection is dominant");
  add_common(dom, true);
  add_sampling(dom);
  dom->add_option("--box", box, "half-width of the sampling box")->check(CLI::PositiveNumber);
  auto* ram = app.add_subcommand("ramify", "ramification points of the projection from a center");
  add_common(ram, true);
  add_solver(ram);
  auto* rec = app.add_subcommand("recover", "recover the projection center from its ramification points");
  add_common(rec, true);
  add_solver(rec);
  auto* ex = app.add_subcommand("examples", "list the built-in varieties");
  add_common(ex, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : kInputError;
  }

  if (tol > 0) opts.tol = tol;
  if (box > 0) opts.box = box;
  if (starts > 0) opts.starts = starts;
  if (!center.empty()) opts.center = center;

  CLI::App* chosen = app.get_subcommands().front();
  CommandResult r = run_command(chosen->get_name(), input, opts);
  const std::string text = format == "machine" ? machine_text(r) : r.human;

  if (!out_path.empty()) {
    std::ofstream out(out_path, std::ios::binary);
    if (!out) {
      std::cerr << "error: cannot write '" << out_path << "'\n";
      return kInputError;
    }
    out << text;
  } else {
    (r.exit_code == kInputError ? std::cerr : std::cout) << text;
  }
  return r.exit_code;
}
