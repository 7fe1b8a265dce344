// pruefer: command-line front end.
//
//   pruefer <subcommand> [--potential FILE] [--n-max N] [--tol T] [--seed S]
//           [--count C] [--jobs J] [--out FILE] [--format json|csv]

#include <map>
#include <string>

#include <CLI11.hpp>

#include "pruefer/cli.hpp"

int main(int argc, char** argv) {
  using pruefer::cli::Format;
  using pruefer::cli::RunConfig;
  using pruefer::cli::Subcommand;

  CLI::App app{"Dirichlet spectra and eigenvalue-ratio checks for -y'' + q y = lambda y on [0,1]"};
  app.require_subcommand(1, 1);

  RunConfig cfg;
  const std::map<std::string, Format> formats{{"json", Format::json}, {"csv", Format::csv}};

  const auto add_common = [&](CLI::App* sub, bool needs_potential) {
    auto* opt = sub->add_option("--potential", cfg.potential_file, "potential spec (JSON)");
    if (needs_potential) opt->required()->check(CLI::ExistingFile);
    sub->add_option("--n-max", cfg.n_max, "number of eigenvalues")->capture_default_str();
    sub->add_option("--tol", cfg.tol, "relative integrator tolerance")->capture_default_str();
    sub->add_option("--jobs", cfg.jobs, "worker threads (0: all cores)")->capture_default_str();
    sub->add_option("--out", cfg.out, "report path (default: standard output)");
    sub->add_option("--format", cfg.format, "report format")
        ->transform(CLI::CheckedTransformer(formats, CLI::ignore_case))
        ->default_str("json");
  };

  std::map<CLI::App*, Subcommand> subcommands;
  const auto add_sub = [&](Subcommand s, const std::string& help) {
    CLI::App* sub = app.add_subcommand(std::string(pruefer::cli::subcommand_name(s)), help);
    add_common(sub, s != Subcommand::sweep);
    subcommands[sub] = s;
    return sub;
  };
  add_sub(Subcommand::classify, "shape classification and hypothesis margins");
  add_sub(Subcommand::spectrum, "eigenvalues lambda_1 .. lambda_{n-max}");
  add_sub(Subcommand::check_bounds, "eigenvalue-ratio bound suites");
  add_sub(Subcommand::scan_theta, "angle-derivative sign scan up to z_{n-max}");
  add_sub(Subcommand::audit_lemmas, "numerical audits of the block inequalities");
  add_sub(Subcommand::oracle, "finite-difference cross-check of the spectrum");
  CLI::App* sweep = add_sub(Subcommand::sweep, "bound suites over sampled admissible potentials");
  sweep->add_option("--seed", cfg.seed, "first seed")->capture_default_str();
  sweep->add_option("--count", cfg.count, "number of potentials")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : pruefer::cli::kExitInputError;
  }
  for (const auto& [sub, s] : subcommands) {
    if (sub->parsed()) cfg.subcommand = s;
  }
  return pruefer::cli::run(cfg);
}
