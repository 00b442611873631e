#include <CLI11.hpp>
#include <iostream>
#include <thread>

#include "config.hpp"
#include "deltaloop/errors.hpp"
#include "run.hpp"

namespace {

constexpr int kOk = 0;
constexpr int kNumerical = 1;
constexpr int kUsage = 2;

std::string kinds_list() {
  std::string s;
  for (const auto& k : deltaloop::cli::kind_names()) s += (s.empty() ? "" : ", ") + k;
  return s;
}

}  // namespace

int main(int argc, char** argv) {
  using namespace deltaloop::cli;

  CLI::App app{"Eigenvalue brackets and counts for delta interactions on closed planar curves"};
  app.footer("Kinds: " + kinds_list() + "\nFlags override values from the config file.");

  std::string kind_name;
  std::string config_path;
  std::string out_dir;
  std::size_t workers = 0;
  std::string beta_list;
  std::size_t grid_ns = 0, grid_nu = 0, grid_n1d = 0, n_eigs = 0;

  app.add_option("kind", kind_name, "Computation kind (or [run] kind in the config)");
  app.add_option("--config", config_path, "INI configuration file");
  app.add_option("--out", out_dir, "Output directory");
  app.add_option("--workers", workers, "Worker threads for beta points (default: processors)");
  app.add_option("--beta-list", beta_list, "Comma-separated beta values, increasing");
  app.add_option("--grid-ns", grid_ns, "Strip grid intervals along the curve");
  app.add_option("--grid-nu", grid_nu, "Strip grid intervals across the strip");
  app.add_option("--grid-n1d", grid_n1d, "1D grid points");
  app.add_option("--n-eigs", n_eigs, "Number of eigenvalues / bracketed indices");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  const std::size_t processors = std::max(1u, std::thread::hardware_concurrency());
  try {
    RunConfig config;
    config.workers = processors;
    if (!config_path.empty()) config = load_config(std::filesystem::path(config_path), processors);

    if (!kind_name.empty()) {
      const auto k = parse_kind(kind_name);
      if (!k) {
        std::cerr << "error: unknown kind '" << kind_name << "'; valid kinds: " << kinds_list() << '\n';
        return kUsage;
      }
      config.kind = k;
    }
    if (!out_dir.empty()) config.out = out_dir;
    if (workers > 0) config.workers = workers;
    if (!beta_list.empty()) {
      try {
        config.betas = parse_number_list(beta_list);
      } catch (const std::invalid_argument& e) {
        std::cerr << "error: --beta-list: " << e.what() << '\n';
        return kUsage;
      }
      config.lines.erase("params.betas");
    }
    if (grid_ns > 0) config.strip_grid.ns = grid_ns;
    if (grid_nu > 0) config.strip_grid.nu = grid_nu;
    if (grid_n1d > 0) config.n1d = grid_n1d;
    if (n_eigs > 0) config.n = n_eigs;

    const auto result = run(config, std::cout);
    for (const auto& f : result.files) std::cout << "wrote " << f.string() << '\n';
    if (result.flagged > 0) std::cout << result.flagged << " row(s) flagged as not certified\n";
    return kOk;
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const deltaloop::PreconditionError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const deltaloop::DomainError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const deltaloop::NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return kNumerical;
  } catch (const std::exception& e) {
    std::cerr << "failure: " << e.what() << '\n';
    return kNumerical;
  }
}
