#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "qnl/presets.hpp"

namespace {

struct Flags {
  std::string config_path;
  std::string preset;
  std::string out_dir = ".";
  bool check = false;
  bool dump = false;
  std::optional<std::uint64_t> seed;
  std::string scheme;
  std::string kernel;
  std::optional<int> ratio;
  std::vector<int> n_list;
};

void add_common(CLI::App* cmd, Flags& f) {
  cmd->add_option("--config", f.config_path, "key=value run description file");
  cmd->add_option("--preset", f.preset, "named built-in experiment preset");
  cmd->add_option("--out", f.out_dir, "output directory (default: .)");
  cmd->add_flag("--check", f.check, "verify built-in thresholds; exit 3 on failure");
  cmd->add_option("--seed", f.seed, "seed for randomized checks");
  cmd->add_option("--scheme", f.scheme, "compatible | direct")
      ->check(CLI::IsMember({"compatible", "direct"}));
  cmd->add_option("--kernel", f.kernel, "constant | inverse_abs")
      ->check(CLI::IsMember({"constant", "inverse_abs"}));
  cmd->add_option("--ratio", f.ratio, "horizon/grid ratio r (delta = r*h)");
  cmd->add_option("--N", f.n_list, "mesh N, or comma list of refinement levels")
      ->delimiter(',');
}

qnl::RunConfig resolve_config(const Flags& f) {
  if (!f.config_path.empty() && !f.preset.empty())
    throw qnl::config_error("give either --config or --preset, not both");
  qnl::RunConfig c;
  if (!f.preset.empty()) c = qnl::parse_config(qnl::find_preset(f.preset).config_text);
  if (!f.config_path.empty()) c = qnl::parse_config(qnl::read_file(f.config_path));
  if (f.seed) c.seed = *f.seed;
  if (!f.scheme.empty()) c.scheme = f.scheme;
  if (!f.kernel.empty()) c.kernel_type = f.kernel;
  if (f.ratio) {
    c.kernel_ratio = *f.ratio;
    c.kernel_delta.reset();
  }
  if (f.n_list.size() == 1) {
    c.n_half = f.n_list[0];
    c.levels.clear();
  } else if (f.n_list.size() > 1) {
    c.levels = f.n_list;
    c.n_half.reset();
  }
  return c;
}

int run(const std::string& sub, const Flags& f) {
  const auto cfg = resolve_config(f);
  qnl::CommandResult result = sub == "assemble"
                                  ? qnl::cmd_assemble(cfg, f.dump)
                                  : qnl::run_command(sub, cfg, f.preset);
  for (const auto& [name, content] : result.files)
    qnl::write_file(std::filesystem::path(f.out_dir) / name, content);
  for (const auto& note : result.notes) std::cout << note << "\n";
  for (const auto& [name, content] : result.files)
    std::cout << "wrote " << (std::filesystem::path(f.out_dir) / name).string()
              << "\n";
  if (f.check) {
    std::cout << "check: " << (result.check_pass ? "PASS" : "FAIL") << "\n";
    if (!result.check_pass) return 3;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"1D nonlocal/local coupled diffusion toolkit"};
  app.require_subcommand(1);

  Flags flags;
  const std::vector<std::pair<std::string, std::string>> subs = {
      {"solve", "solve one problem, emit the solution curve"},
      {"convergence", "refinement sweep against the exact local solution"},
      {"patch-test", "apply the stencils to a linear field"},
      {"properties", "matrix diagnostics: symmetry, definiteness, inverse sign"},
      {"compare-direct", "direct vs compatible coupling error sweep"},
      {"boundary-layer", "volumetric-constraint layer study, f = 1"},
      {"singular", "near-grid singular forcing study"},
      {"weights", "weight function and effective diffusion curves"},
      {"assemble", "assemble only; --dump writes the stencil table"},
  };
  for (const auto& [name, desc] : subs) {
    auto* cmd = app.add_subcommand(name, desc);
    add_common(cmd, flags);
    if (name == "assemble")
      cmd->add_flag("--dump", flags.dump, "write matrix.txt stencil dump");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  std::string sub;
  for (const auto* cmd : app.get_subcommands()) sub = cmd->get_name();

  try {
    return run(sub, flags);
  } catch (const qnl::config_error& e) {
    std::cerr << "configuration error: " << e.what() << "\n";
    return 1;
  } catch (const qnl::argument_error& e) {
    std::cerr << "configuration error: " << e.what() << "\n";
    return 1;
  } catch (const qnl::singular_error& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
