// tcitool: runs experiment manifests and writes CSV/JSON reports.
//
// Exit codes: 0 clean, 1 inequality violation, 2 bad manifest or usage,
// 3 runtime error in the numerics.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "tci/commands.hpp"
#include "tci/corpus.hpp"
#include "tci/manifest.hpp"

namespace {

struct Flags {
  std::string manifest;
  std::optional<std::uint64_t> seed;
  std::string out;
  unsigned workers = 0;
  bool oracle = false;
  std::optional<double> tolerance_scale;
};

int run(const std::string& command, const Flags& flags) {
  tci::ExperimentManifest m;
  try {
    if (flags.manifest.empty()) {
      if (command != "suite") {
        std::cerr << "tcitool " << command << ": --manifest is required\n";
        return 2;
      }
      m.command = "suite";
      m.seed = tci::kDefaultSeed;
    } else {
      std::ifstream in(flags.manifest);
      if (!in) {
        std::cerr << "cannot read manifest " << flags.manifest << "\n";
        return 2;
      }
      std::stringstream buf;
      buf << in.rdbuf();
      m = tci::parse_manifest(buf.str());
    }
    if (m.command != command) {
      std::cerr << flags.manifest << ": manifest is for '" << m.command << "', not '" << command << "'\n";
      return 2;
    }
    if (flags.seed) m.seed = *flags.seed;
    if (flags.oracle) m.oracle = true;
    if (flags.tolerance_scale) {
      if (!(*flags.tolerance_scale >= 0.0)) {
        std::cerr << "--tolerance-scale must be >= 0\n";
        return 2;
      }
      m.tolerance_scale = *flags.tolerance_scale;
    }
    tci::validate_manifest(m);
  } catch (const tci::SchemaError& e) {
    std::cerr << flags.manifest << ": " << tci::describe(e) << "\n";
    return 2;
  }

  try {
    auto result = tci::run_manifest(m, flags.workers, [](const std::string& line) {
      std::cout << line << std::endl;
    });
    if (!flags.out.empty())
      for (const auto& path : tci::write_report(result.report, flags.out)) std::cout << "wrote " << path.string() << "\n";
    for (const auto& v : result.violations) std::cerr << "VIOLATION " << v << "\n";
    return result.exit_code;
  } catch (const tci::SchemaError& e) {
    std::cerr << flags.manifest << ": " << tci::describe(e) << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Transport, isotropy and log-Sobolev numerics"};
  app.require_subcommand(1);
  Flags flags;
  std::uint64_t seed = 0;
  double scale = 1.0;
  std::string chosen;
  for (const auto& name : tci::command_names()) {
    auto* sub = app.add_subcommand(name);
    sub->add_option("--manifest", flags.manifest, "experiment manifest (JSON)");
    sub->add_option("--seed", seed, "override the manifest seed");
    sub->add_option("--out", flags.out, "directory for CSV/JSON reports");
    sub->add_option("--workers", flags.workers, "worker threads (0 = all cores)");
    sub->add_flag("--oracle", flags.oracle, "cross-check against brute-force oracles");
    sub->add_option("--tolerance-scale", scale, "multiply every tolerance by this factor");
    sub->callback([&, name, sub] {
      chosen = name;
      if (sub->count("--seed")) flags.seed = seed;
      if (sub->count("--tolerance-scale")) flags.tolerance_scale = scale;
    });
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }
  return run(chosen, flags);
}
