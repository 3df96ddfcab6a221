#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "envpde/config.hpp"
#include "envpde/errors.hpp"

namespace {

void usage(std::ostream& os) {
  os << "usage: envelope-pde <config-file> [--out DIR] [--seed N] [--quiet]\n"
        "  config-file  key = value run description (# comments)\n"
        "  --out DIR    override the output directory\n"
        "  --seed N     override the random seed\n"
        "  --quiet      do not echo the summary to stdout\n";
}

// Best effort: the contract is that summary.txt exists even when the
// run never starts (parse or read failure).
void write_failure_summary(const std::string& out_dir, const std::string& error,
                           int code) {
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) return;
  std::ofstream out(std::filesystem::path(out_dir) / "summary.txt");
  out << "error = " << error << '\n';
  out << "exit_code = " << code << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  std::string config_path;
  std::optional<std::string> out_override;
  std::optional<long> seed_override;
  bool quiet = false;

  for (int a = 1; a < argc; ++a) {
    const std::string arg = argv[a];
    if (arg == "--help" || arg == "-h") {
      usage(std::cout);
      return 0;
    }
    if (arg == "--quiet") {
      quiet = true;
    } else if (arg == "--out") {
      if (++a >= argc) {
        std::cerr << "error: --out needs a directory\n";
        return 2;
      }
      out_override = argv[a];
    } else if (arg == "--seed") {
      if (++a >= argc) {
        std::cerr << "error: --seed needs a value\n";
        return 2;
      }
      try {
        std::size_t pos = 0;
        const long v = std::stol(argv[a], &pos);
        if (pos != std::string(argv[a]).size() || v < 0)
          throw std::invalid_argument("");
        seed_override = v;
      } catch (const std::exception&) {
        std::cerr << "error: --seed needs a nonnegative integer\n";
        return 2;
      }
    } else if (!arg.empty() && arg[0] == '-') {
      std::cerr << "error: unknown option '" << arg << "'\n";
      usage(std::cerr);
      return 2;
    } else if (config_path.empty()) {
      config_path = arg;
    } else {
      std::cerr << "error: more than one config file given\n";
      usage(std::cerr);
      return 2;
    }
  }
  if (config_path.empty()) {
    usage(std::cerr);
    return 2;
  }

  const std::string fallback_out = out_override.value_or("out");

  std::ifstream in(config_path, std::ios::binary);
  if (!in) {
    const std::string msg = "cannot read config file '" + config_path + "'";
    std::cerr << "error: " << msg << "\n";
    write_failure_summary(fallback_out, msg, 4);
    return 4;
  }
  std::ostringstream buf;
  buf << in.rdbuf();

  envpde::RunConfig cfg;
  try {
    cfg = envpde::parse_config(buf.str());
  } catch (const envpde::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    write_failure_summary(fallback_out, e.what(), 2);
    return 2;
  }

  if (out_override) cfg.out = *out_override;
  if (seed_override) cfg.seed = static_cast<std::uint64_t>(*seed_override);
  cfg.quiet = quiet;

  return envpde::run(cfg);
}
