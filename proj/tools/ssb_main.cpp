#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "ssb/error.hpp"
#include "ssb/report.hpp"
#include "ssb/specfile.hpp"

namespace fs = std::filesystem;

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ssb::Error("cannot open '" + path + "'");
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ssb::Error("cannot write '" + path.string() + "'");
  out << text;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Similarity boundaries of self-similar sets"};
  std::string command, spec_path, gallery_name, out_dir;
  ssb::RunOptions opts;
  int depth = -1;
  double tol = 0;
  std::uint64_t budget = 0, seed = 0;

  app.add_option("command", command, "dim | attractor | boundary | invariance | measure | battery | tilecheck | render")
      ->required()
      ->check(CLI::IsMember(ssb::command_names()));
  auto* spec_opt = app.add_option("--spec", spec_path, "IFS spec file");
  auto* gal_opt = app.add_option("--gallery", gallery_name, "built-in fixture")->check(CLI::IsMember(ssb::gallery_names()));
  spec_opt->excludes(gal_opt);
  auto* depth_opt = app.add_option("--depth", depth, "approximation depth")->check(CLI::NonNegativeNumber);
  auto* tol_opt = app.add_option("--tol", tol, "overlap tolerance tau")->check(CLI::PositiveNumber);
  app.add_option("--out", out_dir, "write the report (and SVG) into this directory");
  app.add_flag("--svg", opts.svg, "also render an SVG");
  auto* budget_opt = app.add_option("--budget", budget, "address budget");
  auto* seed_opt = app.add_option("--seed", seed, "seed for sampled checks");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }
  if (spec_path.empty() && gallery_name.empty()) {
    std::cerr << "error: one of --spec or --gallery is required\n";
    return 1;
  }
  if (*depth_opt) opts.depth = depth;
  if (*tol_opt) opts.tol = tol;
  if (*budget_opt) opts.budget = budget;
  if (*seed_opt) opts.seed = seed;
  if (command == "render") opts.svg = true;

  ssb::SpecFile spec;
  try {
    spec = spec_path.empty() ? ssb::gallery(gallery_name) : ssb::parse_spec(read_file(spec_path));
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }

  try {
    const ssb::RunOutput out = ssb::run_command(command, spec, opts);
    const std::string stem = spec.name + "." + command;
    if (out_dir.empty()) {
      std::cout << out.report;
      if (out.svg) {
        write_file(stem + ".svg", *out.svg);
        std::cerr << "wrote " << stem << ".svg\n";
      }
    } else {
      fs::create_directories(out_dir);
      write_file(fs::path(out_dir) / (stem + ".txt"), out.report);
      if (out.svg) write_file(fs::path(out_dir) / (stem + ".svg"), *out.svg);
    }
  } catch (const ssb::BudgetExceeded& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
