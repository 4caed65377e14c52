// synthcolon: generate, inspect and evaluate synthetic colonoscopy datasets.
//
// Exit codes: 0 success, 1 generation/evaluation failure, 2 usage error.

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "synthcolon/synthcolon.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitUsage = 2;

namespace fs = std::filesystem;
using namespace synthcolon;

struct GenerateArgs {
  std::string config_path;
  std::string out_dir;
  std::optional<std::size_t> count;
  std::optional<std::uint64_t> seed;
  std::optional<unsigned> workers;
  std::optional<int> resolution;
  std::optional<std::size_t> min_polyp_pixels;
  std::optional<std::size_t> max_retries;
  bool quiet{false};
};

int run_generate(const GenerateArgs& args) {
  GenerationConfig config;
  try {
    if (!args.config_path.empty()) {
      config = load_config(args.config_path);
    }
    if (args.count) {
      config.count = *args.count;
    }
    if (args.seed) {
      config.seed = *args.seed;
    }
    if (args.workers) {
      config.workers = *args.workers;
    }
    if (args.resolution) {
      config.resolution = *args.resolution;
    }
    if (args.min_polyp_pixels) {
      config.min_polyp_pixels = *args.min_polyp_pixels;
    }
    if (args.max_retries) {
      config.max_retries = *args.max_retries;
    }
    config.validate();
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const ReadError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  }

  const auto start = std::chrono::steady_clock::now();
  ProgressCallback progress;
  if (!args.quiet) {
    progress = [](std::size_t done, std::size_t total) {
      if (done == total || done % 100 == 0) {
        std::cerr << "\rgenerated " << done << "/" << total << std::flush;
        if (done == total) {
          std::cerr << '\n';
        }
      }
    };
  }
  try {
    const Manifest manifest = generate_dataset(config, DatasetLayout{args.out_dir}, progress);
    std::size_t rejected = 0;
    for (const auto& r : manifest.samples) {
      rejected += r.rejected_attempts;
    }
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::cout << "wrote " << manifest.samples.size() << " samples (" << rejected << " rejected attempts) to "
              << args.out_dir << " in " << seconds << " s\n";
  } catch (const GenerationError& e) {
    std::cerr << "generation failed: " << e.what() << '\n';
    return kExitFailure;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitFailure;
  }
  return kExitOk;
}

int run_inspect(const std::string& dataset, std::uint64_t index) {
  const DatasetLayout layout{dataset};
  Manifest manifest;
  try {
    manifest = read_manifest(layout);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitFailure;
  }
  if (index >= manifest.samples.size()) {
    std::cerr << "error: index " << index << " out of range (dataset has " << manifest.samples.size()
              << " samples)\n";
    return kExitUsage;
  }
  try {
    std::cout << format_summary(inspect(layout, index));
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitFailure;
  }
  return kExitOk;
}

int run_evaluate(const std::string& pred, const std::string& gt, double threshold, const std::string& report_path,
                 std::string name, std::optional<unsigned> workers) {
  if (!(threshold >= 0.0 && threshold <= 1.0)) {
    std::cerr << "error: --threshold must be in [0, 1]\n";
    return kExitUsage;
  }
  if (name.empty()) {
    name = fs::path(gt).lexically_normal().filename().string();
    if (name.empty() || name == "." || name == "..") {
      name = fs::path(gt).lexically_normal().parent_path().filename().string();
    }
  }
  try {
    const auto report = metrics::evaluate_dirs(pred, gt, threshold, workers ? *workers : default_worker_count());
    const std::string table = metrics::format_table({{name, report}});
    std::cout << table;
    std::ofstream json_out(report_path, std::ios::binary | std::ios::trunc);
    if (!json_out) {
      throw WriteError(report_path, "cannot open for writing");
    }
    json_out << metrics::report_to_json(report).dump(2) << '\n';
    std::ofstream table_out(report_path + ".txt", std::ios::binary | std::ios::trunc);
    table_out << table;
  } catch (const Error& e) {
    std::cerr << "evaluation failed: " << e.what() << '\n';
    return kExitFailure;
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Synthetic colonoscopy dataset generator and mask evaluator"};
  app.require_subcommand(1);

  GenerateArgs gen;
  auto* generate = app.add_subcommand("generate", "Generate a dataset");
  generate->add_option("--config", gen.config_path, "Config file (JSON)")->check(CLI::ExistingFile);
  generate->add_option("--out", gen.out_dir, "Output directory (must be empty or absent)")->required();
  generate->add_option("--count", gen.count, "Number of samples");
  generate->add_option("--seed", gen.seed, "Global seed");
  generate->add_option("--workers", gen.workers, "Worker threads (default: $SYNTHCOLON_WORKERS or all cores)");
  generate->add_option("--resolution", gen.resolution, "Image side length in pixels");
  generate->add_option("--min-polyp-pixels", gen.min_polyp_pixels, "Rejection threshold at 500x500");
  generate->add_option("--max-retries", gen.max_retries, "Attempts per sample before failing");
  generate->add_flag("--quiet", gen.quiet, "No progress output");

  std::string dataset;
  std::uint64_t index = 0;
  auto* inspect_cmd = app.add_subcommand("inspect", "Summarize one sample");
  inspect_cmd->add_option("--dataset", dataset, "Dataset root")->required();
  inspect_cmd->add_option("--index", index, "Sample index")->required();

  std::string pred;
  std::string gt;
  double threshold = 0.5;
  std::string report;
  std::string name;
  std::optional<unsigned> eval_workers;
  auto* evaluate = app.add_subcommand("evaluate", "Score predicted masks against ground truth");
  evaluate->add_option("--pred", pred, "Directory of predicted masks")->required();
  evaluate->add_option("--gt", gt, "Directory of ground-truth masks")->required();
  evaluate->add_option("--threshold", threshold, "Binarization threshold in [0, 1]");
  evaluate->add_option("--report", report, "Report path (JSON; a .txt table is written alongside)")->required();
  evaluate->add_option("--name", name, "Dataset column label (default: ground-truth directory name)");
  evaluate->add_option("--workers", eval_workers, "Worker threads");

  auto* print_config = app.add_subcommand("default-config", "Print the default config file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  if (*generate) {
    return run_generate(gen);
  }
  if (*inspect_cmd) {
    return run_inspect(dataset, index);
  }
  if (*evaluate) {
    return run_evaluate(pred, gt, threshold, report, name, eval_workers);
  }
  if (*print_config) {
    std::cout << config_to_json(GenerationConfig{}, true).dump(2) << '\n';
    return kExitOk;
  }
  return kExitUsage;
}
