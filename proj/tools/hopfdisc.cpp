#include "hopfdisc/hopfdisc.hpp"

#include <CLI11.hpp>

#include <atomic>
#include <iostream>

using namespace hopfdisc;

namespace {

constexpr int kExitValidation = 2;
constexpr int kExitRouteFailure = 3;

// Flag overrides in the order they are applied on top of a config file.
const std::pair<const char*, const char*> kOverrides[] = {
    {"--family", "family"}, {"--beta0", "beta0"}, {"--beta1", "beta1"}, {"--dbeta", "dbeta"},
    {"--m", "m"},           {"--n", "n"},         {"--a", "a"},         {"--b", "b"},
    {"--warp", "warp"},     {"--table", "table"}, {"--grid", "grid"},   {"--eps-ladder", "eps_ladder"},
    {"--phi0", "phi0"},     {"--name", "name"},   {"--emit", "emit"},   {"--out-dir", "out_dir"},
    {"--threads", "threads"}};

struct Outcome {
  std::string line;
  bool invalid = false;
  bool failed = false;
};

Outcome run_one(const RunConfig& cfg, bool print_report) {
  Outcome o;
  try {
    PhaseReport r = run(cfg);
    auto files = write_outputs(cfg, r);
    if (print_report) std::cout << format_report(r);
    o.failed = !r.failures.empty();
    o.line = r.name + ": delta_g=" + fmt_double(r.delta_g) + " delta_total=" + fmt_double(r.delta_total) +
             " failures=" + std::to_string(r.failures.size());
    for (const auto& f : files) o.line += "\n  wrote " + f;
  } catch (const Error& e) {
    o.invalid = true;
    o.line = cfg.name + ": " + e.what();
  }
  return o;
}

int run_batch(const std::string& dir, const std::string& out_dir, bool strict, unsigned jobs) {
  namespace fs = std::filesystem;
  if (!fs::is_directory(dir)) {
    std::cerr << "batch directory not found: " << dir << '\n';
    return kExitValidation;
  }
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir))
    if (entry.is_regular_file() && entry.path().extension() == ".cfg") files.push_back(entry.path());
  std::sort(files.begin(), files.end());
  std::vector<Outcome> out(files.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i; (i = next++) < files.size();) {
      try {
        RunConfig cfg = load_config(files[i].string());
        if (!out_dir.empty()) cfg.out_dir = out_dir;
        cfg.area.threads = 1;
        out[i] = run_one(cfg, false);
      } catch (const Error& e) {
        out[i] = {files[i].filename().string() + ": " + e.what(), true, false};
      }
    }
  };
  if (jobs == 0) jobs = std::max(1u, std::thread::hardware_concurrency());
  std::vector<std::thread> pool;
  for (unsigned j = 0; j < std::min<std::size_t>(jobs, files.size()); ++j) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  bool invalid = false, failed = false;
  for (const Outcome& o : out) {
    std::cout << o.line << '\n';
    invalid |= o.invalid;
    failed |= o.failed;
  }
  if (invalid) return kExitValidation;
  return strict && failed ? kExitRouteFailure : 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Rolling-disc phase calculator: geometric phase, holonomy and pole indices"};
  std::string config_path, batch_dir;
  bool strict = false;
  unsigned jobs = 0;
  std::map<std::string, std::string> values;
  app.add_option("--config", config_path, "key = value configuration file");
  for (const auto& [flag, key] : kOverrides) app.add_option(flag, values[key], std::string("override '") + key + "'");
  app.add_flag("--strict", strict, "exit with status 3 when a cross-check fails");
  app.add_option("--batch", batch_dir, "run every *.cfg file in a directory");
  app.add_option("--jobs", jobs, "worker threads for --batch (default: all cores)");
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitValidation;
  }

  if (!batch_dir.empty()) {
    std::string out_dir = app.count("--out-dir") ? values["out_dir"] : "";
    return run_batch(batch_dir, out_dir, strict, jobs);
  }

  RunConfig cfg;
  try {
    if (!config_path.empty()) cfg = load_config(config_path);
    for (const auto& [flag, key] : kOverrides) {
      if (!app.count(flag)) continue;
      try {
        set_field(cfg, key, values[key]);
      } catch (const Error& e) {
        fail(ErrorKind::Config, std::string(flag) + ": " + e.detail());
      }
    }
    if (strict) cfg.strict = true;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitValidation;
  }

  Outcome o = run_one(cfg, true);
  if (o.invalid) {
    std::cerr << "error: " << o.line << '\n';
    return kExitValidation;
  }
  std::cerr << o.line << '\n';
  return cfg.strict && o.failed ? kExitRouteFailure : 0;
}
