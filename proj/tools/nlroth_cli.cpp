// nlroth: command-line front end for the experiment harness.

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>

#include "nlroth/errors.hpp"
#include "nlroth/harness.hpp"

namespace {

constexpr int kExitValidation = 2;
constexpr int kExitTask = 3;

// Flag values are collected as strings and routed through the same
// key/value setter as config files, so both spellings validate identically.
struct FlagValues {
  std::map<std::string, std::string> values;
  std::string config_path;
  std::string input;
};

void add_common(CLI::App* cmd, FlagValues& fv) {
  auto opt = [&](const std::string& flag, const std::string& key, const std::string& help) {
    cmd->add_option_function<std::string>(flag, [&fv, key](const std::string& v) { fv.values[key] = v; }, help);
  };
  cmd->add_option("--config", fv.config_path, "key = value config file; flags override it");
  cmd->add_option("--input", fv.input, "set file (\"N1 N2\" header, then \"x y\" lines)");
  opt("--output", "output", "directory for report.json and the CSV table");
  opt("--format", "format", "json|csv for stdout when --output is absent");
  opt("--seed", "seed", "generator seed (u64)");
  opt("--threads", "threads", "worker threads, 0 = hardware");
  opt("--generator", "generator", "random_density|product|stripe|random_phase_triple|from_file");
  opt("--n1", "n1", "window width");
  opt("--n2", "n2", "window height");
  opt("--n", "n", "side for random_phase_triple");
  opt("--delta", "delta", "density for random kinds");
  opt("--stride", "stride", "stripe stride");
  opt("--b", "b", "product x-factor, comma separated");
  opt("--c", "c", "product y-factor, comma separated");
  opt("--epsilon", "epsilon", "epsilon in (0, 1/2]");
  opt("--d-min", "d_min", "smallest difference for count");
  opt("--d-max", "d_max", "largest difference for count");
  opt("--order", "order", "Gowers order s");
  opt("--q-max", "q_max", "major-arc bound Q");
  opt("--scale", "scale", "major-arc scale S");
  opt("--lambda-n", "lambda_n", "difference scale N for dual");
  opt("--eta", "eta", "energy gain threshold");
  opt("--q-tilde-max", "q_tilde_max", "largest stride refinement");
  opt("--m-shrink", "m_shrink", "scale shrink per stage");
  opt("--max-stages", "max_stages", "stage cap");
}

nlroth::ExperimentConfig build_config(const FlagValues& fv, const std::string& task) {
  nlroth::ExperimentConfig cfg;
  if (!fv.config_path.empty()) cfg = nlroth::read_config_file(fv.config_path);
  if (!task.empty()) cfg.task = nlroth::parse_task(task);
  if (!fv.input.empty()) nlroth::apply_config_value(cfg, "path", fv.input);
  for (const auto& [k, v] : fv.values) nlroth::apply_config_value(cfg, k, v);
  return cfg;
}

void write_text(const std::filesystem::path& p, const std::string& text) {
  std::ofstream out(p);
  if (!out) throw nlroth::TaskError("cannot open " + p.string() + " for writing");
  out << text;
}

void run_gen(const FlagValues& fv) {
  const auto cfg = build_config(fv, "");
  const auto& g = cfg.generator;
  if (g.kind == nlroth::GeneratorKind::kRandomPhaseTriple) {
    const auto t = nlroth::generate_triple(g);
    if (cfg.output_dir.empty()) {
      for (int i = 0; i < 3; ++i) {
        std::cout << "# f" << i << "\n";
        nlroth::write_function(std::cout, t[static_cast<std::size_t>(i)]);
      }
      return;
    }
    std::filesystem::create_directories(cfg.output_dir);
    for (int i = 0; i < 3; ++i) {
      std::ostringstream ss;
      nlroth::write_function(ss, t[static_cast<std::size_t>(i)]);
      write_text(std::filesystem::path(cfg.output_dir) / ("f" + std::to_string(i) + ".txt"), ss.str());
    }
    return;
  }
  const auto a = nlroth::generate_set(g);
  std::ostringstream ss;
  nlroth::write_set(ss, a);
  if (cfg.output_dir.empty()) {
    std::cout << ss.str();
  } else {
    std::filesystem::create_directories(cfg.output_dir);
    write_text(std::filesystem::path(cfg.output_dir) / "set.txt", ss.str());
  }
}

void run_task(const FlagValues& fv, const std::string& task) {
  const auto cfg = build_config(fv, task);
  const auto res = nlroth::run_experiment(cfg);
  if (cfg.output_dir.empty()) std::cout << (cfg.format == "csv" ? res.csv : res.json);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Nonlinear Roth configuration experiments"};
  app.require_subcommand(1);
  FlagValues fv;
  const std::vector<std::pair<std::string, std::string>> commands = {
      {"gen", "generate a set or function triple"},
      {"count", "configuration counts per difference"},
      {"gowers", "Gowers norms of the vertical fibers"},
      {"weyl", "major-arc spectrum scan"},
      {"dual", "counting operator and its dual functions"},
      {"energy", "energy increment trace"},
      {"popdiff", "popular difference search"},
      {"verify", "two-dimensional threshold verdict"},
  };
  std::map<std::string, CLI::App*> subs;
  for (const auto& [name, help] : commands) {
    subs[name] = app.add_subcommand(name, help);
    add_common(subs[name], fv);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitValidation;
  }

  try {
    for (const auto& [name, cmd] : subs) {
      if (!cmd->parsed()) continue;
      if (name == "gen")
        run_gen(fv);
      else
        run_task(fv, name);
    }
  } catch (const nlroth::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitTask;
  }
  return 0;
}
