#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "nlroth/energy.hpp"
#include "nlroth/grid.hpp"

namespace nlroth {

enum class GeneratorKind { kRandomDensity, kProduct, kStripe, kRandomPhaseTriple, kFromFile };

/// random_density: each point of [n1]x[n2] independently with probability delta.
/// product: factors b x c, or seeded random factors of density delta when both are empty.
/// stripe: [n1] x {y : y = 0 mod stride}.
/// random_phase_triple: the three +-1 phase functions on [n] x [n^2].
/// from_file: a set file at `path`.
struct GeneratorSpec {
  GeneratorKind kind = GeneratorKind::kRandomDensity;
  std::int64_t n1 = 0;
  std::int64_t n2 = 0;
  std::int64_t n = 0;
  double delta = 0.5;
  std::int64_t stride = 2;
  std::optional<std::uint64_t> seed;
  std::vector<std::int64_t> b;
  std::vector<std::int64_t> c;
  std::string path;

  /// Throws ValidationError on missing or out-of-range parameters.
  void validate() const;
};

const char* generator_name(GeneratorKind k);
GeneratorKind parse_generator_kind(const std::string& s);

/// Set-valued kinds. Throws ValidationError for random_phase_triple.
SetIndicator generate_set(const GeneratorSpec& spec);

/// (f0, f1, f2). Set-valued kinds give three copies of the indicator.
std::array<DenseFunction, 3> generate_triple(const GeneratorSpec& spec);

/// phi: [n^2] -> {+1, -1} from the seed; phi(i) for i in [1, n^2].
int random_sign(std::uint64_t seed, std::int64_t i);

enum class Task { kCount, kGowers, kWeyl, kDual, kEnergy, kPopdiff, kVerify };
const char* task_name(Task t);
Task parse_task(const std::string& s);

struct ExperimentConfig {
  GeneratorSpec generator;
  Task task = Task::kCount;
  std::optional<double> epsilon;
  std::optional<std::int64_t> d_min;
  std::optional<std::int64_t> d_max;
  int order = 2;
  std::int64_t q_max = 10;
  std::optional<double> scale;
  /// Difference scale N for dual; defaults to n1.
  std::optional<std::int64_t> lambda_n;
  std::optional<double> eta;
  std::optional<std::int64_t> q_tilde_max;
  std::optional<double> m_shrink;
  std::optional<std::int64_t> max_stages;
  std::string output_dir;
  std::string format = "json";
  unsigned threads = 0;

  /// Throws ValidationError when the chosen task lacks a parameter.
  void validate() const;
  IncrementConfig increment_config() const;
};

/// Parses "key = value" lines; '#' starts a comment. Keys mirror the fields
/// above (generator, n1, n2, n, delta, stride, seed, b, c, path, task,
/// epsilon, d_min, d_max, order, q_max, scale, lambda_n, eta, q_tilde_max,
/// m_shrink, max_stages, output, format, threads).
ExperimentConfig parse_config(const std::string& text);
ExperimentConfig read_config_file(const std::string& path);
/// Applies one key/value pair, as the config file and CLI flags do.
void apply_config_value(ExperimentConfig& cfg, const std::string& key, const std::string& value);

struct ExperimentResult {
  std::string json;
  std::string csv;
  /// Files written, relative to output_dir.
  std::vector<std::string> files;
};

/// Runs the task and, if output_dir is set, writes report.json and
/// <task>.csv there. Contents are a function of the config alone.
/// Throws ValidationError for bad configs and TaskError for task failures.
ExperimentResult run_experiment(const ExperimentConfig& cfg);

}  // namespace nlroth
