#include "nlroth/harness.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "nlroth/counting.hpp"
#include "nlroth/errors.hpp"
#include "nlroth/expsums.hpp"
#include "nlroth/format.hpp"
#include "nlroth/gowers.hpp"
#include "nlroth/parallel.hpp"
#include "nlroth/popular.hpp"
#include "nlroth/rng.hpp"

namespace nlroth {

using ojson = nlohmann::ordered_json;

namespace {

// Independent streams of the counter generator per generated object.
constexpr std::uint64_t kStreamPoints = 0;
constexpr std::uint64_t kStreamFactorB = 1;
constexpr std::uint64_t kStreamFactorC = 2;
constexpr std::uint64_t kStreamPhase = 3;

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

template <class T>
T parse_number(const std::string& key, const std::string& value) {
  T out{};
  const std::string v = trim(value);
  const auto* end = v.data() + v.size();
  auto [ptr, ec] = std::from_chars(v.data(), end, out);
  if (ec != std::errc() || ptr != end || v.empty()) throw ValidationError("invalid value for " + key + ": '" + value + "'");
  return out;
}

// from_chars for double is missing from libstdc++ 11.
template <>
double parse_number<double>(const std::string& key, const std::string& value) {
  const std::string v = trim(value);
  std::size_t used = 0;
  double out = 0;
  try {
    out = std::stod(v, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (v.empty() || used != v.size() || !std::isfinite(out))
    throw ValidationError("invalid value for " + key + ": '" + value + "'");
  return out;
}

std::vector<std::int64_t> parse_list(const std::string& key, const std::string& value) {
  std::vector<std::int64_t> out;
  std::stringstream ss(value);
  std::string item;
  while (std::getline(ss, item, ','))
    if (!trim(item).empty()) out.push_back(parse_number<std::int64_t>(key, item));
  return out;
}

GridWindow spec_window(const GeneratorSpec& s) {
  if (s.kind == GeneratorKind::kRandomPhaseTriple) return GridWindow(s.n, s.n * s.n);
  return GridWindow(s.n1, s.n2);
}

SetIndicator random_factor_product(const GeneratorSpec& s) {
  const GridWindow w(s.n1, s.n2);
  std::vector<std::int64_t> b = s.b, c = s.c;
  if (b.empty() && c.empty()) {
    const CounterRng rb(*s.seed, kStreamFactorB), rc(*s.seed, kStreamFactorC);
    for (std::int64_t x = 1; x <= s.n1; ++x)
      if (rb.bernoulli(static_cast<std::uint64_t>(x), s.delta)) b.push_back(x);
    for (std::int64_t y = 1; y <= s.n2; ++y)
      if (rc.bernoulli(static_cast<std::uint64_t>(y), s.delta)) c.push_back(y);
  }
  std::vector<Point> pts;
  for (auto x : b)
    for (auto y : c) pts.emplace_back(x, y);
  try {
    return indicator_from_points(pts, w);
  } catch (const DomainError& e) {
    throw ValidationError(std::string("product factor outside window: ") + e.what());
  }
}

ojson generator_json(const GeneratorSpec& s) {
  ojson j;
  j["kind"] = generator_name(s.kind);
  switch (s.kind) {
    case GeneratorKind::kRandomPhaseTriple:
      j["n"] = s.n;
      break;
    case GeneratorKind::kFromFile:
      j["path"] = s.path;
      break;
    default:
      j["n1"] = s.n1;
      j["n2"] = s.n2;
      if (s.kind == GeneratorKind::kRandomDensity) j["delta"] = round12(s.delta);
      if (s.kind == GeneratorKind::kStripe) j["stride"] = s.stride;
      if (s.kind == GeneratorKind::kProduct) {
        j["b"] = s.b;
        j["c"] = s.c;
        if (s.b.empty() && s.c.empty()) j["delta"] = round12(s.delta);
      }
  }
  if (s.seed) j["seed"] = *s.seed;
  return j;
}

double sum_product(const DenseFunction& a, const DenseFunction& b, Complex* out) {
  Complex acc{};
  const Box& box = a.box();
  for (std::int64_t x = box.x_lo; x <= box.x_hi; ++x)
    for (std::int64_t y = box.y_lo; y <= box.y_hi; ++y) acc += a.at(x, y) * b.at(x, y);
  *out = acc;
  return std::abs(acc);
}

struct TaskOutput {
  ojson result;
  std::string csv;
};

TaskOutput task_count(const ExperimentConfig& cfg, const SetIndicator& a) {
  const std::int64_t lo = cfg.d_min.value_or(-(a.window().n1() - 1));
  const std::int64_t hi = cfg.d_max.value_or(a.window().n1() - 1);
  const auto profile = count_profile(a, lo, hi);
  TaskOutput out;
  out.result["cardinality"] = a.cardinality();
  out.result["density"] = round12(density(a));
  ojson rows = ojson::array();
  for (std::size_t i = 0; i < profile.counts.size(); ++i)
    rows.push_back({{"d", profile.d_values[i]}, {"count", profile.counts[i]}});
  out.result["profile"] = std::move(rows);
  std::ostringstream csv;
  write_profile_csv(csv, profile);
  out.csv = csv.str();
  return out;
}

TaskOutput task_gowers(const ExperimentConfig& cfg, const DenseFunction& f, double mean) {
  const GowersOrder s(cfg.order);
  const Box& box = f.box();
  struct Row {
    double power, norm;
  };
  const auto rows = parallel_map<Row>(box.width(), [&](std::int64_t i) {
    const Fiber raw = fiber(f, box.x_lo + i);
    std::vector<Complex> v(raw.values());
    for (auto& c : v) c -= mean;
    const Fiber balanced(raw.lo(), std::move(v));
    const double p = gowers_power(balanced, s);
    return Row{p, std::pow(p, 1.0 / static_cast<double>(1 << cfg.order))};
  });
  TaskOutput out;
  out.result["order"] = cfg.order;
  out.result["balanced_by"] = round12(mean);
  ojson arr = ojson::array();
  std::ostringstream csv;
  csv << "x,power,norm\n";
  for (std::int64_t i = 0; i < box.width(); ++i) {
    const auto& r = rows[static_cast<std::size_t>(i)];
    arr.push_back({{"x", box.x_lo + i}, {"power", round12(r.power)}, {"norm", round12(r.norm)}});
    csv << box.x_lo + i << "," << fmt12(r.power) << "," << fmt12(r.norm) << "\n";
  }
  out.result["fibers"] = std::move(arr);
  out.csv = csv.str();
  return out;
}

TaskOutput task_weyl(const ExperimentConfig& cfg, const DenseFunction& f, double mean) {
  std::vector<Complex> v(f.values());
  for (auto& c : v) c -= mean;
  const DenseFunction g(f.box(), std::move(v), false);
  const double scale = cfg.scale.value_or(static_cast<double>(std::max<std::int64_t>(f.box().height(), 1)));
  TaskOutput out;
  out.result["q_max"] = cfg.q_max;
  out.result["scale"] = round12(scale);
  out.result["balanced_by"] = round12(mean);
  std::ostringstream csv;
  csv << "direction,freq_num,freq_den_or_grid,score,q\n";
  for (auto dir : {ScanDirection::kVertical, ScanDirection::kHorizontal}) {
    const char* name = dir == ScanDirection::kVertical ? "vertical" : "horizontal";
    ojson arr = ojson::array();
    for (const auto& e : fiber_correlation_scan(g, dir, cfg.q_max, scale)) {
      const auto cert = rationalize(e.freq, cfg.q_max, scale);
      ojson row{{"freq_num", e.num}, {"freq_den_or_grid", e.den}, {"score", round12(e.score)}};
      row["q"] = cert ? ojson(cert->q()) : ojson(nullptr);
      arr.push_back(std::move(row));
      csv << name << "," << e.num << "," << e.den << "," << fmt12(e.score) << ","
          << (cert ? std::to_string(cert->q()) : std::string()) << "\n";
    }
    out.result[name] = std::move(arr);
  }
  const Complex s = weyl_sum(Frequency(0.0L), Frequency(0.0L), cfg.lambda_n.value_or(f.box().width()));
  out.result["weyl_sum_at_zero"] = {round12(s.real()), round12(s.imag())};
  out.csv = csv.str();
  return out;
}

TaskOutput task_dual(const ExperimentConfig& cfg, const std::array<DenseFunction, 3>& t, const GridWindow& w) {
  const std::int64_t n = cfg.lambda_n.value_or(w.n1());
  CountingParams p{n, 1, 0, w};
  const Complex lam = lambda(t[0], t[1], t[2], p);
  const DenseFunction big_f = dual_F(t[0], t[1], n);
  const DenseFunction big_g = dual_G(t[0], t[2], n);
  Complex via_f{}, via_g{};
  sum_product(big_f, t[2], &via_f);
  sum_product(t[1], big_g, &via_g);
  via_f /= static_cast<double>(w.area());
  via_g /= static_cast<double>(w.area());
  TaskOutput out;
  out.result["N"] = n;
  auto pair = [](Complex c) { return ojson::array({round12(c.real()), round12(c.imag())}); };
  out.result["lambda"] = pair(lam);
  out.result["via_F"] = pair(via_f);
  out.result["via_G"] = pair(via_g);
  out.result["residual_F"] = round12(std::abs(lam - via_f));
  out.result["residual_G"] = round12(std::abs(lam - via_g));
  std::ostringstream csv;
  csv << "quantity,re,im\n";
  csv << "lambda," << fmt12(lam.real()) << "," << fmt12(lam.imag()) << "\n";
  csv << "via_F," << fmt12(via_f.real()) << "," << fmt12(via_f.imag()) << "\n";
  csv << "via_G," << fmt12(via_g.real()) << "," << fmt12(via_g.imag()) << "\n";
  out.csv = csv.str();
  return out;
}

std::string trace_csv(const IncrementTrace& trace) {
  std::ostringstream csv;
  csv << "stage,q,M,energy,irregularity,accepted_q_tilde\n";
  for (const auto& s : trace.states)
    csv << s.stage << "," << s.q << "," << s.m << "," << fmt12(s.energy) << "," << fmt12(s.irregularity) << ","
        << (s.accepted_q_tilde ? std::to_string(s.accepted_q_tilde) : std::string()) << "\n";
  return csv.str();
}

TaskOutput task_energy(const ExperimentConfig& cfg, const std::array<DenseFunction, 3>& t, const GridWindow& w) {
  const auto trace = energy_increment_run(t[0], t[1], t[2], cfg.increment_config(), w);
  TaskOutput out;
  out.result = ojson::parse(trace_to_json(trace));
  out.csv = trace_csv(trace);
  return out;
}

TaskOutput task_popdiff(const ExperimentConfig& cfg, const SetIndicator& a) {
  const auto report = popular_difference_search(a, *cfg.epsilon, cfg.increment_config());
  TaskOutput out;
  out.result = ojson::parse(report_to_json(report));
  std::ostringstream csv;
  write_report_csv(csv, report);
  out.csv = csv.str();
  return out;
}

TaskOutput task_verify(const ExperimentConfig& cfg, const SetIndicator& a) {
  const auto r = verify_2d_threshold(a, *cfg.epsilon);
  TaskOutput out;
  out.result["holds"] = r.holds;
  out.result["witness_d"] = r.witness_d;
  out.result["count"] = r.count;
  out.result["threshold"] = round12(r.threshold);
  out.result["margin"] = round12(r.margin);
  std::ostringstream csv;
  csv << "holds,witness_d,count,threshold,margin\n"
      << (r.holds ? "true" : "false") << "," << r.witness_d << "," << r.count << "," << fmt12(r.threshold) << ","
      << fmt12(r.margin) << "\n";
  out.csv = csv.str();
  return out;
}

class ThreadScope {
 public:
  explicit ThreadScope(unsigned n) : saved_(thread_count()) {
    if (n != 0) set_thread_count(n);
  }
  ~ThreadScope() { set_thread_count(saved_); }
  ThreadScope(const ThreadScope&) = delete;
  ThreadScope& operator=(const ThreadScope&) = delete;

 private:
  unsigned saved_;
};

void write_file(const std::filesystem::path& p, const std::string& content) {
  std::ofstream out(p, std::ios::binary);
  if (!out) throw TaskError("cannot open " + p.string() + " for writing");
  out << content;
  if (!out) throw TaskError("writing " + p.string() + " failed");
}

}  // namespace

const char* generator_name(GeneratorKind k) {
  switch (k) {
    case GeneratorKind::kRandomDensity: return "random_density";
    case GeneratorKind::kProduct: return "product";
    case GeneratorKind::kStripe: return "stripe";
    case GeneratorKind::kRandomPhaseTriple: return "random_phase_triple";
    case GeneratorKind::kFromFile: return "from_file";
  }
  return "unknown";
}

GeneratorKind parse_generator_kind(const std::string& s) {
  for (auto k : {GeneratorKind::kRandomDensity, GeneratorKind::kProduct, GeneratorKind::kStripe,
                 GeneratorKind::kRandomPhaseTriple, GeneratorKind::kFromFile})
    if (s == generator_name(k)) return k;
  throw ValidationError("unknown generator kind '" + s + "'");
}

const char* task_name(Task t) {
  switch (t) {
    case Task::kCount: return "count";
    case Task::kGowers: return "gowers";
    case Task::kWeyl: return "weyl";
    case Task::kDual: return "dual";
    case Task::kEnergy: return "energy";
    case Task::kPopdiff: return "popdiff";
    case Task::kVerify: return "verify";
  }
  return "unknown";
}

Task parse_task(const std::string& s) {
  for (auto t : {Task::kCount, Task::kGowers, Task::kWeyl, Task::kDual, Task::kEnergy, Task::kPopdiff, Task::kVerify})
    if (s == task_name(t)) return t;
  throw ValidationError("unknown task '" + s + "'");
}

void GeneratorSpec::validate() const {
  auto need_window = [&] {
    if (n1 < 1 || n2 < 1) throw ValidationError(std::string(generator_name(kind)) + " requires n1 >= 1 and n2 >= 1");
    if (n1 * n2 > kMaxWindowArea) throw ValidationError("window area exceeds 2^31");
  };
  switch (kind) {
    case GeneratorKind::kRandomDensity:
      need_window();
      if (!seed) throw ValidationError("random_density requires a seed");
      if (!(delta >= 0 && delta <= 1)) throw ValidationError("delta must lie in [0, 1]");
      break;
    case GeneratorKind::kProduct:
      need_window();
      if (b.empty() && c.empty()) {
        if (!seed) throw ValidationError("product with random factors requires a seed");
        if (!(delta >= 0 && delta <= 1)) throw ValidationError("delta must lie in [0, 1]");
      }
      break;
    case GeneratorKind::kStripe:
      need_window();
      if (stride < 1) throw ValidationError("stripe requires stride >= 1");
      break;
    case GeneratorKind::kRandomPhaseTriple:
      if (!seed) throw ValidationError("random_phase_triple requires a seed");
      if (n < 1 || n > 1024) throw ValidationError("random_phase_triple requires 1 <= n <= 1024");
      break;
    case GeneratorKind::kFromFile:
      if (path.empty()) throw ValidationError("from_file requires a path");
      break;
  }
}

int random_sign(std::uint64_t seed, std::int64_t i) {
  return CounterRng(seed, kStreamPhase).bits(static_cast<std::uint64_t>(i)) & 1U ? -1 : 1;
}

SetIndicator generate_set(const GeneratorSpec& spec) {
  spec.validate();
  switch (spec.kind) {
    case GeneratorKind::kRandomDensity: {
      const CounterRng rng(*spec.seed, kStreamPoints);
      const auto n2 = static_cast<std::uint64_t>(spec.n2);
      return SetIndicator::from_predicate(GridWindow(spec.n1, spec.n2), [&](std::int64_t x, std::int64_t y) {
        return rng.bernoulli(static_cast<std::uint64_t>(x - 1) * n2 + static_cast<std::uint64_t>(y - 1), spec.delta);
      });
    }
    case GeneratorKind::kProduct:
      return random_factor_product(spec);
    case GeneratorKind::kStripe:
      return SetIndicator::from_predicate(GridWindow(spec.n1, spec.n2),
                                          [&](std::int64_t, std::int64_t y) { return y % spec.stride == 0; });
    case GeneratorKind::kFromFile:
      return read_set_file(spec.path);
    case GeneratorKind::kRandomPhaseTriple:
      break;
  }
  throw ValidationError("random_phase_triple produces functions, not a set");
}

std::array<DenseFunction, 3> generate_triple(const GeneratorSpec& spec) {
  if (spec.kind != GeneratorKind::kRandomPhaseTriple) {
    const auto f = DenseFunction::from_indicator(generate_set(spec));
    return {f, f, f};
  }
  spec.validate();
  const std::int64_t n = spec.n;
  const Box box{1, n, 1, n * n};
  const std::uint64_t seed = *spec.seed;
  auto parity = [](std::int64_t k) { return (k & 1) ? -1.0 : 1.0; };
  auto phi = [&](std::int64_t i) { return static_cast<double>(random_sign(seed, i)); };
  return {
      DenseFunction::from_fn(box, [&](std::int64_t x, std::int64_t y) { return Complex(phi(x) * phi(y) * parity(x + y)); }, true),
      DenseFunction::from_fn(box, [&](std::int64_t x, std::int64_t y) { return Complex(parity(x) * phi(y)); }, true),
      DenseFunction::from_fn(box, [&](std::int64_t x, std::int64_t y) { return Complex(phi(x) * parity(y)); }, true),
  };
}

void ExperimentConfig::validate() const {
  generator.validate();
  const bool set_task = task == Task::kCount || task == Task::kPopdiff || task == Task::kVerify;
  if (set_task && generator.kind == GeneratorKind::kRandomPhaseTriple)
    throw ValidationError(std::string(task_name(task)) + " requires a set generator");
  if (task == Task::kPopdiff && !epsilon) throw ValidationError("popdiff requires epsilon");
  if (task == Task::kVerify && !epsilon) throw ValidationError("verify requires epsilon");
  if (task == Task::kEnergy && !epsilon) throw ValidationError("energy requires epsilon");
  if (epsilon && !(*epsilon > 0 && *epsilon <= 0.5)) throw ValidationError("epsilon must lie in (0, 1/2]");
  if (task == Task::kGowers && (order < 1 || order > 6)) throw ValidationError("order must lie in [1, 6]");
  if (task == Task::kWeyl && q_max < 1) throw ValidationError("q_max must be >= 1");
  if (scale && !(*scale > 0)) throw ValidationError("scale must be positive");
  if (lambda_n && *lambda_n < 1) throw ValidationError("lambda_n must be >= 1");
  if (d_min && d_max && *d_min > *d_max) throw ValidationError("d_min must not exceed d_max");
  if (format != "json" && format != "csv") throw ValidationError("format must be json or csv");
}

IncrementConfig ExperimentConfig::increment_config() const {
  IncrementConfig c = IncrementConfig::defaults(epsilon.value_or(0.25));
  if (eta) {
    c.eta = *eta;
    if (!max_stages) c.max_stages = static_cast<std::int64_t>(std::ceil(1.0 / c.eta - 1e-9)) + 2;
  }
  if (q_tilde_max) c.q_tilde_max = *q_tilde_max;
  if (m_shrink) c.m_shrink = *m_shrink;
  if (max_stages) c.max_stages = *max_stages;
  return c;
}

void apply_config_value(ExperimentConfig& cfg, const std::string& key_raw, const std::string& value) {
  const std::string key = trim(key_raw);
  auto& g = cfg.generator;
  if (key == "generator") g.kind = parse_generator_kind(trim(value));
  else if (key == "n1") g.n1 = parse_number<std::int64_t>(key, value);
  else if (key == "n2") g.n2 = parse_number<std::int64_t>(key, value);
  else if (key == "n") g.n = parse_number<std::int64_t>(key, value);
  else if (key == "delta") g.delta = parse_number<double>(key, value);
  else if (key == "stride") g.stride = parse_number<std::int64_t>(key, value);
  else if (key == "seed") g.seed = parse_number<std::uint64_t>(key, value);
  else if (key == "b") g.b = parse_list(key, value);
  else if (key == "c") g.c = parse_list(key, value);
  else if (key == "path") {
    g.path = trim(value);
    g.kind = GeneratorKind::kFromFile;
  } else if (key == "task") cfg.task = parse_task(trim(value));
  else if (key == "epsilon") cfg.epsilon = parse_number<double>(key, value);
  else if (key == "d_min") cfg.d_min = parse_number<std::int64_t>(key, value);
  else if (key == "d_max") cfg.d_max = parse_number<std::int64_t>(key, value);
  else if (key == "order") cfg.order = parse_number<int>(key, value);
  else if (key == "q_max") cfg.q_max = parse_number<std::int64_t>(key, value);
  else if (key == "scale") cfg.scale = parse_number<double>(key, value);
  else if (key == "lambda_n") cfg.lambda_n = parse_number<std::int64_t>(key, value);
  else if (key == "eta") cfg.eta = parse_number<double>(key, value);
  else if (key == "q_tilde_max") cfg.q_tilde_max = parse_number<std::int64_t>(key, value);
  else if (key == "m_shrink") cfg.m_shrink = parse_number<double>(key, value);
  else if (key == "max_stages") cfg.max_stages = parse_number<std::int64_t>(key, value);
  else if (key == "output") cfg.output_dir = trim(value);
  else if (key == "format") cfg.format = trim(value);
  else if (key == "threads") cfg.threads = parse_number<unsigned>(key, value);
  else throw ValidationError("unknown config key '" + key + "'");
}

ExperimentConfig parse_config(const std::string& text) {
  ExperimentConfig cfg;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    if (trim(line).empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ValidationError("config line " + std::to_string(lineno) + ": expected key = value");
    apply_config_value(cfg, line.substr(0, eq), line.substr(eq + 1));
  }
  return cfg;
}

ExperimentConfig read_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open config file " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

ExperimentResult run_experiment(const ExperimentConfig& cfg) {
  cfg.validate();
  const ThreadScope threads(cfg.threads);

  const bool triple_task = cfg.task == Task::kDual || cfg.task == Task::kEnergy;
  std::optional<SetIndicator> set;
  std::array<DenseFunction, 3> triple;
  GridWindow window(1, 1);
  double mean = 0;
  if (cfg.generator.kind == GeneratorKind::kRandomPhaseTriple) {
    triple = generate_triple(cfg.generator);
    window = spec_window(cfg.generator);
  } else {
    set = generate_set(cfg.generator);
    window = set->window();
    mean = density(*set);
    if (triple_task || cfg.task == Task::kGowers || cfg.task == Task::kWeyl) {
      const auto f = DenseFunction::from_indicator(*set);
      triple = {f, f, f};
    }
  }

  TaskOutput out;
  try {
    switch (cfg.task) {
      case Task::kCount: out = task_count(cfg, *set); break;
      case Task::kGowers: out = task_gowers(cfg, triple[2], mean); break;
      case Task::kWeyl: out = task_weyl(cfg, triple[2], mean); break;
      case Task::kDual: out = task_dual(cfg, triple, window); break;
      case Task::kEnergy: out = task_energy(cfg, triple, window); break;
      case Task::kPopdiff: out = task_popdiff(cfg, *set); break;
      case Task::kVerify: out = task_verify(cfg, *set); break;
    }
  } catch (const ValidationError&) {
    throw;
  } catch (const std::exception& e) {
    throw TaskError(std::string(task_name(cfg.task)) + " failed: " + e.what());
  }

  ojson report;
  report["task"] = task_name(cfg.task);
  report["generator"] = generator_json(cfg.generator);
  report["window"] = {window.n1(), window.n2()};
  if (cfg.epsilon) report["epsilon"] = round12(*cfg.epsilon);
  report["result"] = std::move(out.result);

  ExperimentResult res;
  res.json = report.dump(2) + "\n";
  res.csv = std::move(out.csv);
  if (!cfg.output_dir.empty()) {
    std::error_code ec;
    std::filesystem::create_directories(cfg.output_dir, ec);
    if (ec) throw TaskError("cannot create output directory " + cfg.output_dir + ": " + ec.message());
    const std::filesystem::path dir(cfg.output_dir);
    const std::string csv_name = std::string(task_name(cfg.task)) + ".csv";
    write_file(dir / "report.json", res.json);
    write_file(dir / csv_name, res.csv);
    res.files = {"report.json", csv_name};
  }
  return res;
}

}  // namespace nlroth
