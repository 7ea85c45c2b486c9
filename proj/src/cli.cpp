#include "tmlab/cli.hpp"

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "tmlab/decider.hpp"
#include "tmlab/density.hpp"
#include "tmlab/sampler.hpp"
#include "tmlab/tm_core.hpp"
#include "tmlab/walk.hpp"

namespace tmlab {

namespace {

// Usage-level failure carrying the message shown to the user.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

template <typename T>
std::string join(const std::vector<T>& xs) {
  std::string out;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i > 0) out += ',';
    out += std::to_string(xs[i]);
  }
  return out;
}

std::string csv_preamble(const std::string& replay) {
  return "# schema_version=" + std::to_string(kReportSchemaVersion) + "\n# replay: " + replay + "\n";
}

std::string json_report(const std::string& replay, nlohmann::json config, nlohmann::json rows) {
  nlohmann::json j = {{"schema_version", kReportSchemaVersion},
                      {"replay", replay},
                      {"config", std::move(config)},
                      {"rows", std::move(rows)}};
  return j.dump(2) + "\n";
}

void emit(const std::string& report, const std::string& path, std::ostream& out) {
  if (path.empty() || path == "-") {
    out << report;
    return;
  }
  std::ofstream file(path, std::ios::binary);
  if (!file) throw UsageError("cannot open output file '" + path + "'");
  file << report;
}

struct CommonFlags {
  std::string model = "oneway";
  int a = 2;
  std::uint64_t trials = 10'000;
  std::string seed = "0";
  std::string format = "csv";
  std::string output;
  unsigned workers = 0;
};

void check_format(const std::string& format) {
  if (format != "csv" && format != "json") throw UsageError("--format must be csv or json");
}

// ---------------------------------------------------------------------------

int cmd_classify(const std::string& path, const std::string& model_name, std::int64_t budget_flag,
                 std::ostream& out) {
  std::ifstream file(path, std::ios::binary);
  if (!file) throw UsageError("cannot open program file '" + path + "'");
  std::stringstream buf;
  buf << file.rdbuf();
  const std::string text = buf.str();
  const auto first = text.find_first_not_of(" \t\r\n");
  const Program program = first != std::string::npos && text[first] == '{' ? program_from_json(text)
                                                                            : parse_program(text);

  const auto model = MachineModel::make(parse_geometry(model_name), program.alphabet());
  const std::uint64_t budget =
      budget_flag >= 0 ? static_cast<std::uint64_t>(budget_flag) : 10 * std::uint64_t{program.states()};

  nlohmann::json j;
  j["schema_version"] = kReportSchemaVersion;
  j["program"] = {{"n", program.states()}, {"a", program.alphabet()}};
  j["classify"] = nlohmann::json::parse(to_json(classify(program, 0)));
  j["in_b"] = in_b(program);
  j["decide_halting_on_b"] = to_string(decide_halting_on_b(program));
  j["has_halt_transition"] = has_halt_transition(program);
  j["conservative_halting"] = nlohmann::json::parse(to_json(conservative_halting(program, model, budget)));
  j["conservative_halting"]["model"] = to_string(model.geometry);
  if (program.alphabet() == 2) {
    const auto w = finite_domain_witness(program);
    j["finite_domain_witness"] = w ? nlohmann::json(*w) : nlohmann::json(nullptr);
  }
  out << j.dump(2) << "\n";
  return kExitOk;
}

int cmd_sample(std::uint32_t n, int a, const std::string& seed_text, std::uint64_t index,
               const std::string& format, std::ostream& out) {
  if (n == 0) throw UsageError("--n must be at least 1");
  MachineModel::one_way(a);
  auto rng = trial_stream(parse_seed(seed_text), index);
  const auto program = sample_program(n, a, rng);
  if (format == "json") {
    out << to_json(program) << "\n";
  } else if (format == "text") {
    out << serialize(program);
  } else {
    throw UsageError("--format must be text or json");
  }
  return kExitOk;
}

int cmd_enumerate(std::uint32_t n, int a, const std::string& event_name, std::uint64_t guard,
                  const std::string& format, std::ostream& out, std::ostream& err) {
  if (n == 0) throw UsageError("--n must be at least 1");
  MachineModel::one_way(a);
  const Event event = parse_event(event_name);
  ExactDensity d;
  try {
    d = exact_density(event, n, a, guard);
  } catch (const TooManyPrograms& e) {
    err << "error: " << e.count().str() << " programs exceed the enumeration guard " << guard << "\n";
    return kExitUsage;
  }
  const Rational r = d.value();
  const double value = static_cast<double>(r);
  const std::string replay = "tm_lab enumerate --event " + event.name() + " --a " + std::to_string(a) +
                             " --n " + std::to_string(n) + " --guard " + std::to_string(guard);
  if (format == "text") {
    out << event.name() << " n=" << n << " a=" << a << ": " << d.hits.str() << "/" << d.total.str() << " = "
        << format_double(value) << " (total " << d.total.str() << ")\n";
  } else if (format == "csv") {
    out << csv_preamble(replay) << "event,model,a,n,hits,total,numerator,denominator,density\n"
        << event.name() << ",oneway," << a << ',' << n << ',' << d.hits.str() << ',' << d.total.str() << ','
        << boost::multiprecision::numerator(r).str() << ',' << boost::multiprecision::denominator(r).str() << ','
        << format_double(value) << "\n";
  } else if (format == "json") {
    nlohmann::json row = {{"event", event.name()},
                          {"model", "oneway"},
                          {"a", a},
                          {"n", n},
                          {"hits", d.hits.str()},
                          {"total", d.total.str()},
                          {"numerator", boost::multiprecision::numerator(r).str()},
                          {"denominator", boost::multiprecision::denominator(r).str()},
                          {"density", value}};
    nlohmann::json config = {{"command", "enumerate"}, {"event", event.name()}, {"a", a}, {"n", n}, {"guard", guard}};
    out << json_report(replay, config, nlohmann::json::array({row}));
  } else {
    throw UsageError("--format must be csv, json or text");
  }
  return kExitOk;
}

int cmd_density(const std::string& event_name, const std::vector<std::uint32_t>& grid, const CommonFlags& f,
                std::ostream& out) {
  check_format(f.format);
  ExperimentSpec spec;
  spec.event = parse_event(event_name);
  spec.model = MachineModel::make(parse_geometry(f.model), f.a);
  spec.n_grid = grid;
  spec.trials = f.trials;
  spec.master_seed = parse_seed(f.seed);
  spec.validate();

  const auto rows = convergence_table(spec, f.workers);
  const std::string replay = "tm_lab density --event " + spec.event.name() + " --model " +
                             std::string(to_string(spec.model.geometry)) + " --a " + std::to_string(f.a) +
                             " --n " + join(grid) + " --trials " + std::to_string(f.trials) + " --seed " +
                             std::to_string(spec.master_seed) + " --format " + f.format;
  std::string report;
  if (f.format == "csv") {
    report = csv_preamble(replay) + density_csv(rows);
  } else {
    nlohmann::json config = {{"command", "density"},
                             {"event", spec.event.name()},
                             {"model", to_string(spec.model.geometry)},
                             {"a", f.a},
                             {"n_grid", grid},
                             {"trials", f.trials},
                             {"master_seed", spec.master_seed}};
    report = json_report(replay, config, nlohmann::json::parse(density_json(rows)));
  }
  emit(report, f.output, out);
  return kExitOk;
}

int cmd_walk(int dim, const std::vector<std::uint64_t>& horizons, const CommonFlags& f, std::ostream& out) {
  check_format(f.format);
  if (dim != 1 && dim != 2) throw UsageError("--dim must be 1 or 2");
  if (horizons.empty()) throw UsageError("--k needs at least one horizon");
  if (f.trials == 0) throw UsageError("--trials must be at least 1");
  const auto master = parse_seed(f.seed);
  const std::string replay = "tm_lab walk --dim " + std::to_string(dim) + " --k " + join(horizons) +
                             " --trials " + std::to_string(f.trials) + " --seed " + std::to_string(master) +
                             " --format " + f.format;

  std::string csv = csv_preamble(replay) + "k,exact_cdf,mc_estimate,ci_lo,ci_hi\n";
  nlohmann::json rows = nlohmann::json::array();
  for (std::size_t i = 0; i < horizons.size(); ++i) {
    const WalkSpec spec{dim, horizons[i], f.trials, derive_trial_seed(master, i)};
    const auto mc = dim == 1 ? falloff_mc(spec, f.workers) : falloff2d_mc(spec, f.workers);
    nlohmann::json row = {{"k", horizons[i]},
                          {"mc_estimate", mc.p_hat},
                          {"ci_lo", mc.ci_lo},
                          {"ci_hi", mc.ci_hi},
                          {"trials", mc.trials},
                          {"hits", mc.hits},
                          {"master_seed", mc.master_seed}};
    std::string exact_cell;
    if (dim == 1) {
      const auto exact = falloff_cdf_exact(horizons[i]);
      exact_cell = format_double(exact.value);
      row["exact_cdf"] = exact.value;
      if (exact.exact) row["exact_cdf_rational"] = exact.exact->str();
    } else {
      row["exact_cdf"] = nullptr;
    }
    csv += std::to_string(horizons[i]) + ',' + exact_cell + ',' + format_double(mc.p_hat) + ',' +
           format_double(mc.ci_lo) + ',' + format_double(mc.ci_hi) + '\n';
    rows.push_back(std::move(row));
  }

  std::string report = csv;
  if (f.format == "json") {
    nlohmann::json config = {{"command", "walk"}, {"dim", dim}, {"k", horizons}, {"trials", f.trials},
                             {"master_seed", master}};
    report = json_report(replay, config, rows);
  }
  emit(report, f.output, out);
  return kExitOk;
}

void add_common(CLI::App* cmd, CommonFlags& f, bool with_model) {
  if (with_model) {
    cmd->add_option("--model", f.model, "tape model: oneway or twoway")->capture_default_str();
    cmd->add_option("--a", f.a, "alphabet size")->capture_default_str();
  }
  cmd->add_option("--trials", f.trials, "Monte Carlo trials per row")->capture_default_str();
  cmd->add_option("--seed", f.seed, "master seed, decimal or 0x-prefixed hex")->capture_default_str();
  cmd->add_option("--format", f.format, "csv or json")->capture_default_str();
  cmd->add_option("--output", f.output, "report path (default: standard output)");
  cmd->add_option("--workers", f.workers, "worker threads, 0 = all cores")->capture_default_str();
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Turing machine generic-case halting laboratory", "tm_lab"};
  app.require_subcommand(1);

  auto* classify_cmd = app.add_subcommand("classify", "classify a program file and decide halting on B");
  std::string program_path;
  std::string classify_model = "oneway";
  std::int64_t classify_budget = -1;
  classify_cmd->add_option("program", program_path, "program file (text or JSON format)")->required();
  classify_cmd->add_option("--model", classify_model, "tape model for the budgeted halting check");
  classify_cmd->add_option("--budget", classify_budget, "step budget for the budgeted check (default 10n)");

  auto* sample_cmd = app.add_subcommand("sample", "draw a uniformly random program");
  std::uint32_t sample_n = 0;
  int sample_a = 2;
  std::string sample_seed = "0";
  std::uint64_t sample_index = 0;
  std::string sample_format = "text";
  sample_cmd->add_option("--n", sample_n, "state count")->required();
  sample_cmd->add_option("--a", sample_a, "alphabet size");
  sample_cmd->add_option("--seed", sample_seed, "master seed");
  sample_cmd->add_option("--index", sample_index, "trial index under the master seed");
  sample_cmd->add_option("--format", sample_format, "text or json");

  auto* enumerate_cmd = app.add_subcommand("enumerate", "exact density by exhaustive enumeration");
  std::uint32_t enum_n = 0;
  int enum_a = 2;
  std::string enum_event = "in-b";
  std::uint64_t enum_guard = kDefaultEnumerationGuard;
  std::string enum_format = "csv";
  enumerate_cmd->add_option("--n", enum_n, "state count")->required();
  enumerate_cmd->add_option("--a", enum_a, "alphabet size");
  enumerate_cmd->add_option("--event", enum_event, "event name");
  enumerate_cmd->add_option("--guard", enum_guard, "maximum number of programs to enumerate");
  enumerate_cmd->add_option("--format", enum_format, "csv, json or text");

  auto* density_cmd = app.add_subcommand("density", "Monte Carlo density table over a grid of state counts");
  CommonFlags density_flags;
  std::string density_event;
  std::vector<std::uint32_t> density_grid;
  density_cmd->add_option("--event", density_event, "event name")->required();
  density_cmd->add_option("--n", density_grid, "comma-separated state counts")->required()->delimiter(',');
  add_common(density_cmd, density_flags, true);

  auto* walk_cmd = app.add_subcommand("walk", "random-walk fall-off probabilities");
  CommonFlags walk_flags;
  int walk_dim = 1;
  std::vector<std::uint64_t> walk_k;
  walk_cmd->add_option("--dim", walk_dim, "walk dimension (1 or 2)");
  walk_cmd->add_option("--k", walk_k, "comma-separated horizons")->required()->delimiter(',');
  add_common(walk_cmd, walk_flags, false);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }

  try {
    if (*classify_cmd) return cmd_classify(program_path, classify_model, classify_budget, out);
    if (*sample_cmd) return cmd_sample(sample_n, sample_a, sample_seed, sample_index, sample_format, out);
    if (*enumerate_cmd) return cmd_enumerate(enum_n, enum_a, enum_event, enum_guard, enum_format, out, err);
    if (*density_cmd) return cmd_density(density_event, density_grid, density_flags, out);
    if (*walk_cmd) return cmd_walk(walk_dim, walk_k, walk_flags, out);
  } catch (const ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const IncompatibleModel& e) {
    err << "error: IncompatibleModel: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}

}  // namespace tmlab
