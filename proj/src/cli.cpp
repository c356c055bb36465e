#include "topowalk/cli.hpp"

#include <omp.h>

#include <CLI11.hpp>
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <json.hpp>
#include <optional>
#include <stdexcept>

#include "topowalk/evolution.hpp"
#include "topowalk/io.hpp"
#include "topowalk/observables.hpp"
#include "topowalk/spectrum.hpp"
#include "topowalk/topocharge.hpp"
#include "topowalk/transfer.hpp"

namespace topowalk::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct BudgetExceeded : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Cost of a grid command in elementary updates. Commands whose estimate
/// exceeds --budget refuse to start unless --force is given.
struct BudgetOptions {
  double budget = 2e10;
  bool force = false;

  void check(double cost, std::string_view what) const {
    if (!force && cost > budget) {
      throw BudgetExceeded(std::string(what) + " would cost " + io::format_double(cost) +
                           " updates, above the budget of " + io::format_double(budget) +
                           " (raise --budget or pass --force)");
    }
  }
};

void add_budget_options(CLI::App* cmd, BudgetOptions& opt) {
  cmd->add_option("--budget", opt.budget, "Maximum estimated work before --force is required")
      ->capture_default_str();
  cmd->add_flag("--force", opt.force, "Run even if the work estimate exceeds the budget");
}

/// Collects artifacts and writes manifest.json once every output exists.
class RunRecord {
 public:
  RunRecord(std::string command, fs::path dir)
      : dir_(std::move(dir)), start_(std::chrono::steady_clock::now()) {
    fs::create_directories(dir_);
    manifest_["command"] = std::move(command);
    manifest_["outputs"] = json::array();
  }

  json& operator[](const char* key) { return manifest_[key]; }

  void write(const std::string& name, std::string_view content) {
    const std::string digest = io::write_file(dir_ / name, content);
    manifest_["outputs"].push_back({{"path", name}, {"bytes", content.size()}, {"sha256", digest}});
  }

  void finish(int threads) {
    const auto elapsed = std::chrono::steady_clock::now() - start_;
    manifest_["threads"] = threads;
    manifest_["wall_time_seconds"] = std::chrono::duration<double>(elapsed).count();
    io::write_file(dir_ / "manifest.json", manifest_.dump(2) + "\n");
  }

 private:
  fs::path dir_;
  std::chrono::steady_clock::time_point start_;
  json manifest_;
};

json config_json(const WalkConfig& c) {
  return {{"L", c.L},
          {"theta_minus", c.theta_minus},
          {"theta_left", c.theta_left},
          {"theta_right", c.theta_right},
          {"phi", c.phi},
          {"steps", c.steps}};
}

json axis_json(const GridAxis& a) { return {{"lo", a.lo}, {"hi", a.hi}, {"count", a.count}}; }

ProgressFn progress_printer(std::ostream& err, std::string label) {
  return [&err, label = std::move(label), last = std::size_t{0}](std::size_t done,
                                                                  std::size_t total) mutable {
    const std::size_t decile = done * 10 / total;
    if (decile != last || done == total) {
      last = decile;
      err << label << ": " << done << "/" << total << "\n";
    }
  };
}

// ---- evolve ---------------------------------------------------------------

struct EvolveArgs {
  std::string code;
  std::string theta_left = "-pi/16";
  std::string theta_right = "-pi/3";
  std::string theta_minus = "pi/4";
  std::string phi = "0";
  int bell = 0;
  int steps = 0;
  int size = 0;
  bool no_entropy = false;
  std::string out;
};

void cmd_evolve(const EvolveArgs& a, int threads) {
  WalkConfig config;
  InitialState initial;
  const int L = a.size > 0 ? a.size : WalkConfig::dynamics_size(a.steps);
  if (!a.code.empty()) {
    const CodedRun run = config_from_code(ParamCode::parse(a.code), L, a.steps);
    config = run.config;
    initial = run.initial;
  } else {
    config.L = L;
    config.steps = a.steps;
    config.theta_left = io::parse_angle(a.theta_left);
    config.theta_right = io::parse_angle(a.theta_right);
    config.theta_minus = io::parse_angle(a.theta_minus);
    config.phi = io::parse_angle(a.phi);
    config.validate();
    initial = initial_state_from_label(a.bell);
  }
  config.validate_for_dynamics();

  const Trajectory traj = run_trajectory(config, initial, !a.no_entropy);

  RunRecord record("evolve", a.out);
  record["config"] = config_json(config);
  record["initial_state"] = {{"label", static_cast<int>(initial)}, {"name", initial_state_name(initial)}};
  if (!a.code.empty()) record["code"] = a.code;
  record["final_norm"] = traj.final_state.norm();
  record["seam_probability"] = seam_probability(traj.final_state);

  const JointDistribution joint = joint_probability(traj.final_state);
  const int h = config.half_width();
  io::CsvTable joint_csv{"x1", "x2", "P"};
  for (int i = 0; i < config.L; ++i) {
    for (int j = 0; j < config.L; ++j) joint_csv.add(i - h).add(j - h).add(joint.P(i, j)).end_row();
  }
  record.write("joint_probability.csv", joint_csv.text());

  io::CsvTable returns{"t", "P", "P0"};
  for (const auto& r : traj.returns) returns.add(r.t).add(r.P).add(r.P0).end_row();
  record.write("return_series.csv", returns.text());

  if (!a.no_entropy) {
    io::CsvTable entropy{"t", "S_x"};
    for (const auto& e : traj.entropy) entropy.add(e.t).add(e.S).end_row();
    record.write("entropy_series.csv", entropy.text());
  }
  record.finish(threads);
}

// ---- bands ----------------------------------------------------------------

struct BandsArgs {
  std::string theta_plus;
  std::string theta_minus;
  std::string phi = "0";
  int size = 21;
  double gap_min = 0.05;
  double weight_min = 0.5;
  std::string out;
};

void cmd_bands(const BandsArgs& a, int threads) {
  WalkConfig config;
  config.L = a.size;
  config.steps = 1;
  config.theta_left = config.theta_right = io::parse_angle(a.theta_plus);
  config.theta_minus = io::parse_angle(a.theta_minus);
  config.phi = io::parse_angle(a.phi);
  config.validate();

  const TwoBodySpectrum spectrum = band_structure(config);
  WalkConfig free = config;
  free.phi = 0.0;
  const TwoBodySpectrum reference = config.phi == 0.0 ? spectrum : band_structure(free);
  const BoundStateParams params{a.gap_min, a.weight_min};
  const auto gaps = find_gaps(reference.all_energies(), params.gap_min);

  io::CsvTable csv{"n", "p_n", "E", "w", "bound"};
  std::size_t bound = 0;
  for (const auto& sector : spectrum.sectors) {
    for (std::size_t k = 0; k < sector.energies.size(); ++k) {
      const double e = sector.energies[k];
      const double w = sector.diagonal_weight[k];
      const bool in_gap = w >= params.weight_min &&
                          std::any_of(gaps.begin(), gaps.end(),
                                      [e](const SpectralGap& g) { return g.contains(e); });
      bound += in_gap;
      csv.add(sector.n).add(sector.momentum).add(e).add(w).add(in_gap ? 1 : 0).end_row();
    }
  }

  RunRecord record("bands", a.out);
  record["config"] = config_json(config);
  record["gap_min"] = params.gap_min;
  record["weight_min"] = params.weight_min;
  json gap_list = json::array();
  for (const auto& g : gaps) gap_list.push_back({g.lower, g.upper});
  record["reference_gaps"] = gap_list;
  record["bound_states"] = bound;
  record.write("bands.csv", csv.text());
  record.finish(threads);
}

// ---- locmap ---------------------------------------------------------------

struct LocmapArgs {
  std::string theta_left = "-pi/16";
  std::string theta_minus = "pi/4";
  int bell = 0;
  int steps = 65;
  int grid = 32;
  int grid_theta = 0;
  int grid_phi = 0;
  std::string theta_min = "-pi/3";
  std::string theta_max = "pi/3";
  std::string phi_min = "0";
  std::string phi_max = "pi";
  int size = 0;
  BudgetOptions budget;
  std::string out;
};

void cmd_locmap(const LocmapArgs& a, int threads, std::ostream& err) {
  LocalizationMapParams p;
  p.grid.first = {io::parse_angle(a.theta_min), io::parse_angle(a.theta_max),
                  a.grid_theta > 0 ? a.grid_theta : a.grid};
  p.grid.second = {io::parse_angle(a.phi_min), io::parse_angle(a.phi_max),
                   a.grid_phi > 0 ? a.grid_phi : a.grid};
  p.grid.first.validate();
  p.grid.second.validate();
  p.theta_left = io::parse_angle(a.theta_left);
  p.theta_minus = io::parse_angle(a.theta_minus);
  p.initial = initial_state_from_label(a.bell);
  p.steps = a.steps;
  if (a.steps < 1) throw std::invalid_argument("--steps must be positive");
  p.L = a.size > 0 ? a.size : WalkConfig::dynamics_size(a.steps);
  WalkConfig probe{p.L, p.theta_minus, p.theta_left, 0.0, 0.0, p.steps};
  probe.validate();
  probe.validate_for_dynamics();
  a.budget.check(static_cast<double>(p.grid.size()) * p.steps * static_cast<double>(dimension(p.L)),
                 "locmap");

  const auto map = localization_map(p, progress_printer(err, "locmap"));

  io::CsvTable csv{"theta", "phi", "P", "P0", "log10_P", "class"};
  std::size_t localized = 0;
  for (const auto& c : map.cells) {
    localized += c.localized;
    csv.add(c.theta).add(c.phi).add(c.P).add(c.P0).add(std::log10(c.P));
    csv.add(c.localized ? "localized" : "delocalized").end_row();
  }
  RunRecord record("locmap", a.out);
  record["theta_left"] = p.theta_left;
  record["theta_minus"] = p.theta_minus;
  record["initial_state"] = static_cast<int>(p.initial);
  record["steps"] = p.steps;
  record["L"] = p.L;
  record["threshold"] = 1.0 / p.steps;
  record["theta_axis"] = axis_json(p.grid.first);
  record["phi_axis"] = axis_json(p.grid.second);
  record["localized_nodes"] = localized;
  record.write("locmap.csv", csv.text());
  record.finish(threads);
}

// ---- chargemap ------------------------------------------------------------

struct ChargemapArgs {
  int grid = 128;
  int k_points = 1024;
  std::string min = "-pi";
  std::string max = "pi";
  BudgetOptions budget;
  std::string out;
};

void cmd_chargemap(const ChargemapArgs& a, int threads, std::ostream& err) {
  Grid2D grid;
  grid.first = {io::parse_angle(a.min), io::parse_angle(a.max), a.grid};
  grid.second = grid.first;
  grid.first.validate();
  if (a.k_points < 256) throw std::invalid_argument("--k-points must be at least 256");
  a.budget.check(static_cast<double>(grid.size()) * a.k_points, "chargemap");
  ChargeOptions options;
  options.k_points = a.k_points;

  const auto map = charge_map(grid, options, progress_printer(err, "chargemap"));

  io::CsvTable csv{"theta_plus", "theta_minus", "charge", "min_gap"};
  std::size_t undefined = 0;
  for (const auto& c : map.cells) {
    csv.add(c.theta_plus).add(c.theta_minus);
    if (c.charge) csv.add(*c.charge);
    else {
      csv.add("undefined");
      ++undefined;
    }
    csv.add(c.min_gap).end_row();
  }
  RunRecord record("chargemap", a.out);
  record["axis"] = axis_json(grid.first);
  record["k_points"] = a.k_points;
  record["eps_gap"] = options.eps_gap;
  record["undefined_cells"] = undefined;
  record.write("chargemap.csv", csv.text());
  record.finish(threads);
}

// ---- lambdamap ------------------------------------------------------------

struct LambdamapArgs {
  std::string energy = "0";
  std::string phi = "0";
  int grid = 256;
  std::string min = "-pi";
  std::string max = "pi";
  BudgetOptions budget;
  std::string out;
};

void cmd_lambdamap(const LambdamapArgs& a, int threads) {
  Grid2D grid;
  grid.first = {io::parse_angle(a.min), io::parse_angle(a.max), a.grid};
  grid.second = grid.first;
  grid.first.validate();
  a.budget.check(static_cast<double>(grid.size()), "lambdamap");
  const double energy = io::parse_angle(a.energy);
  const double phi = io::parse_angle(a.phi);

  const auto map = loc_length_map(energy, phi, grid);

  io::CsvTable csv{"theta_plus", "theta_minus", "lambda_abs_max", "Lambda", "defined_flag"};
  const double nan = std::nan("");
  for (const auto& c : map.cells) {
    csv.add(c.theta_plus).add(c.theta_minus);
    csv.add(c.defined ? c.lambda_abs_max : nan).add(c.defined ? c.Lambda : nan);
    csv.add(c.defined ? 1 : 0).end_row();
  }
  RunRecord record("lambdamap", a.out);
  record["energy"] = energy;
  record["phi"] = phi;
  record["axis"] = axis_json(grid.first);
  record["singular_eps"] = kTransferSingular;
  record.write("lambdamap.csv", csv.text());
  record.finish(threads);
}

// ---- fit ------------------------------------------------------------------

struct FitArgs {
  std::string input;
  std::string model = "both";
  double t_min = 10.0;
  double t_max = 0.0;
  std::string out;
};

void cmd_fit(const FitArgs& a, int threads) {
  const io::CsvData data = io::read_csv(a.input);
  const std::vector<double> t = data.numbers("t");
  const std::vector<double> S = data.numbers("S_x");
  if (t.empty()) throw std::invalid_argument("entropy series is empty");
  const double t_max = a.t_max > 0 ? a.t_max : *std::max_element(t.begin(), t.end());

  std::vector<GrowthModel> models;
  if (a.model == "both") models = {GrowthModel::Log, GrowthModel::LogLog};
  else models = {parse_growth_model(a.model)};

  RunRecord record("fit", a.out);
  record["input"] = a.input;
  for (GrowthModel m : models) {
    const GrowthFit f = fit_growth(t, S, m, a.t_min, t_max);
    const json report = {{"model", growth_model_name(m)}, {"alpha", f.alpha}, {"S0", f.S0},
                         {"r2", f.r2}, {"window", {f.t_min, f.t_max}}, {"points", f.points}};
    record.write("fit_" + std::string(growth_model_name(m)) + ".json", report.dump(2) + "\n");
  }
  record.finish(threads);
}

}  // namespace

int resolve_threads(int requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("TOPOWALK_THREADS")) {
    char* end = nullptr;
    const long value = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && value > 0) return static_cast<int>(value);
  }
  return omp_get_num_procs();
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Two-particle topological quantum walk simulator"};
  app.require_subcommand(1);
  int threads = 0;

  const auto angle_help = " (radians, or a multiple of pi such as 3pi/8)";

  EvolveArgs ev;
  auto* evolve = app.add_subcommand("evolve", "Run the walk and write probabilities and entropy");
  auto* code_opt = evolve->add_option("--code", ev.code, "Four-digit parameter code cbgi");
  for (auto [flag, target, what] :
       {std::tuple{"--theta-left", &ev.theta_left, "Rotation angle for x < 0"},
        std::tuple{"--theta-right", &ev.theta_right, "Rotation angle for x >= 0"},
        std::tuple{"--phi", &ev.phi, "Interaction phase"}}) {
    evolve->add_option(flag, *target, std::string(what) + angle_help)->capture_default_str()->excludes(code_opt);
  }
  evolve->add_option("--theta-minus", ev.theta_minus, std::string("Second rotation angle") + angle_help)
      ->capture_default_str()
      ->excludes(code_opt);
  evolve->add_option("--bell", ev.bell, "Initial state 0..4 (phi+, phi-, psi+, psi-, |0000>)")
      ->capture_default_str()
      ->excludes(code_opt);
  evolve->add_option("--steps", ev.steps, "Number of steps")->required();
  evolve->add_option("--size", ev.size, "Lattice size L (default 2*steps+5)");
  evolve->add_flag("--no-entropy", ev.no_entropy, "Skip the entropy series");
  evolve->add_option("--out", ev.out, "Output directory")->required();

  BandsArgs bd;
  auto* bands = app.add_subcommand("bands", "Quasienergy bands by total-momentum sector");
  bands->add_option("--theta-plus", bd.theta_plus, std::string("First rotation angle") + angle_help)->required();
  bands->add_option("--theta-minus", bd.theta_minus, std::string("Second rotation angle") + angle_help)
      ->required();
  bands->add_option("--phi", bd.phi, std::string("Interaction phase") + angle_help)->capture_default_str();
  bands->add_option("--size", bd.size, "Lattice size L")->capture_default_str();
  bands->add_option("--gap-min", bd.gap_min, "Minimum gap width (rad)")->capture_default_str();
  bands->add_option("--weight-min", bd.weight_min, "Minimum diagonal weight of a bound state")
      ->capture_default_str();
  bands->add_option("--out", bd.out, "Output directory")->required();

  LocmapArgs lm;
  auto* locmap = app.add_subcommand("locmap", "Return probability over (theta, phi)");
  locmap->add_option("--theta-left", lm.theta_left, std::string("Left rotation angle") + angle_help)
      ->capture_default_str();
  locmap->add_option("--theta-minus", lm.theta_minus, std::string("Second rotation angle") + angle_help)
      ->capture_default_str();
  locmap->add_option("--bell", lm.bell, "Initial state 0..4")->capture_default_str();
  locmap->add_option("--steps", lm.steps, "Steps N; localized means P(N) > 1/N")->capture_default_str();
  locmap->add_option("--grid", lm.grid, "Nodes per axis")->capture_default_str();
  locmap->add_option("--grid-theta", lm.grid_theta, "Nodes along theta (overrides --grid)");
  locmap->add_option("--grid-phi", lm.grid_phi, "Nodes along phi (overrides --grid)");
  locmap->add_option("--theta-min", lm.theta_min, "Lower theta bound")->capture_default_str();
  locmap->add_option("--theta-max", lm.theta_max, "Upper theta bound")->capture_default_str();
  locmap->add_option("--phi-min", lm.phi_min, "Lower phi bound")->capture_default_str();
  locmap->add_option("--phi-max", lm.phi_max, "Upper phi bound")->capture_default_str();
  locmap->add_option("--size", lm.size, "Lattice size L (default 2*steps+5)");
  add_budget_options(locmap, lm.budget);
  locmap->add_option("--out", lm.out, "Output directory")->required();

  ChargemapArgs cm;
  auto* chargemap = app.add_subcommand("chargemap", "Topological charge over (theta+, theta-)");
  chargemap->add_option("--grid", cm.grid, "Nodes per axis")->capture_default_str();
  chargemap->add_option("--k-points", cm.k_points, "Initial momentum samples (>= 256)")->capture_default_str();
  chargemap->add_option("--min", cm.min, "Lower angle bound")->capture_default_str();
  chargemap->add_option("--max", cm.max, "Upper angle bound")->capture_default_str();
  add_budget_options(chargemap, cm.budget);
  chargemap->add_option("--out", cm.out, "Output directory")->required();

  LambdamapArgs la;
  auto* lambdamap = app.add_subcommand("lambdamap", "Inverse localization length over (theta+, theta-)");
  lambdamap->add_option("--energy", la.energy, std::string("Quasienergy") + angle_help)->capture_default_str();
  lambdamap->add_option("--phi", la.phi, std::string("Interaction phase") + angle_help)->capture_default_str();
  lambdamap->add_option("--grid", la.grid, "Nodes per axis")->capture_default_str();
  lambdamap->add_option("--min", la.min, "Lower angle bound")->capture_default_str();
  lambdamap->add_option("--max", la.max, "Upper angle bound")->capture_default_str();
  add_budget_options(lambdamap, la.budget);
  lambdamap->add_option("--out", la.out, "Output directory")->required();

  FitArgs ft;
  auto* fit = app.add_subcommand("fit", "Fit entropy growth laws to an entropy series");
  fit->add_option("--input", ft.input, "entropy_series.csv written by evolve")->required();
  fit->add_option("--model", ft.model, "log, loglog or both")
      ->check(CLI::IsMember({"log", "loglog", "both"}))
      ->capture_default_str();
  fit->add_option("--t-min", ft.t_min, "Window start")->capture_default_str();
  fit->add_option("--t-max", ft.t_max, "Window end (default: last sample)");
  fit->add_option("--out", ft.out, "Output directory")->required();

  for (auto* sub : {evolve, bands, locmap, chargemap, lambdamap, fit}) {
    sub->add_option("--threads", threads, "Worker threads (default: TOPOWALK_THREADS or all cores)");
  }

  std::vector<const char*> argv;
  argv.reserve(args.size());
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kBadArguments;
  }

  const int workers = resolve_threads(threads);
  omp_set_num_threads(workers);
  try {
    if (*evolve) cmd_evolve(ev, workers);
    else if (*bands) cmd_bands(bd, workers);
    else if (*locmap) cmd_locmap(lm, workers, err);
    else if (*chargemap) cmd_chargemap(cm, workers, err);
    else if (*lambdamap) cmd_lambdamap(la, workers);
    else if (*fit) cmd_fit(ft, workers);
  } catch (const BudgetExceeded& e) {
    err << "error: " << e.what() << "\n";
    return kBudgetExceeded;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return kBadArguments;
  } catch (const std::out_of_range& e) {
    err << "error: " << e.what() << "\n";
    return kBadArguments;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kFailure;
  }
  return kOk;
}

}  // namespace topowalk::cli
