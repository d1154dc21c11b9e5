#include "spatial/cli.hpp"

#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "spatial/analysis.hpp"
#include "spatial/learning.hpp"
#include "spatial/report_io.hpp"
#include "spatial/scenario_io.hpp"

namespace spatial {

using nlohmann::json;

namespace {

const std::map<std::string, DeviationSpace> kSpaces{
    {"channels", DeviationSpace::Channels},
    {"locations", DeviationSpace::Locations},
    {"joint", DeviationSpace::Joint}};

const std::map<std::string, TimerDistribution> kTimers{
    {"exp", TimerDistribution::Exponential},
    {"uniform", TimerDistribution::Uniform},
    {"pareto", TimerDistribution::Pareto}};

const std::map<std::string, ChannelOracle> kModes{
    {"exact", ChannelOracle::ExactArgmax}, {"learning", ChannelOracle::Learning}};

struct HelpRequested {};

}  // namespace

bool parse_command_line(int argc, const char* const* argv, RunConfig& c,
                        std::ostream& out) {
  CLI::App app{"Spectrum access with spatial reuse: learning, mobility and equilibrium analysis"};
  app.require_subcommand(1);
  std::string out_dir;

  auto common = [&](CLI::App* sub, bool needs_scenario) {
    auto* opt = sub->add_option("--scenario", c.scenario, "scenario JSON file");
    if (needs_scenario) opt->required();
    sub->add_option("--seed", c.seed, "root seed");
    sub->add_option("--out", out_dir, "output directory");
    sub->add_option("--budget", c.budget, "enumeration budget (profiles)");
  };
  auto learning_opts = [&](CLI::App* sub) {
    sub->add_option("--periods", c.periods, "decision periods")->check(CLI::PositiveNumber);
    sub->add_option("--slots-per-period", c.slots_per_period, "slots per decision period K")
        ->check(CLI::PositiveNumber);
    sub->add_option("--mu-scale", c.mu_scale, "mu_T = scale / T")->check(CLI::PositiveNumber);
    sub->add_flag("--record-sigma", c.record_sigma, "write mixed strategies to the trace");
  };
  auto mobility_opts = [&](CLI::App* sub) {
    sub->add_option("--gamma", c.gamma, "temperature")->check(CLI::NonNegativeNumber);
    sub->add_option("--horizon", c.horizon, "virtual-time horizon")->check(CLI::NonNegativeNumber);
    sub->add_option("--timer-dist", c.timer, "timer distribution")
        ->transform(CLI::CheckedTransformer(kTimers, CLI::ignore_case));
    sub->add_option("--pareto-shape", c.pareto_shape, "Pareto timer shape (> 1)");
  };
  auto space_opt = [&](CLI::App* sub) {
    sub->add_option("--space", c.space, "deviation space")
        ->transform(CLI::CheckedTransformer(kSpaces, CLI::ignore_case));
  };

  auto* learn = app.add_subcommand("learn", "distributed channel learning at fixed locations");
  common(learn, true);
  learning_opts(learn);

  auto* mobility = app.add_subcommand("mobility", "strategic mobility with fixed channels");
  common(mobility, true);
  mobility_opts(mobility);

  auto* joint = app.add_subcommand("joint", "joint channel selection and mobility");
  common(joint, true);
  mobility_opts(joint);
  learning_opts(joint);
  joint->add_option("--mode", c.mode, "channel oracle")
      ->transform(CLI::CheckedTransformer(kModes, CLI::ignore_case));

  auto* analyze = app.add_subcommand("analyze", "price of anarchy and bound ingredients");
  common(analyze, true);
  space_opt(analyze);
  analyze->add_flag("--normalized", c.normalized, "use the shared normalized utility scale");

  auto* enumerate = app.add_subcommand("enumerate", "list every pure Nash equilibrium");
  common(enumerate, true);
  space_opt(enumerate);

  auto* generate = app.add_subcommand("generate", "write a generated scenario file");
  common(generate, false);
  generate->add_option("--preset", c.preset, "preset name")
      ->required()
      ->check(CLI::IsMember(preset_names()));
  auto& g = c.generator;
  generate->add_option("--users", g.users, "number of users");
  generate->add_option("--channels", g.channels, "number of channels");
  generate->add_option("--graph", g.graph, "ring | complete | gnp")
      ->check(CLI::IsMember({"ring", "complete", "gnp"}));
  generate->add_option("--degree", g.degree, "ring degree (even)");
  generate->add_option("--edge-probability", g.edge_probability, "random graph edge probability")
      ->check(CLI::Range(0.0, 1.0));
  generate->add_option("--side", g.side, "square side length");
  generate->add_option("--delta", g.delta, "interference range");
  generate->add_option("--rows", g.rows, "grid rows");
  generate->add_option("--cols", g.cols, "grid columns");
  generate->add_option("--obstacles", g.obstacles, "blocked grid cells");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return false;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return false;
  } catch (const CLI::ParseError& e) {
    throw ConfigError(e.what());
  }

  c.command = app.get_subcommands().front()->get_name();
  if (!out_dir.empty()) {
    c.out = out_dir;
  } else if (const char* env = std::getenv(kOutputDirEnv); env && *env) {
    c.out = env;
  }
  return true;
}

namespace {

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw ConfigError("cannot write " + path.string());
  f << text;
}

void write_json(const std::filesystem::path& path, const json& j) {
  write_text(path, j.dump(2) + "\n");
}

json phi_summary(const std::vector<double>& phi) {
  if (phi.empty()) return json::object();
  double best = phi.front();
  for (double v : phi) best = std::max(best, v);
  return json{{"first", phi.front()}, {"last", phi.back()}, {"max", best},
              {"count", phi.size()}};
}

LearningParams learning_params(const RunConfig& c) {
  LearningParams p;
  p.periods = c.periods;
  p.slots_per_period = c.slots_per_period;
  p.mu_scale = c.mu_scale;
  p.budget = c.budget;
  p.record_sigma = c.record_sigma;
  return p;
}

MobilityParams mobility_params(const RunConfig& c) {
  MobilityParams p;
  p.gamma = c.gamma;
  p.horizon = c.horizon;
  p.timer = c.timer;
  p.pareto_shape = c.pareto_shape;
  p.oracle = c.mode;
  p.learning = learning_params(c);
  p.budget = c.budget;
  return p;
}

bool fits(const Scenario& s, DeviationSpace space, std::uint64_t budget) {
  return search_space_size(s, space) <= static_cast<long double>(budget);
}

json occupancy_json(const Occupancy& occ) {
  json rows = json::array();
  for (const auto& [d, w] : occ) rows.push_back({{"locations", d}, {"weight", w}});
  return rows;
}

void run_learn(const RunConfig& c, const Scenario& s, std::ostream& log) {
  RngStreams rng(c.seed);
  const LocationProfile d = s.initial_locations();
  const LearningResult r = run_learning(s, d, learning_params(c), rng);
  std::ostringstream csv;
  write_learning_csv(csv, r);
  write_text(c.out / "learn_trace.csv", csv.str());

  const Profile final_profile{d, r.final_channels};
  std::vector<double> phi;
  for (const auto& row : r.trace) phi.push_back(row.phi);
  const double total = total_utility(s, final_profile);
  json summary{{"command", "learn"},
               {"seed", c.seed},
               {"final_profile", profile_json(final_profile)},
               {"converged", r.converged},
               {"is_nash", is_nash(s, final_profile, DeviationSpace::Channels)},
               {"phi", phi_summary(phi)},
               {"final_phi", potential(s, final_profile)},
               {"total_utility", total}};
  if (fits(s, DeviationSpace::Channels, c.budget)) {
    const Optimum opt = centralized_optimum(s, DeviationSpace::Channels, final_profile, c.budget);
    summary["optimum"] = {{"profile", profile_json(opt.profile)}, {"value", opt.value}};
    summary["performance_loss_percent"] =
        performance_loss(total, opt.value, r.norm, s.num_users());
  }
  write_json(c.out / "summary.json", summary);
  log << "learn: final channels " << join_indices(r.final_channels) << ", nash "
      << (summary["is_nash"].get<bool>() ? "yes" : "no") << '\n';
}

void run_mobility_cmd(const RunConfig& c, const Scenario& s, std::ostream& log) {
  RngStreams rng(c.seed);
  const ChannelProfile a = s.initial_channels();
  const MobilityParams params = mobility_params(c);
  const MobilityResult r = run_mobility(s, a, params, rng);
  std::ostringstream csv;
  write_mobility_csv(csv, r);
  write_text(c.out / "mobility_trace.csv", csv.str());

  json summary{{"command", "mobility"},
               {"seed", c.seed},
               {"gamma", c.gamma},
               {"timer_distribution", to_string(c.timer)},
               {"events", r.event_count},
               {"final_profile", profile_json(Profile{r.final_d, r.final_a})},
               {"time_average_utility", r.time_average_utility}};
  if (fits(s, DeviationSpace::Locations, c.budget)) {
    const GibbsDistribution g = gibbs_distribution(s, a, c.gamma, c.budget);
    summary["occupancy"] = occupancy_json(r.occupancy);
    summary["total_variation_to_gibbs"] = total_variation(r.occupancy, g);
  }
  write_json(c.out / "summary.json", summary);
  log << "mobility: " << r.event_count << " events\n";
}

void run_joint_cmd(const RunConfig& c, const Scenario& s, std::ostream& log) {
  RngStreams rng(c.seed);
  const MobilityResult r = run_joint(s, mobility_params(c), rng);
  std::ostringstream csv;
  write_mobility_csv(csv, r);
  write_text(c.out / "joint_trace.csv", csv.str());

  const Profile final_profile{r.final_d, r.final_a};
  const LocationProfile modal = modal_state(r.tail_occupancy);
  json summary{{"command", "joint"},
               {"seed", c.seed},
               {"gamma", c.gamma},
               {"mode", c.mode == ChannelOracle::ExactArgmax ? "exact" : "learning"},
               {"events", r.event_count},
               {"final_profile", profile_json(final_profile)},
               {"final_is_joint_nash", is_nash(s, final_profile, DeviationSpace::Joint)},
               {"modal_locations_tail", modal},
               {"time_average_utility", r.time_average_utility},
               {"tail_average_utility", r.tail_average_utility}};
  if (fits(s, DeviationSpace::Joint, c.budget)) {
    const Profile base = initial_profile(s);
    const Optimum opt = centralized_optimum(s, DeviationSpace::Joint, base, c.budget);
    const UtilityNormalization norm =
        utility_normalization(s, DeviationSpace::Joint, base, c.budget);
    summary["optimum"] = {{"profile", profile_json(opt.profile)}, {"value", opt.value}};
    summary["performance_loss_percent"] =
        performance_loss(r.tail_average_utility, opt.value, norm, s.num_users());
  }
  write_json(c.out / "summary.json", summary);
  log << "joint: " << r.event_count << " events, final locations "
      << join_indices(r.final_d) << '\n';
}

void run_analyze(const RunConfig& c, const Scenario& s, std::ostream& log) {
  json report;
  if (c.space == DeviationSpace::Joint) {
    report = report_json(joint_poa(s, c.budget));
  } else {
    report = report_json(poa(s, s.initial_locations(), c.normalized, c.budget));
  }
  report["command"] = "analyze";
  report["space"] = to_string(c.space);
  write_json(c.out / "report.json", report);
  log << "analyze: poa " << format_number(report["poa"].is_null() ? NAN : report["poa"].get<double>())
      << '\n';
}

void run_enumerate(const RunConfig& c, const Scenario& s, std::ostream& log) {
  const Profile base = initial_profile(s);
  const auto nash = enumerate_nash(s, c.space, base, c.budget);
  std::ostringstream csv;
  csv << "locations,channels,total_utility,phi\n";
  for (const auto& p : nash) {
    csv << join_indices(p.d) << ',' << join_indices(p.a) << ','
        << format_number(total_utility(s, p)) << ',' << format_number(potential(s, p)) << '\n';
  }
  write_text(c.out / "nash.csv", csv.str());
  write_json(c.out / "summary.json",
             json{{"command", "enumerate"}, {"space", to_string(c.space)},
                  {"nash_count", nash.size()},
                  {"profiles", static_cast<double>(search_space_size(s, c.space))}});
  log << "enumerate: " << nash.size() << " equilibria\n";
}

}  // namespace

void run(const RunConfig& c, std::ostream& log) {
  std::filesystem::create_directories(c.out);
  if (c.command == "generate") {
    const ScenarioConfig cfg = generate_scenario(c.preset, c.generator, c.seed);
    validate_scenario(cfg);
    write_scenario_file(c.out / "scenario.json", cfg);
    log << "generate: wrote " << (c.out / "scenario.json").string() << '\n';
    return;
  }
  const Scenario s = validate_scenario(read_scenario_file(c.scenario));
  if (c.command == "learn") return run_learn(c, s, log);
  if (c.command == "mobility") return run_mobility_cmd(c, s, log);
  if (c.command == "joint") return run_joint_cmd(c, s, log);
  if (c.command == "analyze") return run_analyze(c, s, log);
  if (c.command == "enumerate") return run_enumerate(c, s, log);
  throw ConfigError("unknown command: " + c.command);
}

int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  auto fail = [&](int code, const char* kind, const std::string& message, json extra = {}) {
    json j{{"error", kind}, {"message", message}};
    if (extra.is_object()) j.update(extra);
    err << j.dump() << '\n';
    return code;
  };
  try {
    RunConfig config;
    if (!parse_command_line(argc, argv, config, out)) return kExitOk;
    run(config, out);
    return kExitOk;
  } catch (const ConfigError& e) {
    return fail(kExitConfig, "config-parse", e.what());
  } catch (const ValidationError& e) {
    json extra{{"invariant", e.invariant()}};
    if (e.index()) extra["index"] = *e.index();
    return fail(kExitValidation, "scenario-validation", e.what(), extra);
  } catch (const BudgetExceeded& e) {
    return fail(kExitBudget, "budget-exceeded", e.what(),
                json{{"required", static_cast<double>(e.required())}, {"budget", e.budget()}});
  } catch (const std::exception& e) {
    return fail(kExitFailure, "internal", e.what());
  }
}

}  // namespace spatial
