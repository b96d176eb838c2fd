#include "kgsim/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>

#include "kgsim/engine.hpp"
#include "kgsim/error.hpp"
#include "kgsim/graph.hpp"
#include "kgsim/joint_distribution.hpp"
#include "kgsim/measures.hpp"
#include "kgsim/traces.hpp"

namespace kgsim::cli {

namespace {

using json = nlohmann::json;

std::string fmt12(double value) {
  if (value == 0.0) value = 0.0;
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", value);
  return buf;
}

std::ifstream open_input(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::EmptyInput, "cannot read '" + path + "'");
  return in;
}

std::ofstream open_output(const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(Errc::InvalidConfig, "cannot write '" + path + "'");
  return out;
}

void finish_output(std::ofstream& out, const std::string& path) {
  out.flush();
  if (!out) throw Error(Errc::InvalidConfig, "failed writing '" + path + "'");
}

struct TraceOptions {
  std::string table_path;
  std::string activity_path;
  std::string missing = "drop-row";
  bool synth = false;
  traces::SynthConfig synth_config;
  bool unique_tips = false;
};

void add_synth_flags(CLI::App& cmd, TraceOptions& opts, bool required) {
  auto* users = cmd.add_option("--users", opts.synth_config.users, "Number of users M")
                    ->check(CLI::Range(std::size_t{1}, std::size_t{1} << 20));
  auto* categories = cmd.add_option("--categories", opts.synth_config.categories, "Categories per user v")
                         ->check(CLI::Range(std::size_t{1}, std::size_t{1} << 20));
  auto* rows = cmd.add_option("--rows", opts.synth_config.rows, "Synthetic row count T")
                   ->check(CLI::PositiveNumber);
  auto* rho = cmd.add_option("--rho", opts.synth_config.rho, "Correlation in [0, 1]")->check(CLI::Range(0.0, 1.0));
  cmd.add_option("--seed", opts.synth_config.seed, "Trace seed");
  cmd.add_flag("--unique-tips", opts.unique_tips, "Give every user a unique tip");
  if (required) {
    users->required();
    categories->required();
    rows->required();
    rho->required();
  }
}

void add_trace_source_flags(CLI::App& cmd, TraceOptions& opts) {
  auto* table = cmd.add_option("--trace", opts.table_path, "Sample table file");
  auto* activity = cmd.add_option("--activity", opts.activity_path, "Activity CSV (timestamp,user,category)");
  cmd.add_option("--missing", opts.missing, "Missing-observation policy for --activity")
      ->check(CLI::IsMember({"drop-row", "idle-category"}));
  table->excludes(activity);
}

traces::SampleTable load_table(const TraceOptions& opts) {
  const int sources = !opts.table_path.empty() + !opts.activity_path.empty() + opts.synth;
  if (sources != 1) throw CLI::ValidationError("trace source", "give exactly one of --trace, --activity, --synth");
  std::optional<traces::SampleTable> table;
  if (!opts.table_path.empty()) {
    auto in = open_input(opts.table_path);
    table = traces::read_sample_table(in);
  } else if (!opts.activity_path.empty()) {
    auto in = open_input(opts.activity_path);
    const auto policy = opts.missing == "idle-category" ? traces::MissingPolicy::IdleCategory
                                                        : traces::MissingPolicy::DropRow;
    table = traces::parse_activity_csv(in, opts.synth_config.users, opts.synth_config.categories, policy);
  } else {
    table = traces::synthesize_traces(opts.synth_config);
  }
  if (opts.unique_tips) table = traces::inject_unique_tips(*table);
  return std::move(*table);
}

int cmd_synth(const TraceOptions& opts, const std::string& out_path, std::ostream& out) {
  traces::SampleTable table = traces::synthesize_traces(opts.synth_config);
  if (opts.unique_tips) table = traces::inject_unique_tips(table);
  {
    auto file = open_output(out_path);
    traces::write_sample_table(file, table);
    finish_output(file, out_path);
  }
  const auto dist = info::from_samples(table);
  out << "M=" << table.user_count() << " v=" << table.category_count() << " T=" << table.row_count() << '\n';
  out << "user,h_bits\n";
  for (UserId u = 0; u < table.user_count(); ++u) {
    out << u << ',' << fmt12(info::subset_entropy(dist, info::VariableSet::single(u))) << '\n';
  }
  return kSuccess;
}

int cmd_limits(const TraceOptions& opts, const std::string& summary_path, std::ostream& out) {
  const auto table = load_table(opts);
  const auto dist = info::from_samples(table);
  const double joint = info::subset_entropy(dist, info::VariableSet::all(dist.user_count()));
  json summary;
  summary["joint_bits"] = joint;
  summary["users"] = json::array();
  out << "joint_bits=" << fmt12(joint) << '\n';
  out << "user,h_bits,kl_bits\n";
  for (UserId u = 0; u < dist.user_count(); ++u) {
    const double h = info::subset_entropy(dist, info::VariableSet::single(u));
    const double kl = info::knowledge_limit(dist, u);
    out << u << ',' << fmt12(h) << ',' << fmt12(kl) << '\n';
    summary["users"].push_back({{"user", u}, {"h_bits", h}, {"kl_bits", kl}});
  }
  if (!summary_path.empty()) {
    auto file = open_output(summary_path);
    file << summary.dump(2) << '\n';
    finish_output(file, summary_path);
  }
  return kSuccess;
}

struct SimulateOptions {
  std::string topology = "mesh";
  double radius = 0.35;
  std::uint64_t topology_seed = 0;
  std::string edges_path;
  std::string policy = "smo";
  std::string schedule = "focal";
  UserId focal = 0;
  std::size_t rounds = 100;
  std::uint64_t schedule_seed = 0;
  std::size_t sweeps = 3;
  double tolerance = engine::kDefaultTolerance;
  std::string metrics_path;
  std::string summary_path;
};

topology::Graph build_graph(const SimulateOptions& opts, std::size_t m) {
  if (opts.topology == "mesh") return topology::full_mesh(m);
  if (opts.topology == "geometric") return topology::random_geometric(m, opts.radius, opts.topology_seed);
  if (opts.edges_path.empty()) throw CLI::ValidationError("--edges", "required with --topology edges");
  auto in = open_input(opts.edges_path);
  return topology::read_edge_list(in);
}

engine::Schedule build_schedule(const SimulateOptions& opts, const topology::Graph& g) {
  if (opts.schedule == "focal") {
    if (opts.focal >= g.node_count()) throw Error(Errc::BadVariableIndex, "focal node outside the graph");
    return engine::focal_schedule(g, opts.focal);
  }
  if (opts.schedule == "round-robin") return engine::round_robin_schedule(g, opts.rounds, opts.schedule_seed);
  return engine::edge_sweep_schedule(g, opts.sweeps);
}

int cmd_simulate(const TraceOptions& trace_opts, const SimulateOptions& opts, std::ostream& out) {
  const auto table = load_table(trace_opts);
  const auto dist = info::from_samples(table);
  const auto graph = build_graph(opts, dist.user_count());
  if (graph.node_count() != dist.user_count()) {
    throw Error(Errc::ShapeMismatch, "trace has " + std::to_string(dist.user_count()) + " users, topology has " +
                                         std::to_string(graph.node_count()) + " nodes");
  }
  const auto schedule = build_schedule(opts, graph);
  const auto policy = engine::parse_policy(opts.policy);
  const auto records = engine::run(dist, graph, schedule, policy, opts.tolerance);

  {
    auto file = open_output(opts.metrics_path);
    engine::write_metrics_csv(file, records);
    finish_output(file, opts.metrics_path);
  }

  json summary;
  summary["policy"] = std::string(engine::policy_name(policy));
  summary["rounds"] = schedule.size();
  summary["nodes"] = json::array();
  out << "node,kl_bits,kg_bits,achieved,steps_to_limit,oh_total_bits\n";
  const std::size_t m = dist.user_count();
  for (UserId n = 0; n < m; ++n) {
    const auto steps = engine::steps_to_limit(records, n, opts.tolerance);
    double kl = info::knowledge_limit(dist, n);
    double kg = 0.0;
    double oh = 0.0;
    bool achieved = kl <= opts.tolerance;
    if (!records.empty()) {
      const auto& last = records[records.size() - m + n];
      kg = last.kg_bits;
      oh = last.oh_cum_bits;
      achieved = last.achieved;
    }
    out << n << ',' << fmt12(kl) << ',' << fmt12(kg) << ',' << (achieved ? "true" : "false") << ','
        << (steps ? std::to_string(*steps) : std::string("none")) << ',' << fmt12(oh) << '\n';
    json node{{"node", n}, {"kl_bits", kl}, {"kg_bits", kg}, {"achieved", achieved}, {"oh_total_bits", oh}};
    node["steps_to_limit"] = steps ? json(*steps) : json(nullptr);
    summary["nodes"].push_back(std::move(node));
  }
  if (!opts.summary_path.empty()) {
    auto file = open_output(opts.summary_path);
    file << summary.dump(2) << '\n';
    finish_output(file, opts.summary_path);
  }
  return kSuccess;
}

int cmd_report(const std::string& metrics_path, const std::vector<UserId>& nodes, const std::string& out_path,
               std::ostream& out) {
  auto in = open_input(metrics_path);
  const auto records = engine::read_metrics_csv(in);
  if (records.empty()) throw Error(Errc::EmptyInput, "metrics file has no records");

  std::map<std::size_t, std::map<UserId, const engine::MetricsRecord*>> by_round;
  std::vector<UserId> present;
  for (const auto& rec : records) {
    by_round[rec.round][rec.node] = &rec;
    present.push_back(rec.node);
  }
  std::sort(present.begin(), present.end());
  for (UserId n : nodes) {
    if (!std::binary_search(present.begin(), present.end(), n)) {
      throw Error(Errc::BadVariableIndex, "node " + std::to_string(n) + " not in metrics");
    }
  }

  std::ostringstream table;
  table << "round";
  for (UserId n : nodes) table << ",node_" << n << "_kg,node_" << n << "_kl";
  table << '\n';
  for (const auto& [round, row] : by_round) {
    table << round;
    for (UserId n : nodes) {
      auto it = row.find(n);
      if (it == row.end()) {
        throw Error(Errc::MalformedSamples, "round " + std::to_string(round) + " lacks node " + std::to_string(n));
      }
      table << ',' << fmt12(it->second->kg_bits) << ',' << fmt12(it->second->kl_bits);
    }
    table << '\n';
  }
  if (out_path.empty()) {
    out << table.str();
  } else {
    auto file = open_output(out_path);
    file << table.str();
    finish_output(file, out_path);
  }
  return kSuccess;
}

int exit_code_for(const Error& e) {
  switch (e.code()) {
    case Errc::InvalidConfig: return kUsage;
    case Errc::InternalConsistency: return kInternalError;
    default: return kInputError;
  }
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Knowledge gain simulator for opportunistic social networks", "kgsim"};
  app.require_subcommand(1);

  TraceOptions synth_opts;
  std::string synth_out;
  auto* synth = app.add_subcommand("synth", "Write a synthetic sample table");
  add_synth_flags(*synth, synth_opts, true);
  synth->add_option("--out", synth_out, "Output sample table file")->required();

  TraceOptions limits_opts;
  std::string limits_summary;
  auto* limits = app.add_subcommand("limits", "Per-user entropy and knowledge gain limit");
  add_trace_source_flags(*limits, limits_opts);
  limits->add_option("--users", limits_opts.synth_config.users, "Users (for --activity)");
  limits->add_option("--categories", limits_opts.synth_config.categories, "Categories (for --activity)");
  limits->add_flag("--unique-tips", limits_opts.unique_tips, "Give every user a unique tip");
  limits->add_option("--summary", limits_summary, "JSON summary output");

  TraceOptions sim_trace;
  SimulateOptions sim;
  auto* simulate = app.add_subcommand("simulate", "Run a sharing policy over a topology");
  add_trace_source_flags(*simulate, sim_trace);
  simulate->add_flag("--synth", sim_trace.synth, "Synthesize the trace from --users/--categories/--rows/--rho/--seed");
  add_synth_flags(*simulate, sim_trace, false);
  simulate->add_option("--topology", sim.topology, "mesh | geometric | edges")
      ->check(CLI::IsMember({"mesh", "geometric", "edges"}));
  simulate->add_option("--radius", sim.radius, "Disk radius for geometric topologies");
  simulate->add_option("--topology-seed", sim.topology_seed, "Placement seed for geometric topologies");
  simulate->add_option("--edges", sim.edges_path, "Edge-list file for --topology edges");
  simulate->add_option("--policy", sim.policy, "smo | fmpo")->check(CLI::IsMember({"smo", "fmpo"}));
  simulate->add_option("--schedule", sim.schedule, "focal | round-robin | sweep")
      ->check(CLI::IsMember({"focal", "round-robin", "sweep"}));
  simulate->add_option("--focal", sim.focal, "Focal node for --schedule focal");
  simulate->add_option("--rounds", sim.rounds, "Rounds for --schedule round-robin")->check(CLI::PositiveNumber);
  simulate->add_option("--schedule-seed", sim.schedule_seed, "Seed for --schedule round-robin");
  simulate->add_option("--sweeps", sim.sweeps, "Passes over all edges for --schedule sweep")->check(CLI::PositiveNumber);
  simulate->add_option("--tol", sim.tolerance, "Achievement tolerance in bits")->check(CLI::PositiveNumber);
  simulate->add_option("--metrics", sim.metrics_path, "Metrics CSV output")->required();
  simulate->add_option("--summary", sim.summary_path, "JSON summary output");

  std::string report_metrics;
  std::vector<UserId> report_nodes;
  std::string report_out;
  auto* report = app.add_subcommand("report", "Pivot metrics into a wide plot-ready CSV");
  report->add_option("--metrics", report_metrics, "Metrics CSV from simulate")->required();
  report->add_option("--nodes", report_nodes, "Node ids to include")->required()->delimiter(',');
  report->add_option("--out", report_out, "Output CSV (default: stdout)");

  std::vector<std::string> argv(args.rbegin(), args.rend());
  try {
    app.parse(argv);
    if (*synth) return cmd_synth(synth_opts, synth_out, out);
    if (*limits) return cmd_limits(limits_opts, limits_summary, out);
    if (*simulate) return cmd_simulate(sim_trace, sim, out);
    return cmd_report(report_metrics, report_nodes, report_out, out);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kSuccess;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kSuccess;
  } catch (const CLI::ParseError& e) {
    err << "kgsim: " << e.what() << '\n';
    return kUsage;
  } catch (const Error& e) {
    err << "kgsim: " << e.what() << '\n';
    return exit_code_for(e);
  }
}

}  // namespace kgsim::cli
