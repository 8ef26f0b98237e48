#include "gailpt/cli.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "gailpt/trainer.hpp"

namespace gailpt {

namespace fs = std::filesystem;
using ordered_json = nlohmann::ordered_json;

namespace {

constexpr const char* kBuiltinsVersion = "builtins-1";

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path);
  out << text;
}

int env_worker_override(int workers) {
  const char* v = std::getenv("GAILPT_THREADS");
  if (v == nullptr || *v == '\0') return workers;
  return std::max(1, std::atoi(v));
}

struct TrainArgs {
  TrainConfig cfg;
  std::string out_dir;
  std::string kb_path;
};

void write_manifest(const std::string& path, const TrainConfig& cfg, const RunResult& result) {
  ordered_json doc;
  doc["algo"] = cfg.algo;
  doc["scenario"] = cfg.scenario;
  doc["episodes"] = cfg.episodes;
  doc["seed"] = cfg.seed;
  doc["workers"] = cfg.workers;
  doc["window"] = cfg.window;
  doc["expert_kb"] = cfg.kb_path;
  doc["builtins"] = kBuiltinsVersion;
  doc["hyper"] = {{"alpha", cfg.alpha},
                  {"gamma", cfg.gamma},
                  {"eps_start", cfg.eps.start},
                  {"eps_end", cfg.eps.end},
                  {"eps_decay_episodes", cfg.eps.decay_episodes},
                  {"lr", cfg.ppo.lr},
                  {"clip_eps", cfg.ppo.clip_eps},
                  {"horizon", cfg.ppo.horizon},
                  {"entropy_coef", cfg.ppo.entropy_coef},
                  {"critic_coef", cfg.ppo.critic_coef},
                  {"epochs", cfg.ppo.epochs},
                  {"rd_weight", cfg.gail.rd_weight},
                  {"rd_cap", cfg.gail.rd_cap},
                  {"disc_batch", cfg.gail.disc_batch},
                  {"disc_steps", cfg.gail.disc_steps},
                  {"disc_lr", cfg.gail.disc_lr},
                  {"cadence_episodes", cfg.gail.cadence_episodes},
                  {"replay_capacity", cfg.gail.replay_capacity}};
  if (result.rounds_to_optimal)
    doc["rounds_to_optimal"] = *result.rounds_to_optimal;
  else
    doc["rounds_to_optimal"] = nullptr;
  doc["wall_sec"] = result.wall_sec;
  write_file(path, doc.dump(2) + "\n");
}

int cmd_scenario_export(const std::string& name, bool vuln_table, uint64_t vuln_seed,
                        const std::string& out) {
  std::string text;
  if (vuln_table) {
    text = VulnTable::generate(vuln_seed).to_json();
  } else {
    text = builtin_scenario_text(name);
  }
  if (out.empty() || out == "-")
    std::cout << text;
  else
    write_file(out, text);
  return 0;
}

int cmd_scenario_validate(const std::string& file) {
  Scenario s = load_scenario_file(file);  // throws with the offending path
  const auto violations = validate(s);
  if (violations.empty()) {
    std::cout << "ok: " << s.name << " (" << s.host_count() << " hosts, " << s.subnet_count()
              << " subnets, " << action_space_size(s) << " actions)\n";
    return 0;
  }
  for (const auto& v : violations) std::cerr << "violation: " << v << "\n";
  return 1;
}

int cmd_collect_experts(const std::string& scenario, int pairs, int episodes, uint64_t seed,
                        uint64_t vuln_seed, const std::string& out) {
  ExpertKB kb;
  if (scenario == "mockhost") {
    const VulnTable table = VulnTable::generate(vuln_seed);
    kb = collect_expert_pairs_mockhost_scripted(table, episodes, seed);
  } else {
    kb = collect_expert_pairs_scripted(resolve_scenario(scenario), episodes, seed);
  }
  if (pairs > 0) kb = expand_kb(kb, static_cast<size_t>(pairs));
  kb.save_jsonl(out);
  std::cout << "wrote " << kb.pairs.size() << " pairs to " << out << "\n";
  return 0;
}

int cmd_train(const TrainArgs& args) {
  TrainConfig cfg = args.cfg;
  cfg.workers = env_worker_override(cfg.workers);
  std::optional<ExpertKB> kb;
  if (cfg.is_gail()) {
    if (cfg.kb_path.empty()) throw std::runtime_error(cfg.algo + " requires --expert-kb");
    kb = ExpertKB::load_jsonl(cfg.kb_path);
  }
  fs::create_directories(args.out_dir);

  const TrainOutput out = train(cfg, kb ? &*kb : nullptr);
  const fs::path dir(args.out_dir);
  write_metrics_csv((dir / "metrics.csv").string(), out.result.metrics);
  write_manifest((dir / "manifest.json").string(), cfg, out.result);
  if (out.qtable) out.qtable->save_jsonl((dir / "qtable.jsonl").string());
  if (out.actor) nn::save_params(*out.actor, (dir / "actor.bin").string());
  if (out.critic) nn::save_params(*out.critic, (dir / "critic.bin").string());
  if (out.disc) nn::save_params(*out.disc, (dir / "disc.bin").string());

  std::cout << "trained " << cfg.algo << " on " << cfg.scenario << " for " << cfg.episodes
            << " episodes; ";
  if (out.result.rounds_to_optimal)
    std::cout << "rounds_to_optimal=" << *out.result.rounds_to_optimal;
  else
    std::cout << "rounds_to_optimal=none";
  std::cout << "; artifacts in " << args.out_dir << "\n";
  return 0;
}

void trace_qtable(const Scenario& scn, const QTable& q, uint64_t seed, bool force_success) {
  NetEnv env(force_success ? with_success_forced(scn) : scn);
  env.reset(seed);
  while (!env.done()) {
    const int a = q.greedy_action(make_state_key(env.observation()));
    const int host = env.action_host(a);
    const auto out = env.step(a);
    std::cout << env.steps_taken() << ": " << scn.actions[env.action_index(a)].name << " ("
              << scn.hosts[host].subnet << "," << scn.hosts[host].index << ") -> reward "
              << out.reward << " outcome " << static_cast<int>(out.info) << "\n";
  }
  std::cout << "steps=" << env.steps_taken() << " reward=" << env.cumulative_reward() << "\n";
}

int cmd_eval(const std::string& scenario, const std::string& policy, int episodes,
             uint64_t seed, uint64_t vuln_seed, bool force_success, bool trace) {
  if (trace && scenario != "mockhost" && policy.size() > 6 &&
      policy.substr(policy.size() - 6) == ".jsonl") {
    trace_qtable(resolve_scenario(scenario), QTable::load_jsonl(policy), seed, force_success);
    return 0;
  }
  EvalSummary s;
  if (scenario == "mockhost") {
    const VulnTable table = VulnTable::generate(vuln_seed);
    s = evaluate_actor_mockhost(table, nn::load_params(policy), episodes, seed);
  } else {
    const Scenario scn = resolve_scenario(scenario);
    if (policy.size() > 6 && policy.substr(policy.size() - 6) == ".jsonl")
      s = evaluate_qtable(scn, QTable::load_jsonl(policy), episodes, seed, force_success);
    else
      s = evaluate_actor(scn, nn::load_params(policy), episodes, seed, force_success);
  }
  std::cout << "episodes=" << episodes << " mean_reward=" << s.mean_reward
            << " mean_steps=" << s.mean_steps << " honeypot_rate=" << s.honeypot_rate
            << " success_rate=" << s.success_rate << "\n";
  return 0;
}

struct RunRow {
  std::string dir, algo, scenario;
  int episodes = 0;
  uint64_t seed = 0;
  std::optional<int> rounds;
  double final_steps = 0.0;
  double final_reward = 0.0;
};

int cmd_report(const std::string& runs_dir, const std::string& format, const std::string& out) {
  std::vector<RunRow> rows;
  for (const auto& entry : fs::directory_iterator(runs_dir)) {
    if (!entry.is_directory()) continue;
    const fs::path manifest = entry.path() / "manifest.json";
    const fs::path metrics = entry.path() / "metrics.csv";
    if (!fs::exists(manifest) || !fs::exists(metrics)) continue;
    auto doc = nlohmann::json::parse(read_file(manifest.string()));
    RunRow row;
    row.dir = entry.path().filename().string();
    row.algo = doc.at("algo").get<std::string>();
    row.scenario = doc.at("scenario").get<std::string>();
    row.episodes = doc.at("episodes").get<int>();
    row.seed = doc.at("seed").get<uint64_t>();
    if (!doc.at("rounds_to_optimal").is_null())
      row.rounds = doc.at("rounds_to_optimal").get<int>();
    const auto m = read_metrics_csv(metrics.string());
    if (!m.empty()) {
      row.final_steps = m.back().avg_steps;
      row.final_reward = m.back().avg_reward;
    }
    rows.push_back(std::move(row));
  }
  std::sort(rows.begin(), rows.end(), [](const RunRow& a, const RunRow& b) {
    return std::tie(a.scenario, a.algo, a.seed) < std::tie(b.scenario, b.algo, b.seed);
  });

  std::ostringstream csv;
  csv << "run,scenario,algo,episodes,seed,rounds_to_optimal,final_steps,final_reward\n";
  for (const auto& r : rows) {
    csv << r.dir << "," << r.scenario << "," << r.algo << "," << r.episodes << "," << r.seed
        << ",";
    if (r.rounds)
      csv << *r.rounds;
    else
      csv << "none";
    char buf[64];
    std::snprintf(buf, sizeof(buf), ",%.6g,%.6g\n", r.final_steps, r.final_reward);
    csv << buf;
  }

  // Median rounds per (scenario, algo): the summary mirrors the
  // baseline-vs-shaped comparison across the network scenes.
  std::map<std::pair<std::string, std::string>, std::vector<int>> rounds_by;
  for (const auto& r : rows)
    if (r.rounds) rounds_by[{r.scenario, r.algo}].push_back(*r.rounds);
  csv << "\nscenario,algo,median_rounds_to_optimal,runs\n";
  for (auto& [key, vals] : rounds_by) {
    std::sort(vals.begin(), vals.end());
    const int median = vals[vals.size() / 2];
    csv << key.first << "," << key.second << "," << median << "," << vals.size() << "\n";
  }

  if (format != "csv") throw std::runtime_error("unsupported report format: " + format);
  if (out.empty() || out == "-")
    std::cout << csv.str();
  else
    write_file(out, csv.str());
  return 0;
}

}  // namespace

int cli_main(int argc, const char* const* argv) {
  CLI::App app{"Penetration-testing scenario training and evaluation"};
  app.require_subcommand(1);

  // scenario-export
  auto* exp = app.add_subcommand("scenario-export", "Write a built-in scenario document");
  std::string exp_name = "small";
  bool exp_vuln = false;
  uint64_t exp_vuln_seed = 1337;
  std::string exp_out;
  exp->add_option("--name", exp_name, "small | small_honeypot | large");
  exp->add_flag("--vuln-table", exp_vuln, "export the synthetic vulnerability table instead");
  exp->add_option("--seed", exp_vuln_seed, "vulnerability table seed");
  exp->add_option("--out", exp_out, "output path (default stdout)");

  // scenario-validate
  auto* val = app.add_subcommand("scenario-validate", "Validate a scenario document");
  std::string val_file;
  val->add_option("--file", val_file, "scenario JSON file")->required();

  // collect-experts
  auto* col = app.add_subcommand("collect-experts", "Collect an expert knowledge base");
  std::string col_scenario = "small";
  int col_pairs = 5000;
  int col_episodes = 0;
  uint64_t col_seed = 1;
  uint64_t col_vuln_seed = 1337;
  std::string col_out = "kb.jsonl";
  col->add_option("--scenario", col_scenario, "builtin name, scenario file, or mockhost");
  col->add_option("--pairs", col_pairs, "expanded knowledge base size");
  col->add_option("--episodes", col_episodes, "collection episode budget");
  col->add_option("--seed", col_seed, "collection seed");
  col->add_option("--vuln-seed", col_vuln_seed, "vulnerability table seed (mockhost)");
  col->add_option("--out", col_out, "output JSON Lines path")->required();

  // train
  auto* tr = app.add_subcommand("train", "Train a policy");
  TrainArgs ta;
  ta.cfg.algo = "qlearn";
  tr->add_option("--algo", ta.cfg.algo, "qlearn|qlearn-gail|a3c|a3c-gail|dppo|dppo-gail");
  tr->add_option("--scenario", ta.cfg.scenario, "builtin name, scenario file, or mockhost")
      ->required();
  tr->add_option("--episodes", ta.cfg.episodes, "training episodes");
  tr->add_option("--seed", ta.cfg.seed, "run seed");
  tr->add_option("--workers", ta.cfg.workers, "worker count (GAILPT_THREADS overrides)");
  tr->add_option("--expert-kb", ta.cfg.kb_path, "expert knowledge base (JSON Lines)");
  tr->add_option("--window", ta.cfg.window, "episodes per metrics window");
  tr->add_option("--alpha", ta.cfg.alpha, "tabular learning rate");
  tr->add_option("--gamma", ta.cfg.gamma, "discount factor");
  tr->add_option("--eps-start", ta.cfg.eps.start, "exploration start");
  tr->add_option("--eps-end", ta.cfg.eps.end, "exploration end");
  tr->add_option("--eps-decay", ta.cfg.eps.decay_episodes,
                 "exploration decay horizon (0 = episodes/5)");
  tr->add_option("--lr", ta.cfg.ppo.lr, "network learning rate");
  tr->add_option("--epochs", ta.cfg.ppo.epochs, "update epochs per batch (dppo)");
  tr->add_option("--horizon", ta.cfg.ppo.horizon, "n-step horizon");
  tr->add_option("--entropy-coef", ta.cfg.ppo.entropy_coef, "entropy coefficient");
  tr->add_option("--critic-coef", ta.cfg.ppo.critic_coef, "critic loss coefficient");
  tr->add_option("--clip-eps", ta.cfg.ppo.clip_eps, "clipped surrogate epsilon");
  tr->add_option("--rd-weight", ta.cfg.gail.rd_weight, "shaped reward weight");
  tr->add_option("--rd-cap", ta.cfg.gail.rd_cap, "shaped reward cap");
  tr->add_option("--disc-batch", ta.cfg.gail.disc_batch, "discriminator batch per class");
  tr->add_option("--disc-steps", ta.cfg.gail.disc_steps, "discriminator steps per update");
  tr->add_option("--disc-lr", ta.cfg.gail.disc_lr, "discriminator learning rate");
  tr->add_option("--disc-cadence", ta.cfg.gail.cadence_episodes,
                 "episodes between discriminator updates (tabular)");
  tr->add_option("--vuln-seed", ta.cfg.vuln_seed, "vulnerability table seed (mockhost)");
  tr->add_option("--out", ta.out_dir, "output directory")->required();

  // eval
  auto* ev = app.add_subcommand("eval", "Replay a saved policy greedily");
  std::string ev_scenario, ev_policy;
  int ev_episodes = 100;
  uint64_t ev_seed = 1;
  uint64_t ev_vuln_seed = 1337;
  bool ev_force = false;
  bool ev_trace = false;
  ev->add_option("--scenario", ev_scenario, "builtin name, scenario file, or mockhost")
      ->required();
  ev->add_option("--policy", ev_policy, "qtable.jsonl or actor.bin")->required();
  ev->add_option("--episodes", ev_episodes, "evaluation episodes");
  ev->add_option("--seed", ev_seed, "evaluation seed");
  ev->add_option("--vuln-seed", ev_vuln_seed, "vulnerability table seed (mockhost)");
  ev->add_flag("--force-success", ev_force, "force action success probabilities to 1");
  ev->add_flag("--trace", ev_trace, "print the greedy rollout action by action");

  // report
  auto* rep = app.add_subcommand("report", "Merge run outputs into a comparison table");
  std::string rep_runs, rep_format = "csv", rep_out;
  rep->add_option("--runs", rep_runs, "directory containing run output directories")->required();
  rep->add_option("--format", rep_format, "output format (csv)");
  rep->add_option("--out", rep_out, "output path (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    if (exp->parsed()) return cmd_scenario_export(exp_name, exp_vuln, exp_vuln_seed, exp_out);
    if (val->parsed()) return cmd_scenario_validate(val_file);
    if (col->parsed()) {
      if (col_episodes <= 0) col_episodes = col_scenario == "mockhost" ? 3000 : 200;
      return cmd_collect_experts(col_scenario, col_pairs, col_episodes, col_seed, col_vuln_seed,
                                 col_out);
    }
    if (tr->parsed()) return cmd_train(ta);
    if (ev->parsed())
      return cmd_eval(ev_scenario, ev_policy, ev_episodes, ev_seed, ev_vuln_seed, ev_force,
                      ev_trace);
    if (rep->parsed()) return cmd_report(rep_runs, rep_format, rep_out);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

}  // namespace gailpt
