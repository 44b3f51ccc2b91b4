#include "cpomdp/harness.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace cpomdp::harness {

namespace {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string csv_quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += "\"\"";
    out += c;
  }
  out += '"';
  return out;
}

// Splits one CSV line into fields, honoring double-quoted fields.
std::vector<std::string> csv_fields(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        cur += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        cur += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      out.push_back(std::move(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(std::move(cur));
  return out;
}

}  // namespace

MetricsTable aggregate(const std::vector<EpisodeResult>& episodes,
                       const std::vector<std::string>& action_names, const std::string& solver,
                       const std::string& env) {
  MetricsTable t;
  t.solver = solver;
  t.env = env;
  t.action_names = action_names;
  const std::size_t num_actions = action_names.size();
  t.mean_visit_fraction.assign(num_actions, 0.0);
  t.mean_search_fraction.assign(num_actions, 0.0);
  t.exec_frequency.assign(num_actions, 0.0);

  std::vector<double> returns, costs, lambdas;
  long violated = 0;
  for (const EpisodeResult& ep : episodes) {
    if (ep.failed) {
      t.failed += 1;
      continue;
    }
    returns.push_back(ep.v_r);
    costs.push_back(ep.v_c.empty() ? 0.0 : ep.v_c[0]);
    if (ep.violated) violated += 1;
    if (!ep.first_root_lambda.empty()) lambdas.push_back(ep.first_root_lambda[0]);
    for (const RootActionStat& st : ep.first_root_actions)
      if (st.action >= 0 && st.action < static_cast<int>(num_actions))
        t.mean_visit_fraction[static_cast<std::size_t>(st.action)] += st.visit_fraction;
    if (ep.search_visit_fraction.size() == num_actions)
      for (std::size_t a = 0; a < num_actions; ++a)
        t.mean_search_fraction[a] += ep.search_visit_fraction[a];
    if (ep.first_action >= 0 && ep.first_action < static_cast<int>(num_actions))
      t.exec_frequency[static_cast<std::size_t>(ep.first_action)] += 1.0;
  }
  t.episodes = static_cast<long>(returns.size());
  if (t.episodes == 0) return t;

  t.mean_return = stats::mean(returns);
  t.se_return = stats::standard_error(returns);
  t.mean_cost = stats::mean(costs);
  t.se_cost = stats::standard_error(costs);
  t.violation_pct = 100.0 * static_cast<double>(violated) / static_cast<double>(t.episodes);
  if (!lambdas.empty()) t.mean_root_lambda = stats::mean(lambdas);
  for (std::size_t a = 0; a < num_actions; ++a) {
    t.mean_visit_fraction[a] /= static_cast<double>(t.episodes);
    t.mean_search_fraction[a] /= static_cast<double>(t.episodes);
    t.exec_frequency[a] /= static_cast<double>(t.episodes);
  }
  return t;
}

nlohmann::json MetricsTable::to_json() const {
  nlohmann::json actions = nlohmann::json::array();
  for (std::size_t a = 0; a < action_names.size(); ++a) {
    actions.push_back({{"name", action_names[a]},
                       {"mean_visit_fraction", mean_visit_fraction[a]},
                       {"mean_search_fraction", mean_search_fraction[a]},
                       {"exec_frequency", exec_frequency[a]}});
  }
  return {{"solver", solver},
          {"env", env},
          {"episodes", episodes},
          {"failed", failed},
          {"mean_return", mean_return},
          {"se_return", se_return},
          {"mean_cost", mean_cost},
          {"se_cost", se_cost},
          {"violation_pct", violation_pct},
          {"mean_root_lambda", mean_root_lambda},
          {"actions", actions}};
}

void write_episode_csv(const std::string& path, const std::vector<EpisodeResult>& episodes,
                       std::size_t num_costs) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write episode csv '" + path + "'");
  out << "seed,v_r";
  for (std::size_t k = 0; k < num_costs; ++k) out << ",v_c" << k;
  out << ",violated,steps,failed,error,telescope_cbar,telescope_realized\n";
  for (const EpisodeResult& ep : episodes) {
    out << ep.seed << ',' << fmt(ep.v_r);
    for (std::size_t k = 0; k < num_costs; ++k)
      out << ',' << fmt(k < ep.v_c.size() ? ep.v_c[k] : 0.0);
    out << ',' << (ep.violated ? 1 : 0) << ',' << ep.steps << ',' << (ep.failed ? 1 : 0) << ','
        << csv_quote(ep.error) << ',' << fmt(ep.telescope_cbar) << ','
        << fmt(ep.telescope_realized) << '\n';
  }
  if (!out) throw std::runtime_error("write failed for episode csv '" + path + "'");
}

std::vector<EpisodeResult> read_episode_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open episode csv '" + path + "'");
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("episode csv '" + path + "' is empty");
  std::vector<std::string> header = csv_fields(line);
  std::size_t num_costs = 0;
  for (const std::string& h : header)
    if (h.rfind("v_c", 0) == 0) ++num_costs;
  std::vector<EpisodeResult> out;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> f = csv_fields(line);
    if (f.size() != header.size())
      throw std::runtime_error("episode csv '" + path + "': malformed row '" + line + "'");
    EpisodeResult ep;
    std::size_t i = 0;
    ep.seed = std::stoull(f[i++]);
    ep.v_r = std::stod(f[i++]);
    for (std::size_t k = 0; k < num_costs; ++k) ep.v_c.push_back(std::stod(f[i++]));
    ep.violated = f[i++] == "1";
    ep.steps = std::stoi(f[i++]);
    ep.failed = f[i++] == "1";
    ep.error = f[i++];
    ep.telescope_cbar = std::stod(f[i++]);
    ep.telescope_realized = std::stod(f[i++]);
    out.push_back(std::move(ep));
  }
  return out;
}

void write_summary_json(const std::string& path, const MetricsTable& table) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write summary '" + path + "'");
  out << table.to_json().dump(2) << '\n';
  if (!out) throw std::runtime_error("write failed for summary '" + path + "'");
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write file '" + path + "'");
  out << text;
  if (!out) throw std::runtime_error("write failed for file '" + path + "'");
}

std::string format_table(const MetricsTable& t) {
  std::ostringstream os;
  char line[256];
  std::snprintf(line, sizeof(line), "%-10s %-10s %8s %8s %18s %18s %10s %8s\n", "solver", "env",
                "episodes", "failed", "return", "cost", "violation%", "lambda");
  os << line;
  std::snprintf(line, sizeof(line), "%-10s %-10s %8ld %8ld %9.3f +/- %5.3f %9.4f +/- %5.4f %10.1f %8.3f\n",
                t.solver.c_str(), t.env.c_str(), t.episodes, t.failed, t.mean_return, t.se_return,
                t.mean_cost, t.se_cost, t.violation_pct, t.mean_root_lambda);
  os << line;
  os << "root statistics (first plan / all plans / executed first action):\n";
  for (std::size_t a = 0; a < t.action_names.size(); ++a) {
    std::snprintf(line, sizeof(line),
                  "  %-12s visit_fraction %6.3f   search_fraction %6.3f   executed %6.3f\n",
                  t.action_names[a].c_str(), t.mean_visit_fraction[a], t.mean_search_fraction[a],
                  t.exec_frequency[a]);
    os << line;
  }
  return os.str();
}

ExperimentOutput run_experiment_full(const ExperimentConfig& cfg) {
  switch (cfg.env) {
    case EnvKind::toy_chain: {
      envs::ToyChainModel model(toy_chain_spec_from(cfg.env_overrides));
      return run_model_experiment(model, cfg);
    }
    case EnvKind::tiger: {
      envs::TigerModel model(tiger_spec_from(cfg.env_overrides));
      return run_model_experiment(model, cfg);
    }
    case EnvKind::lightdark: {
      envs::LightDarkModel model(lightdark_spec_from(cfg.env_overrides));
      return run_model_experiment(model, cfg);
    }
  }
  throw std::logic_error("run_experiment_full: unhandled environment");
}

MetricsTable run_experiment(const ExperimentConfig& cfg) {
  return run_experiment_full(cfg).table;
}

}  // namespace cpomdp::harness
