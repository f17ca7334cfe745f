#include "fairgne/trace.hpp"

#include <fstream>
#include <stdexcept>

namespace fairgne {

double total_reward(const EpisodeTrace& trace) {
  double total = 0.0;
  for (const auto& s : trace.steps) total += s.team_reward;
  return total;
}

double discounted_violation(const EpisodeTrace& trace, FairnessThreshold tau,
                            double gamma) {
  if (trace.steps.empty()) throw std::domain_error("empty episode trace");
  std::vector<double> fs;
  fs.reserve(trace.steps.size());
  for (const auto& s : trace.steps) fs.push_back(s.jfi);
  return discounted_violation(std::span<const double>(fs), tau, gamma);
}

void write_episodes_csv(const std::string& path,
                        std::span<const EpisodeTrace> traces, int num_agents) {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot open " + path + " for writing");
  f << "episode,t";
  for (int i = 0; i < num_agents; ++i) f << ",station_" << i;
  for (int i = 0; i < num_agents; ++i) f << ",action_" << i;
  f << ",team_reward,shaped_reward,jfi,g,lambda\n";
  f.precision(12);
  for (std::size_t e = 0; e < traces.size(); ++e) {
    for (const auto& s : traces[e].steps) {
      f << e << ',' << s.t;
      for (int i = 0; i < num_agents; ++i) f << ',' << s.stations[i];
      for (int i = 0; i < num_agents; ++i) f << ',' << s.actions[i];
      f << ',' << s.team_reward << ',' << s.shaped_reward << ',' << s.jfi << ','
        << s.g << ',' << s.lambda << '\n';
    }
  }
}

}  // namespace fairgne
