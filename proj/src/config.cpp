#include "fairgne/config.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

namespace fairgne {

std::string MethodSpec::label() const {
  switch (mode) {
    case PenaltyMode::None: return "none";
    case PenaltyMode::FixedGini: {
      std::ostringstream os;
      os << "gini:" << lambda_fixed;
      return os.str();
    }
    case PenaltyMode::FixedJfi: {
      std::ostringstream os;
      os << "jfi:" << lambda_fixed;
      return os.str();
    }
    case PenaltyMode::FairGne: {
      std::ostringstream os;
      os << "fair-gne:" << tau;
      return os.str();
    }
  }
  return "none";
}

MethodSpec parse_method(const std::string& text) {
  MethodSpec spec;
  auto colon = text.find(':');
  std::string head = text.substr(0, colon);
  std::string arg = colon == std::string::npos ? "" : text.substr(colon + 1);
  auto parse_value = [&](const char* what) {
    try {
      std::size_t pos = 0;
      double v = std::stod(arg, &pos);
      if (pos != arg.size()) throw std::invalid_argument(arg);
      return v;
    } catch (const std::exception&) {
      throw std::invalid_argument(std::string("method '") + text +
                                  "': expected numeric " + what);
    }
  };
  if (head == "none") {
    if (!arg.empty()) throw std::invalid_argument("method 'none' takes no value");
    spec.mode = PenaltyMode::None;
  } else if (head == "gini") {
    spec.mode = PenaltyMode::FixedGini;
    spec.lambda_fixed = parse_value("lambda");
    if (spec.lambda_fixed < 0) {
      throw std::invalid_argument("gini lambda must be >= 0");
    }
  } else if (head == "jfi") {
    spec.mode = PenaltyMode::FixedJfi;
    spec.lambda_fixed = parse_value("lambda");
    if (spec.lambda_fixed < 0) {
      throw std::invalid_argument("jfi lambda must be >= 0");
    }
  } else if (head == "fair-gne" || head == "fair_gne") {
    spec.mode = PenaltyMode::FairGne;
    spec.tau = parse_value("tau");
    FairnessThreshold check(spec.tau);
    (void)check;
  } else {
    throw std::invalid_argument("unknown method '" + text +
                                "' (expected none, gini:<l>, jfi:<l>, fair-gne:<t>)");
  }
  return spec;
}

void ExperimentConfig::validate() const {
  env.validate();
  train.validate();
  if (methods.empty()) throw std::invalid_argument("experiment: empty method grid");
  if (seeds.empty()) throw std::invalid_argument("experiment: empty seed list");
  if (eval_episodes < 1) {
    throw std::invalid_argument("experiment: eval_episodes >= 1");
  }
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw std::invalid_argument("experiment: alpha in (0,1)");
  }
  if (workers < 0) throw std::invalid_argument("experiment: workers >= 0");
}

ExperimentConfig default_experiment_config() {
  ExperimentConfig cfg;
  cfg.methods = {parse_method("gini:0"),        parse_method("gini:10"),
                 parse_method("gini:50"),       parse_method("fair-gne:0.55"),
                 parse_method("fair-gne:0.65"), parse_method("fair-gne:0.75"),
                 parse_method("fair-gne:0.85")};
  return cfg;
}

void apply_cadence_preset(DualRunConfig& dual, const std::string& preset) {
  if (preset == "main-text") {
    dual.cadence = DualCadence::PerStep;
    dual.eta = 0.01;
  } else if (preset == "appendix") {
    dual.cadence = DualCadence::EveryNSteps;
    dual.eta = 5e-4;
    dual.update_period = 5000;
  } else if (preset == "episodic") {
    dual.cadence = DualCadence::PerEpisode;
    dual.eta = 0.01;
  } else {
    throw std::invalid_argument("unknown cadence preset '" + preset +
                                "' (main-text, appendix, episodic)");
  }
}

std::string cadence_preset_name(const DualRunConfig& dual) {
  switch (dual.cadence) {
    case DualCadence::PerStep: return "main-text";
    case DualCadence::EveryNSteps: return "appendix";
    case DualCadence::PerEpisode: return "episodic";
  }
  return "main-text";
}

namespace {

std::string trim(const std::string& s) {
  std::size_t a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  std::size_t b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

using Section = std::map<std::string, std::string>;

std::map<std::string, Section> parse_ini(const std::string& text) {
  std::map<std::string, Section> sections;
  std::istringstream in(text);
  std::string line, current = "";
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') {
        throw std::invalid_argument("config line " + std::to_string(line_no) +
                                    ": unterminated section header");
      }
      current = trim(line.substr(1, line.size() - 2));
      sections[current];
      continue;
    }
    auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw std::invalid_argument("config line " + std::to_string(line_no) +
                                  ": expected key = value");
    }
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    if (key.empty()) {
      throw std::invalid_argument("config line " + std::to_string(line_no) +
                                  ": empty key");
    }
    sections[current][key] = value;
  }
  return sections;
}

// Tracks consumed keys so leftovers can be reported as schema errors.
class SectionReader {
 public:
  SectionReader(const std::string& name, const Section* section)
      : name_(name), section_(section) {}

  bool has(const std::string& key) const {
    return section_ != nullptr && section_->count(key) > 0;
  }

  std::string raw(const std::string& key) {
    consumed_.insert(key);
    return section_->at(key);
  }

  void get(const std::string& key, int& out) {
    if (!has(key)) return;
    out = std::stoi(raw(key));
  }
  void get(const std::string& key, double& out) {
    if (!has(key)) return;
    out = std::stod(raw(key));
  }
  void get(const std::string& key, bool& out) {
    if (!has(key)) return;
    std::string v = raw(key);
    if (v == "true" || v == "1") {
      out = true;
    } else if (v == "false" || v == "0") {
      out = false;
    } else {
      throw std::invalid_argument("config [" + name_ + "] " + key +
                                  ": expected true/false");
    }
  }
  void get(const std::string& key, std::string& out) {
    if (!has(key)) return;
    out = raw(key);
  }
  void get(const std::string& key, std::uint64_t& out) {
    if (!has(key)) return;
    out = std::stoull(raw(key));
  }

  void finish() const {
    if (section_ == nullptr) return;
    for (const auto& [key, value] : *section_) {
      if (!consumed_.count(key)) {
        throw std::invalid_argument("config: unknown key '" + key +
                                    "' in section [" + name_ + "]");
      }
    }
  }

 private:
  std::string name_;
  const Section* section_;
  std::set<std::string> consumed_;
};

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> parts;
  std::string item;
  std::istringstream in(text);
  while (std::getline(in, item, ',')) {
    item = trim(item);
    if (!item.empty()) parts.push_back(item);
  }
  return parts;
}

}  // namespace

std::vector<std::uint64_t> parse_seed_list(const std::string& text) {
  std::vector<std::uint64_t> seeds;
  for (const auto& part : split_list(text)) seeds.push_back(std::stoull(part));
  return seeds;
}

ExperimentConfig parse_experiment_config(const std::string& text) {
  auto sections = parse_ini(text);
  static const std::set<std::string> known = {"env", "train", "dual",
                                              "experiment"};
  for (const auto& [name, _] : sections) {
    if (!known.count(name)) {
      throw std::invalid_argument("config: unknown section [" + name + "]");
    }
  }
  ExperimentConfig cfg = default_experiment_config();

  auto section = [&](const char* name) -> const Section* {
    auto it = sections.find(name);
    return it == sections.end() ? nullptr : &it->second;
  };

  {
    SectionReader env("env", section("env"));
    env.get("n", cfg.env.n);
    env.get("c_required", cfg.env.c_required);
    env.get("b_required", cfg.env.b_required);
    env.get("horizon", cfg.env.horizon);
    env.get("energy_max", cfg.env.energy_max);
    env.get("energy_enabled", cfg.env.energy_enabled);
    if (env.has("skill_preset")) {
      std::string preset = env.raw("skill_preset");
      if (preset == "heterogeneous") {
        cfg.env.skill_preset = SkillPreset::Heterogeneous;
      } else if (preset == "uniform") {
        cfg.env.skill_preset = SkillPreset::Uniform;
      } else {
        throw std::invalid_argument(
            "config [env] skill_preset: expected heterogeneous or uniform");
      }
    }
    if (env.has("start_stations")) {
      cfg.env.start_stations.clear();
      for (const auto& name : split_list(env.raw("start_stations"))) {
        auto st = station_from_name(name);
        if (!st) {
          throw std::invalid_argument("config [env] start_stations: unknown station '" +
                                      name + "'");
        }
        cfg.env.start_stations.push_back(*st);
      }
    }
    env.finish();
  }

  {
    SectionReader train("train", section("train"));
    train.get("episodes", cfg.train.episodes);
    train.get("gamma", cfg.train.gamma);
    train.get("alpha", cfg.train.alpha);
    train.get("epsilon_start", cfg.train.epsilon.start);
    train.get("epsilon_end", cfg.train.epsilon.end);
    train.get("epsilon_decay_fraction", cfg.train.epsilon.decay_fraction);
    if (train.has("backbone")) {
      std::string mode = train.raw("backbone");
      if (mode == "independent") {
        cfg.train.backbone = BackboneMode::IndependentPerAgent;
      } else if (mode == "centralized") {
        cfg.train.backbone = BackboneMode::CentralizedJoint;
      } else {
        throw std::invalid_argument(
            "config [train] backbone: expected independent or centralized");
      }
    }
    train.get("eval_every", cfg.train.eval_every);
    train.get("eval_episodes", cfg.train.eval_episodes);
    train.get("epsilon_kkt", cfg.train.epsilon_kkt);
    train.finish();
  }

  {
    SectionReader dual("dual", section("dual"));
    if (dual.has("cadence")) {
      apply_cadence_preset(cfg.train.dual, dual.raw("cadence"));
    }
    dual.get("eta_lambda", cfg.train.dual.eta);
    dual.get("lambda_max", cfg.train.dual.lambda_max);
    dual.get("lambda0", cfg.train.dual.lambda0);
    dual.get("update_period", cfg.train.dual.update_period);
    dual.get("mc_rollouts", cfg.train.dual.mc_rollouts);
    dual.get("clamp_slack", cfg.train.dual.clamp_slack);
    dual.get("history_stride", cfg.train.dual.history_stride);
    dual.finish();
  }

  {
    SectionReader exp("experiment", section("experiment"));
    if (exp.has("methods")) {
      cfg.methods.clear();
      for (const auto& m : split_list(exp.raw("methods"))) {
        cfg.methods.push_back(parse_method(m));
      }
    }
    if (exp.has("seeds")) cfg.seeds = parse_seed_list(exp.raw("seeds"));
    exp.get("eval_episodes", cfg.eval_episodes);
    exp.get("alpha", cfg.alpha);
    exp.get("out", cfg.out_dir);
    exp.get("workers", cfg.workers);
    exp.finish();
  }

  cfg.validate();
  return cfg;
}

ExperimentConfig load_experiment_config(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::invalid_argument("cannot open config file " + path);
  std::ostringstream buf;
  buf << f.rdbuf();
  return parse_experiment_config(buf.str());
}

}  // namespace fairgne
