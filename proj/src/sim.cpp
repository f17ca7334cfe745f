#include "fairgne/sim.hpp"

#include <algorithm>
#include <stdexcept>

#include "fairgne/fairness.hpp"

namespace fairgne {

namespace {

constexpr std::array<std::string_view, kNumStations> kStationNames{
    "cart_left", "cart_right", "table", "cart_small", "patient_legs", "bed"};

constexpr std::array<std::string_view, kNumActions> kActionNames{
    "move",           "pick",
    "place",          "stack",
    "treat",          "compress_chest",
    "give_rescue_breaths", "noop"};

// Default placement pattern for agents when start_stations is not given.
constexpr std::array<Station, kNumStations> kDefaultStarts{
    Station::CartLeft, Station::CartRight,   Station::Bed,
    Station::Table,    Station::CartSmall, Station::PatientLegs};

}  // namespace

Station next_station(Station s) {
  return static_cast<Station>((static_cast<int>(s) + 1) % kNumStations);
}

std::string_view station_name(Station s) {
  return kStationNames[static_cast<int>(s)];
}

std::optional<Station> station_from_name(std::string_view name) {
  for (int i = 0; i < kNumStations; ++i) {
    if (kStationNames[i] == name) return static_cast<Station>(i);
  }
  return std::nullopt;
}

std::string_view action_name(Action a) {
  return kActionNames[static_cast<int>(a)];
}

std::optional<Action> action_from_name(std::string_view name) {
  for (int i = 0; i < kNumActions; ++i) {
    if (kActionNames[i] == name) return static_cast<Action>(i);
  }
  return std::nullopt;
}

void EnvConfig::validate() const {
  if (n < 2) throw std::invalid_argument("env config: n must be >= 2");
  if (c_required < 1) {
    throw std::invalid_argument("env config: c_required must be >= 1");
  }
  if (b_required < 1) {
    throw std::invalid_argument("env config: b_required must be >= 1");
  }
  if (horizon < 1) throw std::invalid_argument("env config: horizon must be >= 1");
  if (energy_max < 1) {
    throw std::invalid_argument("env config: energy_max must be >= 1");
  }
  if (!start_stations.empty() &&
      static_cast<int>(start_stations.size()) != n) {
    throw std::invalid_argument(
        "env config: start_stations must be empty or list one station per agent");
  }
}

Station EnvConfig::start_station(int agent) const {
  if (!start_stations.empty()) return start_stations[agent];
  return kDefaultStarts[agent % kNumStations];
}

bool EnvConfig::agent_has_setup(int) const {
  // Both presets grant setup everywhere; heterogeneity is in treatment.
  return true;
}

bool EnvConfig::agent_has_treatment(int agent) const {
  if (skill_preset == SkillPreset::Uniform) return true;
  return agent != 0;
}

SimState reset(const EnvConfig& config, std::uint64_t /*seed*/) {
  config.validate();
  SimState st;
  st.agents.resize(config.n);
  for (int i = 0; i < config.n; ++i) {
    auto& a = st.agents[i];
    a.station = config.start_station(i);
    a.held = std::nullopt;
    a.energy = config.energy_max;
    a.skill_setup = config.agent_has_setup(i);
    a.skill_treatment = config.agent_has_treatment(i);
  }
  st.items[static_cast<int>(Item::Backboard)] = {
      ItemLocation::Kind::AtStation, static_cast<int>(Station::CartLeft)};
  st.items[static_cast<int>(Item::Bvm)] = {ItemLocation::Kind::AtStation,
                                           static_cast<int>(Station::CartRight)};
  st.workload.assign(config.n, 0);
  return st;
}

int milestone_potential(const SimState& state) {
  return (state.patient_assessed ? 1 : 0) + (state.backboard_was_held ? 1 : 0) +
         (state.backboard_placed ? 1 : 0) + state.compressions_done +
         (state.bvm_was_held ? 1 : 0) + state.breaths_done;
}

int milestone_max(const EnvConfig& config) {
  return 4 + config.c_required + config.b_required;
}

bool is_done(const EnvConfig& config, const SimState& state) {
  return milestone_potential(state) == milestone_max(config) ||
         state.t >= config.horizon;
}

namespace {

bool item_at(const SimState& st, Item item, Station station) {
  const auto& loc = st.items[static_cast<int>(item)];
  return loc.kind == ItemLocation::Kind::AtStation &&
         loc.index == static_cast<int>(station);
}

// Lowest item index present at the station, if any.
std::optional<Item> item_available_at(const SimState& st, Station station) {
  for (int i = 0; i < kNumItems; ++i) {
    if (item_at(st, static_cast<Item>(i), station)) return static_cast<Item>(i);
  }
  return std::nullopt;
}

bool can_pick(const SimState& st, int agent) {
  const auto& a = st.agents[agent];
  return a.skill_setup && !a.held.has_value() &&
         item_available_at(st, a.station).has_value();
}

bool can_place(const SimState& st, int agent) {
  const auto& a = st.agents[agent];
  return a.skill_setup && a.held.has_value();
}

bool can_stack(const SimState& st, int agent) {
  const auto& a = st.agents[agent];
  return a.skill_setup && a.held == Item::Backboard &&
         a.station == Station::Bed && !st.backboard_placed;
}

bool can_treat(const SimState& st, int agent) {
  const auto& a = st.agents[agent];
  return a.skill_treatment && a.station == Station::Bed &&
         !st.patient_assessed;
}

bool can_compress(const EnvConfig& cfg, const SimState& st, int agent) {
  const auto& a = st.agents[agent];
  return a.skill_treatment && a.station == Station::Bed &&
         st.backboard_placed && st.compressions_done < cfg.c_required &&
         (!cfg.energy_enabled || a.energy >= 1);
}

bool can_breathe(const EnvConfig& cfg, const SimState& st, int agent) {
  const auto& a = st.agents[agent];
  return a.skill_treatment && a.station == Station::Bed &&
         a.held == Item::Bvm && st.compressions_done == cfg.c_required &&
         st.breaths_done < cfg.b_required;
}

// Applies one agent's primitive to the evolving state. Returns true when
// the agent performed a chest compression (no energy regen this step).
bool apply_action(const EnvConfig& cfg, SimState& st, int agent, Action act) {
  auto& a = st.agents[agent];
  switch (act) {
    case Action::Move:
      a.station = next_station(a.station);
      return false;
    case Action::Pick: {
      if (!can_pick(st, agent)) return false;
      Item item = *item_available_at(st, a.station);
      st.items[static_cast<int>(item)] = {ItemLocation::Kind::HeldByAgent,
                                          agent};
      a.held = item;
      if (item == Item::Backboard) st.backboard_was_held = true;
      if (item == Item::Bvm) st.bvm_was_held = true;
      return false;
    }
    case Action::Place: {
      if (!can_place(st, agent)) return false;
      Item item = *a.held;
      st.items[static_cast<int>(item)] = {ItemLocation::Kind::AtStation,
                                          static_cast<int>(a.station)};
      a.held = std::nullopt;
      return false;
    }
    case Action::Stack:
      if (!can_stack(st, agent)) return false;
      st.items[static_cast<int>(Item::Backboard)] = {
          ItemLocation::Kind::Placed, 0};
      a.held = std::nullopt;
      st.backboard_placed = true;
      return false;
    case Action::Treat:
      if (!can_treat(st, agent)) return false;
      st.patient_assessed = true;
      return false;
    case Action::CompressChest:
      if (!can_compress(cfg, st, agent)) return false;
      ++st.compressions_done;
      if (cfg.energy_enabled) --a.energy;
      return true;
    case Action::GiveRescueBreaths:
      if (!can_breathe(cfg, st, agent)) return false;
      ++st.breaths_done;
      return false;
    case Action::Noop:
      return false;
  }
  return false;
}

}  // namespace

StepOutcome step(const EnvConfig& config, const SimState& state,
                 const std::vector<Action>& joint_action) {
  if (static_cast<int>(joint_action.size()) != config.n) {
    throw std::invalid_argument("joint action arity does not match agent count");
  }
  if (is_done(config, state)) {
    throw std::logic_error("step called on a finished episode");
  }

  StepOutcome out;
  out.next_state = state;
  SimState& next = out.next_state;
  out.workload_delta.assign(config.n, 0);
  std::vector<bool> compressed(config.n, false);

  int h_before_step = milestone_potential(next);
  for (int i = 0; i < config.n; ++i) {
    int h_before = milestone_potential(next);
    compressed[i] = apply_action(config, next, i, joint_action[i]);
    int gained = milestone_potential(next) - h_before;
    if (gained > 0) {
      out.workload_delta[i] = gained;
      next.workload[i] += gained;
    }
  }

  if (config.energy_enabled) {
    for (int i = 0; i < config.n; ++i) {
      if (!compressed[i]) {
        next.agents[i].energy =
            std::min(next.agents[i].energy + 1, config.energy_max);
      }
    }
  }

  next.t = state.t + 1;
  int h_after = milestone_potential(next);
  out.team_reward = static_cast<double>(h_after - h_before_step);
  out.success = h_after == milestone_max(config);
  out.done = out.success || next.t >= config.horizon;
  out.fairness_value = jain_index(std::span<const int>(next.workload));
  return out;
}

std::vector<Action> legal_actions(const EnvConfig& config,
                                  const SimState& state, int agent) {
  if (agent < 0 || agent >= config.n) {
    throw std::invalid_argument("agent index out of range");
  }
  std::vector<Action> acts;
  acts.push_back(Action::Move);
  if (can_pick(state, agent)) acts.push_back(Action::Pick);
  if (can_place(state, agent)) acts.push_back(Action::Place);
  if (can_stack(state, agent)) acts.push_back(Action::Stack);
  if (can_treat(state, agent)) acts.push_back(Action::Treat);
  if (can_compress(config, state, agent)) acts.push_back(Action::CompressChest);
  if (can_breathe(config, state, agent)) {
    acts.push_back(Action::GiveRescueBreaths);
  }
  acts.push_back(Action::Noop);
  return acts;
}

std::string encode_state_key(const SimState& state) {
  std::string key;
  key.reserve(2 * state.agents.size() + 12);
  for (const auto& a : state.agents) {
    key += static_cast<char>('0' + static_cast<int>(a.station));
    if (!a.held.has_value()) {
      key += '-';
    } else {
      key += *a.held == Item::Backboard ? 'b' : 'v';
    }
  }
  key += '|';
  key += state.backboard_placed ? '1' : '0';
  key += state.patient_assessed ? '1' : '0';
  key += state.backboard_was_held ? '1' : '0';
  key += state.bvm_was_held ? '1' : '0';
  key += '|';
  key += std::to_string(state.compressions_done);
  key += '|';
  key += std::to_string(state.breaths_done);
  return key;
}

}  // namespace fairgne
