#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace fairgne {

// Six stations on a fixed ring; `move` advances one station clockwise in
// the declared order (bed wraps to cart_left).
enum class Station : std::uint8_t {
  CartLeft = 0,
  CartRight,
  Table,
  CartSmall,
  PatientLegs,
  Bed,
};
inline constexpr int kNumStations = 6;

Station next_station(Station s);
std::string_view station_name(Station s);
std::optional<Station> station_from_name(std::string_view name);

enum class Item : std::uint8_t { Backboard = 0, Bvm };
inline constexpr int kNumItems = 2;

// The eight per-agent primitives; the joint action space has size 8^n.
enum class Action : std::uint8_t {
  Move = 0,
  Pick,
  Place,
  Stack,
  Treat,
  CompressChest,
  GiveRescueBreaths,
  Noop,
};
inline constexpr int kNumActions = 8;

std::string_view action_name(Action a);
std::optional<Action> action_from_name(std::string_view name);

// Skill layout across agents. Heterogeneous: agent 0 is setup-only, the
// rest have setup + treatment. Uniform: everyone has both.
enum class SkillPreset { Heterogeneous, Uniform };

struct EnvConfig {
  int n = 3;
  int c_required = 3;
  int b_required = 2;
  int horizon = 50;
  int energy_max = 2;
  bool energy_enabled = true;
  SkillPreset skill_preset = SkillPreset::Heterogeneous;
  // Empty means the default layout (cart_left, cart_right, bed, table,
  // cart_small, patient_legs, then wrapping).
  std::vector<Station> start_stations;

  // Throws std::invalid_argument on an invalid configuration.
  void validate() const;
  Station start_station(int agent) const;
  bool agent_has_setup(int agent) const;
  bool agent_has_treatment(int agent) const;
};

struct AgentState {
  Station station;
  std::optional<Item> held;
  int energy = 0;
  bool skill_setup = false;
  bool skill_treatment = false;
};

// Each item is in exactly one place: a station shelf, an agent's hand, or
// placed under the patient (backboard only).
struct ItemLocation {
  enum class Kind : std::uint8_t { AtStation, HeldByAgent, Placed };
  Kind kind = Kind::AtStation;
  int index = 0;  // station index or agent index, per kind
};

struct SimState {
  std::vector<AgentState> agents;
  std::array<ItemLocation, kNumItems> items;
  bool backboard_placed = false;
  bool patient_assessed = false;
  bool backboard_was_held = false;
  bool bvm_was_held = false;
  int compressions_done = 0;
  int breaths_done = 0;
  int t = 0;
  std::vector<int> workload;
};

struct StepOutcome {
  SimState next_state;
  double team_reward;  // H(next) - H(state), always >= 0
  std::vector<int> workload_delta;
  bool done;
  bool success;
  double fairness_value;  // Jain index of the updated workload
};

// Initial state: agents at their start stations with empty hands and full
// energy, backboard at cart_left, BVM at cart_right, all counters zero.
// The seed is recorded for prospective stochastic features; the default
// environment is deterministic and ignores it.
SimState reset(const EnvConfig& config, std::uint64_t seed = 0);

// Milestone ledger: assessed + backboard-ever-held + backboard-placed +
// compressions_done + bvm-ever-held + breaths_done.
int milestone_potential(const SimState& state);

// 4 + c_required + b_required.
int milestone_max(const EnvConfig& config);

bool is_done(const EnvConfig& config, const SimState& state);

// Resolves the joint action. Agents act in index order against the evolving
// intermediate state, which settles simultaneous conflicts (lowest index
// wins a contested pick) deterministically. Invalid primitives resolve as
// noop. Throws std::invalid_argument on wrong arity and std::logic_error
// when stepping a finished episode.
StepOutcome step(const EnvConfig& config, const SimState& state,
                 const std::vector<Action>& joint_action);

// Primitives whose preconditions hold for this agent; always contains
// noop and move. Throws std::invalid_argument on a bad agent index.
std::vector<Action> legal_actions(const EnvConfig& config,
                                  const SimState& state, int agent);

// Canonical key over (agent stations, held items, backboard_placed,
// patient_assessed, the ever-held milestone flags, compressions_done,
// breaths_done). Excludes t, workload, energy, and item shelf positions.
// The milestone flags are included so the key stays Markov for the reward:
// without them a repeated pick reads as a fresh milestone.
std::string encode_state_key(const SimState& state);

}  // namespace fairgne
