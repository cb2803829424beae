#pragma once

#include <cstdint>
#include <vector>

#include "skillprobe/simulator/profile.hpp"

namespace skillprobe {

// Feature combination a generated profile is built around.
struct ProfileTraits {
  bool one_shot = false;
  RepromptMode reprompt = RepromptMode::none;
  MemoryMode memory = MemoryMode::none;
  bool open_variety = false;     // G4
  bool goodbye_variety = false;  // G5

  bool operator==(const ProfileTraits&) const = default;
};

// Every combination the staged protocol can express. One-shot skills only
// take reprompt none, and a skill that remembers always varies its opening
// (the third staged run already sees the resume prompt).
std::vector<ProfileTraits> feasible_traits();

// Deterministic, platform-independent random profiles. Profile i uses
// feasible_traits()[i % size], so any count >= 24 covers every combination.
// All other features (help text, goodbye wording, categories, review counts)
// are drawn from `seed`.
std::vector<SimProfile> generate_profiles(std::size_t count, std::uint64_t seed);

SimProfile generate_profile(const ProfileTraits& traits, std::uint64_t seed, std::size_t index);

}  // namespace skillprobe
