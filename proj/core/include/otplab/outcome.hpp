#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "otplab/primitives.hpp"

namespace otplab {

enum class Guess { Zero, One, Undetermined };

std::string to_string(Guess g);

// Secrets an attack managed to reconstruct. Present only on success.
struct RecoveredSecrets {
  std::optional<prim::Word> k_star;  // k*_j
  std::optional<prim::Word> k_next;  // tag key after session j+1
  std::optional<prim::Word> t_next;  // unmasked certificate
};

struct AttackOutcome {
  Guess guess = Guess::Undetermined;
  RecoveredSecrets recovered;
  std::uint64_t iterations_used = 0;
  // Per-label check results for attacks that evaluate a predicate on both
  // candidates (index = label).
  std::optional<bool> check[2];
  // Deviation identifiers triggered while producing this outcome.
  std::vector<std::string> flags;
};

}  // namespace otplab
