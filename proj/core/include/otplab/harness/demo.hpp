#pragma once

#include <cstdint>
#include <iosfwd>

#include "otplab/harness/experiment.hpp"

namespace otplab::harness {

struct DemoOptions {
  Protocol protocol = Protocol::Rotiv;
  std::uint64_t seed = 7;
  std::uint64_t q = group::kDefaultModulus;
  unsigned word_width = 16;
  // Lose the last message of the transfer's authentication exchange.
  bool drop_message = false;
  bool reveal = false;
  // ROTIV only: re-encrypt the new state under the releasing owner's key.
  // The new owner then fails to identify the tag in its first session.
  bool literal_reencryption = false;
};

// Honest ownership transfer followed by one session with the new owner,
// printed message by message. Returns 0 when every check passes, 1 on a
// protocol failure (the failing step is printed), 2 on bad options.
int run_demo(const DemoOptions& options, std::ostream& out, std::ostream& err);

}  // namespace otplab::harness
