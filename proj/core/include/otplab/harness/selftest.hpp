#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

namespace otplab::harness {

struct SelftestOptions {
  // Run the crc16 check against a table with one flipped entry.
  bool corrupt_crc_table = false;
  std::uint64_t seed = 20240601;
};

struct SelftestCheck {
  std::string name;
  // Empty string on success, a short reason otherwise.
  std::function<std::string()> run;
};

std::vector<SelftestCheck> selftest_checks(const SelftestOptions& options);

// Prints one line per check; returns 0 if all pass, 1 otherwise.
int run_selftest(const SelftestOptions& options, std::ostream& out);

}  // namespace otplab::harness
