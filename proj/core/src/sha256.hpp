#pragma once

#include <array>
#include <cstdint>

#include "otplab/bytes.hpp"

namespace otplab::detail {

using Sha256Digest = std::array<std::uint8_t, 32>;

Sha256Digest sha256(ByteView data);

}  // namespace otplab::detail
