#pragma once

// Slow reference implementations used as oracles by the self-test.

#include <cstdint>

#include "otplab/bytes.hpp"

namespace otplab::harness::reference {

// Bit-at-a-time CRC-16/CCITT-FALSE.
inline std::uint16_t crc16_bitwise(ByteView data) {
  std::uint16_t crc = 0xFFFF;
  for (std::uint8_t byte : data) {
    for (int bit = 7; bit >= 0; --bit) {
      const bool in = ((byte >> bit) & 1U) != 0;
      const bool top = (crc & 0x8000U) != 0;
      crc = static_cast<std::uint16_t>(crc << 1);
      if (in != top) crc ^= 0x1021;
    }
  }
  return crc;
}

// Bit-at-a-time CRC-32/ISO-HDLC.
inline std::uint32_t crc32_bitwise(ByteView data) {
  std::uint32_t crc = 0xFFFFFFFFU;
  for (std::uint8_t byte : data) {
    crc ^= byte;
    for (int k = 0; k < 8; ++k) crc = (crc & 1U) ? (crc >> 1) ^ 0xEDB88320U : crc >> 1;
  }
  return ~crc;
}

}  // namespace otplab::harness::reference
