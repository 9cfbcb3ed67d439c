#include "otplab/group_model.hpp"

#include <array>

#include "otplab/errors.hpp"
#include "sha256.hpp"

namespace otplab::group {

namespace {

using u128 = unsigned __int128;

std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
  return static_cast<std::uint64_t>(static_cast<u128>(a) * b % m);
}

std::uint64_t powmod(std::uint64_t base, std::uint64_t exp, std::uint64_t m) {
  std::uint64_t result = 1 % m;
  base %= m;
  while (exp != 0) {
    if (exp & 1) result = mulmod(result, base, m);
    base = mulmod(base, base, m);
    exp >>= 1;
  }
  return result;
}

}  // namespace

std::string to_string(GroupId g) {
  switch (g) {
    case GroupId::G1:
      return "G1";
    case GroupId::G2:
      return "G2";
    case GroupId::GT:
      return "GT";
  }
  return "?";
}

void encode(ByteWriter& w, const GroupElement& e) {
  w.u8(static_cast<std::uint8_t>(e.group)).u64(e.exponent.value);
}

Bytes encode(const GroupElement& e) {
  ByteWriter w;
  encode(w, e);
  return std::move(w).take();
}

// Deterministic Miller-Rabin; these bases are exact for all 64-bit n.
bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  static constexpr std::array<std::uint64_t, 12> kBases{2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37};
  for (std::uint64_t p : kBases) {
    if (n % p == 0) return n == p;
  }
  std::uint64_t d = n - 1;
  int r = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++r;
  }
  for (std::uint64_t a : kBases) {
    std::uint64_t x = powmod(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (int i = 1; i < r; ++i) {
      x = mulmod(x, x, n);
      if (x == n - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

PairingParams::PairingParams(std::uint64_t q) : q_(q) {
  if (q < 3 || q >= (std::uint64_t{1} << 62)) {
    throw ConfigError("group order must lie in [3, 2^62), got " + std::to_string(q));
  }
  if (!is_prime(q)) throw ConfigError("group order " + std::to_string(q) + " is not prime");
}

Scalar PairingParams::add(Scalar a, Scalar b) const {
  std::uint64_t s = a.value + b.value;
  return Scalar{s >= q_ ? s - q_ : s};
}

Scalar PairingParams::sub(Scalar a, Scalar b) const {
  return Scalar{a.value >= b.value ? a.value - b.value : a.value + q_ - b.value};
}

Scalar PairingParams::mul(Scalar a, Scalar b) const { return Scalar{mulmod(a.value, b.value, q_)}; }

Scalar PairingParams::neg(Scalar a) const { return Scalar{a.value == 0 ? 0 : q_ - a.value}; }

GroupElement PairingParams::pow(const GroupElement& base, Scalar s) const {
  return {base.group, mul(base.exponent, s)};
}

GroupElement PairingParams::mul(const GroupElement& a, const GroupElement& b) const {
  if (a.group != b.group) {
    throw DomainError("cannot multiply " + to_string(a.group) + " by " + to_string(b.group));
  }
  return {a.group, add(a.exponent, b.exponent)};
}

GroupElement PairingParams::inv(const GroupElement& a) const { return {a.group, neg(a.exponent)}; }

GroupElement PairingParams::div(const GroupElement& a, const GroupElement& b) const {
  return mul(a, inv(b));
}

GroupElement PairingParams::pairing(const GroupElement& a, const GroupElement& b) const {
  expect(a, GroupId::G1, "pairing: first argument");
  expect(b, GroupId::G2, "pairing: second argument");
  return {GroupId::GT, mul(a.exponent, b.exponent)};
}

GroupElement PairingParams::hash_to_g1(Scalar t) const {
  static constexpr std::string_view kDomain = "otplab/hash-to-G1";
  for (std::uint32_t counter = 0;; ++counter) {
    ByteWriter w;
    w.str(kDomain).le(counter, 4).u64(t.value);
    const auto md = detail::sha256(w.bytes());
    std::uint64_t v = 0;
    for (int i = 7; i >= 0; --i) v = (v << 8) | md[static_cast<std::size_t>(i)];
    v %= q_;
    if (v != 0) return {GroupId::G1, Scalar{v}};
  }
}

void PairingParams::expect(const GroupElement& e, GroupId g, const char* what) const {
  if (e.group != g) {
    throw DomainError(std::string(what) + " must be in " + to_string(g) + ", got " + to_string(e.group));
  }
  if (e.exponent.value >= q_) throw DomainError(std::string(what) + " has an unreduced exponent");
}

}  // namespace otplab::group
