#pragma once

// Generic-group realization of an asymmetric pairing setting
// (q, G1, G2, GT, g1, g2, e). Every element is stored as its discrete
// logarithm with respect to its group's fixed generator, so all algebraic
// relations the protocols rely on can be checked exactly.

#include <compare>
#include <cstdint>
#include <string>

#include "otplab/bytes.hpp"
#include "otplab/rng.hpp"

namespace otplab::group {

enum class GroupId : std::uint8_t { G1 = 1, G2 = 2, GT = 3 };

std::string to_string(GroupId g);

// Residue modulo the prime q of the owning PairingParams.
struct Scalar {
  std::uint64_t value = 0;

  friend auto operator<=>(const Scalar&, const Scalar&) = default;
};

// Element of G1, G2 or GT. exponent is the discrete log w.r.t. the group's
// generator: the generator has exponent 1, the identity exponent 0.
struct GroupElement {
  GroupId group = GroupId::G1;
  Scalar exponent;

  bool is_identity() const { return exponent.value == 0; }

  friend bool operator==(const GroupElement&, const GroupElement&) = default;
};

// Canonical wire encoding: group tag byte followed by the 8-byte
// little-endian exponent.
void encode(ByteWriter& w, const GroupElement& e);
Bytes encode(const GroupElement& e);

// 2^61 - 1.
inline constexpr std::uint64_t kDefaultModulus = (std::uint64_t{1} << 61) - 1;

bool is_prime(std::uint64_t n);

// Shared prime order q for G1, G2, GT plus the group law, the pairing and
// the hash onto G1. Immutable after construction; every member function is
// pure.
class PairingParams {
 public:
  // q must be a prime in [3, 2^62).
  explicit PairingParams(std::uint64_t q = kDefaultModulus);

  std::uint64_t q() const { return q_; }

  GroupElement generator(GroupId g) const { return {g, Scalar{1}}; }
  GroupElement identity(GroupId g) const { return {g, Scalar{0}}; }
  GroupElement g1() const { return generator(GroupId::G1); }
  GroupElement g2() const { return generator(GroupId::G2); }
  GroupElement gT() const { return generator(GroupId::GT); }

  Scalar scalar(std::uint64_t v) const { return Scalar{v % q_}; }
  Scalar add(Scalar a, Scalar b) const;
  Scalar sub(Scalar a, Scalar b) const;
  Scalar mul(Scalar a, Scalar b) const;
  Scalar neg(Scalar a) const;

  GroupElement pow(const GroupElement& base, Scalar s) const;
  // Throws DomainError when a and b live in different groups.
  GroupElement mul(const GroupElement& a, const GroupElement& b) const;
  GroupElement inv(const GroupElement& a) const;
  // a / b, i.e. mul(a, inv(b)).
  GroupElement div(const GroupElement& a, const GroupElement& b) const;
  // e: G1 x G2 -> GT. Throws DomainError on wrong source groups.
  GroupElement pairing(const GroupElement& a, const GroupElement& b) const;

  // h: F_q -> G1. SHA-256 over a domain-separated encoding of t and a
  // counter, reduced mod q; the counter is bumped until the result is not
  // the identity.
  GroupElement hash_to_g1(Scalar t) const;

  Scalar random_scalar(Rng& rng) const { return Scalar{rng.uniform(q_)}; }
  // Draw from Z*_q.
  Scalar random_nonzero_scalar(Rng& rng) const { return Scalar{1 + rng.uniform(q_ - 1)}; }

  // Fails with DomainError unless e belongs to group g.
  void expect(const GroupElement& e, GroupId g, const char* what) const;

 private:
  std::uint64_t q_;
};

}  // namespace otplab::group
