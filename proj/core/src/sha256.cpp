#include "sha256.hpp"

#include <openssl/evp.h>

#include "otplab/errors.hpp"

namespace otplab::detail {

Sha256Digest sha256(ByteView data) {
  Sha256Digest out{};
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), out.data(), &len, EVP_sha256(), nullptr) != 1 ||
      len != out.size()) {
    throw Error("SHA-256 computation failed");
  }
  return out;
}

}  // namespace otplab::detail
