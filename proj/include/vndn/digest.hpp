#pragma once

#include "vndn/common.hpp"

#include <openssl/evp.h>

#include <array>
#include <memory>
#include <stdexcept>

namespace vndn {

using Sha256Digest = std::array<std::uint8_t, 32>;

/// Incremental SHA-256 over OpenSSL's EVP interface.
class Sha256 {
public:
  Sha256()
    : m_ctx(EVP_MD_CTX_new(), &EVP_MD_CTX_free)
  {
    if (!m_ctx || EVP_DigestInit_ex(m_ctx.get(), EVP_sha256(), nullptr) != 1) {
      throw std::runtime_error("SHA-256 initialisation failed");
    }
  }

  Sha256& update(ByteView bytes)
  {
    EVP_DigestUpdate(m_ctx.get(), bytes.data(), bytes.size());
    return *this;
  }

  Sha256& update(std::string_view text)
  {
    EVP_DigestUpdate(m_ctx.get(), text.data(), text.size());
    return *this;
  }

  Sha256Digest finish()
  {
    Sha256Digest out{};
    unsigned int len = 0;
    EVP_DigestFinal_ex(m_ctx.get(), out.data(), &len);
    return out;
  }

private:
  std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> m_ctx;
};

inline Sha256Digest sha256(ByteView bytes)
{
  return Sha256{}.update(bytes).finish();
}

inline Sha256Digest sha256(std::string_view text)
{
  return Sha256{}.update(text).finish();
}

} // namespace vndn
