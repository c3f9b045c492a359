#pragma once

// Interest and Data packets and their canonical big-endian encoding:
//
//   kind (1) | name | kind-specific fields
//   name     = component count (2) | per component: length (2) | UTF-8 bytes
//   Interest = nonce (8) | lifetime ms (4) | hop count (2)
//   Data     = chunk index (4) | chunk count (4) | producer id (8) |
//              payload length (4) | payload | integrity tag (32)
//
// The integrity tag is SHA-256 over every Data byte that precedes it.

#include "vndn/common.hpp"
#include "vndn/digest.hpp"
#include "vndn/geo.hpp"
#include "vndn/ndn/name.hpp"

#include <optional>
#include <stdexcept>
#include <variant>

namespace vndn::ndn {

enum class PacketKind : std::uint8_t { Interest = 1, Data = 2 };

inline const char* to_string(PacketKind k)
{
  return k == PacketKind::Interest ? "interest" : "data";
}

class PacketError : public std::runtime_error {
public:
  enum class Code { Truncated, BadKind, TrailingBytes, BadName };

  PacketError(Code code, const std::string& what)
    : std::runtime_error(what)
    , m_code(code)
  {
  }

  Code code() const { return m_code; }

private:
  Code m_code;
};

struct Interest {
  Name name;
  std::uint64_t nonce = 0;
  std::uint32_t lifetime_ms = 4000;
  std::uint16_t hop_count = 0;
  // Not encoded; carried alongside for metrics.
  std::optional<geo::GeoPoint> origin_position;

  friend bool operator==(const Interest& a, const Interest& b)
  {
    return a.name == b.name && a.nonce == b.nonce && a.lifetime_ms == b.lifetime_ms &&
           a.hop_count == b.hop_count;
  }
};

struct Data {
  Name name;
  Bytes payload;
  std::uint32_t chunk_index = 0;
  std::uint32_t chunk_count = 1;
  std::uint64_t producer_id = 0;
  Sha256Digest integrity_tag{};

  friend bool operator==(const Data&, const Data&) = default;
};

using Packet = std::variant<Interest, Data>;

namespace detail {

inline void encode_name(Bytes& out, const Name& name)
{
  be::put<std::uint16_t>(out, static_cast<std::uint16_t>(name.size()));
  for (const auto& c : name.components()) {
    be::put<std::uint16_t>(out, static_cast<std::uint16_t>(c.size()));
    out.insert(out.end(), c.begin(), c.end());
  }
}

class Reader {
public:
  explicit Reader(ByteView bytes)
    : m_bytes(bytes)
  {
  }

  void need(std::size_t n) const
  {
    if (m_pos + n > m_bytes.size()) {
      throw PacketError(PacketError::Code::Truncated, "packet truncated");
    }
  }

  template <class T>
  T read()
  {
    need(sizeof(T));
    auto v = be::get<T>(m_bytes, m_pos);
    m_pos += sizeof(T);
    return v;
  }

  ByteView take(std::size_t n)
  {
    need(n);
    auto v = m_bytes.subspan(m_pos, n);
    m_pos += n;
    return v;
  }

  Name read_name()
  {
    auto count = read<std::uint16_t>();
    std::vector<std::string> comps;
    comps.reserve(count);
    for (std::uint16_t i = 0; i < count; ++i) {
      auto len = read<std::uint16_t>();
      auto raw = take(len);
      comps.emplace_back(raw.begin(), raw.end());
    }
    try {
      return Name(std::move(comps));
    }
    catch (const NameError& e) {
      throw PacketError(PacketError::Code::BadName, e.what());
    }
  }

  std::size_t position() const { return m_pos; }
  bool done() const { return m_pos == m_bytes.size(); }

private:
  ByteView m_bytes;
  std::size_t m_pos = 0;
};

/// Data bytes up to (not including) the integrity tag.
inline Bytes encode_data_body(const Data& d)
{
  Bytes out;
  out.reserve(64 + d.payload.size());
  be::put_u8(out, static_cast<std::uint8_t>(PacketKind::Data));
  encode_name(out, d.name);
  be::put(out, d.chunk_index);
  be::put(out, d.chunk_count);
  be::put(out, d.producer_id);
  be::put<std::uint32_t>(out, static_cast<std::uint32_t>(d.payload.size()));
  out.insert(out.end(), d.payload.begin(), d.payload.end());
  return out;
}

} // namespace detail

inline Bytes encode(const Interest& i)
{
  Bytes out;
  be::put_u8(out, static_cast<std::uint8_t>(PacketKind::Interest));
  detail::encode_name(out, i.name);
  be::put(out, i.nonce);
  be::put(out, i.lifetime_ms);
  be::put(out, i.hop_count);
  return out;
}

inline Bytes encode(const Data& d)
{
  auto out = detail::encode_data_body(d);
  out.insert(out.end(), d.integrity_tag.begin(), d.integrity_tag.end());
  return out;
}

inline Bytes encode(const Packet& p)
{
  return std::visit([](const auto& v) { return encode(v); }, p);
}

inline Sha256Digest compute_tag(const Data& d)
{
  return sha256(detail::encode_data_body(d));
}

/// Stamps the integrity tag; call after every field is final.
inline Data& seal(Data& d)
{
  d.integrity_tag = compute_tag(d);
  return d;
}

inline bool verify(const Data& d)
{
  return d.chunk_index < d.chunk_count && compute_tag(d) == d.integrity_tag;
}

inline Packet decode(ByteView bytes)
{
  detail::Reader r(bytes);
  auto kind = r.read<std::uint8_t>();
  if (kind == static_cast<std::uint8_t>(PacketKind::Interest)) {
    Interest i{r.read_name()};
    i.nonce = r.read<std::uint64_t>();
    i.lifetime_ms = r.read<std::uint32_t>();
    i.hop_count = r.read<std::uint16_t>();
    if (!r.done()) throw PacketError(PacketError::Code::TrailingBytes, "trailing bytes after interest");
    return i;
  }
  if (kind == static_cast<std::uint8_t>(PacketKind::Data)) {
    Data d{r.read_name()};
    d.chunk_index = r.read<std::uint32_t>();
    d.chunk_count = r.read<std::uint32_t>();
    d.producer_id = r.read<std::uint64_t>();
    auto len = r.read<std::uint32_t>();
    auto payload = r.take(len);
    d.payload.assign(payload.begin(), payload.end());
    auto tag = r.take(32);
    std::copy(tag.begin(), tag.end(), d.integrity_tag.begin());
    if (!r.done()) throw PacketError(PacketError::Code::TrailingBytes, "trailing bytes after data");
    return d;
  }
  throw PacketError(PacketError::Code::BadKind, "unknown packet kind " + std::to_string(kind));
}

inline PacketKind kind_of(const Packet& p)
{
  return std::holds_alternative<Interest>(p) ? PacketKind::Interest : PacketKind::Data;
}

inline const Name& name_of(const Packet& p)
{
  return std::visit([](const auto& v) -> const Name& { return v.name; }, p);
}

} // namespace vndn::ndn
