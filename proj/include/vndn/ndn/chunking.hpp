#pragma once

#include "vndn/ndn/packet.hpp"

#include <algorithm>
#include <charconv>

namespace vndn::ndn {

class ChunkError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

inline std::string chunk_component(std::uint32_t index) { return "c" + std::to_string(index); }

/// Parses a "c<index>" component.
inline std::optional<std::uint32_t> parse_chunk_component(std::string_view c)
{
  if (c.size() < 2 || c.front() != 'c') return std::nullopt;
  std::uint32_t v = 0;
  auto [ptr, ec] = std::from_chars(c.data() + 1, c.data() + c.size(), v);
  if (ec != std::errc{} || ptr != c.data() + c.size()) return std::nullopt;
  return v;
}

/// Splits payload into sealed chunks named name/c<i>. An empty payload yields
/// a single empty chunk.
inline std::vector<Data> chunk_content(const Name& name, ByteView payload, std::size_t chunk_size,
                                       std::uint64_t producer_id = 0)
{
  if (chunk_size == 0) throw ChunkError("chunk size must be positive");
  auto count = std::max<std::size_t>(1, (payload.size() + chunk_size - 1) / chunk_size);
  std::vector<Data> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    auto begin = std::min(payload.size(), i * chunk_size);
    auto end = std::min(payload.size(), begin + chunk_size);
    Data d{name.append(chunk_component(static_cast<std::uint32_t>(i)))};
    d.payload.assign(payload.begin() + begin, payload.begin() + end);
    d.chunk_index = static_cast<std::uint32_t>(i);
    d.chunk_count = static_cast<std::uint32_t>(count);
    d.producer_id = producer_id;
    out.push_back(std::move(seal(d)));
  }
  return out;
}

/// Concatenates chunks in index order once every index 0..count-1 is present;
/// nullopt while incomplete. Throws ChunkError when chunks belong to different
/// contents.
inline std::optional<Bytes> reassemble(std::span<const Data> chunks)
{
  if (chunks.empty()) return std::nullopt;
  const auto base = chunks.front().name.size() > 1 ? chunks.front().name.parent() : chunks.front().name;
  const auto count = chunks.front().chunk_count;
  std::vector<const Data*> slots(count, nullptr);
  for (const auto& c : chunks) {
    auto this_base = c.name.size() > 1 ? c.name.parent() : c.name;
    if (this_base != base || c.chunk_count != count) {
      throw ChunkError("chunks from different contents: " + c.name.to_uri() + " vs base " + base.to_uri());
    }
    if (c.chunk_index >= count) throw ChunkError("chunk index out of range in " + c.name.to_uri());
    slots[c.chunk_index] = &c;
  }
  if (std::any_of(slots.begin(), slots.end(), [](auto* p) { return p == nullptr; })) {
    return std::nullopt;
  }
  Bytes out;
  for (auto* s : slots) out.insert(out.end(), s->payload.begin(), s->payload.end());
  return out;
}

} // namespace vndn::ndn
