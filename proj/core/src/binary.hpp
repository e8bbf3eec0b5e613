#pragma once

// Little-endian primitives shared by the checkpoint and AVEC formats.

#include "acthull/errors.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <istream>
#include <ostream>
#include <string>

namespace acthull::detail {

template <typename T>
T byteswap_if_big(T v) {
  if constexpr (std::endian::native == std::endian::big) {
    unsigned char b[sizeof(T)];
    std::memcpy(b, &v, sizeof(T));
    for (std::size_t i = 0; i < sizeof(T) / 2; ++i) std::swap(b[i], b[sizeof(T) - 1 - i]);
    std::memcpy(&v, b, sizeof(T));
  }
  return v;
}

template <typename T>
void write_le(std::ostream& out, T v) {
  v = byteswap_if_big(v);
  out.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

/// Reads one value, naming `path` and the byte offset when the stream ends early.
template <typename T>
T read_le(std::istream& in, const std::string& path) {
  const auto at = static_cast<long long>(in.tellg());
  T v{};
  in.read(reinterpret_cast<char*>(&v), sizeof(T));
  if (in.gcount() != static_cast<std::streamsize>(sizeof(T))) {
    throw ParseError(path + ": truncated at byte " + std::to_string(at) + " (needed " + std::to_string(sizeof(T)) +
                     " more bytes)");
  }
  return byteswap_if_big(v);
}

}  // namespace acthull::detail
