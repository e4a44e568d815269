#include "lasat/tape.hpp"

#include <cstring>

#include "lasat/errors.hpp"

namespace lasat {

namespace {

inline std::uint64_t rotl(std::uint64_t x, int b) { return (x << b) | (x >> (64 - b)); }

inline std::uint64_t load_le64(const std::uint8_t* p) {
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= std::uint64_t(p[i]) << (8 * i);
  return v;
}

// SipHash-2-4 with a 128-bit key.
std::uint64_t siphash24(std::uint64_t k0, std::uint64_t k1, const std::uint8_t* data,
                        std::size_t len) {
  std::uint64_t v0 = 0x736f6d6570736575ULL ^ k0;
  std::uint64_t v1 = 0x646f72616e646f6dULL ^ k1;
  std::uint64_t v2 = 0x6c7967656e657261ULL ^ k0;
  std::uint64_t v3 = 0x7465646279746573ULL ^ k1;

  auto round = [&] {
    v0 += v1;
    v1 = rotl(v1, 13);
    v1 ^= v0;
    v0 = rotl(v0, 32);
    v2 += v3;
    v3 = rotl(v3, 16);
    v3 ^= v2;
    v0 += v3;
    v3 = rotl(v3, 21);
    v3 ^= v0;
    v2 += v1;
    v1 = rotl(v1, 17);
    v1 ^= v2;
    v2 = rotl(v2, 32);
  };

  const std::size_t end = len - (len % 8);
  std::size_t i = 0;
  for (; i < end; i += 8) {
    std::uint64_t m = load_le64(data + i);
    v3 ^= m;
    round();
    round();
    v0 ^= m;
  }

  std::uint64_t last = std::uint64_t(len & 0xff) << 56;
  for (std::size_t j = 0; i + j < len; ++j) last |= std::uint64_t(data[i + j]) << (8 * j);
  v3 ^= last;
  round();
  round();
  v0 ^= last;

  v2 ^= 0xff;
  round();
  round();
  round();
  round();
  return v0 ^ v1 ^ v2 ^ v3;
}

inline int hex_val(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'a' && c <= 'f') return c - 'a' + 10;
  if (c >= 'A' && c <= 'F') return c - 'A' + 10;
  return -1;
}

std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace

seed seed::from_hex(const std::string& hex64) {
  if (hex64.size() != 64) fail(errc::bad_config, "seed must be exactly 64 hex characters");
  seed s;
  for (int i = 0; i < 32; ++i) {
    int hi = hex_val(hex64[2 * i]);
    int lo = hex_val(hex64[2 * i + 1]);
    if (hi < 0 || lo < 0) fail(errc::bad_config, "seed contains a non-hex character");
    s.bytes[i] = std::uint8_t(hi * 16 + lo);
  }
  return s;
}

seed seed::from_u64(std::uint64_t x) {
  seed s;
  std::uint64_t state = x;
  for (int w = 0; w < 4; ++w) {
    std::uint64_t v = splitmix64(state);
    for (int i = 0; i < 8; ++i) s.bytes[8 * w + i] = std::uint8_t(v >> (8 * i));
  }
  return s;
}

std::string seed::to_hex() const {
  static const char* digits = "0123456789abcdef";
  std::string out(64, '0');
  for (int i = 0; i < 32; ++i) {
    out[2 * i] = digits[bytes[i] >> 4];
    out[2 * i + 1] = digits[bytes[i] & 0xf];
  }
  return out;
}

std::array<std::uint8_t, 17> stream_key::serialize() const {
  std::array<std::uint8_t, 17> out{};
  out[0] = static_cast<std::uint8_t>(ns);
  std::uint64_t ua = static_cast<std::uint64_t>(a);  // two's complement for negative times
  std::uint64_t ub = static_cast<std::uint64_t>(b);
  for (int i = 0; i < 8; ++i) {
    out[1 + i] = std::uint8_t(ua >> (8 * i));
    out[9 + i] = std::uint8_t(ub >> (8 * i));
  }
  return out;
}

std::uint64_t prf64(const seed& s, const stream_key& k) {
  // key = first 16 seed bytes; remaining 16 bytes prefix the message.
  std::uint64_t k0 = load_le64(s.bytes.data());
  std::uint64_t k1 = load_le64(s.bytes.data() + 8);
  std::uint8_t msg[16 + 17];
  std::memcpy(msg, s.bytes.data() + 16, 16);
  auto ser = k.serialize();
  std::memcpy(msg + 16, ser.data(), ser.size());
  return siphash24(k0, k1, msg, sizeof(msg));
}

double u01(const seed& s, const stream_key& k) {
  return double(prf64(s, k) >> 11) * 0x1.0p-53;
}

int bit(const seed& s, const stream_key& k) { return u01(s, k) >= 0.5 ? 1 : 0; }

}  // namespace lasat
