#pragma once

#include <array>
#include <cstdint>
#include <string>

namespace lasat {

// 32-byte session seed. All randomness consumed by the samplers is a pure
// function of (seed, stream_key), which is what makes independent queries
// agree on every shared draw.
struct seed {
  std::array<std::uint8_t, 32> bytes{};

  static seed from_hex(const std::string& hex64);
  static seed from_u64(std::uint64_t x);
  std::string to_hex() const;

  bool operator==(const seed&) const = default;
};

enum class stream_ns : std::uint8_t {
  init_y = 1,          // Y(var): chain initialization bit
  lb_sample = 2,       // lower-bound draw at time t
  padding_draw = 3,    // padding-distribution draw at time t
  component_draw = 4,  // (component_rep, counter)
  mark_order = 5,      // a_v vertex order
  mark_phase1 = 6,     // phase-1 color bit
  mark_phase2 = 7,     // (var, repetition)
  mark_phase3 = 8,     // (component_rep, counter); reserved, phase 3 is deterministic
};

// One address on the random tape. Serialization is fixed-width so distinct
// (namespace, indices) tuples never collide at the byte level. Time indices
// may be negative.
struct stream_key {
  stream_ns ns;
  std::int64_t a = 0;
  std::int64_t b = 0;

  static stream_key init_y(int var) { return {stream_ns::init_y, var, 0}; }
  static stream_key lb_sample(std::int64_t t) { return {stream_ns::lb_sample, t, 0}; }
  static stream_key padding_draw(std::int64_t t) { return {stream_ns::padding_draw, t, 0}; }
  static stream_key component_draw(int rep_var, std::int64_t counter) {
    return {stream_ns::component_draw, rep_var, counter};
  }
  static stream_key mark_order(int var) { return {stream_ns::mark_order, var, 0}; }
  static stream_key mark_phase1(int var) { return {stream_ns::mark_phase1, var, 0}; }
  static stream_key mark_phase2(int var, int repetition) {
    return {stream_ns::mark_phase2, var, repetition};
  }
  static stream_key mark_phase3(int rep_var, std::int64_t counter) {
    return {stream_ns::mark_phase3, rep_var, counter};
  }

  std::array<std::uint8_t, 17> serialize() const;
};

// Keyed PRF over the serialized key (SipHash-2-4).
std::uint64_t prf64(const seed& s, const stream_key& k);

// Uniform in [0,1) with 53 bits of precision; deterministic in (seed, key).
double u01(const seed& s, const stream_key& k);

// 1 iff u01(s, k) >= 1/2.
int bit(const seed& s, const stream_key& k);

}  // namespace lasat
