#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace kalikow {

// Error taxonomy mirrors the CLI exit-code contract.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct BudgetError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// SplitMix64: tiny, portable, byte-stable across platforms. All seeded
// suites route their randomness through this so reports reproduce exactly.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // Uniform in [0, bound). Modulo bias is irrelevant at our bounds (<= 2^32).
  std::uint64_t below(std::uint64_t bound) { return bound ? next() % bound : 0; }

  // Uniform in [lo, hi] inclusive.
  std::uint64_t range(std::uint64_t lo, std::uint64_t hi) {
    return lo + below(hi - lo + 1);
  }

 private:
  std::uint64_t state_;
};

// Fixed-capacity bit sequence, LSB-first, up to 128 bits. Holds eta-prefixes;
// encoder lengths are capped well below this.
struct Bits {
  std::uint64_t lo = 0, hi = 0;
  std::uint32_t len = 0;

  static constexpr std::uint32_t kMaxLen = 128;

  bool get(std::uint32_t i) const {
    return i < 64 ? (lo >> i) & 1 : (hi >> (i - 64)) & 1;
  }
  void set(std::uint32_t i) {
    if (i < 64)
      lo |= std::uint64_t(1) << i;
    else
      hi |= std::uint64_t(1) << (i - 64);
  }
  bool operator==(const Bits&) const = default;

  std::string to_string() const {  // "0b..." LSB-first
    std::string s = "0b";
    for (std::uint32_t i = 0; i < len; ++i) s += get(i) ? '1' : '0';
    return s;
  }
};

// Byte sink used by canonical serialization; either accumulates or streams
// into a hash. Canonical bytes feed hf_to_code, so every implementation must
// see the identical byte stream.
struct ByteSink {
  virtual void put(const std::uint8_t* data, std::size_t n) = 0;
  virtual ~ByteSink() = default;

  void put_u8(std::uint8_t b) { put(&b, 1); }
  // LEB128.
  void put_varint(std::uint64_t v) {
    while (v >= 0x80) {
      put_u8(std::uint8_t(v) | 0x80);
      v >>= 7;
    }
    put_u8(std::uint8_t(v));
  }
};

struct VectorSink final : ByteSink {
  std::vector<std::uint8_t> bytes;
  void put(const std::uint8_t* data, std::size_t n) override {
    bytes.insert(bytes.end(), data, data + n);
  }
};

// FNV-1a, 64-bit. Used for collision scans (full compare on hash hit).
struct HashSink final : ByteSink {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  void put(const std::uint8_t* data, std::size_t n) override {
    for (std::size_t i = 0; i < n; ++i) {
      h ^= data[i];
      h *= 0x100000001b3ULL;
    }
  }
};

}  // namespace kalikow
