#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <gmpxx.h>
#include <json.hpp>

#include "kalikow/util.hpp"

namespace kalikow {

// Hereditarily finite value: atom (natural), bit-string, ordered tuple, or
// finite set. Sets are stored canonically (sorted by serialized form, no
// duplicates), so structural equality is plain field equality and the
// serialization of equal values is byte-identical.
class HFValue {
 public:
  enum class Kind : std::uint8_t { atom, bits, tuple, set };

  HFValue() = default;

  static HFValue atom(std::uint64_t n);
  static HFValue bits(Bits b);
  static HFValue tuple(std::vector<HFValue> items);
  // Sorts and deduplicates.
  static HFValue set(std::vector<HFValue> members);

  Kind kind() const { return kind_; }
  std::uint64_t atom_value() const;
  const Bits& bits_value() const;
  const std::vector<HFValue>& items() const { return items_; }

  bool operator==(const HFValue&) const = default;
  // Canonical-byte order; used for set storage.
  std::strong_ordering operator<=>(const HFValue& o) const;

  void serialize(ByteSink& sink) const;
  std::vector<std::uint8_t> serialized() const;

  // Tuples render as arrays, sets as {"set":[...]}, bit-strings as "0b...".
  nlohmann::json to_json() const;
  std::string to_string() const;

 private:
  Kind kind_ = Kind::atom;
  std::uint64_t atom_ = 0;
  Bits bits_{};
  std::vector<HFValue> items_;
};

// Injective natural-number code of an HFValue: the canonical serialization
// read as a big-endian natural. The anchor hf_to_code(atom(0)) = 256
// (bytes 0x01 0x00).
struct CodeWord {
  mpz_class value;

  bool operator==(const CodeWord&) const = default;
  std::string to_string() const { return value.get_str(); }
};

CodeWord hf_to_code(const HFValue& v);

}  // namespace kalikow
