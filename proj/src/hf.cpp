#include "kalikow/hf.hpp"

#include <algorithm>

namespace kalikow {

namespace {

constexpr std::uint8_t kTagAtom = 0x01;
constexpr std::uint8_t kTagBits = 0x02;
constexpr std::uint8_t kTagTuple = 0x03;
constexpr std::uint8_t kTagSet = 0x04;

}  // namespace

HFValue HFValue::atom(std::uint64_t n) {
  HFValue v;
  v.kind_ = Kind::atom;
  v.atom_ = n;
  return v;
}

HFValue HFValue::bits(Bits b) {
  HFValue v;
  v.kind_ = Kind::bits;
  v.bits_ = b;
  return v;
}

HFValue HFValue::tuple(std::vector<HFValue> items) {
  HFValue v;
  v.kind_ = Kind::tuple;
  v.items_ = std::move(items);
  return v;
}

HFValue HFValue::set(std::vector<HFValue> members) {
  HFValue v;
  v.kind_ = Kind::set;
  std::sort(members.begin(), members.end());
  members.erase(std::unique(members.begin(), members.end()), members.end());
  v.items_ = std::move(members);
  return v;
}

std::uint64_t HFValue::atom_value() const {
  if (kind_ != Kind::atom) throw ConfigError("hf: not an atom");
  return atom_;
}

const Bits& HFValue::bits_value() const {
  if (kind_ != Kind::bits) throw ConfigError("hf: not a bit-string");
  return bits_;
}

std::strong_ordering HFValue::operator<=>(const HFValue& o) const {
  auto a = serialized(), b = o.serialized();
  return a <=> b;
}

void HFValue::serialize(ByteSink& sink) const {
  switch (kind_) {
    case Kind::atom:
      sink.put_u8(kTagAtom);
      sink.put_varint(atom_);
      return;
    case Kind::bits: {
      sink.put_u8(kTagBits);
      sink.put_varint(bits_.len);
      for (std::uint32_t i = 0; i < bits_.len; i += 8) {
        std::uint8_t byte = 0;
        for (std::uint32_t j = 0; j < 8 && i + j < bits_.len; ++j)
          byte |= std::uint8_t(bits_.get(i + j)) << j;
        sink.put_u8(byte);
      }
      return;
    }
    case Kind::tuple:
    case Kind::set:
      sink.put_u8(kind_ == Kind::tuple ? kTagTuple : kTagSet);
      sink.put_varint(items_.size());
      for (const auto& m : items_) m.serialize(sink);
      return;
  }
  throw ConfigError("hf: bad kind");
}

std::vector<std::uint8_t> HFValue::serialized() const {
  VectorSink sink;
  serialize(sink);
  return std::move(sink.bytes);
}

nlohmann::json HFValue::to_json() const {
  switch (kind_) {
    case Kind::atom:
      return atom_;
    case Kind::bits:
      return bits_.to_string();
    case Kind::tuple: {
      nlohmann::json arr = nlohmann::json::array();
      for (const auto& m : items_) arr.push_back(m.to_json());
      return arr;
    }
    case Kind::set: {
      nlohmann::json arr = nlohmann::json::array();
      for (const auto& m : items_) arr.push_back(m.to_json());
      return nlohmann::json{{"set", std::move(arr)}};
    }
  }
  throw ConfigError("hf: bad kind");
}

std::string HFValue::to_string() const { return to_json().dump(); }

CodeWord hf_to_code(const HFValue& v) {
  auto bytes = v.serialized();
  CodeWord w;
  mpz_import(w.value.get_mpz_t(), bytes.size(), 1, 1, 0, 0, bytes.data());
  return w;
}

}  // namespace kalikow
