#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace swapsim {

enum class Role : std::uint8_t { alice = 0, referee = 1, bob = 2, observer = 3 };

inline const char* role_name(Role r) {
  switch (r) {
    case Role::alice: return "alice";
    case Role::referee: return "referee";
    case Role::bob: return "bob";
    default: return "observer";
  }
}

struct FrameError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Wire layout: 6-byte header (sender: 1, round id: 4 big-endian, payload bit
// count: 1) followed by ceil(bits/8) payload bytes. Bits pack MSB-first;
// pad bits are zero. Every message carries at least one bit.
inline constexpr std::size_t kFrameHeaderBytes = 6;
inline constexpr int kMaxPayloadBits = 255;

struct WireMessage {
  Role sender = Role::alice;
  std::uint32_t round_id = 0;
  std::uint8_t bit_count = 0;
  std::vector<std::uint8_t> payload;

  friend bool operator==(const WireMessage&, const WireMessage&) = default;
};

/// Appends bits MSB-first into a byte buffer.
class BitWriter {
 public:
  void push_bit(int bit) {
    if (bit != 0 && bit != 1) throw std::invalid_argument("bit must be 0 or 1");
    if (bits_ % 8 == 0) bytes_.push_back(0);
    if (bit) bytes_.back() |= static_cast<std::uint8_t>(0x80u >> (bits_ % 8));
    ++bits_;
  }

  /// Pushes the low `count` bits of value, most significant first.
  void push_bits(std::uint32_t value, int count) {
    if (count < 0 || count > 32) throw std::invalid_argument("bad bit count");
    for (int i = count - 1; i >= 0; --i) push_bit((value >> i) & 1u);
  }

  int bit_count() const { return bits_; }
  const std::vector<std::uint8_t>& bytes() const { return bytes_; }

 private:
  std::vector<std::uint8_t> bytes_;
  int bits_ = 0;
};

/// Reads MSB-first bits back out of a payload.
class BitReader {
 public:
  BitReader(std::span<const std::uint8_t> bytes, int bit_count)
      : bytes_(bytes), bits_(bit_count) {
    if (bit_count < 0 ||
        static_cast<std::size_t>(bit_count) > 8 * bytes.size()) {
      throw std::invalid_argument("bit count exceeds buffer");
    }
  }

  int read_bit() {
    if (pos_ >= bits_) throw std::out_of_range("read past payload bits");
    const int bit = (bytes_[pos_ / 8] >> (7 - pos_ % 8)) & 1;
    ++pos_;
    return bit;
  }

  std::uint32_t read_bits(int count) {
    std::uint32_t v = 0;
    for (int i = 0; i < count; ++i) v = (v << 1) | read_bit();
    return v;
  }

  int remaining() const { return bits_ - pos_; }

 private:
  std::span<const std::uint8_t> bytes_;
  int bits_ = 0;
  int pos_ = 0;
};

inline std::size_t payload_bytes_for(int bit_count) {
  return static_cast<std::size_t>((bit_count + 7) / 8);
}

namespace detail {
inline void check_canonical_payload(std::uint8_t bit_count,
                                    std::span<const std::uint8_t> payload,
                                    const char* who) {
  if (bit_count == 0) {
    throw FrameError(std::string(who) + ": empty payload");
  }
  if (payload.size() != payload_bytes_for(bit_count)) {
    throw FrameError(std::string(who) + ": payload length inconsistent");
  }
  const int pad = static_cast<int>(8 * payload.size()) - bit_count;
  if (pad > 0 && (payload.back() & ((1u << pad) - 1u)) != 0) {
    throw FrameError(std::string(who) + ": nonzero padding bits");
  }
}
}  // namespace detail

inline std::vector<std::uint8_t> serialize_frame(const WireMessage& m) {
  detail::check_canonical_payload(m.bit_count, m.payload, "serialize_frame");
  std::vector<std::uint8_t> out;
  out.reserve(kFrameHeaderBytes + m.payload.size());
  out.push_back(static_cast<std::uint8_t>(m.sender));
  out.push_back(static_cast<std::uint8_t>(m.round_id >> 24));
  out.push_back(static_cast<std::uint8_t>(m.round_id >> 16));
  out.push_back(static_cast<std::uint8_t>(m.round_id >> 8));
  out.push_back(static_cast<std::uint8_t>(m.round_id));
  out.push_back(m.bit_count);
  out.insert(out.end(), m.payload.begin(), m.payload.end());
  return out;
}

inline WireMessage parse_frame(std::span<const std::uint8_t> buffer) {
  if (buffer.size() < kFrameHeaderBytes) {
    throw FrameError("parse_frame: truncated header");
  }
  if (buffer[0] > 3) throw FrameError("parse_frame: unknown sender");
  WireMessage m;
  m.sender = static_cast<Role>(buffer[0]);
  m.round_id = (static_cast<std::uint32_t>(buffer[1]) << 24) |
               (static_cast<std::uint32_t>(buffer[2]) << 16) |
               (static_cast<std::uint32_t>(buffer[3]) << 8) |
               static_cast<std::uint32_t>(buffer[4]);
  m.bit_count = buffer[5];
  if (buffer.size() != kFrameHeaderBytes + payload_bytes_for(m.bit_count)) {
    throw FrameError("parse_frame: buffer length inconsistent with bit count");
  }
  m.payload.assign(buffer.begin() + kFrameHeaderBytes, buffer.end());
  detail::check_canonical_payload(m.bit_count, m.payload, "parse_frame");
  return m;
}

/// Builds a frame from freshly written bits.
inline WireMessage make_frame(Role sender, std::uint32_t round_id,
                              const BitWriter& bits) {
  WireMessage m;
  m.sender = sender;
  m.round_id = round_id;
  m.bit_count = static_cast<std::uint8_t>(bits.bit_count());
  m.payload = bits.bytes();
  detail::check_canonical_payload(m.bit_count, m.payload, "make_frame");
  return m;
}

}  // namespace swapsim
