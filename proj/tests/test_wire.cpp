#include <gtest/gtest.h>

#include "swapsim/random.hpp"
#include "swapsim/wire.hpp"

namespace swapsim {
namespace {

TEST(BitPacking, MsbFirstExample) {
  // sector 2 ("10") followed by a set bit gives "101" -> 0xA0
  BitWriter w;
  w.push_bits(2, 2);
  w.push_bit(1);
  EXPECT_EQ(w.bit_count(), 3);
  ASSERT_EQ(w.bytes().size(), 1u);
  EXPECT_EQ(w.bytes()[0], 0xA0);
}

TEST(BitPacking, ReaderInvertsWriter) {
  BitWriter w;
  w.push_bits(0b1101, 4);
  w.push_bit(0);
  w.push_bits(0b10, 2);
  BitReader r(w.bytes(), w.bit_count());
  EXPECT_EQ(r.read_bits(4), 0b1101u);
  EXPECT_EQ(r.read_bit(), 0);
  EXPECT_EQ(r.read_bits(2), 0b10u);
  EXPECT_EQ(r.remaining(), 0);
  EXPECT_THROW(r.read_bit(), std::out_of_range);
}

TEST(Frame, HeaderLayoutIsBitExact) {
  BitWriter w;
  w.push_bits(2, 2);
  w.push_bit(1);
  const WireMessage m = make_frame(Role::bob, 0x01020304u, w);
  const std::vector<std::uint8_t> bytes = serialize_frame(m);
  const std::vector<std::uint8_t> expected = {2, 0x01, 0x02, 0x03, 0x04, 3, 0xA0};
  EXPECT_EQ(bytes, expected);
}

TEST(Frame, RoundTripsRandomFrames) {
  RandomStream rng(81, "frames");
  for (int i = 0; i < 10000; ++i) {
    BitWriter w;
    const int bits = 1 + static_cast<int>(rng.next_u64() % 32);
    for (int b = 0; b < bits; ++b) w.push_bit(static_cast<int>(rng.next_u64() & 1));
    const WireMessage m =
        make_frame(static_cast<Role>(rng.next_u64() % 4),
                   static_cast<std::uint32_t>(rng.next_u64()), w);
    const WireMessage back = parse_frame(serialize_frame(m));
    ASSERT_EQ(back, m);
  }
}

TEST(Frame, RejectsEmptyPayload) {
  WireMessage m;
  m.bit_count = 0;
  EXPECT_THROW(serialize_frame(m), FrameError);
  const std::vector<std::uint8_t> wire = {0, 0, 0, 0, 0, 0};
  EXPECT_THROW(parse_frame(wire), FrameError);
}

TEST(Frame, RejectsMalformedBuffers) {
  BitWriter w;
  w.push_bits(5, 3);
  const std::vector<std::uint8_t> good =
      serialize_frame(make_frame(Role::alice, 7, w));

  std::vector<std::uint8_t> truncated(good.begin(), good.end() - 1);
  EXPECT_THROW(parse_frame(truncated), FrameError);
  std::vector<std::uint8_t> header_only(good.begin(), good.begin() + 4);
  EXPECT_THROW(parse_frame(header_only), FrameError);

  std::vector<std::uint8_t> oversized = good;
  oversized.push_back(0);
  EXPECT_THROW(parse_frame(oversized), FrameError);

  std::vector<std::uint8_t> bad_sender = good;
  bad_sender[0] = 9;
  EXPECT_THROW(parse_frame(bad_sender), FrameError);

  // declared 3 bits but a padding bit is set
  std::vector<std::uint8_t> dirty_padding = good;
  dirty_padding.back() |= 0x01;
  EXPECT_THROW(parse_frame(dirty_padding), FrameError);
}

TEST(Frame, PayloadLengthMustMatchBitCount) {
  WireMessage m;
  m.sender = Role::referee;
  m.round_id = 1;
  m.bit_count = 9;  // needs two bytes
  m.payload = {0xFF};
  EXPECT_THROW(serialize_frame(m), FrameError);
}

}  // namespace
}  // namespace swapsim
