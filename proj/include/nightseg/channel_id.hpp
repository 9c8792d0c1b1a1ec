#pragma once

#include <array>

namespace nightseg {

// The 16 candidate color channels (c1..c16) plus plain grayscale.
enum class ChannelId {
  R,        // c1
  G,        // c2
  B,        // c3
  H,        // c4
  S,        // c5
  V,        // c6
  Y,        // c7
  I,        // c8
  Q,        // c9
  LStar,    // c10
  AStar,    // c11
  BStar,    // c12
  ROverB,   // c13  R/B
  RMinusB,  // c14  R-B
  NormBR,   // c15  (B-R)/(B+R)
  Chroma,   // c16  max(R,G,B) - min(R,G,B)
  Gray,     // luminance, used by the fixed-threshold baseline
};

inline constexpr int kChannelCount = 17;

// Candidate channels in c1..c16 order (excludes Gray).
inline constexpr std::array<ChannelId, 16> kCandidateChannels = {
    ChannelId::R,      ChannelId::G,      ChannelId::B,      ChannelId::H,
    ChannelId::S,      ChannelId::V,      ChannelId::Y,      ChannelId::I,
    ChannelId::Q,      ChannelId::LStar,  ChannelId::AStar,  ChannelId::BStar,
    ChannelId::ROverB, ChannelId::RMinusB, ChannelId::NormBR, ChannelId::Chroma,
};

}  // namespace nightseg
