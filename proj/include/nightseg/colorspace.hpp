#pragma once

#include <optional>
#include <string_view>

#include "nightseg/channel_id.hpp"
#include "nightseg/image.hpp"

namespace nightseg {

// Per-pixel color transform of an 8-bit image into a real-valued map.
//
// Channel ranges are the natural ones, not normalized globally:
//   R,G,B        pass-through in [0,255]
//   H            degrees in [0,360), 0 for achromatic pixels
//   S,V          [0,1]
//   Y,I,Q        NTSC combination of R,G,B scaled to [0,1]
//   L*,a*,b*     CIELAB, D65 white, sRGB gamma linearization
//   R/B          ratio on the raw 0..255 scale (B==0: R if R>0, else 1)
//   R-B          [-255,255]
//   (B-R)/(B+R)  [-1,1] (0 when B+R==0)
//   C            max(R,G,B)-min(R,G,B) in [0,255]
//   GRAY         0.299R+0.587G+0.114B in [0,255]
ChannelMap extract_channel(const RGBImage& img, ChannelId channel);

// CLI tokens: r g b h s v y i q lstar astar bstar r-over-b r-minus-b
// norm-bry chroma gray.
std::string_view channel_token(ChannelId channel);
std::optional<ChannelId> parse_channel_token(std::string_view token);

}  // namespace nightseg
