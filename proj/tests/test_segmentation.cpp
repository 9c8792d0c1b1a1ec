#include <doctest.h>

#include <algorithm>
#include <numeric>
#include <random>
#include <vector>

#include "nightseg/errors.hpp"
#include "nightseg/segmentation.hpp"
#include "oracles.hpp"
#include "synthetic.hpp"

using namespace nightseg;

TEST_CASE("quantize replaces values by the superpixel mean") {
  const ChannelMap cmap(3, 1, {1.0, 2.0, 3.0}, ChannelId::Gray);
  const SuperpixelLabeling sp(3, 1, {0, 0, 0}, 1);
  const IndexedMap imap = quantize(cmap, sp);
  CHECK(imap.superpixel_means == std::vector<double>{2.0});
  CHECK(imap.values == std::vector<double>{2.0, 2.0, 2.0});
}

TEST_CASE("quantize keeps constant maps unchanged") {
  const ChannelMap cmap = synth::constant_map(6, 4, 3.5);
  SlicParams params;
  params.target_count = 4;
  const SuperpixelLabeling sp = slic_oversegment(cmap, params);
  const IndexedMap imap = quantize(cmap, sp);
  for (double v : imap.values) CHECK(v == 3.5);
}

TEST_CASE("quantize two superpixels, hand-computed means") {
  const ChannelMap cmap(4, 1, {0.0, 0.0, 10.0, 20.0}, ChannelId::Gray);
  const SuperpixelLabeling sp(4, 1, {0, 0, 1, 1}, 2);
  const IndexedMap imap = quantize(cmap, sp);
  CHECK(imap.values == std::vector<double>{0.0, 0.0, 15.0, 15.0});
}

TEST_CASE("quantize is a projection and preserves the image mean") {
  const ChannelMap cmap = synth::smooth_noise_map(64, 48, 9);
  SlicParams params;
  params.target_count = 12;
  const SuperpixelLabeling sp = slic_oversegment(cmap, params);
  const IndexedMap once = quantize(cmap, sp);
  const ChannelMap quantized(once.width, once.height, once.values,
                             cmap.channel());
  const IndexedMap twice = quantize(quantized, sp);
  for (std::size_t i = 0; i < once.values.size(); ++i) {
    CHECK(once.values[i] == doctest::Approx(twice.values[i]).epsilon(1e-12));
  }

  const double mean_before =
      std::accumulate(cmap.values().begin(), cmap.values().end(), 0.0) /
      cmap.values().size();
  const double mean_after =
      std::accumulate(once.values.begin(), once.values.end(), 0.0) /
      once.values.size();
  CHECK(mean_after == doctest::Approx(mean_before).epsilon(1e-6));
}

TEST_CASE("quantize checks dimensions") {
  const ChannelMap cmap = synth::constant_map(4, 4, 0.0);
  const SuperpixelLabeling sp(2, 1, {0, 1}, 2);
  CHECK_THROWS_AS(quantize(cmap, sp), DimensionMismatch);
}

TEST_CASE("kmeans_two splits perfectly separated values") {
  const std::vector<double> values{0.0, 0.0, 10.0, 10.0};
  const std::vector<double> weights{1.0, 1.0, 1.0, 1.0};
  const TwoClusterResult r = kmeans_two(values, weights);
  CHECK(r.center_sky == 0.0);
  CHECK(r.center_cloud == 10.0);
  CHECK(r.assignment == std::vector<std::uint8_t>{0, 0, 1, 1});
}

TEST_CASE("kmeans_two finds the optimal split of {1,2,8,9}") {
  const std::vector<double> values{1.0, 2.0, 8.0, 9.0};
  const std::vector<double> weights{1.0, 1.0, 1.0, 1.0};
  const TwoClusterResult r = kmeans_two(values, weights);
  CHECK(r.center_sky == doctest::Approx(1.5));
  CHECK(r.center_cloud == doctest::Approx(8.5));
}

TEST_CASE("kmeans_two rejects constant input") {
  const std::vector<double> values{5.0, 5.0, 5.0};
  const std::vector<double> weights{1.0, 1.0, 1.0};
  CHECK_THROWS_AS(kmeans_two(values, weights), DegenerateInput);
}

TEST_CASE("kmeans_two validates shapes and weights") {
  const std::vector<double> one{1.0};
  const std::vector<double> two{1.0, 2.0};
  const std::vector<double> bad_weight{1.0, 0.0};
  CHECK_THROWS_AS(kmeans_two(one, one), InvalidParams);
  CHECK_THROWS_AS(kmeans_two(two, one), DimensionMismatch);
  CHECK_THROWS_AS(kmeans_two(two, bad_weight), InvalidParams);
}

TEST_CASE("kmeans_two weighted split matches intuition") {
  // heavy weight drags the sky center toward 0
  const std::vector<double> values{0.0, 1.0, 10.0};
  const std::vector<double> weights{10.0, 1.0, 1.0};
  const TwoClusterResult r = kmeans_two(values, weights);
  CHECK(r.assignment == std::vector<std::uint8_t>{0, 0, 1});
  CHECK(r.center_sky == doctest::Approx(1.0 / 11.0));
  CHECK(r.center_cloud == doctest::Approx(10.0));
}

TEST_CASE("kmeans_two matches the exhaustive optimum on random instances") {
  std::mt19937 rng(123);
  std::uniform_int_distribution<int> count(2, 12);
  std::uniform_real_distribution<double> value(-100.0, 100.0);
  std::uniform_real_distribution<double> weight(0.1, 50.0);
  for (int trial = 0; trial < 300; ++trial) {
    const int n = count(rng);
    std::vector<double> values(n), weights(n);
    for (int i = 0; i < n; ++i) {
      values[i] = value(rng);
      weights[i] = weight(rng);
    }
    if (*std::max_element(values.begin(), values.end()) -
            *std::min_element(values.begin(), values.end()) <
        1e-12) {
      continue;
    }
    const TwoClusterResult r = kmeans_two(values, weights);
    const double sse = oracle::weighted_sse(values, weights, r.assignment);
    const double best = oracle::exhaustive_two_cluster_sse(values, weights);
    CHECK(sse <= best * (1.0 + 1e-9) + 1e-9);
  }
}

TEST_CASE("segment separates blue and red halves pixel-exactly") {
  const RGBImage img = synth::blue_red_halves(64, 64);
  SlicParams params;
  params.target_count = 4;
  const CloudMask mask = segment(img, ChannelId::RMinusB, params);
  for (int y = 0; y < 64; ++y) {
    for (int x = 0; x < 64; ++x) {
      CHECK(mask.at(x, y) == (x < 32 ? 0 : 1));
    }
  }
}

TEST_CASE("segment maps an all-black image to all sky") {
  const RGBImage img = synth::solid_image(32, 32, {0, 0, 0});
  SlicParams params;
  params.target_count = 9;
  SegmentInfo info;
  const CloudMask mask = segment(img, ChannelId::RMinusB, params, true, &info);
  CHECK(mask.cloud_count() == 0);
  CHECK(info.degenerate);
}

TEST_CASE("relabeling superpixels does not change the mask") {
  const RGBImage img = synth::blue_red_halves(40, 40);
  const ChannelMap cmap = extract_channel(img, ChannelId::RMinusB);
  SlicParams params;
  params.target_count = 8;
  const SuperpixelLabeling sp = slic_oversegment(cmap, params);
  const CloudMask base = classify_superpixels(cmap, sp);

  // reverse the label ids
  std::vector<std::int32_t> permuted(sp.labels().begin(), sp.labels().end());
  for (auto& l : permuted) l = sp.count() - 1 - l;
  const SuperpixelLabeling reversed(sp.width(), sp.height(), permuted,
                                    sp.count());
  CHECK(classify_superpixels(cmap, reversed) == base);
}

TEST_CASE("classify_superpixels wires the weight flag into kmeans") {
  const ChannelMap cmap(6, 1, {0.0, 0.0, 0.0, 0.0, 4.0, 10.0},
                        ChannelId::Gray);
  const SuperpixelLabeling sp(6, 1, {0, 0, 0, 0, 1, 2}, 3);
  // means {0, 4, 10}, sizes {4, 1, 1}
  const std::vector<double> means{0.0, 4.0, 10.0};
  const std::vector<double> sizes{4.0, 1.0, 1.0};
  const std::vector<double> ones{1.0, 1.0, 1.0};

  const auto expand = [&](const std::vector<std::uint8_t>& per_label) {
    CloudMask expected(6, 1);
    const std::int32_t labels[6] = {0, 0, 0, 0, 1, 2};
    for (int x = 0; x < 6; ++x) expected.set(x, 0, per_label[labels[x]]);
    return expected;
  };
  CHECK(classify_superpixels(cmap, sp, true) ==
        expand(kmeans_two(means, sizes).assignment));
  CHECK(classify_superpixels(cmap, sp, false) ==
        expand(kmeans_two(means, ones).assignment));
  // the weights do reach the centers
  CHECK(kmeans_two(means, sizes).center_sky !=
        kmeans_two(means, ones).center_sky);
}

TEST_CASE("otsu splits a bimodal map exactly between the modes") {
  std::vector<RGB8> pixels;
  for (int i = 0; i < 50; ++i) pixels.push_back({0, 0, 200});   // R-B = -200
  for (int i = 0; i < 50; ++i) pixels.push_back({200, 0, 0});   // R-B = +200
  const RGBImage img(10, 10, pixels);
  const CloudMask mask = segment_otsu_rb(img);
  for (int p = 0; p < 100; ++p) {
    CHECK(mask.at(p % 10, p / 10) == (p < 50 ? 0 : 1));
  }
}

TEST_CASE("otsu matches the brute-force variance maximizer on histograms") {
  std::mt19937 rng(321);
  std::uniform_int_distribution<int> count(0, 1000);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<std::int64_t> hist(256, 0);
    for (auto& c : hist) c = count(rng);
    const OtsuSplit split = otsu_split(hist, 0.0, 255.0);
    CHECK(split.cut_bin == oracle::otsu_bruteforce_cut(hist));
  }
}

TEST_CASE("otsu on an image equals the histogram oracle") {
  std::mt19937 rng(77);
  std::uniform_int_distribution<int> byte(0, 255);
  std::vector<RGB8> pixels(40 * 40);
  for (auto& px : pixels) {
    px = {static_cast<std::uint8_t>(byte(rng)), 0,
          static_cast<std::uint8_t>(byte(rng))};
  }
  const RGBImage img(40, 40, pixels);
  const ChannelMap cmap = extract_channel(img, ChannelId::RMinusB);
  const auto [lo, hi] = cmap.value_range();

  std::vector<std::int64_t> hist(256, 0);
  for (double v : cmap.values()) {
    const int bin = std::min(255, static_cast<int>((v - lo) * 256.0 / (hi - lo)));
    ++hist[bin];
  }
  const int cut = oracle::otsu_bruteforce_cut(hist);
  const CloudMask mask = segment_otsu_rb(img);
  for (int y = 0; y < 40; ++y) {
    for (int x = 0; x < 40; ++x) {
      const int bin =
          std::min(255, static_cast<int>((cmap.at(x, y) - lo) * 256.0 / (hi - lo)));
      CHECK(mask.at(x, y) == (bin >= cut ? 1 : 0));
    }
  }
}

TEST_CASE("otsu rejects constant images") {
  CHECK_THROWS_AS(segment_otsu_rb(synth::solid_image(8, 8, {100, 3, 100})),
                  DegenerateInput);
}

TEST_CASE("fixed-gray thresholds behave at the extremes") {
  const RGBImage img = synth::blue_red_halves(10, 10);
  CHECK(segment_fixed_gray(img, 0.0).cloud_count() == 100);

  const RGBImage dim = synth::solid_image(10, 10, {200, 200, 200});
  CHECK(segment_fixed_gray(dim, 255.0).cloud_count() == 0);
}

TEST_CASE("fixed-gray applies luminance >= threshold") {
  std::vector<RGB8> pixels;
  for (int v = 0; v < 256; ++v) {
    const auto g = static_cast<std::uint8_t>(v);
    pixels.push_back({g, g, g});
  }
  const RGBImage gradient(256, 1, pixels);
  const CloudMask mask = segment_fixed_gray(gradient, 128.0);
  for (int x = 0; x < 256; ++x) {
    CHECK(mask.at(x, 0) == (x >= 128 ? 1 : 0));
  }
}

TEST_CASE("raising the fixed-gray threshold never adds cloud") {
  std::mt19937 rng(55);
  std::uniform_int_distribution<int> byte(0, 255);
  std::vector<RGB8> pixels(24 * 24);
  for (auto& px : pixels) {
    px = {static_cast<std::uint8_t>(byte(rng)),
          static_cast<std::uint8_t>(byte(rng)),
          static_cast<std::uint8_t>(byte(rng))};
  }
  const RGBImage img(24, 24, pixels);
  for (double lo = 0.0; lo < 250.0; lo += 50.0) {
    const CloudMask low = segment_fixed_gray(img, lo);
    const CloudMask high = segment_fixed_gray(img, lo + 50.0);
    for (int y = 0; y < 24; ++y) {
      for (int x = 0; x < 24; ++x) {
        if (high.at(x, y) == 1) CHECK(low.at(x, y) == 1);
      }
    }
  }
}

TEST_CASE("fixed-gray validates the threshold range") {
  const RGBImage img = synth::solid_image(2, 2, {0, 0, 0});
  CHECK_THROWS_AS(segment_fixed_gray(img, -1.0), InvalidParams);
  CHECK_THROWS_AS(segment_fixed_gray(img, 255.5), InvalidParams);
}
