#include <doctest.h>

#include <opencv2/core.hpp>
#include <opencv2/imgcodecs.hpp>

#include <limits>
#include <random>

#include "nightseg/errors.hpp"
#include "nightseg/image_io.hpp"
#include "testutil.hpp"

using namespace nightseg;

namespace {

void write_png(const std::filesystem::path& path, const cv::Mat& mat) {
  REQUIRE(cv::imwrite(path.string(), mat));
}

}  // namespace

TEST_CASE("load_image decodes a white 2x2 png") {
  testutil::TempDir tmp("load_white");
  write_png(tmp.file("white.png"),
            cv::Mat(2, 2, CV_8UC3, cv::Scalar(255, 255, 255)));

  const RGBImage img = load_image(tmp.file("white.png"));
  CHECK(img.width() == 2);
  CHECK(img.height() == 2);
  for (const RGB8& px : img.pixels()) {
    CHECK(px == RGB8{255, 255, 255});
  }
}

TEST_CASE("load_image keeps channel order") {
  testutil::TempDir tmp("load_order");
  cv::Mat mat(1, 2, CV_8UC3);
  mat.at<cv::Vec3b>(0, 0) = cv::Vec3b(10, 20, 30);  // BGR on disk
  mat.at<cv::Vec3b>(0, 1) = cv::Vec3b(0, 0, 255);
  write_png(tmp.file("px.png"), mat);

  const RGBImage img = load_image(tmp.file("px.png"));
  CHECK(img.at(0, 0) == RGB8{30, 20, 10});
  CHECK(img.at(1, 0) == RGB8{255, 0, 0});
}

TEST_CASE("load_image scales 16-bit sources into [0,255]") {
  testutil::TempDir tmp("load_16bit");
  write_png(tmp.file("deep.png"),
            cv::Mat(2, 2, CV_16UC3, cv::Scalar(65535, 32768, 0)));

  const RGBImage img = load_image(tmp.file("deep.png"));
  for (const RGB8& px : img.pixels()) {
    CHECK(px.b == 255);
    CHECK(px.g == 128);
    CHECK(px.r == 0);
  }
}

TEST_CASE("load_image error paths") {
  testutil::TempDir tmp("load_errors");
  CHECK_THROWS_AS(load_image(tmp.file("missing.png")), FileNotFound);

  testutil::write_text(tmp.file("fake.png"), "this is not a png");
  CHECK_THROWS_AS(load_image(tmp.file("fake.png")), CorruptImage);

  testutil::write_text(tmp.file("notes.txt"), "plain text");
  CHECK_THROWS_AS(load_image(tmp.file("notes.txt")), UnsupportedFormat);
}

TEST_CASE("load_mask binarizes at luminance 128") {
  testutil::TempDir tmp("mask_binarize");
  cv::Mat mat(1, 2, CV_8UC1);
  mat.at<std::uint8_t>(0, 0) = 0;
  mat.at<std::uint8_t>(0, 1) = 255;
  write_png(tmp.file("m.png"), mat);

  const CloudMask mask = load_mask(tmp.file("m.png"));
  CHECK(mask.at(0, 0) == 0);
  CHECK(mask.at(1, 0) == 1);
}

TEST_CASE("load_mask maps an all-white image to all cloud") {
  testutil::TempDir tmp("mask_white");
  write_png(tmp.file("w.png"), cv::Mat(3, 3, CV_8UC1, cv::Scalar(255)));
  const CloudMask mask = load_mask(tmp.file("w.png"));
  CHECK(mask.cloud_count() == 9);
}

TEST_CASE("load_mask rejects images with many mid-gray pixels") {
  testutil::TempDir tmp("mask_ambiguous");
  cv::Mat mat(10, 10, CV_8UC1, cv::Scalar(0));
  // half the pixels spread through the ambiguity band (64, 192)
  for (int i = 0; i < 50; ++i) {
    mat.at<std::uint8_t>(i / 10, i % 10) =
        static_cast<std::uint8_t>(70 + (i % 12) * 10);
  }
  write_png(tmp.file("gray.png"), mat);
  CHECK_THROWS_AS(load_mask(tmp.file("gray.png")), AmbiguousMask);
}

TEST_CASE("load_mask tolerates up to 1% ambiguous pixels") {
  testutil::TempDir tmp("mask_tolerate");
  cv::Mat mat(10, 10, CV_8UC1, cv::Scalar(255));
  mat.at<std::uint8_t>(0, 0) = 128;  // exactly 1%, not > 1%
  write_png(tmp.file("m.png"), mat);
  const CloudMask mask = load_mask(tmp.file("m.png"));
  CHECK(mask.at(0, 0) == 1);  // 128 is cloud
  CHECK(mask.cloud_count() == 100);
}

TEST_CASE("save_mask writes 0/255 grayscale png") {
  testutil::TempDir tmp("save_values");
  CloudMask mask(1, 1);
  mask.set(0, 0, 1);
  save_mask(mask, tmp.file("one.png"));

  cv::Mat raw = cv::imread(tmp.file("one.png").string(), cv::IMREAD_UNCHANGED);
  REQUIRE(!raw.empty());
  CHECK(raw.channels() == 1);
  CHECK(raw.at<std::uint8_t>(0, 0) == 255);
}

TEST_CASE("mask round-trip is exact") {
  testutil::TempDir tmp("mask_roundtrip");
  std::mt19937 rng(7);
  for (const auto& [w, h] : {std::pair{1, 1}, {7, 3}, {32, 17}}) {
    std::vector<std::uint8_t> labels(static_cast<std::size_t>(w) * h);
    for (auto& l : labels) l = rng() & 1;
    const CloudMask mask(w, h, labels);
    const auto path = tmp.file("m.png");
    save_mask(mask, path);
    CHECK(load_mask(path) == mask);
  }
}

TEST_CASE("save_mask into a missing directory raises IoError") {
  testutil::TempDir tmp("save_badpath");
  CHECK_THROWS_AS(save_mask(CloudMask(2, 2), tmp.file("no/such/dir/m.png")),
                  IoError);
}

TEST_CASE("save_image round-trips through png") {
  testutil::TempDir tmp("save_image");
  RGBImage img(2, 2);
  img.at(0, 0) = {1, 2, 3};
  img.at(1, 0) = {200, 100, 50};
  img.at(0, 1) = {0, 255, 0};
  img.at(1, 1) = {255, 255, 255};
  save_image(img, tmp.file("img.png"));
  CHECK(load_image(tmp.file("img.png")) == img);
}

TEST_CASE("raster types validate their invariants") {
  CHECK_THROWS_AS(RGBImage(0, 4), InvalidParams);
  CHECK_THROWS_AS(RGBImage(2, 2, std::vector<RGB8>(3)), InvalidParams);
  CHECK_THROWS_AS(CloudMask(2, 1, {0, 2}), InvalidParams);
  CHECK_THROWS_AS(
      ChannelMap(1, 2, {0.0, std::numeric_limits<double>::infinity()},
                 ChannelId::Gray),
      InvalidParams);
}
