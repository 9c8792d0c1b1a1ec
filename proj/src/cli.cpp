#include "nightseg/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cctype>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <numbers>
#include <optional>
#include <thread>

#include "nightseg/colorspace.hpp"
#include "nightseg/dataset.hpp"
#include "nightseg/errors.hpp"
#include "nightseg/evaluation.hpp"
#include "nightseg/image_io.hpp"
#include "nightseg/segmentation.hpp"
#include "nightseg/superpixel.hpp"
#include "nightseg/undistort.hpp"
#include "nightseg/version.hpp"
#include "parallel.hpp"

namespace nightseg::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitPartial = 1;
constexpr int kExitFatal = 2;

std::string utc_timestamp() {
  const std::time_t now =
      std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6f", v);
  return buf;
}

void write_manifest(const fs::path& path, const std::string& command,
                    json config, json inputs, json outputs, json failures) {
  json manifest;
  manifest["tool"] = kToolName;
  manifest["version"] = kVersion;
  manifest["command"] = command;
  manifest["created_utc"] = utc_timestamp();
  manifest["config"] = std::move(config);
  manifest["inputs"] = std::move(inputs);
  manifest["outputs"] = std::move(outputs);
  manifest["failures"] = std::move(failures);
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path.string());
  out << manifest.dump(2) << "\n";
}

bool is_image_file(const fs::path& p) {
  std::string ext = p.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  return ext == ".png" || ext == ".jpg" || ext == ".jpeg";
}

std::vector<fs::path> list_images(const fs::path& dir) {
  if (!fs::is_directory(dir)) {
    throw FileNotFound("no such directory: " + dir.string());
  }
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.is_regular_file() && is_image_file(entry.path())) {
      files.push_back(entry.path());
    }
  }
  std::sort(files.begin(), files.end());
  return files;
}

int default_jobs() {
  const unsigned hc = std::thread::hardware_concurrency();
  return hc == 0 ? 1 : static_cast<int>(hc);
}

// Options shared by the segmentation subcommands.
struct SegmentConfig {
  std::string channel = "r-minus-b";
  int superpixels = 100;
  double compactness = 10.0;
  int max_iterations = 10;
  std::string method = "proposed";
  double threshold = 25.0;
  bool unweighted_kmeans = false;
};

void add_segment_options(CLI::App& cmd, SegmentConfig& cfg) {
  cmd.add_option("--channel", cfg.channel,
                 "Color channel (r g b h s v y i q lstar astar bstar "
                 "r-over-b r-minus-b norm-bry chroma gray)")
      ->default_val(cfg.channel);
  cmd.add_option("--superpixels", cfg.superpixels,
                 "Number of superpixels P")
      ->default_val(cfg.superpixels)
      ->check(CLI::PositiveNumber);
  cmd.add_option("--compactness", cfg.compactness,
                 "SLIC spatial weight m")
      ->default_val(cfg.compactness)
      ->check(CLI::PositiveNumber);
  cmd.add_option("--max-iterations", cfg.max_iterations,
                 "SLIC iteration cap")
      ->default_val(cfg.max_iterations)
      ->check(CLI::PositiveNumber);
  cmd.add_option("--method", cfg.method, "Segmentation method")
      ->default_val(cfg.method)
      ->check(CLI::IsMember({"proposed", "otsu-rb", "fixed-gray"}));
  cmd.add_option("--threshold", cfg.threshold,
                 "Gray threshold for --method fixed-gray; must be given "
                 "explicitly for that method")
      ->check(CLI::Range(0.0, 255.0));
  cmd.add_flag("--unweighted-kmeans", cfg.unweighted_kmeans,
               "Cluster superpixel means without pixel-count weights");
}

json segment_config_json(const SegmentConfig& cfg, int jobs) {
  json j;
  j["channel"] = cfg.channel;
  j["superpixels"] = cfg.superpixels;
  j["compactness"] = cfg.compactness;
  j["max_iterations"] = cfg.max_iterations;
  j["method"] = cfg.method;
  if (cfg.method == "fixed-gray") j["threshold"] = cfg.threshold;
  j["unweighted_kmeans"] = cfg.unweighted_kmeans;
  j["jobs"] = jobs;
  return j;
}

ChannelId parse_channel_or_throw(const std::string& token) {
  const auto id = parse_channel_token(token);
  if (!id) throw InvalidParams("unknown channel token: " + token);
  return *id;
}

// Validates flag combinations that CLI11 cannot express.
void check_segment_config(const SegmentConfig& cfg, const CLI::App& cmd) {
  parse_channel_or_throw(cfg.channel);
  if (cfg.method == "fixed-gray" && cmd.count("--threshold") == 0) {
    throw InvalidParams(
        "--method fixed-gray needs an explicit --threshold (no published "
        "value fits every camera)");
  }
}

CloudMask run_segmentation(const RGBImage& img, const SegmentConfig& cfg,
                           const std::string& name) {
  if (cfg.method == "otsu-rb") {
    try {
      return segment_otsu_rb(img);
    } catch (const DegenerateInput&) {
      std::cerr << name << ": constant R-B map, writing all-sky mask\n";
      return CloudMask(img.width(), img.height());
    }
  }
  if (cfg.method == "fixed-gray") {
    return segment_fixed_gray(img, cfg.threshold);
  }
  SlicParams params;
  params.target_count = static_cast<int>(
      std::min<std::int64_t>(cfg.superpixels, img.pixel_count()));
  params.compactness = cfg.compactness;
  params.max_iterations = cfg.max_iterations;
  SegmentInfo info;
  CloudMask mask = segment(img, parse_channel_or_throw(cfg.channel), params,
                           !cfg.unweighted_kmeans, &info);
  if (info.degenerate) {
    std::cerr << name << ": degenerate channel, mask is all sky\n";
  }
  return mask;
}

int cmd_segment(const SegmentConfig& cfg, const fs::path& input,
                const fs::path& output) {
  const RGBImage img = load_image(input);
  const CloudMask mask = run_segmentation(img, cfg, input.filename().string());
  save_mask(mask, output);
  return kExitOk;
}

int cmd_batch_segment(const SegmentConfig& cfg, const fs::path& images_dir,
                      const fs::path& out_dir, int jobs) {
  const std::vector<fs::path> files = list_images(images_dir);
  if (files.empty()) {
    throw EmptyDataset("no images under " + images_dir.string());
  }
  fs::create_directories(out_dir);

  struct ItemResult {
    std::string error;  // empty on success
    fs::path output;
  };
  std::vector<ItemResult> results(files.size());
  detail::parallel_for(files.size(), jobs, [&](std::size_t i) {
    try {
      const RGBImage img = load_image(files[i]);
      const CloudMask mask =
          run_segmentation(img, cfg, files[i].filename().string());
      const fs::path out = out_dir / (files[i].stem().string() + ".png");
      save_mask(mask, out);
      results[i].output = out;
    } catch (const Error& e) {
      results[i].error = e.what();
    }
  });

  json inputs = json::array();
  json outputs = json::array();
  json failures = json::array();
  int ok = 0;
  for (std::size_t i = 0; i < files.size(); ++i) {
    json item;
    item["path"] = files[i].string();
    item["status"] = results[i].error.empty() ? "ok" : "failed";
    if (results[i].error.empty()) {
      ++ok;
      outputs.push_back(results[i].output.string());
    } else {
      item["error"] = results[i].error;
      failures.push_back({{"path", files[i].string()},
                          {"error", results[i].error}});
      std::cerr << files[i].filename().string() << ": " << results[i].error
                << "\n";
    }
    inputs.push_back(std::move(item));
  }
  write_manifest(out_dir / "manifest.json", "batch-segment",
                 segment_config_json(cfg, jobs), inputs, outputs, failures);
  if (ok == 0) {
    std::cerr << "batch-segment: all " << files.size() << " items failed\n";
    return kExitFatal;
  }
  return ok == static_cast<int>(files.size()) ? kExitOk : kExitPartial;
}

int cmd_evaluate(const fs::path& pred_dir, const fs::path& gt_dir,
                 const fs::path& out_csv) {
  const DatasetEvalResult result = evaluate_dataset(pred_dir, gt_dir);

  std::ofstream out(out_csv);
  if (!out) throw IoError("cannot write " + out_csv.string());
  out << "image,tp,tn,fp,fn,precision,recall,fscore,error\n";
  const auto row = [&](const std::string& name, const MetricsReport& r) {
    out << name << "," << r.confusion.tp << "," << r.confusion.tn << ","
        << r.confusion.fp << "," << r.confusion.fn << ","
        << format_double(r.precision) << "," << format_double(r.recall) << ","
        << format_double(r.fscore) << "," << format_double(r.error_rate)
        << "\n";
  };
  for (const auto& image_row : result.rows) {
    row(image_row.name, image_row.report);
  }
  row("AGGREGATE", result.aggregate);
  out.close();

  json inputs = json::array();
  for (const auto& image_row : result.rows) inputs.push_back(image_row.name);
  json failures = json::array();
  for (const auto& [stem, reason] : result.failures) {
    failures.push_back({{"image", stem}, {"error", reason}});
    std::cerr << stem << ": " << reason << "\n";
  }
  for (const auto& stem : result.missing_gt) {
    failures.push_back({{"image", stem}, {"error", "missing ground truth"}});
    std::cerr << stem << ": missing ground truth\n";
  }
  for (const auto& stem : result.missing_pred) {
    failures.push_back({{"image", stem}, {"error", "missing prediction"}});
    std::cerr << stem << ": missing prediction\n";
  }
  json config;
  config["pred"] = pred_dir.string();
  config["gt"] = gt_dir.string();
  write_manifest(out_csv.string() + ".manifest.json", "evaluate", config,
                 inputs, json::array({out_csv.string()}), failures);

  std::cout << "images: " << result.rows.size()
            << "  precision: " << format_double(result.aggregate.precision)
            << "  recall: " << format_double(result.aggregate.recall)
            << "  fscore: " << format_double(result.aggregate.fscore)
            << "  error: " << format_double(result.aggregate.error_rate)
            << "\n";
  return failures.empty() ? kExitOk : kExitPartial;
}

int cmd_rank_channels(const fs::path& images_dir, const fs::path& gt_dir,
                      const fs::path& out_csv, int jobs) {
  const DatasetScan scan = load_dataset(images_dir, gt_dir);
  std::vector<std::pair<RGBImage, CloudMask>> dataset;
  dataset.reserve(scan.entries.size());
  for (const DatasetEntry& entry : scan.entries) {
    dataset.emplace_back(load_image(entry.image_path),
                         load_mask(entry.mask_path));
  }
  const std::vector<ChannelScore> scores = rank_channels(dataset, jobs);

  std::ofstream out(out_csv);
  if (!out) throw IoError("cannot write " + out_csv.string());
  out << "channel,mean_area,rank\n";
  for (std::size_t i = 0; i < scores.size(); ++i) {
    out << channel_token(scores[i].channel) << ","
        << format_double(scores[i].mean_area) << "," << i + 1 << "\n";
  }
  out.close();

  json inputs = json::array();
  for (const DatasetEntry& entry : scan.entries) {
    inputs.push_back(entry.image_path.string());
  }
  json failures = json::array();
  for (const auto& [stem, reason] : scan.validation.rejected) {
    failures.push_back({{"image", stem}, {"error", reason}});
    std::cerr << stem << ": " << reason << "\n";
  }
  const int skipped =
      static_cast<int>(scan.entries.size()) - scores.front().images_used;
  json config;
  config["images"] = images_dir.string();
  config["gt"] = gt_dir.string();
  config["jobs"] = jobs;
  config["images_used"] = scores.front().images_used;
  config["single_class_skipped"] = skipped;
  write_manifest(out_csv.string() + ".manifest.json", "rank-channels", config,
                 inputs, json::array({out_csv.string()}), failures);
  if (skipped > 0) {
    std::cerr << skipped << " image(s) skipped: single-class ground truth\n";
  }
  std::cout << "best channel: " << channel_token(scores.front().channel)
            << " (mean area " << format_double(scores.front().mean_area)
            << ")\n";
  return failures.empty() && skipped == 0 ? kExitOk : kExitPartial;
}

int cmd_dataset_report(const fs::path& images_dir, const fs::path& masks_dir,
                       const fs::path& out_csv) {
  const DatasetScan scan = load_dataset(images_dir, masks_dir);
  const CoverageHistogram hist = coverage_histogram(scan.entries);

  std::ofstream out(out_csv);
  if (!out) throw IoError("cannot write " + out_csv.string());
  out << "bin_low_pct,bin_high_pct,count\n";
  for (int b = 0; b < 10; ++b) {
    out << b * 10 << "," << (b + 1) * 10 << "," << hist.counts[b] << "\n";
  }
  out << "total,," << hist.total << "\n";
  out.close();

  json inputs = json::array();
  for (const DatasetEntry& entry : scan.entries) {
    inputs.push_back(entry.image_path.string());
  }
  json failures = json::array();
  const auto report_issue = [&](const std::string& stem,
                                const std::string& reason) {
    failures.push_back({{"image", stem}, {"error", reason}});
    std::cerr << stem << ": " << reason << "\n";
  };
  for (const auto& [stem, reason] : scan.validation.rejected) {
    report_issue(stem, reason);
  }
  for (const auto& stem : scan.validation.images_without_mask) {
    report_issue(stem, "missing mask");
  }
  for (const auto& stem : scan.validation.masks_without_image) {
    report_issue(stem, "missing image");
  }
  json config;
  config["images"] = images_dir.string();
  config["masks"] = masks_dir.string();
  write_manifest(out_csv.string() + ".manifest.json", "dataset-report", config,
                 inputs, json::array({out_csv.string()}), failures);
  return failures.empty() ? kExitOk : kExitPartial;
}

int cmd_undistort(const fs::path& input, const fs::path& output,
                  const std::vector<double>& center, double radius,
                  const std::string& model_name, double azimuth_deg,
                  double elevation_deg, int size, double altitude,
                  double half_extent) {
  const RGBImage img = load_image(input);
  FisheyeModel model;
  model.cx = center[0];
  model.cy = center[1];
  model.radius = radius;
  model.projection = model_name == "equisolid" ? FisheyeProjection::Equisolid
                                               : FisheyeProjection::Equidistant;
  VirtualCamera cam;
  const double az = azimuth_deg * std::numbers::pi / 180.0;
  const double el = elevation_deg * std::numbers::pi / 180.0;
  cam.direction = {std::cos(el) * std::cos(az), std::cos(el) * std::sin(az),
                   std::sin(el)};
  cam.plane_altitude = altitude;
  cam.out_size = size;
  cam.half_extent = half_extent;

  double out_of_field = 0.0;
  const RGBImage result = undistort(img, model, cam, &out_of_field);
  save_image(result, output);
  if (out_of_field > 0.0) {
    std::cerr << "out-of-field fraction: " << format_double(out_of_field)
              << "\n";
  }
  return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args) {
  CLI::App app{"Threshold-free nighttime sky/cloud image segmentation"};
  app.set_version_flag("--version",
                       std::string(kToolName) + " " + std::string(kVersion));
  app.set_config("--config", "", "Read options from a TOML/INI file");
  app.require_subcommand(1);

  int jobs = default_jobs();
  app.add_option("-j,--jobs", jobs, "Worker threads for batch subcommands")
      ->envname("NIGHTSEG_JOBS")
      ->check(CLI::PositiveNumber);

  // segment
  SegmentConfig seg_cfg;
  fs::path seg_input, seg_output;
  CLI::App* segment_cmd =
      app.add_subcommand("segment", "Segment one image into a cloud mask");
  segment_cmd->fallthrough();
  segment_cmd->add_option("--input", seg_input, "Input image (PNG/JPEG)")
      ->required();
  segment_cmd->add_option("--out", seg_output, "Output mask PNG")->required();
  add_segment_options(*segment_cmd, seg_cfg);

  // batch-segment
  SegmentConfig batch_cfg;
  fs::path batch_images, batch_out;
  CLI::App* batch_cmd = app.add_subcommand(
      "batch-segment", "Segment every image in a directory");
  batch_cmd->fallthrough();
  batch_cmd->add_option("--images", batch_images, "Input directory")
      ->required();
  batch_cmd->add_option("--out", batch_out, "Output directory for masks")
      ->required();
  add_segment_options(*batch_cmd, batch_cfg);

  // evaluate
  fs::path eval_pred, eval_gt, eval_out;
  CLI::App* eval_cmd = app.add_subcommand(
      "evaluate", "Score predicted masks against ground truth");
  eval_cmd->fallthrough();
  eval_cmd->add_option("--pred", eval_pred, "Directory of predicted masks")
      ->required();
  eval_cmd->add_option("--gt", eval_gt, "Directory of ground-truth masks")
      ->required();
  eval_cmd->add_option("--out", eval_out, "Output CSV report")->required();

  // rank-channels
  fs::path rank_images, rank_gt, rank_out;
  CLI::App* rank_cmd = app.add_subcommand(
      "rank-channels",
      "Rank the 16 color channels by mean ROC area over a dataset");
  rank_cmd->fallthrough();
  rank_cmd->add_option("--images", rank_images, "Directory of images")
      ->required();
  rank_cmd->add_option("--gt", rank_gt, "Directory of ground-truth masks")
      ->required();
  rank_cmd->add_option("--out", rank_out, "Output CSV ranking")->required();

  // undistort
  fs::path und_input, und_output;
  std::vector<double> und_center;
  double und_radius = 0.0;
  std::string und_model = "equidistant";
  double und_azimuth = 0.0, und_elevation = 90.0;
  int und_size = 500;
  double und_altitude = 150.0, und_half_extent = 150.0;
  CLI::App* und_cmd = app.add_subcommand(
      "undistort", "Rectify a fisheye capture into a planar view");
  und_cmd->fallthrough();
  und_cmd->add_option("--input", und_input, "Fisheye image")->required();
  und_cmd->add_option("--out", und_output, "Output image")->required();
  und_cmd->add_option("--center", und_center, "Projection center cx,cy")
      ->required()
      ->delimiter(',')
      ->expected(2);
  und_cmd->add_option("--radius", und_radius,
                      "Radius of the 90-degree circle in pixels")
      ->required()
      ->check(CLI::PositiveNumber);
  und_cmd->add_option("--model", und_model, "Fisheye projection")
      ->default_val(und_model)
      ->check(CLI::IsMember({"equidistant", "equisolid"}));
  und_cmd->add_option("--azimuth", und_azimuth, "View azimuth in degrees")
      ->default_val(und_azimuth);
  und_cmd->add_option("--elevation", und_elevation,
                      "View elevation in degrees")
      ->default_val(und_elevation);
  und_cmd->add_option("--size", und_size, "Output image size")
      ->default_val(und_size)
      ->check(CLI::Range(2, 1 << 14));
  und_cmd->add_option("--altitude", und_altitude,
                      "Virtual plane altitude in meters")
      ->default_val(und_altitude)
      ->check(CLI::PositiveNumber);
  und_cmd->add_option("--half-extent", und_half_extent,
                      "Half-width of the plane patch in meters")
      ->default_val(und_half_extent)
      ->check(CLI::PositiveNumber);

  // dataset-report
  fs::path ds_images, ds_masks, ds_out;
  CLI::App* ds_cmd = app.add_subcommand(
      "dataset-report", "Validate a dataset and report coverage statistics");
  ds_cmd->fallthrough();
  ds_cmd->add_option("--images", ds_images, "Directory of images")->required();
  ds_cmd->add_option("--masks", ds_masks, "Directory of ground-truth masks")
      ->required();
  ds_cmd->add_option("--out", ds_out, "Output CSV")->required();

  std::vector<const char*> argv;
  argv.reserve(args.size() + 1);
  argv.push_back("nightseg");
  for (const std::string& a : args) argv.push_back(a.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitFatal;
  }

  try {
    if (segment_cmd->parsed()) {
      check_segment_config(seg_cfg, *segment_cmd);
      return cmd_segment(seg_cfg, seg_input, seg_output);
    }
    if (batch_cmd->parsed()) {
      check_segment_config(batch_cfg, *batch_cmd);
      return cmd_batch_segment(batch_cfg, batch_images, batch_out, jobs);
    }
    if (eval_cmd->parsed()) {
      return cmd_evaluate(eval_pred, eval_gt, eval_out);
    }
    if (rank_cmd->parsed()) {
      return cmd_rank_channels(rank_images, rank_gt, rank_out, jobs);
    }
    if (und_cmd->parsed()) {
      return cmd_undistort(und_input, und_output, und_center, und_radius,
                           und_model, und_azimuth, und_elevation, und_size,
                           und_altitude, und_half_extent);
    }
    if (ds_cmd->parsed()) {
      return cmd_dataset_report(ds_images, ds_masks, ds_out);
    }
  } catch (const InvalidParams& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitFatal;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitFatal;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitFatal;
  }
  return kExitFatal;  // unreachable with require_subcommand(1)
}

}  // namespace nightseg::cli
