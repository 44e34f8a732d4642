#include <algorithm>
#include <array>
#include <atomic>
#include <cctype>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <mutex>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "bikegen/config.hpp"
#include "bikegen/dataset.hpp"
#include "bikegen/rng.hpp"
#include "bikegen/eval.hpp"
#include "bikegen/imgproc.hpp"
#include "bikegen/labels.hpp"
#include "bikegen/render.hpp"
#include "bikegen/scene_io.hpp"
#include "bikegen/viz.hpp"

namespace fs = std::filesystem;
using namespace bikegen;

namespace {

constexpr const char* kToolVersion = "0.1.0";
constexpr int kExitOk = 0;
constexpr int kExitInput = 1;
constexpr int kExitInternal = 2;

int worker_count() {
  if (const char* env = std::getenv("BIKEGEN_WORKERS")) {
    const int n = std::atoi(env);
    if (n >= 1) return std::min(n, 64);
    std::cerr << "warning: ignoring invalid BIKEGEN_WORKERS='" << env << "'\n";
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(std::min(hw, 16u));
}

/// SOURCE_DATE_EPOCH pins manifest timestamps so reruns are byte-identical.
std::time_t manifest_time() {
  if (const char* env = std::getenv("SOURCE_DATE_EPOCH")) {
    char* end = nullptr;
    const long long v = std::strtoll(env, &end, 10);
    if (end && *end == '\0' && v >= 0) return static_cast<std::time_t>(v);
  }
  return std::time(nullptr);
}

std::string iso_utc(std::time_t t) {
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::string hex64(std::uint64_t v) {
  char buf[20];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

void atomic_write_text(const fs::path& path, const std::string& text) {
  const fs::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open for writing: " + tmp.string());
    out << text;
    if (!out) throw std::runtime_error("write failed: " + tmp.string());
  }
  fs::rename(tmp, path);
}

void atomic_write_image(const Image& img, const fs::path& path, const RenderConfig& rc) {
  const fs::path tmp = path.string() + ".tmp";
  write_image(img, tmp.string(), rc);
  fs::rename(tmp, path);
}

struct RunRecorder {
  std::time_t started = manifest_time();
  nlohmann::ordered_json extra;

  void write(const fs::path& dir, const std::string& command) {
    nlohmann::ordered_json j;
    j["schema"] = "bikegen-run/1";
    j["tool"] = "bikegen";
    j["version"] = kToolVersion;
    j["command"] = command;
    for (auto& [k, v] : extra.items()) j[k] = v;
    j["started_at"] = iso_utc(started);
    j["finished_at"] = iso_utc(manifest_time());
    atomic_write_text(dir / "run_manifest.json", j.dump(2) + "\n");
  }
};

/// Runs fn(i) for i in [0, n) on the worker pool. Errors are collected as
/// (message, is_internal) pairs; item order never affects outputs because
/// every item writes only its own files.
std::vector<std::pair<std::string, bool>> parallel_items(
    std::size_t n, const std::function<void(std::size_t)>& fn) {
  std::vector<std::pair<std::string, bool>> errors;
  std::mutex err_mu;
  std::atomic<std::size_t> next{0};
  const int workers = std::min<std::size_t>(worker_count(), n == 0 ? 1 : n);

  auto body = [&] {
    while (true) {
      const std::size_t i = next.fetch_add(1);
      if (i >= n) return;
      try {
        fn(i);
      } catch (const std::logic_error& e) {
        std::lock_guard<std::mutex> lock(err_mu);
        errors.emplace_back(e.what(), true);
      } catch (const std::exception& e) {
        std::lock_guard<std::mutex> lock(err_mu);
        errors.emplace_back(e.what(), false);
      }
    }
  };

  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(workers));
  for (int w = 0; w < workers; ++w) pool.emplace_back(body);
  for (std::thread& t : pool) t.join();
  return errors;
}

int report_errors(const std::vector<std::pair<std::string, bool>>& errors,
                  const char* what) {
  if (errors.empty()) return kExitOk;
  bool internal = false;
  std::size_t shown = 0;
  for (const auto& [msg, is_internal] : errors) {
    internal = internal || is_internal;
    if (shown++ < 10) std::cerr << "error: " << what << ": " << msg << "\n";
  }
  if (errors.size() > 10) {
    std::cerr << "error: ... and " << errors.size() - 10 << " more\n";
  }
  return internal ? kExitInternal : kExitInput;
}

GenConfig resolve_config(const std::string& config_path, const std::string& preset) {
  if (!config_path.empty()) return load_config(config_path);
  if (!preset.empty()) return preset_config(preset);
  return default_config();
}

std::vector<fs::path> list_files(const fs::path& dir,
                                 const std::vector<std::string>& exts) {
  if (!fs::is_directory(dir)) {
    throw std::runtime_error("not a directory: " + dir.string());
  }
  std::vector<fs::path> out;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (!entry.is_regular_file()) continue;
    std::string ext = entry.path().extension().string();
    for (char& c : ext) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    for (const std::string& want : exts) {
      if (ext == want) {
        out.push_back(entry.path());
        break;
      }
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

// ---------------------------------------------------------------- generate

struct GenerateArgs {
  std::string config_path;
  std::string preset;
  std::string out_dir;
  std::string format = "png";
  std::size_t n = 10;
  std::uint64_t seed = 0;
};

int cmd_generate(const GenerateArgs& args) {
  const GenConfig cfg = resolve_config(args.config_path, args.preset);
  const DatasetManifest manifest = assemble_dataset(cfg, args.n, args.seed, args.format);

  const fs::path out(args.out_dir);
  fs::create_directories(out / "images");
  fs::create_directories(out / "labels");
  fs::create_directories(out / "scenes");

  RenderConfig rc;
  rc.width = cfg.image_width;
  rc.height = cfg.image_height;
  rc.format = args.format == "jpg" ? OutputFormat::Jpeg : OutputFormat::Png;
  rc.ground_palette = cfg.ground_palette;
  rc.background_palette = cfg.background_palette;

  RunRecorder run;
  std::mutex created_mu;
  std::vector<fs::path> created;
  const auto track = [&](const fs::path& p) {
    std::lock_guard<std::mutex> lock(created_mu);
    created.push_back(p);
  };

  const auto errors = parallel_items(manifest.items.size(), [&](std::size_t i) {
    const DatasetItem& item = manifest.items[i];
    const Scene scene = sample_scene(cfg, item.seed);
    const CameraRig rig = sample_camera(cfg, scene, item.seed);
    const auto records =
        annotate_scene(scene, rig, cfg.image_width, cfg.image_height, cfg.thresholds);
    const Image img = rasterize(scene, rig, rc);

    const fs::path img_path = out / item.image_path;
    atomic_write_image(img, img_path, rc);
    track(img_path);
    const fs::path label_path = out / item.label_path;
    atomic_write_text(label_path, format_truth(records));
    track(label_path);
    const fs::path scene_path = out / item.scene_path;
    atomic_write_text(scene_path, scene_to_json(scene));
    track(scene_path);
  });

  if (!errors.empty()) {
    // No silent partial datasets: remove everything this run created.
    for (const fs::path& p : created) {
      std::error_code ec;
      fs::remove(p, ec);
    }
    return report_errors(errors, "generate");
  }

  atomic_write_text(out / "manifest.jsonl", format_manifest(manifest));
  atomic_write_text(out / "config_resolved.txt", config_to_text(cfg));

  const std::size_t n_train = train_count(args.n, cfg.split_ratio);
  run.extra["config_hash"] = hex64(config_hash(cfg));
  run.extra["master_seed"] = args.seed;
  run.extra["n_images"] = args.n;
  run.extra["n_train"] = n_train;
  run.extra["n_test"] = args.n - n_train;
  run.extra["image_format"] = args.format;
  run.extra["outputs"] = {"images/", "labels/", "scenes/", "manifest.jsonl",
                          "config_resolved.txt"};
  run.write(out, "generate");

  std::cout << "generated " << args.n << " images (" << n_train << " train / "
            << args.n - n_train << " test) in " << out.string() << "\n";
  return kExitOk;
}

// ------------------------------------------------------------------ smooth

struct SmoothArgs {
  std::string in_dir;
  std::string out_dir;
  std::string preset = "none";
};

int cmd_smooth(const SmoothArgs& args) {
  const FilterSpec spec = filter_preset(args.preset);
  const auto inputs = list_files(args.in_dir, {".png", ".jpg", ".jpeg"});
  if (inputs.empty()) {
    std::cerr << "error: no images in " << args.in_dir << "\n";
    return kExitInput;
  }
  const fs::path out(args.out_dir);
  fs::create_directories(out);

  RunRecorder run;
  std::mutex warn_mu;
  std::atomic<std::size_t> skipped{0};

  const auto errors = parallel_items(inputs.size(), [&](std::size_t i) {
    const fs::path& src = inputs[i];
    if (spec.kind == FilterKind::None) {
      // Byte-identical copy, original encoding preserved.
      const fs::path dst = out / src.filename();
      const fs::path tmp = dst.string() + ".tmp";
      fs::copy_file(src, tmp, fs::copy_options::overwrite_existing);
      fs::rename(tmp, dst);
      return;
    }
    Image img;
    try {
      img = read_image(src.string());
    } catch (const std::exception& e) {
      std::lock_guard<std::mutex> lock(warn_mu);
      std::cerr << "warning: skipping " << src.string() << ": " << e.what() << "\n";
      skipped.fetch_add(1);
      return;
    }
    const Image filtered = smooth(img, spec);
    const fs::path dst = out / (src.stem().string() + ".png");
    const fs::path tmp = dst.string() + ".tmp";
    write_png(filtered, tmp.string());
    fs::rename(tmp, dst);
  });

  run.extra["filter_preset"] = args.preset;
  run.extra["config_hash"] = hex64(fnv1a64("smooth:" + args.preset));
  run.extra["n_inputs"] = inputs.size();
  run.extra["n_skipped"] = skipped.load();
  run.write(out, "smooth");

  const int rc = report_errors(errors, "smooth");
  if (rc != kExitOk) return rc;
  if (skipped.load() > 0) {
    std::cerr << "smooth: " << skipped.load() << " input(s) skipped\n";
    return kExitInput;
  }
  std::cout << "smoothed " << inputs.size() << " images with preset " << args.preset
            << " into " << out.string() << "\n";
  return kExitOk;
}

// -------------------------------------------------------------------- eval

struct EvalArgs {
  std::string pred_dir;
  std::string truth_dir;
  std::string out_dir;
  double iou_thresh = 0.5;
};

int cmd_eval(const EvalArgs& args) {
  const auto preds = list_files(args.pred_dir, {".txt"});
  const auto truths = list_files(args.truth_dir, {".txt"});

  std::vector<std::string> pred_stems, truth_stems;
  for (const auto& p : preds) pred_stems.push_back(p.stem().string());
  for (const auto& p : truths) truth_stems.push_back(p.stem().string());
  if (pred_stems != truth_stems) {
    std::cerr << "error: prediction and truth stems differ\n";
    for (const auto& s : pred_stems) {
      if (std::find(truth_stems.begin(), truth_stems.end(), s) == truth_stems.end()) {
        std::cerr << "  only in predictions: " << s << "\n";
      }
    }
    for (const auto& s : truth_stems) {
      if (std::find(pred_stems.begin(), pred_stems.end(), s) == pred_stems.end()) {
        std::cerr << "  only in truths: " << s << "\n";
      }
    }
    return kExitInput;
  }
  if (preds.empty()) {
    std::cerr << "error: no label files to evaluate\n";
    return kExitInput;
  }

  std::vector<std::vector<Detection>> dets(preds.size());
  std::vector<std::vector<AnnotationRecord>> gts(truths.size());
  const auto errors = parallel_items(preds.size(), [&](std::size_t i) {
    dets[i] = read_predictions_file(preds[i].string());
    gts[i] = read_truth_file(truths[i].string());
  });
  const int rc = report_errors(errors, "eval");
  if (rc != kExitOk) return rc;

  RunRecorder run;
  const EvalReport report = eval_dataset(dets, gts, args.iou_thresh);
  const fs::path out(args.out_dir);
  write_report_files(report, out.string());

  char iou_buf[32];
  std::snprintf(iou_buf, sizeof(iou_buf), "eval:iou=%.6f", args.iou_thresh);
  run.extra["config_hash"] = hex64(fnv1a64(iou_buf));
  run.extra["iou_thresh"] = args.iou_thresh;
  run.extra["n_images"] = report.n_images;
  run.extra["outputs"] = {"eval_report.txt", "curve_precision_confidence.csv",
                          "curve_recall_confidence.csv", "curve_f1_confidence.csv",
                          "curve_precision_recall.csv"};
  run.write(out, "eval");

  std::cout << format_report(report);
  return kExitOk;
}

// --------------------------------------------------------------------- viz

struct VizArgs {
  std::string image_dir;
  std::string label_dir;
  std::string out_dir;
  bool svg = false;
};

int cmd_viz(const VizArgs& args) {
  const auto images = list_files(args.image_dir, {".png", ".jpg", ".jpeg"});
  if (images.empty()) {
    std::cerr << "error: no images in " << args.image_dir << "\n";
    return kExitInput;
  }
  for (const auto& img : images) {
    const fs::path label = fs::path(args.label_dir) / (img.stem().string() + ".txt");
    if (!fs::exists(label)) {
      std::cerr << "error: no label file for " << img.stem().string() << " (expected "
                << label.string() << ")\n";
      return kExitInput;
    }
  }

  const fs::path out(args.out_dir);
  fs::create_directories(out);
  const DialStyle style;
  RunRecorder run;

  const auto errors = parallel_items(images.size(), [&](std::size_t i) {
    const fs::path& img_path = images[i];
    const fs::path label =
        fs::path(args.label_dir) / (img_path.stem().string() + ".txt");
    const Image img = read_image(img_path.string());
    const auto records = read_truth_file(label.string());
    const Image overlay = draw_overlay(img, records, style);

    const fs::path dst = out / (img_path.stem().string() + "_overlay.png");
    const fs::path tmp = dst.string() + ".tmp";
    write_png(overlay, tmp.string());
    fs::rename(tmp, dst);
    if (args.svg) {
      atomic_write_text(out / (img_path.stem().string() + "_overlay.svg"),
                        overlay_svg(img.width, img.height, records, style));
    }
  });
  const int rc = report_errors(errors, "viz");
  if (rc != kExitOk) return rc;

  run.extra["config_hash"] = hex64(fnv1a64(std::string("viz:svg=") +
                                           (args.svg ? "1" : "0")));
  run.extra["n_images"] = images.size();
  run.write(out, "viz");

  std::cout << "wrote " << images.size() << " overlays to " << out.string() << "\n";
  return kExitOk;
}

// ------------------------------------------------------------------- stats

struct StatsArgs {
  std::string config_path;
  std::string preset;
  std::string out_dir;
  std::size_t n = 100;
  std::uint64_t seed = 0;
};

int cmd_stats(const StatsArgs& args) {
  const GenConfig cfg = resolve_config(args.config_path, args.preset);
  if (args.n < 1) {
    std::cerr << "error: --n must be >= 1\n";
    return kExitInput;
  }

  RunRecorder run;
  std::array<std::size_t, 3> classes{0, 0, 0};
  std::size_t total_bikes = 0, min_bikes = SIZE_MAX, max_bikes = 0;
  for (std::size_t i = 0; i < args.n; ++i) {
    const Scene scene = sample_scene(cfg, mix_seed(args.seed, i));
    const auto hist = scene_class_histogram(scene, cfg.thresholds);
    for (int c = 0; c < 3; ++c) classes[static_cast<std::size_t>(c)] += hist[static_cast<std::size_t>(c)];
    total_bikes += scene.bikes.size();
    min_bikes = std::min(min_bikes, scene.bikes.size());
    max_bikes = std::max(max_bikes, scene.bikes.size());
  }

  char buf[160];
  std::string text;
  text += "scene statistics\n";
  text += "================\n";
  std::snprintf(buf, sizeof(buf), "scenes:      %zu\n", args.n);
  text += buf;
  std::snprintf(buf, sizeof(buf), "bikes:       %zu (min %zu, mean %.2f, max %zu)\n",
                total_bikes, min_bikes,
                static_cast<double>(total_bikes) / static_cast<double>(args.n), max_bikes);
  text += buf;
  static const char* names[3] = {"parked", "rotated", "fallen"};
  for (std::size_t c = 0; c < 3; ++c) {
    std::snprintf(buf, sizeof(buf), "%-12s %zu (%.1f%%)\n",
                  (std::string(names[c]) + ":").c_str(), classes[c],
                  100.0 * static_cast<double>(classes[c]) /
                      static_cast<double>(std::max<std::size_t>(total_bikes, 1)));
    text += buf;
  }
  std::snprintf(buf, sizeof(buf), "camera mode: %s\n", camera_mode_name(cfg.camera_mode));
  text += buf;
  std::snprintf(buf, sizeof(buf), "config hash: %s\n", hex64(config_hash(cfg)).c_str());
  text += buf;

  std::cout << text;
  if (!args.out_dir.empty()) {
    const fs::path out(args.out_dir);
    fs::create_directories(out);
    atomic_write_text(out / "stats.txt", text);
    run.extra["config_hash"] = hex64(config_hash(cfg));
    run.extra["master_seed"] = args.seed;
    run.extra["n_scenes"] = args.n;
    run.extra["outputs"] = {"stats.txt"};
    run.write(out, "stats");
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"bikegen: synthetic rotation-annotated bike parking scenes"};
  app.require_subcommand(1);

  GenerateArgs gen;
  CLI::App* generate = app.add_subcommand("generate", "Generate a dataset");
  auto* gen_cfg = generate->add_option("--config", gen.config_path, "Config file");
  generate->add_option("--preset", gen.preset, "Config preset name")->excludes(gen_cfg);
  generate->add_option("--n", gen.n, "Number of images")->check(CLI::PositiveNumber);
  generate->add_option("--seed", gen.seed, "Master seed");
  generate->add_option("--out", gen.out_dir, "Output directory")->required();
  generate->add_option("--format", gen.format, "Image format")
      ->check(CLI::IsMember({"png", "jpg"}));

  SmoothArgs sm;
  CLI::App* smooth_cmd = app.add_subcommand("smooth", "Filter images");
  smooth_cmd->add_option("--in", sm.in_dir, "Input image directory")->required();
  smooth_cmd->add_option("--out", sm.out_dir, "Output directory")->required();
  smooth_cmd->add_option("--preset", sm.preset, "Filter preset")
      ->check(CLI::IsMember(filter_preset_names()));

  EvalArgs ev;
  CLI::App* eval_cmd = app.add_subcommand("eval", "Evaluate predictions against truths");
  eval_cmd->add_option("--pred", ev.pred_dir, "Prediction label directory")->required();
  eval_cmd->add_option("--truth", ev.truth_dir, "Truth label directory")->required();
  eval_cmd->add_option("--out", ev.out_dir, "Report directory")->required();
  eval_cmd->add_option("--iou", ev.iou_thresh, "IoU match threshold")
      ->check(CLI::Range(1e-6, 1.0 - 1e-6));

  VizArgs vz;
  CLI::App* viz_cmd = app.add_subcommand("viz", "Draw dial overlays");
  viz_cmd->add_option("--images", vz.image_dir, "Image directory")->required();
  viz_cmd->add_option("--labels", vz.label_dir, "Label directory")->required();
  viz_cmd->add_option("--out", vz.out_dir, "Output directory")->required();
  viz_cmd->add_flag("--svg", vz.svg, "Also write SVG overlays");

  StatsArgs st;
  CLI::App* stats_cmd = app.add_subcommand("stats", "Sample scenes and report statistics");
  auto* st_cfg = stats_cmd->add_option("--config", st.config_path, "Config file");
  stats_cmd->add_option("--preset", st.preset, "Config preset name")->excludes(st_cfg);
  stats_cmd->add_option("--n", st.n, "Number of scenes")->check(CLI::PositiveNumber);
  stats_cmd->add_option("--seed", st.seed, "Master seed");
  stats_cmd->add_option("--out", st.out_dir, "Optional output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitInput;
  }

  try {
    if (generate->parsed()) return cmd_generate(gen);
    if (smooth_cmd->parsed()) return cmd_smooth(sm);
    if (eval_cmd->parsed()) return cmd_eval(ev);
    if (viz_cmd->parsed()) return cmd_viz(vz);
    if (stats_cmd->parsed()) return cmd_stats(st);
  } catch (const std::logic_error& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kExitInternal;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  }
  return kExitInput;
}
