#include "bikegen/eval.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <stdexcept>

namespace bikegen {

namespace {

void check_thresh(double iou_thresh) {
  if (!(iou_thresh > 0.0 && iou_thresh < 1.0)) {
    throw std::invalid_argument("iou threshold must be in (0, 1)");
  }
}

struct RankedDet {
  double confidence = 0.0;
  bool tp = false;
};

/// All-point AP from a confidence-sorted TP/FP sequence.
double ap_from_ranked(const std::vector<RankedDet>& ranked, std::size_t n_truths) {
  if (n_truths == 0) return 0.0;
  if (ranked.empty()) return 0.0;

  const std::size_t n = ranked.size();
  std::vector<double> precision(n), recall(n);
  std::size_t tp = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (ranked[i].tp) ++tp;
    precision[i] = static_cast<double>(tp) / static_cast<double>(i + 1);
    recall[i] = static_cast<double>(tp) / static_cast<double>(n_truths);
  }
  // Monotone envelope from the right, then integrate over recall steps.
  for (std::size_t i = n - 1; i-- > 0;) {
    precision[i] = std::max(precision[i], precision[i + 1]);
  }
  double ap = 0.0;
  double prev_recall = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    ap += (recall[i] - prev_recall) * precision[i];
    prev_recall = recall[i];
  }
  return ap;
}

}  // namespace

MatchResult match_detections(const std::vector<Detection>& dets,
                             const std::vector<AnnotationRecord>& truths,
                             double iou_thresh) {
  check_thresh(iou_thresh);

  std::vector<std::size_t> order(dets.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return dets[a].confidence > dets[b].confidence;
  });

  MatchResult result;
  std::vector<bool> truth_taken(truths.size(), false);
  std::vector<bool> det_matched(dets.size(), false);

  for (std::size_t di : order) {
    const Detection& det = dets[di];
    double best_iou = 0.0;
    std::size_t best_truth = truths.size();
    for (std::size_t ti = 0; ti < truths.size(); ++ti) {
      if (truth_taken[ti] || truths[ti].class_id != det.class_id) continue;
      const double v = iou(det.box, truths[ti].box);
      if (v >= iou_thresh && v > best_iou) {  // strict > keeps the lower index on ties
        best_iou = v;
        best_truth = ti;
      }
    }
    if (best_truth < truths.size()) {
      truth_taken[best_truth] = true;
      det_matched[di] = true;
      result.pairs.push_back({di, best_truth, best_iou});
    }
  }

  for (std::size_t di = 0; di < dets.size(); ++di) {
    if (!det_matched[di]) result.unmatched_dets.push_back(di);
  }
  for (std::size_t ti = 0; ti < truths.size(); ++ti) {
    if (!truth_taken[ti]) result.unmatched_truths.push_back(ti);
  }
  return result;
}

ApResult average_precision(const std::vector<std::vector<Detection>>& dets_per_image,
                           const std::vector<std::vector<AnnotationRecord>>& truths_per_image,
                           double iou_thresh) {
  check_thresh(iou_thresh);
  if (dets_per_image.size() != truths_per_image.size()) {
    throw std::invalid_argument("average_precision: image lists differ in length");
  }

  std::array<std::vector<RankedDet>, 3> pooled;
  std::array<std::size_t, 3> truth_counts{0, 0, 0};

  for (std::size_t img = 0; img < dets_per_image.size(); ++img) {
    const auto& dets = dets_per_image[img];
    const auto& truths = truths_per_image[img];
    for (const AnnotationRecord& t : truths) {
      ++truth_counts[static_cast<std::size_t>(t.class_id)];
    }
    const MatchResult m = match_detections(dets, truths, iou_thresh);
    std::vector<bool> tp(dets.size(), false);
    for (const MatchPair& p : m.pairs) tp[p.det] = true;
    for (std::size_t di = 0; di < dets.size(); ++di) {
      pooled[static_cast<std::size_t>(dets[di].class_id)].push_back(
          {dets[di].confidence, tp[di]});
    }
  }

  ApResult r;
  double sum = 0.0;
  int defined = 0;
  for (std::size_t c = 0; c < 3; ++c) {
    // Image iteration order is already deterministic; sorting by confidence
    // stays stable on ties.
    std::stable_sort(pooled[c].begin(), pooled[c].end(),
                     [](const RankedDet& a, const RankedDet& b) {
                       return a.confidence > b.confidence;
                     });
    r.defined[c] = truth_counts[c] > 0;
    r.per_class[c] = r.defined[c] ? ap_from_ranked(pooled[c], truth_counts[c]) : 0.0;
    if (r.defined[c]) {
      sum += r.per_class[c];
      ++defined;
    }
  }
  r.map = defined > 0 ? sum / defined : 0.0;
  return r;
}

ApResult average_precision(const std::vector<Detection>& dets,
                           const std::vector<AnnotationRecord>& truths, double iou_thresh) {
  return average_precision(std::vector<std::vector<Detection>>{dets},
                           std::vector<std::vector<AnnotationRecord>>{truths}, iou_thresh);
}

EvalReport eval_dataset(const std::vector<std::vector<Detection>>& dets_per_image,
                        const std::vector<std::vector<AnnotationRecord>>& truths_per_image,
                        double iou_thresh) {
  check_thresh(iou_thresh);
  if (dets_per_image.size() != truths_per_image.size()) {
    throw std::invalid_argument("eval_dataset: image lists differ in length");
  }

  EvalReport rep;
  rep.n_images = dets_per_image.size();
  rep.iou_thresh = iou_thresh;
  rep.ap = average_precision(dets_per_image, truths_per_image, iou_thresh);

  // One full match per image; a pair survives threshold t exactly when its
  // detection does, because greedy matching commutes with dropping the
  // lowest-confidence detections.
  std::vector<double> matched_conf;
  std::vector<double> det_conf;
  double mse_sum = 0.0;
  for (std::size_t img = 0; img < dets_per_image.size(); ++img) {
    const auto& dets = dets_per_image[img];
    const auto& truths = truths_per_image[img];
    rep.n_dets += dets.size();
    rep.n_truths += truths.size();
    for (const Detection& d : dets) det_conf.push_back(d.confidence);

    const MatchResult m = match_detections(dets, truths, iou_thresh);
    for (const MatchPair& p : m.pairs) {
      const Detection& d = dets[p.det];
      const AnnotationRecord& t = truths[p.truth];
      matched_conf.push_back(d.confidence);
      mse_sum += rotation_mse(d.ry_u, d.rz_u, t.ry_u, t.rz_u);
    }
  }
  rep.matched_pairs = matched_conf.size();
  rep.rotation_mse_defined = rep.matched_pairs > 0;
  rep.rotation_mse =
      rep.rotation_mse_defined ? mse_sum / static_cast<double>(rep.matched_pairs) : 0.0;

  rep.curve.reserve(101);
  for (int i = 0; i <= 100; ++i) {
    const double t = i / 100.0;
    const auto count_ge = [t](const std::vector<double>& confs) {
      return static_cast<std::size_t>(
          std::count_if(confs.begin(), confs.end(), [t](double c) { return c >= t; }));
    };
    const std::size_t retained = count_ge(det_conf);
    const std::size_t tp = count_ge(matched_conf);

    CurvePoint pt;
    pt.threshold = t;
    pt.precision = retained > 0 ? static_cast<double>(tp) / static_cast<double>(retained) : 1.0;
    pt.recall = rep.n_truths > 0 ? static_cast<double>(tp) / static_cast<double>(rep.n_truths)
                                 : 1.0;
    pt.f1 = (pt.precision + pt.recall) > 0.0
                ? 2.0 * pt.precision * pt.recall / (pt.precision + pt.recall)
                : 0.0;
    rep.curve.push_back(pt);
  }
  return rep;
}

std::string format_report(const EvalReport& rep) {
  char buf[128];
  std::string out;
  out += "evaluation report\n";
  out += "=================\n";
  std::snprintf(buf, sizeof(buf), "images:          %zu\n", rep.n_images);
  out += buf;
  std::snprintf(buf, sizeof(buf), "detections:      %zu\n", rep.n_dets);
  out += buf;
  std::snprintf(buf, sizeof(buf), "truth objects:   %zu\n", rep.n_truths);
  out += buf;
  std::snprintf(buf, sizeof(buf), "matched pairs:   %zu (iou >= %.2f)\n", rep.matched_pairs,
                rep.iou_thresh);
  out += buf;
  out += "\nper-class AP\n";
  static const char* names[3] = {"parked", "rotated", "fallen"};
  for (std::size_t c = 0; c < 3; ++c) {
    if (rep.ap.defined[c]) {
      std::snprintf(buf, sizeof(buf), "  %-8s %.6f\n", names[c], rep.ap.per_class[c]);
    } else {
      std::snprintf(buf, sizeof(buf), "  %-8s undefined (no truth objects)\n", names[c]);
    }
    out += buf;
  }
  std::snprintf(buf, sizeof(buf), "mAP:             %.6f\n", rep.ap.map);
  out += buf;
  if (rep.rotation_mse_defined) {
    std::snprintf(buf, sizeof(buf), "rotation MSE:    %.6f (normalized units)\n",
                  rep.rotation_mse);
  } else {
    std::snprintf(buf, sizeof(buf), "rotation MSE:    undefined (no matched pairs)\n");
  }
  out += buf;
  std::snprintf(buf, sizeof(buf), "curve samples:   %zu\n", rep.curve.size());
  out += buf;
  return out;
}

void write_report_files(const EvalReport& rep, const std::string& dir) {
  namespace fs = std::filesystem;
  fs::create_directories(dir);

  {
    std::ofstream out(fs::path(dir) / "eval_report.txt", std::ios::binary);
    if (!out) throw std::runtime_error("cannot write eval_report.txt in " + dir);
    out << format_report(rep);
  }

  std::string table = "threshold,precision,recall,f1\n";
  char buf[128];
  for (const CurvePoint& p : rep.curve) {
    std::snprintf(buf, sizeof(buf), "%.2f,%.6f,%.6f,%.6f\n", p.threshold, p.precision,
                  p.recall, p.f1);
    table += buf;
  }
  for (const char* name :
       {"curve_precision_confidence.csv", "curve_recall_confidence.csv",
        "curve_f1_confidence.csv", "curve_precision_recall.csv"}) {
    std::ofstream out(fs::path(dir) / name, std::ios::binary);
    if (!out) throw std::runtime_error(std::string("cannot write ") + name + " in " + dir);
    out << table;
  }
}

}  // namespace bikegen
