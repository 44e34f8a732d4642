#pragma once

#include <array>
#include <cstddef>
#include <string>
#include <vector>

#include "bikegen/labels.hpp"
#include "bikegen/loss.hpp"

namespace bikegen {

/// A model prediction consumed as given; no NMS or score shaping here.
using Detection = PredictionRecord;

struct MatchPair {
  std::size_t det = 0;
  std::size_t truth = 0;
  double iou = 0.0;
};

struct MatchResult {
  std::vector<MatchPair> pairs;              // in match order
  std::vector<std::size_t> unmatched_dets;   // ascending index
  std::vector<std::size_t> unmatched_truths;
};

/// Greedy one-to-one matching: detections in descending confidence (stable
/// on the original order for equal scores); each takes the highest-IoU still
/// unmatched truth of its own class with IoU >= iou_thresh, ties going to
/// the lower truth index. Throws unless iou_thresh is in (0, 1).
MatchResult match_detections(const std::vector<Detection>& dets,
                             const std::vector<AnnotationRecord>& truths,
                             double iou_thresh);

struct ApResult {
  std::array<double, 3> per_class{0.0, 0.0, 0.0};
  std::array<bool, 3> defined{false, false, false};  // class has truths
  double map = 0.0;  // mean over defined classes; 0 when none defined
};

/// All-point (continuous precision envelope) average precision per class,
/// detections pooled across images and ranked by confidence. A class with
/// zero truths is undefined and excluded from the mean.
ApResult average_precision(const std::vector<std::vector<Detection>>& dets_per_image,
                           const std::vector<std::vector<AnnotationRecord>>& truths_per_image,
                           double iou_thresh);

/// Single-image convenience wrapper.
ApResult average_precision(const std::vector<Detection>& dets,
                           const std::vector<AnnotationRecord>& truths, double iou_thresh);

struct CurvePoint {
  double threshold = 0.0;
  double precision = 1.0;
  double recall = 0.0;
  double f1 = 0.0;
};

struct EvalReport {
  std::size_t n_images = 0;
  std::size_t n_dets = 0;
  std::size_t n_truths = 0;
  std::size_t matched_pairs = 0;
  double iou_thresh = 0.5;
  ApResult ap;
  bool rotation_mse_defined = false;  // false when no pairs matched
  double rotation_mse = 0.0;          // normalized units, matched pairs only
  std::vector<CurvePoint> curve;      // 101 thresholds 0.00 .. 1.00
};

/// Full dataset evaluation. Curves are micro-pooled over images and classes
/// at 101 confidence thresholds; greedy matching commutes with confidence
/// filtering, so each threshold reuses the one full match. Conventions:
/// precision is 1 when no detections survive a threshold, recall is 1 when
/// there are no truths, f1 is 0 when precision + recall is 0.
EvalReport eval_dataset(const std::vector<std::vector<Detection>>& dets_per_image,
                        const std::vector<std::vector<AnnotationRecord>>& truths_per_image,
                        double iou_thresh);

/// Human-readable summary of the report.
std::string format_report(const EvalReport& report);

/// Writes eval_report.txt plus the four curve tables
/// (curve_precision_confidence.csv, curve_recall_confidence.csv,
/// curve_f1_confidence.csv, curve_precision_recall.csv), each with columns
/// threshold,precision,recall,f1.
void write_report_files(const EvalReport& report, const std::string& dir);

}  // namespace bikegen
