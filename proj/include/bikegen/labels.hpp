#pragma once

#include <string>
#include <vector>

#include "bikegen/annotate.hpp"

namespace bikegen {

/// One model output row: truth fields plus a confidence score.
struct PredictionRecord {
  int class_id = 0;
  BBox2D box;
  double ry_u = 0.5;
  double rz_u = 0.5;
  double confidence = 0.0;
};

/// Text format, one object per line, six decimal places:
///   class_id cx cy w h ry_u rz_u
/// Predictions carry confidence as a trailing eighth column. Blank lines are
/// ignored on input; parse errors report "<origin>:<line>: <message>".
std::string format_truth(const std::vector<AnnotationRecord>& records);
std::string format_predictions(const std::vector<PredictionRecord>& records);

std::vector<AnnotationRecord> parse_truth(const std::string& text, const std::string& origin);
std::vector<PredictionRecord> parse_predictions(const std::string& text,
                                                const std::string& origin);

void write_truth_file(const std::vector<AnnotationRecord>& records, const std::string& path);
std::vector<AnnotationRecord> read_truth_file(const std::string& path);
void write_predictions_file(const std::vector<PredictionRecord>& records,
                            const std::string& path);
std::vector<PredictionRecord> read_predictions_file(const std::string& path);

}  // namespace bikegen
