#pragma once

#include <array>

#include "bikegen/annotate.hpp"

namespace bikegen {

/// Weights of the four loss terms. Raw multipliers, not normalized.
struct LossWeights {
  double g_obj = 0.7;
  double g_bbox = 0.05;
  double g_cls = 0.3;
  double g_ryz = 0.05;
};

/// Throws unless all weights are >= 0 and at least one is positive.
void validate_weights(const LossWeights& w);

struct LossTerms {
  double l_obj = 0.0;
  double l_bbox = 0.0;
  double l_cls = 0.0;
  double l_ryz = 0.0;
};

struct LossBreakdown {
  double l_obj = 0.0;
  double l_bbox = 0.0;
  double l_cls = 0.0;
  double l_ryz = 0.0;
  double total = 0.0;
};

/// Raw network outputs for one matched prediction-truth pair.
struct LossInputs {
  double p_obj = 0.5;
  double y_obj = 1.0;
  BBox2D pred_box;
  BBox2D truth_box;
  std::array<double, 3> p_cls{1.0 / 3, 1.0 / 3, 1.0 / 3};
  int truth_class = 0;
  double pred_ry_u = 0.5;
  double pred_rz_u = 0.5;
  double truth_ry_u = 0.5;
  double truth_rz_u = 0.5;
};

/// Derivatives of the weighted total with respect to every raw input.
/// subgradient is set when the point is non-differentiable: an IoU
/// corner/edge-contact configuration or a probability at the clamp.
struct LossGradients {
  double d_p_obj = 0.0;
  double d_cx = 0.0, d_cy = 0.0, d_w = 0.0, d_h = 0.0;  // pred box
  std::array<double, 3> d_p_cls{0.0, 0.0, 0.0};
  double d_ry_u = 0.0;
  double d_rz_u = 0.0;
  bool subgradient = false;
};

/// Intersection over union of two center/size boxes. Symmetric, in [0, 1];
/// zero when either box has no area.
double iou(const BBox2D& a, const BBox2D& b);

/// Binary cross-entropy -[y ln p + (1-y) ln(1-p)] with p clamped to
/// [1e-7, 1 - 1e-7]. Throws when p or y is outside [0, 1].
double bce(double p, double y);

/// Mean squared rotation error in normalized units:
/// ((dry)^2 + (drz)^2) / 2.
double rotation_mse(double pred_ry_u, double pred_rz_u, double truth_ry_u,
                    double truth_rz_u);

/// Term values from raw inputs: l_obj = bce(p_obj, y_obj), l_bbox = 1 - iou,
/// l_cls = mean BCE over the three class outputs against one-hot truth,
/// l_ryz = rotation_mse.
LossTerms compute_terms(const LossInputs& in);

/// Weighted sum: total = g_obj l_obj + g_bbox l_bbox + g_cls l_cls +
/// g_ryz l_ryz. Affine in each term.
LossBreakdown total_loss(const LossTerms& t, const LossWeights& w);

LossGradients loss_gradients(const LossInputs& in, const LossWeights& w);

inline constexpr double kBceEps = 1e-7;

}  // namespace bikegen
