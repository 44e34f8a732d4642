#include "bikegen/loss.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace bikegen {

namespace {

void check_unit(double v, const char* what) {
  if (!(v >= 0.0 && v <= 1.0)) {
    throw std::invalid_argument(std::string(what) + " outside [0, 1]");
  }
}

void check_box(const BBox2D& b, const char* what) {
  if (!std::isfinite(b.cx) || !std::isfinite(b.cy) || !std::isfinite(b.w) ||
      !std::isfinite(b.h) || b.w < 0.0 || b.h < 0.0) {
    throw std::invalid_argument(std::string(what) + ": invalid box");
  }
}

double bce_grad(double p, double y, bool& subgradient) {
  const double pc = std::clamp(p, kBceEps, 1.0 - kBceEps);
  if (pc != p) subgradient = true;
  return -y / pc + (1.0 - y) / (1.0 - pc);
}

}  // namespace

void validate_weights(const LossWeights& w) {
  const double vals[4] = {w.g_obj, w.g_bbox, w.g_cls, w.g_ryz};
  double sum = 0.0;
  for (double v : vals) {
    if (!(v >= 0.0)) throw std::invalid_argument("loss weight must be >= 0");
    sum += v;
  }
  if (sum <= 0.0) throw std::invalid_argument("loss weights must not all be zero");
}

double iou(const BBox2D& a, const BBox2D& b) {
  check_box(a, "iou a");
  check_box(b, "iou b");
  const double ax1 = a.cx - a.w / 2, ax2 = a.cx + a.w / 2;
  const double ay1 = a.cy - a.h / 2, ay2 = a.cy + a.h / 2;
  const double bx1 = b.cx - b.w / 2, bx2 = b.cx + b.w / 2;
  const double by1 = b.cy - b.h / 2, by2 = b.cy + b.h / 2;
  const double iw = std::min(ax2, bx2) - std::max(ax1, bx1);
  const double ih = std::min(ay2, by2) - std::max(ay1, by1);
  if (iw <= 0.0 || ih <= 0.0) return 0.0;
  const double inter = iw * ih;
  const double uni = a.w * a.h + b.w * b.h - inter;
  return uni > 0.0 ? inter / uni : 0.0;
}

double bce(double p, double y) {
  check_unit(p, "bce p");
  check_unit(y, "bce y");
  const double pc = std::clamp(p, kBceEps, 1.0 - kBceEps);
  return -(y * std::log(pc) + (1.0 - y) * std::log(1.0 - pc));
}

double rotation_mse(double pred_ry_u, double pred_rz_u, double truth_ry_u,
                    double truth_rz_u) {
  check_unit(pred_ry_u, "pred ry_u");
  check_unit(pred_rz_u, "pred rz_u");
  check_unit(truth_ry_u, "truth ry_u");
  check_unit(truth_rz_u, "truth rz_u");
  const double dry = pred_ry_u - truth_ry_u;
  const double drz = pred_rz_u - truth_rz_u;
  return (dry * dry + drz * drz) / 2.0;
}

LossTerms compute_terms(const LossInputs& in) {
  if (in.truth_class < 0 || in.truth_class > 2) {
    throw std::invalid_argument("truth_class outside {0, 1, 2}");
  }
  LossTerms t;
  t.l_obj = bce(in.p_obj, in.y_obj);
  t.l_bbox = 1.0 - iou(in.pred_box, in.truth_box);
  double cls = 0.0;
  for (int k = 0; k < 3; ++k) {
    cls += bce(in.p_cls[static_cast<std::size_t>(k)], in.truth_class == k ? 1.0 : 0.0);
  }
  t.l_cls = cls / 3.0;
  t.l_ryz = rotation_mse(in.pred_ry_u, in.pred_rz_u, in.truth_ry_u, in.truth_rz_u);
  return t;
}

LossBreakdown total_loss(const LossTerms& t, const LossWeights& w) {
  validate_weights(w);
  for (double v : {t.l_obj, t.l_bbox, t.l_cls, t.l_ryz}) {
    if (!(v >= 0.0)) throw std::invalid_argument("loss term must be >= 0");
  }
  LossBreakdown b;
  b.l_obj = t.l_obj;
  b.l_bbox = t.l_bbox;
  b.l_cls = t.l_cls;
  b.l_ryz = t.l_ryz;
  b.total = w.g_obj * t.l_obj + w.g_bbox * t.l_bbox + w.g_cls * t.l_cls + w.g_ryz * t.l_ryz;
  return b;
}

LossGradients loss_gradients(const LossInputs& in, const LossWeights& w) {
  validate_weights(w);
  compute_terms(in);  // validates every raw input
  LossGradients g;

  g.d_p_obj = w.g_obj * bce_grad(in.p_obj, in.y_obj, g.subgradient);
  for (int k = 0; k < 3; ++k) {
    g.d_p_cls[static_cast<std::size_t>(k)] =
        w.g_cls / 3.0 *
        bce_grad(in.p_cls[static_cast<std::size_t>(k)], in.truth_class == k ? 1.0 : 0.0,
                 g.subgradient);
  }
  g.d_ry_u = w.g_ryz * (in.pred_ry_u - in.truth_ry_u);
  g.d_rz_u = w.g_ryz * (in.pred_rz_u - in.truth_rz_u);

  // IoU through the pred box. Each pred edge either controls the
  // intersection bound or is slack; exact ties and exact edge contact are
  // kinks, reported via the subgradient flag.
  const BBox2D& a = in.pred_box;
  const BBox2D& b = in.truth_box;
  const double ax1 = a.cx - a.w / 2, ax2 = a.cx + a.w / 2;
  const double ay1 = a.cy - a.h / 2, ay2 = a.cy + a.h / 2;
  const double bx1 = b.cx - b.w / 2, bx2 = b.cx + b.w / 2;
  const double by1 = b.cy - b.h / 2, by2 = b.cy + b.h / 2;
  if (ax1 == bx1 || ax2 == bx2 || ay1 == by1 || ay2 == by2) g.subgradient = true;
  if (a.w == 0.0 || a.h == 0.0) g.subgradient = true;

  const double iw = std::min(ax2, bx2) - std::max(ax1, bx1);
  const double ih = std::min(ay2, by2) - std::max(ay1, by1);
  if (iw == 0.0 || ih == 0.0) g.subgradient = true;

  double d_cx = 0.0, d_cy = 0.0, d_w = 0.0, d_h = 0.0;
  if (iw > 0.0 && ih > 0.0) {
    const double inter = iw * ih;
    const double A = a.w * a.h, B = b.w * b.h;
    const double U = A + B - inter;

    // Derivatives of the active intersection bounds w.r.t. (cx, cy, w, h).
    const bool left_active = ax1 > bx1;    // ix1 follows the pred edge
    const bool right_active = ax2 < bx2;   // ix2 follows the pred edge
    const bool bottom_active = ay1 > by1;
    const bool top_active = ay2 < by2;

    auto diou = [&](double d_inter, double d_area) {
      return (d_inter * (A + B) - inter * d_area) / (U * U);
    };
    // d_inter per input: ih * d(iw) + iw * d(ih).
    const double diw_dcx = (right_active ? 1.0 : 0.0) - (left_active ? 1.0 : 0.0);
    const double diw_dw = (right_active ? 0.5 : 0.0) + (left_active ? 0.5 : 0.0);
    const double dih_dcy = (top_active ? 1.0 : 0.0) - (bottom_active ? 1.0 : 0.0);
    const double dih_dh = (top_active ? 0.5 : 0.0) + (bottom_active ? 0.5 : 0.0);

    d_cx = diou(ih * diw_dcx, 0.0);
    d_cy = diou(iw * dih_dcy, 0.0);
    d_w = diou(ih * diw_dw, a.h);
    d_h = diou(iw * dih_dh, a.w);
  }
  // l_bbox = 1 - iou; outside contact the disjoint case is locally constant.
  g.d_cx = w.g_bbox * -d_cx;
  g.d_cy = w.g_bbox * -d_cy;
  g.d_w = w.g_bbox * -d_w;
  g.d_h = w.g_bbox * -d_h;
  return g;
}

}  // namespace bikegen
