// Scalar loss kernels: focal classification loss with analytic gradient,
// IoU regression loss, and the combined ranking loss l_cls + alpha * l_reg.
#pragma once

#include <cmath>

#include "hps/common.hpp"

namespace hps {

struct LossParams {
    double focal_alpha = 0.25;
    double focal_gamma = 2.0;
    double mix_alpha = 1.0;    // weight of l_reg inside the combined loss
    double iou_floor = 1e-6;   // clamp for -ln(IoU)
    bool reg_one_minus_iou = false;  // alternative 1 - IoU regression loss
};

namespace detail {
inline double clamp_prob(double p) {
    const double eps = 1e-7;
    return p < eps ? eps : (p > 1.0 - eps ? 1.0 - eps : p);
}
}  // namespace detail

// -alpha_t * (1 - p_t)^gamma * ln(p_t), p clamped to [1e-7, 1 - 1e-7].
inline double focal_loss(double p, int y, const LossParams& params) {
    if (y != 0 && y != 1) throw InvalidInput("focal_loss: label must be 0 or 1");
    p = detail::clamp_prob(p);
    const double pt = y == 1 ? p : 1.0 - p;
    const double at = y == 1 ? params.focal_alpha : 1.0 - params.focal_alpha;
    return -at * std::pow(1.0 - pt, params.focal_gamma) * std::log(pt);
}

// d(focal_loss)/dp, analytic.
inline double focal_loss_grad(double p, int y, const LossParams& params) {
    if (y != 0 && y != 1) throw InvalidInput("focal_loss_grad: label must be 0 or 1");
    p = detail::clamp_prob(p);
    const double gamma = params.focal_gamma;
    if (y == 1) {
        const double a = params.focal_alpha;
        const double modulating = gamma == 0.0 ? 0.0 : gamma * std::pow(1.0 - p, gamma - 1.0) * std::log(p);
        return a * modulating - a * std::pow(1.0 - p, gamma) / p;
    }
    const double a = 1.0 - params.focal_alpha;
    const double modulating = gamma == 0.0 ? 0.0 : gamma * std::pow(p, gamma - 1.0) * std::log(1.0 - p);
    return -a * modulating + a * std::pow(p, gamma) / (1.0 - p);
}

inline double iou_loss(double iou_value, const LossParams& params) {
    if (!(iou_value >= -1e-9 && iou_value <= 1.0 + 1e-9))
        throw InvalidInput("iou_loss: value outside [0,1]");
    iou_value = iou_value < 0.0 ? 0.0 : (iou_value > 1.0 ? 1.0 : iou_value);
    if (params.reg_one_minus_iou) return 1.0 - iou_value;
    return -std::log(iou_value > params.iou_floor ? iou_value : params.iou_floor);
}

inline double combined_loss(double l_cls, double l_reg, const LossParams& params) {
    return l_cls + params.mix_alpha * l_reg;
}

}  // namespace hps
