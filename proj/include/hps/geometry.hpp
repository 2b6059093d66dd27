// Boxes, IoU, pyramid-level grids of anchors/points, and best-level matching.
#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "hps/common.hpp"

namespace hps {

struct Box {
    double x0 = 0.0, y0 = 0.0, x1 = 0.0, y1 = 0.0;

    double width() const { return x1 - x0; }
    double height() const { return y1 - y0; }
    double area() const { return width() * height(); }
    bool valid() const {
        return std::isfinite(x0) && std::isfinite(y0) && std::isfinite(x1) && std::isfinite(y1) &&
               x0 < x1 && y0 < y1;
    }
    bool operator==(const Box&) const = default;
};

struct GroundTruth {
    Box box;
    int class_id = 0;
};

struct RegressRange {
    double lo = 0.0;
    double hi = std::numeric_limits<double>::infinity();
};

struct LevelSpec {
    int level = 1;  // 1-based
    double stride = 8.0;
    double anchor_size = 32.0;
    RegressRange regress_range;
};

enum class CandidateKind { anchor, point };

struct Candidate {
    int id = 0;
    int level = 1;
    CandidateKind kind = CandidateKind::point;
    Box box;             // anchor mode only
    double cx = 0.0, cy = 0.0;
    std::vector<double> feature;
};

inline double iou(const Box& a, const Box& b) {
    if (!a.valid() || !b.valid()) throw InvalidInput("iou: degenerate box");
    const double iw = std::min(a.x1, b.x1) - std::max(a.x0, b.x0);
    const double ih = std::min(a.y1, b.y1) - std::max(a.y0, b.y0);
    if (iw <= 0.0 || ih <= 0.0) return 0.0;
    const double inter = iw * ih;
    return inter / (a.area() + b.area() - inter);
}

inline double aspect_ratio(const GroundTruth& g) {
    if (!g.box.valid()) throw InvalidInput("aspect_ratio: degenerate box");
    return g.box.width() / g.box.height();
}

// Standard 5-level pyramid: strides 8..128, anchor base 4x stride, FCOS
// regression ranges [0,64],(64,128],(128,256],(256,512],(512,inf).
inline std::vector<LevelSpec> standard_levels(int count = 5) {
    if (count < 1) throw InvalidInput("standard_levels: count must be >= 1");
    std::vector<LevelSpec> levels;
    double stride = 8.0;
    double range_lo = 0.0;
    for (int i = 1; i <= count; ++i) {
        LevelSpec spec;
        spec.level = i;
        spec.stride = stride;
        spec.anchor_size = 4.0 * stride;
        spec.regress_range.lo = range_lo;
        spec.regress_range.hi = i == count ? std::numeric_limits<double>::infinity() : 8.0 * stride;
        levels.push_back(spec);
        range_lo = spec.regress_range.hi;
        stride *= 2.0;
    }
    return levels;
}

// One candidate per grid cell per ratio (anchor) or per cell (point), centered
// at (stride*(u+1/2), stride*(v+1/2)). Levels with stride > min(W,H) are
// dropped. Ordering is level-major, then row-major, then ratio.
inline std::vector<Candidate> generate_candidates(const std::vector<LevelSpec>& levels, double width,
                                                  double height, CandidateKind mode,
                                                  const std::vector<double>& ratios = {0.5, 1.0, 2.0}) {
    if (levels.empty()) throw InvalidInput("generate_candidates: empty level list");
    if (mode == CandidateKind::anchor && ratios.empty())
        throw InvalidInput("generate_candidates: anchor mode needs at least one ratio");

    std::vector<LevelSpec> usable;
    for (const auto& spec : levels)
        if (spec.stride <= std::min(width, height)) usable.push_back(spec);
    if (usable.empty()) throw InvalidInput("generate_candidates: no level stride fits the image extent");

    double max_stride = 0.0;
    for (const auto& spec : usable) max_stride = std::max(max_stride, spec.stride);
    if (std::fmod(width, max_stride) != 0.0 || std::fmod(height, max_stride) != 0.0)
        throw InvalidInput("generate_candidates: extent not divisible by the largest usable stride");

    std::vector<Candidate> out;
    int next_id = 0;
    for (const auto& spec : usable) {
        const int cols = static_cast<int>(width / spec.stride);
        const int rows = static_cast<int>(height / spec.stride);
        for (int v = 0; v < rows; ++v) {
            for (int u = 0; u < cols; ++u) {
                const double cx = spec.stride * (u + 0.5);
                const double cy = spec.stride * (v + 0.5);
                if (mode == CandidateKind::point) {
                    Candidate c;
                    c.id = next_id++;
                    c.level = spec.level;
                    c.kind = CandidateKind::point;
                    c.cx = cx;
                    c.cy = cy;
                    out.push_back(std::move(c));
                } else {
                    for (double ratio : ratios) {
                        const double w = spec.anchor_size * std::sqrt(ratio);
                        const double h = spec.anchor_size / std::sqrt(ratio);
                        Candidate c;
                        c.id = next_id++;
                        c.level = spec.level;
                        c.kind = CandidateKind::anchor;
                        c.box = {cx - 0.5 * w, cy - 0.5 * h, cx + 0.5 * w, cy + 0.5 * h};
                        c.cx = cx;
                        c.cy = cy;
                        out.push_back(std::move(c));
                    }
                }
            }
        }
    }
    return out;
}

// Max of the four side distances (l, t, r, b). Caller must keep p inside the box.
inline double max_regression_offset(double px, double py, const GroundTruth& g) {
    const double l = px - g.box.x0;
    const double t = py - g.box.y0;
    const double r = g.box.x1 - px;
    const double b = g.box.y1 - py;
    if (l < 0.0 || t < 0.0 || r < 0.0 || b < 0.0)
        throw InvalidInput("max_regression_offset: point outside box");
    return std::max(std::max(l, t), std::max(r, b));
}

// Level whose regress_range contains the offset; boundaries belong to the
// lower level. Falls back to the nearest range if no range contains it.
inline int level_for_offset(double offset, const std::vector<LevelSpec>& levels) {
    if (levels.empty()) throw InvalidInput("level_for_offset: empty level list");
    for (const auto& spec : levels)
        if (offset >= spec.regress_range.lo && offset <= spec.regress_range.hi) return spec.level;
    int best = levels.front().level;
    double best_gap = std::numeric_limits<double>::infinity();
    for (const auto& spec : levels) {
        const double gap = offset < spec.regress_range.lo ? spec.regress_range.lo - offset
                                                          : offset - spec.regress_range.hi;
        if (gap < best_gap) {
            best_gap = gap;
            best = spec.level;
        }
    }
    return best;
}

// Anchor mode: level of the max-IoU candidate, ties toward the lower level.
// Point mode: level whose regress_range contains the GT-center max offset.
inline int best_level(const GroundTruth& g, const std::vector<Candidate>& candidates,
                      CandidateKind mode, const std::vector<LevelSpec>& levels) {
    if (mode == CandidateKind::point) {
        const double cx = 0.5 * (g.box.x0 + g.box.x1);
        const double cy = 0.5 * (g.box.y0 + g.box.y1);
        return level_for_offset(max_regression_offset(cx, cy, g), levels);
    }
    if (candidates.empty()) throw InvalidInput("best_level: no candidates");
    int best = 0;
    double best_iou = -1.0;
    for (const auto& c : candidates) {
        if (c.kind != CandidateKind::anchor) continue;
        const double v = iou(c.box, g.box);
        if (v > best_iou || (v == best_iou && c.level < best)) {
            best_iou = v;
            best = c.level;
        }
    }
    if (best == 0) throw InvalidInput("best_level: no anchor candidates");
    return best;
}

}  // namespace hps
