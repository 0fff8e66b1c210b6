#pragma once

#include <cstddef>
#include <vector>

#include "pitchwarp/align_core.hpp"
#include "pitchwarp/curve.hpp"

namespace pitchwarp {

/// Per-frame feature sequence, row-major frames x dim.
struct FeatureMatrix {
    std::size_t frames = 0;
    std::size_t dim = 0;
    std::vector<float> data;

    float at(std::size_t t, std::size_t c) const { return data[t * dim + c]; }
};

enum class WarpAggregation { Mean, Nearest };

/// Warps features from the amateur timeline onto the template timeline:
/// output[j] aggregates the amateur frames the path pairs with j (mean by
/// default; nearest keeps the centermost frame, for ablation).
FeatureMatrix warp_features(const FeatureMatrix& features, const AlignmentPath& path,
                            std::size_t target_len,
                            WarpAggregation aggregation = WarpAggregation::Mean);

/// Pulls the template pitch onto the amateur timeline through the path's
/// amateur->template map.
PitchCurve warp_pitch_to_amateur_timeline(const PitchCurve& tmpl, const AlignmentPath& path);

}  // namespace pitchwarp
