#include "pitchwarp/warp_apply.hpp"

#include <stdexcept>

namespace pitchwarp {

FeatureMatrix warp_features(const FeatureMatrix& features, const AlignmentPath& path,
                            std::size_t target_len, WarpAggregation aggregation) {
    if (features.dim < 1) throw std::invalid_argument("warp_features: dim must be >= 1");
    validate_path(path, features.frames, target_len);

    FeatureMatrix out;
    out.frames = target_len;
    out.dim = features.dim;
    out.data.assign(target_len * features.dim, 0.0f);

    // Pairs are grouped by template index runs when walked in j order; gather
    // the amateur rows of each run.
    std::vector<std::vector<int>> sources(target_len);
    for (const auto& [i, j] : path.pairs) sources[static_cast<std::size_t>(j)].push_back(i);

    std::vector<double> acc(features.dim);
    for (std::size_t j = 0; j < target_len; ++j) {
        const auto& rows = sources[j];
        // Path continuity guarantees at least one pair per template frame.
        if (aggregation == WarpAggregation::Nearest) {
            const int pick = rows[(rows.size() - 1) / 2];
            for (std::size_t c = 0; c < features.dim; ++c)
                out.data[j * features.dim + c] = features.at(static_cast<std::size_t>(pick), c);
            continue;
        }
        acc.assign(features.dim, 0.0);
        for (int i : rows)
            for (std::size_t c = 0; c < features.dim; ++c)
                acc[c] += static_cast<double>(features.at(static_cast<std::size_t>(i), c));
        const double inv = 1.0 / static_cast<double>(rows.size());
        for (std::size_t c = 0; c < features.dim; ++c)
            out.data[j * features.dim + c] = static_cast<float>(acc[c] * inv);
    }
    return out;
}

PitchCurve warp_pitch_to_amateur_timeline(const PitchCurve& tmpl, const AlignmentPath& path) {
    const std::size_t na = static_cast<std::size_t>(path.pairs.back().first) + 1;
    validate_path(path, na, tmpl.size());
    const std::vector<int> map = path_to_map(path, MapDirection::AmateurToTemplate);

    PitchCurve out;
    out.hop_seconds = tmpl.hop_seconds;
    out.unit = tmpl.unit;
    out.values.resize(map.size());
    out.voiced.resize(map.size());
    for (std::size_t i = 0; i < map.size(); ++i) {
        out.values[i] = tmpl.values[static_cast<std::size_t>(map[i])];
        out.voiced[i] = tmpl.voiced[static_cast<std::size_t>(map[i])];
    }
    return out;
}

}  // namespace pitchwarp
