#pragma once

#include <filesystem>

#include "pitchwarp/align_core.hpp"
#include "pitchwarp/curve.hpp"

namespace pitchwarp::io {

/// Two stacked polylines (amateur on top, template below) with chords
/// connecting a subsample of the aligned frame pairs.
void write_alignment_svg(const std::filesystem::path& file, const PitchCurve& amateur,
                         const PitchCurve& tmpl, const AlignmentPath& path);

/// Binary PGM (P5) of the cost matrix, normalized to its maximum entry.
void write_cost_pgm(const std::filesystem::path& file, const CostMatrix& cost);

}  // namespace pitchwarp::io
