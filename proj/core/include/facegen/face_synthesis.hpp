// Copyright 2026 The facegen Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>

#include "facegen/face_corpus.hpp"
#include "facegen/trio_selection.hpp"

namespace facegen {

/// Stable non-negative id for the face generated from a trio.
std::int64_t synthetic_identity(const ExpressionLabel& category, const TrioIds& ids);

/// Per-vertex centroid of the trio's three faces, labelled with the trio's
/// category. Each coordinate is computed from the sorted input values as
/// lo + ((mid - lo) + (hi - lo)) / 3, so identical inputs reproduce exactly
/// and the output stays inside the per-vertex bounding box.
Face synthesize_face(const Corpus& corpus, const TrioScore& trio);

}  // namespace facegen
