#pragma once

#include <string>
#include <vector>

#include "uedge/map2d.hpp"
#include "uedge/rng.hpp"
#include "uedge/tensor.hpp"

namespace uedge {

/// The K independent binary edge labelings of one image.
struct AnnotationSet {
    std::string image_id;
    std::vector<BinaryMap> maps;

    int count() const { return static_cast<int>(maps.size()); }
    int height() const { return maps.empty() ? 0 : maps.front().height(); }
    int width() const { return maps.empty() ? 0 : maps.front().width(); }

    /// Shape/cardinality check; with check_values also verifies every
    /// pixel is exactly 0 or 1. Throws InvalidInput.
    void validate(bool check_values = false) const;
};

enum class PixelState : uint8_t { kNegative = 0, kPositive = 1, kIgnore = 2 };

/// Tri-state supervision map from majority voting: mean annotation >=
/// threshold is positive, exactly zero is negative, anything in between
/// is ignored.
struct FusedLabel {
    Map2d<uint8_t> states;  // PixelState values
    double threshold = 0.3;

    PixelState at(int y, int x) const { return static_cast<PixelState>(states.at(y, x)); }
};

/// Per-pixel population variance of the K binary labels; values lie in
/// [0, 0.25] and equal p(1-p) for annotator mean p.
using VarianceMap = MapD;

/// Class-balance weights: alpha at positive pixels, 1-alpha at negative
/// ones. degenerate marks labels with no positives or no negatives, in
/// which case every weight is zero.
struct WeightMap {
    double alpha = 0.0;
    MapD weights;
    bool degenerate = false;

    double sum() const;
};

/// Per-pixel annotator mean (fraction of annotators marking the pixel).
MapD annotator_mean(const AnnotationSet& annotations);

FusedLabel fuse_majority(const AnnotationSet& annotations, double threshold);

VarianceMap label_variance(const AnnotationSet& annotations);

/// Uniform pick among the K maps; deterministic given the rng state.
int sample_annotation_index(const AnnotationSet& annotations, Rng& rng);
const BinaryMap& sample_annotation(const AnnotationSet& annotations, Rng& rng);

WeightMap weight_map(const BinaryMap& label);
/// Fused-label variant: ignored pixels get zero weight and do not count
/// toward alpha.
WeightMap weight_map(const FusedLabel& label);

// --- on-disk dataset layout -------------------------------------------
//
// <root>/index.json                      image_id -> paths
// <root>/images/<id>.png                 8-bit RGB
// <root>/annotations/<id>/a<k>.png       8-bit gray, values {0, 255}

struct DatasetEntry {
    std::string id;
    std::string image_path;      // relative to root
    std::string annotation_dir;  // relative to root
};

struct DatasetIndex {
    std::vector<DatasetEntry> entries;
};

DatasetIndex read_dataset_index(const std::string& root);
void write_dataset_index(const std::string& root, const DatasetIndex& index);

AnnotationSet load_annotation_set(const std::string& root, const DatasetEntry& entry);
Tensor load_image(const std::string& root, const DatasetEntry& entry);

}  // namespace uedge
