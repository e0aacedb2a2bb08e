#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "uedge/annotations.hpp"
#include "uedge/map2d.hpp"
#include "uedge/rng.hpp"
#include "uedge/tensor.hpp"

namespace uedge {

/// One randomly generated flat-shaded scene. Same seed, same bytes.
struct SceneSpec {
    uint64_t seed = 0;
    int height = 96;
    int width = 96;
    int n_shapes = 4;
    bool polygons = true;
    bool ellipses = true;
    double contrast_min = 0.25;
    double contrast_max = 0.6;
    double noise_sigma = 0.01;
};

/// Behavioral model of one annotator. The identity profile (all zeros)
/// reproduces the ideal edge map exactly.
struct AnnotatorProfile {
    double jitter_px = 0.0;    // boundary displacement std, in pixels
    double drop_rate = 0.0;    // fraction of edge segments omitted
    double granularity = 0.0;  // probability of adding fine texture edges
};

struct Scene {
    Tensor image;            // 3 x H x W in [0, 1]
    BinaryMap ideal_edges;   // 1-pixel-wide region boundaries
};

/// Closed contour in pixel coordinates; pixel (y, x) is covered when the
/// point (x, y) falls inside by the even-odd rule.
struct Contour {
    std::vector<std::array<double, 2>> pts;  // (x, y)
};

/// Topmost-shape id per pixel (-1 = background). Later contours paint over
/// earlier ones.
Map2d<int> rasterize_ids(const std::vector<Contour>& shapes, int height, int width);

/// Boundary pixels of the id map: a pixel is an edge when some 4-neighbor
/// has a different id and the pixel is on the foreground side.
BinaryMap region_boundary_edges(const Map2d<int>& ids);

Scene generate_scene(const SceneSpec& spec);

/// Applies annotator noise: coherent boundary jitter, per-segment drops,
/// and extra texture strokes. Deterministic given the rng state.
BinaryMap simulate_annotator(const BinaryMap& ideal_edges, const AnnotatorProfile& profile,
                             Rng& rng);

/// Full synthetic dataset description: the synth CLI config mirrors this.
struct DatasetSpec {
    uint64_t seed = 0;
    int n_images = 8;
    int height = 96;
    int width = 96;
    int n_shapes_min = 3;
    int n_shapes_max = 6;
    bool polygons = true;
    bool ellipses = true;
    double contrast_min = 0.25;
    double contrast_max = 0.6;
    double noise_sigma = 0.01;
    std::vector<AnnotatorProfile> profiles;
};

/// Parse/serialize the JSON config. Parse failures name the offending key.
DatasetSpec parse_dataset_spec(const std::string& json_text);
std::string dataset_spec_to_json(const DatasetSpec& spec);

/// Writes images, K annotation PNGs per image and index.json under
/// out_root, in the standard dataset layout. Pure function of the spec.
DatasetIndex generate_dataset(const DatasetSpec& spec, const std::string& out_root);

}  // namespace uedge
