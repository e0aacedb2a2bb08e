#include "uedge/annotations.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <numeric>

#include "json.hpp"
#include "uedge/error.hpp"
#include "uedge/png_io.hpp"

namespace fs = std::filesystem;

namespace uedge {

void AnnotationSet::validate(bool check_values) const {
    if (maps.empty()) throw InvalidInput("annotation set is empty (K must be >= 1)");
    const int h = maps.front().height();
    const int w = maps.front().width();
    if (h <= 0 || w <= 0) throw InvalidInput("annotation maps must be non-empty");
    for (const auto& m : maps) {
        if (m.height() != h || m.width() != w) {
            throw InvalidInput("annotation maps have mismatched shapes");
        }
    }
    if (check_values) {
        for (const auto& m : maps) {
            for (size_t i = 0; i < m.size(); ++i) {
                if (m[i] > 1) throw InvalidInput("annotation map has non-binary value");
            }
        }
    }
}

double WeightMap::sum() const {
    return std::accumulate(weights.raw().begin(), weights.raw().end(), 0.0);
}

MapD annotator_mean(const AnnotationSet& annotations) {
    annotations.validate();
    const int k = annotations.count();
    MapD mean(annotations.height(), annotations.width(), 0.0);
    for (const auto& m : annotations.maps) {
        for (size_t i = 0; i < mean.size(); ++i) mean[i] += m[i];
    }
    for (size_t i = 0; i < mean.size(); ++i) mean[i] /= k;
    return mean;
}

FusedLabel fuse_majority(const AnnotationSet& annotations, double threshold) {
    if (!(threshold > 0.0 && threshold <= 1.0)) {
        throw InvalidInput("fuse_majority: threshold must lie in (0, 1]");
    }
    const MapD mean = annotator_mean(annotations);
    FusedLabel out;
    out.threshold = threshold;
    out.states = Map2d<uint8_t>(mean.height(), mean.width());
    for (size_t i = 0; i < mean.size(); ++i) {
        if (mean[i] >= threshold) {
            out.states[i] = static_cast<uint8_t>(PixelState::kPositive);
        } else if (mean[i] == 0.0) {
            out.states[i] = static_cast<uint8_t>(PixelState::kNegative);
        } else {
            out.states[i] = static_cast<uint8_t>(PixelState::kIgnore);
        }
    }
    return out;
}

VarianceMap label_variance(const AnnotationSet& annotations) {
    // For binary values the population variance reduces to p(1-p); computing
    // it that way keeps the [0, 0.25] bound exact.
    const MapD mean = annotator_mean(annotations);
    VarianceMap var(mean.height(), mean.width());
    for (size_t i = 0; i < mean.size(); ++i) var[i] = mean[i] * (1.0 - mean[i]);
    return var;
}

int sample_annotation_index(const AnnotationSet& annotations, Rng& rng) {
    annotations.validate();
    return static_cast<int>(rng.below(static_cast<uint64_t>(annotations.count())));
}

const BinaryMap& sample_annotation(const AnnotationSet& annotations, Rng& rng) {
    return annotations.maps[sample_annotation_index(annotations, rng)];
}

WeightMap weight_map(const BinaryMap& label) {
    if (label.empty()) throw InvalidInput("weight_map: empty label");
    size_t n_pos = 0;
    for (size_t i = 0; i < label.size(); ++i) {
        if (label[i] > 1) throw InvalidInput("weight_map: label is not binary");
        n_pos += label[i];
    }
    const size_t n_neg = label.size() - n_pos;

    WeightMap out;
    out.alpha = static_cast<double>(n_neg) / static_cast<double>(n_pos + n_neg);
    out.degenerate = (n_pos == 0 || n_neg == 0);
    out.weights = MapD(label.height(), label.width());
    const double w_pos = out.degenerate ? 0.0 : out.alpha;
    const double w_neg = out.degenerate ? 0.0 : 1.0 - out.alpha;
    for (size_t i = 0; i < label.size(); ++i) out.weights[i] = label[i] ? w_pos : w_neg;
    return out;
}

WeightMap weight_map(const FusedLabel& label) {
    if (label.states.empty()) throw InvalidInput("weight_map: empty label");
    size_t n_pos = 0, n_neg = 0;
    for (size_t i = 0; i < label.states.size(); ++i) {
        const auto s = static_cast<PixelState>(label.states[i]);
        if (s == PixelState::kPositive) ++n_pos;
        if (s == PixelState::kNegative) ++n_neg;
    }
    WeightMap out;
    out.alpha = (n_pos + n_neg) == 0
                    ? 1.0
                    : static_cast<double>(n_neg) / static_cast<double>(n_pos + n_neg);
    out.degenerate = (n_pos == 0 || n_neg == 0);
    out.weights = MapD(label.states.height(), label.states.width(), 0.0);
    const double w_pos = out.degenerate ? 0.0 : out.alpha;
    const double w_neg = out.degenerate ? 0.0 : 1.0 - out.alpha;
    for (size_t i = 0; i < label.states.size(); ++i) {
        const auto s = static_cast<PixelState>(label.states[i]);
        if (s == PixelState::kPositive) out.weights[i] = w_pos;
        if (s == PixelState::kNegative) out.weights[i] = w_neg;
    }
    return out;
}

DatasetIndex read_dataset_index(const std::string& root) {
    const fs::path index_path = fs::path(root) / "index.json";
    std::ifstream in(index_path);
    if (!in) throw IoError("cannot open dataset index: " + index_path.string());
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw IoError("malformed dataset index " + index_path.string() + ": " + e.what());
    }
    if (!j.contains("images") || !j["images"].is_array()) {
        throw IoError("dataset index missing \"images\" array: " + index_path.string());
    }
    DatasetIndex index;
    for (const auto& item : j["images"]) {
        DatasetEntry e;
        e.id = item.at("id").get<std::string>();
        e.image_path = item.at("image").get<std::string>();
        e.annotation_dir = item.at("annotations").get<std::string>();
        index.entries.push_back(std::move(e));
    }
    if (index.entries.empty()) throw IoError("dataset index lists no images: " + index_path.string());
    return index;
}

void write_dataset_index(const std::string& root, const DatasetIndex& index) {
    nlohmann::json j;
    j["format"] = "uedge-dataset-v1";
    j["images"] = nlohmann::json::array();
    for (const auto& e : index.entries) {
        j["images"].push_back({{"id", e.id}, {"image", e.image_path}, {"annotations", e.annotation_dir}});
    }
    const fs::path index_path = fs::path(root) / "index.json";
    std::ofstream out(index_path);
    if (!out) throw IoError("cannot write dataset index: " + index_path.string());
    out << j.dump(2) << "\n";
}

AnnotationSet load_annotation_set(const std::string& root, const DatasetEntry& entry) {
    const fs::path dir = fs::path(root) / entry.annotation_dir;
    if (!fs::is_directory(dir)) throw IoError("annotation directory missing: " + dir.string());
    std::vector<fs::path> files;
    for (const auto& p : fs::directory_iterator(dir)) {
        if (p.path().extension() == ".png") files.push_back(p.path());
    }
    std::sort(files.begin(), files.end());
    if (files.empty()) throw IoError("no annotation PNGs in " + dir.string());

    AnnotationSet set;
    set.image_id = entry.id;
    for (const auto& f : files) set.maps.push_back(png::read_mask(f.string()));
    set.validate();
    return set;
}

Tensor load_image(const std::string& root, const DatasetEntry& entry) {
    return png::read_rgb((fs::path(root) / entry.image_path).string());
}

}  // namespace uedge
