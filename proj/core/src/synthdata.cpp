#include "uedge/synthdata.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>

#include "json.hpp"
#include "uedge/error.hpp"
#include "uedge/png_io.hpp"

namespace fs = std::filesystem;

namespace uedge {

namespace {

bool point_in_contour(const Contour& c, double x, double y) {
    bool inside = false;
    const size_t n = c.pts.size();
    for (size_t i = 0, j = n - 1; i < n; j = i++) {
        const double xi = c.pts[i][0], yi = c.pts[i][1];
        const double xj = c.pts[j][0], yj = c.pts[j][1];
        if ((yi > y) != (yj > y) && x < (xj - xi) * (y - yi) / (yj - yi) + xi) {
            inside = !inside;
        }
    }
    return inside;
}

Contour random_polygon(Rng& rng, double cx, double cy, double radius) {
    const int n = 3 + static_cast<int>(rng.below(6));  // 3..8 vertices
    Contour c;
    const double phase = rng.uniform(0.0, 2.0 * M_PI);
    for (int i = 0; i < n; ++i) {
        const double angle = phase + 2.0 * M_PI * i / n + rng.uniform(-0.25, 0.25);
        const double r = radius * rng.uniform(0.55, 1.0);
        c.pts.push_back({cx + r * std::cos(angle), cy + r * std::sin(angle)});
    }
    return c;
}

Contour random_ellipse(Rng& rng, double cx, double cy, double radius) {
    const double a = radius * rng.uniform(0.6, 1.0);
    const double b = radius * rng.uniform(0.35, 0.9);
    const double rot = rng.uniform(0.0, M_PI);
    const int n = 40;
    Contour c;
    for (int i = 0; i < n; ++i) {
        const double t = 2.0 * M_PI * i / n;
        const double ex = a * std::cos(t), ey = b * std::sin(t);
        c.pts.push_back({cx + ex * std::cos(rot) - ey * std::sin(rot),
                         cy + ex * std::sin(rot) + ey * std::cos(rot)});
    }
    return c;
}

void bresenham(int x0, int y0, int x1, int y1, BinaryMap& out) {
    const int dx = std::abs(x1 - x0), dy = -std::abs(y1 - y0);
    const int sx = x0 < x1 ? 1 : -1, sy = y0 < y1 ? 1 : -1;
    int err = dx + dy;
    while (true) {
        if (out.in_bounds(y0, x0)) out.at(y0, x0) = 1;
        if (x0 == x1 && y0 == y1) break;
        const int e2 = 2 * err;
        if (e2 >= dy) {
            err += dy;
            x0 += sx;
        }
        if (e2 <= dx) {
            err += dx;
            y0 += sy;
        }
    }
}

// Ordered pixel paths covering every set pixel exactly once. Endpoints
// (degree-1 pixels) start chains first so open curves trace end to end.
std::vector<std::vector<std::array<int, 2>>> trace_chains(const BinaryMap& edges) {
    const int h = edges.height(), w = edges.width();
    Map2d<uint8_t> visited(h, w, 0);
    static const int kNbr[8][2] = {{0, 1},  {1, 1},   {1, 0},  {1, -1},
                                   {0, -1}, {-1, -1}, {-1, 0}, {-1, 1}};

    auto unvisited_degree = [&](int y, int x) {
        int d = 0;
        for (const auto& nb : kNbr) {
            const int ny = y + nb[0], nx = x + nb[1];
            if (edges.in_bounds(ny, nx) && edges.at(ny, nx) && !visited.at(ny, nx)) ++d;
        }
        return d;
    };

    auto walk = [&](int y, int x) {
        std::vector<std::array<int, 2>> chain;
        while (true) {
            visited.at(y, x) = 1;
            chain.push_back({y, x});
            int best_y = -1, best_x = -1, best_deg = 9;
            for (const auto& nb : kNbr) {
                const int ny = y + nb[0], nx = x + nb[1];
                if (!edges.in_bounds(ny, nx) || !edges.at(ny, nx) || visited.at(ny, nx)) continue;
                // prefer the continuation with fewest onward options: hugs
                // thin curves instead of veering into junctions
                const int deg = unvisited_degree(ny, nx);
                if (deg < best_deg) {
                    best_deg = deg;
                    best_y = ny;
                    best_x = nx;
                }
            }
            if (best_y < 0) break;
            y = best_y;
            x = best_x;
        }
        return chain;
    };

    std::vector<std::vector<std::array<int, 2>>> chains;
    for (int pass = 0; pass < 2; ++pass) {
        for (int y = 0; y < h; ++y) {
            for (int x = 0; x < w; ++x) {
                if (!edges.at(y, x) || visited.at(y, x)) continue;
                if (pass == 0 && unvisited_degree(y, x) > 1) continue;  // endpoints first
                chains.push_back(walk(y, x));
            }
        }
    }
    return chains;
}

void rasterize_polyline(const std::vector<std::array<int, 2>>& pts, BinaryMap& out) {
    if (pts.empty()) return;
    if (pts.size() == 1) {
        if (out.in_bounds(pts[0][0], pts[0][1])) out.at(pts[0][0], pts[0][1]) = 1;
        return;
    }
    for (size_t i = 0; i + 1 < pts.size(); ++i) {
        bresenham(pts[i][1], pts[i][0], pts[i + 1][1], pts[i + 1][0], out);
    }
}

constexpr int kAnchorSpacing = 8;
constexpr int kDropSegmentLen = 9;

}  // namespace

Map2d<int> rasterize_ids(const std::vector<Contour>& shapes, int height, int width) {
    if (height <= 0 || width <= 0) throw InvalidInput("rasterize_ids: zero-area canvas");
    Map2d<int> ids(height, width, -1);
    for (int y = 0; y < height; ++y) {
        for (int x = 0; x < width; ++x) {
            for (int s = static_cast<int>(shapes.size()) - 1; s >= 0; --s) {
                if (point_in_contour(shapes[s], x, y)) {
                    ids.at(y, x) = s;
                    break;
                }
            }
        }
    }
    return ids;
}

BinaryMap region_boundary_edges(const Map2d<int>& ids) {
    const int h = ids.height(), w = ids.width();
    BinaryMap edges(h, w, 0);
    static const int kNbr4[4][2] = {{0, 1}, {1, 0}, {0, -1}, {-1, 0}};
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            const int id = ids.at(y, x);
            for (const auto& nb : kNbr4) {
                const int ny = y + nb[0], nx = x + nb[1];
                if (!ids.in_bounds(ny, nx)) continue;
                if (ids.at(ny, nx) != id && id > ids.at(ny, nx)) {
                    edges.at(y, x) = 1;
                    break;
                }
            }
        }
    }
    return edges;
}

Scene generate_scene(const SceneSpec& spec) {
    if (spec.height <= 0 || spec.width <= 0) throw InvalidInput("generate_scene: zero-area canvas");
    if (spec.n_shapes < 0) throw InvalidInput("generate_scene: negative shape count");
    if (!spec.polygons && !spec.ellipses && spec.n_shapes > 0) {
        throw InvalidInput("generate_scene: no shape kinds enabled");
    }

    Rng rng(spec.seed);
    const int h = spec.height, w = spec.width;

    const double bg_lum = rng.uniform(0.3, 0.7);
    std::array<double, 3> bg = {bg_lum + rng.uniform(-0.05, 0.05),
                                bg_lum + rng.uniform(-0.05, 0.05),
                                bg_lum + rng.uniform(-0.05, 0.05)};

    std::vector<Contour> shapes;
    std::vector<std::array<double, 3>> colors;
    for (int i = 0; i < spec.n_shapes; ++i) {
        const double cx = rng.uniform(0.15, 0.85) * w;
        const double cy = rng.uniform(0.15, 0.85) * h;
        const double radius = rng.uniform(0.12, 0.32) * std::min(h, w);
        const bool use_poly = spec.polygons && (!spec.ellipses || rng.coin());
        shapes.push_back(use_poly ? random_polygon(rng, cx, cy, radius)
                                  : random_ellipse(rng, cx, cy, radius));

        const double delta = rng.uniform(spec.contrast_min, spec.contrast_max);
        const double lum = std::clamp(bg_lum + (rng.coin() ? delta : -delta), 0.02, 0.98);
        std::array<double, 3> col;
        for (auto& c : col) c = std::clamp(lum + rng.uniform(-0.1, 0.1), 0.0, 1.0);
        colors.push_back(col);
    }

    const Map2d<int> ids = rasterize_ids(shapes, h, w);

    Tensor flat(3, h, w);
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            const int id = ids.at(y, x);
            const auto& col = id < 0 ? bg : colors[id];
            for (int c = 0; c < 3; ++c) flat.at(c, y, x) = col[c];
        }
    }

    // 3x3 binomial blur softens the step edges, then mild sensor noise.
    Scene scene;
    scene.image = Tensor(3, h, w);
    static const double kK[3] = {0.25, 0.5, 0.25};
    for (int c = 0; c < 3; ++c) {
        for (int y = 0; y < h; ++y) {
            for (int x = 0; x < w; ++x) {
                double acc = 0.0;
                for (int dy = -1; dy <= 1; ++dy) {
                    for (int dx = -1; dx <= 1; ++dx) {
                        const int yy = std::clamp(y + dy, 0, h - 1);
                        const int xx = std::clamp(x + dx, 0, w - 1);
                        acc += kK[dy + 1] * kK[dx + 1] * flat.at(c, yy, xx);
                    }
                }
                scene.image.at(c, y, x) = acc;
            }
        }
    }
    if (spec.noise_sigma > 0) {
        for (size_t i = 0; i < scene.image.size(); ++i) {
            scene.image[i] = std::clamp(scene.image[i] + rng.normal(0.0, spec.noise_sigma), 0.0, 1.0);
        }
    }

    scene.ideal_edges = region_boundary_edges(ids);
    return scene;
}

BinaryMap simulate_annotator(const BinaryMap& ideal_edges, const AnnotatorProfile& profile,
                             Rng& rng) {
    if (profile.jitter_px < 0 || profile.drop_rate < 0 || profile.drop_rate > 1 ||
        profile.granularity < 0) {
        throw InvalidInput("simulate_annotator: invalid profile");
    }
    const int h = ideal_edges.height(), w = ideal_edges.width();
    BinaryMap out(h, w, 0);
    const auto chains = trace_chains(ideal_edges);

    for (const auto& chain : chains) {
        // segment drops on the original chain
        std::vector<uint8_t> keep(chain.size(), 1);
        if (profile.drop_rate > 0) {
            for (size_t s = 0; s < chain.size(); s += kDropSegmentLen) {
                const bool drop = rng.coin(profile.drop_rate);
                if (drop) {
                    for (size_t i = s; i < std::min(chain.size(), s + kDropSegmentLen); ++i) keep[i] = 0;
                }
            }
        }

        // coherent jitter: gaussian offsets at sparse anchors, linear in between
        std::vector<std::array<int, 2>> pts;
        if (profile.jitter_px > 0) {
            const size_t n = chain.size();
            const size_t n_anchors = 2 + (n - 1) / kAnchorSpacing;
            std::vector<std::array<double, 2>> anchor(n_anchors);
            for (auto& a : anchor) {
                a = {rng.normal(0.0, profile.jitter_px), rng.normal(0.0, profile.jitter_px)};
            }
            pts.reserve(n);
            for (size_t i = 0; i < n; ++i) {
                const double pos = n == 1 ? 0.0
                                          : static_cast<double>(i) / (n - 1) * (n_anchors - 1);
                const size_t a0 = std::min(n_anchors - 2, static_cast<size_t>(pos));
                const double frac = pos - a0;
                const double oy = anchor[a0][0] * (1 - frac) + anchor[a0 + 1][0] * frac;
                const double ox = anchor[a0][1] * (1 - frac) + anchor[a0 + 1][1] * frac;
                pts.push_back({static_cast<int>(std::lround(chain[i][0] + oy)),
                               static_cast<int>(std::lround(chain[i][1] + ox))});
            }
        } else {
            pts.assign(chain.begin(), chain.end());
        }

        // rasterize kept runs as connected polylines
        size_t i = 0;
        while (i < pts.size()) {
            if (!keep[i]) {
                ++i;
                continue;
            }
            size_t j = i;
            while (j + 1 < pts.size() && keep[j + 1]) ++j;
            rasterize_polyline({pts.begin() + i, pts.begin() + j + 1}, out);
            i = j + 1;
        }

        // fine texture strokes: short displaced copies of a chain section
        if (profile.granularity > 0 && chain.size() >= 4 && rng.coin(std::min(profile.granularity, 1.0))) {
            const size_t len = 5 + rng.below(11);
            const size_t start = rng.below(chain.size());
            double oy = rng.normal(0.0, 2.0), ox = rng.normal(0.0, 2.0);
            if (std::abs(oy) < 1.5 && std::abs(ox) < 1.5) oy += oy >= 0 ? 2.0 : -2.0;
            std::vector<std::array<int, 2>> stroke;
            for (size_t t = 0; t < len && start + t < chain.size(); ++t) {
                stroke.push_back({static_cast<int>(std::lround(chain[start + t][0] + oy)),
                                  static_cast<int>(std::lround(chain[start + t][1] + ox))});
            }
            rasterize_polyline(stroke, out);
        }
    }
    return out;
}

DatasetSpec parse_dataset_spec(const std::string& json_text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(json_text);
    } catch (const nlohmann::json::exception& e) {
        throw InvalidInput(std::string("synth config is not valid JSON: ") + e.what());
    }

    auto require = [&](const char* key) {
        if (!j.contains(key)) {
            throw InvalidInput(std::string("synth config missing required key \"") + key + "\"");
        }
        return j.at(key);
    };

    DatasetSpec spec;
    spec.seed = require("seed").get<uint64_t>();
    spec.n_images = require("n_images").get<int>();
    spec.height = require("height").get<int>();
    spec.width = require("width").get<int>();
    const auto profiles = require("profiles");
    if (!profiles.is_array() || profiles.empty()) {
        throw InvalidInput("synth config key \"profiles\" must be a non-empty array");
    }
    for (const auto& p : profiles) {
        AnnotatorProfile prof;
        prof.jitter_px = p.value("jitter_px", 0.0);
        prof.drop_rate = p.value("drop_rate", 0.0);
        prof.granularity = p.value("granularity", 0.0);
        spec.profiles.push_back(prof);
    }
    spec.n_shapes_min = j.value("n_shapes_min", spec.n_shapes_min);
    spec.n_shapes_max = j.value("n_shapes_max", spec.n_shapes_max);
    spec.polygons = j.value("polygons", spec.polygons);
    spec.ellipses = j.value("ellipses", spec.ellipses);
    spec.contrast_min = j.value("contrast_min", spec.contrast_min);
    spec.contrast_max = j.value("contrast_max", spec.contrast_max);
    spec.noise_sigma = j.value("noise_sigma", spec.noise_sigma);

    if (spec.n_images < 1) throw InvalidInput("synth config key \"n_images\" must be >= 1");
    if (spec.height < 1 || spec.width < 1) {
        throw InvalidInput("synth config keys \"height\"/\"width\" must be >= 1");
    }
    if (spec.n_shapes_min < 0 || spec.n_shapes_max < spec.n_shapes_min) {
        throw InvalidInput("synth config shape-count range is invalid (\"n_shapes_min\"/\"n_shapes_max\")");
    }
    for (const auto& p : spec.profiles) {
        if (p.jitter_px < 0 || p.drop_rate < 0 || p.drop_rate > 1 || p.granularity < 0) {
            throw InvalidInput("synth config has an invalid annotator profile");
        }
    }
    return spec;
}

std::string dataset_spec_to_json(const DatasetSpec& spec) {
    nlohmann::json j;
    j["seed"] = spec.seed;
    j["n_images"] = spec.n_images;
    j["height"] = spec.height;
    j["width"] = spec.width;
    j["n_shapes_min"] = spec.n_shapes_min;
    j["n_shapes_max"] = spec.n_shapes_max;
    j["polygons"] = spec.polygons;
    j["ellipses"] = spec.ellipses;
    j["contrast_min"] = spec.contrast_min;
    j["contrast_max"] = spec.contrast_max;
    j["noise_sigma"] = spec.noise_sigma;
    j["profiles"] = nlohmann::json::array();
    for (const auto& p : spec.profiles) {
        j["profiles"].push_back({{"jitter_px", p.jitter_px},
                                 {"drop_rate", p.drop_rate},
                                 {"granularity", p.granularity}});
    }
    return j.dump(2);
}

DatasetIndex generate_dataset(const DatasetSpec& spec, const std::string& out_root) {
    if (spec.profiles.empty()) throw InvalidInput("generate_dataset: no annotator profiles");
    std::error_code ec;
    fs::create_directories(fs::path(out_root) / "images", ec);
    fs::create_directories(fs::path(out_root) / "annotations", ec);
    if (!fs::is_directory(fs::path(out_root) / "images") ||
        !fs::is_directory(fs::path(out_root) / "annotations")) {
        throw IoError("generate_dataset: cannot create output directories under " + out_root);
    }

    DatasetIndex index;
    char buf[32];
    for (int i = 0; i < spec.n_images; ++i) {
        std::snprintf(buf, sizeof(buf), "img_%04d", i);
        const std::string id = buf;

        SceneSpec scene_spec;
        scene_spec.seed = derive_seed(spec.seed, static_cast<uint64_t>(i) * 64);
        scene_spec.height = spec.height;
        scene_spec.width = spec.width;
        scene_spec.polygons = spec.polygons;
        scene_spec.ellipses = spec.ellipses;
        scene_spec.contrast_min = spec.contrast_min;
        scene_spec.contrast_max = spec.contrast_max;
        scene_spec.noise_sigma = spec.noise_sigma;
        Rng count_rng(derive_seed(spec.seed, static_cast<uint64_t>(i) * 64 + 63));
        scene_spec.n_shapes =
            spec.n_shapes_min +
            static_cast<int>(count_rng.below(static_cast<uint64_t>(spec.n_shapes_max - spec.n_shapes_min + 1)));

        const Scene scene = generate_scene(scene_spec);

        DatasetEntry entry;
        entry.id = id;
        entry.image_path = "images/" + id + ".png";
        entry.annotation_dir = "annotations/" + id;
        fs::create_directories(fs::path(out_root) / entry.annotation_dir);

        png::write_rgb((fs::path(out_root) / entry.image_path).string(), scene.image);
        for (size_t k = 0; k < spec.profiles.size(); ++k) {
            Rng ann_rng(derive_seed(spec.seed, static_cast<uint64_t>(i) * 64 + 1 + k));
            const BinaryMap ann = simulate_annotator(scene.ideal_edges, spec.profiles[k], ann_rng);
            std::snprintf(buf, sizeof(buf), "a%02zu.png", k);
            png::write_mask((fs::path(out_root) / entry.annotation_dir / buf).string(), ann);
        }
        index.entries.push_back(std::move(entry));
    }
    write_dataset_index(out_root, index);
    return index;
}

}  // namespace uedge
