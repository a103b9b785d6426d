// SPDX-License-Identifier: Apache-2.0
#ifndef LAYERGEN_SCENE_HPP
#define LAYERGEN_SCENE_HPP

#include <cstdint>
#include <filesystem>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace layergen {

class SceneError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Normalized box, top-left origin, [x0, y0, x1, y1] with x0 <= x1, y0 <= y1.
struct Box {
    double x0 = 0.0;
    double y0 = 0.0;
    double x1 = 0.0;
    double y1 = 0.0;

    bool valid() const {
        return 0.0 <= x0 && x0 <= x1 && x1 <= 1.0 && 0.0 <= y0 && y0 <= y1 && y1 <= 1.0;
    }
    double center_x() const { return 0.5 * (x0 + x1); }
    double center_y() const { return 0.5 * (y0 + y1); }
    double area() const { return (x1 - x0) * (y1 - y0); }
};

struct KeyframeBox {
    int frame = 1;  // 1-based
    Box box;
    bool is_key = true;
};

// Per-frame box sequence, length == scene frame count.
struct BBoxTrack {
    std::vector<Box> boxes;
    std::set<int> key_frames;  // 1-based frame indices

    int frames() const { return static_cast<int>(boxes.size()); }
    const Box& box_for_frame(int frame) const { return boxes[frame - 1]; }
    bool is_key_frame(int frame) const { return key_frames.count(frame) > 0; }
};

struct GuidanceConfig {
    double lambda = 2.5;            // cross-attention influence coefficient
    double gamma_key = 1.2;         // key-frame amplification
    double mu1 = 1.5;               // sharing weight, within-plane
    double mu2 = 2.0;               // sharing weight, cross-plane
    double t_eps_fraction = 0.5;    // stage switch point as a fraction of T
    double cross_attn_window = 0.10;
    double oas_window = 0.50;
};

struct LayerSpec {
    std::string prompt;
    std::vector<KeyframeBox> track;
};

struct SceneSpec {
    std::string background_prompt;
    std::vector<LayerSpec> layers;  // order = generation order = occlusion order
    int frames = 16;
    int steps = 50;
    int image_width = 256;
    int image_height = 256;
    int latent_h = 32;
    int latent_w = 32;
    int latent_ch = 4;
    uint64_t seed = 0;
    GuidanceConfig guidance;
};

// Half-open cell range on a latent grid: rows [row0, row1), cols [col0, col1).
struct CellRange {
    int row0 = 0;
    int col0 = 0;
    int row1 = 0;
    int col1 = 0;

    int height() const { return row1 - row0; }
    int width() const { return col1 - col0; }
    bool contains(int row, int col) const {
        return row >= row0 && row < row1 && col >= col0 && col < col1;
    }
};

SceneSpec parse_scene(const std::string& json_text);
SceneSpec load_scene(const std::filesystem::path& path);
std::string scene_to_json(const SceneSpec& scene);

// Piecewise-linear expansion of key-frames into a per-frame track. A single
// key-frame is replicated across all frames (static trajectory). With two or
// more key-frames the first must sit at frame 1 and the last at frame
// `frames`.
BBoxTrack interpolate_track(const std::vector<KeyframeBox>& keyframes, int frames);

// Floor the start edge, ceil the end edge, clamp to the grid, and expand
// degenerate results to a single cell so the range is never empty.
CellRange scale_to_latent_grid(const Box& box, int grid_h, int grid_w);

void validate_scene(const SceneSpec& scene);

}  // namespace layergen

#endif
