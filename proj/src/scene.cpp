// SPDX-License-Identifier: Apache-2.0
#include "layergen/scene.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace layergen {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& msg) { throw SceneError(msg); }

double require_number(const json& j, const std::string& field) {
    if (!j.is_number()) fail("field '" + field + "' must be a number");
    return j.get<double>();
}

int require_int(const json& j, const std::string& field) {
    if (!j.is_number_integer()) fail("field '" + field + "' must be an integer");
    return j.get<int>();
}

Box parse_box(const json& j, const std::string& field) {
    if (!j.is_array() || j.size() != 4) {
        fail("field '" + field + "' must be an array [x0, y0, x1, y1]");
    }
    Box box;
    box.x0 = require_number(j[0], field);
    box.y0 = require_number(j[1], field);
    box.x1 = require_number(j[2], field);
    box.y1 = require_number(j[3], field);
    if (!box.valid()) {
        fail("field '" + field + "' violates box invariants (normalized, x0<=x1, y0<=y1)");
    }
    return box;
}

}  // namespace

SceneSpec parse_scene(const std::string& json_text) {
    json doc = json::parse(json_text, nullptr, false);
    if (doc.is_discarded()) fail("scene document is not valid JSON");
    if (!doc.is_object()) fail("scene document must be a JSON object");

    SceneSpec scene;
    if (!doc.contains("background_prompt") || !doc["background_prompt"].is_string()) {
        fail("field 'background_prompt' is required and must be a string");
    }
    scene.background_prompt = doc["background_prompt"].get<std::string>();

    if (doc.contains("frames")) scene.frames = require_int(doc["frames"], "frames");
    if (doc.contains("steps")) scene.steps = require_int(doc["steps"], "steps");
    if (doc.contains("seed")) {
        if (!doc["seed"].is_number_unsigned() && !doc["seed"].is_number_integer()) {
            fail("field 'seed' must be a non-negative integer");
        }
        if (doc["seed"].is_number_integer() && doc["seed"].get<int64_t>() < 0) {
            fail("field 'seed' must be a non-negative integer");
        }
        scene.seed = doc["seed"].get<uint64_t>();
    }
    if (doc.contains("resolution")) {
        const json& res = doc["resolution"];
        if (!res.is_object()) fail("field 'resolution' must be an object {width, height}");
        if (res.contains("width")) scene.image_width = require_int(res["width"], "resolution.width");
        if (res.contains("height")) scene.image_height = require_int(res["height"], "resolution.height");
    }
    if (doc.contains("latent")) {
        const json& lat = doc["latent"];
        if (!lat.is_object()) fail("field 'latent' must be an object {h, w, ch}");
        if (lat.contains("h")) scene.latent_h = require_int(lat["h"], "latent.h");
        if (lat.contains("w")) scene.latent_w = require_int(lat["w"], "latent.w");
        if (lat.contains("ch")) scene.latent_ch = require_int(lat["ch"], "latent.ch");
    }
    if (doc.contains("guidance")) {
        const json& g = doc["guidance"];
        if (!g.is_object()) fail("field 'guidance' must be an object");
        GuidanceConfig& cfg = scene.guidance;
        if (g.contains("lambda")) cfg.lambda = require_number(g["lambda"], "guidance.lambda");
        if (g.contains("gamma_key")) cfg.gamma_key = require_number(g["gamma_key"], "guidance.gamma_key");
        if (g.contains("mu1")) cfg.mu1 = require_number(g["mu1"], "guidance.mu1");
        if (g.contains("mu2")) cfg.mu2 = require_number(g["mu2"], "guidance.mu2");
        if (g.contains("t_eps_fraction")) {
            cfg.t_eps_fraction = require_number(g["t_eps_fraction"], "guidance.t_eps_fraction");
        }
        if (g.contains("cross_attn_window")) {
            cfg.cross_attn_window = require_number(g["cross_attn_window"], "guidance.cross_attn_window");
        }
        if (g.contains("oas_window")) {
            cfg.oas_window = require_number(g["oas_window"], "guidance.oas_window");
        }
    }
    if (doc.contains("layers")) {
        const json& layers = doc["layers"];
        if (!layers.is_array()) fail("field 'layers' must be an array");
        for (size_t i = 0; i < layers.size(); ++i) {
            const json& jl = layers[i];
            std::string where = "layers[" + std::to_string(i) + "]";
            if (!jl.is_object()) fail("field '" + where + "' must be an object");
            LayerSpec layer;
            if (!jl.contains("prompt") || !jl["prompt"].is_string()) {
                fail("field '" + where + ".prompt' is required and must be a string");
            }
            layer.prompt = jl["prompt"].get<std::string>();
            if (!jl.contains("keyframes") || !jl["keyframes"].is_array() || jl["keyframes"].empty()) {
                fail("field '" + where + ".keyframes' must be a non-empty array");
            }
            for (size_t k = 0; k < jl["keyframes"].size(); ++k) {
                const json& jk = jl["keyframes"][k];
                std::string kwhere = where + ".keyframes[" + std::to_string(k) + "]";
                if (!jk.is_object()) fail("field '" + kwhere + "' must be an object");
                KeyframeBox kf;
                if (!jk.contains("frame")) fail("field '" + kwhere + ".frame' is required");
                kf.frame = require_int(jk["frame"], kwhere + ".frame");
                if (!jk.contains("box")) fail("field '" + kwhere + ".box' is required");
                kf.box = parse_box(jk["box"], kwhere + ".box");
                layer.track.push_back(kf);
            }
            scene.layers.push_back(std::move(layer));
        }
    }

    validate_scene(scene);
    return scene;
}

SceneSpec load_scene(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) fail("cannot open scene file: " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_scene(buf.str());
}

std::string scene_to_json(const SceneSpec& scene) {
    json doc;
    doc["background_prompt"] = scene.background_prompt;
    doc["frames"] = scene.frames;
    doc["steps"] = scene.steps;
    doc["seed"] = scene.seed;
    doc["resolution"] = {{"width", scene.image_width}, {"height", scene.image_height}};
    doc["latent"] = {{"h", scene.latent_h}, {"w", scene.latent_w}, {"ch", scene.latent_ch}};
    doc["guidance"] = {{"lambda", scene.guidance.lambda},
                       {"gamma_key", scene.guidance.gamma_key},
                       {"mu1", scene.guidance.mu1},
                       {"mu2", scene.guidance.mu2},
                       {"t_eps_fraction", scene.guidance.t_eps_fraction},
                       {"cross_attn_window", scene.guidance.cross_attn_window},
                       {"oas_window", scene.guidance.oas_window}};
    doc["layers"] = json::array();
    for (const LayerSpec& layer : scene.layers) {
        json jl;
        jl["prompt"] = layer.prompt;
        jl["keyframes"] = json::array();
        for (const KeyframeBox& kf : layer.track) {
            jl["keyframes"].push_back(
                {{"frame", kf.frame}, {"box", {kf.box.x0, kf.box.y0, kf.box.x1, kf.box.y1}}});
        }
        doc["layers"].push_back(std::move(jl));
    }
    return doc.dump(2);
}

void validate_scene(const SceneSpec& scene) {
    if (scene.frames < 1) fail("field 'frames' must be >= 1");
    if (scene.steps < 1) fail("field 'steps' must be >= 1");
    if (scene.image_width < 1 || scene.image_height < 1) fail("field 'resolution' must be positive");
    if (scene.latent_h < 1 || scene.latent_w < 1 || scene.latent_ch < 1) {
        fail("field 'latent' dimensions must be positive");
    }
    const GuidanceConfig& g = scene.guidance;
    if (g.lambda < 0.0) fail("field 'guidance.lambda' must be >= 0");
    if (g.gamma_key < 1.0) fail("field 'guidance.gamma_key' must be >= 1");
    if (g.mu1 < 1.0 || g.mu2 < 1.0) fail("fields 'guidance.mu1'/'guidance.mu2' must be >= 1");
    if (g.t_eps_fraction < 0.0 || g.t_eps_fraction > 1.0) {
        fail("field 'guidance.t_eps_fraction' must be in [0, 1]");
    }
    if (g.cross_attn_window < 0.0 || g.cross_attn_window > 1.0) {
        fail("field 'guidance.cross_attn_window' must be in [0, 1]");
    }
    if (g.oas_window < 0.0 || g.oas_window > 1.0) {
        fail("field 'guidance.oas_window' must be in [0, 1]");
    }
    for (size_t i = 0; i < scene.layers.size(); ++i) {
        const LayerSpec& layer = scene.layers[i];
        std::string where = "layers[" + std::to_string(i) + "]";
        if (layer.prompt.empty()) fail("field '" + where + ".prompt' must be non-empty");
        if (layer.track.empty()) fail("field '" + where + ".keyframes' must be non-empty");
        int prev = 0;
        for (const KeyframeBox& kf : layer.track) {
            if (kf.frame < 1 || kf.frame > scene.frames) {
                fail("field '" + where + "' has key-frame at frame " + std::to_string(kf.frame) +
                     " outside [1, " + std::to_string(scene.frames) + "]");
            }
            if (kf.frame <= prev) {
                fail("field '" + where + "' key-frames must be strictly increasing");
            }
            prev = kf.frame;
        }
        if (layer.track.size() >= 2) {
            if (layer.track.front().frame != 1) {
                fail("field '" + where + "' first key-frame must be at frame 1");
            }
            if (layer.track.back().frame != scene.frames) {
                fail("field '" + where + "' last key-frame must be at frame " +
                     std::to_string(scene.frames));
            }
        }
    }
}

BBoxTrack interpolate_track(const std::vector<KeyframeBox>& keyframes, int frames) {
    if (keyframes.empty()) fail("interpolate_track: empty key-frame list");
    if (frames < 1) fail("interpolate_track: frame count must be >= 1");
    for (const KeyframeBox& kf : keyframes) {
        if (!kf.box.valid()) fail("interpolate_track: key-frame box violates invariants");
        if (kf.frame < 1 || kf.frame > frames) {
            fail("interpolate_track: key-frame at frame " + std::to_string(kf.frame) +
                 " outside [1, " + std::to_string(frames) + "]");
        }
    }

    // A single key-frame means a static trajectory: replicate it to both ends.
    std::vector<KeyframeBox> keys = keyframes;
    if (keys.size() == 1) {
        KeyframeBox first = keys.front();
        KeyframeBox last = keys.front();
        first.frame = 1;
        last.frame = frames;
        keys = frames > 1 ? std::vector<KeyframeBox>{first, last} : std::vector<KeyframeBox>{first};
    }
    for (size_t i = 1; i < keys.size(); ++i) {
        if (keys[i].frame <= keys[i - 1].frame) {
            fail("interpolate_track: key-frames must be strictly increasing");
        }
    }
    if (keys.front().frame != 1) fail("interpolate_track: first key-frame must be at frame 1");
    if (keys.back().frame != frames) {
        fail("interpolate_track: last key-frame must be at frame " + std::to_string(frames));
    }

    BBoxTrack track;
    track.boxes.resize(frames);
    for (const KeyframeBox& kf : keys) track.key_frames.insert(kf.frame);

    track.boxes[keys.front().frame - 1] = keys.front().box;
    for (size_t s = 1; s < keys.size(); ++s) {
        const KeyframeBox& a = keys[s - 1];
        const KeyframeBox& b = keys[s];
        track.boxes[a.frame - 1] = a.box;
        track.boxes[b.frame - 1] = b.box;
        for (int f = a.frame + 1; f < b.frame; ++f) {
            double t = static_cast<double>(f - a.frame) / static_cast<double>(b.frame - a.frame);
            Box& out = track.boxes[f - 1];
            out.x0 = a.box.x0 + t * (b.box.x0 - a.box.x0);
            out.y0 = a.box.y0 + t * (b.box.y0 - a.box.y0);
            out.x1 = a.box.x1 + t * (b.box.x1 - a.box.x1);
            out.y1 = a.box.y1 + t * (b.box.y1 - a.box.y1);
        }
    }
    return track;
}

CellRange scale_to_latent_grid(const Box& box, int grid_h, int grid_w) {
    CellRange range;
    range.row0 = std::clamp(static_cast<int>(std::floor(box.y0 * grid_h)), 0, grid_h);
    range.col0 = std::clamp(static_cast<int>(std::floor(box.x0 * grid_w)), 0, grid_w);
    range.row1 = std::clamp(static_cast<int>(std::ceil(box.y1 * grid_h)), 0, grid_h);
    range.col1 = std::clamp(static_cast<int>(std::ceil(box.x1 * grid_w)), 0, grid_w);
    // Degenerate boxes expand to a minimal 1x1 cell.
    if (range.row1 <= range.row0) {
        if (range.row0 >= grid_h) range.row0 = grid_h - 1;
        range.row1 = range.row0 + 1;
    }
    if (range.col1 <= range.col0) {
        if (range.col0 >= grid_w) range.col0 = grid_w - 1;
        range.col1 = range.col0 + 1;
    }
    return range;
}

}  // namespace layergen
