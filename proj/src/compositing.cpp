// SPDX-License-Identifier: Apache-2.0
#include "layergen/compositing.hpp"

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <random>

#include "layergen/image_io.hpp"

namespace layergen {

namespace fs = std::filesystem;

Frame<3> alpha_over_frame(const Frame<3>& bg, const Frame<4>& fg) {
    if (bg.h != fg.h || bg.w != fg.w) {
        throw CompositingError("alpha_over_frame: frame dimensions do not match");
    }
    Frame<3> out(bg.h, bg.w);
    for (int y = 0; y < bg.h; ++y) {
        for (int x = 0; x < bg.w; ++x) {
            double a = fg.at(y, x, 3);
            for (int c = 0; c < 3; ++c) {
                out.at(y, x, c) = fg.at(y, x, c) * a + bg.at(y, x, c) * (1.0 - a);
            }
        }
    }
    return out;
}

RgbVideo blend_layers(const LayerStack& stack) {
    for (const RgbaVideo& fg : stack.foregrounds) {
        if (fg.frames != stack.background.frames || fg.h != stack.background.h ||
            fg.w != stack.background.w) {
            throw CompositingError("blend_layers: layer dimensions do not match the background");
        }
    }
    RgbVideo out = stack.background;
    for (int f = 0; f < out.frames; ++f) {
        Frame<3> acc = out.frame(f);
        for (const RgbaVideo& fg : stack.foregrounds) {
            acc = alpha_over_frame(acc, fg.frame(f));
        }
        out.set_frame(f, acc);
    }
    return out;
}

namespace {

fs::path fresh_temp_dir() {
    fs::path base = fs::temp_directory_path();
    std::random_device rd;
    for (int attempt = 0; attempt < 64; ++attempt) {
        fs::path candidate = base / ("layergen_hook_" + std::to_string(rd()) );
        std::error_code ec;
        if (fs::create_directories(candidate, ec) && !ec) return candidate;
    }
    throw CompositingError("harmonize: cannot create a temporary directory");
}

std::string frame_name(int index) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "frame_%04d.png", index + 1);
    return buf;
}

std::string mask_name(int index) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "mask_%04d.png", index + 1);
    return buf;
}

}  // namespace

RgbVideo harmonize(const RgbVideo& blend, const MaskVideo& masks,
                   const std::string& hook_command) {
    if (!masks.same_shape(MaskVideo(blend.frames, blend.h, blend.w))) {
        throw CompositingError("harmonize: masks do not align with the blended frames");
    }
    if (hook_command.empty()) {
        return blend;  // identity hook
    }

    fs::path root = fresh_temp_dir();
    fs::path frames_dir = root / "frames";
    fs::path masks_dir = root / "masks";
    fs::path out_dir = root / "out";
    fs::create_directories(frames_dir);
    fs::create_directories(masks_dir);
    fs::create_directories(out_dir);

    auto cleanup = [&root]() {
        std::error_code ec;
        fs::remove_all(root, ec);
    };

    try {
        for (int f = 0; f < blend.frames; ++f) {
            write_png(frames_dir / frame_name(f), blend.frame(f));
            write_png(masks_dir / mask_name(f), masks.frame(f));
        }
        std::string cmd = hook_command + " \"" + frames_dir.string() + "\" \"" +
                          masks_dir.string() + "\" \"" + out_dir.string() + "\"";
        int status = std::system(cmd.c_str());
        if (status != 0) {
            throw CompositingError("harmonize: hook exited with nonzero status");
        }
        RgbVideo out(blend.frames, blend.h, blend.w);
        for (int f = 0; f < blend.frames; ++f) {
            fs::path frame_path = out_dir / frame_name(f);
            if (!fs::exists(frame_path)) {
                throw CompositingError("harmonize: hook did not write " + frame_name(f));
            }
            Frame<3> fr = read_png_rgb(frame_path);
            if (fr.h != blend.h || fr.w != blend.w) {
                throw CompositingError("harmonize: hook output resolution mismatch on " +
                                       frame_name(f));
            }
            out.set_frame(f, fr);
        }
        cleanup();
        return out;
    } catch (...) {
        cleanup();
        throw;
    }
}

}  // namespace layergen
