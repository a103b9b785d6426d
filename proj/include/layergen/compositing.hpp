// SPDX-License-Identifier: Apache-2.0
#ifndef LAYERGEN_COMPOSITING_HPP
#define LAYERGEN_COMPOSITING_HPP

#include <stdexcept>
#include <string>
#include <vector>

#include "layergen/video.hpp"

namespace layergen {

class CompositingError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Background plus foreground layers in occlusion order (later on top).
struct LayerStack {
    RgbVideo background;
    std::vector<RgbaVideo> foregrounds;
};

// Straight (non-premultiplied) alpha over: out = fg.rgb * a + bg * (1 - a).
Frame<3> alpha_over_frame(const Frame<3>& bg, const Frame<4>& fg);

// Left fold of alpha_over_frame over the foregrounds, per frame. The fold
// order is normative: straight-alpha over is not associative in general.
RgbVideo blend_layers(const LayerStack& stack);

// Runs an external harmonization command over the blended frames, or returns
// the input unchanged when `hook_command` is empty. The hook is invoked as
//   <hook_command> <frames_dir> <masks_dir> <out_dir>
// and must write one harmonized PNG per input frame, same names, same size.
RgbVideo harmonize(const RgbVideo& blend, const MaskVideo& masks,
                   const std::string& hook_command);

}  // namespace layergen

#endif
