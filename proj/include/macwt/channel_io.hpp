#pragma once

#include <filesystem>
#include <string>

#include "macwt/channel_model.hpp"

namespace macwt {

// Channel file: {"name": str, "alphabets": [|X1|,|X2|,|Y|,|Z|],
//                "transitions": [x1][x2][y][z] nested arrays}
// Doubles are written in shortest round-trip form, so save/load is bit exact.
std::string channel_to_json(const ChannelSpec& spec);
ChannelSpec channel_from_json(const std::string& text);

ChannelSpec load_channel(const std::filesystem::path& path);

// Input file: {"p1": [...], "p2": [...]}. Inline form: "0.5,0.5;0.25,0.75".
InputPair inputs_from_json(const std::string& text);
InputPair parse_inputs_inline(const std::string& text);

// Accepts either a path to an input file or the inline form.
InputPair load_inputs(const std::string& arg);

}  // namespace macwt
