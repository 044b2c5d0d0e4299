#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "classify.hpp"
#include "vine.hpp"

namespace rvc {

std::uint64_t fnv1a64(std::string_view bytes);
std::string hex64(std::uint64_t x);

// Standalone vine description for the simulator ("rvc-vine/1"): structure,
// pair copulas, optional variable names, optional normal margins to map the
// pseudo-observations onto feature scale.
struct SimSpec {
    struct Normal {
        double mean = 0.0;
        double sd = 1.0;
    };
    VineModel model;
    std::vector<std::string> names;               // always dimension() entries
    std::optional<std::vector<Normal>> margins;   // when present: back-transform
};

SimSpec parse_sim_spec(const std::string& text);
std::string sim_spec_to_json(const VineStructure& s,
                             const std::vector<std::string>& names);

// Classifier persistence ("rvc-model/1"). Loading a saved bundle reproduces
// every prediction bit-exactly: samples, bandwidths and parameters are stored
// at full decimal round-trip precision and nothing is refitted on load.
std::string bundle_to_json(const ClassifierBundle& b);
ClassifierBundle bundle_from_json(const std::string& text);

void save_text_file(const std::string& path, const std::string& text);
std::string load_text_file(const std::string& path);

} // namespace rvc
