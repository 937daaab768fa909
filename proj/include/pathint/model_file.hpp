#pragma once

#include <string>
#include <variant>

#include "pathint/models.hpp"

namespace pathint {

using AnyModel = std::variant<HullWhiteParams, MappedModel, PotentialModel>;

struct ModelSpec {
    AnyModel model;
    std::string source;  ///< file name or "<string>"
};

/// Exactly one of [hull_white], [mapped] or [potential]. Errors are
/// ConfigError carrying the offending line.
ModelSpec parse_model(const std::string& text, const std::string& source = "<string>");
ModelSpec load_model_file(const std::string& path);

/// "hull_white", "mapped" or "potential".
std::string model_family(const AnyModel& m);

}  // namespace pathint
