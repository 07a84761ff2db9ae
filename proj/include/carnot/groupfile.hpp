#pragma once

// Group-spec files: JSON with fields
//   { "name": "...", "type": "heisenberg" | "htype" | "euclidean" | "step_two",
//     "n": int                      (heisenberg / euclidean)
//     "J": [ [[...]], ... ]          (htype: k skew m x m matrices)
//     "b": [ [[...]], ... ] }        (step_two: structure constants)
// Unknown keys are rejected; matrix invariants are validated on load.

#include <string>

#include "carnot/group.hpp"

namespace carnot {

GroupSpec load_group_file(const std::string& path);
GroupSpec parse_group_json(const std::string& text);
std::string group_to_json(const GroupSpec& spec);
void save_group_file(const GroupSpec& spec, const std::string& path);

/// Resolves a --group argument: builtin name first, then a file path.
GroupSpec resolve_group(const std::string& name_or_path);

}  // namespace carnot
