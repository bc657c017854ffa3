#pragma once

#include <iosfwd>
#include <string>

#include <json.hpp>

#include "psm/planner.hpp"
#include "psm/scene.hpp"

namespace psm::io {

using Json = nlohmann::json;

// Scene description file:
// {name, kind, ambient_dim, bounds:{lower,upper}, robot:{chains:[...]},
//  manifolds:[{name,type,params}], start, obstacles:[{id,min,max}],
//  transitions:[{trigger, effect:{type,...}}]}
Json scene_to_json(const Scene& scene);
Scene scene_from_json(const Json& j);

// A built-in scene id or a path to a scene JSON file.
Scene load_scene(const std::string& id_or_path);

// Planner parameters; missing keys keep the values of `base`.
Json params_to_json(const PlannerParams& params);
PlannerParams params_from_json(const Json& j, PlannerParams base);

// Path file: header "segment,q0,...,q{k-1}", one configuration per row.
// Boundary configurations appear as the last row of one segment and the
// first row of the next.
void write_path_csv(std::ostream& os, const SolutionPath& path);
// Throws std::runtime_error on malformed input or discontinuous segments.
SolutionPath read_path_csv(std::istream& is);

// Round-trip exact decimal text for a double.
std::string format_double(double v);

}  // namespace psm::io
