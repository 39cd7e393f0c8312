#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>

#include <json.hpp>

#include "gfield/engine.hpp"
#include "gfield/field.hpp"

// Batch job front door: JSON config in, JSON/CSV artifacts out.  Exit
// status: 0 success (failed property checks still count as success and
// carry status fields), 2 config/schema error, 3 engine error.
namespace gfield::jobs {

struct JobContext {
  std::string out_dir = ".";
  std::uint64_t seed = 1;
  std::optional<Engine> engine_override;
};

int run(const std::string& command, const nlohmann::json& config, const JobContext& ctx,
        std::ostream& log);

// config helpers (shared with tests)
geo::Region region_from_json(const nlohmann::json& j);
GridFunction grid_function_from_json(const nlohmann::json& j);

} // namespace gfield::jobs
