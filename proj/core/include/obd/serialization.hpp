#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "obd/algorithms.hpp"
#include "obd/instance.hpp"
#include "obd/offline.hpp"

namespace obd {

using Json = nlohmann::json;

// Non-finite reals are written as null and read back as +inf.
Json real_to_json(double v);
double real_from_json(const Json& j, const std::string& field);

Json to_json(const Vector& v);
Vector vector_from_json(const Json& j, const std::string& field);

Json to_json(const Norm& norm);
Norm norm_from_json(const Json& j, const std::string& field);

Json to_json(const FeasibleSet& set);
FeasibleSet feasible_set_from_json(const Json& j, const std::string& field);

// Unknown keys are rejected with InvalidArgument naming the key.
Json to_json(const InstanceSpec& spec);
InstanceSpec instance_spec_from_json(const Json& j);

Json to_json(const StepRecord& rec);

// 64-bit FNV-1a.
std::uint64_t fnv1a(std::string_view bytes);
// Hex digest of the canonical JSON of the spec.
std::string spec_hash(const InstanceSpec& spec);

// {spec, algo, steps: [{t, x, hit, move, level, eta_t, branch}], totals}
Json trajectory_json(const Json& spec, const std::string& algo,
                     const std::vector<StepRecord>& steps, const Json& totals);

// Offline trajectories in the same schema; level = hit, eta_t = null, branch = "offline".
Json trajectory_json(const Json& spec, const std::string& algo,
                     const std::vector<CostFunction>& fs, const Vector& x0,
                     const OfflineSolution& sol, const Norm& switching);

// Writes to a temporary sibling then renames over path.
void write_file_atomic(const std::string& path, const std::string& content);

}  // namespace obd
