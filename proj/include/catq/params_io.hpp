// params_io.hpp — JSON (de)serialisation of parameter sets

#pragma once

#include <string>

#include "json.hpp"

#include "catq/model.hpp"
#include "catq/types.hpp"

namespace catq {

using json = nlohmann::json;

// Complex numbers are written as [re, im]; a bare number is accepted on input.
cplx complex_from_json(const json& j);
json complex_to_json(cplx z);

// Accepted forms (all rates in the same angular unit):
//   {"delta", "g2drive", "kerr", "eta2ph", "kappa1", "kappaphi", "cutoff"}
//   {"w", "two_theta_over_pi", "g", "delta" | "delta_over_g", losses..., "cutoff"}
//   {"row": "a".."f", "delta_over_g", losses..., "cutoff"}
// Unknown keys are rejected.
EffectiveParams effective_from_json(const json& j);
json to_json(const EffectiveParams& p);

MicroParams micro_from_json(const json& j);
json to_json(const MicroParams& m);

json load_json_file(const std::string& path);

} // namespace catq
