// Copyright 2026 The gridclear Authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Run configuration file: "key = value" lines, '#' comments.
//
//   target_res_share   alpha_mean   alpha_std   rng_seed   homes_per_mw
//   parallel (true|false)
//   tol_feas   tol_gap   tol_congest
//   emission_factor.<fuel> = <kg CO2e/MWh>
//   fuel_class.<fuel> = green|black
//   offer_blocks   default_bid_value   respect_pmin (true|false)

#ifndef GRIDCLEAR_CONFIG_H_
#define GRIDCLEAR_CONFIG_H_

#include <istream>
#include <string>

#include "gridclear/case_io.h"
#include "gridclear/scenario.h"

namespace gridclear {

struct RunConfig {
  ScenarioConfig scenario;
  MatpowerOptions import;
};

// Throws ParseError on unknown keys or malformed values.
RunConfig read_config(std::istream& in, const std::string& source = "<input>");
// Throws IoError when the file cannot be opened.
RunConfig read_config_file(const std::string& path);

}  // namespace gridclear

#endif  // GRIDCLEAR_CONFIG_H_
