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

// CSV export of clearing results and scenario reports. Numbers use the
// shortest round-trip text, so identical runs give identical bytes. Fields
// that do not apply (green prices of a standard clearing, undefined
// averages) are left empty.

#ifndef GRIDCLEAR_EXPORT_H_
#define GRIDCLEAR_EXPORT_H_

#include <ostream>
#include <string>
#include <vector>

#include "gridclear/case_io.h"
#include "gridclear/clearing.h"
#include "gridclear/meritorder.h"
#include "gridclear/scenario.h"

namespace gridclear {

// `dpd` is null for a standard clearing, otherwise it is `sol` itself.
void write_bus_csv(std::ostream& out, const Network& net, const ClearingSolution& sol,
                   const DpdSolution* dpd);
void write_line_csv(std::ostream& out, const Network& net, const ClearingSolution& sol);
void write_generator_csv(std::ostream& out, const Network& net, const OrderBook& book,
                         const ClearingSolution& sol, const DpdSolution* dpd);
void write_load_csv(std::ostream& out, const Network& net, const OrderBook& book,
                    const ClearingSolution& sol, const DpdSolution* dpd);
// Equal-width bins spanning every reported price.
void write_lmp_histogram(std::ostream& out, const ClearingSolution& sol, const DpdSolution* dpd,
                         int bins = 20);
void write_intersection_csv(std::ostream& out, const Intersection& x);

void write_report_csv(std::ostream& out, const std::vector<ScenarioReport>& reports);
// Additional dispatch per class.
void write_dispatch_table(std::ostream& out, const std::vector<ScenarioReport>& reports);
// Green premium shadow price per case.
void write_lambda_table(std::ostream& out, const std::vector<ScenarioReport>& reports);
// Average emissions before and after.
void write_emissions_table(std::ostream& out, const std::vector<ScenarioReport>& reports);

// Writes buses.csv, lines.csv, generators.csv, loads.csv, lmp_histogram.csv
// and a summary.csv into `dir` (created if needed). Returns the file paths.
// Throws IoError when a file cannot be written.
std::vector<std::string> export_results(const std::string& dir, const Case& c,
                                        const ClearingSolution& sol);
std::vector<std::string> export_results(const std::string& dir, const Case& c,
                                        const DpdSolution& sol);
// reports.csv plus the three table layouts.
std::vector<std::string> export_reports(const std::string& dir,
                                        const std::vector<ScenarioReport>& reports);

}  // namespace gridclear

#endif  // GRIDCLEAR_EXPORT_H_
