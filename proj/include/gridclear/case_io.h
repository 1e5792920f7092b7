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

// Reading and writing market cases.
//
// Native format: one record per line, '#' starts a comment, fields are
// separated by whitespace, numbers accept "inf" and "-inf".
//
//   case <name, rest of line>
//   base_mva <MVA>
//   reference_bus <bus id>
//   bus <id> <latitude|-> <longitude|-> [name, rest of line]
//   line <from> <to> <susceptance MW/rad> <flow_min MW> <flow_max MW>
//   gen <id> <bus> <green|black> <kg CO2e/MWh> [fuel]
//   offer <gen id> <quantity_min> <quantity_max> <price $/MWh>
//   load <id> <bus> <alpha $/MWh>
//   bid <load id> <quantity_min> <quantity_max> <value $/MWh>
//   end
//
// Offers and bids attach to the named participant and keep file order. The
// closing "end" is mandatory so that truncated files are rejected.

#ifndef GRIDCLEAR_CASE_IO_H_
#define GRIDCLEAR_CASE_IO_H_

#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "gridclear/grid.h"
#include "gridclear/orderbook.h"
#include "gridclear/validation.h"

namespace gridclear {

// A parse failure located at `line` (1-based; 0 when not tied to a line).
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& source, int line, const std::string& field,
             const std::string& message);
  const std::string& source() const { return source_; }
  int line() const { return line_; }
  const std::string& field() const { return field_; }

 private:
  std::string source_;
  int line_;
  std::string field_;
};

// The file could not be opened, read or written.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// The case parsed but does not describe a valid market.
class ValidationError : public std::runtime_error {
 public:
  explicit ValidationError(ValidationReport report);
  const ValidationReport& report() const { return report_; }

 private:
  ValidationReport report_;
};

struct Case {
  std::string name;
  double base_mva = 100.0;
  Network net;
  OrderBook book;
  std::vector<std::string> notes;  // import remarks, e.g. skipped elements
};

Case read_native_case(std::istream& in, const std::string& source = "<input>");
void write_native_case(std::ostream& out, const Case& c);

struct MatpowerOptions {
  int offer_blocks = 3;              // equal-capacity blocks per generator
  double default_bid_value = 20.0;   // $/MWh for every load's single block
  bool respect_pmin = false;         // carry Pmin into block quantity_min
  std::map<std::string, EnergyClass> fuel_class = default_fuel_classes();
  std::map<std::string, double> emission_factors;  // empty: built-in defaults

  static std::map<std::string, EnergyClass> default_fuel_classes();
};

// Reads the bus, branch, gen, gencost and (optional) genfuel / bus_name
// tables of a MATPOWER case file.
Case read_matpower_case(std::istream& in, const MatpowerOptions& options = {},
                        const std::string& source = "<input>");

enum class CaseFormat { kAuto, kNative, kMatpower };
std::optional<CaseFormat> parse_case_format(const std::string& text);

// Reads and validates a case file. kAuto picks MATPOWER for ".m" files.
// Throws IoError, ParseError or ValidationError.
Case import_case(const std::string& path, CaseFormat format = CaseFormat::kAuto,
                 const MatpowerOptions& options = {});

ValidationReport validate_case(const Case& c);

// "load_id,alpha" rows; a header row starting with "load" is skipped.
std::map<std::string, double> read_alpha_file(std::istream& in,
                                              const std::string& source = "<input>");

}  // namespace gridclear

#endif  // GRIDCLEAR_CASE_IO_H_
