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

#include <cctype>
#include <cmath>
#include <fstream>
#include <map>
#include <stdexcept>
#include <string_view>

#include "gridclear/case_io.h"
#include "gridclear/format.h"

namespace gridclear {
namespace {

std::string locate(const std::string& source, int line, const std::string& field,
                   const std::string& message) {
  std::string out = source;
  if (line > 0) out += ":" + std::to_string(line);
  out += ": ";
  if (!field.empty()) out += field + ": ";
  return out + message;
}

struct Token {
  std::string_view text;
  std::size_t end;  // offset just past the token
};

std::vector<Token> tokenize(std::string_view line) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    if (i >= line.size()) break;
    const std::size_t start = i;
    while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    out.push_back({line.substr(start, i - start), i});
  }
  return out;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

class NativeReader {
 public:
  NativeReader(std::istream& in, const std::string& source) : in_(in), source_(source) {}

  Case read() {
    std::string raw;
    bool ended = false;
    while (std::getline(in_, raw)) {
      ++line_no_;
      std::string_view line = raw;
      if (const auto hash = line.find('#'); hash != std::string_view::npos) {
        line = line.substr(0, hash);
      }
      line_ = line;
      toks_ = tokenize(line);
      if (toks_.empty()) continue;
      if (ended) fail(std::string(toks_[0].text), "content after 'end'");
      ended = record();
    }
    if (in_.bad()) throw IoError(source_ + ": read error");
    if (!ended) {
      throw ParseError(source_, line_no_ + 1, "end",
                       "missing 'end' record (file truncated?)");
    }
    if (!reference_) throw ParseError(source_, 0, "reference_bus", "no reference_bus record");
    out_.net = Network(std::move(buses_), std::move(lines_), *reference_);
    return std::move(out_);
  }

 private:
  [[noreturn]] void fail(const std::string& field, const std::string& message) const {
    throw ParseError(source_, line_no_, field, message);
  }

  void expect(std::size_t min_fields, std::size_t max_fields, const char* usage) const {
    if (toks_.size() < min_fields || toks_.size() > max_fields) {
      fail(std::string(toks_[0].text), std::string("expected '") + usage + "'");
    }
  }

  double number(std::size_t i, const char* field) const {
    const auto v = parse_number(toks_[i].text);
    if (!v) fail(field, "'" + std::string(toks_[i].text) + "' is not a number");
    return *v;
  }

  int integer(std::size_t i, const char* field) const {
    const double v = number(i, field);
    if (v != static_cast<double>(static_cast<int>(v))) {
      fail(field, "'" + std::string(toks_[i].text) + "' is not an integer");
    }
    return static_cast<int>(v);
  }

  std::string rest(std::size_t after) const {
    return std::string(trim(line_.substr(toks_[after].end)));
  }

  // Returns true on "end".
  bool record() {
    const std::string_view kw = toks_[0].text;
    if (kw == "end") {
      expect(1, 1, "end");
      return true;
    }
    if (kw == "case") {
      out_.name = toks_.size() > 1 ? rest(0) : "";
    } else if (kw == "base_mva") {
      expect(2, 2, "base_mva <MVA>");
      out_.base_mva = number(1, "base_mva");
      if (!(out_.base_mva > 0.0)) fail("base_mva", "must be positive");
    } else if (kw == "reference_bus") {
      expect(2, 2, "reference_bus <id>");
      reference_ = integer(1, "reference_bus");
    } else if (kw == "bus") {
      if (toks_.size() < 4) fail("bus", "expected 'bus <id> <lat|-> <lon|-> [name]'");
      Bus b;
      b.id = integer(1, "bus id");
      const bool no_lat = toks_[2].text == "-";
      const bool no_lon = toks_[3].text == "-";
      if (no_lat != no_lon) fail("bus coordinates", "give both coordinates or neither");
      if (!no_lat) b.coordinates = Coordinates{number(2, "latitude"), number(3, "longitude")};
      b.name = toks_.size() > 4 ? rest(3) : "";
      buses_.push_back(std::move(b));
    } else if (kw == "line") {
      expect(6, 6, "line <from> <to> <susceptance> <flow_min> <flow_max>");
      lines_.push_back({integer(1, "from_bus"), integer(2, "to_bus"), number(3, "susceptance"),
                        number(4, "flow_min"), number(5, "flow_max")});
    } else if (kw == "gen") {
      expect(5, 6, "gen <id> <bus> <green|black> <emission_factor> [fuel]");
      Generator g;
      g.id = std::string(toks_[1].text);
      g.bus = integer(2, "gen bus");
      const auto cls = parse_energy_class(toks_[3].text);
      if (!cls) fail("energy class", "'" + std::string(toks_[3].text) + "' is not green or black");
      g.energy_class = *cls;
      g.emission_factor = number(4, "emission_factor");
      if (toks_.size() == 6) g.fuel = std::string(toks_[5].text);
      if (gen_index_.count(g.id) || load_index_.count(g.id)) fail("gen id", "duplicate id " + g.id);
      gen_index_[g.id] = out_.book.generators.size();
      out_.book.generators.push_back(std::move(g));
    } else if (kw == "offer") {
      expect(5, 5, "offer <gen_id> <quantity_min> <quantity_max> <price>");
      const auto it = gen_index_.find(std::string(toks_[1].text));
      if (it == gen_index_.end()) fail("offer", "unknown generator " + std::string(toks_[1].text));
      out_.book.generators[it->second].blocks.push_back(
          {number(2, "quantity_min"), number(3, "quantity_max"), number(4, "price")});
    } else if (kw == "load") {
      expect(4, 4, "load <id> <bus> <alpha>");
      Load l;
      l.id = std::string(toks_[1].text);
      l.bus = integer(2, "load bus");
      l.alpha = number(3, "alpha");
      if (gen_index_.count(l.id) || load_index_.count(l.id)) fail("load id", "duplicate id " + l.id);
      load_index_[l.id] = out_.book.loads.size();
      out_.book.loads.push_back(std::move(l));
    } else if (kw == "bid") {
      expect(5, 5, "bid <load_id> <quantity_min> <quantity_max> <value>");
      const auto it = load_index_.find(std::string(toks_[1].text));
      if (it == load_index_.end()) fail("bid", "unknown load " + std::string(toks_[1].text));
      out_.book.loads[it->second].blocks.push_back(
          {number(2, "quantity_min"), number(3, "quantity_max"), number(4, "value")});
    } else {
      fail(std::string(kw), "unknown record type");
    }
    return false;
  }

  std::istream& in_;
  const std::string& source_;
  int line_no_ = 0;
  std::string_view line_;
  std::vector<Token> toks_;
  Case out_;
  std::vector<Bus> buses_;
  std::vector<Line> lines_;
  std::optional<BusId> reference_;
  std::map<std::string, std::size_t> gen_index_;
  std::map<std::string, std::size_t> load_index_;
};

bool has_space(const std::string& s) {
  for (char c : s) {
    if (std::isspace(static_cast<unsigned char>(c)) || c == '#') return true;
  }
  return false;
}

}  // namespace

ParseError::ParseError(const std::string& source, int line, const std::string& field,
                       const std::string& message)
    : std::runtime_error(locate(source, line, field, message)),
      source_(source),
      line_(line),
      field_(field) {}

ValidationError::ValidationError(ValidationReport report)
    : std::runtime_error(report.ok() ? "invalid case"
                                     : report.findings().front().code + ": " +
                                           report.findings().front().message),
      report_(std::move(report)) {}

Case read_native_case(std::istream& in, const std::string& source) {
  return NativeReader(in, source).read();
}

void write_native_case(std::ostream& out, const Case& c) {
  auto id_field = [](const std::string& id, const char* what) {
    if (id.empty() || has_space(id)) {
      throw std::invalid_argument(std::string("write_native_case: ") + what + " '" + id +
                                  "' cannot be written as a single field");
    }
    return id;
  };
  const auto n = [](double v) { return format_number(v); };
  out << "# gridclear native case\n";
  if (!c.name.empty()) out << "case " << c.name << '\n';
  out << "base_mva " << n(c.base_mva) << '\n';
  out << "reference_bus " << c.net.reference_bus() << '\n';
  for (const Bus& b : c.net.buses()) {
    out << "bus " << b.id << ' ';
    if (b.coordinates) {
      out << n(b.coordinates->latitude) << ' ' << n(b.coordinates->longitude);
    } else {
      out << "- -";
    }
    if (!b.name.empty()) out << ' ' << b.name;
    out << '\n';
  }
  for (const Line& l : c.net.lines()) {
    out << "line " << l.from_bus << ' ' << l.to_bus << ' ' << n(l.susceptance) << ' '
        << n(l.flow_min) << ' ' << n(l.flow_max) << '\n';
  }
  for (const Generator& g : c.book.generators) {
    out << "gen " << id_field(g.id, "generator id") << ' ' << g.bus << ' '
        << to_string(g.energy_class) << ' ' << n(g.emission_factor);
    if (!g.fuel.empty()) out << ' ' << id_field(g.fuel, "fuel");
    out << '\n';
    for (const OfferBlock& b : g.blocks) {
      out << "offer " << g.id << ' ' << n(b.quantity_min) << ' ' << n(b.quantity_max) << ' '
          << n(b.price) << '\n';
    }
  }
  for (const Load& l : c.book.loads) {
    out << "load " << id_field(l.id, "load id") << ' ' << l.bus << ' ' << n(l.alpha) << '\n';
    for (const BidBlock& b : l.blocks) {
      out << "bid " << l.id << ' ' << n(b.quantity_min) << ' ' << n(b.quantity_max) << ' '
          << n(b.value) << '\n';
    }
  }
  out << "end\n";
}

std::optional<CaseFormat> parse_case_format(const std::string& text) {
  if (text == "auto") return CaseFormat::kAuto;
  if (text == "native") return CaseFormat::kNative;
  if (text == "matpower") return CaseFormat::kMatpower;
  return std::nullopt;
}

ValidationReport validate_case(const Case& c) {
  ValidationReport r = validate_network(c.net);
  r.merge(validate_orderbook(c.book, c.net));
  return r;
}

Case import_case(const std::string& path, CaseFormat format, const MatpowerOptions& options) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  if (format == CaseFormat::kAuto) {
    const bool is_m = path.size() >= 2 && path.compare(path.size() - 2, 2, ".m") == 0;
    format = is_m ? CaseFormat::kMatpower : CaseFormat::kNative;
  }
  Case c = format == CaseFormat::kMatpower ? read_matpower_case(in, options, path)
                                           : read_native_case(in, path);
  if (ValidationReport r = validate_case(c); !r.ok()) throw ValidationError(std::move(r));
  return c;
}

std::map<std::string, double> read_alpha_file(std::istream& in, const std::string& source) {
  std::map<std::string, double> out;
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const std::string_view line = trim(raw);
    if (line.empty() || line.front() == '#') continue;
    const auto comma = line.find(',');
    if (comma == std::string_view::npos) {
      throw ParseError(source, line_no, "alpha", "expected 'load_id,alpha'");
    }
    const std::string id(trim(line.substr(0, comma)));
    const std::string_view value = trim(line.substr(comma + 1));
    if (line_no == 1 && id.rfind("load", 0) == 0 && !parse_number(value)) continue;
    const auto v = parse_number(value);
    if (!v || !(*v >= 0.0) || !std::isfinite(*v)) {
      throw ParseError(source, line_no, "alpha", "'" + std::string(value) +
                                                     "' is not a finite nonnegative number");
    }
    if (!out.emplace(id, *v).second) {
      throw ParseError(source, line_no, "load_id", "duplicate load " + id);
    }
  }
  if (in.bad()) throw IoError(source + ": read error");
  return out;
}

}  // namespace gridclear
