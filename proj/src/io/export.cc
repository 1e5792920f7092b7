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

#include "gridclear/export.h"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>

#include "gridclear/format.h"

namespace gridclear {
namespace {

std::string num(double v) { return format_number(v); }

std::string opt(const std::optional<double>& v) { return v ? format_number(*v) : ""; }

std::string case_label(double share) {
  return format_number(std::round(share * 1000.0) / 10.0) + "% RES";
}

std::string write_file(const std::filesystem::path& dir, const char* name,
                       const std::function<void(std::ostream&)>& body) {
  const std::filesystem::path path = dir / name;
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  body(out);
  out.flush();
  if (!out) throw IoError("cannot write " + path.string());
  return path.string();
}

void make_dir(const std::string& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec || !std::filesystem::is_directory(dir)) {
    throw IoError("cannot create directory " + dir);
  }
}

std::vector<std::string> export_solution(const std::string& dir, const Case& c,
                                         const ClearingSolution& sol, const DpdSolution* dpd) {
  make_dir(dir);
  std::vector<std::string> files;
  files.push_back(write_file(dir, "buses.csv",
                             [&](std::ostream& o) { write_bus_csv(o, c.net, sol, dpd); }));
  files.push_back(write_file(dir, "lines.csv",
                             [&](std::ostream& o) { write_line_csv(o, c.net, sol); }));
  files.push_back(write_file(dir, "generators.csv", [&](std::ostream& o) {
    write_generator_csv(o, c.net, c.book, sol, dpd);
  }));
  files.push_back(write_file(dir, "loads.csv", [&](std::ostream& o) {
    write_load_csv(o, c.net, c.book, sol, dpd);
  }));
  files.push_back(write_file(dir, "lmp_histogram.csv",
                             [&](std::ostream& o) { write_lmp_histogram(o, sol, dpd); }));
  files.push_back(write_file(dir, "summary.csv", [&](std::ostream& o) {
    o << "objective,served_mwh,green_dispatch_mwh,black_dispatch_mwh,lambda_green,"
         "congested_lines,avg_emissions\n";
    o << num(sol.objective) << ',' << num(sol.total_served()) << ','
      << num(sol.total_dispatch(c.book, EnergyClass::kGreen)) << ','
      << num(sol.total_dispatch(c.book, EnergyClass::kBlack)) << ','
      << (dpd ? num(dpd->lambda_green) : "") << ',' << sol.congested_lines.size() << ','
      << opt(emissions_report(sol, c.book)) << '\n';
  }));
  return files;
}

}  // namespace

void write_bus_csv(std::ostream& out, const Network& net, const ClearingSolution& sol,
                   const DpdSolution* dpd) {
  out << "bus_id,name,latitude,longitude,black_lmp,green_lmp\n";
  for (std::size_t b = 0; b < net.num_buses(); ++b) {
    const Bus& bus = net.buses()[b];
    std::string name = bus.name;
    std::replace(name.begin(), name.end(), ',', ';');
    out << bus.id << ',' << name << ',';
    if (bus.coordinates) {
      out << num(bus.coordinates->latitude) << ',' << num(bus.coordinates->longitude);
    } else {
      out << ',';
    }
    out << ',' << num(sol.black_lmp[b]) << ',' << (dpd ? num(dpd->green_lmp[b]) : "") << '\n';
  }
}

void write_line_csv(std::ostream& out, const Network& net, const ClearingSolution& sol) {
  out << "line,from_bus,to_bus,flow_mw,flow_min_mw,flow_max_mw,congested\n";
  for (std::size_t k = 0; k < net.num_lines(); ++k) {
    const Line& l = net.lines()[k];
    const bool congested = std::find(sol.congested_lines.begin(), sol.congested_lines.end(), k) !=
                           sol.congested_lines.end();
    out << k << ',' << l.from_bus << ',' << l.to_bus << ',' << num(sol.flows[k]) << ','
        << num(l.flow_min) << ',' << num(l.flow_max) << ',' << (congested ? 1 : 0) << '\n';
  }
}

void write_generator_csv(std::ostream& out, const Network& net, const OrderBook& book,
                         const ClearingSolution& sol, const DpdSolution* dpd) {
  const Settlement s = dpd ? settle(*dpd, net, book) : settle(sol, net, book);
  out << "id,bus,class,fuel,dispatch_mwh,price,revenue\n";
  for (std::size_t k = 0; k < book.generators.size(); ++k) {
    const Generator& g = book.generators[k];
    double price = sol.black_lmp[net.index_of(g.bus)];
    if (dpd && g.energy_class == EnergyClass::kGreen) price += dpd->lambda_green;
    out << g.id << ',' << g.bus << ',' << to_string(g.energy_class) << ',' << g.fuel << ','
        << num(sol.generator_total(k)) << ',' << num(price) << ','
        << num(s.generator_revenue[k]) << '\n';
  }
}

void write_load_csv(std::ostream& out, const Network& net, const OrderBook& book,
                    const ClearingSolution& sol, const DpdSolution* dpd) {
  const Settlement s = dpd ? settle(*dpd, net, book) : settle(sol, net, book);
  out << "id,bus,alpha,served_mwh,green_mwh,black_mwh,payment\n";
  for (std::size_t i = 0; i < book.loads.size(); ++i) {
    const Load& l = book.loads[i];
    out << l.id << ',' << l.bus << ',' << num(l.alpha) << ',' << num(sol.load_total(i)) << ','
        << (dpd ? num(dpd->green_allocation[i]) : "") << ','
        << (dpd ? num(dpd->black_allocation[i]) : "") << ',' << num(s.load_payment[i]) << '\n';
  }
}

void write_lmp_histogram(std::ostream& out, const ClearingSolution& sol, const DpdSolution* dpd,
                         int bins) {
  out << "bin_low,bin_high,black_count,green_count\n";
  if (sol.black_lmp.empty() || bins < 1) return;
  double lo = *std::min_element(sol.black_lmp.begin(), sol.black_lmp.end());
  double hi = *std::max_element(sol.black_lmp.begin(), sol.black_lmp.end());
  if (dpd) {
    lo = std::min(lo, *std::min_element(dpd->green_lmp.begin(), dpd->green_lmp.end()));
    hi = std::max(hi, *std::max_element(dpd->green_lmp.begin(), dpd->green_lmp.end()));
  }
  if (hi == lo) bins = 1;
  const double width = (hi - lo) / bins;
  auto bin_of = [&](double v) {
    if (width == 0.0) return 0;
    return std::clamp(static_cast<int>((v - lo) / width), 0, bins - 1);
  };
  std::vector<long> black(bins, 0), green(bins, 0);
  for (double v : sol.black_lmp) ++black[bin_of(v)];
  if (dpd) {
    for (double v : dpd->green_lmp) ++green[bin_of(v)];
  }
  for (int i = 0; i < bins; ++i) {
    const double a = lo + i * width;
    const double b = i + 1 == bins ? hi : lo + (i + 1) * width;
    out << num(a) << ',' << num(b) << ',' << black[i] << ',';
    if (dpd) out << green[i];
    out << '\n';
  }
}

void write_intersection_csv(std::ostream& out, const Intersection& x) {
  out << "volume_mwh,price,green_share,defined,degenerate,price_low,price_high\n";
  out << num(x.volume) << ',' << (x.defined ? num(x.price) : "") << ','
      << num(x.green_share) << ',' << (x.defined ? 1 : 0) << ',' << (x.degenerate ? 1 : 0)
      << ',' << (x.defined ? num(x.price_low) : "") << ','
      << (x.defined ? num(x.price_high) : "") << '\n';
}

void write_report_csv(std::ostream& out, const std::vector<ScenarioReport>& reports) {
  out << "res_share,delta_green_mwh,delta_black_mwh,lambda_green,congested_before,"
         "congested_after,avg_emissions_before,avg_emissions_after,homes_powered,"
         "served_before_mwh,served_after_mwh,payment_before,payment_after,revenue_before,"
         "revenue_after,surplus_before,surplus_after\n";
  for (const ScenarioReport& r : reports) {
    out << num(r.res_share) << ',' << num(r.delta_green) << ',' << num(r.delta_black) << ','
        << num(r.lambda_green) << ',' << r.congested_before << ',' << r.congested_after << ','
        << opt(r.avg_emissions_before) << ',' << opt(r.avg_emissions_after) << ','
        << r.homes_powered << ',' << num(r.served_before) << ',' << num(r.served_after) << ','
        << num(r.settlement_before.total_payment) << ','
        << num(r.settlement_after.total_payment) << ','
        << num(r.settlement_before.total_revenue) << ','
        << num(r.settlement_after.total_revenue) << ','
        << num(r.settlement_before.merchandising_surplus) << ','
        << num(r.settlement_after.merchandising_surplus) << '\n';
  }
}

void write_dispatch_table(std::ostream& out, const std::vector<ScenarioReport>& reports) {
  out << "case,green_mwh,black_mwh\n";
  for (const ScenarioReport& r : reports) {
    out << case_label(r.res_share) << ',' << num(r.delta_green) << ',' << num(r.delta_black)
        << '\n';
  }
}

void write_lambda_table(std::ostream& out, const std::vector<ScenarioReport>& reports) {
  out << "case,lambda_green\n";
  for (const ScenarioReport& r : reports) {
    out << case_label(r.res_share) << ',' << num(r.lambda_green) << '\n';
  }
}

void write_emissions_table(std::ostream& out, const std::vector<ScenarioReport>& reports) {
  out << "case,standard_kg_per_mwh,dpd_kg_per_mwh\n";
  for (const ScenarioReport& r : reports) {
    out << case_label(r.res_share) << ',' << opt(r.avg_emissions_before) << ','
        << opt(r.avg_emissions_after) << '\n';
  }
}

std::vector<std::string> export_results(const std::string& dir, const Case& c,
                                        const ClearingSolution& sol) {
  return export_solution(dir, c, sol, nullptr);
}

std::vector<std::string> export_results(const std::string& dir, const Case& c,
                                        const DpdSolution& sol) {
  return export_solution(dir, c, sol, &sol);
}

std::vector<std::string> export_reports(const std::string& dir,
                                        const std::vector<ScenarioReport>& reports) {
  make_dir(dir);
  return {
      write_file(dir, "reports.csv", [&](std::ostream& o) { write_report_csv(o, reports); }),
      write_file(dir, "table_dispatch.csv",
                 [&](std::ostream& o) { write_dispatch_table(o, reports); }),
      write_file(dir, "table_lambda.csv",
                 [&](std::ostream& o) { write_lambda_table(o, reports); }),
      write_file(dir, "table_emissions.csv",
                 [&](std::ostream& o) { write_emissions_table(o, reports); }),
  };
}

}  // namespace gridclear
