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

#include "cli.h"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <optional>

#include "CLI11.hpp"
#include "gridclear/case_io.h"
#include "gridclear/clearing.h"
#include "gridclear/config.h"
#include "gridclear/export.h"
#include "gridclear/format.h"
#include "gridclear/meritorder.h"
#include "gridclear/scenario.h"

namespace gridclear::cli {
namespace {

struct Common {
  std::string case_path;
  std::string format = "auto";
  std::string out_dir;
  std::string config_path;
  std::optional<double> tol_gap;
  std::optional<double> tol_feas;
};

struct AlphaFlags {
  std::optional<double> mean;
  std::optional<double> std;
  std::optional<std::uint64_t> seed;
  std::string file;
};

void add_common(CLI::App* cmd, Common* c) {
  cmd->add_option("--case", c->case_path, "Case file (native or MATPOWER)")->required();
  cmd->add_option("--format", c->format, "native, matpower or auto")
      ->check(CLI::IsMember({"auto", "native", "matpower"}));
  cmd->add_option("--out", c->out_dir, "Directory for CSV output");
  cmd->add_option("--config", c->config_path, "Key-value run configuration");
  cmd->add_option("--tol-gap", c->tol_gap, "Duality gap tolerance")->check(CLI::PositiveNumber);
  cmd->add_option("--tol-feas", c->tol_feas, "Primal feasibility tolerance")
      ->check(CLI::PositiveNumber);
}

void add_alpha(CLI::App* cmd, AlphaFlags* a) {
  auto* mean = cmd->add_option("--alpha-mean", a->mean, "Mean green premium ($/MWh)");
  auto* sd = cmd->add_option("--alpha-std", a->std, "Std of the green premium ($/MWh)")
                 ->check(CLI::NonNegativeNumber);
  auto* seed = cmd->add_option("--seed", a->seed, "Random seed for premiums");
  auto* file = cmd->add_option("--alpha-file", a->file, "CSV of load_id,alpha");
  file->excludes(mean)->excludes(sd)->excludes(seed);
}

struct Loaded {
  Case c;
  RunConfig config;
};

Loaded load(const Common& common) {
  Loaded l;
  if (!common.config_path.empty()) l.config = read_config_file(common.config_path);
  if (common.tol_gap) l.config.scenario.clearing.tolerances.duality_gap = *common.tol_gap;
  if (common.tol_feas) l.config.scenario.clearing.tolerances.feasibility = *common.tol_feas;
  const CaseFormat format = *parse_case_format(common.format);
  l.c = import_case(common.case_path, format, l.config.import);
  if (!l.config.import.emission_factors.empty()) {
    apply_emission_factors(l.c.book, l.config.import.emission_factors);
  }
  return l;
}

// Flag values override the configuration.
void apply_alpha_flags(const AlphaFlags& flags, RunConfig& config) {
  if (flags.mean) config.scenario.alpha_mean = *flags.mean;
  if (flags.std) config.scenario.alpha_std = *flags.std;
  if (flags.seed) config.scenario.rng_seed = *flags.seed;
}

// Premiums per load, from --alpha-file when given, else sampled.
std::vector<double> premiums(const AlphaFlags& flags, const RunConfig& config,
                             const OrderBook& book) {
  if (flags.file.empty()) {
    return sample_alphas(book.loads, config.scenario.alpha_mean, config.scenario.alpha_std,
                         config.scenario.rng_seed);
  }
  std::ifstream in(flags.file);
  if (!in) throw IoError("cannot open " + flags.file);
  const auto table = read_alpha_file(in, flags.file);
  std::vector<double> out;
  for (const Load& l : book.loads) {
    const auto it = table.find(l.id);
    if (it == table.end()) throw ParseError(flags.file, 0, "load_id", "no premium for load " + l.id);
    out.push_back(it->second);
  }
  for (const auto& entry : table) {
    const bool known = std::any_of(book.loads.begin(), book.loads.end(),
                                   [&](const Load& l) { return l.id == entry.first; });
    if (!known) throw ParseError(flags.file, 0, "load_id", "unknown load " + entry.first);
  }
  return out;
}

bool any_alpha_flag(const AlphaFlags& flags) {
  return flags.mean || flags.std || flags.seed || !flags.file.empty();
}

void print_solution(std::ostream& out, const Case& c, const ClearingSolution& sol,
                    const DpdSolution* dpd) {
  out << "objective " << format_number(sol.objective) << '\n';
  out << "served_mwh " << format_number(sol.total_served()) << '\n';
  out << "green_dispatch_mwh " << format_number(sol.total_dispatch(c.book, EnergyClass::kGreen))
      << '\n';
  out << "black_dispatch_mwh " << format_number(sol.total_dispatch(c.book, EnergyClass::kBlack))
      << '\n';
  if (dpd) out << "lambda_green " << format_number(dpd->lambda_green) << '\n';
  out << "congested_lines " << sol.congested_lines.size() << '\n';
  if (const auto e = emissions_report(sol, c.book)) {
    out << "avg_emissions_kg_per_mwh " << format_number(*e) << '\n';
  }
  if (c.net.num_buses() <= 20) {
    for (std::size_t b = 0; b < c.net.num_buses(); ++b) {
      out << "lmp " << c.net.buses()[b].id << ' ' << format_number(sol.black_lmp[b]);
      if (dpd) out << ' ' << format_number(dpd->green_lmp[b]);
      out << '\n';
    }
  }
}

void print_report(std::ostream& out, const ScenarioReport& r) {
  auto opt = [](const std::optional<double>& v) { return v ? format_number(*v) : "undefined"; };
  out << "res_share " << format_number(r.res_share) << '\n'
      << "delta_green_mwh " << format_number(r.delta_green) << '\n'
      << "delta_black_mwh " << format_number(r.delta_black) << '\n'
      << "lambda_green " << format_number(r.lambda_green) << '\n'
      << "congested_before " << r.congested_before << '\n'
      << "congested_after " << r.congested_after << '\n'
      << "avg_emissions_before " << opt(r.avg_emissions_before) << '\n'
      << "avg_emissions_after " << opt(r.avg_emissions_after) << '\n'
      << "homes_powered " << r.homes_powered << '\n';
}

std::vector<double> parse_shares(const std::string& text) {
  std::vector<double> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    const std::size_t comma = std::min(text.find(',', start), text.size());
    const std::string token = text.substr(start, comma - start);
    const auto v = parse_number(token);
    if (!v || !(*v > 0.0 && *v < 1.0)) {
      throw CLI::ValidationError("--shares", "'" + token + "' is not a share in (0, 1)");
    }
    out.push_back(*v);
    start = comma + 1;
  }
  return out;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Nodal market clearing with separate green and black energy prices", "gridclear"};
  app.require_subcommand(1);

  Common common;
  AlphaFlags alpha;
  std::string shares_text;
  std::optional<double> report_share;

  auto* validate = app.add_subcommand("validate", "Check a case and list findings");
  add_common(validate, &common);
  auto* merit = app.add_subcommand("merit-order", "Copper-plate supply/demand intersection");
  add_common(merit, &common);
  auto* clear = app.add_subcommand("clear", "Standard nodal clearing");
  add_common(clear, &common);
  auto* dpd = app.add_subcommand("clear-dpd", "Dual-pricing clearing with green premiums");
  add_common(dpd, &common);
  add_alpha(dpd, &alpha);
  auto* sweep = app.add_subcommand("sweep-res", "Renewable share sweep");
  add_common(sweep, &common);
  add_alpha(sweep, &alpha);
  sweep->add_option("--shares", shares_text, "Comma-separated green capacity shares")->required();
  auto* report = app.add_subcommand("report", "Emissions, dispatch deltas and homes powered");
  add_common(report, &common);
  add_alpha(report, &alpha);
  report->add_option("--share", report_share, "Scale to this green capacity share first")
      ->check(CLI::Range(0.0, 1.0));

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kIoOrParseError;
  }

  try {
    if (validate->parsed()) {
      RunConfig config;
      if (!common.config_path.empty()) config = read_config_file(common.config_path);
      std::ifstream probe(common.case_path);
      if (!probe) throw IoError("cannot open " + common.case_path);
      probe.close();
      Case c;
      const CaseFormat f = *parse_case_format(common.format);
      const bool matpower =
          f == CaseFormat::kMatpower ||
          (f == CaseFormat::kAuto && std::filesystem::path(common.case_path).extension() == ".m");
      std::ifstream in(common.case_path);
      c = matpower ? read_matpower_case(in, config.import, common.case_path)
                   : read_native_case(in, common.case_path);
      const ValidationReport r = validate_case(c);
      for (const auto& n : c.notes) out << "note " << n << '\n';
      for (const auto& f2 : r.findings()) out << "finding " << f2.code << ": " << f2.message << '\n';
      out << "buses " << c.net.num_buses() << '\n'
          << "lines " << c.net.num_lines() << '\n'
          << "generators " << c.book.generators.size() << '\n'
          << "loads " << c.book.loads.size() << '\n'
          << "green_capacity_mw " << format_number(total_capacity(c.book, CapacityClass::kGreen))
          << '\n'
          << "black_capacity_mw " << format_number(total_capacity(c.book, CapacityClass::kBlack))
          << '\n'
          << (r.ok() ? "valid\n" : "invalid\n");
      return r.ok() ? kOk : kValidationFailure;
    }

    Loaded l = load(common);
    if (merit->parsed()) {
      const StepCurve s = build_supply_curve(l.c.book);
      const StepCurve d = build_demand_curve(l.c.book);
      const Intersection x = intersect(s, d);
      out << "volume_mwh " << format_number(x.volume) << '\n';
      out << "price " << (x.defined ? format_number(x.price) : "undefined") << '\n';
      out << "green_share " << format_number(x.green_share) << '\n';
      if (x.degenerate) {
        out << "degenerate price interval " << format_number(x.price_low) << ' '
            << format_number(x.price_high) << '\n';
      }
      if (!common.out_dir.empty()) {
        std::filesystem::create_directories(common.out_dir);
        auto write = [&](const char* name, auto&& body) {
          std::ofstream f(std::filesystem::path(common.out_dir) / name, std::ios::binary);
          if (!f) throw IoError("cannot write " + common.out_dir + "/" + name);
          body(f);
        };
        write("supply_curve.csv", [&](std::ostream& o) { write_curve_csv(o, s); });
        write("demand_curve.csv", [&](std::ostream& o) { write_curve_csv(o, d); });
        write("intersection.csv", [&](std::ostream& o) { write_intersection_csv(o, x); });
      }
      return kOk;
    }
    if (clear->parsed()) {
      const ClearingSolution sol = clear_standard(l.c.net, l.c.book, l.config.scenario.clearing);
      print_solution(out, l.c, sol, nullptr);
      if (!common.out_dir.empty()) export_results(common.out_dir, l.c, sol);
      return kOk;
    }
    if (dpd->parsed()) {
      // Without premium flags the premiums stored in the case are used.
      if (any_alpha_flag(alpha)) {
        apply_alpha_flags(alpha, l.config);
        const auto a = premiums(alpha, l.config, l.c.book);
        for (std::size_t i = 0; i < a.size(); ++i) l.c.book.loads[i].alpha = a[i];
      }
      const DpdSolution sol = clear_dpd(l.c.net, l.c.book, l.config.scenario.clearing);
      print_solution(out, l.c, sol, &sol);
      if (!common.out_dir.empty()) export_results(common.out_dir, l.c, sol);
      return kOk;
    }
    if (sweep->parsed()) {
      if (!alpha.file.empty()) {
        throw CLI::ValidationError("--alpha-file", "sweep-res samples premiums; use --alpha-*");
      }
      apply_alpha_flags(alpha, l.config);
      const auto reports = res_sweep(l.c.net, l.c.book, l.config.scenario, parse_shares(shares_text));
      write_report_csv(out, reports);
      if (!common.out_dir.empty()) export_reports(common.out_dir, reports);
      return kOk;
    }
    if (report->parsed()) {
      OrderBook book = l.c.book;
      if (!report_share && !common.config_path.empty()) {
        report_share = l.config.scenario.target_res_share;
      }
      if (report_share) book = scale_res(l.c.net, book, *report_share);
      apply_alpha_flags(alpha, l.config);
      const ScenarioReport r =
          compare_clearings(l.c.net, book, premiums(alpha, l.config, book), l.config.scenario);
      print_report(out, r);
      if (!common.out_dir.empty()) export_reports(common.out_dir, {r});
      return kOk;
    }
  } catch (const ValidationError& e) {
    for (const auto& f : e.report().findings()) err << "finding " << f.code << ": " << f.message << '\n';
    err << "error: case is invalid\n";
    return kValidationFailure;
  } catch (const ClearingError& e) {
    err << "error: " << e.what() << '\n';
    return kNotOptimal;
  } catch (const ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kIoOrParseError;
  } catch (const IoError& e) {
    err << "error: " << e.what() << '\n';
    return kIoOrParseError;
  } catch (const std::filesystem::filesystem_error& e) {
    err << "error: " << e.what() << '\n';
    return kIoOrParseError;
  } catch (const CLI::ValidationError& e) {
    err << "error: " << e.what() << '\n';
    return kIoOrParseError;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kValidationFailure;
  }
  return kOk;
}

}  // namespace gridclear::cli
