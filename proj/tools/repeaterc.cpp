// repeaterc: command-line front end for the repeater resource calculations.
//
// Exit codes: 0 success, 2 invalid arguments, 3 numerical failure.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "repeaterc/channels.hpp"
#include "repeaterc/entmeasures.hpp"
#include "repeaterc/errors.hpp"
#include "repeaterc/repeater.hpp"
#include "repeaterc/report.hpp"

namespace {

using namespace repeaterc;

constexpr int kExitArgs = 2;
constexpr int kExitNumerical = 3;

struct Options {
  std::string channel;
  std::string bell = "phi-plus";
  double gamma = 0.0;
  double gamma_min = 0.0;
  double gamma_max = 10.0;
  std::size_t steps = 101;
  std::vector<std::size_t> sections{1};
  std::size_t m_max = 0;  // 0: mode default
  std::size_t m_a = 1;
  std::size_t m_b = 2;
  std::string format;
  std::string out;
  int precision = 9;
  std::string figure;
};

void emit(const Options& o, const std::string& text) {
  if (o.out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(o.out, std::ios::binary);
  if (!f) throw std::invalid_argument("cannot open output file '" + o.out + "'");
  f << text;
}

OutputSpec output_spec(const Options& o, OutputFormat fallback) {
  OutputSpec spec{o.format.empty() ? fallback : parse_output_format(o.format), o.precision};
  spec.validate();
  return spec;
}

std::size_t single_sections(const Options& o) {
  if (o.sections.size() != 1) throw std::invalid_argument("--sections takes a single value here");
  return o.sections.front();
}

Scenario scenario(const Options& o) {
  return Scenario::make(parse_channel_kind(o.channel), parse_bell_input(o.bell), o.gamma);
}

std::size_t m_max_for(const Options& o, const Scenario& s) {
  return o.m_max == 0 ? default_m_max(s.mode) : o.m_max;
}

std::string cmd_state(const Options& o) {
  const OutputSpec spec = output_spec(o, OutputFormat::Json);
  const auto kind = parse_channel_kind(o.channel);
  const auto bell = parse_bell_input(o.bell);
  const std::size_t m = single_sections(o);
  const SectionEvaluation ev = evaluate_section(kind, bell, o.gamma, m);

  if (spec.format == OutputFormat::Json) {
    json j{{"channel", o.channel},
           {"bell", o.bell},
           {"gamma", o.gamma},
           {"sections", m},
           {"gamma_per_qubit", round_to_precision(o.gamma / static_cast<double>(m), spec.precision)}};
    if (ev.watched) {
      j.update(to_json(*ev.watched, spec.precision));
    } else {
      j.update(to_json(*ev.state, spec.precision));
    }
    return j.dump(2) + "\n";
  }

  std::ostringstream os;
  CsvWriter w(os, spec.precision);
  if (ev.watched) {
    w.header({"index", "re", "im", "survival_probability"});
    for (std::size_t i = 0; i < 4; ++i) {
      const auto z = ev.watched->conditional_state[i];
      w.cell(i).cell(z.real()).cell(z.imag()).cell(ev.watched->survival_probability).end_row();
    }
  } else {
    w.header({"row", "col", "re", "im"});
    const auto& mat = ev.state->matrix();
    for (std::size_t r = 0; r < mat.rows(); ++r)
      for (std::size_t c = 0; c < mat.cols(); ++c)
        w.cell(r).cell(c).cell(mat(r, c).real()).cell(mat(r, c).imag()).end_row();
  }
  return os.str();
}

std::string cmd_bounds(const Options& o) {
  const OutputSpec spec = output_spec(o, OutputFormat::Json);
  const auto kind = parse_channel_kind(o.channel);
  const auto bell = parse_bell_input(o.bell);
  const std::size_t m = single_sections(o);
  const SectionEvaluation ev = evaluate_section(kind, bell, o.gamma, m);

  if (spec.format == OutputFormat::Json) {
    json j{{"channel", o.channel}, {"bell", o.bell}, {"gamma", o.gamma}, {"sections", m}};
    j.update(to_json(ev.bounds, spec.precision));
    j["entangled"] = ev.entangled;
    if (ev.watched) {
      j["survival_probability"] = round_to_precision(ev.watched->survival_probability, spec.precision);
    }
    return j.dump(2) + "\n";
  }
  std::ostringstream os;
  CsvWriter w(os, spec.precision);
  w.header({"e_formation", "coherent_info_1", "coherent_info_2", "lower_bound",
            "exact_distillable", "entangled"});
  w.cell(ev.bounds.e_formation)
      .cell(ev.bounds.coherent_info_1)
      .cell(ev.bounds.coherent_info_2)
      .cell(ev.bounds.lower_bound)
      .cell(ev.bounds.exact_distillable)
      .cell(ev.entangled)
      .end_row();
  return os.str();
}

std::string cmd_eta(const Options& o) {
  const OutputSpec spec = output_spec(o, OutputFormat::Csv);
  const Scenario s = scenario(o);
  const EtaScan sc = scan(s, m_max_for(o, s));
  if (spec.format == OutputFormat::Json) return to_json(sc, spec.precision).dump(2) + "\n";
  std::ostringstream os;
  write_eta_csv(os, sc, spec.precision);
  return os.str();
}

std::string cmd_scan(const Options& o) {
  const OutputSpec spec = output_spec(o, OutputFormat::Csv);
  const auto kind = parse_channel_kind(o.channel);
  const auto bell = parse_bell_input(o.bell);
  const auto grid = linear_grid(o.gamma_min, o.gamma_max, o.steps);
  const std::size_t m_max = o.m_max == 0 ? default_m_max(bound_mode_for(kind)) : o.m_max;
  const auto scans = scan_eta_grid(kind, bell, grid, m_max);
  if (spec.format == OutputFormat::Json) {
    json j = json::array();
    for (const auto& sc : scans) j.push_back(to_json(sc, spec.precision));
    return j.dump(2) + "\n";
  }
  std::ostringstream os;
  write_eta_grid_csv(os, scans, spec.precision);
  return os.str();
}

std::string cmd_yield(const Options& o) {
  const OutputSpec spec = output_spec(o, OutputFormat::Csv);
  const auto table = scan_yield(parse_channel_kind(o.channel), parse_bell_input(o.bell),
                                o.sections, linear_grid(o.gamma_min, o.gamma_max, o.steps));
  if (spec.format == OutputFormat::Json) {
    json rows = json::array();
    for (std::size_t i = 0; i < table.gammas.size(); ++i) {
      json row{{"gamma", round_to_precision(table.gammas[i], spec.precision)}};
      for (std::size_t k = 0; k < table.sections.size(); ++k)
        row[section_column(table.sections[k])] = round_to_precision(table.values[i][k], spec.precision);
      rows.push_back(row);
    }
    return rows.dump(2) + "\n";
  }
  std::ostringstream os;
  write_yield_csv(os, table, spec.precision);
  return os.str();
}

std::string cmd_optimal(const Options& o) {
  const OutputSpec spec = output_spec(o, OutputFormat::Csv);
  const Scenario s = scenario(o);
  const OptimalSections best = optimal_sections(s, m_max_for(o, s));
  if (spec.format == OutputFormat::Json) {
    return json{{"m_star", best.m}, {"eta_star", round_to_precision(best.eta, spec.precision)}}
               .dump(2) +
           "\n";
  }
  std::ostringstream os;
  CsvWriter(os, spec.precision).header({"m_star", "eta_star"}).cell(best.m).cell(best.eta).end_row();
  return os.str();
}

std::string cmd_threshold(const Options& o) {
  const OutputSpec spec = output_spec(o, OutputFormat::Csv);
  const Scenario s = scenario(o);
  const Thresholds t = threshold_sections(s, m_max_for(o, s));
  if (spec.format == OutputFormat::Json) {
    auto opt = [](std::optional<std::size_t> v) { return v ? json(*v) : json(nullptr); };
    return json{{"m_entangled", opt(t.m_entangled)}, {"m_eta_gt_1", opt(t.m_eta_gt_1)}}.dump(2) +
           "\n";
  }
  std::ostringstream os;
  CsvWriter(os, spec.precision)
      .header({"m_entangled", "m_eta_gt_1"})
      .cell(t.m_entangled)
      .cell(t.m_eta_gt_1)
      .end_row();
  return os.str();
}

std::string cmd_crossover(const Options& o) {
  const OutputSpec spec = output_spec(o, OutputFormat::Csv);
  const double g = crossover_gamma(parse_channel_kind(o.channel), parse_bell_input(o.bell), o.m_a,
                                   o.m_b, Bracket{o.gamma_min, o.gamma_max});
  if (spec.format == OutputFormat::Json) {
    return json{{"gamma_star", round_to_precision(g, spec.precision)}}.dump(2) + "\n";
  }
  return "gamma_star=" + format_number(g, spec.precision) + "\n";
}

void cmd_figure(const Options& o) {
  const auto files = figure_dataset(o.figure);
  const std::filesystem::path dir = o.out.empty() ? std::filesystem::path(".") : std::filesystem::path(o.out);
  std::filesystem::create_directories(dir);
  for (const auto& f : files) {
    std::ofstream os(dir / f.filename, std::ios::binary);
    if (!os) throw std::invalid_argument("cannot write '" + (dir / f.filename).string() + "'");
    os << f.contents;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Entanglement yields and repeater resource reduction for noisy qubit channels",
               "repeaterc"};
  app.require_subcommand(1);
  Options o;

  auto add_channel = [&](CLI::App* sub) {
    sub->add_option("--channel", o.channel, "Channel kind")->required();
    sub->add_option("--bell", o.bell, "Bell input: psi-plus | phi-plus")->capture_default_str();
  };
  auto add_output = [&](CLI::App* sub) {
    sub->add_option("--format", o.format, "csv | json");
    sub->add_option("--out", o.out, "Output file (default: stdout)");
    sub->add_option("--precision", o.precision, "Significant digits [6, 17]")->capture_default_str();
  };
  auto add_grid = [&](CLI::App* sub) {
    sub->add_option("--gamma-min", o.gamma_min, "Lowest gamma")->capture_default_str();
    sub->add_option("--gamma-max", o.gamma_max, "Highest gamma")->capture_default_str();
    sub->add_option("--steps", o.steps, "Number of grid points")->capture_default_str();
  };

  auto* state = app.add_subcommand("state", "Two-qubit state after one section");
  auto* bounds = app.add_subcommand("bounds", "Entanglement bounds for one section");
  for (auto* sub : {state, bounds}) {
    add_channel(sub);
    sub->add_option("--gamma", o.gamma, "Full-channel gamma")->required();
    sub->add_option("--sections", o.sections, "Section count")->expected(1)->capture_default_str();
    add_output(sub);
  }

  auto* eta_cmd = app.add_subcommand("eta", "Resource-reduction ratio for m = 1..m_max");
  auto* optimal = app.add_subcommand("optimal", "Section count maximizing eta");
  auto* threshold = app.add_subcommand("threshold", "First entangled m and first m with eta > 1");
  for (auto* sub : {eta_cmd, optimal, threshold}) {
    add_channel(sub);
    sub->add_option("--gamma", o.gamma, "Full-channel gamma")->required();
    sub->add_option("--m-max", o.m_max, "Largest section count (default 20 exact, 60 bounds)");
    add_output(sub);
  }

  auto* scan_cmd = app.add_subcommand("scan", "eta over a (gamma, m) grid");
  add_channel(scan_cmd);
  add_grid(scan_cmd);
  scan_cmd->add_option("--m-max", o.m_max, "Largest section count");
  add_output(scan_cmd);

  auto* yield_cmd = app.add_subcommand("yield", "Ebits per source over a gamma grid");
  add_channel(yield_cmd);
  add_grid(yield_cmd);
  yield_cmd->add_option("--sections", o.sections, "Section counts (repeatable or comma list)")
      ->delimiter(',');
  add_output(yield_cmd);

  auto* crossover = app.add_subcommand("crossover", "Gamma where m_a and m_b yields cross");
  add_channel(crossover);
  crossover->add_option("--m-a", o.m_a, "First section count")->capture_default_str();
  crossover->add_option("--m-b", o.m_b, "Second section count")->capture_default_str();
  crossover->add_option("--gamma-min", o.gamma_min, "Bracket low end")->capture_default_str();
  crossover->add_option("--gamma-max", o.gamma_max, "Bracket high end")->capture_default_str();
  add_output(crossover);

  auto* figure = app.add_subcommand("figure", "Write a figure dataset as CSV");
  figure->add_option("name", o.figure, "fig3 .. fig11")->required();
  figure->add_option("--out", o.out, "Output directory (default: .)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitArgs;
  }

  try {
    if (*figure) {
      cmd_figure(o);
      return 0;
    }
    std::string text;
    if (*state) text = cmd_state(o);
    else if (*bounds) text = cmd_bounds(o);
    else if (*eta_cmd) text = cmd_eta(o);
    else if (*scan_cmd) text = cmd_scan(o);
    else if (*yield_cmd) text = cmd_yield(o);
    else if (*optimal) text = cmd_optimal(o);
    else if (*threshold) text = cmd_threshold(o);
    else if (*crossover) text = cmd_crossover(o);
    emit(o, text);
  } catch (const std::invalid_argument& e) {
    std::cerr << "repeaterc: " << e.what() << "\n";
    return kExitArgs;
  } catch (const std::exception& e) {
    std::cerr << "repeaterc: numerical failure: " << e.what() << "\n";
    return kExitNumerical;
  }
  return 0;
}
