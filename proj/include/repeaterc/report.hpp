// report.hpp
// Serialization of states, bounds and scans to CSV / JSON, and the fixed
// figure datasets. Output is byte-deterministic: no timestamps, LF endings,
// numbers printed with the shortest representation that round-trips at the
// requested precision.

#pragma once

#include <charconv>
#include <cmath>
#include <cstddef>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include <json.hpp>

#include "repeaterc/channels.hpp"
#include "repeaterc/entmeasures.hpp"
#include "repeaterc/repeater.hpp"

namespace repeaterc {

enum class OutputFormat { Csv, Json };

struct OutputSpec {
  OutputFormat format = OutputFormat::Csv;
  int precision = 9;  // significant digits, [6, 17]

  void validate() const {
    if (precision < 6 || precision > 17) {
      throw std::invalid_argument("precision must lie in [6, 17], got " +
                                  std::to_string(precision));
    }
  }
};

inline OutputFormat parse_output_format(std::string_view token) {
  if (token == "csv") return OutputFormat::Csv;
  if (token == "json") return OutputFormat::Json;
  throw std::invalid_argument("unknown format '" + std::string(token) + "'");
}

inline double parse_number(std::string_view text) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc{} || ptr != text.data() + text.size()) {
    throw std::invalid_argument("not a number: '" + std::string(text) + "'");
  }
  return v;
}

namespace detail {

inline int significant_digits(std::string_view s) {
  const auto e = s.find_first_of("eE");
  if (e != std::string_view::npos) s = s.substr(0, e);
  std::string digits;
  for (char ch : s)
    if (ch >= '0' && ch <= '9') digits.push_back(ch);
  const auto first = digits.find_first_not_of('0');
  if (first == std::string::npos) return 0;
  const auto last = digits.find_last_not_of('0');
  return static_cast<int>(last - first + 1);
}

}  // namespace detail

// Shortest round-trip representation when it needs at most `precision`
// significant digits, otherwise the shortest form of v rounded to
// `precision` digits. Either way the output is a fixed point of
// format -> parse -> format.
inline std::string format_number(double v, int precision) {
  if (!std::isfinite(v)) throw std::invalid_argument("format_number: non-finite value");
  if (v == 0.0) return "0";
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  std::string_view shortest(buf, static_cast<std::size_t>(res.ptr - buf));
  if (detail::significant_digits(shortest) <= precision) return std::string(shortest);
  res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::scientific, precision - 1);
  const double rounded = parse_number(std::string_view(buf, static_cast<std::size_t>(res.ptr - buf)));
  res = std::to_chars(buf, buf + sizeof buf, rounded);
  return std::string(buf, static_cast<std::size_t>(res.ptr - buf));
}

// v rounded to what format_number would print.
inline double round_to_precision(double v, int precision) {
  return parse_number(format_number(v, precision));
}

// ---------------------------------------------------------------------------
// CSV

class CsvWriter {
 public:
  CsvWriter(std::ostream& os, int precision) : os_(os), precision_(precision) {}

  CsvWriter& header(std::initializer_list<std::string_view> cols) {
    std::vector<std::string> v(cols.begin(), cols.end());
    return header(v);
  }
  CsvWriter& header(const std::vector<std::string>& cols) {
    for (std::size_t i = 0; i < cols.size(); ++i) {
      if (i) os_ << ',';
      os_ << cols[i];
    }
    os_ << '\n';
    return *this;
  }

  CsvWriter& cell(double v) { return raw(format_number(v, precision_)); }
  CsvWriter& cell(std::size_t v) { return raw(std::to_string(v)); }
  CsvWriter& cell(bool v) { return raw(v ? "true" : "false"); }
  CsvWriter& cell(std::optional<double> v) { return v ? cell(*v) : raw(""); }
  CsvWriter& cell(std::optional<std::size_t> v) { return v ? cell(*v) : raw("none"); }
  CsvWriter& raw(std::string_view s) {
    if (!first_) os_ << ',';
    os_ << s;
    first_ = false;
    return *this;
  }
  CsvWriter& end_row() {
    os_ << '\n';
    first_ = true;
    return *this;
  }

 private:
  std::ostream& os_;
  int precision_;
  bool first_ = true;
};

inline void write_eta_csv(std::ostream& os, const EtaScan& scan, int precision) {
  CsvWriter w(os, precision);
  w.header({"m", "eta", "lower_bound", "entangled"});
  for (const auto& pt : scan.points)
    w.cell(pt.m).cell(pt.eta).cell(pt.lower_bound_value).cell(pt.entangled).end_row();
}

inline void write_eta_grid_csv(std::ostream& os, const std::vector<EtaScan>& grid, int precision) {
  CsvWriter w(os, precision);
  w.header({"gamma", "m", "eta", "lower_bound", "entangled"});
  for (const auto& sc : grid)
    for (const auto& pt : sc.points)
      w.cell(sc.scenario.gamma)
          .cell(pt.m)
          .cell(pt.eta)
          .cell(pt.lower_bound_value)
          .cell(pt.entangled)
          .end_row();
}

inline std::string section_column(std::size_t m) { return "m" + std::to_string(m); }

inline void write_yield_csv(std::ostream& os, const YieldTable& t, int precision) {
  CsvWriter w(os, precision);
  std::vector<std::string> cols{"gamma"};
  for (auto m : t.sections) cols.push_back(section_column(m));
  w.header(cols);
  for (std::size_t i = 0; i < t.gammas.size(); ++i) {
    w.cell(t.gammas[i]);
    for (double v : t.values[i]) w.cell(v);
    w.end_row();
  }
}

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

inline std::vector<std::string> split_csv_line(std::string_view line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    out.emplace_back(line.substr(start, comma - start));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

inline CsvTable parse_csv(std::string_view text) {
  CsvTable t;
  bool first = true;
  std::size_t start = 0;
  while (start < text.size()) {
    auto nl = text.find('\n', start);
    if (nl == std::string_view::npos) nl = text.size();
    auto fields = split_csv_line(text.substr(start, nl - start));
    if (first) {
      t.header = std::move(fields);
      first = false;
    } else {
      t.rows.push_back(std::move(fields));
    }
    start = nl + 1;
  }
  return t;
}

// ---------------------------------------------------------------------------
// JSON

using nlohmann::json;

inline json to_json_matrix(const ComplexMatrix& m, int precision) {
  json entries = json::array();
  for (const auto& z : m.entries())
    entries.push_back({round_to_precision(z.real(), precision),
                       round_to_precision(z.imag(), precision)});
  return {{"rows", m.rows()}, {"cols", m.cols()}, {"entries", entries}};
}

inline json to_json(const DensityMatrix& rho, int precision) {
  json j = to_json_matrix(rho.matrix(), precision);
  j["trace"] = round_to_precision(rho.matrix().trace().real(), precision);
  json eig = json::array();
  for (double e : rho.spectrum()) eig.push_back(round_to_precision(e, precision));
  j["eigenvalues"] = eig;
  return j;
}

inline json to_json(const WatchedOutcome& w, int precision) {
  json amps = json::array();
  for (const auto& z : w.conditional_state)
    amps.push_back({round_to_precision(z.real(), precision), round_to_precision(z.imag(), precision)});
  return {{"amplitudes", amps},
          {"survival_probability", round_to_precision(w.survival_probability, precision)}};
}

inline json to_json(const BoundsReport& b, int precision) {
  json j{{"e_formation", round_to_precision(b.e_formation, precision)},
         {"coherent_info_1", round_to_precision(b.coherent_info_1, precision)},
         {"coherent_info_2", round_to_precision(b.coherent_info_2, precision)},
         {"lower_bound", round_to_precision(b.lower_bound, precision)}};
  j["exact_distillable"] =
      b.exact_distillable ? json(round_to_precision(*b.exact_distillable, precision)) : json(nullptr);
  return j;
}

inline json to_json(const EtaScan& scan, int precision) {
  json pts = json::array();
  for (const auto& pt : scan.points)
    pts.push_back({{"m", pt.m},
                   {"eta", round_to_precision(pt.eta, precision)},
                   {"lower_bound", round_to_precision(pt.lower_bound_value, precision)},
                   {"entangled", pt.entangled}});
  return {{"channel", std::string(to_token(scan.scenario.kind))},
          {"bell", std::string(to_token(scan.scenario.input))},
          {"gamma", scan.scenario.gamma},
          {"points", pts}};
}

// ---------------------------------------------------------------------------
// Per-state evaluation shared by the `state` and `bounds` commands.

struct SectionEvaluation {
  std::optional<DensityMatrix> state;   // trace-preserving channels
  std::optional<WatchedOutcome> watched;
  BoundsReport bounds;
  bool entangled = false;
};

inline SectionEvaluation evaluate_section(ChannelKind kind, BellInput input, double gamma,
                                          std::size_t sections) {
  require_gamma(gamma);
  require_sections(sections, "evaluate_section");
  const double g = gamma / static_cast<double>(sections);
  SectionEvaluation ev;
  if (kind == ChannelKind::WatchedAmplitudeDamping) {
    ev.watched = watched_conditional(input, g);
    const auto pure = DensityMatrix::pure(ev.watched->conditional_state);
    ev.bounds = bounds_report(pure, distill_pure(ev.watched->conditional_state));
  } else {
    ev.state = propagate_bell(kind, input, g);
    std::optional<double> exact;
    if (is_flip_channel(kind)) exact = distill_two_bell_mixture(bell_mixture_lambda(kind, g));
    ev.bounds = bounds_report(*ev.state, exact);
  }
  const double credited = ev.bounds.exact_distillable.value_or(ev.bounds.lower_bound);
  ev.entangled = credited > kEntangledThreshold;
  return ev;
}

// ---------------------------------------------------------------------------
// Figure datasets

struct FigureFile {
  std::string filename;
  std::string contents;
};

inline const std::vector<std::string>& figure_names() {
  static const std::vector<std::string> names{"fig3", "fig4", "fig5",  "fig6", "fig7",
                                              "fig8", "fig9", "fig10", "fig11"};
  return names;
}

inline constexpr int kFigurePrecision = 9;

namespace detail {

inline std::string eta_csv(ChannelKind kind, BellInput input, double gamma, std::size_t m_max) {
  std::ostringstream os;
  write_eta_csv(os, scan(Scenario::make(kind, input, gamma), m_max), kFigurePrecision);
  return os.str();
}

inline std::string two_section_yield_csv(BellInput input) {
  std::ostringstream os;
  write_yield_csv(os,
                  scan_yield(ChannelKind::WatchedAmplitudeDamping, input, {1, 2},
                             linear_grid(0.0, 3.0, 301)),
                  kFigurePrecision);
  return os.str();
}

}  // namespace detail

// The datasets behind each reproduced figure, parameters fixed.
inline std::vector<FigureFile> figure_dataset(std::string_view name) {
  using CK = ChannelKind;
  using BI = BellInput;
  if (name == "fig3") return {{"fig3.csv", detail::two_section_yield_csv(BI::PsiPlus)}};
  if (name == "fig4") {
    return {{"fig4.csv", detail::eta_csv(CK::WatchedAmplitudeDamping, BI::PsiPlus, 1.5, 20)}};
  }
  if (name == "fig5") {
    std::ostringstream os;
    write_eta_grid_csv(os,
                       scan_eta_grid(CK::WatchedAmplitudeDamping, BI::PsiPlus,
                                     linear_grid(0.0, 3.0, 31), 10),
                       kFigurePrecision);
    return {{"fig5.csv", os.str()}};
  }
  if (name == "fig6") return {{"fig6.csv", detail::two_section_yield_csv(BI::PhiPlus)}};
  if (name == "fig7") {
    return {{"fig7.csv", detail::eta_csv(CK::WatchedAmplitudeDamping, BI::PhiPlus, 1.0, 20)}};
  }
  if (name == "fig8") return {{"fig8.csv", detail::eta_csv(CK::BitFlip, BI::PsiPlus, 1.5, 10)}};
  if (name == "fig9") {
    return {{"fig9.csv", detail::eta_csv(CK::AmplitudeDamping, BI::PhiPlus, 1.0, 60)}};
  }
  if (name == "fig10") {
    return {{"fig10.csv", detail::eta_csv(CK::AmplitudeDamping, BI::PsiPlus, 2.0, 60)}};
  }
  if (name == "fig11") {
    return {{"fig11_phase_damping.csv", detail::eta_csv(CK::PhaseDamping, BI::PhiPlus, 1.0, 60)},
            {"fig11_depolarizing.csv",
             detail::eta_csv(CK::Depolarizing, BI::PhiPlus, 0.545, 60)}};
  }
  throw std::invalid_argument("unknown figure '" + std::string(name) + "'");
}

}  // namespace repeaterc
