#include "collatz/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <iomanip>
#include <sstream>

namespace collatz::report {

using nlohmann::json;

std::string csv_field(std::string_view s) {
  if (s.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(s);
  std::string out = "\"";
  for (const char c : s) {
    if (c == '"') out += "\"\"";
    else out += c;
  }
  out += '"';
  return out;
}

std::string csv_row(const std::vector<std::string>& fields) {
  std::string out;
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) out += ',';
    out += csv_field(fields[i]);
  }
  out += "\r\n";
  return out;
}

namespace {

std::string ratio_text(const std::optional<Ratio>& r) { return r ? r->to_decimal(5) : "undefined"; }

json optional_number(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

std::string fixed(double v, int places) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", places, v);
  return buf;
}

}  // namespace

std::string render_table(const BlockCensus& census) {
  std::ostringstream os;
  if (census.length != 100) {
    os << "n = " << census.base << " + offset\n";
    os << std::setw(8) << "offset" << std::setw(10) << "sigma" << '\n';
    for (std::size_t i = 0; i < census.sigmas.size(); ++i) {
      os << std::setw(8) << i << std::setw(10) << census.sigmas[i] << '\n';
    }
    return os.str();
  }
  os << "n = " << census.base << " + 10j + k\n";
  os << std::setw(6) << "";
  for (int j = 0; j < 10; ++j) os << std::setw(6) << ("j=" + std::to_string(j));
  os << '\n';
  for (int k = 0; k < 10; ++k) {
    os << std::setw(6) << ("k=" + std::to_string(k));
    for (int j = 0; j < 10; ++j) os << std::setw(6) << census.sigmas[static_cast<std::size_t>(10 * j + k)];
    os << '\n';
  }
  return os.str();
}

std::string render_rows(const BlockCensus& census) {
  std::ostringstream os;
  os << census.base << " <= n <= " << census.base + Natural(census.length - 1) << '\n';
  os << std::setw(10) << "sigma_inf" << std::setw(8) << "freq." << std::setw(11) << "1-ratio" << '\n';
  for (const auto& row : census.rows) {
    os << std::setw(10) << row.sigma_inf << std::setw(8) << row.frequency << std::setw(11)
       << ratio_text(row.one_ratio) << '\n';
  }
  if (!census.ratios_consistent()) {
    os << "note: " << census.ratio_mismatches.size()
       << " members differ in 1-ratio from others with the same sigma_inf\n";
  }
  return os.str();
}

std::string census_csv(const BlockCensus& census) {
  std::string out = csv_row({"sigma_inf", "frequency", "one_ratio", "odd_count"});
  for (const auto& row : census.rows) {
    out += csv_row({std::to_string(row.sigma_inf), std::to_string(row.frequency), ratio_text(row.one_ratio),
                    row.one_ratio ? std::to_string(row.one_ratio->num) : ""});
  }
  return out;
}

json census_json(const BlockCensus& census) {
  json rows = json::array();
  for (const auto& row : census.rows) {
    rows.push_back({{"sigma_inf", row.sigma_inf},
                    {"frequency", row.frequency},
                    {"one_ratio", row.one_ratio ? json(row.one_ratio->to_decimal(5)) : json(nullptr)},
                    {"odd_count", row.one_ratio ? json(row.one_ratio->num) : json(nullptr)}});
  }
  return {{"schema", kSchema},
          {"kind", "census"},
          {"base", census.base.to_string()},
          {"length", census.length},
          {"rows", rows},
          {"sigmas", census.sigmas},
          {"gaps", census.gaps()},
          {"ratios_consistent", census.ratios_consistent()},
          {"ratio_mismatches", census.ratio_mismatches}};
}

std::string trajectory_csv(const Trajectory& t) {
  std::string out = csv_row({"step", "value", "parity"});
  for (std::size_t i = 0; i < t.values.size(); ++i) {
    out += csv_row({std::to_string(i), t.values[i].to_string(), t.values[i].is_odd() ? "1" : "0"});
  }
  return out;
}

json trajectory_json(const Trajectory& t, const GeneralizedCollatzMap& map) {
  json values = json::array();
  for (const auto& v : t.values) values.push_back(v.to_string());
  json j = {{"schema", kSchema},
            {"kind", "trajectory"},
            {"map", map.name()},
            {"map_spec", map.spec_string()},
            {"start", t.start.to_string()},
            {"outcome", to_string(t.outcome)},
            {"steps", t.steps},
            {"last", t.last.to_string()},
            {"peak", t.peak.to_string()},
            {"odd_count", t.odd_count},
            {"values", values}};
  if (t.cycle) {
    json members = json::array();
    for (const auto& m : t.cycle->members) members.push_back(m.to_string());
    j["cycle"] = {{"members", members}, {"length", t.cycle->length()}, {"odd_count", t.cycle->odd_count}};
  }
  return j;
}

json stats_json(const StatRecord& r) {
  json stopping;
  switch (r.stopping.kind) {
    case StoppingTime::kFinite: stopping = r.stopping.steps; break;
    case StoppingTime::kInfinite: stopping = "infinite"; break;
    case StoppingTime::kUnknown: stopping = nullptr; break;
  }
  return {{"schema", kSchema},
          {"kind", "stats"},
          {"n", r.n.to_string()},
          {"outcome", to_string(r.outcome)},
          {"sigma_inf", r.sigma_inf ? json(*r.sigma_inf) : json(nullptr)},
          {"stopping_time", stopping},
          {"one_ratio", r.one_ratio ? json(r.one_ratio->to_decimal(5)) : json(nullptr)},
          {"odd_count", r.one_ratio ? json(r.one_ratio->num) : json(nullptr)},
          {"rho", optional_number(r.rho)},
          {"gamma", optional_number(r.gamma)},
          {"max_iterate", r.max_iterate.to_string()}};
}

json prediction_json(const Natural& n, const model::Prediction& p) {
  const auto& e = p.extremal;
  return {{"schema", kSchema},
          {"kind", "prediction"},
          {"n", n.to_string()},
          {"ln_n", p.ln_n},
          {"slope", p.slope},
          {"step_coefficient", model::step_coefficient()},
          {"expected_steps", p.expected_steps},
          {"upper_bound_coefficient", model::kUpperBoundCoefficient},
          {"upper_bound_steps", p.upper_bound_steps},
          {"extremal",
           {{"per_ln_n",
             {{"rise_steps", e.per_ln.rise_steps},
              {"rise_slope", e.per_ln.rise_slope},
              {"peak_height", e.per_ln.peak_height},
              {"fall_steps", e.per_ln.fall_steps},
              {"fall_slope", e.per_ln.fall_slope},
              {"total_steps", e.per_ln.total_steps}}},
            {"rise_steps", e.rise_steps()},
            {"peak_log", e.peak_log()},
            {"fall_steps", e.fall_steps()},
            {"total_steps", e.total_steps()}}}};
}

std::string comparison_csv(const model::Comparison& c) {
  std::string out = csv_row({"step", "residual"});
  for (std::size_t k = 0; k < c.residuals.size(); ++k) out += csv_row({std::to_string(k), fixed(c.residuals[k], 6)});
  return out;
}

json comparison_json(const model::Comparison& c) {
  return {{"schema", kSchema},
          {"kind", "comparison"},
          {"ln_n", c.ln_n},
          {"observed_steps", c.observed_steps},
          {"predicted_steps", c.predicted_steps},
          {"ratio", c.ratio},
          {"max_abs_residual", c.max_abs_residual},
          {"mean_abs_residual", c.mean_abs_residual},
          {"small_n_caveat", c.small_n_caveat}};
}

json records_json(const RecordTable& t) {
  auto reals = [](const std::vector<RealRecord>& v) {
    json a = json::array();
    for (const auto& r : v) a.push_back({{"n", r.n}, {"value", r.value}});
    return a;
  };
  json peaks = json::array();
  for (const auto& p : t.peak) peaks.push_back({{"n", p.n}, {"peak", p.peak.to_string()}});
  return {{"schema", kSchema},
          {"kind", "records"},
          {"lo", t.lo},
          {"hi", t.hi},
          {"gamma", reals(t.gamma)},
          {"rho", reals(t.rho)},
          {"peak", peaks},
          {"gamma_threshold", t.gamma_threshold},
          {"gamma_threshold_hits", t.gamma_threshold_hits},
          {"unresolved", t.unresolved}};
}

json verification_json(const VerificationReport& r) {
  json ce = json::array();
  for (const auto& c : r.counterexamples) ce.push_back({{"n", c.n.to_string()}, {"reason", c.reason}});
  return {{"schema", kSchema},
          {"kind", "verification"},
          {"lo", r.lo},
          {"hi", r.hi},
          {"k", r.k},
          {"workers", r.workers},
          {"complete", r.complete},
          {"resumed", r.resumed},
          {"next_block", r.next_block},
          {"end_block", r.end_block},
          {"survivors_checked", r.survivors_checked},
          {"counterexamples", ce}};
}

json census_cycles_json(const CycleCensus& c, const GeneralizedCollatzMap& map) {
  json cycles = json::array();
  for (const auto& cy : c.cycles) {
    json members = json::array();
    for (const auto& m : cy.members) members.push_back(m.to_string());
    cycles.push_back({{"members", members}, {"length", cy.length()}, {"odd_count", cy.odd_count}});
  }
  json unresolved = json::array();
  for (const auto& u : c.unresolved) {
    json e = {{"start", u.start}, {"outcome", to_string(u.outcome)}};
    if (u.via) e["via"] = *u.via;
    unresolved.push_back(e);
  }
  return {{"schema", kSchema}, {"kind", "cycle_census"}, {"map", map.name()}, {"lo", c.lo},
          {"hi", c.hi},        {"cycles", cycles},         {"unresolved", unresolved}};
}

json tag_run_json(const tag::TagSystem& sys, const tag::TagRun& run) {
  json j = {{"schema", kSchema},
            {"kind", "tag_run"},
            {"system", sys.name},
            {"mu", sys.mu},
            {"nu", sys.nu},
            {"initial", tag::format_word(run.initial)},
            {"outcome", tag::to_string(run.outcome)},
            {"halted", run.halted},
            {"steps", run.steps},
            {"final_length", run.final_word.size()},
            {"zero_configs", run.zero_configs}};
  if (run.final_word.size() <= 4096) j["final_word"] = tag::format_word(run.final_word);
  if (run.outcome == tag::TagOutcome::kCycled) j["period"] = run.period;
  return j;
}

std::string members_csv(const ClosureSet& set) {
  std::string out = csv_row({"member"});
  for (const auto m : set.members) out += csv_row({std::to_string(m)});
  return out;
}

std::string density_csv(const std::vector<DensityPoint>& points) {
  std::string out = csv_row({"checkpoint", "count", "density"});
  for (const auto& p : points) {
    out += csv_row({std::to_string(p.checkpoint), std::to_string(p.count), p.density.to_decimal(6)});
  }
  return out;
}

std::string render_svg(const Trajectory& t, Scale scale, Overlay overlay) {
  constexpr double kWidth = 800, kHeight = 500, kLeft = 70, kRight = 20, kTop = 40, kBottom = 50;
  std::vector<std::pair<double, double>> pts;
  if (!t.values.empty()) {
    for (std::size_t k = 0; k < t.values.size(); ++k) {
      const double ln = t.values[k].ln();
      pts.emplace_back(static_cast<double>(k), scale == Scale::kLog ? ln : std::exp(std::min(ln, 700.0)));
    }
  } else {
    pts.emplace_back(0.0, scale == Scale::kLog ? t.start.ln() : std::exp(std::min(t.start.ln(), 700.0)));
  }

  std::vector<std::vector<std::pair<double, double>>> overlays;
  if (overlay != Overlay::kNone && t.start >= Natural(2)) {
    auto line = overlay == Overlay::kSlope ? model::slope_overlay(t.start) : model::extremal_overlay(t.start);
    if (scale == Scale::kLinear) {
      for (auto& p : line) p.second = std::exp(std::min(p.second, 700.0));
    }
    overlays.push_back(std::move(line));
  }

  double x_max = 1, y_max = 0;
  for (const auto& p : pts) {
    x_max = std::max(x_max, p.first);
    y_max = std::max(y_max, p.second);
  }
  for (const auto& line : overlays) {
    for (const auto& p : line) {
      x_max = std::max(x_max, p.first);
      y_max = std::max(y_max, p.second);
    }
  }
  if (y_max <= 0) y_max = 1;
  const double plot_w = kWidth - kLeft - kRight;
  const double plot_h = kHeight - kTop - kBottom;
  auto sx = [&](double x) { return kLeft + plot_w * x / x_max; };
  auto sy = [&](double y) { return kTop + plot_h * (1.0 - y / y_max); };
  auto points_attr = [&](const std::vector<std::pair<double, double>>& v) {
    std::string s;
    for (const auto& p : v) {
      if (!s.empty()) s += ' ';
      s += fixed(sx(p.first), 2) + "," + fixed(sy(p.second), 2);
    }
    return s;
  };

  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << kHeight
     << "\" viewBox=\"0 0 " << kWidth << ' ' << kHeight << "\">\n";
  os << "<rect x=\"0\" y=\"0\" width=\"" << kWidth << "\" height=\"" << kHeight << "\" style=\"fill:#ffffff\"/>\n";
  os << "<text x=\"" << kLeft << "\" y=\"24\" style=\"font-family:sans-serif;font-size:14px\">Trajectory of n = "
     << t.start << (scale == Scale::kLog ? " (natural log scale)" : "") << "</text>\n";
  os << "<line x1=\"" << kLeft << "\" y1=\"" << kTop + plot_h << "\" x2=\"" << kLeft + plot_w << "\" y2=\""
     << kTop + plot_h << "\" style=\"stroke:#000000;stroke-width:1\"/>\n";
  os << "<line x1=\"" << kLeft << "\" y1=\"" << kTop << "\" x2=\"" << kLeft << "\" y2=\"" << kTop + plot_h
     << "\" style=\"stroke:#000000;stroke-width:1\"/>\n";
  os << "<text x=\"" << kLeft + plot_w / 2 << "\" y=\"" << kHeight - 12
     << "\" style=\"font-family:sans-serif;font-size:12px;text-anchor:middle\">k</text>\n";
  os << "<text x=\"" << kLeft - 8 << "\" y=\"" << kTop + 4
     << "\" style=\"font-family:sans-serif;font-size:11px;text-anchor:end\">" << fixed(y_max, 2) << "</text>\n";
  os << "<text x=\"" << kLeft - 8 << "\" y=\"" << kTop + plot_h
     << "\" style=\"font-family:sans-serif;font-size:11px;text-anchor:end\">0</text>\n";
  os << "<text x=\"" << kLeft + plot_w << "\" y=\"" << kTop + plot_h + 16
     << "\" style=\"font-family:sans-serif;font-size:11px;text-anchor:end\">" << fixed(x_max, 0) << "</text>\n";
  for (const auto& line : overlays) {
    os << "<polyline points=\"" << points_attr(line)
       << "\" style=\"fill:none;stroke:#555555;stroke-width:1;stroke-dasharray:2,4\"/>\n";
  }
  if (pts.size() == 1) {
    os << "<circle cx=\"" << fixed(sx(pts[0].first), 2) << "\" cy=\"" << fixed(sy(pts[0].second), 2)
       << "\" r=\"3\" style=\"fill:#1f4e9c\"/>\n";
  } else {
    os << "<polyline points=\"" << points_attr(pts) << "\" style=\"fill:none;stroke:#1f4e9c;stroke-width:1.5\"/>\n";
  }
  os << "</svg>\n";
  return os.str();
}

}  // namespace collatz::report
