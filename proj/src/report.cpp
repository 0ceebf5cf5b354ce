#include "bishopdisc/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <set>
#include <sstream>

namespace bishopdisc {

Verdict Verdict::at_most(std::string name, double measured, double threshold) {
  return {std::move(name), measured, "<=", threshold, 0.0, measured <= threshold};
}

Verdict Verdict::at_least(std::string name, double measured, double threshold) {
  return {std::move(name), measured, ">=", threshold, 0.0, measured >= threshold};
}

Verdict Verdict::exceeds(std::string name, double measured, double threshold) {
  return {std::move(name), measured, ">", threshold, 0.0, measured > threshold};
}

Verdict Verdict::within(std::string name, double measured, double lo, double hi) {
  return {std::move(name), measured, "within", lo, hi, measured >= lo && measured <= hi};
}

Verdict Verdict::equals(std::string name, double measured, double expected) {
  return {std::move(name), measured, "==", expected, 0.0, measured == expected};
}

json Verdict::to_json() const {
  json j = {{"name", name}, {"measured", measured}, {"relation", relation},
            {"threshold", threshold}, {"pass", pass}};
  if (relation == "within") j["upper"] = upper;
  return j;
}

namespace {

double number(const json& j) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
    if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
  }
  throw Error("expected a number in report, got " + j.dump());
}

}  // namespace

Verdict Verdict::from_json(const json& j) {
  Verdict v;
  v.name = j.at("name").get<std::string>();
  v.measured = number(j.at("measured"));
  v.relation = j.at("relation").get<std::string>();
  v.threshold = number(j.at("threshold"));
  if (j.contains("upper")) v.upper = number(j.at("upper"));
  v.pass = j.at("pass").get<bool>();
  return v;
}

bool ScenarioReport::passed() const {
  return std::all_of(verdicts.begin(), verdicts.end(), [](const Verdict& v) { return v.pass; });
}

json ScenarioReport::to_json() const {
  json v = json::array();
  for (const auto& x : verdicts) v.push_back(x.to_json());
  return {{"scenario", scenario}, {"seed", seed},         {"config", config},
          {"members", members},   {"aggregates", aggregates}, {"verdicts", v},
          {"failures", failures}, {"passed", passed()}};
}

ScenarioReport ScenarioReport::from_json(const json& j) {
  ScenarioReport r;
  try {
    r.scenario = j.at("scenario").get<std::string>();
    r.seed = j.at("seed").get<std::uint64_t>();
    r.config = j.value("config", json::object());
    r.members = j.value("members", json::array());
    r.aggregates = j.value("aggregates", json::object());
    r.failures = j.value("failures", json::array());
    for (const auto& v : j.value("verdicts", json::array())) r.verdicts.push_back(Verdict::from_json(v));
  } catch (const json::exception& e) {
    throw Error(std::string("malformed report: ") + e.what());
  }
  return r;
}

LogLogFit fit_loglog(const std::vector<double>& x, const std::vector<double>& y) {
  std::vector<double> lx, ly;
  for (size_t k = 0; k < std::min(x.size(), y.size()); ++k)
    if (x[k] > 0 && y[k] > 0 && std::isfinite(x[k]) && std::isfinite(y[k])) {
      lx.push_back(std::log(x[k]));
      ly.push_back(std::log(y[k]));
    }
  LogLogFit f;
  f.points = static_cast<int>(lx.size());
  if (f.points < 2) return f;
  double mx = 0, my = 0;
  for (int k = 0; k < f.points; ++k) {
    mx += lx[k];
    my += ly[k];
  }
  mx /= f.points;
  my /= f.points;
  double sxx = 0, sxy = 0;
  for (int k = 0; k < f.points; ++k) {
    sxx += (lx[k] - mx) * (lx[k] - mx);
    sxy += (lx[k] - mx) * (ly[k] - my);
  }
  f.slope = sxx > 0 ? sxy / sxx : 0.0;
  f.intercept = my - f.slope * mx;
  return f;
}

namespace {

void flatten(const std::string& key, const json& v, std::map<std::string, std::string>& row) {
  if (v.is_array()) {
    for (size_t i = 0; i < v.size(); ++i) flatten(key + "[" + std::to_string(i) + "]", v[i], row);
  } else if (v.is_object()) {
    for (auto it = v.begin(); it != v.end(); ++it) flatten(key + "." + it.key(), it.value(), row);
  } else if (v.is_number_float()) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12e", v.get<double>());
    row[key] = buf;
  } else if (v.is_string()) {
    std::string s = v.get<std::string>();
    if (s.find_first_of(",\"\n") != std::string::npos) {
      std::string q = "\"";
      for (char c : s) q += c == '"' ? std::string("\"\"") : std::string(1, c);
      s = q + "\"";
    }
    row[key] = s;
  } else {
    row[key] = v.dump();
  }
}

std::string fmt(double x, const char* f = "%.3g") {
  char buf[40];
  std::snprintf(buf, sizeof buf, f, x);
  return buf;
}

}  // namespace

std::string members_csv(const json& members) {
  std::vector<std::map<std::string, std::string>> rows;
  std::set<std::string> keys;
  for (const auto& m : members) {
    std::map<std::string, std::string> row;
    for (auto it = m.begin(); it != m.end(); ++it) flatten(it.key(), it.value(), row);
    for (const auto& [k, v] : row) keys.insert(k);
    rows.push_back(std::move(row));
  }
  std::ostringstream os;
  bool first = true;
  for (const auto& k : keys) {
    os << (first ? "" : ",") << k;
    first = false;
  }
  os << "\n";
  for (const auto& row : rows) {
    first = true;
    for (const auto& k : keys) {
      os << (first ? "" : ",");
      first = false;
      if (auto it = row.find(k); it != row.end()) os << it->second;
    }
    os << "\n";
  }
  return os.str();
}

std::string svg_loglog(const std::string& title, const std::string& xlabel, const std::string& ylabel,
                       const std::vector<LogLogSeries>& series) {
  const double w = 640, h = 440, l = 80, r = 170, t = 40, b = 60;
  double x0 = 1e300, x1 = -1e300, y0 = 1e300, y1 = -1e300;
  for (const auto& s : series)
    for (size_t k = 0; k < s.x.size(); ++k)
      if (s.x[k] > 0 && s.y[k] > 0) {
        x0 = std::min(x0, std::log10(s.x[k]));
        x1 = std::max(x1, std::log10(s.x[k]));
        y0 = std::min(y0, std::log10(s.y[k]));
        y1 = std::max(y1, std::log10(s.y[k]));
      }
  if (x0 > x1) x0 = -1, x1 = 0, y0 = -1, y1 = 0;
  x0 = std::floor(x0), x1 = std::ceil(x1), y0 = std::floor(y0), y1 = std::ceil(y1);
  if (x1 == x0) x1 += 1;
  if (y1 == y0) y1 += 1;
  auto px = [&](double lx) { return l + (lx - x0) / (x1 - x0) * (w - l - r); };
  auto py = [&](double ly) { return h - b - (ly - y0) / (y1 - y0) * (h - t - b); };
  static const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e"};

  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w << "\" height=\"" << h
     << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  os << "<text x=\"" << w / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"15\">" << title << "</text>\n";
  os << "<rect x=\"" << l << "\" y=\"" << t << "\" width=\"" << w - l - r << "\" height=\"" << h - t - b
     << "\" fill=\"none\" stroke=\"black\"/>\n";
  for (double e = x0; e <= x1 + 1e-9; e += 1)
    os << "<text x=\"" << px(e) << "\" y=\"" << h - b + 16 << "\" text-anchor=\"middle\">1e" << e << "</text>\n";
  for (double e = y0; e <= y1 + 1e-9; e += 1)
    os << "<text x=\"" << l - 6 << "\" y=\"" << py(e) + 4 << "\" text-anchor=\"end\">1e" << e << "</text>\n";
  os << "<text x=\"" << (l + w - r) / 2 << "\" y=\"" << h - 18 << "\" text-anchor=\"middle\">" << xlabel
     << "</text>\n";
  os << "<text x=\"18\" y=\"" << (t + h - b) / 2 << "\" text-anchor=\"middle\" transform=\"rotate(-90 18 "
     << (t + h - b) / 2 << ")\">" << ylabel << "</text>\n";
  for (size_t s = 0; s < series.size(); ++s) {
    const auto& se = series[s];
    const char* c = colors[s % 5];
    std::string pts;
    for (size_t k = 0; k < se.x.size(); ++k) {
      if (!(se.x[k] > 0 && se.y[k] > 0)) continue;
      const double X = px(std::log10(se.x[k])), Y = py(std::log10(se.y[k]));
      os << "<circle cx=\"" << fmt(X, "%.2f") << "\" cy=\"" << fmt(Y, "%.2f") << "\" r=\"3.5\" fill=\"" << c
         << "\"/>\n";
      pts += fmt(X, "%.2f") + "," + fmt(Y, "%.2f") + " ";
    }
    if (!pts.empty())
      os << "<polyline points=\"" << pts << "\" fill=\"none\" stroke=\"" << c << "\" stroke-opacity=\"0.4\"/>\n";
    std::string label = se.name;
    if (se.has_fit) {
      // fitted line log y = slope log x + intercept, drawn over the data range
      double a = 1e300, bmax = -1e300;
      for (double x : se.x)
        if (x > 0) a = std::min(a, std::log10(x)), bmax = std::max(bmax, std::log10(x));
      auto fy = [&](double lx) { return (se.fit.slope * lx * std::log(10.0) + se.fit.intercept) / std::log(10.0); };
      os << "<line x1=\"" << fmt(px(a), "%.2f") << "\" y1=\"" << fmt(py(fy(a)), "%.2f") << "\" x2=\""
         << fmt(px(bmax), "%.2f") << "\" y2=\"" << fmt(py(fy(bmax)), "%.2f") << "\" stroke=\"" << c
         << "\" stroke-dasharray=\"6,4\"/>\n";
      label += " (slope " + fmt(se.fit.slope, "%.3f") + ")";
    }
    os << "<rect x=\"" << w - r + 10 << "\" y=\"" << t + 10 + 20 * s << "\" width=\"10\" height=\"10\" fill=\""
       << c << "\"/>\n";
    os << "<text x=\"" << w - r + 25 << "\" y=\"" << t + 19 + 20 * s << "\">" << label << "</text>\n";
  }
  os << "</svg>\n";
  return os.str();
}

std::string svg_heatmap(const std::string& title, int rows, int cols, const std::vector<double>& values) {
  const double cell = std::max(8.0, std::min(40.0, 480.0 / std::max(rows, cols)));
  const double l = 40, t = 40, w = l + cols * cell + 160, h = t + rows * cell + 40;
  double lo = 1e300, hi = -1e300;
  for (double v : values)
    if (v > 0 && std::isfinite(v)) lo = std::min(lo, std::log10(v)), hi = std::max(hi, std::log10(v));
  if (lo > hi) lo = -16, hi = 0;
  if (hi - lo < 1e-9) lo -= 1;
  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w << "\" height=\"" << h
     << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  os << "<text x=\"" << l << "\" y=\"22\" font-size=\"15\">" << title << "</text>\n";
  for (int i = 0; i < rows; ++i)
    for (int k = 0; k < cols; ++k) {
      const size_t idx = static_cast<size_t>(i) * cols + k;
      const double v = idx < values.size() ? values[idx] : 0.0;
      const double s = v > 0 && std::isfinite(v) ? (std::log10(v) - lo) / (hi - lo) : 0.0;
      const int red = static_cast<int>(255 * s), blue = static_cast<int>(255 * (1 - s));
      os << "<rect x=\"" << l + k * cell << "\" y=\"" << t + i * cell << "\" width=\"" << cell << "\" height=\""
         << cell << "\" fill=\"rgb(" << red << ",64," << blue << ")\"/>\n";
    }
  os << "<text x=\"" << l + cols * cell + 12 << "\" y=\"" << t + 12 << "\">max 1e" << fmt(hi, "%.2f")
     << "</text>\n";
  os << "<text x=\"" << l + cols * cell + 12 << "\" y=\"" << t + 30 << "\">min 1e" << fmt(lo, "%.2f")
     << "</text>\n";
  os << "</svg>\n";
  return os.str();
}

namespace {

std::vector<double> column(const json& members, const std::string& key) {
  std::vector<double> out;
  for (const auto& m : members) out.push_back(m.contains(key) ? number(m.at(key)) : 0.0);
  return out;
}

LogLogSeries series(const json& members, const std::string& name, const std::string& xkey,
                    const std::string& ykey, const json& fit) {
  LogLogSeries s;
  s.name = name;
  s.x = column(members, xkey);
  s.y = column(members, ykey);
  if (fit.is_object() && fit.contains("slope")) {
    s.has_fit = true;
    s.fit.slope = number(fit.at("slope"));
    s.fit.intercept = number(fit.at("intercept"));
  }
  return s;
}

}  // namespace

std::vector<std::filesystem::path> export_plots(const ScenarioReport& r, const std::filesystem::path& dir,
                                                const std::string& stem) {
  std::vector<std::filesystem::path> out;
  const auto& a = r.aggregates;
  if (r.scenario == "convergence" && !r.members.empty()) {
    std::vector<LogLogSeries> s = {
        series(r.members, "isotropic vs J_st", "delta", "isotropic_distance", a.value("isotropic_fit", json())),
        series(r.members, "anisotropic slowest block", "delta", "anisotropic_slowest_block",
               a.value("anisotropic_fit", json())),
        series(r.members, "anisotropic vs J_st", "delta", "anisotropic_to_standard", json())};
    const auto p = dir / (stem + "_convergence.svg");
    write_text_file(p, svg_loglog("structure convergence", "delta", "distance", s));
    out.push_back(p);
  } else if (r.scenario == "sweep" && !r.members.empty()) {
    std::vector<LogLogSeries> s = {
        series(r.members, "sup |F - F0|", "delta", "distance_to_limit", a.value("convergence_fit", json()))};
    const auto p = dir / (stem + "_sweep_convergence.svg");
    write_text_file(p, svg_loglog("family convergence to the limit discs", "delta", "sup distance", s));
    out.push_back(p);
  } else if ((r.scenario == "levi_flat" || r.scenario == "chart") && !r.members.empty()) {
    const std::string key = r.scenario == "levi_flat" ? "containment" : "boundary_residual";
    const auto vals = column(r.members, key);
    int rows = 1;
    if (a.contains("shape") && !a.at("shape").empty()) rows = a.at("shape").at(0).get<int>();
    rows = std::max(1, rows);
    const int cols = (static_cast<int>(vals.size()) + rows - 1) / rows;
    const auto p = dir / (stem + "_" + key + "_heatmap.svg");
    write_text_file(p, svg_heatmap(key + " per member", rows, cols, vals));
    out.push_back(p);
  }
  return out;
}

std::vector<std::filesystem::path> export_report(const ScenarioReport& r, const std::filesystem::path& dir,
                                                 const std::string& stem) {
  std::vector<std::filesystem::path> out;
  const auto pj = dir / (stem + ".json");
  write_text_file(pj, dump_report(r.to_json()));
  out.push_back(pj);
  const auto pc = dir / (stem + ".csv");
  write_text_file(pc, members_csv(r.members));
  out.push_back(pc);
  for (auto& p : export_plots(r, dir, stem)) out.push_back(p);
  return out;
}

std::filesystem::path export_timing(const ScenarioReport& r, const std::filesystem::path& dir,
                                    const std::string& stem) {
  const auto p = dir / (stem + ".timing.json");
  write_text_file(p, json({{"scenario", r.scenario}, {"wall_seconds", r.wall_seconds}}).dump(2) + "\n");
  return p;
}

}  // namespace bishopdisc
