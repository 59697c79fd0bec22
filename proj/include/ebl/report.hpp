#pragma once

// Run results and their JSON / CSV / SVG renderings.
//
// JSON: {config, ellipse:{a,b}, caustic:{lambda,a_c,b_c}, gamma, perimeter,
//        closure_defect, orbits:[[x,y],...], loci:{center:[[x,y],...]},
//        classes:{center:{tag,metric,skipped}}, checks:[...]}
// CSV:  center,k,t0,x,y  (one row per point)
// Reals are written with 17 significant digits.

#include <cmath>
#include <cstdio>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "ebl/billiard.hpp"
#include "ebl/geom.hpp"
#include "ebl/invariants.hpp"
#include "ebl/locus.hpp"

namespace ebl {

using json = nlohmann::ordered_json;

struct RunResult {
  json config = json::object();
  double a = 1, b = 1;
  std::optional<double> lambda;
  double gamma = 0;
  double perimeter = 0;
  double closure_defect = 0;
  std::vector<Point2> orbit;  // representative orbit
  std::vector<LocusSample> loci;
  std::map<std::string, ConicClass> classes;
  std::vector<InvariantCheck> checks;
};

inline std::string format_real(double v, int digits = 17) {
  if (!std::isfinite(v)) return "null";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.*g", digits, v);
  return buf;
}

constexpr std::string_view to_string(CheckMode m) {
  switch (m) {
    case CheckMode::Constant: return "constant";
    case CheckMode::NonConstant: return "non_constant";
    case CheckMode::Bound: return "bound";
  }
  return "unknown";
}

inline json point_json(Point2 p) { return json::array({p.x, p.y}); }

inline json to_json(const InvariantCheck& c) {
  json j;
  j["name"] = c.name;
  j["n"] = c.n;
  j["aspect_ratio"] = c.aspect_ratio;
  j["samples"] = c.samples;
  j["mean"] = c.mean;
  j["max_abs_dev"] = c.max_abs_dev;
  j["rel_spread"] = c.rel_spread;
  j["expected"] = c.expected ? json(*c.expected) : json(nullptr);
  j["expected_source"] = c.expected_source;
  j["max_expected_defect"] = c.max_expected_defect;
  j["tolerance"] = c.tolerance;
  j["mode"] = std::string(to_string(c.mode));
  j["asserted"] = c.asserted;
  j["pass"] = c.pass;
  j["skipped"] = c.skipped;
  j["extra"] = json::object();
  for (const auto& [k, v] : c.extra) j["extra"][k] = v;
  j["values"] = c.values;
  return j;
}

inline json to_json(const RunResult& r) {
  json j;
  j["config"] = r.config;
  j["ellipse"] = {{"a", r.a}, {"b", r.b}};
  if (r.lambda) {
    const double l = *r.lambda;
    j["caustic"] = {{"lambda", l}, {"a_c", std::sqrt(r.a * r.a - l)}, {"b_c", std::sqrt(r.b * r.b - l)}};
  } else {
    j["caustic"] = nullptr;
  }
  j["gamma"] = r.gamma;
  j["perimeter"] = r.perimeter;
  j["closure_defect"] = r.closure_defect;
  j["orbits"] = json::array();
  for (const auto& p : r.orbit) j["orbits"].push_back(point_json(p));
  j["loci"] = json::object();
  for (const auto& s : r.loci) {
    json pts = json::array();
    for (const auto& lp : s.points) pts.push_back(point_json(lp.p));
    j["loci"][s.center] = std::move(pts);
  }
  j["classes"] = json::object();
  for (const auto& s : r.loci) {
    const auto it = r.classes.find(s.center);
    if (it == r.classes.end()) continue;
    j["classes"][s.center] = {
        {"tag", std::string(to_string(it->second.tag))}, {"metric", it->second.metric}, {"skipped", s.skipped}};
  }
  j["checks"] = json::array();
  for (const auto& c : r.checks) j["checks"].push_back(to_json(c));
  return j;
}

namespace detail {

inline void write_json(const json& j, std::string& out, int indent, int depth) {
  const std::string pad(static_cast<std::size_t>(indent * (depth + 1)), ' ');
  const std::string close_pad(static_cast<std::size_t>(indent * depth), ' ');
  switch (j.type()) {
    case json::value_t::object: {
      if (j.empty()) { out += "{}"; return; }
      out += "{\n";
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) out += ",\n";
        first = false;
        out += pad + json(it.key()).dump() + ": ";
        write_json(it.value(), out, indent, depth + 1);
      }
      out += "\n" + close_pad + "}";
      return;
    }
    case json::value_t::array: {
      if (j.empty()) { out += "[]"; return; }
      // Short numeric arrays (points) stay on one line.
      const bool flat = j.size() <= 2 && std::all_of(j.begin(), j.end(), [](const json& e) { return e.is_number(); });
      if (flat) {
        out += "[";
        for (std::size_t i = 0; i < j.size(); ++i) {
          if (i) out += ", ";
          write_json(j[i], out, indent, depth + 1);
        }
        out += "]";
        return;
      }
      out += "[\n";
      for (std::size_t i = 0; i < j.size(); ++i) {
        if (i) out += ",\n";
        out += pad;
        write_json(j[i], out, indent, depth + 1);
      }
      out += "\n" + close_pad + "]";
      return;
    }
    case json::value_t::number_float:
      out += format_real(j.get<double>());
      return;
    default:
      out += j.dump();
      return;
  }
}

}  // namespace detail

/// Deterministic JSON text with 17-significant-digit reals.
inline std::string dump_json(const json& j) {
  std::string out;
  detail::write_json(j, out, 2, 0);
  out += "\n";
  return out;
}

inline std::string to_csv(const RunResult& r) {
  std::string out = "center,k,t0,x,y\n";
  auto row = [&](const std::string& name, std::size_t k, double t0, Point2 p) {
    out += name + "," + std::to_string(k) + "," + format_real(t0) + "," + format_real(p.x) + "," +
           format_real(p.y) + "\n";
  };
  if (r.loci.empty()) {
    const double t0 = r.config.contains("t0") ? r.config["t0"].get<double>() : 0.0;
    for (std::size_t k = 0; k < r.orbit.size(); ++k) row("orbit", k, t0, r.orbit[k]);
  }
  for (const auto& s : r.loci) {
    for (const auto& lp : s.points) row(s.center, lp.k, lp.t0, lp.p);
  }
  return out;
}

/// Draws the exported point sets of a JSON document; no geometry is
/// recomputed here.
inline std::string render_svg(const json& doc) {
  const double a = doc["ellipse"]["a"].get<double>();
  const double b = doc["ellipse"]["b"].get<double>();
  double extent = a;
  auto grow = [&](const json& pt) {
    extent = std::max({extent, std::abs(pt[0].get<double>()), std::abs(pt[1].get<double>())});
  };
  for (const auto& pt : doc["orbits"]) grow(pt);
  for (const auto& [name, pts] : doc["loci"].items()) {
    for (const auto& pt : pts) grow(pt);
  }
  extent *= 1.1;
  auto f = [](double v) { return format_real(v, 9); };
  const double stroke = extent / 400.0;

  static const char* palette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#e377c2"};
  std::ostringstream s;
  s << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"800\" height=\"800\" viewBox=\"" << f(-extent) << ' '
    << f(-extent) << ' ' << f(2 * extent) << ' ' << f(2 * extent) << "\">\n";
  s << "<g transform=\"scale(1,-1)\" fill=\"none\" stroke-width=\"" << f(stroke) << "\">\n";
  s << "<ellipse class=\"billiard\" cx=\"0\" cy=\"0\" rx=\"" << f(a) << "\" ry=\"" << f(b)
    << "\" stroke=\"black\"/>\n";
  if (!doc["caustic"].is_null()) {
    s << "<ellipse class=\"caustic\" cx=\"0\" cy=\"0\" rx=\"" << f(doc["caustic"]["a_c"].get<double>())
      << "\" ry=\"" << f(doc["caustic"]["b_c"].get<double>()) << "\" stroke=\"#a0522d\"/>\n";
  }
  if (!doc["orbits"].empty()) {
    s << "<polygon class=\"orbit\" stroke=\"#0000cc\" points=\"";
    bool first = true;
    for (const auto& pt : doc["orbits"]) {
      s << (first ? "" : " ") << f(pt[0].get<double>()) << ',' << f(pt[1].get<double>());
      first = false;
    }
    s << "\"/>\n";
  }
  std::size_t color = 0;
  for (const auto& [name, pts] : doc["loci"].items()) {
    const char* c = palette[color++ % std::size(palette)];
    s << "<g class=\"locus\" data-center=\"" << name << "\" fill=\"" << c << "\" stroke=\"none\">\n";
    for (const auto& pt : pts) {
      s << "<circle cx=\"" << f(pt[0].get<double>()) << "\" cy=\"" << f(pt[1].get<double>()) << "\" r=\""
        << f(2 * stroke) << "\"/>\n";
    }
    s << "</g>\n";
  }
  s << "</g>\n</svg>\n";
  return s.str();
}

}  // namespace ebl
