#pragma once

#include "projlen/cosine.hpp"
#include "projlen/curve.hpp"
#include "projlen/measure.hpp"
#include "projlen/partition.hpp"
#include "projlen/reconstruct.hpp"

#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace projlen {

/// Malformed or semantically invalid input files.
struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// 17 significant digits: enough to reproduce any double bit for bit.
inline std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

namespace iod {

inline std::string num_list(const std::vector<double>& xs) {
  std::string out = "[";
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i) out += ",";
    out += format_double(xs[i]);
  }
  return out + "]";
}

inline std::string vec_json(const Vec& v) {
  std::string out = "[";
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (i) out += ",";
    out += format_double(v[i]);
  }
  return out + "]";
}

inline Vec vec_from_json(const nlohmann::json& j) {
  if (!j.is_array() || j.empty()) throw ParseError("expected a nonempty number array");
  Vec v(j.size());
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_number()) throw ParseError("expected a number array");
    v[static_cast<Eigen::Index>(i)] = j[i].get<double>();
  }
  return v;
}

inline nlohmann::json parse(const std::string& text) {
  try {
    return nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("json parse error: ") + e.what());
  }
}

}  // namespace iod

// ---------------------------------------------------------------------------
// curves: {"d": int, "breakpoints": [...], "velocities": [[...], ...]}
// or the vertex shorthand {"vertices": [[...], ...]}

inline std::string to_json(const PcvCurve& c) {
  std::string out = "{\"d\":" + std::to_string(c.dim());
  out += ",\"breakpoints\":" + iod::num_list(c.breakpoints());
  out += ",\"velocities\":[";
  for (std::size_t i = 0; i < c.pieces(); ++i) {
    if (i) out += ",";
    out += iod::vec_json(c.velocities()[i]);
  }
  return out + "]}";
}

inline PcvCurve curve_from_json_text(const std::string& text) {
  const nlohmann::json j = iod::parse(text);
  if (!j.is_object()) throw ParseError("curve: expected a JSON object");
  try {
    if (j.contains("vertices")) {
      std::vector<Vec> vertices;
      for (const auto& v : j.at("vertices")) vertices.push_back(iod::vec_from_json(v));
      return from_vertices(vertices);
    }
    const int d = j.at("d").get<int>();
    std::vector<double> breaks;
    for (const auto& b : j.at("breakpoints")) breaks.push_back(b.get<double>());
    std::vector<Vec> vels;
    for (const auto& v : j.at("velocities")) vels.push_back(iod::vec_from_json(v));
    return PcvCurve(d, std::move(breaks), std::move(vels));
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("curve: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw ParseError(std::string("curve: ") + e.what());
  }
}

// ---------------------------------------------------------------------------
// measures: {"d": int, "atoms": [{"point": [...], "weight": w}, ...]}

inline std::string to_json(const DiscreteMeasure& mu) {
  std::string out = "{\"d\":" + std::to_string(mu.dim()) + ",\"atoms\":[";
  for (std::size_t i = 0; i < mu.size(); ++i) {
    if (i) out += ",";
    out += "{\"point\":" + iod::vec_json(mu.atoms()[i].point.rep());
    out += ",\"weight\":" + format_double(mu.atoms()[i].weight) + "}";
  }
  return out + "]}";
}

inline DiscreteMeasure measure_from_json_text(const std::string& text) {
  const nlohmann::json j = iod::parse(text);
  try {
    const int d = j.at("d").get<int>();
    std::vector<Atom> atoms;
    for (const auto& a : j.at("atoms")) {
      atoms.push_back(
          {ProjectivePoint(iod::vec_from_json(a.at("point"))), a.at("weight").get<double>()});
    }
    return DiscreteMeasure(d, std::move(atoms));
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("measure: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw ParseError(std::string("measure: ") + e.what());
  }
}

// ---------------------------------------------------------------------------
// partitions: {"d": int, "cells": [...], "tags": [[...], ...], "norm_bound": x}
// d = 2 cells are [lo, hi] pairs; d >= 3 cells are tag chains, one vector per
// level ending in the cell's own tag.

inline std::string to_json(const TaggedPartition& p) {
  std::string out = "{\"d\":" + std::to_string(p.dim()) + ",\"cells\":[";
  if (p.dim() == 2) {
    for (std::size_t i = 0; i < p.size(); ++i) {
      if (i) out += ",";
      out += "[" + format_double(p.arcs()[i].lo) + "," + format_double(p.arcs()[i].hi) + "]";
    }
  } else {
    for (std::size_t i = 0; i < p.size(); ++i) {
      if (i) out += ",";
      out += "[";
      for (std::size_t l = 0; l < p.tag_paths()[i].size(); ++l) {
        if (l) out += ",";
        out += iod::vec_json(p.tag_paths()[i][l].rep());
      }
      out += "]";
    }
  }
  out += "],\"tags\":[";
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (i) out += ",";
    out += iod::vec_json(p.tags()[i].rep());
  }
  return out + "],\"norm_bound\":" + format_double(p.norm_bound()) + "}";
}

inline TaggedPartition partition_from_json_text(const std::string& text) {
  const nlohmann::json j = iod::parse(text);
  try {
    const int d = j.at("d").get<int>();
    const double norm_bound = j.at("norm_bound").get<double>();
    if (d == 2) {
      std::vector<ArcCell> arcs;
      for (const auto& cell : j.at("cells")) {
        if (!cell.is_array() || cell.size() != 2) throw ParseError("partition: bad arc cell");
        arcs.push_back({cell[0].get<double>(), cell[1].get<double>()});
      }
      std::vector<ProjectivePoint> tags;
      for (const auto& tv : j.at("tags")) tags.push_back(ProjectivePoint(iod::vec_from_json(tv)));
      return TaggedPartition(std::move(arcs), std::move(tags), norm_bound);
    }
    std::vector<std::vector<ProjectivePoint>> paths;
    for (const auto& cell : j.at("cells")) {
      std::vector<ProjectivePoint> path;
      for (const auto& tv : cell) path.push_back(ProjectivePoint(iod::vec_from_json(tv)));
      paths.push_back(std::move(path));
    }
    return TaggedPartition(d, std::move(paths), norm_bound);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("partition: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw ParseError(std::string("partition: ") + e.what());
  }
}

// ---------------------------------------------------------------------------
// samples: CSV with header theta,value (d = 2, radians in [0, pi)) or
// x1,...,xd,value (d >= 3); JSON mirror {"d":, "directions":, "values":}.

inline void validate_samples(const TransformSamples& s) {
  if (s.directions.size() != s.values.size())
    throw ParseError("samples: direction/value count mismatch");
  for (const Vec& xi : s.directions) {
    if (xi.size() != s.d) throw ParseError("samples: direction dimension mismatch");
    if (std::abs(xi.norm() - 1.0) > 1e-6) throw ParseError("samples: non-unit direction");
  }
  for (double v : s.values)
    if (v < -1e-12) throw ParseError("samples: negative value");
}

inline std::string to_json(const TransformSamples& s) {
  std::string out = "{\"d\":" + std::to_string(s.d) + ",\"directions\":[";
  for (std::size_t i = 0; i < s.directions.size(); ++i) {
    if (i) out += ",";
    out += iod::vec_json(s.directions[i]);
  }
  out += "],\"values\":" + iod::num_list(s.values) + "}";
  return out;
}

inline TransformSamples samples_from_json_text(const std::string& text) {
  const nlohmann::json j = iod::parse(text);
  try {
    TransformSamples s;
    s.d = j.at("d").get<int>();
    for (const auto& v : j.at("directions")) s.directions.push_back(iod::vec_from_json(v));
    for (const auto& v : j.at("values")) s.values.push_back(v.get<double>());
    validate_samples(s);
    return s;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("samples: ") + e.what());
  }
}

inline std::string to_csv(const TransformSamples& s) {
  std::string out;
  if (s.d == 2) {
    out = "theta,value\n";
    for (std::size_t i = 0; i < s.values.size(); ++i) {
      const double th = rep_angle(ProjectivePoint(s.directions[i]));
      out += format_double(th) + "," + format_double(s.values[i]) + "\n";
    }
  } else {
    for (int k = 1; k <= s.d; ++k) out += "x" + std::to_string(k) + ",";
    out += "value\n";
    for (std::size_t i = 0; i < s.values.size(); ++i) {
      for (Eigen::Index k = 0; k < s.d; ++k)
        out += format_double(s.directions[i][k]) + ",";
      out += format_double(s.values[i]) + "\n";
    }
  }
  return out;
}

inline TransformSamples samples_from_csv_text(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) throw ParseError("samples csv: empty file");
  auto split = [](const std::string& s) {
    std::vector<std::string> out;
    std::string cur;
    for (char ch : s) {
      if (ch == ',') {
        out.push_back(cur);
        cur.clear();
      } else if (ch != '\r') {
        cur += ch;
      }
    }
    out.push_back(cur);
    return out;
  };
  const auto header = split(line);
  TransformSamples s;
  bool angular = false;
  if (header.size() == 2 && header[0] == "theta" && header[1] == "value") {
    angular = true;
    s.d = 2;
  } else if (header.size() >= 4 && header.back() == "value") {
    s.d = static_cast<int>(header.size()) - 1;
  } else {
    throw ParseError("samples csv: unrecognized header");
  }
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    const auto fields = split(line);
    if (fields.size() != header.size())
      throw ParseError("samples csv: wrong field count at line " + std::to_string(lineno));
    std::vector<double> nums;
    for (const auto& f : fields) {
      try {
        std::size_t used = 0;
        nums.push_back(std::stod(f, &used));
        if (used != f.size()) throw std::invalid_argument(f);
      } catch (const std::exception&) {
        throw ParseError("samples csv: bad number '" + f + "' at line " +
                         std::to_string(lineno));
      }
    }
    if (angular) {
      Vec xi(2);
      xi << std::cos(nums[0]), std::sin(nums[0]);
      s.directions.push_back(xi);
    } else {
      Vec xi(s.d);
      for (int k = 0; k < s.d; ++k) xi[k] = nums[k];
      s.directions.push_back(xi);
    }
    s.values.push_back(nums.back());
  }
  validate_samples(s);
  return s;
}

// ---------------------------------------------------------------------------
// reconstruction certificate report

inline std::string to_json(const SurjectivityResult& r) {
  std::string out = "{\"levels\":[";
  for (std::size_t k = 0; k < r.levels.size(); ++k) {
    if (k) out += ",";
    out += "{\"cells\":" + std::to_string(r.levels[k].cells);
    out += ",\"norm_bound\":" + format_double(r.levels[k].norm_bound) + "}";
  }
  out += "],\"cauchy_bound\":" + format_double(r.cauchy_bound);
  out += ",\"achieved\":" + format_double(r.cauchy_achieved);
  out += ",\"weak_distances\":[";
  for (std::size_t k = 0; k < r.levels.size(); ++k) {
    if (k) out += ",";
    out += format_double(r.levels[k].weak_dist);
  }
  out += "],\"certificate_ok\":";
  out += r.certificate_ok ? "true" : "false";
  return out + "}";
}

// ---------------------------------------------------------------------------
// files

inline std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

inline void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << content;
}

}  // namespace projlen
