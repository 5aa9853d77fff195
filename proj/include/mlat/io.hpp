#pragma once

// JSON documents for scenarios, ground truth and reports. Doubles are
// written in shortest round-trip form.

#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "mlat/error.hpp"
#include "mlat/model.hpp"
#include "mlat/quadric.hpp"
#include "mlat/solver.hpp"
#include "mlat/uniqueness.hpp"

namespace mlat::io {

using nlohmann::json;

inline double read_number(const json& j, const std::string& what) {
  if (!j.is_number()) throw Error(ErrorCode::InvalidInput, what + " must be a number");
  return j.get<double>();
}

inline Vector read_vector(const json& j, const std::string& what) {
  if (!j.is_array()) throw Error(ErrorCode::InvalidInput, what + " must be an array");
  Vector v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) {
    v(static_cast<Eigen::Index>(i)) = read_number(j[i], what + "[" + std::to_string(i) + "]");
  }
  return v;
}

/// Rows of equal length; `dimension`, if positive, fixes the row length.
inline Matrix read_rows(const json& j, const std::string& what, long dimension = -1) {
  if (!j.is_array()) throw Error(ErrorCode::InvalidInput, what + " must be an array of arrays");
  const std::size_t m = j.size();
  if (m == 0) throw Error(ErrorCode::InvalidInput, what + " is empty");
  const Vector first = read_vector(j[0], what + "[0]");
  const Eigen::Index n = dimension > 0 ? dimension : first.size();
  Matrix rows(static_cast<Eigen::Index>(m), n);
  for (std::size_t i = 0; i < m; ++i) {
    const Vector row = read_vector(j[i], what + "[" + std::to_string(i) + "]");
    if (row.size() != n) {
      throw Error(ErrorCode::InvalidInput, what + " is ragged: row " + std::to_string(i) +
                                               " has " + std::to_string(row.size()) +
                                               " entries, expected " + std::to_string(n));
    }
    rows.row(static_cast<Eigen::Index>(i)) = row.transpose();
  }
  return rows;
}

inline long read_dimension(const json& doc) {
  if (!doc.contains("dimension")) return -1;
  const json& d = doc["dimension"];
  if (!d.is_number_integer() || d.get<long>() < 1) {
    throw Error(ErrorCode::InvalidInput, "dimension must be a positive integer");
  }
  return d.get<long>();
}

inline Matrix read_satellites(const json& doc) {
  if (!doc.is_object() || !doc.contains("satellites")) {
    throw Error(ErrorCode::InvalidInput, "document lacks \"satellites\"");
  }
  return read_rows(doc["satellites"], "satellites", read_dimension(doc));
}

inline Scenario read_scenario(const json& doc) {
  Scenario s;
  s.satellites = read_satellites(doc);
  if (!doc.contains("times")) throw Error(ErrorCode::InvalidInput, "document lacks \"times\"");
  s.times = read_vector(doc["times"], "times");
  if (s.times.size() != s.satellites.rows()) {
    throw Error(ErrorCode::InvalidInput, "times and satellites differ in length");
  }
  return s;
}

inline GroundTruth read_ground_truth(const json& doc) {
  if (!doc.is_object() || !doc.contains("user")) {
    throw Error(ErrorCode::InvalidInput, "document lacks \"user\"");
  }
  GroundTruth g;
  g.user = read_vector(doc["user"], "user");
  g.bias = doc.contains("bias") ? read_number(doc["bias"], "bias") : 0.0;
  return g;
}

inline json parse(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::InvalidInput, std::string("malformed JSON: ") + e.what());
  }
}

// ---------------------------------------------------------------------------

inline json to_json(const Vector& v) {
  json a = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v(i));
  return a;
}

inline json rows_to_json(const Matrix& m) {
  json a = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) a.push_back(to_json(Vector(m.row(i).transpose())));
  return a;
}

inline json to_json(const Scenario& s) {
  return json{{"dimension", s.satellites.cols()},
              {"satellites", rows_to_json(s.satellites)},
              {"times", to_json(s.times)}};
}

inline json to_json(const Solution& s) {
  return json{{"bias", s.bias}, {"user", to_json(s.user)}, {"residual", s.residual}};
}

inline json to_json(const Reduction& r) {
  return json{{"u", to_json(r.u)}, {"v", to_json(r.v)}, {"alpha", r.alpha}, {"beta", r.beta}};
}

inline json to_json(const QuadCoeffs& q) { return json{{"c2", q.c2}, {"c1", q.c1}, {"c0", q.c0}}; }

inline json to_json(const SolveReport& r) {
  json j;
  j["branch"] = r.branch == Branch::FullRank ? "FULL_RANK" : "RANK_DEFICIENT";
  j["rank_A"] = r.rank_A;
  if (r.reduction) j["reduction"] = to_json(*r.reduction);
  if (r.quad_coeffs) j["quad_coeffs"] = to_json(*r.quad_coeffs);
  if (r.normalized_coeffs) j["normalized_coeffs"] = to_json(*r.normalized_coeffs);
  if (r.discriminant) j["discriminant"] = *r.discriminant;
  j["solutions"] = json::array();
  for (const auto& s : r.solutions) j["solutions"].push_back(to_json(s));
  j["rejected"] = json::array();
  for (const auto& s : r.rejected) j["rejected"].push_back(to_json(s));
  return j;
}

inline json to_json(const FocalQuadric& q) {
  json j{{"class", std::string(to_string(q.kind))},
         {"focus", to_json(q.focus)},
         {"scaled_normal", to_json(q.scaled_normal)},
         {"offset", q.offset},
         {"eccentricity", q.eccentricity},
         {"semilatus", q.semilatus},
         {"semi_axis_a", q.semi_axis_a}};
  if (q.semi_axis_b) j["semi_axis_b"] = *q.semi_axis_b;
  if (const auto f2 = second_focus(q)) {
    j["second_focus"] = to_json(f2->focus);
    j["sheet_distance"] = f2->sheet_distance;
  }
  return j;
}

inline json to_json(const UniquenessReport& r) {
  json j{{"unique", r.unique},
         {"rank_A", r.rank_A},
         {"case_label", std::string(to_string(r.case_label))}};
  if (r.quadric) j["quadric"] = to_json(*r.quadric);
  if (r.alternate) j["alternate"] = to_json(*r.alternate);
  return j;
}

inline json to_json(const Certificate& c) {
  json j{{"certificate", std::string(to_string(c.kind))},
         {"moment_rank", c.moment_rank},
         {"monomials", c.monomials},
         {"detail", c.detail}};
  if (c.quadric_coefficients) j["quadric_coefficients"] = to_json(*c.quadric_coefficients);
  j["candidates"] = json::array();
  for (const auto& q : c.candidates) j["candidates"].push_back(to_json(q));
  return j;
}

inline json to_json(const Witness& w) {
  return json{{"dimension", w.satellites.cols()},
              {"user", to_json(w.user)},
              {"satellites", rows_to_json(w.satellites)},
              {"second_focus", to_json(w.second_focus)},
              {"bias_shift", w.bias_shift}};
}

inline json error_json(const Error& e) {
  return json{{"error", std::string(to_string(e.code()))}, {"message", e.what()}};
}

}  // namespace mlat::io
