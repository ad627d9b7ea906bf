#pragma once

#include <algorithm>
#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "geoseg/csv.hpp"
#include "geoseg/error.hpp"
#include "geoseg/types.hpp"

namespace geoseg {

struct RawSchool {
  std::string id;
  GeoPoint location;
  std::optional<double> score;
};

/// Unfiltered inputs. A student with more than one distinct school claim is
/// multi-school; the filter stage removes those.
struct RawInputs {
  std::vector<RawSchool> schools;
  std::map<std::string, std::vector<std::string>> claims;
  std::vector<StudentGraph::Edge> edges;  // first < second, sorted, unique

  bool is_multi_school(const std::string& student) const {
    auto it = claims.find(student);
    return it != claims.end() && it->second.size() > 1;
  }
};

struct InputPaths {
  std::string students;
  std::string edges;
  std::string schools;
  std::optional<std::string> apartments;
};

struct FilterConfig {
  std::size_t max_cohort = 1000;
  std::set<std::string> excluded_ids;
};

struct FilterReport {
  std::size_t input_students = 0;
  std::size_t output_students = 0;
  std::size_t input_schools = 0;
  std::size_t output_schools = 0;
  std::size_t input_edges = 0;
  std::size_t output_edges = 0;

  std::size_t schools_removed_excluded_ids = 0;
  std::size_t schools_removed_oversize = 0;
  std::size_t schools_removed_missing_score = 0;

  std::size_t students_removed_school_unavailable = 0;
  std::size_t students_removed_multi_school = 0;
  std::size_t students_removed_no_same_school_friend = 0;

  std::size_t edges_dropped_dangling = 0;
  std::size_t edges_dropped_removed_endpoint = 0;

  std::size_t fixed_point_iterations = 0;

  friend bool operator==(const FilterReport&, const FilterReport&) = default;
};

struct FilterResult {
  StudentGraph graph;
  Roster roster;
  FilterReport report;
};

// ---------------------------------------------------------------------------
// Parsing

inline std::map<std::string, std::vector<std::string>> parse_students(const csv::Table& table) {
  const auto student_col = table.column("student_id");
  const auto school_col = table.column("school_id");
  std::map<std::string, std::vector<std::string>> claims;
  for (const auto& row : table.rows()) {
    const auto& student = table.text(row, student_col);
    const auto& school = table.text(row, school_col);
    if (student.empty() || school.empty()) table.fail(row, "empty student_id or school_id");
    auto& list = claims[student];
    if (std::find(list.begin(), list.end(), school) == list.end()) list.push_back(school);
  }
  return claims;
}

inline std::vector<StudentGraph::Edge> parse_edges(const csv::Table& table) {
  const auto a_col = table.column("student_id_a");
  const auto b_col = table.column("student_id_b");
  std::vector<StudentGraph::Edge> edges;
  edges.reserve(table.rows().size());
  for (const auto& row : table.rows()) {
    std::string a = table.text(row, a_col);
    std::string b = table.text(row, b_col);
    if (a.empty() || b.empty()) table.fail(row, "empty student id");
    if (a == b) table.fail(row, "self-loop on student " + a);
    if (b < a) std::swap(a, b);
    edges.emplace_back(std::move(a), std::move(b));
  }
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
  return edges;
}

inline GeoPoint parse_location(const csv::Table& table, const csv::Row& row, std::size_t lat_col,
                               std::size_t lon_col) {
  const double lat = table.number(row, lat_col);
  const double lon = table.number(row, lon_col);
  try {
    return GeoPoint(lat, lon);
  } catch (const Error& e) {
    throw Error(ErrorKind::CoordinateOutOfRange,
                table.source() + ": line " + std::to_string(row.line) + ": " + e.what());
  }
}

inline std::vector<RawSchool> parse_schools(const csv::Table& table) {
  const auto id_col = table.column("school_id");
  const auto lat_col = table.column("latitude");
  const auto lon_col = table.column("longitude");
  const auto score_col = table.column("score");
  std::vector<RawSchool> schools;
  std::set<std::string> seen;
  for (const auto& row : table.rows()) {
    RawSchool school;
    school.id = table.text(row, id_col);
    if (school.id.empty()) table.fail(row, "empty school_id");
    if (!seen.insert(school.id).second) {
      throw Error(ErrorKind::DuplicateSchoolId,
                  table.source() + ": line " + std::to_string(row.line) + ": " + school.id);
    }
    school.location = parse_location(table, row, lat_col, lon_col);
    school.score = table.optional_number(row, score_col);
    if (school.score && !(*school.score >= 0.0 && std::isfinite(*school.score))) {
      table.fail(row, "score must be a finite non-negative number");
    }
    schools.push_back(std::move(school));
  }
  return schools;
}

/// Reads apartments with either a price_per_sqm column or price + area.
inline std::vector<Apartment> parse_apartments(const csv::Table& table) {
  const auto lat_col = table.column("latitude");
  const auto lon_col = table.column("longitude");
  const bool direct = table.has("price_per_sqm");
  const std::size_t price_col = direct ? table.column("price_per_sqm") : table.column("price");
  const std::size_t area_col = direct ? 0 : table.column("area");
  std::vector<Apartment> apartments;
  apartments.reserve(table.rows().size());
  for (const auto& row : table.rows()) {
    const GeoPoint location = parse_location(table, row, lat_col, lon_col);
    const double price = table.number(row, price_col);
    double per_sqm = price;
    if (!direct) {
      const double area = table.number(row, area_col);
      if (!(area > 0.0)) {
        throw Error(ErrorKind::NonPositiveArea,
                    table.source() + ": line " + std::to_string(row.line) + ": area " + table.text(row, area_col));
      }
      per_sqm = price / area;
    }
    if (!(per_sqm > 0.0) || !std::isfinite(per_sqm)) table.fail(row, "price must be positive");
    apartments.emplace_back(location, per_sqm);
  }
  return apartments;
}

inline std::vector<Apartment> apartment_prices(const std::string& path) {
  return parse_apartments(csv::read_file(path));
}

struct ParsedInputs {
  RawInputs raw;
  std::vector<Apartment> apartments;
};

inline ParsedInputs parse_inputs(const InputPaths& paths) {
  ParsedInputs out;
  out.raw.claims = parse_students(csv::read_file(paths.students));
  out.raw.edges = parse_edges(csv::read_file(paths.edges));
  out.raw.schools = parse_schools(csv::read_file(paths.schools));
  if (paths.apartments) out.apartments = apartment_prices(*paths.apartments);
  return out;
}

// ---------------------------------------------------------------------------
// Filtering

/// Applies, in order: school exclusion list and cohort cap, missing-score
/// removal, multi-school student removal, then peels students with no
/// same-school friend until none remain. Edges touching a removed student
/// are dropped before any network is built.
inline FilterResult apply_filters(const RawInputs& raw, const FilterConfig& config = {}) {
  FilterReport report;
  report.input_students = raw.claims.size();
  report.input_schools = raw.schools.size();
  report.input_edges = raw.edges.size();

  std::unordered_map<std::string, std::size_t> cohort;
  for (const auto& [student, schools] : raw.claims) {
    for (const auto& school : schools) ++cohort[school];
  }

  std::vector<School> kept_schools;
  std::set<std::string> kept_ids;
  for (const auto& school : raw.schools) {
    if (config.excluded_ids.count(school.id)) {
      ++report.schools_removed_excluded_ids;
      continue;
    }
    auto it = cohort.find(school.id);
    if (it != cohort.end() && it->second > config.max_cohort) {
      ++report.schools_removed_oversize;
      continue;
    }
    if (!school.score) {
      ++report.schools_removed_missing_score;
      continue;
    }
    kept_schools.emplace_back(school.id, school.location, *school.score);
    kept_ids.insert(school.id);
  }
  if (kept_schools.empty()) throw Error(ErrorKind::EmptyResult, "no school survives filtering");

  // Students surviving the school and multi-school rules, as dense indices.
  std::vector<std::string> names;
  std::vector<std::string> school_of;
  std::unordered_map<std::string, std::size_t> index;
  for (const auto& [student, schools] : raw.claims) {
    if (schools.size() > 1) {
      ++report.students_removed_multi_school;
      continue;
    }
    if (!kept_ids.count(schools.front())) {
      ++report.students_removed_school_unavailable;
      continue;
    }
    index.emplace(student, names.size());
    names.push_back(student);
    school_of.push_back(schools.front());
  }

  const std::size_t n = names.size();
  std::vector<std::vector<std::size_t>> same_school(n);
  std::vector<std::pair<std::size_t, std::size_t>> candidate_edges;
  for (const auto& [a, b] : raw.edges) {
    if (!raw.claims.count(a) || !raw.claims.count(b)) {
      ++report.edges_dropped_dangling;
      continue;
    }
    auto ia = index.find(a);
    auto ib = index.find(b);
    if (ia == index.end() || ib == index.end()) {
      ++report.edges_dropped_removed_endpoint;
      continue;
    }
    candidate_edges.emplace_back(ia->second, ib->second);
    if (school_of[ia->second] == school_of[ib->second]) {
      same_school[ia->second].push_back(ib->second);
      same_school[ib->second].push_back(ia->second);
    }
  }

  // Round-based peeling; each round removes every student left without a
  // same-school friend by the previous round.
  std::vector<std::size_t> friends(n);
  std::vector<bool> alive(n, true);
  std::vector<std::size_t> frontier;
  for (std::size_t i = 0; i < n; ++i) {
    friends[i] = same_school[i].size();
    if (friends[i] == 0) frontier.push_back(i);
  }
  while (!frontier.empty()) {
    ++report.fixed_point_iterations;
    for (auto i : frontier) alive[i] = false;
    report.students_removed_no_same_school_friend += frontier.size();
    std::vector<std::size_t> next;
    for (auto i : frontier) {
      for (auto j : same_school[i]) {
        if (alive[j] && --friends[j] == 0) next.push_back(j);
      }
    }
    std::sort(next.begin(), next.end());
    next.erase(std::unique(next.begin(), next.end()), next.end());
    frontier = std::move(next);
  }

  std::map<std::string, std::string> assignment;
  for (std::size_t i = 0; i < n; ++i) {
    if (alive[i]) assignment.emplace(names[i], school_of[i]);
  }
  std::vector<StudentGraph::Edge> edges;
  for (const auto& [a, b] : candidate_edges) {
    if (alive[a] && alive[b]) {
      edges.emplace_back(names[a], names[b]);
    } else {
      ++report.edges_dropped_removed_endpoint;
    }
  }

  FilterResult result{StudentGraph(std::move(assignment), std::move(edges)), Roster(std::move(kept_schools)), report};
  result.report.output_students = result.graph.student_count();
  result.report.output_schools = result.roster.size();
  result.report.output_edges = result.graph.edges().size();
  return result;
}

/// Turns filtered output back into raw form, e.g. to check idempotency.
inline RawInputs to_raw(const StudentGraph& graph, const Roster& roster) {
  RawInputs raw;
  for (const auto& school : roster) raw.schools.push_back({school.id, school.location, school.score});
  for (const auto& [student, school] : graph.assignment()) raw.claims[student] = {school};
  raw.edges = graph.edges();
  return raw;
}

}  // namespace geoseg
