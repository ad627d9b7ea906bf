// Small hand-built inputs shared by the unit and acceptance suites.
#pragma once

#include <map>
#include <string>
#include <vector>

#include "geoseg/ingest.hpp"
#include "geoseg/types.hpp"

namespace fixtures {

/// Students a, b in school 1; c, d in school 2; edges a-c, b-c, a-b.
inline geoseg::StudentGraph four_students() {
  return geoseg::StudentGraph({{"a", "1"}, {"b", "1"}, {"c", "2"}, {"d", "2"}}, {{"a", "c"}, {"b", "c"}, {"a", "b"}});
}

inline geoseg::Roster two_schools() {
  return geoseg::Roster({{"1", {59.90, 30.30}, 70.0}, {"2", {59.95, 30.40}, 60.0}});
}

/// Schools S1, S2 kept; S3 lacks a score; S4 is on the exclusion list.
/// Students: a, c, d in S1; b claims S1 and S2; e, f, i in S2; g in S3;
/// h in S4; j claims an unknown school. Edge x-a has an unknown endpoint.
inline geoseg::RawInputs filter_fixture() {
  geoseg::RawInputs raw;
  raw.schools = {{"S1", {59.90, 30.30}, 70.0},
                 {"S2", {59.95, 30.40}, 60.0},
                 {"S3", {59.92, 30.35}, std::nullopt},
                 {"S4", {59.93, 30.36}, 80.0}};
  raw.claims = {{"a", {"S1"}}, {"b", {"S1", "S2"}}, {"c", {"S1"}}, {"d", {"S1"}}, {"e", {"S2"}},
                {"f", {"S2"}}, {"g", {"S3"}},       {"h", {"S4"}}, {"i", {"S2"}}, {"j", {"S9"}}};
  raw.edges = {{"a", "b"}, {"a", "e"}, {"a", "i"}, {"a", "x"}, {"c", "d"},
               {"c", "i"}, {"e", "f"}, {"e", "g"}, {"f", "h"}};
  return raw;
}

inline geoseg::FilterConfig filter_fixture_config() {
  geoseg::FilterConfig config;
  config.excluded_ids = {"S4"};
  return config;
}

/// Hand trace:
///   schools: S4 excluded, S3 missing score -> S1, S2 remain.
///   students: b multi-school; g, h, j lose their school; a (only
///   same-school friend was b) and i (friends only in S1) peeled in one round.
///   edges: x-a dangling; a-b, e-g, f-h lose an endpoint before peeling;
///   a-e, a-i, c-i after it. c-d and e-f remain.
inline geoseg::FilterReport filter_fixture_expected() {
  geoseg::FilterReport r;
  r.input_students = 10;
  r.output_students = 4;
  r.input_schools = 4;
  r.output_schools = 2;
  r.input_edges = 9;
  r.output_edges = 2;
  r.schools_removed_excluded_ids = 1;
  r.schools_removed_oversize = 0;
  r.schools_removed_missing_score = 1;
  r.students_removed_school_unavailable = 3;
  r.students_removed_multi_school = 1;
  r.students_removed_no_same_school_friend = 2;
  r.edges_dropped_dangling = 1;
  r.edges_dropped_removed_endpoint = 6;
  r.fixed_point_iterations = 1;
  return r;
}

}  // namespace fixtures
