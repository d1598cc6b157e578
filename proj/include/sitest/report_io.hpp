#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "sitest/scenarios.hpp"
#include "sitest/transform.hpp"
#include "sitest/zheng.hpp"

namespace sitest {

// Key-value text report (one `key: value` per line, '#' comments, vectors
// comma-joined, doubles at full precision). Schema documented in README.
void write_report_text(std::ostream& out, const TestReport& r);
void write_report_json(std::ostream& out, const TestReport& r);

void write_zheng_text(std::ostream& out, const ZhengReport& r,
                      const Dataset& d, std::uint64_t seed);

// Study rows as a tab-separated table with '#' metadata header.
void write_study_rows(std::ostream& out, const std::vector<StudyRow>& rows);

std::string format_double(double v);
std::string format_vec(const Vec& v);

}  // namespace sitest
