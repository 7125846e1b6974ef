#include "haantjes/report.hpp"

#include <algorithm>
#include <cstdio>

namespace haantjes {

namespace {
std::string sanitize(const std::string& s) {
  std::string out = s;
  for (char& c : out)
    if (c == ' ' || c == '\n' || c == '\t' || c == '=') c = '_';
  return out;
}
}  // namespace

void VerificationReport::add(CheckRecord r) { records_.push_back(std::move(r)); }

void VerificationReport::add(const std::string& id, int samples, double residual, double tol,
                             const std::string& note, bool asserted) {
  CheckRecord r;
  r.id = id;
  r.samples = samples;
  r.residual = residual;
  r.tol = tol;
  r.pass = residual <= tol;
  r.asserted = asserted;
  r.note = note;
  records_.push_back(std::move(r));
}

void VerificationReport::merge(const VerificationReport& other) {
  records_.insert(records_.end(), other.records_.begin(), other.records_.end());
}

bool VerificationReport::all_passed() const {
  for (const auto& r : records_)
    if (r.asserted && !r.pass) return false;
  return true;
}

int VerificationReport::failed_count() const {
  int n = 0;
  for (const auto& r : records_)
    if (r.asserted && !r.pass) ++n;
  return n;
}

void VerificationReport::sort_by_id() {
  std::stable_sort(records_.begin(), records_.end(),
                   [](const CheckRecord& a, const CheckRecord& b) { return a.id < b.id; });
}

std::string VerificationReport::render_text() const {
  std::size_t w = 8;
  for (const auto& r : records_) w = std::max(w, r.id.size());
  std::string out;
  char line[512];
  std::snprintf(line, sizeof line, "%-*s  %-12s  %-9s  %7s  %s\n", static_cast<int>(w), "check",
                "residual", "tol", "samples", "status");
  out += line;
  for (const auto& r : records_) {
    std::snprintf(line, sizeof line, "%-*s  %-12.4e  %-9.1e  %7d  %s%s\n", static_cast<int>(w),
                  r.id.c_str(), r.residual, r.tol, r.samples,
                  r.asserted ? (r.pass ? "PASS" : "FAIL") : "info",
                  r.note.empty() ? "" : ("  " + r.note).c_str());
    out += line;
  }
  int asserted = 0, passed = 0, measured = 0;
  for (const auto& r : records_) {
    if (r.asserted) {
      ++asserted;
      if (r.pass) ++passed;
    } else {
      ++measured;
    }
  }
  std::snprintf(line, sizeof line, "summary: %d/%d asserted checks passed, %d measured-only\n",
                passed, asserted, measured);
  out += line;
  out += all_passed() ? "OVERALL PASS\n" : "OVERALL FAIL\n";
  return out;
}

std::string VerificationReport::render_machine() const {
  std::string out;
  char line[512];
  for (const auto& r : records_) {
    std::snprintf(line, sizeof line, "id=%s samples=%d residual=%.6e tol=%.3e pass=%d asserted=%d",
                  sanitize(r.id).c_str(), r.samples, r.residual, r.tol, r.pass ? 1 : 0,
                  r.asserted ? 1 : 0);
    out += line;
    if (!r.note.empty()) {
      out += " note=";
      out += sanitize(r.note);
    }
    out += '\n';
  }
  std::snprintf(line, sizeof line, "summary pass=%d checks=%d failed=%d\n", all_passed() ? 1 : 0,
                static_cast<int>(records_.size()), failed_count());
  out += line;
  return out;
}

}  // namespace haantjes
