// Verification reports: a flat list of named checks with residuals.
//
// Rendering is deterministic: records are sorted by id, numbers are printed
// with fixed formats, so identical inputs give byte-identical output.
#pragma once

#include <string>
#include <vector>

namespace haantjes {

struct CheckRecord {
  std::string id;
  int samples = 0;
  double residual = 0.0;
  double tol = 0.0;
  bool pass = false;
  bool asserted = true;  // measured-only records never affect the verdict
  std::string note;
};

class VerificationReport {
 public:
  void add(CheckRecord r);
  void add(const std::string& id, int samples, double residual, double tol,
           const std::string& note = "", bool asserted = true);
  void merge(const VerificationReport& other);

  const std::vector<CheckRecord>& records() const { return records_; }
  bool all_passed() const;  // over asserted records only
  int failed_count() const;

  void sort_by_id();
  std::string render_text() const;
  std::string render_machine() const;

 private:
  std::vector<CheckRecord> records_;
};

}  // namespace haantjes
