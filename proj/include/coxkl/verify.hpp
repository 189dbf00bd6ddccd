#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "coxkl/coxeter.hpp"
#include "coxkl/hat.hpp"
#include "coxkl/io.hpp"

namespace coxkl {

struct VerifyOptions {
  std::uint64_t seed = 20240917;
  /// Lifts the exhaustive-versus-sampled thresholds and enables slow cases.
  bool slow = false;
  /// Sample size where a suite samples; 0 keeps the suite default.
  std::size_t samples = 0;
  /// Length bound on a and b when W is infinite.
  int max_length = 3;
};

struct SuiteCase {
  std::string name;
  json inputs;
  json expected;
  json actual;
  bool pass = false;
};

class SuiteReport {
 public:
  SuiteReport(std::string suite, std::string config_digest);

  /// Records a case; it passes iff expected and actual are equal as JSON values.
  void check(std::string name, json inputs, json expected, json actual);
  void note(std::string text) { notes_.push_back(std::move(text)); }
  void finish(double seconds) { seconds_ = seconds; }

  const std::string& suite() const { return suite_; }
  const std::vector<SuiteCase>& cases() const { return cases_; }
  const std::vector<std::string>& notes() const { return notes_; }
  std::size_t passed() const { return passed_; }
  std::size_t failed() const { return cases_.size() - passed_; }
  bool ok() const { return failed() == 0; }
  double seconds() const { return seconds_; }

  json to_json() const;
  /// Counts, notes and up to `max_failures` failing cases.
  std::string to_text(std::size_t max_failures = 20) const;

 private:
  std::string suite_;
  std::string config_digest_;
  std::vector<SuiteCase> cases_;
  std::vector<std::string> notes_;
  std::size_t passed_ = 0;
  double seconds_ = 0.0;
};

const std::vector<std::string>& suite_names();

/// True for suites that enumerate all of W and so reject an infinite W.
bool suite_needs_finite(const std::string& suite);

/// Runs one named suite for the base system W and hat config. Throws
/// std::invalid_argument for an unknown suite and InfiniteGroupError when
/// the suite needs a finite W.
SuiteReport run_suite(const std::string& suite, const CoxeterSystem& W, const HatConfig& hat,
                      const VerifyOptions& options = {});

/// W with its generator enumeration reversed.
std::unique_ptr<CoxeterSystem> reversed_system(const CoxeterSystem& W);

}  // namespace coxkl
