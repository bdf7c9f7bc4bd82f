#pragma once

#include <string>
#include <vector>

namespace usc_rabi {

/// One analytic oracle: measured deviation against its tolerance.
struct OracleResult {
  std::string name;
  double deviation = 0.0;
  double tolerance = 0.0;
  bool pass = false;
  std::string detail;
};

/// Free decay, JC splitting, Fock-state correlations, parity conservation and
/// the dark dressed ground state.
std::vector<OracleResult> run_selftest();

bool all_pass(const std::vector<OracleResult>& results);

}  // namespace usc_rabi
