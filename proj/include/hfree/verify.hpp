#pragma once

// Implementation-versus-oracle equivalence checks shared by the CLI and the
// acceptance suite.

#include <cstdint>
#include <string>
#include <vector>

namespace hfree::verify {

struct Report {
  std::string scope;
  std::uint64_t checks = 0;
  std::vector<std::string> mismatches;  // each with reproduction info

  bool pass() const { return mismatches.empty(); }
};

struct ClosureOptions {
  std::vector<std::string> patterns{"C3", "C4", "C5", "K4"};
  std::vector<std::uint32_t> n_values{15};
  std::uint32_t seeds = 20;
  std::uint64_t base_seed = 1;
  /// Flips one classification before comparing; the check must then fail.
  bool inject_fault = false;
};

/// Runs each (H, n, seed) to exhaustion, comparing Edge/Open/Closed with the
/// oracle after every step, and checks the final graph is maximal H-free.
Report closure(const ClosureOptions& options);

struct RandomGraphOptions {
  std::uint32_t graphs = 50;
  std::uint32_t vertices = 10;
  std::uint64_t base_seed = 1;
};

/// Exact density (subset scan and branch-and-bound) against the oracle on
/// seeded random graphs with varying edge probability and size cap.
Report density(const RandomGraphOptions& options);

/// Copy counts and automorphism counts against the oracle.
Report counts(const RandomGraphOptions& options);

} // namespace hfree::verify
