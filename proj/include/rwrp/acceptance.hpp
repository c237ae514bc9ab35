#pragma once

#include <cstdint>
#include <iosfwd>

namespace rwrp {

struct AcceptanceSummary {
  int total = 0;
  int failed = 0;
};

// Oracle-backed acceptance battery: one PASS/FAIL line per criterion, with
// the measured quantities and the wall time against the per-criterion budget.
AcceptanceSummary run_acceptance(std::uint64_t seed, int workers,
                                 std::ostream& out);

}  // namespace rwrp
