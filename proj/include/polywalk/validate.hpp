#pragma once

#include <cstdint>
#include <iosfwd>

namespace pw {

// Randomized invariant suite over generated instances (leverage/weight bounds
// and identities, metric sandwiches, slackness/eigenvalue lemmas, acceptance
// antisymmetry, interior preservation). Writes one line per violation plus a
// summary to `report`; returns the violation count. Deterministic in
// (n_instances, seed). Backs the `polywalk validate` subcommand and the
// property-suite acceptance gate.
int run_invariant_suite(int n_instances, std::uint64_t seed,
                        std::ostream& report);

}  // namespace pw
