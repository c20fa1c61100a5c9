#pragma once

#include "iptamc/ipta.hpp"

#include <vector>

namespace iptamc {

/// Parallel composition: shared actions synchronise (guards conjoined, distributions
/// multiplied), other actions interleave with the partner staying put. Only product
/// locations reachable from the initial pairs are kept. `b`'s clocks follow `a`'s.
/// Throws Error(ClockNameClash | VariableNameClash).
Ipta compose(const Ipta& a, const Ipta& b);

/// Left fold of `compose`.
Ipta compose_all(const std::vector<Ipta>& modules);

} // namespace iptamc
