#pragma once

#include <span>
#include <string_view>

#include "beliefnet/mass_function.hpp"

namespace beliefnet {

enum class CombinationRule { conjunctive, dubois_prade, pcr };

/// Accepts "conjunctive", "dp"/"dubois_prade" and "pcr".
CombinationRule parse_rule(std::string_view name);
std::string_view to_string(CombinationRule rule);

// All rules are M-ary over focal-element tuples. Inputs must share one frame
// and pass validate_mass(); at least two sources are required. Outputs are
// pruned below kPruneThreshold and renormalized.

/// Unnormalized conjunctive rule; conflict stays on the empty set.
MassFunction conjunctive_combine(std::span<const MassFunction> sources);

/// Conflicting tuples are transferred to the union of their focal sets.
/// Inputs must not carry mass on the empty set.
MassFunction dubois_prade_combine(std::span<const MassFunction> sources);

/// Proportional conflict redistribution for M sources: each conflicting tuple
/// (Y_1..Y_M) with product P gives m_i(Y_i) * P / sum_k m_k(Y_k) back to Y_i.
/// Inputs must not carry mass on the empty set.
MassFunction pcr_combine(std::span<const MassFunction> sources);

MassFunction combine(CombinationRule rule, std::span<const MassFunction> sources);

/// Mass the conjunctive rule puts on the empty set.
double conflict(std::span<const MassFunction> sources);

/// Conflict of `order` copies of m.
double auto_conflict(const MassFunction& m, int order);

}  // namespace beliefnet
