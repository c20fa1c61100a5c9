#include "iptamc/interval_distribution.hpp"

namespace iptamc {

std::string_view to_string(ViolatedCondition c) {
    switch (c) {
    case ViolatedCondition::BoundOutsideUnitInterval: return "bound outside [0,1]";
    case ViolatedCondition::LowerAboveUpper: return "lower bound exceeds upper bound";
    case ViolatedCondition::LowerSumAboveOne: return "sum of lower bounds exceeds 1";
    case ViolatedCondition::UpperSumBelowOne: return "sum of upper bounds below 1";
    case ViolatedCondition::EmptySupport: return "empty support";
    }
    return "?";
}

} // namespace iptamc
