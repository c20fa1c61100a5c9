#include "iptamc/imdp.hpp"

#include <algorithm>
#include <ostream>

namespace iptamc {

IntervalDistribution<StateId> Imdp::distribution(std::size_t choice) const {
    IntervalDistribution<StateId> d;
    for (std::size_t t = transition_begin[choice]; t < transition_begin[choice + 1]; ++t)
        d.add(transition_target[t], transition_lower[t], transition_upper[t]);
    return d;
}

std::span<const std::int64_t> Imdp::clocks_of(StateId s) const {
    const std::size_t k = clock_names.size();
    return {state_clocks.data() + static_cast<std::size_t>(s) * k, k};
}

void write_imdp(std::ostream& out, const Imdp& m) {
    out << "imdp " << m.state_count() << ' ' << m.choice_count() << ' ' << m.transition_count() << '\n';
    for (StateId s = 0; s < m.state_count(); ++s) {
        for (std::size_t c = m.choices_begin(s); c < m.choices_end(s); ++c) {
            const std::string label = std::to_string(c - m.choices_begin(s)) + ":" + m.choice_label[c];
            for (std::size_t t = m.transition_begin[c]; t < m.transition_begin[c + 1]; ++t)
                out << s << ' ' << label << ' ' << to_fraction_string(m.transition_lower[t]) << ' '
                    << to_fraction_string(m.transition_upper[t]) << ' ' << m.transition_target[t] << '\n';
        }
    }
    auto write_label = [&](const std::string& name, const std::vector<StateId>& states) {
        out << "label " << name << ':';
        for (auto s : states) out << ' ' << s;
        out << '\n';
    };
    std::vector<StateId> init = m.initial;
    std::sort(init.begin(), init.end());
    write_label("init", init);
    for (const auto& [name, states] : m.labels)
        if (name != "init") write_label(name, states);
}

} // namespace iptamc
