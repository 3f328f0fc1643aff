#include "hhlsim/attack.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cctype>
#include <stdexcept>

namespace hhlsim {

AttackKind parse_attack_kind(const std::string& s) {
    std::string lower(s.size(), '\0');
    std::transform(s.begin(), s.end(), lower.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    if (lower == "iia") return AttackKind::Iia;
    if (lower == "hea") return AttackKind::Hea;
    throw std::invalid_argument(fmt::format("unknown attack kind '{}' (want iia or hea)", s));
}

const char* to_string(AttackKind k) { return k == AttackKind::Iia ? "iia" : "hea"; }

bool AttackSpec::has(const std::string& role, AttackKind kind) const {
    return std::any_of(entries.begin(), entries.end(), [&](const AttackEntry& e) {
        return e.role == role && e.kind == kind;
    });
}

bool AttackSpec::has_role(const std::string& role) const {
    return std::any_of(entries.begin(), entries.end(),
                       [&](const AttackEntry& e) { return e.role == role; });
}

PreparedExperiment apply_attacks(const Circuit& c, const AttackSpec& spec) {
    std::vector<int> iia_wires;
    std::vector<int> levels(c.wires().size(), 0);
    std::vector<std::string> seen;
    for (const AttackEntry& e : spec.entries) {
        if (std::find(seen.begin(), seen.end(), e.role) != seen.end())
            throw std::invalid_argument(fmt::format("role '{}' attacked twice", e.role));
        seen.push_back(e.role);
        const int w = c.wire(e.role);
        if (e.kind == AttackKind::Iia) {
            iia_wires.push_back(w);
        } else {
            if (c.wires()[w].levels < 3)
                throw std::invalid_argument(fmt::format(
                    "higher-energy attack needs a three-level wire, '{}' has {}", e.role,
                    c.wires()[w].levels));
            levels[w] = 2;
        }
    }
    std::sort(iia_wires.begin(), iia_wires.end());

    PreparedExperiment out;
    for (const Wire& w : c.wires()) out.circuit.add_wire(w.levels, w.label);
    for (const ClassicalRegister& r : c.registers()) out.circuit.add_register(r.name, r.width);
    for (int w : iia_wires) out.circuit.push(Operation::x(w));
    out.circuit.push_all(c.ops());
    out.initial_levels = std::move(levels);
    return out;
}

}  // namespace hhlsim
