#pragma once

#include <string>
#include <vector>

#include "hhlsim/circuit.hpp"

namespace hhlsim {

enum class AttackKind { Iia, Hea };

AttackKind parse_attack_kind(const std::string& s);  // "iia" | "hea"
const char* to_string(AttackKind k);

struct AttackEntry {
    std::string role;  // wire label
    AttackKind kind = AttackKind::Iia;
};

struct AttackSpec {
    std::vector<AttackEntry> entries;

    bool empty() const { return entries.empty(); }
    bool has(const std::string& role, AttackKind kind) const;
    bool has_role(const std::string& role) const;
};

/// A circuit plus the per-wire initial levels it must start from.
struct PreparedExperiment {
    Circuit circuit;
    std::vector<int> initial_levels;
};

/// Applies attacks to a circuit. An improper-initialization attack (IIA)
/// prepends one X per attacked wire, ascending wire id; a higher-energy attack
/// (HEA) starts the wire at leakage level 2. Each role may carry at most one
/// attack; roles must name existing wires; HEA requires a three-level wire.
PreparedExperiment apply_attacks(const Circuit& c, const AttackSpec& spec);

}  // namespace hhlsim
