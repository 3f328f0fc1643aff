#pragma once

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "hhlsim/attack.hpp"
#include "hhlsim/hhl.hpp"

namespace hhlsim {

/// Canonical wire labels of the reference construction.
namespace roles {
inline constexpr const char* ancilla = "ancilla";
inline constexpr const char* new_ancilla = "new_ancilla";
inline constexpr const char* b = "b";
inline const std::string clock(int j) { return "clock" + std::to_string(j); }
}  // namespace roles

/// Hardened circuit: the plain wires plus `new_ancilla`, with probe rounds
/// before and after the algorithm body. Registers, in readout order:
///   c_ancilla_defense[2]  bit 0 = ancilla probe, bit 1 = new_ancilla probe
///   c_b_defense[3]        bits m1, m2, m3 of the input-integrity probes
///   c_clock_defense[2]    bit j = clock j readout after uncompute
///   c_b_out[1]            solution readout
Circuit build_secure_hhl(const HhlParams& p);

enum class Verdict { NoAttackConverged, NoAttackIterating, AttackDetected };

const char* to_string(Verdict v);

struct AttributedAttack {
    std::string role;
    AttackKind kind = AttackKind::Iia;

    bool operator==(const AttributedAttack&) const = default;
};

struct Diagnosis {
    Verdict verdict = Verdict::AttackDetected;
    std::string code;  // canonical "aa bbb cc" form of the defense readout
    /// Best-effort per-register attribution; empty when no table row matches
    /// the observed registers (detection still stands on any nonclean code).
    std::vector<AttributedAttack> candidates;
};

/// Classifies the 7-bit defense readout (c_ancilla_defense, c_b_defense,
/// c_clock_defense concatenated; spaces optional). Exactly "10 000 00" and
/// "01 000 00" are clean; everything else is an attack detection.
Diagnosis classify(const std::string& readout);

/// Expected defense-register values for one attack combination, straight from
/// the detection tables. Each field is set when its table covers the
/// combination: the ancilla table covers HEA subsets of the two ancillas, the
/// input table covers same-kind subsets of {ancilla, new_ancilla, b}, the
/// clock table covers same-kind subsets of the clocks. Errors when no table
/// covers the combination.
struct ExpectedDefenseReadout {
    std::optional<std::set<std::string>> ancilla;  // exact support of c_ancilla_defense
    std::optional<std::string> b;                  // claimed deterministic c_b_defense
    std::optional<std::string> clock;              // claimed deterministic c_clock_defense
};

ExpectedDefenseReadout defense_truth_table(const AttackSpec& spec);

/// Support of c_ancilla_defense implied by the HEA attacks in `spec`; the
/// consistency filter behind attribution.
std::set<std::string> ancilla_probe_support(const AttackSpec& spec);

}  // namespace hhlsim
