#include "hhlsim/defense.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <stdexcept>

namespace hhlsim {

namespace {

using K = AttackKind;

std::vector<AttackEntry> canon(std::vector<AttackEntry> v) {
    std::sort(v.begin(), v.end(), [](const AttackEntry& a, const AttackEntry& b) {
        return a.role != b.role ? a.role < b.role : a.kind < b.kind;
    });
    return v;
}

bool same_combo(const AttackSpec& spec, const std::vector<AttackEntry>& row) {
    const auto a = canon(spec.entries);
    const auto b = canon(row);
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i)
        if (a[i].role != b[i].role || a[i].kind != b[i].kind) return false;
    return true;
}

struct AncillaRow {
    std::vector<AttackEntry> attacks;
    std::set<std::string> support;
};

const std::vector<AncillaRow>& ancilla_rows() {
    static const std::vector<AncillaRow> rows = {
        {{}, {"10", "01"}},
        {{{roles::ancilla, K::Hea}}, {"11"}},
        {{{roles::new_ancilla, K::Hea}}, {"01", "11"}},
        {{{roles::ancilla, K::Hea}, {roles::new_ancilla, K::Hea}}, {"11"}},
    };
    return rows;
}

struct InputRow {
    std::vector<AttackEntry> attacks;
    const char* cb;
};

const std::vector<InputRow>& input_rows() {
    static const std::vector<InputRow> rows = {
        {{}, "000"},
        {{{roles::b, K::Hea}}, "010"},
        {{{roles::b, K::Iia}}, "011"},
        {{{roles::ancilla, K::Hea}}, "001"},
        {{{roles::ancilla, K::Iia}}, "001"},
        {{{roles::new_ancilla, K::Hea}}, "110"},
        {{{roles::new_ancilla, K::Iia}}, "100"},
        {{{roles::ancilla, K::Hea}, {roles::b, K::Hea}}, "011"},
        {{{roles::ancilla, K::Iia}, {roles::b, K::Iia}}, "010"},
        {{{roles::ancilla, K::Hea}, {roles::new_ancilla, K::Hea}}, "111"},
        {{{roles::ancilla, K::Iia}, {roles::new_ancilla, K::Iia}}, "101"},
        {{{roles::new_ancilla, K::Hea}, {roles::b, K::Hea}}, "110"},
        {{{roles::new_ancilla, K::Iia}, {roles::b, K::Iia}}, "111"},
        {{{roles::ancilla, K::Hea}, {roles::new_ancilla, K::Hea}, {roles::b, K::Hea}}, "111"},
        {{{roles::ancilla, K::Iia}, {roles::new_ancilla, K::Iia}, {roles::b, K::Iia}}, "110"},
    };
    return rows;
}

struct ClockRow {
    std::vector<AttackEntry> attacks;
    const char* cc;
};

const std::vector<ClockRow>& clock_rows() {
    static const std::vector<ClockRow> rows = {
        {{}, "00"},
        {{{"clock0", K::Hea}}, "10"},
        {{{"clock0", K::Iia}}, "10"},
        {{{"clock1", K::Hea}}, "01"},
        {{{"clock1", K::Iia}}, "01"},
        {{{"clock0", K::Hea}, {"clock1", K::Hea}}, "11"},
        {{{"clock0", K::Iia}, {"clock1", K::Iia}}, "11"},
    };
    return rows;
}

int role_rank(const std::string& role) {
    if (role == roles::ancilla) return 0;
    if (role == roles::new_ancilla) return 1;
    if (role == roles::b) return 2;
    if (role == "clock0") return 3;
    if (role == "clock1") return 4;
    return 5;
}

void add_candidate(std::vector<AttributedAttack>& out, const std::string& role, AttackKind kind) {
    const AttributedAttack cand{role, kind};
    if (std::find(out.begin(), out.end(), cand) == out.end()) out.push_back(cand);
}

}  // namespace

Circuit build_secure_hhl(const HhlParams& p) {
    Circuit c;
    WirePlan plan;
    plan.ancilla = c.add_wire(3, roles::ancilla);
    for (int j = 0; j < p.n_clock; ++j)
        plan.clocks.push_back(c.add_wire(3, roles::clock(j)));
    plan.b = c.add_wire(3, roles::b);
    const int new_anc = c.add_wire(3, roles::new_ancilla);

    const HhlSegments seg = build_segments(p, plan);
    c.add_register("c_ancilla_defense", 2);
    c.add_register("c_b_defense", 3);
    c.add_register("c_clock_defense", p.n_clock);
    c.add_register("c_b_out", 1);

    // Input-integrity probes. The sequence ends by re-preparing b through an
    // X; when the preparation itself is a single X the two cancel exactly at
    // every level, so they are omitted together.
    c.push(Operation::measure(new_anc, "c_b_defense", 0));  // m1
    c.push(Operation::reset(new_anc));
    c.push(Operation::cnot(plan.b, plan.ancilla));
    c.push(Operation::measure(plan.ancilla, "c_b_defense", 2));  // m3
    c.push(Operation::reset(plan.ancilla));
    c.push(Operation::x(plan.b));
    c.push(Operation::cnot(plan.b, new_anc));
    c.push(Operation::x(new_anc));
    c.push(Operation::measure(new_anc, "c_b_defense", 1));  // m2
    c.push(Operation::reset(new_anc));
    const bool prep_is_x = seg.prep.size() == 1 && seg.prep[0].kind == OpKind::GateX;
    if (!prep_is_x) {
        c.push(Operation::x(plan.b));
        c.push_all(seg.prep);
    }

    c.push_all(seg.qpe);
    c.push_all(seg.iqft);
    c.push_all(seg.rotation);

    // Ancilla probes: the rotated ancilla and its complement, read together.
    c.push(Operation::x(new_anc));
    c.push(Operation::cnot(plan.ancilla, new_anc));
    c.push(Operation::measure(plan.ancilla, "c_ancilla_defense", 0));
    c.push(Operation::measure(new_anc, "c_ancilla_defense", 1));

    c.push_all(seg.uncompute);

    c.push(Operation::measure(plan.b, "c_b_out", 0));
    for (int j = 0; j < p.n_clock; ++j)
        c.push(Operation::measure(plan.clocks[j], "c_clock_defense", j));
    return c;
}

const char* to_string(Verdict v) {
    switch (v) {
        case Verdict::NoAttackConverged: return "no_attack_converged";
        case Verdict::NoAttackIterating: return "no_attack_iterating";
        case Verdict::AttackDetected: return "attack_detected";
    }
    return "?";
}

Diagnosis classify(const std::string& readout) {
    std::string bits;
    for (char ch : readout) {
        if (ch == ' ') continue;
        if (ch != '0' && ch != '1')
            throw std::invalid_argument(fmt::format("bad readout character '{}'", ch));
        bits.push_back(ch);
    }
    if (bits.size() != 7)
        throw std::invalid_argument(
            fmt::format("defense readout needs 7 bits, got {}", bits.size()));

    Diagnosis diag;
    diag.code = fmt::format("{} {} {}", bits.substr(0, 2), bits.substr(2, 3), bits.substr(5, 2));
    if (bits == "1000000") {
        diag.verdict = Verdict::NoAttackConverged;
        return diag;
    }
    if (bits == "0100000") {
        diag.verdict = Verdict::NoAttackIterating;
        return diag;
    }
    diag.verdict = Verdict::AttackDetected;

    const std::string ca = bits.substr(0, 2);
    const std::string cb = bits.substr(2, 3);

    // A set clock bit flags that clock wire but not the attack kind.
    if (bits[5] == '1') {
        add_candidate(diag.candidates, "clock0", K::Iia);
        add_candidate(diag.candidates, "clock0", K::Hea);
    }
    if (bits[6] == '1') {
        add_candidate(diag.candidates, "clock1", K::Iia);
        add_candidate(diag.candidates, "clock1", K::Hea);
    }
    // Ancilla-table rows whose support contains the observed probe value.
    for (const AncillaRow& row : ancilla_rows()) {
        if (!row.support.count(ca)) continue;
        for (const AttackEntry& e : row.attacks) add_candidate(diag.candidates, e.role, e.kind);
    }
    // Input-table rows matching the observed value, filtered by consistency
    // with the ancilla probes.
    for (const InputRow& row : input_rows()) {
        if (cb != row.cb) continue;
        AttackSpec row_spec{row.attacks};
        if (!ancilla_probe_support(row_spec).count(ca)) continue;
        for (const AttackEntry& e : row.attacks) add_candidate(diag.candidates, e.role, e.kind);
    }
    std::sort(diag.candidates.begin(), diag.candidates.end(),
              [](const AttributedAttack& a, const AttributedAttack& b) {
                  const int ra = role_rank(a.role), rb = role_rank(b.role);
                  if (ra != rb) return ra < rb;
                  return a.kind < b.kind;
              });
    return diag;
}

ExpectedDefenseReadout defense_truth_table(const AttackSpec& spec) {
    ExpectedDefenseReadout out;
    for (const AncillaRow& row : ancilla_rows()) {
        if (same_combo(spec, row.attacks)) out.ancilla = row.support;
    }
    for (const InputRow& row : input_rows()) {
        if (same_combo(spec, row.attacks)) out.b = row.cb;
    }
    for (const ClockRow& row : clock_rows()) {
        if (same_combo(spec, row.attacks)) out.clock = row.cc;
    }
    if (!out.ancilla && !out.b && !out.clock) {
        std::string desc;
        for (const AttackEntry& e : canon(spec.entries))
            desc += fmt::format("{}{}:{}", desc.empty() ? "" : ",", e.role, to_string(e.kind));
        throw std::invalid_argument(
            fmt::format("attack combination [{}] is outside the detection tables", desc));
    }
    return out;
}

std::set<std::string> ancilla_probe_support(const AttackSpec& spec) {
    if (spec.has(roles::ancilla, K::Hea)) return {"11"};
    if (spec.has(roles::new_ancilla, K::Hea)) return {"01", "11"};
    return {"10", "01"};
}

}  // namespace hhlsim
