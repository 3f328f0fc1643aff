#include <doctest.h>

#include <stdexcept>

#include "hhlsim/attack.hpp"
#include "hhlsim/defense.hpp"
#include "hhlsim/hhl.hpp"

using namespace hhlsim;

TEST_CASE("attack kind parsing") {
    CHECK(parse_attack_kind("iia") == AttackKind::Iia);
    CHECK(parse_attack_kind("IIA") == AttackKind::Iia);
    CHECK(parse_attack_kind("hea") == AttackKind::Hea);
    CHECK(parse_attack_kind("HEA") == AttackKind::Hea);
    CHECK_THROWS_AS(parse_attack_kind("other"), std::invalid_argument);
    CHECK(to_string(AttackKind::Iia) == std::string{"iia"});
    CHECK(to_string(AttackKind::Hea) == std::string{"hea"});
}

TEST_CASE("improper initialization prepends X gates in wire order") {
    const Circuit c = build_hhl(HhlParams{});
    AttackSpec spec;
    spec.entries = {{"b", AttackKind::Iia}, {"ancilla", AttackKind::Iia}};
    const PreparedExperiment prep = apply_attacks(c, spec);
    REQUIRE(prep.circuit.ops().size() == c.ops().size() + 2);
    CHECK(prep.circuit.ops()[0].kind == OpKind::GateX);
    CHECK(prep.circuit.ops()[0].wires == std::vector<int>{0});
    CHECK(prep.circuit.ops()[1].kind == OpKind::GateX);
    CHECK(prep.circuit.ops()[1].wires == std::vector<int>{3});
    for (int lv : prep.initial_levels) CHECK(lv == 0);
}

TEST_CASE("higher-energy attacks set the starting level") {
    const Circuit c = build_secure_hhl(HhlParams{});
    AttackSpec spec;
    spec.entries = {{"new_ancilla", AttackKind::Hea}, {"clock0", AttackKind::Hea}};
    const PreparedExperiment prep = apply_attacks(c, spec);
    CHECK(prep.circuit.ops().size() == c.ops().size());
    CHECK(prep.initial_levels[c.wire("new_ancilla")] == 2);
    CHECK(prep.initial_levels[c.wire("clock0")] == 2);
    CHECK(prep.initial_levels[c.wire("b")] == 0);
}

TEST_CASE("attack specs reject bad roles and duplicates") {
    const Circuit c = build_hhl(HhlParams{});
    AttackSpec spec;
    spec.entries = {{"nonexistent", AttackKind::Iia}};
    CHECK_THROWS_AS(apply_attacks(c, spec), std::invalid_argument);

    spec.entries = {{"b", AttackKind::Iia}, {"b", AttackKind::Hea}};
    CHECK_THROWS_AS(apply_attacks(c, spec), std::invalid_argument);
}

TEST_CASE("higher-energy attacks need a third level") {
    Circuit c;
    c.add_wire(2, "q");
    c.add_register("m", 1);
    c.push(Operation::measure(0, "m", 0));
    AttackSpec spec;
    spec.entries = {{"q", AttackKind::Hea}};
    CHECK_THROWS_AS(apply_attacks(c, spec), std::invalid_argument);
    spec.entries = {{"q", AttackKind::Iia}};
    const PreparedExperiment prep = apply_attacks(c, spec);
    CHECK(prep.circuit.ops().size() == 2);
}

TEST_CASE("spec helpers") {
    AttackSpec spec;
    CHECK(spec.empty());
    spec.entries = {{"b", AttackKind::Iia}};
    CHECK(!spec.empty());
    CHECK(spec.has("b", AttackKind::Iia));
    CHECK(!spec.has("b", AttackKind::Hea));
    CHECK(spec.has_role("b"));
    CHECK(!spec.has_role("ancilla"));
}
