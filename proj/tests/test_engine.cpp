#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "hhlsim/defense.hpp"
#include "hhlsim/engine.hpp"
#include "hhlsim/hhl.hpp"
#include "reference_sim.hpp"
#include "test_util.hpp"

using namespace hhlsim;

namespace {

Circuit one_qutrit() {
    Circuit c;
    c.add_wire(3, "q");
    c.add_register("m", 1);
    return c;
}

}  // namespace

TEST_CASE("mixed-radix indexing") {
    Circuit c;
    c.add_wire(3, "q0");
    c.add_wire(2, "q1");
    c.add_wire(3, "q2");
    const StateVector sv = StateVector::init_state(c, {2, 1, 1});
    CHECK(sv.dim() == 18);
    CHECK(sv.strides == std::vector<std::int64_t>{1, 3, 6});
    const std::int64_t idx = 2 + 1 * 3 + 1 * 6;
    CHECK(sv.amps[idx] == cx{1.0});
    CHECK(sv.digit(idx, 0) == 2);
    CHECK(sv.digit(idx, 1) == 1);
    CHECK(sv.digit(idx, 2) == 1);
    CHECK(sv.norm() == doctest::Approx(1.0));
    CHECK_THROWS_AS(StateVector::init_state(c, {0, 2, 0}), std::invalid_argument);
    CHECK_THROWS_AS(StateVector::init_state(c, {0, 0}), std::invalid_argument);
}

TEST_CASE("hadamard gives a fair coin") {
    Circuit c = one_qutrit();
    c.push(Operation::h(0));
    c.push(Operation::measure(0, "m", 0));
    const auto d = exact_distribution(c, {0});
    CHECK(d.at("0") == doctest::Approx(0.5));
    CHECK(d.at("1") == doctest::Approx(0.5));
}

TEST_CASE("gates are inert on the leakage level") {
    Circuit frame;
    frame.add_wire(3, "a");
    frame.add_wire(3, "b");
    StateVector sv = StateVector::init_state(frame, {2, 0});
    apply_gate(sv, Operation::x(0));
    apply_gate(sv, Operation::h(0));
    apply_gate(sv, Operation::ry(0, 1.2345));
    apply_gate(sv, Operation::cnot(0, 1));  // leaked control fires nothing
    apply_gate(sv, Operation::cnot(1, 0));  // leaked target absorbs nothing
    apply_gate(sv, Operation::cphase(0, 1, 0.7));
    CHECK(sv.level_mass(0, 2) == doctest::Approx(1.0));
    CHECK(sv.level_mass(1, 0) == doctest::Approx(1.0));
    CHECK(sv.norm() == doctest::Approx(1.0));
}

TEST_CASE("measurement reads leakage as one and keeps it") {
    Circuit frame;
    frame.add_wire(3, "q");
    StateVector sv = StateVector::init_state(frame, {2});
    CHECK(measure_wire(sv, 0, 0.99) == 1);
    CHECK(sv.level_mass(0, 2) == doctest::Approx(1.0));
}

TEST_CASE("reset cures level one but not level two") {
    Circuit frame;
    frame.add_wire(3, "q");
    StateVector sv = StateVector::init_state(frame, {1});
    reset_wire(sv, 0, 0.5);
    CHECK(sv.level_mass(0, 0) == doctest::Approx(1.0));

    sv = StateVector::init_state(frame, {2});
    reset_wire(sv, 0, 0.5);
    CHECK(sv.level_mass(0, 2) == doctest::Approx(1.0));

    Circuit c = one_qutrit();
    c.push(Operation::h(0));
    c.push(Operation::reset(0));
    c.push(Operation::measure(0, "m", 0));
    const auto d = exact_distribution(c, {0});
    CHECK(d.at("0") == doctest::Approx(1.0));
}

TEST_CASE("measurement collapse renormalizes") {
    Circuit c = one_qutrit();
    c.add_register("m2", 1);
    c.push(Operation::ry(0, 2.0 * std::asin(std::sqrt(0.3))));
    c.push(Operation::measure(0, "m", 0));
    c.push(Operation::measure(0, "m2", 0));  // repeated readout agrees
    const auto d = exact_distribution(c, {0});
    CHECK(d.at("00") == doctest::Approx(0.7));
    CHECK(d.at("11") == doctest::Approx(0.3));
    CHECK(d.count("01") == 0);
    CHECK(d.count("10") == 0);
}

TEST_CASE("improper initialization equals a level-one start") {
    const Circuit defended = build_secure_hhl(HhlParams{});
    AttackSpec spec;
    spec.entries = {{"ancilla", AttackKind::Iia}, {"b", AttackKind::Iia}};
    const auto via_x = testutil::exact_with_attacks(defended, spec);
    std::vector<int> levels(defended.wires().size(), 0);
    levels[defended.wire("ancilla")] = 1;
    levels[defended.wire("b")] = 1;
    const auto via_init = exact_distribution(defended, levels);
    CHECK(testutil::max_key_delta(via_x, via_init) < 1e-12);
}

TEST_CASE("parallel sampler matches the serial reference") {
    const Circuit defended = build_secure_hhl(HhlParams{});
    const std::vector<int> levels(defended.wires().size(), 0);
    const NoiseConfig noise{0.02, 0.01};
    const auto par = run_shots(defended, levels, 4096, 12345, noise);
    const auto ser = run_shots_serial(defended, levels, 4096, 12345, noise);
    CHECK(par.total == 4096);
    CHECK(par.counts == ser.counts);
}

TEST_CASE("engine agrees with the dense reference simulator") {
    const Circuit plain = build_hhl(HhlParams{});
    const Circuit defended = build_secure_hhl(HhlParams{});

    SUBCASE("plain, no attack") {
        const std::vector<int> levels(plain.wires().size(), 0);
        CHECK(testutil::max_key_delta(exact_distribution(plain, levels),
                                      refsim::exact_distribution(plain, levels)) < 1e-12);
    }
    SUBCASE("defended, no attack") {
        const std::vector<int> levels(defended.wires().size(), 0);
        CHECK(testutil::max_key_delta(exact_distribution(defended, levels),
                                      refsim::exact_distribution(defended, levels)) < 1e-12);
    }
    SUBCASE("defended, mixed attack") {
        AttackSpec spec;
        spec.entries = {{"clock1", AttackKind::Iia}, {"new_ancilla", AttackKind::Hea}};
        const PreparedExperiment prep = apply_attacks(defended, spec);
        CHECK(testutil::max_key_delta(
                  exact_distribution(prep.circuit, prep.initial_levels),
                  refsim::exact_distribution(prep.circuit, prep.initial_levels)) < 1e-12);
    }
    SUBCASE("defended, leaked solution wire") {
        AttackSpec spec;
        spec.entries = {{"b", AttackKind::Hea}};
        const PreparedExperiment prep = apply_attacks(defended, spec);
        CHECK(testutil::max_key_delta(
                  exact_distribution(prep.circuit, prep.initial_levels),
                  refsim::exact_distribution(prep.circuit, prep.initial_levels)) < 1e-12);
    }
}

TEST_CASE("qutrit frame embeds the qubit circuit") {
    const Circuit plain = build_hhl(HhlParams{});
    const Circuit qubit = testutil::reframe_qubits(plain);
    const auto d3 = exact_distribution(plain, std::vector<int>(plain.wires().size(), 0));
    const auto d2 = exact_distribution(qubit, std::vector<int>(qubit.wires().size(), 0));
    CHECK(testutil::max_key_delta(d3, d2) < 1e-12);
}

TEST_CASE("sampling converges to the exact distribution") {
    const Circuit plain = build_hhl(HhlParams{});
    const std::vector<int> levels(plain.wires().size(), 0);
    const auto exact = exact_distribution(plain, levels);
    const auto sampled = run_shots(plain, levels, 20000, 777).to_distribution();
    CHECK(variational_distance(exact, sampled) < 0.02);
}

TEST_CASE("readout noise flips recorded bits only") {
    Circuit c = one_qutrit();
    c.push(Operation::measure(0, "m", 0));
    NoiseConfig noise;
    noise.p_readout = 0.25;
    const auto hist = run_shots(c, {0}, 20000, 99, noise);
    const double p1 = hist.to_distribution().count("1") ? hist.to_distribution().at("1") : 0.0;
    CHECK(p1 == doctest::Approx(0.25).epsilon(0.1));
}

TEST_CASE("depolarizing noise never touches the leakage level") {
    const Circuit defended = build_secure_hhl(HhlParams{});
    AttackSpec spec;
    spec.entries = {{"ancilla", AttackKind::Hea}};
    const PreparedExperiment prep = apply_attacks(defended, spec);
    NoiseConfig noise;
    noise.p_depol = 0.25;
    const auto hist = run_shots(prep.circuit, prep.initial_levels, 2000, 4242, noise);
    const int pos = prep.circuit.readout_position("c_ancilla_defense", 0);
    for (const auto& [readout, n] : hist.counts) CHECK(readout[pos] == '1');
}

TEST_CASE("branch cap and misuse errors") {
    const Circuit defended = build_secure_hhl(HhlParams{});
    const std::vector<int> levels(defended.wires().size(), 0);
    CHECK_THROWS_AS(exact_distribution(defended, levels, 2), std::runtime_error);
    StateVector sv = StateVector::zero_state(defended);
    CHECK_THROWS_AS(apply_gate(sv, Operation::measure(0, "c_b_out", 0)), std::invalid_argument);
}

TEST_CASE("gate application preserves the norm") {
    HhlParams p;
    p.include_measurements = false;
    const Circuit body = build_hhl(p);
    StateVector sv = StateVector::zero_state(body);
    for (const Operation& op : body.ops()) {
        apply_gate(sv, op);
        CHECK(std::abs(sv.norm() - 1.0) < 1e-12);
    }
}
