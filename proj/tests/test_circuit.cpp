#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <string>

#include "hhlsim/circuit.hpp"

using namespace hhlsim;

namespace {

Circuit sample_circuit() {
    Circuit c;
    c.add_wire(3, "ancilla");
    c.add_wire(3, "clock0");
    c.add_wire(2, "b");
    c.add_register("c_out", 2);
    c.push(Operation::x(2));
    c.push(Operation::h(1));
    c.push(Operation::ry(0, 1.0471975511965976));
    c.push(Operation::cphase(1, 0, -kPi / 2));
    c.push(Operation::cnot(2, 0));
    const double s = 1.0 / std::sqrt(2.0);
    c.push(Operation::cu(1, 2, Mat2{{cx{s}, cx{s}, cx{s}, cx{-s}}}));
    c.push(Operation::barrier());
    c.push(Operation::measure(2, "c_out", 0));
    c.push(Operation::reset(0));
    return c;
}

}  // namespace

TEST_CASE("Mat2 algebra") {
    const Mat2 h{{cx{0.6}, cx{0.8}, cx{0.8}, cx{-0.6}}};
    CHECK(h.is_unitary());
    const Mat2 p = h * h.dagger();
    CHECK(std::abs(p.a[0] - cx{1.0}) < 1e-12);
    CHECK(std::abs(p.a[1]) < 1e-12);
    const Mat2 ry{{cx{0.8}, cx{-0.6}, cx{0.6}, cx{0.8}}};
    const Mat2 rd = ry.dagger();
    CHECK(rd.a[1] == cx{0.6});
    CHECK(rd.a[2] == cx{-0.6});
    CHECK_FALSE(Mat2{{cx{1.0}, cx{0.0}, cx{0.0}, cx{2.0}}}.is_unitary());
}

TEST_CASE("wire and register validation") {
    Circuit c;
    CHECK_THROWS_AS(c.add_wire(4, "q"), std::invalid_argument);
    CHECK_THROWS_AS(c.add_wire(2, "bad name"), std::invalid_argument);
    c.add_wire(2, "q");
    CHECK_THROWS_AS(c.add_wire(3, "q"), std::invalid_argument);
    c.add_register("r", 2);
    CHECK_THROWS_AS(c.add_register("r", 1), std::invalid_argument);
    CHECK_THROWS_AS(c.add_register("empty", 0), std::invalid_argument);
    CHECK(c.wire("q") == 0);
    CHECK_THROWS_AS(c.wire("nope"), std::invalid_argument);
    CHECK(!c.find_wire("nope"));
}

TEST_CASE("operation validation") {
    Circuit c;
    c.add_wire(3, "a");
    c.add_wire(3, "b");
    c.add_register("r", 1);
    CHECK_THROWS_AS(c.push(Operation::x(2)), std::invalid_argument);
    CHECK_THROWS_AS(c.push(Operation::cnot(1, 1)), std::invalid_argument);
    CHECK_THROWS_AS(c.push(Operation::ry(0, std::nan(""))), std::invalid_argument);
    CHECK_THROWS_AS(c.push(Operation::cu(0, 1, Mat2{{cx{2.0}, cx{0}, cx{0}, cx{1.0}}})),
                    std::invalid_argument);
    CHECK_THROWS_AS(c.push(Operation::measure(0, "missing", 0)), std::invalid_argument);
    CHECK_THROWS_AS(c.push(Operation::measure(0, "r", 1)), std::invalid_argument);
    c.push(Operation::measure(0, "r", 0));
    CHECK(c.ops().size() == 1);
}

TEST_CASE("readout layout") {
    const Circuit c = sample_circuit();
    CHECK(c.readout_width() == 2);
    CHECK(c.readout_position("c_out", 0) == 0);
    CHECK(c.readout_position("c_out", 1) == 1);
    CHECK_THROWS_AS(c.readout_position("c_out", 2), std::invalid_argument);
    CHECK_THROWS_AS(c.readout_position("other", 0), std::invalid_argument);
}

TEST_CASE("inversion reverses and conjugates") {
    Circuit seg;
    seg.add_wire(3, "a");
    seg.add_wire(3, "b");
    seg.push(Operation::h(0));
    seg.push(Operation::ry(1, 0.7));
    seg.push(Operation::cphase(0, 1, 0.3));
    seg.push(Operation::cu(0, 1, Mat2{{cx{0, 1}, cx{0}, cx{0}, cx{0, -1}}}));

    const Circuit inv = inverted(seg);
    REQUIRE(inv.ops().size() == 4);
    CHECK(inv.ops()[0].kind == OpKind::GateCU);
    CHECK(std::abs(inv.ops()[0].unitary.a[0] - cx{0, -1}) < 1e-15);
    CHECK(inv.ops()[1].angle == doctest::Approx(-0.3));
    CHECK(inv.ops()[2].angle == doctest::Approx(-0.7));
    CHECK(inv.ops()[3].kind == OpKind::GateH);
    CHECK(approx_equal(inverted(inv), seg));

    Circuit bad = seg;
    bad.add_register("r", 1);
    bad.push(Operation::measure(0, "r", 0));
    CHECK_THROWS_AS(inverted(bad), std::invalid_argument);
}

TEST_CASE("dump and parse round trip") {
    const Circuit c = sample_circuit();
    const std::string text = dump_text(c);
    const Circuit back = parse_text(text);
    CHECK(approx_equal(back, c, 1e-15));
    CHECK(dump_text(back) == text);  // byte-identical
}

TEST_CASE("parse rejects malformed input with line numbers") {
    CHECK_THROWS_WITH_AS(parse_text("warble 1\n"), doctest::Contains("line 1"),
                         std::invalid_argument);
    CHECK_THROWS_WITH_AS(parse_text("wire 0 levels=2 label=q\nx 0\nwire 1 levels=2 label=p\n"),
                         doctest::Contains("line 3"), std::invalid_argument);
    CHECK_THROWS_AS(parse_text("wire 1 levels=2 label=q\n"), std::invalid_argument);
    CHECK_THROWS_AS(parse_text("wire 0 levels=2 label=q\nmeasure 0 -> r[0]\n"),
                    std::invalid_argument);
    CHECK_THROWS_AS(parse_text("wire 0 levels=2 label=q\nry 0 abc\n"), std::invalid_argument);
    // cu whose serialized matrix is not of controlled shape
    std::string cu_line = "wire 0 levels=2 label=q\nwire 1 levels=2 label=p\ncu 0 1";
    for (int i = 0; i < 16; ++i) cu_line += " 1,0";
    cu_line += "\n";
    CHECK_THROWS_AS(parse_text(cu_line), std::invalid_argument);
}

TEST_CASE("approx_equal tolerance") {
    Circuit a;
    a.add_wire(2, "q");
    a.push(Operation::ry(0, 1.0));
    Circuit b;
    b.add_wire(2, "q");
    b.push(Operation::ry(0, 1.0 + 1e-12));
    CHECK(approx_equal(a, b));
    Circuit c;
    c.add_wire(2, "q");
    c.push(Operation::ry(0, 1.01));
    CHECK_FALSE(approx_equal(a, c));
}
