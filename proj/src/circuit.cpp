#include "hhlsim/circuit.hpp"

#include <fmt/format.h>

#include <cctype>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace hhlsim {

namespace {

bool valid_name(const std::string& s) {
    if (s.empty()) return false;
    for (char ch : s) {
        if (!std::isalnum(static_cast<unsigned char>(ch)) && ch != '_') return false;
    }
    return true;
}

std::string fmt_double(double v) {
    return fmt::format("{:.17g}", v);  // 17 significant digits round-trip binary64
}

std::string fmt_cx(const cx& v) {
    return fmt::format("{},{}", fmt_double(v.real()), fmt_double(v.imag()));
}

}  // namespace

Mat2 Mat2::dagger() const {
    return Mat2{{std::conj(a[0]), std::conj(a[2]), std::conj(a[1]), std::conj(a[3])}};
}

Mat2 Mat2::operator*(const Mat2& o) const {
    return Mat2{{a[0] * o.a[0] + a[1] * o.a[2], a[0] * o.a[1] + a[1] * o.a[3],
                 a[2] * o.a[0] + a[3] * o.a[2], a[2] * o.a[1] + a[3] * o.a[3]}};
}

bool Mat2::is_unitary(double tol) const {
    const Mat2 p = *this * dagger();
    return std::abs(p.a[0] - cx{1.0}) <= tol && std::abs(p.a[1]) <= tol &&
           std::abs(p.a[2]) <= tol && std::abs(p.a[3] - cx{1.0}) <= tol;
}

bool is_gate(OpKind k) {
    switch (k) {
        case OpKind::GateX:
        case OpKind::GateH:
        case OpKind::GateRy:
        case OpKind::GateCPhase:
        case OpKind::GateCnot:
        case OpKind::GateCU:
            return true;
        default:
            return false;
    }
}

int op_arity(OpKind k) {
    switch (k) {
        case OpKind::GateX:
        case OpKind::GateH:
        case OpKind::GateRy:
        case OpKind::Measure:
        case OpKind::Reset:
            return 1;
        case OpKind::GateCPhase:
        case OpKind::GateCnot:
        case OpKind::GateCU:
            return 2;
        case OpKind::Barrier:
            return 0;
    }
    return 0;
}

const char* op_name(OpKind k) {
    switch (k) {
        case OpKind::GateX: return "x";
        case OpKind::GateH: return "h";
        case OpKind::GateRy: return "ry";
        case OpKind::GateCPhase: return "cphase";
        case OpKind::GateCnot: return "cnot";
        case OpKind::GateCU: return "cu";
        case OpKind::Measure: return "measure";
        case OpKind::Reset: return "reset";
        case OpKind::Barrier: return "barrier";
    }
    return "?";
}

namespace {

Operation make_op(OpKind kind, std::vector<int> wires) {
    Operation op;
    op.kind = kind;
    op.wires = std::move(wires);
    return op;
}

}  // namespace

Operation Operation::x(int w) { return make_op(OpKind::GateX, {w}); }
Operation Operation::h(int w) { return make_op(OpKind::GateH, {w}); }

Operation Operation::ry(int w, double theta) {
    Operation op = make_op(OpKind::GateRy, {w});
    op.angle = theta;
    return op;
}

Operation Operation::cphase(int control, int target, double theta) {
    Operation op = make_op(OpKind::GateCPhase, {control, target});
    op.angle = theta;
    return op;
}

Operation Operation::cnot(int control, int target) {
    return make_op(OpKind::GateCnot, {control, target});
}

Operation Operation::cu(int control, int target, const Mat2& u) {
    Operation op = make_op(OpKind::GateCU, {control, target});
    op.unitary = u;
    return op;
}

Operation Operation::measure(int w, std::string reg, int bit) {
    Operation op = make_op(OpKind::Measure, {w});
    op.reg = std::move(reg);
    op.bit = bit;
    return op;
}

Operation Operation::reset(int w) { return make_op(OpKind::Reset, {w}); }
Operation Operation::barrier() { return make_op(OpKind::Barrier, {}); }

int Circuit::add_wire(int levels, std::string label) {
    if (levels != 2 && levels != 3)
        throw std::invalid_argument(fmt::format("wire levels must be 2 or 3, got {}", levels));
    if (!valid_name(label))
        throw std::invalid_argument(fmt::format("bad wire label '{}'", label));
    if (find_wire(label))
        throw std::invalid_argument(fmt::format("duplicate wire label '{}'", label));
    if (wires_.size() >= 24)
        throw std::invalid_argument("too many wires");
    wires_.push_back({levels, std::move(label)});
    return static_cast<int>(wires_.size()) - 1;
}

void Circuit::add_register(std::string name, int width) {
    if (!valid_name(name))
        throw std::invalid_argument(fmt::format("bad register name '{}'", name));
    if (width < 1)
        throw std::invalid_argument(fmt::format("register '{}' width must be positive", name));
    if (find_register(name))
        throw std::invalid_argument(fmt::format("duplicate register '{}'", name));
    regs_.push_back({std::move(name), width});
}

void Circuit::push(Operation op) {
    const int n = wire_count();
    if (static_cast<int>(op.wires.size()) != op_arity(op.kind))
        throw std::invalid_argument(fmt::format("{} expects {} wires, got {}", op_name(op.kind),
                                                op_arity(op.kind), op.wires.size()));
    for (int w : op.wires) {
        if (w < 0 || w >= n)
            throw std::invalid_argument(fmt::format("wire {} out of range", w));
    }
    if (op.wires.size() == 2 && op.wires[0] == op.wires[1])
        throw std::invalid_argument(
            fmt::format("{} control and target coincide on wire {}", op_name(op.kind), op.wires[0]));
    switch (op.kind) {
        case OpKind::GateRy:
        case OpKind::GateCPhase:
            if (!std::isfinite(op.angle))
                throw std::invalid_argument(fmt::format("{} angle is not finite", op_name(op.kind)));
            break;
        case OpKind::GateCU:
            if (!op.unitary.is_unitary())
                throw std::invalid_argument("cu payload is not unitary");
            break;
        case OpKind::Measure: {
            const ClassicalRegister* r = find_register(op.reg);
            if (!r)
                throw std::invalid_argument(fmt::format("measure into unknown register '{}'", op.reg));
            if (op.bit < 0 || op.bit >= r->width)
                throw std::invalid_argument(
                    fmt::format("measure bit {} out of range for '{}'", op.bit, op.reg));
            break;
        }
        default:
            break;
    }
    ops_.push_back(std::move(op));
}

void Circuit::push_all(const std::vector<Operation>& ops) {
    for (const Operation& op : ops) push(op);
}

std::int64_t Circuit::dim() const {
    std::int64_t d = 1;
    for (const Wire& w : wires_) d *= w.levels;
    return d;
}

std::optional<int> Circuit::find_wire(const std::string& label) const {
    for (std::size_t i = 0; i < wires_.size(); ++i) {
        if (wires_[i].label == label) return static_cast<int>(i);
    }
    return std::nullopt;
}

int Circuit::wire(const std::string& label) const {
    if (auto w = find_wire(label)) return *w;
    throw std::invalid_argument(fmt::format("no wire labeled '{}'", label));
}

const ClassicalRegister* Circuit::find_register(const std::string& name) const {
    for (const ClassicalRegister& r : regs_) {
        if (r.name == name) return &r;
    }
    return nullptr;
}

int Circuit::readout_width() const {
    int w = 0;
    for (const ClassicalRegister& r : regs_) w += r.width;
    return w;
}

int Circuit::readout_position(const std::string& reg, int bit) const {
    int offset = 0;
    for (const ClassicalRegister& r : regs_) {
        if (r.name == reg) {
            if (bit < 0 || bit >= r.width)
                throw std::invalid_argument(fmt::format("bit {} out of range for '{}'", bit, reg));
            return offset + bit;
        }
        offset += r.width;
    }
    throw std::invalid_argument(fmt::format("no register named '{}'", reg));
}

Operation inverted_op(const Operation& op) {
    Operation out = op;
    switch (op.kind) {
        case OpKind::GateX:
        case OpKind::GateH:
        case OpKind::GateCnot:
        case OpKind::Barrier:
            break;  // self-inverse
        case OpKind::GateRy:
        case OpKind::GateCPhase:
            out.angle = -op.angle;
            break;
        case OpKind::GateCU:
            out.unitary = op.unitary.dagger();
            break;
        case OpKind::Measure:
        case OpKind::Reset:
            throw std::invalid_argument(
                fmt::format("cannot invert {}", op_name(op.kind)));
    }
    return out;
}

Circuit inverted(const Circuit& segment) {
    Circuit out;
    for (const Wire& w : segment.wires()) out.add_wire(w.levels, w.label);
    for (const ClassicalRegister& r : segment.registers()) out.add_register(r.name, r.width);
    const auto& ops = segment.ops();
    for (auto it = ops.rbegin(); it != ops.rend(); ++it) out.push(inverted_op(*it));
    return out;
}

std::string dump_text(const Circuit& c) {
    std::string out;
    for (std::size_t i = 0; i < c.wires().size(); ++i) {
        const Wire& w = c.wires()[i];
        out += fmt::format("wire {} levels={} label={}\n", i, w.levels, w.label);
    }
    for (const ClassicalRegister& r : c.registers())
        out += fmt::format("creg {} {}\n", r.name, r.width);
    for (const Operation& op : c.ops()) {
        switch (op.kind) {
            case OpKind::GateX:
            case OpKind::GateH:
            case OpKind::Reset:
                out += fmt::format("{} {}\n", op_name(op.kind), op.wires[0]);
                break;
            case OpKind::GateRy:
                out += fmt::format("ry {} {}\n", op.wires[0], fmt_double(op.angle));
                break;
            case OpKind::GateCPhase:
                out += fmt::format("cphase {} {} {}\n", op.wires[0], op.wires[1],
                                   fmt_double(op.angle));
                break;
            case OpKind::GateCnot:
                out += fmt::format("cnot {} {}\n", op.wires[0], op.wires[1]);
                break;
            case OpKind::GateCU: {
                // Serialized as the full 4x4 block matrix [[I, 0], [0, U]],
                // row-major, one re,im token per entry.
                const Mat2& u = op.unitary;
                std::array<cx, 16> m{};
                m[0] = m[5] = cx{1.0};
                m[10] = u.a[0];
                m[11] = u.a[1];
                m[14] = u.a[2];
                m[15] = u.a[3];
                out += fmt::format("cu {} {}", op.wires[0], op.wires[1]);
                for (const cx& e : m) out += fmt::format(" {}", fmt_cx(e));
                out += "\n";
                break;
            }
            case OpKind::Measure:
                out += fmt::format("measure {} -> {}[{}]\n", op.wires[0], op.reg, op.bit);
                break;
            case OpKind::Barrier:
                out += "barrier\n";
                break;
        }
    }
    return out;
}

namespace {

struct LineParser {
    int line_no = 0;

    [[noreturn]] void fail(const std::string& msg) const {
        throw std::invalid_argument(fmt::format("line {}: {}", line_no, msg));
    }

    int to_int(const std::string& tok) const {
        try {
            std::size_t pos = 0;
            int v = std::stoi(tok, &pos);
            if (pos != tok.size()) fail(fmt::format("bad integer '{}'", tok));
            return v;
        } catch (const std::invalid_argument&) {
            fail(fmt::format("bad integer '{}'", tok));
        } catch (const std::out_of_range&) {
            fail(fmt::format("integer '{}' out of range", tok));
        }
    }

    double to_double(const std::string& tok) const {
        try {
            std::size_t pos = 0;
            double v = std::stod(tok, &pos);
            if (pos != tok.size()) fail(fmt::format("bad number '{}'", tok));
            return v;
        } catch (const std::invalid_argument&) {
            fail(fmt::format("bad number '{}'", tok));
        } catch (const std::out_of_range&) {
            fail(fmt::format("number '{}' out of range", tok));
        }
    }

    cx to_cx(const std::string& tok) const {
        const auto comma = tok.find(',');
        if (comma == std::string::npos) fail(fmt::format("expected re,im pair, got '{}'", tok));
        return {to_double(tok.substr(0, comma)), to_double(tok.substr(comma + 1))};
    }
};

std::vector<std::string> split_ws(const std::string& line) {
    std::vector<std::string> toks;
    std::istringstream is(line);
    std::string t;
    while (is >> t) toks.push_back(std::move(t));
    return toks;
}

}  // namespace

Circuit parse_text(const std::string& text) {
    Circuit c;
    LineParser lp;
    std::istringstream stream(text);
    std::string line;
    bool in_ops = false;
    while (std::getline(stream, line)) {
        ++lp.line_no;
        const auto toks = split_ws(line);
        if (toks.empty()) continue;
        const std::string& head = toks[0];
        try {
            if (head == "wire") {
                if (in_ops || !c.ops().empty()) lp.fail("wire declared after operations");
                if (toks.size() != 4) lp.fail("wire line needs: wire <id> levels=<n> label=<name>");
                const int id = lp.to_int(toks[1]);
                if (id != c.wire_count())
                    lp.fail(fmt::format("wire ids must be consecutive, expected {}", c.wire_count()));
                if (toks[2].rfind("levels=", 0) != 0 || toks[3].rfind("label=", 0) != 0)
                    lp.fail("wire line needs: wire <id> levels=<n> label=<name>");
                c.add_wire(lp.to_int(toks[2].substr(7)), toks[3].substr(6));
            } else if (head == "creg") {
                if (in_ops) lp.fail("creg declared after operations");
                if (toks.size() != 3) lp.fail("creg line needs: creg <name> <width>");
                c.add_register(toks[1], lp.to_int(toks[2]));
            } else if (head == "x" || head == "h" || head == "reset") {
                if (toks.size() != 2) lp.fail(fmt::format("{} needs one wire", head));
                in_ops = true;
                const int w = lp.to_int(toks[1]);
                c.push(head == "x" ? Operation::x(w)
                                   : head == "h" ? Operation::h(w) : Operation::reset(w));
            } else if (head == "ry") {
                if (toks.size() != 3) lp.fail("ry needs: ry <wire> <angle>");
                in_ops = true;
                c.push(Operation::ry(lp.to_int(toks[1]), lp.to_double(toks[2])));
            } else if (head == "cphase") {
                if (toks.size() != 4) lp.fail("cphase needs: cphase <control> <target> <angle>");
                in_ops = true;
                c.push(Operation::cphase(lp.to_int(toks[1]), lp.to_int(toks[2]),
                                         lp.to_double(toks[3])));
            } else if (head == "cnot") {
                if (toks.size() != 3) lp.fail("cnot needs: cnot <control> <target>");
                in_ops = true;
                c.push(Operation::cnot(lp.to_int(toks[1]), lp.to_int(toks[2])));
            } else if (head == "cu") {
                if (toks.size() != 19) lp.fail("cu needs control, target, and 16 re,im entries");
                in_ops = true;
                std::array<cx, 16> m;
                for (int i = 0; i < 16; ++i) m[i] = lp.to_cx(toks[3 + i]);
                // The serialized matrix must be controlled: identity on the
                // control-0 block, zeros off the diagonal blocks.
                constexpr double tol = 1e-12;
                for (int i = 0; i < 16; ++i) {
                    const int r = i / 4, col = i % 4;
                    cx want{0.0};
                    if ((r < 2) != (col < 2)) {
                        want = cx{0.0};
                    } else if (r < 2) {
                        want = (r == col) ? cx{1.0} : cx{0.0};
                    } else {
                        continue;  // payload block
                    }
                    if (std::abs(m[i] - want) > tol)
                        lp.fail("cu matrix is not a controlled block matrix");
                }
                Mat2 u{{m[10], m[11], m[14], m[15]}};
                c.push(Operation::cu(lp.to_int(toks[1]), lp.to_int(toks[2]), u));
            } else if (head == "measure") {
                // measure <wire> -> <reg>[<bit>]
                if (toks.size() != 4 || toks[2] != "->") lp.fail("measure needs: measure <wire> -> <reg>[<bit>]");
                const std::string& dst = toks[3];
                const auto lb = dst.find('[');
                if (lb == std::string::npos || dst.back() != ']') lp.fail("bad measure destination");
                in_ops = true;
                c.push(Operation::measure(lp.to_int(toks[1]), dst.substr(0, lb),
                                          lp.to_int(dst.substr(lb + 1, dst.size() - lb - 2))));
            } else if (head == "barrier") {
                if (toks.size() != 1) lp.fail("barrier takes no arguments");
                in_ops = true;
                c.push(Operation::barrier());
            } else {
                lp.fail(fmt::format("unknown directive '{}'", head));
            }
        } catch (const std::invalid_argument& e) {
            std::string what = e.what();
            if (what.rfind("line ", 0) == 0) throw;
            lp.fail(what);
        }
    }
    return c;
}

bool approx_equal(const Circuit& a, const Circuit& b, double tol) {
    if (a.wires().size() != b.wires().size()) return false;
    for (std::size_t i = 0; i < a.wires().size(); ++i) {
        if (a.wires()[i].levels != b.wires()[i].levels) return false;
        if (a.wires()[i].label != b.wires()[i].label) return false;
    }
    if (a.registers().size() != b.registers().size()) return false;
    for (std::size_t i = 0; i < a.registers().size(); ++i) {
        if (a.registers()[i].name != b.registers()[i].name) return false;
        if (a.registers()[i].width != b.registers()[i].width) return false;
    }
    if (a.ops().size() != b.ops().size()) return false;
    for (std::size_t i = 0; i < a.ops().size(); ++i) {
        const Operation& x = a.ops()[i];
        const Operation& y = b.ops()[i];
        if (x.kind != y.kind || x.wires != y.wires || x.reg != y.reg || x.bit != y.bit)
            return false;
        if (std::abs(x.angle - y.angle) > tol) return false;
        if (x.kind == OpKind::GateCU) {
            for (int k = 0; k < 4; ++k) {
                if (std::abs(x.unitary.a[k] - y.unitary.a[k]) > tol) return false;
            }
        }
    }
    return true;
}

}  // namespace hhlsim
