#pragma once

#include <array>
#include <complex>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace hhlsim {

using cx = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846;

/// 2x2 complex matrix, row-major {a00, a01, a10, a11}. Defaults to identity.
struct Mat2 {
    std::array<cx, 4> a{cx{1.0}, cx{0.0}, cx{0.0}, cx{1.0}};

    static Mat2 identity() { return {}; }
    Mat2 dagger() const;
    Mat2 operator*(const Mat2& o) const;
    bool is_unitary(double tol = 1e-10) const;
};

enum class OpKind {
    GateX,
    GateH,
    GateRy,
    GateCPhase,
    GateCnot,
    GateCU,
    Measure,
    Reset,
    Barrier,
};

bool is_gate(OpKind k);
int op_arity(OpKind k);
const char* op_name(OpKind k);

/// One instruction. For two-wire gates wires[0] is the control and wires[1]
/// the target; CPhase is symmetric but stored the same way.
struct Operation {
    OpKind kind = OpKind::Barrier;
    std::vector<int> wires;
    double angle = 0.0;  // GateRy, GateCPhase
    Mat2 unitary;        // GateCU payload (the controlled 2x2 block)
    std::string reg;     // Measure destination register
    int bit = 0;         // Measure destination bit

    static Operation x(int w);
    static Operation h(int w);
    static Operation ry(int w, double theta);
    static Operation cphase(int control, int target, double theta);
    static Operation cnot(int control, int target);
    static Operation cu(int control, int target, const Mat2& u);
    static Operation measure(int w, std::string reg, int bit);
    static Operation reset(int w);
    static Operation barrier();
};

struct Wire {
    int levels = 2;  // 2 or 3; level 2 is the leakage level
    std::string label;
};

struct ClassicalRegister {
    std::string name;
    int width = 0;
};

/// Ordered operation list over mixed two- and three-level wires.
/// Wire 0 is the least significant digit of a basis index.
class Circuit {
public:
    /// Adds a wire and returns its id. levels must be 2 or 3; labels are
    /// unique, nonempty, and contain no whitespace.
    int add_wire(int levels, std::string label);

    /// Declares a classical register. Readout strings concatenate registers
    /// in declaration order, bit 0 first within each register.
    void add_register(std::string name, int width);

    /// Appends one validated operation.
    void push(Operation op);
    void push_all(const std::vector<Operation>& ops);

    const std::vector<Wire>& wires() const { return wires_; }
    const std::vector<ClassicalRegister>& registers() const { return regs_; }
    const std::vector<Operation>& ops() const { return ops_; }

    int wire_count() const { return static_cast<int>(wires_.size()); }
    std::int64_t dim() const;

    std::optional<int> find_wire(const std::string& label) const;
    int wire(const std::string& label) const;  // errors when absent
    const ClassicalRegister* find_register(const std::string& name) const;

    /// Total readout width (sum of register widths).
    int readout_width() const;
    /// Character position of reg[bit] within a readout string.
    int readout_position(const std::string& reg, int bit) const;

private:
    std::vector<Wire> wires_;
    std::vector<ClassicalRegister> regs_;
    std::vector<Operation> ops_;
};

/// Inverse of a single gate operation; errors on Measure and Reset.
Operation inverted_op(const Operation& op);

/// Reversed circuit with each gate inverted; wires and registers carry over.
/// Errors if the segment contains Measure or Reset.
Circuit inverted(const Circuit& segment);

/// Plain-text serialization of wires, registers, and operations.
std::string dump_text(const Circuit& c);

/// Inverse of dump_text; errors cite the offending line. dump_text of the
/// parsed circuit reproduces the input bytes exactly.
Circuit parse_text(const std::string& text);

/// Structural equality with elementwise tolerance on angles and unitaries.
bool approx_equal(const Circuit& a, const Circuit& b, double tol = 1e-9);

}  // namespace hhlsim
