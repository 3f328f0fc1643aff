// Compares the parallel shot sampler against the serial reference on the
// hardened circuit and checks that both produce the same histogram.
#include <fmt/format.h>

#include <chrono>
#include <cstdlib>
#include <string>

#include "hhlsim/defense.hpp"
#include "hhlsim/engine.hpp"
#include "hhlsim/harness.hpp"

int main(int argc, char** argv) {
    using namespace hhlsim;
    std::uint64_t shots = 20000;
    std::uint64_t seed = kDefaultSeed;
    if (argc > 1) shots = std::strtoull(argv[1], nullptr, 10);
    if (argc > 2) seed = std::strtoull(argv[2], nullptr, 10);

    const HhlParams params;
    const Circuit circuit = build_secure_hhl(params);
    const std::vector<int> levels(circuit.wires().size(), 0);
    const NoiseConfig noise{0.01, 0.01};

    const auto time_run = [&](auto&& fn, const char* name) {
        const auto t0 = std::chrono::steady_clock::now();
        CountsHistogram hist = fn();
        const double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        fmt::print("{:>8}: {} shots in {:.3f} s ({:.0f} shots/s)\n", name, shots, dt,
                   static_cast<double>(shots) / dt);
        return std::pair<CountsHistogram, double>{std::move(hist), dt};
    };

    auto [serial, serial_dt] =
        time_run([&] { return run_shots_serial(circuit, levels, shots, seed, noise); }, "serial");
    auto [parallel, parallel_dt] =
        time_run([&] { return run_shots(circuit, levels, shots, seed, noise); }, "parallel");

    if (serial.counts != parallel.counts || serial.total != parallel.total) {
        fmt::print(stderr, "histograms differ between serial and parallel samplers\n");
        return 1;
    }
    fmt::print("histograms identical; speedup {:.2f}x\n", serial_dt / parallel_dt);
    return 0;
}
