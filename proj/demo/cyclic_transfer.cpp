// One clockwise loop |0> -> |e> -> |1> -> |0>, printed every T/2.
#include <cstdio>

#include "nhqc/nhqc.hpp"

int main() {
    nhqc::ScenarioConfig c;
    c.id = nhqc::ScenarioId::cyclic_cw;
    c.loops = 1;
    const nhqc::RunReport r = nhqc::run_cyclic(c);
    const auto& tr = r.trajectory;
    std::printf("%6s %12s %12s %12s %12s\n", "t/T", "P0", "P1", "Pe", "total");
    for (std::size_t i = 0; i < tr.size(); i += 1000)
        std::printf("%6.2f %12.8f %12.8f %12.8f %12.8f\n", tr.grid.at(i) / c.T, tr.populations[0][i],
                    tr.populations[1][i], tr.populations[2][i], tr.total_norm[i]);
    return r.passed() ? 0 : 1;
}
