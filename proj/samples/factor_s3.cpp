// The fiber over b = (1,1,0), lambda = 0 for S3 at c = 1: dimensions of both
// sides, the W-character of He and the induced character, and the suite verdicts.

#include "cmfactor/bemorphism.hpp"

#include <iostream>

using namespace cmfactor;

int main() {
    Instance inst;
    inst.group = "S3";
    inst.b = {CycScalar(1), CycScalar(1), CycScalar(0)};
    inst.c = {CycScalar(1)};
    inst.lambda = std::vector<CycScalar>(3, CycScalar(0));

    auto F = make_fiber_comparison(inst);
    std::size_t m = F->centralizer().index();
    std::cout << "W_b = " << F->centralizer().subgroup().group.label() << ", index " << m << "\n";
    std::cout << "dim source = " << F->source().dim() << ", dim target = " << m << "^2 * " << F->target().dim() << "\n";

    for (const auto& rep : {quotient_iso_check(inst, *F), phi_check(inst, *F), verify_factorization(inst, *F)}) {
        std::cout << rep.summary();
        if (!rep.records().empty()) std::cout << "  records: " << rep.records().dump() << "\n";
    }
}
