// Prints the images of x_1 and y_1 under theta for S2 at b = (1,-1), c = 1,
// truncated at x-degree 3. The stabilizer is trivial, so the image is a 2 x 2
// matrix over C[x, y].

#include "cmfactor/bemorphism.hpp"

#include <iostream>

using namespace cmfactor;

int main() {
    auto W = std::make_shared<ReflectionGroup>(build_group("S2"));
    std::vector<CycScalar> b{CycScalar(1), CycScalar(-1)};
    auto th = ThetaMap::series(W, resolve_c(*W, {CycScalar(1)}), b, 3);

    std::cout << "W_b = " << th.stabilizer().group.label() << ", index " << th.index() << "\n";
    auto show = [&](const char* name, const ThetaImage& M) {
        std::cout << name << ":\n";
        for (std::size_t k = 0; k < M.m; ++k)
            for (std::size_t l = 0; l < M.m; ++l) std::cout << "  (" << k + 1 << "," << l + 1 << ") " << M.at(k, l).str() << "\n";
    };
    show("theta(x1)", th.theta_x(unit_vec(2, 0)));
    show("theta(y1)", th.theta_y(unit_vec(2, 0)));
}
