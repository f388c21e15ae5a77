#include "spdelab/grid.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <stdexcept>

using namespace spdelab;

TEST(UniformGrid, NodesAndSpacing) {
    UniformGrid g(8);
    EXPECT_EQ(g.nodes(), 9u);
    EXPECT_EQ(g.interior_nodes(), 7u);
    EXPECT_DOUBLE_EQ(g.spacing(), 0.125);
    EXPECT_DOUBLE_EQ(g.node(4), 0.5);
    EXPECT_THROW(UniformGrid(1), std::invalid_argument);
}

TEST(GridFunction, BoundaryIsPinned) {
    EXPECT_THROW(GridFunction(std::vector<double>{1.0, 2.0, 0.0}), std::invalid_argument);
    EXPECT_THROW(GridFunction(std::vector<double>{0.0, 2.0, 1e-300}), std::invalid_argument);
    const auto u = GridFunction::sample(4, [](double) { return 3.0; });
    EXPECT_EQ(u[0], 0.0);
    EXPECT_EQ(u[4], 0.0);
    EXPECT_EQ(u[2], 3.0);
    EXPECT_EQ(u.interior().size(), 3u);
}

TEST(GridFunction, Arithmetic) {
    auto u = GridFunction::sample(4, [](double x) { return x; });
    const auto v = GridFunction::sample(4, [](double x) { return -2.0 * x; });
    const auto w = u + v;
    EXPECT_DOUBLE_EQ(w[1], -0.25);
    EXPECT_DOUBLE_EQ((2.0 * u)[3], 1.5);
    EXPECT_DOUBLE_EQ(w.sup_norm(), 0.75);
    EXPECT_DOUBLE_EQ(w.min_value(), -0.75);
    EXPECT_THROW(u += GridFunction(8), std::invalid_argument);
}

TEST(Trapezoid, ParabolaIntegral) {
    const auto u = GridFunction::sample(1024, [](double x) { return x * (1.0 - x); });
    EXPECT_NEAR(trapezoid(u.values()), 1.0 / 6.0, 1e-6);
    EXPECT_NEAR(trapezoid_inner(u.values(), u.values()), 1.0 / 30.0, 1e-6);
}
