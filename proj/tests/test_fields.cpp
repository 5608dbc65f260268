#include "pcalc/errors.hpp"
#include "pcalc/fields.hpp"
#include "support.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace pcalc;

namespace {

nlohmann::json params_for(const std::string& name) {
    if (name == "transversal") return {{"N", 2}, {"f", {{"kind", "bump"}, {"center", 0.1}, {"radius", 1.5}}}};
    if (name == "constant") return {{"v", {0.6, -0.8}}};
    return nlohmann::json::object();
}

}  // namespace

TEST(Catalog, RadialHasUnitAtom) {
    FieldND f = catalog("radial", {{"N", 2}});
    ASSERT_EQ(f.div.atoms().size(), 1u);
    EXPECT_EQ(f.div.atoms()[0].w, Real(1));
    EXPECT_EQ(f.div.atoms()[0].x, (std::vector<double>{0, 0}));
    EXPECT_TRUE(f.div.parts().empty());
    EXPECT_FALSE(f.bounded());
    auto a = f.density({1e-4, 0});
    EXPECT_GT(a[0], 1e3);
}

TEST(Catalog, ConstantIsDivergenceFree) {
    FieldND f = catalog("constant", {{"v", {1, 0}}});
    EXPECT_TRUE(f.div.is_zero());
    EXPECT_TRUE(f.bounded());
    EXPECT_EQ(f.sup_norm(Box::cube(2, -1, 1)), 1.0);
}

TEST(Catalog, HeavisideDivergenceIsFace) {
    FieldND f = catalog("heaviside", {{"N", 2}});
    EXPECT_TRUE(f.div.atoms().empty());
    auto faces = f.div.faces();
    ASSERT_EQ(faces.size(), 1u);
    EXPECT_EQ(faces[0].box.lo[0], 0.0);
    EXPECT_EQ(faces[0].box.hi[0], 0.0);
    EXPECT_TRUE(faces[0].density.is_constant());
    EXPECT_EQ(faces[0].density.constant_part(), 1);
}

TEST(Catalog, Errors) {
    EXPECT_THROW(catalog("no-such-field"), UnknownEntry);
    EXPECT_THROW(catalog("radial", {{"N", 1}}), BadParams);
    EXPECT_THROW(catalog("radial", {{"N", 9}}), BadParams);
    EXPECT_THROW(catalog("constant", {{"v", {1, 0}}, {"N", 3}}), BadParams);
}

TEST(Catalog, UnitBallVolumes) {
    EXPECT_DOUBLE_EQ(unit_ball_volume(1), 2.0);
    EXPECT_DOUBLE_EQ(unit_ball_volume(2), M_PI);
    EXPECT_NEAR(unit_ball_volume(3), 4.0 * M_PI / 3.0, 1e-15);
    EXPECT_NEAR(unit_ball_volume(4), M_PI * M_PI / 2.0, 1e-14);
}

TEST(DivergenceSelftest, Radial2DAtOrigin) {
    FieldND f = catalog("radial", {{"N", 2}});
    EXPECT_LE(divergence_selftest(f, TestFunction::bump({0, 0}, 0.5)), 1e-8);
}

TEST(DivergenceSelftest, ConstantField) {
    FieldND f = catalog("constant", {{"v", {0.3, 2.0}}});
    EXPECT_LE(divergence_selftest(f, TestFunction::bump({0.2, -0.1}, 0.7)), 1e-12);
}

TEST(DivergenceSelftest, Heaviside) {
    FieldND f = catalog("heaviside", {{"N", 2}});
    EXPECT_LE(divergence_selftest(f, TestFunction::bump({0.1, 0.0}, 0.5)), 1e-10);
}

TEST(DivergenceSelftestProperty, EveryEntryRandomBumps) {
    auto g = testing_support::rng(21);
    std::uniform_real_distribution<double> c(-0.4, 0.4), r(0.2, 0.5);
    for (const auto& name : catalog_names()) {
        FieldND f = catalog(name, params_for(name));
        for (int i = 0; i < 5; ++i) {
            std::vector<double> center(f.dim);
            for (auto& v : center) v = c(g);
            double radius = r(g);
            EXPECT_LE(divergence_selftest(f, TestFunction::bump(center, radius)), 1e-8)
                << name << " bump " << center[0] << "," << center[1] << " r=" << radius;
        }
    }
}

TEST(DivergenceSelftestProperty, Radial3D) {
    FieldND f = catalog("radial", {{"N", 3}});
    EXPECT_LE(divergence_selftest(f, TestFunction::bump({0.1, -0.05, 0.0}, 0.4)), 1e-8);
}

TEST(CatalogProperty, DivergenceSupportInsideFieldSupport) {
    // |A| does not vanish identically near any part of div A
    for (const auto& name : catalog_names()) {
        FieldND f = catalog(name, params_for(name));
        std::vector<std::vector<double>> probes;
        for (const auto& a : f.div.atoms()) probes.push_back(a.x);
        for (const auto& p : f.div.parts()) probes.push_back(p.box.intersect(Box::cube(f.dim, -0.5, 0.5)).center());
        for (const auto& x : probes) {
            double best = 0;
            for (int k = 0; k < f.dim; ++k)
                for (double s : {-1e-3, 1e-3}) {
                    auto y = x;
                    y[k] += s;
                    if (f.density) {
                        auto a = f.density(y);
                        double n = 0;
                        for (double v : a) n += v * v;
                        best = std::max(best, std::sqrt(n));
                    }
                }
            for (const auto& s : f.segments) {
                bool on = x[s.axis] >= s.lo && x[s.axis] <= s.hi;
                for (int k = 0; k < f.dim; ++k)
                    if (k != s.axis && std::fabs(x[k] - s.base[k]) > 1e-2) on = false;
                if (on) best = std::max(best, 1.0);
            }
            EXPECT_GT(best, 0.0) << name;
        }
    }
}

TEST(Staircase, SetWidths) {
    EXPECT_EQ(staircase_width(0), 1.0);
    EXPECT_DOUBLE_EQ(staircase_width(1), 2.0);
    EXPECT_DOUBLE_EQ(staircase_width(2), 1.5);
    EXPECT_NEAR(staircase_width(200), 1.0 + std::log(2.0), 5e-3);
    BoxSet s = staircase_set(2, 3);
    EXPECT_EQ(s.boxes().size(), 4u);
}
