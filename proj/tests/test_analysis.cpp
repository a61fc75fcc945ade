#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "oracles.hpp"
#include "xyq/analysis.hpp"

using namespace xyq;
using Catch::Approx;

TEST_CASE("collapse detection", "[analysis]") {
    SECTION("the t=1 collapse field, pinned as a regression fixture") {
        const auto ac = find_collapse(1.0, 0.5, 0.0, 3.0);
        REQUIRE(ac.has_value());
        CHECK(*ac == Approx(0.753398).margin(1e-3));
    }
    SECTION("refinement brackets the transition to one part in 1e4") {
        for (double t : {1.0, 3.0}) {
            const auto ac = find_collapse(t, 0.5, 0.0, 5.0);
            REQUIRE(ac.has_value());
            const double before =
                log_negativity(build_state(correlator_set({0.5, *ac - 1e-4, t})));
            const double after =
                log_negativity(build_state(correlator_set({0.5, *ac + 1e-4, t})));
            CHECK(before > 0.0);
            CHECK(after == 0.0);
        }
    }
    SECTION("an all-zero window yields no collapse") {
        // beyond the t=3 collapse LN is identically zero
        CHECK_FALSE(find_collapse(3.0, 0.5, 1.5, 3.0).has_value());
    }
    SECTION("a positive window with no transition yields no collapse") {
        CHECK_FALSE(find_collapse(0.5, 0.5, 1.5, 3.0).has_value());
    }
    SECTION("narrow early-time windows are still resolved") {
        const auto ac = find_collapse(0.5, 0.5, 0.0, 3.0);
        REQUIRE(ac.has_value());
        CHECK(*ac == Approx(0.7917).margin(2e-3));
    }
}

TEST_CASE("revival detection", "[analysis]") {
    SECTION("t=1 revives") {
        const auto r = find_revival(1.0, 0.5, 0.7534, 20.0);
        CHECK(r.revived);
        CHECK(r.max_ln > 0.3);
        REQUIRE(r.a_peak.has_value());
        CHECK(*r.a_peak > 1.0);
    }
    SECTION("t=3 does not revive") {
        const auto r = find_revival(3.0, 0.5, 0.8053, 20.0);
        CHECK_FALSE(r.revived);
        CHECK(r.max_ln == 0.0);
        CHECK_FALSE(r.a_peak.has_value());
    }
    SECTION("t=4 revives weakly") {
        const auto r = find_revival(4.0, 0.5, 0.6961, 20.0);
        CHECK(r.revived);
        CHECK(r.max_ln > 1e-4);
        CHECK(r.max_ln < 0.05);
    }
}

TEST_CASE("discord slope at the collapse field", "[analysis]") {
    SECTION("positive before the first crossing") {
        const auto ac = find_collapse(1.0, 0.5, 0.0, 3.0);
        REQUIRE(ac.has_value());
        CHECK(discord_slope(1.0, 0.5, *ac) > 0.0);
    }
    SECTION("negative between the crossings") {
        const auto ac = find_collapse(3.0, 0.5, 0.0, 3.0);
        REQUIRE(ac.has_value());
        CHECK(discord_slope(3.0, 0.5, *ac) < 0.0);
    }
    SECTION("odd under field reflection") {
        const auto ac = find_collapse(1.0, 0.5, 0.0, 3.0);
        REQUIRE(ac.has_value());
        const double plus = discord_slope(1.0, 0.5, *ac);
        const double minus = discord_slope(1.0, 0.5, -*ac);
        CHECK(minus == Approx(-plus).margin(1e-4));
        CHECK(plus * minus < 0.0);
    }
}

TEST_CASE("the revival predicate is a sign rule", "[analysis]") {
    CHECK(revival_predicate(1.5, 0.2));
    CHECK_FALSE(revival_predicate(1.5, -0.2));
    CHECK(revival_predicate(-1.5, -0.2));
    CHECK_FALSE(revival_predicate(-1.5, 0.2));

    CollapseRevivalRecord rec;
    rec.a_c = 1.5;
    rec.slope = 0.2;
    CHECK(revival_predicate(rec));
    rec.slope.reset();
    CHECK_THROWS_AS(revival_predicate(rec), std::invalid_argument);
}

TEST_CASE("collapse-revival records", "[analysis]") {
    SECTION("a reviving time concords") {
        const auto rec = collapse_revival_record(1.0, 0.5);
        REQUIRE(rec.has_value());
        CHECK(rec->revived);
        CHECK(rec->predicate_holds);
        CHECK_FALSE(rec->exceptional_near_qpt);
        CHECK(*rec->a_c == Approx(0.7534).margin(1e-3));
    }
    SECTION("a non-reviving time concords") {
        const auto rec = collapse_revival_record(3.5, 0.5);
        REQUIRE(rec.has_value());
        CHECK_FALSE(rec->revived);
        CHECK_FALSE(rec->predicate_holds);
        CHECK_FALSE(rec->exceptional_near_qpt);
    }
    SECTION("near-critical collapse fields are flagged") {
        const auto rec = collapse_revival_record(2.0, 0.5);
        REQUIRE(rec.has_value());
        CHECK(rec->exceptional_near_qpt);
    }
    SECTION("an empty window produces no records") {
        ScanOptions sopts;
        sopts.window_lo = 1.5;
        sopts.window_hi = 2.0;
        const auto scan = derivative_scan({0.5}, 0.5, {}, {}, sopts);
        CHECK(scan.records.empty());
        CHECK(scan.errors.empty());
    }
}

TEST_CASE("field profiles", "[analysis]") {
    MeasureFlags flags;
    flags.ln = true;
    flags.discord = true;
    SECTION("stationary at zero field") {
        const auto p0 = field_profile(0.0, 0.5, {0.0}, flags);
        const auto p5 = field_profile(5.0, 0.5, {0.0}, flags);
        CHECK(*p0[0].ln == Approx(*p5[0].ln).margin(1e-8));
        CHECK(*p0[0].discord == Approx(*p5[0].discord).margin(1e-6));
    }
    SECTION("polarized limit kills both measures") {
        const auto p = field_profile(0.0, 0.5, {1e3}, flags);
        CHECK(*p[0].ln < 1e-2);
        CHECK(*p[0].discord < 1e-2);
    }
    SECTION("profile through the t=1 collapse and revival") {
        const auto pts = field_profile(1.0, 0.5, linspace(0.0, 3.0, 31), flags);
        bool was_positive = false, hit_zero_after_positive = false, revived = false;
        for (const auto& pt : pts) {
            if (*pt.ln > 0.0 && !hit_zero_after_positive) was_positive = true;
            if (*pt.ln == 0.0 && was_positive) hit_zero_after_positive = true;
            if (*pt.ln > 1e-4 && hit_zero_after_positive) revived = true;
        }
        CHECK(was_positive);
        CHECK(hit_zero_after_positive);
        CHECK(revived);
    }
    SECTION("failures are tagged with the field value") {
        QuadratureSpec starved;
        starved.max_subdivisions = 1;
        starved.base_order = 64;
        try {
            field_profile(400.0, 0.5, {0.0, 2.0}, flags, starved);
            FAIL("expected EvaluationError");
        } catch (const EvaluationError& e) {
            CHECK(e.a_tilde() == Approx(2.0));
            CHECK(std::string(e.what()).find("a_tilde=2") != std::string::npos);
        }
    }
    SECTION("unrequested measures stay absent") {
        MeasureFlags only_mi;
        only_mi.mi = true;
        const auto pts = field_profile(1.0, 0.5, {1.0}, only_mi);
        CHECK_FALSE(pts[0].ln.has_value());
        CHECK_FALSE(pts[0].discord.has_value());
        CHECK_FALSE(pts[0].deficit.has_value());
        CHECK(pts[0].mutual_info.has_value());
    }
}

TEST_CASE("reflection symmetry of the measures", "[analysis]") {
    MeasureFlags flags;
    flags.ln = true;
    flags.discord = true;
    for (double a : {0.6, 1.3, 2.5})
        for (double t : {0.8, 2.0}) {
            const auto plus = evaluate_point(0.5, a, t, flags);
            const auto minus = evaluate_point(0.5, -a, t, flags);
            CHECK(*plus.ln == Approx(*minus.ln).margin(1e-9));
            CHECK(*plus.discord == Approx(*minus.discord).margin(1e-6));
        }
}

TEST_CASE("grid sweeps", "[analysis]") {
    MeasureFlags flags;
    flags.ln = true;
    SECTION("toy grid layout and stationarity column") {
        SweepGrid grid;
        grid.a_min = 0.0;
        grid.a_max = 2.0;
        grid.a_steps = 3;
        grid.t_min = 0.0;
        grid.t_max = 2.0;
        grid.t_steps = 3;
        grid.gamma = 0.5;
        const auto ds = grid_sweep(grid, flags);
        REQUIRE(ds.cells.size() == 9);
        CHECK(ds.a_values == std::vector<double>{0.0, 1.0, 2.0});
        // zero-field column is time independent
        const double base = *ds.cells[0].point.ln;
        CHECK(*ds.cells[3].point.ln == Approx(base).margin(1e-8));
        CHECK(*ds.cells[6].point.ln == Approx(base).margin(1e-8));
        // row-major order: index = it * na + ia
        CHECK(ds.cells[5].point.a_tilde == Approx(2.0));
        CHECK(ds.cells[5].point.t_tilde == Approx(1.0));
    }
    SECTION("deterministic across worker counts") {
        SweepGrid grid;
        grid.a_min = 0.0;
        grid.a_max = 3.0;
        grid.a_steps = 4;
        grid.t_min = 0.0;
        grid.t_max = 2.0;
        grid.t_steps = 2;
        const auto one = grid_sweep(grid, flags, {}, {}, 1);
        const auto four = grid_sweep(grid, flags, {}, {}, 4);
        REQUIRE(one.cells.size() == four.cells.size());
        for (std::size_t i = 0; i < one.cells.size(); ++i) {
            CHECK(*one.cells[i].point.ln == *four.cells[i].point.ln); // bitwise
            CHECK(one.cells[i].point.min_eigenvalue == four.cells[i].point.min_eigenvalue);
        }
    }
    SECTION("per-cell errors are tagged, not thrown") {
        QuadratureSpec starved;
        starved.max_subdivisions = 1;
        starved.base_order = 64;
        SweepGrid grid;
        grid.a_min = 0.0;
        grid.a_max = 2.0;
        grid.a_steps = 2;
        grid.t_min = 0.0;
        grid.t_max = 400.0;
        grid.t_steps = 2;
        const auto ds = grid_sweep(grid, flags, starved);
        REQUIRE(ds.cells.size() == 4);
        CHECK_FALSE(ds.cells[0].error.has_value()); // a=0, t=0 integrates trivially
        bool any_error = false;
        for (const auto& c : ds.cells) any_error = any_error || c.error.has_value();
        CHECK(any_error);
    }
    SECTION("grid validation") {
        SweepGrid bad;
        bad.a_min = 2.0;
        bad.a_max = 1.0;
        CHECK_THROWS_AS(grid_sweep(bad, flags), std::invalid_argument);
    }
}

TEST_CASE("derivative scan collects records and errors", "[analysis]") {
    const auto scan = derivative_scan({1.0, 3.5}, 0.5);
    REQUIRE(scan.records.size() == 2);
    CHECK(scan.errors.empty());
    CHECK(scan.records[0].t_tilde == Approx(1.0));
    CHECK(scan.records[0].predicate_holds);
    CHECK(scan.records[0].revived);
    CHECK(scan.records[1].t_tilde == Approx(3.5));
    CHECK_FALSE(scan.records[1].predicate_holds);
    CHECK_FALSE(scan.records[1].revived);

    SECTION("a failing time is collected, not thrown") {
        QuadratureSpec starved;
        starved.max_subdivisions = 4; // enough for t=1, not for the t=400 oscillation
        const auto broken = derivative_scan({400.0, 1.0}, 0.5, starved);
        REQUIRE(broken.errors.size() == 1);
        CHECK(broken.errors[0].t_tilde == Approx(400.0));
        CHECK(broken.errors[0].message.find("integrate_bz") != std::string::npos);
        REQUIRE(broken.records.size() == 1);
        CHECK(broken.records[0].t_tilde == Approx(1.0));
    }
}
