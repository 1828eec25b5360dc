#include <cmath>
#include <random>

#include "doctest.h"
#include "kanto/group_model.hpp"

using namespace kanto;

TEST_CASE("haar measure of intervals, log-intervals, boxes and lattices") {
    CHECK(haar_measure(Cell(GroupSpace::real_line(), 0.0, 3.0)) == doctest::Approx(3.0));
    CHECK(haar_measure(Cell(GroupSpace::real_space(2), {0.0, 0.0}, {1.0, 2.0})) ==
          doctest::Approx(2.0));
    CHECK(haar_measure(Cell(GroupSpace::positive_reals(), 1.0, std::exp(1.0))) ==
          doctest::Approx(1.0).epsilon(1e-12));
    CHECK(haar_measure(Cell(GroupSpace::integer_lattice(), -1.2, 2.7)) == doctest::Approx(4.0));

    // Mellin cell [t w/(w+1), t (w+1)/w] has log measure 2 ln((w+1)/w),
    // independently of the anchor.
    const double w = 5.0;
    for (double t : {0.5, 2.0, 7.0}) {
        const Cell c = CellFamily::mellin().cell(w, t);
        CHECK(haar_measure(c) == doctest::Approx(2.0 * std::log(1.2)).epsilon(1e-12));
    }
}

TEST_CASE("degenerate cells are rejected") {
    CHECK_THROWS_AS(Cell(GroupSpace::real_line(), 1.0, 1.0), InvalidInput);
    CHECK_THROWS_AS(Cell(GroupSpace::real_line(), 2.0, 1.0), InvalidInput);
    CHECK_THROWS_AS(Cell(GroupSpace::positive_reals(), 0.0, 1.0), InvalidInput);
    CHECK_THROWS_AS(Cell(GroupSpace::positive_reals(), -1.0, 1.0), InvalidInput);
}

TEST_CASE("concrete cells of each family") {
    const auto sampling = CellFamily::sampling();
    const Cell c1 = sampling.cell(10.0, 3L);
    CHECK(c1.lo[0] == doctest::Approx(0.3));
    CHECK(c1.hi[0] == doctest::Approx(0.4));

    const Cell c2 = CellFamily::mellin().cell(5.0, 2.0);
    CHECK(c2.lo[0] == doctest::Approx(5.0 / 3.0));
    CHECK(c2.hi[0] == doctest::Approx(12.0 / 5.0));

    const Cell c3 = CellFamily::conv_unit().cell(4.0, 0.0);
    CHECK(c3.lo[0] == doctest::Approx(-0.25));
    CHECK(c3.hi[0] == doctest::Approx(0.25));
}

TEST_CASE("upsilon closed forms") {
    CHECK(upsilon(CellFamily::conv_scaled(), 10.0, {3.0}) == doctest::Approx(60.0));
    CHECK(upsilon(CellFamily::conv_unit(), 7.0, {3.0}) == doctest::Approx(6.0));
    CHECK(upsilon(CellFamily::mellin(), 12.0, {std::exp(2.0)}) ==
          doctest::Approx(4.0).epsilon(1e-12));
    // Lattice count: anchors k/10 within [-1, 1] -> k in [-10, 10].
    CHECK(upsilon(CellFamily::sampling(), 10.0, {1.0}) == doctest::Approx(21.0));
}

TEST_CASE("anchors lie inside their cells") {
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> pick_w(1.0, 64.0);
    std::uniform_real_distribution<double> pick_t(-20.0, 20.0);
    const auto families = {CellFamily::conv_scaled(), CellFamily::conv_unit()};
    for (const auto& fam : families) {
        for (int i = 0; i < 100; ++i) {
            const double w = pick_w(rng), t = pick_t(rng);
            const Cell c = fam.cell(w, t);
            const double h = fam.anchor(w, t);
            CHECK(h >= c.lo[0]);
            CHECK(h <= c.hi[0]);
        }
    }
    const auto mellin = CellFamily::mellin();
    for (int i = 0; i < 100; ++i) {
        const double w = pick_w(rng), t = std::exp(0.2 * pick_t(rng));
        const Cell c = mellin.cell(w, t);
        CHECK(mellin.anchor(w, t) >= c.lo[0]);
        CHECK(mellin.anchor(w, t) <= c.hi[0]);
    }
    const auto disc = CellFamily::sampling(SampleSequence::perturbed());
    for (long k = -50; k <= 50; ++k) {
        const Cell c = disc.cell(9.0, k);
        CHECK(disc.anchor(9.0, k) >= c.lo[0]);
        CHECK(disc.anchor(9.0, k) <= c.hi[0]);
    }
}

TEST_CASE("cells localize around anchors as w grows") {
    const std::vector<double> anchors = {-3.0, -0.5, 0.0, 1.0, 4.0};
    const std::vector<double> mellin_anchors = {0.25, 1.0, 3.0};
    const std::vector<long> lattice = {-5, 0, 3};
    for (const auto& fam : {CellFamily::conv_scaled(), CellFamily::conv_unit()}) {
        double prev = 1e300;
        for (double w = 1.0; w <= 256.0; w *= 2.0) {
            const double spread = anchor_spread(fam, w, anchors);
            CHECK(spread <= prev + 1e-15);
            prev = spread;
        }
        CHECK(prev < 1e-2);
    }
    double prev = 1e300;
    for (double w = 1.0; w <= 256.0; w *= 2.0) {
        const double spread = anchor_spread(CellFamily::mellin(), w, mellin_anchors);
        CHECK(spread <= prev + 1e-15);
        prev = spread;
    }
    CHECK(prev < 1e-2);
    prev = 1e300;
    for (double w = 1.0; w <= 256.0; w *= 2.0) {
        const double spread = anchor_spread_discrete(CellFamily::sampling(), w, lattice);
        CHECK(spread <= prev + 1e-15);
        prev = spread;
    }
    CHECK(prev < 1e-2);
}

TEST_CASE("sample sequences respect their spacing bounds") {
    const auto uni = SampleSequence::uniform();
    const auto per = SampleSequence::perturbed();
    for (long k = -100; k < 100; ++k) {
        CHECK(uni.point(k + 1) - uni.point(k) == doctest::Approx(1.0));
        const double gap = per.point(k + 1) - per.point(k);
        CHECK(gap >= per.delta);
        CHECK(gap <= per.big_delta);
    }
}

TEST_CASE("haar measure is additive over adjacent cells") {
    const GroupSpace line = GroupSpace::real_line();
    const GroupSpace rp = GroupSpace::positive_reals();
    CHECK(haar_measure(Cell(line, 0.0, 1.0)) + haar_measure(Cell(line, 1.0, 2.5)) ==
          doctest::Approx(haar_measure(Cell(line, 0.0, 2.5))).epsilon(1e-12));
    CHECK(haar_measure(Cell(rp, 0.5, 2.0)) + haar_measure(Cell(rp, 2.0, 9.0)) ==
          doctest::Approx(haar_measure(Cell(rp, 0.5, 9.0))).epsilon(1e-12));
}

TEST_CASE("scaled symmetric sampling matches the classical-sampling setup") {
    const auto fam = CellFamily::sampling_symmetric_scaled();
    CHECK(fam.anchor(5.0, 3L) == doctest::Approx(0.6));
    const Cell c = fam.cell(5.0, 3L);
    CHECK(c.lo[0] == doctest::Approx(0.4));
    CHECK(c.hi[0] == doctest::Approx(0.8));
}
