#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "conic/choquet.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

using namespace conic;

namespace {

const Date kVal(2020, 2, 13);

CdsContract contract(const char* tenor, double coupon = 0.01, double lgd = 0.6) {
    return CdsContract(build_schedule(kVal, tenor_maturity(kVal, tenor)), coupon, lgd);
}

DeferredPayoff payoff_of(std::vector<double> values) {
    return DeferredPayoff{std::move(values), Leg::Net};
}

std::vector<double> random_masses(std::mt19937& rng, std::size_t n) {
    std::uniform_real_distribution<double> u(0.01, 1.0);
    std::vector<double> m(n);
    double sum = 0.0;
    for (double& v : m) {
        v = u(rng);
        sum += v;
    }
    for (double& v : m) v /= sum;
    return m;
}

// Direct evaluation of the distorted expectation from its layer-cake form:
// integrate the distorted tail probability of {X >= t} over positive levels
// and (that weight - 1) over negative levels. The tail probability is
// recomputed from scratch at every level and no sorting is involved, so this
// shares nothing with the production increment formula.
double layer_cake(const std::vector<double>& values, const std::vector<double>& masses,
                  const Distortion& psi, bool dual) {
    auto weight = [&](double t) {
        double q = 0.0;
        for (std::size_t i = 0; i < values.size(); ++i)
            if (values[i] >= t) q += masses[i];
        q = std::min(std::max(q, 0.0), 1.0);
        return dual ? psi.dual(q) : psi(q);
    };
    std::vector<double> cuts(values);
    cuts.push_back(0.0);
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

    // The indicator set is constant between consecutive payoff levels, so a
    // midpoint rule per slice integrates the step function with no error
    // beyond roundoff; several panels keep the oracle honest about that.
    double total = 0.0;
    for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
        const double lo = cuts[k], hi = cuts[k + 1];
        const int panels = 8;
        const double h = (hi - lo) / panels;
        for (int i = 0; i < panels; ++i) {
            const double t = lo + (i + 0.5) * h;
            total += h * (t > 0.0 ? weight(t) : weight(t) - 1.0);
        }
    }
    return total;
}

} // namespace

TEST_CASE("cell measure construction and validation") {
    const Distortion psi = Distortion::minmaxvar(0.5);
    const auto m = DistortedCellMeasure::from_masses({0.2, 0.3, 0.1, 0.4}, psi);
    REQUIRE(m.tail_probs.size() == 4);
    CHECK(m.tail_probs[0] == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(m.tail_probs[1] == doctest::Approx(0.8).epsilon(1e-15));
    CHECK(m.tail_probs[2] == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(m.tail_probs[3] == doctest::Approx(0.4).epsilon(1e-15));
    for (std::size_t i = 0; i + 1 < m.tail_probs.size(); ++i)
        CHECK(m.tail_probs[i] >= m.tail_probs[i + 1]);

    CHECK_THROWS(DistortedCellMeasure::from_masses({}, psi));
    CHECK_THROWS(DistortedCellMeasure::from_masses({0.7, -0.2, 0.5}, psi));
    CHECK_THROWS(DistortedCellMeasure::from_masses({0.3, 0.3}, psi));

    // weights snap tiny overshoots back into the unit interval
    CHECK(m.weight(1.0 + 5e-16) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(m.weight(-5e-16) == 0.0);
}

TEST_CASE("gamma zero reduces to the plain expectation") {
    std::mt19937 rng(20240213u);
    std::uniform_real_distribution<double> val(-2.0, 2.0);
    std::uniform_int_distribution<std::size_t> size(1, 40);
    for (int k = 0; k < 50; ++k) {
        const std::size_t n = size(rng);
        const std::vector<double> masses = random_masses(rng, n);
        std::vector<double> values(n);
        for (double& v : values) v = val(rng);
        double ev = 0.0;
        for (std::size_t i = 0; i < n; ++i) ev += values[i] * masses[i];
        for (DistortionFamily fam : {DistortionFamily::MinMaxVar, DistortionFamily::Wang}) {
            const auto m = DistortedCellMeasure::from_masses(masses, Distortion(fam, 0.0));
            CHECK(choquet_integral(payoff_of(values), m) == doctest::Approx(ev).epsilon(1e-12));
        }
    }
}

TEST_CASE("indicator payoffs price at the distorted set mass") {
    std::mt19937 rng(31u);
    const std::vector<double> masses = random_masses(rng, 12);
    std::bernoulli_distribution coin(0.5);
    const Distortion psi = Distortion::wang(0.7);
    for (int k = 0; k < 20; ++k) {
        std::vector<double> ind(masses.size(), 0.0);
        double qa = 0.0;
        for (std::size_t i = 0; i < ind.size(); ++i)
            if (coin(rng)) {
                ind[i] = 1.0;
                qa += masses[i];
            }
        const auto m = DistortedCellMeasure::from_masses(masses, psi);
        const auto md = DistortedCellMeasure::from_masses(masses, psi, true);
        CHECK(choquet_integral(payoff_of(ind), m) == doctest::Approx(psi(qa)).epsilon(1e-13));
        CHECK(choquet_integral(payoff_of(ind), md) ==
              doctest::Approx(psi.dual(qa)).epsilon(1e-13));
    }
}

TEST_CASE("constant payoffs are invariant under distortion") {
    std::mt19937 rng(77u);
    const std::vector<double> masses = random_masses(rng, 9);
    for (double gamma : {0.0, 0.25, 2.0}) {
        const auto m = DistortedCellMeasure::from_masses(masses, Distortion::minmaxvar(gamma));
        for (double c : {3.5, 0.0, -1.25}) {
            const std::vector<double> values(masses.size(), c);
            CHECK(choquet_integral(payoff_of(values), m) == doctest::Approx(c).epsilon(1e-14));
        }
    }
}

TEST_CASE("matches direct layer-cake integration on random signed payoffs") {
    std::mt19937 rng(909090u);
    std::uniform_real_distribution<double> val(-3.0, 3.0);
    std::uniform_int_distribution<std::size_t> size(1, 12);
    const double gammas[] = {0.05, 0.3, 1.5};
    for (int k = 0; k < 60; ++k) {
        const std::size_t n = size(rng);
        const std::vector<double> masses = random_masses(rng, n);
        std::vector<double> values(n);
        for (double& v : values) v = val(rng);
        const double gamma = gammas[k % 3];
        for (DistortionFamily fam : {DistortionFamily::MinMaxVar, DistortionFamily::Wang}) {
            const Distortion psi(fam, gamma);
            for (bool dual : {false, true}) {
                const auto m = DistortedCellMeasure::from_masses(masses, psi, dual);
                const double direct = layer_cake(values, masses, psi, dual);
                CHECK(choquet_integral(payoff_of(values), m) ==
                      doctest::Approx(direct).epsilon(1e-6));
            }
        }
    }
}

TEST_CASE("ties and duplicated values collapse cleanly") {
    // duplicated payoff levels exercise the stable tie handling: the integral
    // must match the same payoff with the tied cells merged
    const std::vector<double> masses{0.25, 0.25, 0.3, 0.2};
    const std::vector<double> merged_masses{0.5, 0.3, 0.2};
    const Distortion psi = Distortion::minmaxvar(0.8);
    const auto m4 = DistortedCellMeasure::from_masses(masses, psi);
    const auto m3 = DistortedCellMeasure::from_masses(merged_masses, psi);
    const double split = choquet_integral(payoff_of({1.5, 1.5, -0.5, 2.0}), m4);
    const double merged = choquet_integral(payoff_of({1.5, -0.5, 2.0}), m3);
    CHECK(split == doctest::Approx(merged).epsilon(1e-14));
}

TEST_CASE("monotonicity, homogeneity and translation") {
    std::mt19937 rng(112233u);
    std::uniform_real_distribution<double> val(-1.0, 1.0);
    std::uniform_real_distribution<double> bump(0.0, 0.5);
    for (int k = 0; k < 30; ++k) {
        const std::vector<double> masses = random_masses(rng, 10);
        std::vector<double> x(10), y(10);
        for (std::size_t i = 0; i < 10; ++i) {
            x[i] = val(rng);
            y[i] = x[i] + bump(rng);
        }
        const auto m = DistortedCellMeasure::from_masses(masses, Distortion::wang(0.4));
        const double ix = choquet_integral(payoff_of(x), m);
        CHECK(choquet_integral(payoff_of(y), m) >= ix - 1e-14);

        std::vector<double> scaled(10), shifted(10);
        for (std::size_t i = 0; i < 10; ++i) {
            scaled[i] = 2.5 * x[i];
            shifted[i] = x[i] + 0.75;
        }
        CHECK(choquet_integral(payoff_of(scaled), m) == doctest::Approx(2.5 * ix).epsilon(1e-13));
        CHECK(choquet_integral(payoff_of(shifted), m) == doctest::Approx(ix + 0.75).epsilon(1e-13));
    }
}

TEST_CASE("negation exchanges the distortion with its conjugate") {
    // -C_psi(-X) equals C_dual(X): selling at the distorted value of the
    // negated payoff is buying under the conjugate distortion
    std::mt19937 rng(445566u);
    std::uniform_real_distribution<double> val(-2.0, 2.0);
    for (int k = 0; k < 30; ++k) {
        const std::vector<double> masses = random_masses(rng, 8);
        std::vector<double> x(8), neg(8);
        for (std::size_t i = 0; i < 8; ++i) {
            x[i] = val(rng);
            neg[i] = -x[i];
        }
        for (DistortionFamily fam : {DistortionFamily::MinMaxVar, DistortionFamily::Wang}) {
            const Distortion psi(fam, 0.6);
            const auto m = DistortedCellMeasure::from_masses(masses, psi);
            const auto md = DistortedCellMeasure::from_masses(masses, psi, true);
            CHECK(-choquet_integral(payoff_of(neg), m) ==
                  doctest::Approx(choquet_integral(payoff_of(x), md)).epsilon(1e-13));
        }
    }
}

TEST_CASE("mismatched payoff and measure sizes throw") {
    const auto m = DistortedCellMeasure::from_masses({0.5, 0.5}, Distortion::minmaxvar(0.1));
    CHECK_THROWS(choquet_integral(payoff_of({1.0, 2.0, 3.0}), m));
    CHECK_THROWS(choquet_integral(payoff_of({}), m));
}

TEST_CASE("bid and ask bracket the undistorted value") {
    const DiscountCurve disc({1.0, 5.0}, {0.99, 0.95});
    const CdsContract c = contract("3Y");
    BidAskPricer pricer(c, disc, DefaultGrid::build(c.schedule));
    std::mt19937 rng(8675309u);
    std::uniform_real_distribution<double> lam(5e-4, 0.3);
    for (int k = 0; k < 10; ++k) {
        pricer.set_hazard(HazardCurve({1.0, 2.0, 4.0}, {lam(rng), lam(rng), lam(rng)}));
        const double pv = pricer.pv();
        for (DistortionFamily fam : {DistortionFamily::MinMaxVar, DistortionFamily::Wang}) {
            const Distortion d(fam, 0.15);
            CHECK(pricer.bid(d) < pv);
            CHECK(pricer.ask(d) > pv);
            CHECK(pricer.spread(d) > 0.0);
        }
    }
}

TEST_CASE("undistorted prices collapse onto the risk-neutral pv") {
    const DiscountCurve disc = DiscountCurve::flat(0.013);
    const HazardCurve h({0.6, 1.1, 3.1}, {0.01, 0.02, 0.03});
    for (const char* tenor : {"6M", "1Y", "3Y"}) {
        const CdsContract c = contract(tenor);
        BidAskPricer pricer(c, disc, DefaultGrid::build(c.schedule));
        pricer.set_hazard(h);
        for (DistortionFamily fam : {DistortionFamily::MinMaxVar, DistortionFamily::Wang}) {
            const Distortion d(fam, 0.0);
            CHECK(std::abs(pricer.bid(d) - pricer.pv()) < 1e-12);
            CHECK(std::abs(pricer.ask(d) - pricer.pv()) < 1e-12);
        }
    }
}

TEST_CASE("prices respond monotonically to the distortion level") {
    const DiscountCurve disc = DiscountCurve::flat(0.01);
    const CdsContract c = contract("5Y");
    BidAskPricer pricer(c, disc, DefaultGrid::build(c.schedule));
    pricer.set_hazard(HazardCurve({6.0}, {0.02}));
    for (DistortionFamily fam : {DistortionFamily::MinMaxVar, DistortionFamily::Wang}) {
        double prev_bid = 0.0, prev_ask = 0.0, prev_spread = -1.0;
        bool first = true;
        for (double gamma : {0.0, 0.01, 0.05, 0.2, 0.5, 1.0, 5.0}) {
            const Distortion d(fam, gamma);
            const double bid = pricer.bid(d), ask = pricer.ask(d);
            if (!first) {
                CHECK(bid < prev_bid);
                CHECK(ask > prev_ask);
                CHECK(ask - bid > prev_spread);
            }
            prev_bid = bid;
            prev_ask = ask;
            prev_spread = ask - bid;
            first = false;
        }
    }
}

TEST_CASE("one-shot prices agree with the cached pricer") {
    const DiscountCurve disc({1.0, 5.0}, {0.992, 0.955});
    const HazardCurve h({2.0, 6.0}, {0.015, 0.025});
    const CdsContract c = contract("5Y");
    const DefaultGrid g = DefaultGrid::build(c.schedule);
    const Distortion d = Distortion::minmaxvar(0.1);
    BidAskPricer pricer(c, disc, g);
    pricer.set_hazard(h);
    CHECK(bid_price(c, disc, h, d, g) == doctest::Approx(pricer.bid(d)).epsilon(1e-15));
    CHECK(ask_price(c, disc, h, d, g) == doctest::Approx(pricer.ask(d)).epsilon(1e-15));
    // asking before any hazard is set is a usage error
    BidAskPricer fresh(c, disc, g);
    CHECK_THROWS(fresh.bid(d));
}
