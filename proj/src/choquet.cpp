#include "conic/choquet.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace conic {

namespace {

// Tail masses accumulate many small terms; the sum can land a few ulps
// outside [0, 1], which the distortion rejects. Snap before distorting.
double clamp_prob(double q) {
    if (q < 0.0) return 0.0;
    if (q > 1.0) return 1.0;
    return q;
}

} // namespace

DistortedCellMeasure DistortedCellMeasure::from_masses(const std::vector<double>& masses,
                                                       Distortion d, bool dual) {
    if (masses.empty()) throw std::invalid_argument("cell measure needs at least one cell");
    DistortedCellMeasure m{std::vector<double>(masses.size()), std::move(d), dual};
    double tail = 0.0;
    for (std::size_t i = masses.size(); i-- > 0;) {
        if (masses[i] < -1e-12)
            throw std::invalid_argument("cell measure has a negative cell mass");
        tail += std::max(masses[i], 0.0);
        m.tail_probs[i] = clamp_prob(tail);
    }
    if (std::abs(tail - 1.0) > 1e-9)
        throw std::invalid_argument("cell masses must sum to one");
    // The full tail is the whole space. Pin it to 1 exactly: conjugate
    // distortions have unbounded slope there, so an ulp of summation slack
    // would otherwise blow up (badly, for strong distortion levels).
    m.tail_probs[0] = 1.0;
    return m;
}

double DistortedCellMeasure::weight(double q) const {
    const double p = clamp_prob(q);
    return dual ? distortion.dual(p) : distortion(p);
}

double choquet_integral(const DeferredPayoff& payoff, const DistortedCellMeasure& m) {
    const std::vector<double>& x = payoff.values;
    const std::size_t n = x.size();
    if (n == 0) throw std::invalid_argument("choquet_integral: empty payoff");
    if (n != m.tail_probs.size())
        throw std::invalid_argument("choquet_integral: payoff and measure cell counts differ");

    // Per-cell masses from the stored tails (the last tail is its own mass).
    std::vector<double> mass(n);
    for (std::size_t i = 0; i + 1 < n; ++i) mass[i] = m.tail_probs[i] - m.tail_probs[i + 1];
    mass[n - 1] = m.tail_probs[n - 1];

    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(),
                     [&x](std::size_t a, std::size_t b) { return x[a] < x[b]; });

    // Suffix Q-mass of the cells ranked at or above each level.
    std::vector<double> tail(n);
    double acc = 0.0;
    for (std::size_t r = n; r-- > 0;) {
        acc += mass[order[r]];
        tail[r] = acc;
    }
    tail[0] = 1.0; // whole space again, resummation must not drift off 1

    // Sum the value increments, each weighted by the distorted tail mass.
    // Anchoring the first increment at 0 makes the formula valid for signed
    // payoffs: levels below 0 contribute (weight - 1) through the telescoping.
    double total = 0.0;
    double prev = 0.0;
    for (std::size_t r = 0; r < n; ++r) {
        total += (x[order[r]] - prev) * m.weight(tail[r]);
        prev = x[order[r]];
    }
    return total;
}

BidAskPricer::BidAskPricer(CdsContract c, DiscountCurve disc, DefaultGrid grid)
    : contract_(std::move(c)), disc_(std::move(disc)), grid_(std::move(grid)),
      protection_(rank(deferred_payoff(contract_, disc_, grid_, Leg::Protection))),
      premium_(rank(deferred_payoff(contract_, disc_, grid_, Leg::Premium))),
      df_maturity_(disc_.df(contract_.schedule.time_of(contract_.schedule.maturity()))) {}

BidAskPricer::RankedLeg BidAskPricer::rank(const DeferredPayoff& p) {
    const std::vector<double>& x = p.values;
    RankedLeg leg;
    leg.order.resize(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) leg.order[i] = i;
    std::stable_sort(leg.order.begin(), leg.order.end(),
                     [&x](std::size_t a, std::size_t b) { return x[a] < x[b]; });
    leg.increments.resize(x.size());
    double prev = 0.0;
    for (std::size_t r = 0; r < x.size(); ++r) {
        leg.increments[r] = x[leg.order[r]] - prev;
        prev = x[leg.order[r]];
    }
    leg.tails.assign(x.size(), 0.0);
    return leg;
}

void BidAskPricer::set_hazard(const HazardCurve& h) {
    const std::vector<double> mass = grid_.cell_masses(h);
    for (RankedLeg* leg : {&protection_, &premium_}) {
        double acc = 0.0;
        for (std::size_t r = leg->order.size(); r-- > 0;) {
            acc += mass[leg->order[r]];
            leg->tails[r] = acc;
        }
        // full tail covers the whole space; see DistortedCellMeasure
        leg->tails[0] = 1.0;
    }
    pv_ = pv_cds(contract_, disc_, h, grid_);
    has_hazard_ = true;
}

double BidAskPricer::integrate(const RankedLeg& leg, const Distortion& d, bool dual) const {
    double total = 0.0;
    for (std::size_t r = 0; r < leg.increments.size(); ++r) {
        const double q = clamp_prob(leg.tails[r]);
        total += leg.increments[r] * (dual ? d.dual(q) : d(q));
    }
    return total;
}

void BidAskPricer::require_hazard() const {
    if (!has_hazard_) throw std::logic_error("BidAskPricer: set_hazard was never called");
}

double BidAskPricer::bid(const Distortion& d) const {
    require_hazard();
    return df_maturity_ * (integrate(protection_, d, true) - integrate(premium_, d, false));
}

double BidAskPricer::ask(const Distortion& d) const {
    require_hazard();
    return df_maturity_ * (integrate(protection_, d, false) - integrate(premium_, d, true));
}

double BidAskPricer::pv() const {
    require_hazard();
    return pv_;
}

double bid_price(const CdsContract& c, const DiscountCurve& disc, const HazardCurve& h,
                 const Distortion& d, const DefaultGrid& grid) {
    BidAskPricer pricer(c, disc, grid);
    pricer.set_hazard(h);
    return pricer.bid(d);
}

double ask_price(const CdsContract& c, const DiscountCurve& disc, const HazardCurve& h,
                 const Distortion& d, const DefaultGrid& grid) {
    BidAskPricer pricer(c, disc, grid);
    pricer.set_hazard(h);
    return pricer.ask(d);
}

} // namespace conic
