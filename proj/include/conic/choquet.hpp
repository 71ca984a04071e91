#pragma once

#include "conic/cds_pricer.hpp"
#include "conic/distortion.hpp"

#include <vector>

namespace conic {

/// Distorted measure of a cell partition, stored as tail probabilities:
/// tail_probs[i] is the undistorted Q-mass of cells i..last, so
/// tail_probs[0] = 1 and the sequence is non-increasing. `dual` selects the
/// conjugate distortion (used when integrating a negated payoff).
struct DistortedCellMeasure {
    std::vector<double> tail_probs;
    Distortion distortion;
    bool dual = false;

    static DistortedCellMeasure from_masses(const std::vector<double>& masses, Distortion d,
                                            bool dual = false);

    /// Distorted weight of the tail mass q.
    double weight(double q) const;
};

/// Discrete Choquet integral of the payoff against the distorted measure:
/// cells are ranked by payoff value (stable in the original index) and the
/// increments between consecutive values are weighted by the distorted mass
/// of the cells at or above each level, anchoring the smallest value to 0.
/// Valid for signed payoffs.
double choquet_integral(const DeferredPayoff& payoff, const DistortedCellMeasure& m);

/// Two-price valuation of one contract on a fixed grid. The payoff cells and
/// their ranking do not depend on the hazard curve, so they are computed
/// once; set_hazard refreshes only the tail masses, and each bid/ask call
/// costs one distortion sweep per leg. This is the shape of the calibration
/// hot loop (many gammas per lambda, many lambdas per pillar).
class BidAskPricer {
  public:
    BidAskPricer(CdsContract c, DiscountCurve disc, DefaultGrid grid);

    void set_hazard(const HazardCurve& h);

    double bid(const Distortion& d) const;
    double ask(const Distortion& d) const;
    double spread(const Distortion& d) const { return ask(d) - bid(d); }

    /// Undistorted PV on the same grid (the gamma = 0 limit of both prices).
    double pv() const;

    const CdsContract& contract() const { return contract_; }
    const DefaultGrid& grid() const { return grid_; }

  private:
    struct RankedLeg {
        std::vector<std::size_t> order; // cells sorted by payoff, ascending
        std::vector<double> increments; // sorted-value differences, first from 0
        std::vector<double> tails;      // suffix Q-masses in rank order
    };

    static RankedLeg rank(const DeferredPayoff& p);
    double integrate(const RankedLeg& leg, const Distortion& d, bool dual) const;
    void require_hazard() const;

    CdsContract contract_;
    DiscountCurve disc_;
    DefaultGrid grid_;
    RankedLeg protection_;
    RankedLeg premium_;
    double df_maturity_;
    double pv_ = 0.0;
    bool has_hazard_ = false;
};

/// One-shot conveniences over BidAskPricer.
double bid_price(const CdsContract& c, const DiscountCurve& disc, const HazardCurve& h,
                 const Distortion& d, const DefaultGrid& grid);
double ask_price(const CdsContract& c, const DiscountCurve& disc, const HazardCurve& h,
                 const Distortion& d, const DefaultGrid& grid);

} // namespace conic
