#pragma once

#include "conic/curves.hpp"
#include "conic/schedule.hpp"

#include <vector>

namespace conic {

/// One CDS with unit notional, protection-buyer perspective.
struct CdsContract {
    CdsSchedule schedule;
    double coupon; // running premium C per year
    double lgd;    // loss given default, 1 - recovery

    CdsContract(CdsSchedule s, double coupon_rate, double loss_given_default);
};

/// Partition of the default time axis into cells (d_{i-1}, d_i] from the
/// valuation date to contract maturity, plus the implicit survival cell
/// {tau > e_N}. Times are curve years; by construction every accrual and
/// payment date of the generating schedule that lies on the step lattice is
/// hit exactly (always true for the 1-day default).
struct DefaultGrid {
    std::vector<Date> dates;   // d_0 = valuation .. d_M = e_N
    std::vector<double> times; // same points in curve years, times[0] = 0

    static DefaultGrid build(const CdsSchedule& s, int step_days = 1);

    std::size_t cells() const { return times.size() - 1; } // M (without survival cell)
    double horizon() const { return times.back(); }

    /// Q-masses of the M default cells plus the survival cell (sums to 1).
    std::vector<double> cell_masses(const HazardCurve& h) const;
};

enum class Leg { Protection, Premium, Net };

/// Cell-by-cell value of the maturity-deferred CDS cashflows: entry i is the
/// contract's compounded-to-maturity payoff when default falls in cell i
/// (represented by the cell midpoint); the last entry is the survival cell.
struct DeferredPayoff {
    std::vector<double> values; // size M + 1
    Leg leg;
};

double pv_protection(const CdsContract& c, const DiscountCurve& disc, const HazardCurve& h,
                     const DefaultGrid& grid);

double pv_premium(const CdsContract& c, const DiscountCurve& disc, const HazardCurve& h,
                  const DefaultGrid& grid);

double pv_cds(const CdsContract& c, const DiscountCurve& disc, const HazardCurve& h,
              const DefaultGrid& grid);

/// Premium accrued between the first accrual start and the protection start,
/// discounted from cash settlement.
double accrued_amount(const CdsContract& c, const DiscountCurve& disc);

DeferredPayoff deferred_payoff(const CdsContract& c, const DiscountCurve& disc,
                               const DefaultGrid& grid, Leg leg);

/// True when lgd exceeds the largest single-period coupon payment, the
/// regime in which the pricer's PV is strictly increasing in each pillar.
bool check_monotonicity_condition(const CdsContract& c);

} // namespace conic
