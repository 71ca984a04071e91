#include "conic/cds_pricer.hpp"

#include "conic/errors.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace conic {

namespace {

// Day-count denominator for accrual measured up to a fractional grid time.
// Grid times are ACT/365F years, so day counts convert exactly.
double act_denominator(DayCount conv) {
    switch (conv) {
        case DayCount::Act360: return 360.0;
        case DayCount::Act365F: return 365.0;
        case DayCount::Thirty360:
            throw std::logic_error("continuous accrual needs an ACT premium day count");
    }
    throw std::logic_error("unknown day count");
}

// Delta(start, t) for a mid-cell default time t (curve years from valuation).
double accrual_to_time(const CdsSchedule& s, Date start, double t, double prem_denom) {
    const double days =
        t * act_denominator(s.curve_daycount) - static_cast<double>(start - s.valuation);
    return days / prem_denom;
}

} // namespace

CdsContract::CdsContract(CdsSchedule s, double coupon_rate, double loss_given_default)
    : schedule(std::move(s)), coupon(coupon_rate), lgd(loss_given_default) {
    if (schedule.periods() == 0) throw std::invalid_argument("contract needs a schedule");
    if (!(lgd >= 0.0 && lgd <= 1.0))
        throw std::invalid_argument("lgd must lie in [0, 1], got " + std::to_string(lgd));
    if (!(coupon >= 0.0)) throw std::invalid_argument("negative coupon");
}

DefaultGrid DefaultGrid::build(const CdsSchedule& s, int step_days) {
    if (step_days < 1) throw std::invalid_argument("grid step must be at least one day");
    DefaultGrid g;
    const Date maturity = s.maturity();
    Date d = s.valuation;
    while (d < maturity) {
        g.dates.push_back(d);
        g.times.push_back(s.time_of(d));
        d = d.plus_days(step_days);
    }
    g.dates.push_back(maturity); // final cell clamps to e_N
    g.times.push_back(s.time_of(maturity));
    return g;
}

std::vector<double> DefaultGrid::cell_masses(const HazardCurve& h) const {
    std::vector<double> masses;
    masses.reserve(cells() + 1);
    for (std::size_t i = 1; i < times.size(); ++i)
        masses.push_back(h.default_mass(times[i - 1], times[i]));
    masses.push_back(h.survival(times.back()));
    return masses;
}

double pv_protection(const CdsContract& c, const DiscountCurve& disc, const HazardCurve& h,
                     const DefaultGrid& grid) {
    const double tp = c.schedule.time_of(c.schedule.protection_effective);
    double pv = 0.0;
    for (std::size_t i = 1; i < grid.times.size(); ++i) {
        const double b = grid.times[i];
        if (b <= tp) continue; // no protection before t_p
        const double lo = std::max(grid.times[i - 1], tp);
        pv += disc.df(0.5 * (lo + b)) * h.default_mass(lo, b);
    }
    return c.lgd * pv;
}

double pv_premium(const CdsContract& c, const DiscountCurve& disc, const HazardCurve& h,
                  const DefaultGrid& grid) {
    const CdsSchedule& s = c.schedule;
    const double denom = act_denominator(s.premium_daycount);

    // coupons paid on survival to each period end
    double coupons = 0.0;
    for (std::size_t j = 0; j < s.periods(); ++j) {
        const double te = s.time_of(s.accrual_ends[j]);
        coupons += disc.df(s.time_of(s.payment_dates[j])) * s.accrual_fractions[j] *
                   h.survival(te);
    }

    // accrual paid at default, period by period over the grid cells; the
    // first period also accrues over [valuation, t_p) even though that
    // window carries no protection
    double accrual = 0.0;
    std::size_t cell = 1;
    for (std::size_t j = 0; j < s.periods(); ++j) {
        const double ps = std::max(s.time_of(s.accrual_starts[j]), 0.0);
        const double pe = s.time_of(s.accrual_ends[j]);
        while (cell < grid.times.size() && grid.times[cell - 1] < pe) {
            const double lo = std::max(grid.times[cell - 1], ps);
            const double hi = std::min(grid.times[cell], pe);
            if (hi > lo) {
                const double mid = 0.5 * (lo + hi);
                accrual += disc.df(mid) * accrual_to_time(s, s.accrual_starts[j], mid, denom) *
                           h.default_mass(lo, hi);
            }
            if (grid.times[cell] > pe) break; // cell straddles the period end
            ++cell;
        }
    }
    return c.coupon * (coupons + accrual);
}

double pv_cds(const CdsContract& c, const DiscountCurve& disc, const HazardCurve& h,
              const DefaultGrid& grid) {
    return pv_protection(c, disc, h, grid) - pv_premium(c, disc, h, grid);
}

double accrued_amount(const CdsContract& c, const DiscountCurve& disc) {
    const CdsSchedule& s = c.schedule;
    const double delta =
        year_fraction(s.accrual_starts.front(), s.protection_effective, s.premium_daycount);
    return disc.df(s.time_of(s.cash_settle)) * c.coupon * delta;
}

DeferredPayoff deferred_payoff(const CdsContract& c, const DiscountCurve& disc,
                               const DefaultGrid& grid, Leg leg) {
    if (grid.dates.back() != c.schedule.maturity())
        throw std::invalid_argument("default grid does not end at the contract maturity");
    if (leg == Leg::Net) {
        DeferredPayoff prot = deferred_payoff(c, disc, grid, Leg::Protection);
        const DeferredPayoff prem = deferred_payoff(c, disc, grid, Leg::Premium);
        for (std::size_t i = 0; i < prot.values.size(); ++i) prot.values[i] -= prem.values[i];
        prot.leg = Leg::Net;
        return prot;
    }

    const CdsSchedule& s = c.schedule;
    const std::size_t m = grid.cells();
    const double df_mat = disc.df(grid.horizon());
    DeferredPayoff out;
    out.leg = leg;
    out.values.assign(m + 1, 0.0);

    if (leg == Leg::Protection) {
        const double tp = s.time_of(s.protection_effective);
        for (std::size_t i = 1; i <= m; ++i) {
            const double b = grid.times[i];
            if (b <= tp) continue;
            const double lo = std::max(grid.times[i - 1], tp);
            out.values[i - 1] = c.lgd * disc.df(0.5 * (lo + b)) / df_mat;
        }
        return out; // survival cell pays nothing
    }

    // premium leg: full coupons already paid before the default time, plus
    // the accrued piece of the running period, all compounded to maturity
    const double denom = act_denominator(s.premium_daycount);
    std::vector<double> coupon_cum(s.periods() + 1, 0.0); // deferred coupons 0..j-1
    for (std::size_t j = 0; j < s.periods(); ++j)
        coupon_cum[j + 1] = coupon_cum[j] + c.coupon * s.accrual_fractions[j] *
                                                disc.df(s.time_of(s.payment_dates[j])) / df_mat;

    std::size_t k = 0; // period whose end is the first at or after the cell midpoint
    for (std::size_t i = 1; i <= m; ++i) {
        const double rep = 0.5 * (grid.times[i - 1] + grid.times[i]);
        while (k < s.periods() && s.time_of(s.accrual_ends[k]) < rep) ++k;
        double v = coupon_cum[k];
        if (k < s.periods())
            v += c.coupon * accrual_to_time(s, s.accrual_starts[k], rep, denom) *
                 disc.df(rep) / df_mat;
        out.values[i - 1] = v;
    }
    out.values[m] = coupon_cum[s.periods()]; // survive: every coupon, no accrual
    return out;
}

bool check_monotonicity_condition(const CdsContract& c) {
    const auto& deltas = c.schedule.accrual_fractions;
    const double max_delta = *std::max_element(deltas.begin(), deltas.end());
    return c.lgd > c.coupon * max_delta;
}

} // namespace conic
