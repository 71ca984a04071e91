#pragma once

#include "conic/dates.hpp"

#include <vector>

namespace conic {

/// Contract conventions used when rolling out a schedule.
struct ScheduleConventions {
    DayCount premium_daycount = DayCount::Act360;
    DayCount curve_daycount = DayCount::Act365F; // time coordinate for curves
    int settle_lag_bd = 3;                       // cash settle, business days
    int protection_lag_d = 1;                    // protection start, calendar days
    int pay_freq_months = 3;
    RollConvention roll{};
};

/// Accrual/payment/protection dates and year fractions for one CDS.
///
/// Period i accrues over [accrual_starts[i], accrual_ends[i]] and pays on
/// payment_dates[i]; periods are adjacent and the last one ends at the
/// contract maturity.
struct CdsSchedule {
    Date valuation;
    Date protection_effective; // t_p
    Date cash_settle;          // t_s
    std::vector<Date> accrual_starts;
    std::vector<Date> accrual_ends;
    std::vector<Date> payment_dates;
    std::vector<double> accrual_fractions;
    DayCount premium_daycount = DayCount::Act360;
    DayCount curve_daycount = DayCount::Act365F;

    std::size_t periods() const { return accrual_ends.size(); }
    Date maturity() const { return accrual_ends.back(); }

    /// Curve time (years from valuation) of a date; negative before the
    /// valuation date (the first accrual period starts in the past).
    double time_of(Date d) const {
        return d >= valuation ? year_fraction(valuation, d, curve_daycount)
                              : -year_fraction(d, valuation, curve_daycount);
    }
};

/// Rolls out the standard schedule: accrual starts at the previous CDS date
/// before protection start, steps by the payment frequency, and the final
/// period ends exactly at maturity.
CdsSchedule build_schedule(Date valuation, Date maturity, const ScheduleConventions& conv = {});

} // namespace conic
