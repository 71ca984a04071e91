#include "conic/schedule.hpp"

#include "conic/errors.hpp"

namespace conic {

CdsSchedule build_schedule(Date valuation, Date maturity, const ScheduleConventions& conv) {
    if (!(maturity > valuation))
        throw ParseError("build_schedule: maturity " + maturity.to_string() +
                         " must be after valuation " + valuation.to_string());
    if (conv.pay_freq_months != 3 && conv.pay_freq_months != 6)
        throw ParseError("build_schedule: unsupported payment frequency " +
                         std::to_string(conv.pay_freq_months) + "M");

    CdsSchedule s;
    s.valuation = valuation;
    s.protection_effective = valuation.plus_days(conv.protection_lag_d);
    s.cash_settle = add_business_days(valuation, conv.settle_lag_bd);
    s.premium_daycount = conv.premium_daycount;
    s.curve_daycount = conv.curve_daycount;

    // First accrual period starts on the CDS roll date at or before
    // protection start; subsequent starts are the previous period ends.
    Date start = previous_cds_date(s.protection_effective, conv.roll);
    while (start < maturity) {
        // next_cds_date maps a roll date to itself, so step off it first
        Date end = next_cds_date(start.plus_days(1), conv.roll);
        if (conv.pay_freq_months == 6)
            end = next_cds_date(end.plus_days(1), conv.roll);
        if (end > maturity)
            end = maturity;
        s.accrual_starts.push_back(start);
        s.accrual_ends.push_back(end);
        s.payment_dates.push_back(end);
        s.accrual_fractions.push_back(year_fraction(start, end, conv.premium_daycount));
        start = end;
    }
    if (s.accrual_ends.empty() || s.accrual_ends.back() != maturity)
        throw ParseError("build_schedule: failed to roll out schedule to " + maturity.to_string());
    return s;
}

} // namespace conic
