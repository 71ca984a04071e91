#pragma once

#include <chrono>
#include <compare>
#include <string>
#include <string_view>
#include <vector>

namespace conic {

/// Proleptic-Gregorian calendar date with day-level resolution.
///
/// Value type over std::chrono::sys_days; differences are whole days and
/// the total order is the calendar order.
class Date {
  public:
    Date() = default; // 1970-01-01
    Date(int year, unsigned month, unsigned day);

    /// Parses an ISO-8601 date (YYYY-MM-DD). Throws ParseError otherwise.
    static Date parse(std::string_view iso);

    int year() const;
    unsigned month() const;
    unsigned day() const;

    std::string to_string() const;

    std::chrono::weekday weekday() const { return std::chrono::weekday{days_}; }
    bool is_weekend() const;

    Date plus_days(int n) const;
    /// Calendar-month shift; the day of month is clamped to the target
    /// month's length (2020-01-31 + 1m -> 2020-02-29).
    Date plus_months(int n) const;

    /// Days since 1970-01-01; fractional positions inside a day are
    /// represented as double serials by the pricing grid.
    long serial() const { return days_.time_since_epoch().count(); }

    friend long operator-(Date a, Date b) { return a.serial() - b.serial(); }
    auto operator<=>(const Date&) const = default;

  private:
    explicit Date(std::chrono::sys_days d) : days_(d) {}
    std::chrono::sys_days days_{};
};

enum class DayCount { Act360, Act365F, Thirty360 };

DayCount day_count_from_string(std::string_view s);
std::string_view to_string(DayCount conv);

/// Year fraction between d1 and d2 (d1 <= d2) under the convention.
/// Act/360 and Act/365F count calendar days; Thirty/360 is the bond basis.
double year_fraction(Date d1, Date d2, DayCount conv);

/// Standard CDS roll dates: day 20 of the configured roll months.
struct RollConvention {
    std::vector<unsigned> months{3, 6, 9, 12};
    unsigned day = 20;
};

/// Latest roll date on or before d.
Date previous_cds_date(Date d, const RollConvention& roll = {});

/// Earliest roll date on or after d.
Date next_cds_date(Date d, const RollConvention& roll = {});

/// Shifts by n business days on a weekend-only calendar.
Date add_business_days(Date d, int n);

/// Maturity for a quoted tenor like "6M" or "5Y": valuation shifted by the
/// tenor, then rolled forward to the next CDS date.
Date tenor_maturity(Date valuation, std::string_view tenor, const RollConvention& roll = {});

} // namespace conic
