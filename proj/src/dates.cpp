#include "conic/dates.hpp"

#include "conic/errors.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>

namespace conic {

namespace {

std::chrono::year_month_day to_ymd(std::chrono::sys_days d) {
    return std::chrono::year_month_day{d};
}

unsigned last_day_of_month(int y, unsigned m) {
    using namespace std::chrono;
    const year_month_day_last ymdl{year{y}, month_day_last{month{m}}};
    return static_cast<unsigned>(ymdl.day());
}

} // namespace

Date::Date(int year, unsigned month, unsigned day) {
    using namespace std::chrono;
    const year_month_day ymd{std::chrono::year{year}, std::chrono::month{month}, std::chrono::day{day}};
    if (!ymd.ok()) {
        throw ParseError("invalid calendar date " + std::to_string(year) + "-" + std::to_string(month) +
                         "-" + std::to_string(day));
    }
    days_ = sys_days{ymd};
}

Date Date::parse(std::string_view iso) {
    int y = 0;
    unsigned m = 0, d = 0;
    char tail = '\0';
    const std::string buf(iso);
    if (std::sscanf(buf.c_str(), "%d-%u-%u%c", &y, &m, &d, &tail) != 3) {
        throw ParseError("expected ISO date YYYY-MM-DD, got '" + buf + "'");
    }
    return Date(y, m, d);
}

int Date::year() const { return static_cast<int>(to_ymd(days_).year()); }
unsigned Date::month() const { return static_cast<unsigned>(to_ymd(days_).month()); }
unsigned Date::day() const { return static_cast<unsigned>(to_ymd(days_).day()); }

std::string Date::to_string() const {
    char buf[16];
    std::snprintf(buf, sizeof(buf), "%04d-%02u-%02u", year(), month(), day());
    return buf;
}

bool Date::is_weekend() const {
    const auto wd = weekday();
    return wd == std::chrono::Saturday || wd == std::chrono::Sunday;
}

Date Date::plus_days(int n) const { return Date{days_ + std::chrono::days{n}}; }

Date Date::plus_months(int n) const {
    const auto ymd = to_ymd(days_);
    const int base = year() * 12 + static_cast<int>(month()) - 1 + n;
    const int y = (base >= 0) ? base / 12 : -((-base + 11) / 12);
    const unsigned m = static_cast<unsigned>(base - y * 12 + 1);
    const unsigned d = std::min(static_cast<unsigned>(ymd.day()), last_day_of_month(y, m));
    return Date(y, m, d);
}

DayCount day_count_from_string(std::string_view s) {
    std::string lower(s);
    std::transform(lower.begin(), lower.end(), lower.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    if (lower == "act/360" || lower == "act360") return DayCount::Act360;
    if (lower == "act/365f" || lower == "act365f" || lower == "act/365") return DayCount::Act365F;
    if (lower == "30/360" || lower == "thirty360") return DayCount::Thirty360;
    throw ParseError("unknown day count '" + std::string(s) + "'");
}

std::string_view to_string(DayCount conv) {
    switch (conv) {
        case DayCount::Act360: return "ACT/360";
        case DayCount::Act365F: return "ACT/365F";
        case DayCount::Thirty360: return "30/360";
    }
    return "?";
}

double year_fraction(Date d1, Date d2, DayCount conv) {
    if (d1 > d2) {
        throw std::invalid_argument("year_fraction: dates out of order (" + d1.to_string() + " > " +
                                    d2.to_string() + ")");
    }
    switch (conv) {
        case DayCount::Act360:
            return static_cast<double>(d2 - d1) / 360.0;
        case DayCount::Act365F:
            return static_cast<double>(d2 - d1) / 365.0;
        case DayCount::Thirty360: {
            const int dd1 = std::min<int>(static_cast<int>(d1.day()), 30);
            int dd2 = static_cast<int>(d2.day());
            if (dd2 == 31 && dd1 == 30) dd2 = 30;
            return (360.0 * (d2.year() - d1.year()) +
                    30.0 * (static_cast<int>(d2.month()) - static_cast<int>(d1.month())) +
                    (dd2 - dd1)) /
                   360.0;
        }
    }
    throw std::invalid_argument("year_fraction: unknown convention");
}

Date previous_cds_date(Date d, const RollConvention& roll) {
    if (roll.months.empty()) throw std::invalid_argument("previous_cds_date: empty roll-month set");
    // Scan back from the current month; at most 13 candidates.
    int y = d.year();
    int m = static_cast<int>(d.month());
    for (int step = 0; step < 14; ++step) {
        if (std::find(roll.months.begin(), roll.months.end(), static_cast<unsigned>(m)) !=
            roll.months.end()) {
            const Date candidate(y, static_cast<unsigned>(m), roll.day);
            if (candidate <= d) return candidate;
        }
        if (--m == 0) {
            m = 12;
            --y;
        }
    }
    throw std::logic_error("previous_cds_date: no roll date found");
}

Date next_cds_date(Date d, const RollConvention& roll) {
    if (roll.months.empty()) throw std::invalid_argument("next_cds_date: empty roll-month set");
    int y = d.year();
    int m = static_cast<int>(d.month());
    for (int step = 0; step < 14; ++step) {
        if (std::find(roll.months.begin(), roll.months.end(), static_cast<unsigned>(m)) !=
            roll.months.end()) {
            const Date candidate(y, static_cast<unsigned>(m), roll.day);
            if (candidate >= d) return candidate;
        }
        if (++m == 13) {
            m = 1;
            ++y;
        }
    }
    throw std::logic_error("next_cds_date: no roll date found");
}

Date add_business_days(Date d, int n) {
    const int step = (n >= 0) ? 1 : -1;
    int remaining = std::abs(n);
    Date cur = d;
    while (remaining > 0) {
        cur = cur.plus_days(step);
        if (!cur.is_weekend()) --remaining;
    }
    return cur;
}

Date tenor_maturity(Date valuation, std::string_view tenor, const RollConvention& roll) {
    if (tenor.empty()) throw ParseError("empty tenor");
    // Accept explicit ISO dates as well as nM / nY labels.
    if (tenor.find('-') != std::string_view::npos) return Date::parse(tenor);
    std::size_t pos = 0;
    while (pos < tenor.size() && std::isdigit(static_cast<unsigned char>(tenor[pos]))) ++pos;
    if (pos == 0 || pos + 1 != tenor.size()) {
        throw ParseError("cannot parse tenor '" + std::string(tenor) + "' (want e.g. 6M, 5Y)");
    }
    const int n = std::stoi(std::string(tenor.substr(0, pos)));
    const char unit = static_cast<char>(std::toupper(static_cast<unsigned char>(tenor.back())));
    Date shifted;
    if (unit == 'M') {
        shifted = valuation.plus_months(n);
    } else if (unit == 'Y') {
        shifted = valuation.plus_months(12 * n);
    } else {
        throw ParseError("cannot parse tenor '" + std::string(tenor) + "' (unit must be M or Y)");
    }
    return next_cds_date(shifted, roll);
}

} // namespace conic
