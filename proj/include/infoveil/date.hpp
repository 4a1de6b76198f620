#pragma once

#include <compare>
#include <cstdint>
#include <cstdio>
#include <string>

#include "infoveil/error.hpp"

namespace infoveil {

/// Proleptic Gregorian calendar date at daily resolution, stored as a day
/// count relative to 1970-01-01. No time zones.
class Date {
public:
    Date() : days_(0) {}

    static Date from_ymd(int year, int month, int day) {
        if (month < 1 || month > 12 || day < 1 || day > days_in_month(year, month))
            raise(ErrorKind::InvalidInput, "invalid calendar date " + std::to_string(year) + "-" +
                                               std::to_string(month) + "-" + std::to_string(day));
        return Date(days_from_civil(year, month, day));
    }

    /// Parses strict ISO-8601 `YYYY-MM-DD`.
    static Date parse(const std::string& text) {
        if (text.size() != 10 || text[4] != '-' || text[7] != '-')
            raise(ErrorKind::Parse, "expected date in YYYY-MM-DD format, got '" + text + "'");
        for (int i : {0, 1, 2, 3, 5, 6, 8, 9})
            if (text[i] < '0' || text[i] > '9')
                raise(ErrorKind::Parse, "expected date in YYYY-MM-DD format, got '" + text + "'");
        int y = std::stoi(text.substr(0, 4));
        int m = std::stoi(text.substr(5, 2));
        int d = std::stoi(text.substr(8, 2));
        return from_ymd(y, m, d);
    }

    std::string to_string() const {
        auto [y, m, d] = civil();
        char buf[16];
        std::snprintf(buf, sizeof buf, "%04d-%02d-%02d", y, m, d);
        return buf;
    }

    struct Civil {
        int year;
        int month;
        int day;
    };

    Civil civil() const { return civil_from_days(days_); }

    std::int64_t day_number() const noexcept { return days_; }

    Date operator+(std::int64_t n) const { return Date(days_ + n); }
    Date operator-(std::int64_t n) const { return Date(days_ - n); }
    std::int64_t operator-(Date other) const noexcept { return days_ - other.days_; }
    Date& operator++() { ++days_; return *this; }

    auto operator<=>(const Date&) const = default;

private:
    explicit Date(std::int64_t days) : days_(days) {}

    // Howard Hinnant's civil-from-days / days-from-civil algorithms.
    static std::int64_t days_from_civil(int y, int m, int d) {
        y -= m <= 2;
        const std::int64_t era = (y >= 0 ? y : y - 399) / 400;
        const unsigned yoe = static_cast<unsigned>(y - era * 400);
        const unsigned doy = (153u * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1;
        const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
        return era * 146097 + static_cast<std::int64_t>(doe) - 719468;
    }

    static Civil civil_from_days(std::int64_t z) {
        z += 719468;
        const std::int64_t era = (z >= 0 ? z : z - 146096) / 146097;
        const unsigned doe = static_cast<unsigned>(z - era * 146097);
        const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
        const std::int64_t y = static_cast<std::int64_t>(yoe) + era * 400;
        const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
        const unsigned mp = (5 * doy + 2) / 153;
        const unsigned d = doy - (153 * mp + 2) / 5 + 1;
        const unsigned m = mp + (mp < 10 ? 3 : -9);
        return Civil{static_cast<int>(y + (m <= 2)), static_cast<int>(m), static_cast<int>(d)};
    }

    static bool is_leap(int y) { return y % 4 == 0 && (y % 100 != 0 || y % 400 == 0); }

    static int days_in_month(int y, int m) {
        static constexpr int lengths[] = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
        return m == 2 && is_leap(y) ? 29 : lengths[m - 1];
    }

    std::int64_t days_;
};

} // namespace infoveil
