#pragma once

#include <chrono>
#include <compare>
#include <string>
#include <string_view>

namespace chaintopo {

// Calendar day (UTC), stored as days since 1970-01-01.
class Date {
 public:
  constexpr Date() = default;
  constexpr explicit Date(std::chrono::sys_days d) : days_(d) {}

  static Date from_ymd(int year, unsigned month, unsigned day);
  // Strict ISO-8601 `YYYY-MM-DD`; throws ValidationError otherwise.
  static Date parse(std::string_view text);

  std::string iso() const;
  constexpr std::chrono::sys_days sys_days() const { return days_; }
  constexpr long long serial() const { return days_.time_since_epoch().count(); }

  constexpr Date plus_days(long long n) const { return Date(days_ + std::chrono::days(n)); }
  constexpr long long days_until(Date other) const { return (other.days_ - days_).count(); }

  constexpr auto operator<=>(const Date&) const = default;

 private:
  std::chrono::sys_days days_{};
};

}  // namespace chaintopo
