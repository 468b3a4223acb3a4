#pragma once

#include <stdexcept>
#include <string>

namespace coupon_delay
{

//! Input outside an operation's mathematical domain.
class DomainError : public std::invalid_argument
{
  public:
    using std::invalid_argument::invalid_argument;
};

//! A numerical procedure failed to meet its tolerance.
class NumericError : public std::runtime_error
{
  public:
    NumericError(const std::string& what, double best_estimate)
        : std::runtime_error(what), best_estimate_(best_estimate)
    {
    }

    //! Value reached before giving up.
    double best_estimate() const noexcept { return best_estimate_; }

  private:
    double best_estimate_;
};

namespace detail
{
inline void require(bool condition, const char* message)
{
    if (!condition)
        throw DomainError(message);
}
} // namespace detail

} // namespace coupon_delay
