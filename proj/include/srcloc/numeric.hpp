#pragma once

#include <cmath>
#include <cstdint>

namespace srcloc {

// splitmix64 finalizer; used to derive independent, order-free random
// streams from (seed, index, ...) tuples.
constexpr std::uint64_t splitmix64(std::uint64_t x)
{
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

constexpr std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b)
{
    return splitmix64(splitmix64(a) ^ (b + 0x632be59bd9b4e019ULL));
}

/// Maps 64 random bits to a double strictly inside (0, 1).
constexpr double unit_open(std::uint64_t bits)
{
    return (static_cast<double>(bits >> 11) + 0.5) * 0x1.0p-53;
}

/// Neumaier compensated summation.
class CompensatedSum {
public:
    void add(double x)
    {
        const double t = sum_ + x;
        if (std::fabs(sum_) >= std::fabs(x))
            carry_ += (sum_ - t) + x;
        else
            carry_ += (x - t) + sum_;
        sum_ = t;
    }
    double value() const { return sum_ + carry_; }

private:
    double sum_ = 0.0;
    double carry_ = 0.0;
};

}  // namespace srcloc
