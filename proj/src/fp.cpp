#include "logfrob/fp.hpp"

#include <ostream>

#include "logfrob/error.hpp"

namespace logfrob {

namespace {
uint32_t g_prime = 0;

bool is_prime(uint32_t p)
{
    if (p < 2)
        return false;
    for (uint32_t d = 2; d * d <= p; ++d)
        if (p % d == 0)
            return false;
    return true;
}
} // namespace

void Fp::set_prime(uint32_t p)
{
    LF_CHECK(is_prime(p), "SpecParseError",
             "p = " + std::to_string(p) + " is not prime");
    LF_CHECK(p < (1u << 15), "SpecParseError",
             "p = " + std::to_string(p) + " too large for this tool");
    g_prime = p;
}

uint32_t Fp::prime()
{
    LF_ASSERT(g_prime != 0, "prime not configured (call Fp::set_prime)");
    return g_prime;
}

Fp Fp::inv() const
{
    LF_CHECK(v_ != 0, "Internal", "division by zero in F_p");
    // Fermat: v^(p-2)
    return fp_pow(*this, prime() - 2);
}

Fp fp_pow(Fp base, uint64_t e)
{
    Fp acc(1);
    while (e) {
        if (e & 1)
            acc *= base;
        base *= base;
        e >>= 1;
    }
    return acc;
}

std::ostream& operator<<(std::ostream& os, Fp x)
{
    return os << x.value();
}

uint64_t Zp2::modulus()
{
    uint64_t p = Fp::prime();
    return p * p;
}

Zp2::Zp2(int64_t n)
{
    int64_t m = static_cast<int64_t>(modulus());
    n %= m;
    if (n < 0)
        n += m;
    v_ = static_cast<uint64_t>(n);
}

Zp2 Zp2::operator-() const
{
    return v_ == 0 ? Zp2() : Zp2(static_cast<int64_t>(modulus() - v_));
}

Zp2 Zp2::operator+(Zp2 o) const
{
    return Zp2(static_cast<int64_t>((v_ + o.v_) % modulus()));
}

Zp2 Zp2::operator-(Zp2 o) const
{
    return Zp2(static_cast<int64_t>((v_ + modulus() - o.v_) % modulus()));
}

Zp2 Zp2::operator*(Zp2 o) const
{
    return Zp2(static_cast<int64_t>((v_ * o.v_) % modulus()));
}

Fp Zp2::divided_by_p() const
{
    uint64_t p = Fp::prime();
    LF_ASSERT(v_ % p == 0, "Zp2 value not divisible by p");
    return Fp(static_cast<int64_t>(v_ / p));
}

} // namespace logfrob
