// Prime-field and Z/p^2 scalars with a session-wide modulus.
//
// The prime is configured once per session (set_prime) and every Fp value
// is a residue in [0, p). Keeping p out of the value type rules out
// mixed-modulus arithmetic at compile time for free.

#ifndef LOGFROB_FP_HPP
#define LOGFROB_FP_HPP

#include <cstdint>
#include <iosfwd>

#include <Eigen/Core>

namespace logfrob {

class Fp {
  public:
    Fp() : v_(0) {}
    Fp(int64_t n)
    {
        int64_t p = static_cast<int64_t>(prime());
        n %= p;
        if (n < 0)
            n += p;
        v_ = static_cast<uint32_t>(n);
    }

    static void set_prime(uint32_t p);
    static uint32_t prime();

    uint32_t value() const { return v_; }
    bool is_zero() const { return v_ == 0; }

    Fp operator-() const { return v_ == 0 ? Fp() : from_raw(prime() - v_); }
    Fp operator+(Fp o) const
    {
        uint32_t s = v_ + o.v_;
        if (s >= prime())
            s -= prime();
        return from_raw(s);
    }
    Fp operator-(Fp o) const
    {
        uint32_t s = v_ + prime() - o.v_;
        if (s >= prime())
            s -= prime();
        return from_raw(s);
    }
    Fp operator*(Fp o) const
    {
        return from_raw(static_cast<uint32_t>(
            (static_cast<uint64_t>(v_) * o.v_) % prime()));
    }
    Fp inv() const;
    Fp operator/(Fp o) const { return *this * o.inv(); }

    Fp& operator+=(Fp o) { return *this = *this + o; }
    Fp& operator-=(Fp o) { return *this = *this - o; }
    Fp& operator*=(Fp o) { return *this = *this * o; }
    Fp& operator/=(Fp o) { return *this = *this / o; }

    bool operator==(Fp o) const { return v_ == o.v_; }
    bool operator!=(Fp o) const { return v_ != o.v_; }

  private:
    static Fp from_raw(uint32_t v)
    {
        Fp x;
        x.v_ = v;
        return x;
    }
    uint32_t v_;
};

std::ostream& operator<<(std::ostream& os, Fp x);

Fp fp_pow(Fp base, uint64_t e);

// Residues mod p^2. Only the lift-validation oracle computes here; all
// downstream arithmetic stays in Fp via the divided (p-part) encoding.
class Zp2 {
  public:
    Zp2() : v_(0) {}
    Zp2(int64_t n);

    static uint64_t modulus(); // p^2

    uint64_t value() const { return v_; }
    Fp reduce() const { return Fp(static_cast<int64_t>(v_ % Fp::prime())); }

    Zp2 operator-() const;
    Zp2 operator+(Zp2 o) const;
    Zp2 operator-(Zp2 o) const;
    Zp2 operator*(Zp2 o) const;
    bool operator==(Zp2 o) const { return v_ == o.v_; }
    bool operator!=(Zp2 o) const { return v_ != o.v_; }

    // For x = p*y with y defined mod p, recover y. Throws if p does not
    // divide x.
    Fp divided_by_p() const;

  private:
    uint64_t v_;
};

} // namespace logfrob

namespace Eigen {

template <>
struct NumTraits<logfrob::Fp> : GenericNumTraits<logfrob::Fp> {
    typedef logfrob::Fp Real;
    typedef logfrob::Fp NonInteger;
    typedef logfrob::Fp Nested;
    enum {
        IsComplex = 0,
        IsInteger = 1,
        IsSigned = 0,
        RequireInitialization = 1,
        ReadCost = 1,
        AddCost = 2,
        MulCost = 4
    };
    static inline logfrob::Fp epsilon() { return logfrob::Fp(); }
    static inline logfrob::Fp dummy_precision() { return logfrob::Fp(); }
};

} // namespace Eigen

#endif
