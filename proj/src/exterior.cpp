#include "logfrob/exterior.hpp"

#include <bit>
#include <map>
#include <mutex>

#include "logfrob/error.hpp"

namespace logfrob {

int binom(int n, int k)
{
    if (k < 0 || k > n)
        return 0;
    long long r = 1;
    for (int t = 0; t < k; ++t)
        r = r * (n - t) / (t + 1);
    return static_cast<int>(r);
}

const std::vector<uint32_t>& wedge_masks(int n, int i)
{
    static std::mutex mu;
    static std::map<std::pair<int, int>, std::vector<uint32_t>> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto key = std::make_pair(n, i);
    auto it = cache.find(key);
    if (it != cache.end())
        return it->second;
    std::vector<uint32_t> masks;
    if (i >= 0 && i <= n) {
        // lex enumeration of increasing tuples
        std::vector<int> idx(i);
        for (int t = 0; t < i; ++t)
            idx[t] = t;
        while (true) {
            uint32_t m = 0;
            for (int t = 0; t < i; ++t)
                m |= 1u << idx[t];
            masks.push_back(m);
            if (i == 0)
                break;
            int t = i - 1;
            while (t >= 0 && idx[t] == n - i + t)
                --t;
            if (t < 0)
                break;
            ++idx[t];
            for (int u = t + 1; u < i; ++u)
                idx[u] = idx[u - 1] + 1;
        }
    }
    return cache.emplace(key, std::move(masks)).first->second;
}

int wedge_index(int n, uint32_t mask)
{
    const auto& masks = wedge_masks(n, std::popcount(mask));
    for (size_t k = 0; k < masks.size(); ++k)
        if (masks[k] == mask)
            return static_cast<int>(k);
    LF_ASSERT(false, "wedge_index: mask not found");
}

int wedge_sign(uint32_t a, uint32_t b)
{
    if (a & b)
        return 0;
    int inv = 0;
    for (uint32_t bb = b; bb; bb &= bb - 1) {
        int el = std::countr_zero(bb);
        inv += std::popcount(a & ~((1u << (el + 1)) - 1)); // elements of a above el
    }
    return (inv % 2 == 0) ? 1 : -1;
}

int removal_sign(uint32_t mask, int el)
{
    LF_ASSERT(mask & (1u << el), "removal_sign: element not in mask");
    int pos = std::popcount(mask & ((1u << el) - 1));
    return (pos % 2 == 0) ? 1 : -1;
}

MatF wedge_by_vector(const VecF& v, int n, int i)
{
    const auto& src = wedge_masks(n, i);
    const auto& dst = wedge_masks(n, i + 1);
    MatF out = MatF::Zero(static_cast<int>(dst.size()),
                          static_cast<int>(src.size()));
    for (size_t c = 0; c < src.size(); ++c) {
        for (int j = 0; j < n; ++j) {
            if (v(j).is_zero() || (src[c] & (1u << j)))
                continue;
            uint32_t m = src[c] | (1u << j);
            int s = wedge_sign(1u << j, src[c]);
            out(wedge_index(n, m), static_cast<int>(c)) += Fp(s) * v(j);
        }
    }
    return out;
}

MatF contraction_by(const Eigen::VectorXi& rho, int n, int i)
{
    const auto& src = wedge_masks(n, i);
    const auto& dst = wedge_masks(n, i - 1);
    MatF out = MatF::Zero(static_cast<int>(dst.size()),
                          static_cast<int>(src.size()));
    for (size_t c = 0; c < src.size(); ++c) {
        for (uint32_t mm = src[c]; mm; mm &= mm - 1) {
            int el = std::countr_zero(mm);
            Fp coef(rho(el));
            if (coef.is_zero())
                continue;
            uint32_t rem = src[c] & ~(1u << el);
            out(wedge_index(n, rem), static_cast<int>(c)) +=
                Fp(removal_sign(src[c], el)) * coef;
        }
    }
    return out;
}

VecF wedge_rows(const MatF& rows, int n)
{
    int k = static_cast<int>(rows.rows());
    VecF acc = VecF::Zero(binom(n, 0));
    acc(0) = Fp(1);
    int deg = 0;
    for (int r = 0; r < k; ++r) {
        MatF w = wedge_by_vector(rows.row(r).transpose(), n, deg);
        // acc lives in Lambda^deg; v wedge acc = (-1)^deg acc wedge v, keep
        // the order rows[0] ^ rows[1] ^ ... by wedging on the left each time
        // with the appropriate sign.
        VecF next = w * acc;
        if (deg % 2 == 1)
            next = -next;
        acc = next;
        ++deg;
    }
    return acc;
}

MatF exterior_power(const MatF& a, int i)
{
    int n = static_cast<int>(a.cols());
    int m = static_cast<int>(a.rows());
    const auto& src = wedge_masks(n, i);
    const auto& dst = wedge_masks(m, i);
    MatF out(static_cast<int>(dst.size()), static_cast<int>(src.size()));
    for (size_t c = 0; c < src.size(); ++c) {
        // columns of a indexed by src[c]
        std::vector<int> cols;
        for (uint32_t mm = src[c]; mm; mm &= mm - 1)
            cols.push_back(std::countr_zero(mm));
        for (size_t r = 0; r < dst.size(); ++r) {
            std::vector<int> rws;
            for (uint32_t mm = dst[r]; mm; mm &= mm - 1)
                rws.push_back(std::countr_zero(mm));
            // determinant of the minor
            MatF minor(i, i);
            for (int x = 0; x < i; ++x)
                for (int y = 0; y < i; ++y)
                    minor(x, y) = a(rws[x], cols[y]);
            // exact determinant by elimination
            Fp det(1);
            for (int col = 0; col < i; ++col) {
                int piv = -1;
                for (int row = col; row < i; ++row)
                    if (!minor(row, col).is_zero()) {
                        piv = row;
                        break;
                    }
                if (piv < 0) {
                    det = Fp(0);
                    break;
                }
                if (piv != col) {
                    minor.row(piv).swap(minor.row(col));
                    det = -det;
                }
                det *= minor(col, col);
                Fp inv = minor(col, col).inv();
                for (int row = col + 1; row < i; ++row) {
                    Fp f = minor(row, col) * inv;
                    if (!f.is_zero())
                        minor.row(row) -= f * minor.row(col);
                }
            }
            out(static_cast<int>(r), static_cast<int>(c)) = det;
        }
    }
    return out;
}

} // namespace logfrob
