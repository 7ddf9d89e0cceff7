#include "quadl/psring.hpp"

#include <algorithm>
#include <functional>
#include <stdexcept>

namespace quadl {

namespace {

std::uint64_t splitmix(std::uint64_t& s) {
    std::uint64_t z = (s += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// partitions of n with parts <= maxpart, largest part first
void gen_partitions(int n, int maxpart, std::vector<std::uint8_t>& cur, std::vector<std::vector<std::uint8_t>>& out) {
    if (n == 0) {
        out.push_back(cur);
        return;
    }
    for (int p = std::min(n, maxpart); p >= 1; --p) {
        cur.push_back(static_cast<std::uint8_t>(p));
        gen_partitions(n - p, p, cur, out);
        cur.pop_back();
    }
}

DD from_int128(__int128 v) {
    const double hi = static_cast<double>(v);
    const double lo = static_cast<double>(v - static_cast<__int128>(hi));
    return DD(hi) + DD(lo);
}

}  // namespace

PartitionBasis::PartitionBasis(int max_weight) : D_(max_weight) {
    if (D_ < 0 || D_ > 60) throw std::invalid_argument("PartitionBasis: weight out of range");
    std::uint64_t seed = 0x5eed;
    part_hash_.resize(static_cast<std::size_t>(D_ + 1), 0);
    for (int p = 1; p <= D_; ++p) part_hash_[p] = splitmix(seed);
    for (int w = 0; w <= D_; ++w) {
        wbegin_.push_back(parts_.size());
        std::vector<std::uint8_t> cur;
        gen_partitions(w, w, cur, parts_);
    }
    wbegin_.push_back(parts_.size());
    weight_.resize(parts_.size());
    hash_.resize(parts_.size());
    index_.reserve(parts_.size() * 2);
    for (int w = 0; w <= D_; ++w)
        for (std::size_t i = wbegin_[w]; i < wbegin_[w + 1]; ++i) {
            weight_[i] = w;
            std::uint64_t h = 0;
            for (auto p : parts_[i]) h += part_hash_[p];
            hash_[i] = h;
            if (!index_.emplace(h, static_cast<std::int32_t>(i)).second)
                throw std::logic_error("PartitionBasis: hash collision");
        }
}

int PartitionBasis::multiplicity(std::size_t i, int part) const {
    return static_cast<int>(std::count(parts_[i].begin(), parts_[i].end(), static_cast<std::uint8_t>(part)));
}

std::int64_t PartitionBasis::find_hash(std::uint64_t h) const {
    auto it = index_.find(h);
    return it == index_.end() ? -1 : it->second;
}

std::int64_t PartitionBasis::find(const std::vector<int>& parts) const {
    std::uint64_t h = 0;
    int w = 0;
    for (int p : parts) {
        if (p < 1) throw std::invalid_argument("PartitionBasis::find: parts must be positive");
        w += p;
        if (w > D_) return -1;
        h += part_hash_[p];
    }
    return find_hash(h);
}

void PartitionBasis::build_products() const {
    std::call_once(*once_, [this] {
        std::vector<std::size_t> off(parts_.size() + 1, 0);
        for (std::size_t i = 0; i < parts_.size(); ++i) off[i + 1] = off[i] + wbegin_[D_ - weight_[i] + 1];
        std::vector<std::int32_t> prod(off.back());
        for (std::size_t i = 0; i < parts_.size(); ++i) {
            const std::size_t lim = wbegin_[D_ - weight_[i] + 1];
            for (std::size_t j = 0; j < lim; ++j) prod[off[i] + j] = index_.at(hash_[i] + hash_[j]);
        }
        prod_off_ = std::move(off);
        prod_ = std::move(prod);
    });
}

std::int32_t PartitionBasis::product(std::size_t i, std::size_t j) const {
    build_products();
    if (weight_[i] + weight_[j] > D_) throw std::out_of_range("PartitionBasis::product: weight above D");
    return prod_[prod_off_[i] + j];
}

RingElt ring_zero(const PartitionBasis& B) { return RingElt(B.size(), DD(0.0)); }

void ring_axpy(RingElt& y, const DD& a, const RingElt& x) {
    for (std::size_t i = 0; i < y.size(); ++i)
        if (x[i].hi != 0.0) y[i] += a * x[i];
}

namespace {

// r[weight w] += scale_j * x[weight j] * y[weight w - j], j in [jlo, jhi]
template <class Scale>
void graded_accumulate(const PartitionBasis& B, RingElt& r, const RingElt& x, const RingElt& y, int w, int jlo, int jhi,
                       Scale scale) {
    for (int j = jlo; j <= jhi; ++j) {
        const std::size_t yb = B.begin(w - j), ye = B.begin(w - j + 1);
        for (std::size_t i = B.begin(j); i < B.begin(j + 1); ++i) {
            if (x[i].hi == 0.0) continue;
            const DD f = scale(j) * x[i];
            const std::int32_t* row = B.product_row(i);
            for (std::size_t ii = yb; ii < ye; ++ii)
                if (y[ii].hi != 0.0) r[row[ii]] += f * y[ii];
        }
    }
}

}  // namespace

RingElt ring_mul(const PartitionBasis& B, const RingElt& x, const RingElt& y) {
    RingElt r = ring_zero(B);
    for (int w = 0; w <= B.max_weight(); ++w) graded_accumulate(B, r, x, y, w, 0, w, [](int) { return DD(1.0); });
    return r;
}

RingElt ring_exp(const PartitionBasis& B, const RingElt& x) {
    RingElt e = ring_zero(B);
    e[0] = exp(x[0]);
    // w E_w = sum_j j X_j E_{w-j}
    for (int w = 1; w <= B.max_weight(); ++w) {
        graded_accumulate(B, e, x, e, w, 1, w, [](int j) { return DD(static_cast<double>(j)); });
        const DD inv = 1.0 / DD(static_cast<double>(w));
        for (std::size_t i = B.begin(w); i < B.begin(w + 1); ++i) e[i] = e[i] * inv;
    }
    return e;
}

RingElt ring_log(const PartitionBasis& B, const RingElt& x) {
    if (!(x[0].hi > 0.0)) throw std::domain_error("ring_log: constant term must be positive");
    RingElt g = x;
    const DD inv0 = 1.0 / x[0];
    for (auto& c : g) c = c * inv0;
    RingElt l = ring_zero(B);
    // w L_w = w G_w - sum_{j<w} j L_j G_{w-j}
    for (int w = 1; w <= B.max_weight(); ++w) {
        RingElt acc = ring_zero(B);
        graded_accumulate(B, acc, l, g, w, 1, w - 1, [](int j) { return DD(static_cast<double>(j)); });
        const DD inv = 1.0 / DD(static_cast<double>(w));
        for (std::size_t i = B.begin(w); i < B.begin(w + 1); ++i) l[i] = g[i] - acc[i] * inv;
    }
    l[0] = log(x[0]);
    return l;
}

RingElt ring_linear(const PartitionBasis& B, const Series& f, int k) {
    RingElt r = ring_zero(B);
    if (f.empty()) return r;
    r[0] = f[0] * static_cast<double>(k);
    for (int l = 1; l <= B.max_weight() && l < static_cast<int>(f.size()); ++l) r[B.find({l})] = f[l];
    return r;
}

RingElt ring_exp_linear(const PartitionBasis& B, const Series& f, int k) {
    RingElt r = ring_zero(B);
    const DD c0 = exp((f.empty() ? DD(0.0) : f[0]) * static_cast<double>(k));
    for (std::size_t i = 0; i < B.size(); ++i) {
        DD v = c0;
        const auto& ps = B.parts(i);
        std::size_t a = 0;
        while (a < ps.size()) {
            std::size_t b = a;
            while (b < ps.size() && ps[b] == ps[a]) ++b;
            const int l = ps[a];
            const DD fl = l < static_cast<int>(f.size()) ? f[l] : DD(0.0);
            for (std::size_t m = 1; m <= b - a; ++m) v = v * fl / static_cast<double>(m);
            a = b;
        }
        r[i] = v;
    }
    return r;
}

RingElt ring_pair(const PartitionBasis& B, const Series& f, int k) {
    RingElt r = ring_zero(B);
    if (f.empty()) return r;
    const double kd = k;
    r[0] = f[0] * (0.5 * (kd * kd + kd));
    for (int l = 1; l <= B.max_weight() && l < static_cast<int>(f.size()); ++l) {
        const DD half = ldexp(f[l], -1);
        r[B.find({l})] += half * (2.0 * kd + std::ldexp(1.0, l));
        DD binom(1.0);
        for (int s = 1; s < l; ++s) {
            binom = binom * static_cast<double>(l - s + 1) / static_cast<double>(s);
            r[B.find({std::max(s, l - s), std::min(s, l - s)})] += half * binom;
        }
    }
    return r;
}

CDD ring_eval(const PartitionBasis& B, const RingElt& x, const std::vector<CDD>& p) {
    // monomial values built from the partition without its smallest part
    std::vector<CDD> mono(B.size());
    mono[0] = CDD(1.0);
    CDD sum = CDD(x[0]);
    for (std::size_t i = 1; i < B.size(); ++i) {
        const int last = B.parts(i).back();
        const auto parent = B.find_hash(B.hash(i) - B.part_hash(last));
        mono[i] = mono[parent] * p[last];
        if (x[i].hi != 0.0) sum += mono[i] * x[i];
    }
    return sum;
}

__int128 character(const std::vector<int>& lambda, const std::vector<int>& mu) {
    const int n = static_cast<int>(lambda.size());
    std::uint64_t mask = 0;
    for (int i = 0; i < n; ++i) {
        const int beta = lambda[i] + (n - 1 - i);
        if (beta >= 64) throw std::invalid_argument("character: shape too large");
        mask |= 1ULL << beta;
    }
    std::vector<int> m = mu;
    std::sort(m.rbegin(), m.rend());
    std::function<__int128(std::uint64_t, std::size_t)> rec = [&](std::uint64_t s, std::size_t pos) -> __int128 {
        if (pos == m.size()) return 1;
        const int r = m[pos];
        __int128 total = 0;
        for (int b = r; b < 64; ++b) {
            if (!(s >> b & 1) || (s >> (b - r) & 1)) continue;
            const std::uint64_t between = s & ((1ULL << b) - 1) & ~((1ULL << (b - r + 1)) - 1);
            const __int128 v = rec(s ^ (1ULL << b) ^ (1ULL << (b - r)), pos + 1);
            total += (__builtin_popcountll(between) & 1) ? -v : v;
        }
        return total;
    };
    return rec(mask, 0);
}

std::vector<DD> staircase_characters(const PartitionBasis& B, int k) {
    const int D = k * (k + 1) / 2;
    if (D > B.max_weight()) throw std::invalid_argument("staircase_characters: basis too small");
    if (2 * k > 40) throw std::invalid_argument("staircase_characters: k too large");
    // beta numbers of (k, ..., 1) with k rows are 1, 3, ..., 2k-1
    std::uint64_t mask = 0;
    for (int i = 0; i < k; ++i) mask |= 1ULL << (2 * i + 1);
    std::unordered_map<std::uint64_t, __int128> memo;
    std::function<__int128(std::uint64_t, std::size_t)> rec = [&](std::uint64_t s, std::size_t idx) -> __int128 {
        if (idx == 0) return 1;
        const std::uint64_t key = (s << 24) | idx;
        if (auto it = memo.find(key); it != memo.end()) return it->second;
        const int r = B.parts(idx)[0];
        const auto rest = static_cast<std::size_t>(B.find_hash(B.hash(idx) - B.part_hash(r)));
        __int128 total = 0;
        for (int b = r; b < 2 * k; ++b) {
            if (!(s >> b & 1) || (s >> (b - r) & 1)) continue;
            const std::uint64_t between = s & ((1ULL << b) - 1) & ~((1ULL << (b - r + 1)) - 1);
            const __int128 v = rec(s ^ (1ULL << b) ^ (1ULL << (b - r)), rest);
            total += (__builtin_popcountll(between) & 1) ? -v : v;
        }
        memo.emplace(key, total);
        return total;
    };
    std::vector<DD> out;
    out.reserve(B.begin(D + 1) - B.begin(D));
    for (std::size_t i = B.begin(D); i < B.begin(D + 1); ++i) out.push_back(from_int128(rec(mask, i)));
    return out;
}

}  // namespace quadl
