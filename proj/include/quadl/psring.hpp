// Symmetric functions of k variables in the power-sum basis, truncated at a
// total weight D.  An element is a vector of coefficients indexed by
// partitions nu (|nu| <= D) standing for P_nu = prod_i P_{nu_i}, where
// P_l = sum_j z_j^l.  P_0 = k never appears in the basis; it is folded into
// coefficients when elements are built.
#pragma once

#include <cstdint>
#include <memory>
#include <mutex>
#include <unordered_map>
#include <vector>

#include "quadl/ddreal.hpp"
#include "quadl/ddseries.hpp"

namespace quadl {

class PartitionBasis {
public:
    explicit PartitionBasis(int max_weight);

    int max_weight() const { return D_; }
    std::size_t size() const { return parts_.size(); }
    // indices of weight w are [begin(w), begin(w + 1))
    std::size_t begin(int w) const { return wbegin_[w]; }
    int weight(std::size_t i) const { return weight_[i]; }
    const std::vector<std::uint8_t>& parts(std::size_t i) const { return parts_[i]; }
    int multiplicity(std::size_t i, int part) const;

    // -1 when the partition is absent (weight above D)
    std::int64_t find(const std::vector<int>& parts) const;
    std::int64_t find_hash(std::uint64_t h) const;
    std::uint64_t hash(std::size_t i) const { return hash_[i]; }
    std::uint64_t part_hash(int part) const { return part_hash_[part]; }

    // index of nu union mu; requires weight(i) + weight(j) <= D
    std::int32_t product(std::size_t i, std::size_t j) const;
    // product indices of i with every j of weight <= D - weight(i)
    const std::int32_t* product_row(std::size_t i) const {
        build_products();
        return prod_.data() + prod_off_[i];
    }

private:
    void build_products() const;

    int D_;
    std::vector<std::vector<std::uint8_t>> parts_;
    std::vector<int> weight_;
    std::vector<std::size_t> wbegin_;
    std::vector<std::uint64_t> hash_, part_hash_;
    std::unordered_map<std::uint64_t, std::int32_t> index_;
    std::unique_ptr<std::once_flag> once_ = std::make_unique<std::once_flag>();
    mutable std::vector<std::int32_t> prod_;
    mutable std::vector<std::size_t> prod_off_;
};

using RingElt = std::vector<DD>;

RingElt ring_zero(const PartitionBasis& B);
RingElt ring_mul(const PartitionBasis& B, const RingElt& x, const RingElt& y);
RingElt ring_exp(const PartitionBasis& B, const RingElt& x);
RingElt ring_log(const PartitionBasis& B, const RingElt& x);
void ring_axpy(RingElt& y, const DD& a, const RingElt& x);

// sum_j f(z_j) = sum_l f_l P_l with P_0 = k
RingElt ring_linear(const PartitionBasis& B, const Series& f, int k);
// exp(sum_j f(z_j)) in closed form
RingElt ring_exp_linear(const PartitionBasis& B, const Series& f, int k);
// sum_{i <= j} f(z_i + z_j)
RingElt ring_pair(const PartitionBasis& B, const Series& f, int k);

// value at a point, given power sums p[l] = sum_j z_j^l for l = 1..D
CDD ring_eval(const PartitionBasis& B, const RingElt& x, const std::vector<CDD>& p);

// chi^lambda(mu) for lambda = (k, k-1, ..., 1) and every mu of weight
// k(k+1)/2, in basis order starting at B.begin(k(k+1)/2)
std::vector<DD> staircase_characters(const PartitionBasis& B, int k);
// single value by Murnaghan-Nakayama, for tests
__int128 character(const std::vector<int>& lambda, const std::vector<int>& mu);

}  // namespace quadl
