// Copyright 2026 qnoise Contributors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "qnoise/analysis.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace qnoise {

namespace {

double log_in_base(double x, LogBase base) {
    return base == LogBase::natural ? std::log(x) : std::log2(x);
}

void check_same_size(std::span<const double> p, std::span<const double> q) {
    if (p.size() != q.size() || p.empty()) {
        throw std::invalid_argument("distributions must share a nonzero size");
    }
}

// Joint distribution over (group_a value, group_b value) from a marginal
// whose sets are the concatenation of disjoint groups.
struct GroupedJoint {
    size_t dim_a, dim_b;
    std::vector<double> joint;  // [a * dim_b + b]
};

GroupedJoint group_pair(
    const ProbVector &p, std::span<const size_t> group_a, std::span<const size_t> group_b) {
    auto a = normalize_subset(group_a, p.layout.num_sets());
    auto b = normalize_subset(group_b, p.layout.num_sets());
    for (size_t x : a) {
        if (std::binary_search(b.begin(), b.end(), x)) {
            throw std::invalid_argument("groups of sets must be disjoint");
        }
    }
    std::vector<size_t> both = a;
    both.insert(both.end(), b.begin(), b.end());
    std::sort(both.begin(), both.end());
    ProbVector marg = marginalize(p, both);

    // Positions of each group's sets inside the sorted union.
    auto positions = [&](const std::vector<size_t> &group) {
        std::vector<size_t> pos;
        for (size_t g : group) {
            pos.push_back(std::lower_bound(both.begin(), both.end(), g) - both.begin());
        }
        return pos;
    };
    auto pos_a = positions(a);
    auto pos_b = positions(b);

    GroupedJoint out;
    out.dim_a = size_t{1} << a.size();
    out.dim_b = size_t{1} << b.size();
    out.joint.assign(out.dim_a * out.dim_b, 0.0);
    for (size_t idx = 0; idx < marg.values.size(); idx++) {
        uint64_t xa = compress_bits(idx, pos_a);
        uint64_t xb = compress_bits(idx, pos_b);
        out.joint[xa * out.dim_b + xb] += marg.values[idx];
    }
    return out;
}

}  // namespace

double kl_divergence(std::span<const double> p, std::span<const double> q) {
    check_same_size(p, q);
    double sum = 0.0;
    for (size_t j = 0; j < p.size(); j++) {
        if (p[j] == 0.0) {
            continue;
        }
        if (q[j] == 0.0) {
            throw std::domain_error(
                "kl_divergence: q vanishes at index " + std::to_string(j) +
                " where p does not; use jensen_shannon_distance for distributions with mismatched support");
        }
        sum += p[j] * std::log(p[j] / q[j]);
    }
    return std::max(sum, 0.0);
}

double jensen_shannon_distance(std::span<const double> p, std::span<const double> q, LogBase base) {
    check_same_size(p, q);
    double divergence = 0.0;
    for (size_t j = 0; j < p.size(); j++) {
        double m = 0.5 * (p[j] + q[j]);
        if (p[j] > 0.0) {
            divergence += 0.5 * p[j] * log_in_base(p[j] / m, base);
        }
        if (q[j] > 0.0) {
            divergence += 0.5 * q[j] * log_in_base(q[j] / m, base);
        }
    }
    return std::sqrt(std::max(divergence, 0.0));
}

double hellinger_distance(std::span<const double> p, std::span<const double> q) {
    check_same_size(p, q);
    // Half the squared distance between the root vectors; equivalent to
    // 1 - sum sqrt(p q) but exact for identical inputs.
    double squared = 0.0;
    for (size_t j = 0; j < p.size(); j++) {
        double d = std::sqrt(p[j]) - std::sqrt(q[j]);
        squared += d * d;
    }
    return std::sqrt(0.5 * squared);
}

double total_variation_distance(std::span<const double> p, std::span<const double> q) {
    check_same_size(p, q);
    double sum = 0.0;
    for (size_t j = 0; j < p.size(); j++) {
        sum += std::abs(p[j] - q[j]);
    }
    return 0.5 * sum;
}

double mutual_information(
    const ProbVector &p, std::span<const size_t> group_a, std::span<const size_t> group_b, LogBase base) {
    GroupedJoint g = group_pair(p, group_a, group_b);
    std::vector<double> pa(g.dim_a, 0.0), pb(g.dim_b, 0.0);
    for (size_t xa = 0; xa < g.dim_a; xa++) {
        for (size_t xb = 0; xb < g.dim_b; xb++) {
            pa[xa] += g.joint[xa * g.dim_b + xb];
            pb[xb] += g.joint[xa * g.dim_b + xb];
        }
    }
    double info = 0.0;
    for (size_t xa = 0; xa < g.dim_a; xa++) {
        for (size_t xb = 0; xb < g.dim_b; xb++) {
            double pxy = g.joint[xa * g.dim_b + xb];
            if (pxy > 0.0) {
                info += pxy * log_in_base(pxy / (pa[xa] * pb[xb]), base);
            }
        }
    }
    return std::max(info, 0.0);
}

double conditional_mutual_information(
    const ProbVector &p,
    std::span<const size_t> group_a,
    std::span<const size_t> group_b,
    std::span<const size_t> group_c,
    LogBase base) {
    auto a = normalize_subset(group_a, p.layout.num_sets());
    auto b = normalize_subset(group_b, p.layout.num_sets());
    auto c = normalize_subset(group_c, p.layout.num_sets());
    std::vector<size_t> all = a;
    all.insert(all.end(), b.begin(), b.end());
    all.insert(all.end(), c.begin(), c.end());
    std::sort(all.begin(), all.end());
    if (std::adjacent_find(all.begin(), all.end()) != all.end()) {
        throw std::invalid_argument("conditional_mutual_information: groups must be pairwise disjoint");
    }
    ProbVector marg = marginalize(p, all);

    auto positions = [&](const std::vector<size_t> &group) {
        std::vector<size_t> pos;
        for (size_t g : group) {
            pos.push_back(std::lower_bound(all.begin(), all.end(), g) - all.begin());
        }
        return pos;
    };
    auto pos_a = positions(a);
    auto pos_b = positions(b);
    auto pos_c = positions(c);
    size_t dim_a = size_t{1} << a.size();
    size_t dim_b = size_t{1} << b.size();
    size_t dim_c = size_t{1} << c.size();

    std::vector<double> pxyz(dim_a * dim_b * dim_c, 0.0);
    for (size_t idx = 0; idx < marg.values.size(); idx++) {
        uint64_t xa = compress_bits(idx, pos_a);
        uint64_t xb = compress_bits(idx, pos_b);
        uint64_t xc = compress_bits(idx, pos_c);
        pxyz[(xa * dim_b + xb) * dim_c + xc] += marg.values[idx];
    }
    std::vector<double> pz(dim_c, 0.0), pxz(dim_a * dim_c, 0.0), pyz(dim_b * dim_c, 0.0);
    for (size_t xa = 0; xa < dim_a; xa++) {
        for (size_t xb = 0; xb < dim_b; xb++) {
            for (size_t xc = 0; xc < dim_c; xc++) {
                double v = pxyz[(xa * dim_b + xb) * dim_c + xc];
                pz[xc] += v;
                pxz[xa * dim_c + xc] += v;
                pyz[xb * dim_c + xc] += v;
            }
        }
    }
    double info = 0.0;
    for (size_t xa = 0; xa < dim_a; xa++) {
        for (size_t xb = 0; xb < dim_b; xb++) {
            for (size_t xc = 0; xc < dim_c; xc++) {
                double v = pxyz[(xa * dim_b + xb) * dim_c + xc];
                if (v > 0.0) {
                    info += v * log_in_base(
                                    pz[xc] * v / (pxz[xa * dim_c + xc] * pyz[xb * dim_c + xc]), base);
                }
            }
        }
    }
    return std::max(info, 0.0);
}

std::vector<double> covariance_matrix(const ProbVector &p) {
    size_t k = p.layout.num_sets();
    if (p.values.size() != p.layout.dim()) {
        throw std::invalid_argument("covariance_matrix: malformed ProbVector");
    }
    std::vector<double> mean(k, 0.0);
    std::vector<double> second(k * k, 0.0);
    for (size_t idx = 0; idx < p.values.size(); idx++) {
        double v = p.values[idx];
        if (v == 0.0) {
            continue;
        }
        for (size_t i = 0; i < k; i++) {
            if (!((idx >> i) & 1u)) {
                continue;
            }
            mean[i] += v;
            for (size_t j = 0; j < k; j++) {
                if ((idx >> j) & 1u) {
                    second[i * k + j] += v;
                }
            }
        }
    }
    std::vector<double> cov(k * k);
    for (size_t i = 0; i < k; i++) {
        for (size_t j = 0; j < k; j++) {
            cov[i * k + j] = second[i * k + j] - mean[i] * mean[j];
        }
    }
    return cov;
}

CorrelationMatrix correlation_matrix(const ProbVector &p) {
    size_t k = p.layout.num_sets();
    auto cov = covariance_matrix(p);
    CorrelationMatrix out;
    out.layout = p.layout;
    out.values.assign(k * k, 0.0);
    out.zero_variance.assign(k, 0);
    std::vector<double> scale(k, 0.0);
    for (size_t i = 0; i < k; i++) {
        double var = cov[i * k + i];
        if (var > 0.0) {
            scale[i] = 1.0 / std::sqrt(var);
        } else {
            out.zero_variance[i] = 1;
        }
    }
    for (size_t i = 0; i < k; i++) {
        out.values[i * k + i] = 1.0;
        for (size_t j = i + 1; j < k; j++) {
            double q = 0.0;
            if (!out.zero_variance[i] && !out.zero_variance[j]) {
                q = std::clamp(cov[i * k + j] * scale[i] * scale[j], -1.0, 1.0);
            }
            out.values[i * k + j] = q;
            out.values[j * k + i] = q;
        }
    }
    return out;
}

FidelityResult fidelity_from_eigenvalues(const EigenvalueVector &eigs, std::span<const size_t> subset) {
    eigs.validate_shape();
    auto kept = normalize_subset(subset, eigs.layout.num_sets());
    EigenvalueVector marg = marginalize_eigs(eigs, kept);

    std::vector<double> set_multiplicity;
    size_t n_sub = 0;
    for (const auto &set : marg.layout.sets) {
        n_sub += set.size();
        set_multiplicity.push_back(set.size() == 1 ? 3.0 : 15.0);
    }
    double weighted_sum = 0.0;
    for (size_t b = 1; b < marg.values.size(); b++) {
        double weight = 1.0;
        for (size_t i = 0; i < set_multiplicity.size(); i++) {
            if ((b >> i) & 1u) {
                weight *= set_multiplicity[i];
            }
        }
        weighted_sum += weight * marg.values[b];
    }
    double d = std::pow(2.0, static_cast<double>(n_sub));
    double mean = weighted_sum / (d * d - 1.0);

    FidelityResult result;
    result.mean_eigenvalue = mean;
    result.fidelity = ((d - 1.0) * mean + 1.0) / d;
    result.average_error_rate = 1.0 - result.fidelity;
    return result;
}

}  // namespace qnoise
