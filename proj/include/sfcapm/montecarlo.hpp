#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <thread>
#include <vector>

#include "sfcapm/errors.hpp"
#include "sfcapm/pricing.hpp"

namespace sfcapm {

// The random pipeline is part of the external contract: reports cite this id,
// and any change to the generator, the normal method, the substream
// derivation, or the block size is a new version.
inline constexpr const char* kGeneratorId =
    "mt19937_64/splitmix64-substreams/box-muller-cos/block65536/v1";

struct SimulationConfig {
    std::uint64_t num_periods;
    std::uint64_t seed;
    double beta;
    double zeta;
    double xi;
    double rho;
    GrowthDistribution dist;
    int threads = 1;

    void validate() const {
        if (num_periods < 1)
            throw domain_error("SimulationConfig: num_periods must be >= 1");
        if (!(beta > 0.0) || !(zeta > 0.0) || !(xi > 0.0))
            throw domain_error("SimulationConfig: beta, zeta, xi must be positive");
        if (threads < 1)
            throw domain_error("SimulationConfig: threads must be >= 1");
        dist.validate();
    }
};

struct SimulationReport {
    double sample_mean_equity_return;
    double mean_std_error;
    double sample_euler_residual; // mean of RHS/LHS - 1 of the pricing relation
    double euler_std_error;
    double closed_form_equity_return;
    double closed_form_risk_free;
    double closed_form_price_dividend;
    std::uint64_t num_periods;
    std::uint64_t seed;
    std::string generator;

    bool operator==(const SimulationReport&) const = default;
};

namespace mc_detail {

inline constexpr std::uint64_t kBlockPeriods = 65536;

// splitmix64 finalizer; derives the seed of substream `index` from the master
// seed without sequential state.
inline std::uint64_t substream_seed(std::uint64_t master, std::uint64_t index) {
    std::uint64_t z = master + (index + 1) * 0x9E3779B97F4A7C15ull;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

// Standard normal via Box-Muller, cosine branch only: every draw consumes
// exactly two engine outputs, so the stream layout is fixed.
class NormalSampler {
public:
    explicit NormalSampler(std::uint64_t seed) : eng_(seed) {}

    double next() {
        const double u1 = uniform_open0();
        const double u2 = uniform_open0();
        return std::sqrt(-2.0 * std::log(u1)) *
               std::cos(2.0 * 3.141592653589793238462643383279502884 * u2);
    }

private:
    // uniform on (0, 1]: log stays finite
    double uniform_open0() {
        return static_cast<double>((eng_() >> 11) + 1) * 0x1.0p-53;
    }

    std::mt19937_64 eng_;
};

struct BlockSums {
    double dr = 0.0;  // sum of (return - center_r)
    double dr2 = 0.0; // sum of squares of the same
    double dq = 0.0;  // sum of (euler ratio - 1)
    double dq2 = 0.0;
};

inline BlockSums combine(const BlockSums& a, const BlockSums& b) {
    return {a.dr + b.dr, a.dr2 + b.dr2, a.dq + b.dq, a.dq2 + b.dq2};
}

// Order-independent pairwise reduction over the block index range [lo, hi).
inline BlockSums pairwise_reduce(const std::vector<BlockSums>& blocks, std::size_t lo,
                                 std::size_t hi) {
    if (hi - lo == 1) return blocks[lo];
    const std::size_t mid = lo + (hi - lo) / 2;
    return combine(pairwise_reduce(blocks, lo, mid), pairwise_reduce(blocks, mid, hi));
}

} // namespace mc_detail

// Simulates the i.i.d. lognormal exchange economy: per-period equity return
// ((v+1)/v) x_t with the equilibrium price-dividend ratio v, plus a sampled
// check of the pricing relation (mean of RHS/LHS - 1, zero in expectation at
// equilibrium prices).
//
// Periods are split into fixed 65536-period blocks; block i draws from its
// own generator seeded by splitmix64(seed, i), and block sums are reduced
// pairwise in index order. The report is therefore byte-identical for any
// thread count.
inline SimulationReport simulate(const SimulationConfig& config) {
    config.validate();

    const double v = price_dividend_ratio(config.beta, config.zeta, config.rho, config.dist);
    const double mu = config.dist.mu_x;
    const double sigma = std::sqrt(config.dist.sigma2_x);
    const double return_coef = (v + 1.0) / v;
    // RHS/LHS of the pricing relation at p = v y, c = y reduces to
    // beta zeta (v+1)/v x^{1-rho} per draw.
    const double euler_coef = config.beta * config.zeta * (v + 1.0) / v;
    const double one_m_rho = 1.0 - config.rho;

    // deterministic centers keep the variance accumulation exact when the
    // draws are degenerate
    const double center_r =
        return_coef * lognormal_power_moment(mu, config.dist.sigma2_x, 1.0);

    const std::uint64_t n = config.num_periods;
    const std::size_t num_blocks =
        static_cast<std::size_t>((n + mc_detail::kBlockPeriods - 1) / mc_detail::kBlockPeriods);
    std::vector<mc_detail::BlockSums> blocks(num_blocks);

    auto run_block = [&](std::size_t bi) {
        mc_detail::NormalSampler rng(mc_detail::substream_seed(config.seed, bi));
        const std::uint64_t begin = bi * mc_detail::kBlockPeriods;
        const std::uint64_t end = std::min<std::uint64_t>(begin + mc_detail::kBlockPeriods, n);
        mc_detail::BlockSums s;
        for (std::uint64_t t = begin; t < end; ++t) {
            const double ln_x = mu + sigma * rng.next();
            const double dr = return_coef * std::exp(ln_x) - center_r;
            const double dq = euler_coef * std::exp(one_m_rho * ln_x) - 1.0;
            s.dr += dr;
            s.dr2 += dr * dr;
            s.dq += dq;
            s.dq2 += dq * dq;
        }
        blocks[bi] = s;
    };

    const std::size_t threads =
        std::min<std::size_t>(static_cast<std::size_t>(config.threads), num_blocks);
    if (threads <= 1) {
        for (std::size_t bi = 0; bi < num_blocks; ++bi) run_block(bi);
    } else {
        std::vector<std::thread> pool;
        pool.reserve(threads);
        for (std::size_t j = 0; j < threads; ++j)
            pool.emplace_back([&, j] {
                for (std::size_t bi = j; bi < num_blocks; bi += threads) run_block(bi);
            });
        for (auto& th : pool) th.join();
    }

    const mc_detail::BlockSums total = mc_detail::pairwise_reduce(blocks, 0, num_blocks);
    const double dn = static_cast<double>(n);

    auto std_error = [dn](double sum, double sum2) {
        if (dn < 2.0) return 0.0;
        const double var = std::max(0.0, (sum2 - sum * sum / dn) / (dn - 1.0));
        return std::sqrt(var / dn);
    };

    SimulationReport report;
    report.sample_mean_equity_return = center_r + total.dr / dn;
    report.mean_std_error = std_error(total.dr, total.dr2);
    report.sample_euler_residual = total.dq / dn;
    report.euler_std_error = std_error(total.dq, total.dq2);
    report.closed_form_equity_return =
        expected_equity_return(config.beta, config.zeta, config.rho, config.dist);
    report.closed_form_risk_free =
        risk_free_rate(config.beta, config.xi, config.rho, config.dist);
    report.closed_form_price_dividend = v;
    report.num_periods = n;
    report.seed = config.seed;
    report.generator = kGeneratorId;
    return report;
}

} // namespace sfcapm
