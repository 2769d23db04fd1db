#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <string_view>

#include "normreg/linalg.hpp"

namespace normreg {

enum class DistKind { gaussian, signed_bernoulli, symmetric_pareto };

std::string to_string(DistKind k);
DistKind dist_kind_from_string(std::string_view s);

/// Declarative description of the i.i.d. symmetric entry law.
///   gaussian          N(0, 1)
///   signed_bernoulli  +-m with probability p/2 each, else 0; m = 1/sqrt(p)
///                     when normalize, else 1
///   symmetric_pareto  density (alpha/2) x0^alpha |x|^-(alpha+1) for |x| >= x0;
///                     normalize picks x0 so that E X^2 = 1
struct DistributionSpec {
    DistKind kind = DistKind::gaussian;
    double p = 1.0;       // signed_bernoulli only
    double alpha = 3.0;   // symmetric_pareto only
    bool normalize = true;

    /// Throws std::invalid_argument on alpha <= 2 or p outside (0, 1].
    void validate() const;

    /// Lower cutoff x0 of |X| for the Pareto law under the current
    /// normalization (1/sqrt(3) at alpha = 3 with normalize).
    double pareto_x0() const;

    /// Analytic variance of one entry.
    double variance() const;

    std::string to_json() const;
    static DistributionSpec from_json(const std::string& text);
};

/// Per-(trial, purpose) sub-seed: a fixed 64-bit mixing hash of the triple,
/// so streams are reproducible independent of scheduling.
std::uint64_t derive_seed(std::uint64_t master_seed, std::uint64_t trial,
                          std::string_view purpose);

/// Deterministic sample stream. All transforms are implemented on top of the
/// raw mt19937_64 output so two streams with equal seeds are bit-identical.
class RngStream {
public:
    explicit RngStream(std::uint64_t seed) : eng_(seed) {}

    std::uint64_t next_u64() { return eng_(); }

    /// Uniform on (0, 1].
    double uniform01() {
        return static_cast<double>((eng_() >> 11) + 1) * 0x1.0p-53;
    }

    double gaussian();
    double sample(const DistributionSpec& spec);

private:
    std::mt19937_64 eng_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

/// n x n matrix with i.i.d. entries from `spec`, filled row-major from the
/// stream. Deterministic given the stream state.
DenseMatrix sample_matrix(const DistributionSpec& spec, std::size_t n, RngStream& rng);

/// Exact 2^-l quantile of X^2 for the symmetric Pareto law with cutoff x0:
/// q_l = x0^2 * 2^(2l/alpha) for l >= 1, and 0 for l <= 0.
double pareto_square_quantile(double alpha, double x0, int l);

}  // namespace normreg
