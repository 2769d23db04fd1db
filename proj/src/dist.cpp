#include "normreg/dist.hpp"

#include <cmath>
#include <stdexcept>

#include "json.hpp"

namespace normreg {

std::string to_string(DistKind k) {
    switch (k) {
        case DistKind::gaussian: return "gaussian";
        case DistKind::signed_bernoulli: return "signed_bernoulli";
        case DistKind::symmetric_pareto: return "symmetric_pareto";
    }
    return "?";
}

DistKind dist_kind_from_string(std::string_view s) {
    if (s == "gaussian") return DistKind::gaussian;
    if (s == "signed_bernoulli") return DistKind::signed_bernoulli;
    if (s == "symmetric_pareto") return DistKind::symmetric_pareto;
    throw std::invalid_argument("unknown distribution kind: " + std::string(s));
}

void DistributionSpec::validate() const {
    if (kind == DistKind::signed_bernoulli && !(p > 0.0 && p <= 1.0))
        throw std::invalid_argument("signed_bernoulli: p must be in (0, 1]");
    if (kind == DistKind::symmetric_pareto && !(alpha > 2.0))
        throw std::invalid_argument("symmetric_pareto: alpha must be > 2 (finite second moment)");
}

double DistributionSpec::pareto_x0() const {
    if (kind != DistKind::symmetric_pareto)
        throw std::logic_error("pareto_x0: not a pareto spec");
    // E X^2 = alpha x0^2 / (alpha - 2); unit variance needs x0 = sqrt((alpha-2)/alpha)
    return normalize ? std::sqrt((alpha - 2.0) / alpha) : 1.0;
}

double DistributionSpec::variance() const {
    switch (kind) {
        case DistKind::gaussian:
            return 1.0;
        case DistKind::signed_bernoulli: {
            double m = normalize ? 1.0 / std::sqrt(p) : 1.0;
            return p * m * m;
        }
        case DistKind::symmetric_pareto: {
            double x0 = pareto_x0();
            return alpha * x0 * x0 / (alpha - 2.0);
        }
    }
    return 0.0;
}

std::string DistributionSpec::to_json() const {
    nlohmann::json j;
    j["kind"] = to_string(kind);
    if (kind == DistKind::signed_bernoulli) j["p"] = p;
    if (kind == DistKind::symmetric_pareto) j["alpha"] = alpha;
    j["normalize"] = normalize;
    return j.dump();
}

DistributionSpec DistributionSpec::from_json(const std::string& text) {
    auto j = nlohmann::json::parse(text);
    DistributionSpec spec;
    spec.kind = dist_kind_from_string(j.at("kind").get<std::string>());
    if (j.contains("p")) spec.p = j["p"].get<double>();
    if (j.contains("alpha")) spec.alpha = j["alpha"].get<double>();
    if (j.contains("normalize")) spec.normalize = j["normalize"].get<bool>();
    spec.validate();
    return spec;
}

std::uint64_t derive_seed(std::uint64_t master_seed, std::uint64_t trial,
                          std::string_view purpose) {
    // FNV-1a over the triple, then a splitmix64 finalizer.
    std::uint64_t h = 0xcbf29ce484222325ull;
    auto mix_bytes = [&h](const void* data, std::size_t len) {
        auto* bytes = static_cast<const unsigned char*>(data);
        for (std::size_t i = 0; i < len; ++i) {
            h ^= bytes[i];
            h *= 0x100000001b3ull;
        }
    };
    mix_bytes(&master_seed, sizeof(master_seed));
    mix_bytes(&trial, sizeof(trial));
    mix_bytes(purpose.data(), purpose.size());
    h += 0x9e3779b97f4a7c15ull;
    h = (h ^ (h >> 30)) * 0xbf58476d1ce4e5b9ull;
    h = (h ^ (h >> 27)) * 0x94d049bb133111ebull;
    return h ^ (h >> 31);
}

double RngStream::gaussian() {
    if (have_spare_) {
        have_spare_ = false;
        return spare_;
    }
    double u1 = uniform01();
    double u2 = uniform01();
    double r = std::sqrt(-2.0 * std::log(u1));
    double theta = 2.0 * M_PI * u2;
    spare_ = r * std::sin(theta);
    have_spare_ = true;
    return r * std::cos(theta);
}

double RngStream::sample(const DistributionSpec& spec) {
    switch (spec.kind) {
        case DistKind::gaussian:
            return gaussian();
        case DistKind::signed_bernoulli: {
            double m = spec.normalize ? 1.0 / std::sqrt(spec.p) : 1.0;
            double u = uniform01();
            if (u <= spec.p * 0.5) return m;
            if (u <= spec.p) return -m;
            return 0.0;
        }
        case DistKind::symmetric_pareto: {
            // |X| = x0 * U^(-1/alpha), independent sign bit.
            double mag = spec.pareto_x0() * std::pow(uniform01(), -1.0 / spec.alpha);
            return (next_u64() & 1u) ? mag : -mag;
        }
    }
    return 0.0;
}

DenseMatrix sample_matrix(const DistributionSpec& spec, std::size_t n, RngStream& rng) {
    if (n < 1) throw std::invalid_argument("sample_matrix: n must be >= 1");
    spec.validate();
    DenseMatrix a(n, n);
    for (double& x : a.data) x = rng.sample(spec);
    return a;
}

double pareto_square_quantile(double alpha, double x0, int l) {
    if (!(alpha > 2.0)) throw std::invalid_argument("pareto_square_quantile: alpha must be > 2");
    if (!(x0 > 0.0)) throw std::invalid_argument("pareto_square_quantile: x0 must be > 0");
    if (l <= 0) return 0.0;  // P{X^2 > t} = 1 for all t < x0^2
    // Solve (x0/sqrt(t))^alpha = 2^-l.
    return x0 * x0 * std::pow(2.0, 2.0 * l / alpha);
}

}  // namespace normreg
