// Copyright 2026 The SparQ Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <ostream>
#include <tuple>
#include <utility>
#include <vector>

#include "sparq/qlss/walk.hpp"

namespace sparq::qlss {

/// One finished walk.
struct SweepSample {
    Variant variant = Variant::PositiveDefinite;
    std::size_t N = 0;
    double kappa = 0.0;
    std::size_t T = 0;
    std::size_t rep = 0;
    std::uint64_t seed = 0;
    double error = 0.0;
    double norm_drift = 0.0;
    std::size_t peak_branches = 0;
};

/// Mean error against T for one (variant, N, kappa), with a least-squares
/// line log(error) = slope * log(1/T) + intercept fitted over T >= fit_min_T.
/// error ~ theta / T gives slope 1 and theta = exp(intercept).
struct ErrorCurve {
    Variant variant = Variant::PositiveDefinite;
    std::size_t N = 0;
    double kappa = 0.0;
    std::size_t reps = 0;
    std::size_t fit_min_T = 0;
    std::vector<std::size_t> T;
    std::vector<double> mean_error;
    double slope = 0.0;
    double intercept = 0.0;
    double max_norm_drift = 0.0;

    double theta() const { return std::exp(intercept); }
    double fitted(std::size_t t) const { return std::exp(intercept - slope * std::log(static_cast<double>(t))); }
};

struct SweepConfig {
    std::vector<unsigned> sizes { 2, 3, 4 };
    std::vector<double> kappas { 10.0, 30.0, 50.0 };
    std::vector<Variant> variants { Variant::PositiveDefinite, Variant::NonHermitian };
    std::vector<std::size_t> T_grid { 100, 1000, 10000 };
    std::size_t reps = 10;
    std::uint64_t seed = 1;
    /// Smallest T included in the slope fit; smaller T are reported but
    /// treated as outside the adiabatic regime.
    std::size_t fit_min_T = 1000;
    /// Worker threads across (system, T, rep) jobs; each walk runs serially.
    unsigned threads = 1;
};

struct SweepResult {
    std::vector<SweepSample> samples;
    std::vector<ErrorCurve> curves;

    const ErrorCurve* find(Variant v, std::size_t N, double kappa) const
    {
        for (const auto& c : curves) {
            if (c.variant == v && c.N == N && c.kappa == kappa) {
                return &c;
            }
        }
        return nullptr;
    }
};

/// System seed for one repetition. Depends only on the base seed and the
/// (variant, n, kappa, rep) tuple, so adding repetitions or grid points
/// never changes existing rows.
inline std::uint64_t system_seed(std::uint64_t base, Variant v, unsigned n, double kappa, std::size_t rep)
{
    auto mix = [](std::uint64_t x) {
        x += 0x9e3779b97f4a7c15ull;
        x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
        x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
        return x ^ (x >> 31);
    };
    std::uint64_t h = mix(base);
    h = mix(h ^ static_cast<std::uint64_t>(v == Variant::NonHermitian));
    h = mix(h ^ n);
    h = mix(h ^ std::bit_cast<std::uint64_t>(kappa));
    return mix(h ^ rep);
}

/// Least-squares slope and intercept of log(y) against log(1/x).
inline std::pair<double, double> fit_loglog(const std::vector<std::size_t>& x, const std::vector<double>& y)
{
    const std::size_t n = x.size();
    if (n < 2) {
        return { 0.0, n == 1 ? std::log(y[0]) : 0.0 };
    }
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const double u = -std::log(static_cast<double>(x[i]));
        const double w = std::log(y[i]);
        sx += u;
        sy += w;
        sxx += u * u;
        sxy += u * w;
    }
    const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    return { slope, (sy - slope * sx) / static_cast<double>(n) };
}

inline SweepSample run_sample(Variant v, unsigned n, double kappa, std::size_t T, std::size_t rep, std::uint64_t base_seed)
{
    SweepSample s;
    s.variant = v;
    s.N = std::size_t { 1 } << n;
    s.kappa = kappa;
    s.T = T;
    s.rep = rep;
    s.seed = system_seed(base_seed, v, n, kappa, rep);
    const QlssCircuit<8> circuit(gen_linear_system(n, kappa, v, s.seed));
    ExecConfig serial;
    WalkConfig walk;
    walk.T = T;
    const auto state = run_adiabatic(circuit, walk, serial);
    s.error = error_metric(circuit, state);
    s.norm_drift = std::abs(std::sqrt(state.norm_squared()) - 1.0);
    s.peak_branches = state.table().max_system_size();
    return s;
}

inline SweepResult experiment_sweep(const SweepConfig& cfg)
{
    if (cfg.reps < 1 || cfg.T_grid.empty()) {
        throw Error(Errc::InvalidArgument, "sweep needs at least one repetition and one T");
    }
    struct Job {
        Variant v;
        unsigned n;
        double kappa;
        std::size_t T;
        std::size_t rep;
    };
    std::vector<Job> jobs;
    for (auto v : cfg.variants) {
        for (auto n : cfg.sizes) {
            for (auto k : cfg.kappas) {
                for (std::size_t rep = 0; rep < cfg.reps; ++rep) {
                    for (auto T : cfg.T_grid) {
                        jobs.push_back({ v, n, k, T, rep });
                    }
                }
            }
        }
    }
    SweepResult result;
    result.samples.resize(jobs.size());
    const auto count = static_cast<std::ptrdiff_t>(jobs.size());
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic, 1) num_threads(static_cast<int>(std::max(1u, cfg.threads)))
#endif
    for (std::ptrdiff_t i = 0; i < count; ++i) {
        const Job& j = jobs[static_cast<std::size_t>(i)];
        result.samples[static_cast<std::size_t>(i)] = run_sample(j.v, j.n, j.kappa, j.T, j.rep, cfg.seed);
    }

    for (auto v : cfg.variants) {
        for (auto n : cfg.sizes) {
            for (auto k : cfg.kappas) {
                ErrorCurve c;
                c.variant = v;
                c.N = std::size_t { 1 } << n;
                c.kappa = k;
                c.reps = cfg.reps;
                c.fit_min_T = cfg.fit_min_T;
                std::vector<std::size_t> fx;
                std::vector<double> fy;
                for (auto T : cfg.T_grid) {
                    double sum = 0.0;
                    for (const auto& s : result.samples) {
                        if (s.variant == v && s.N == c.N && s.kappa == k && s.T == T) {
                            sum += s.error;
                            c.max_norm_drift = std::max(c.max_norm_drift, s.norm_drift);
                        }
                    }
                    c.T.push_back(T);
                    c.mean_error.push_back(sum / static_cast<double>(cfg.reps));
                    if (T >= cfg.fit_min_T) {
                        fx.push_back(T);
                        fy.push_back(c.mean_error.back());
                    }
                }
                std::tie(c.slope, c.intercept) = fit_loglog(fx, fy);
                result.curves.push_back(std::move(c));
            }
        }
    }
    return result;
}

/// variant,N,kappa,T,rep,error,slope_fit
inline void write_sweep_csv(std::ostream& out, const SweepResult& r)
{
    out << "variant,N,kappa,T,rep,error,slope_fit\n";
    out.precision(10);
    for (const auto& s : r.samples) {
        const ErrorCurve* c = r.find(s.variant, s.N, s.kappa);
        out << to_string(s.variant) << ',' << s.N << ',' << s.kappa << ',' << s.T << ',' << s.rep << ',' << s.error
            << ',' << (c ? c->slope : 0.0) << '\n';
    }
}

} // namespace sparq::qlss
