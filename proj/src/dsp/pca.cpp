// SPDX-License-Identifier: Apache-2.0
#include "alesal/dsp/pca.hpp"

#include <cmath>

namespace alesal::dsp {

PcaResult pca_first_component(const std::vector<double>& data, int time, int subcarriers) {
    if (time < 2) throw Error("pca: need at least 2 time samples");
    if (subcarriers < 1 || data.size() != static_cast<std::size_t>(time) * subcarriers)
        throw Error("pca: data size does not match [time x S]");
    const int T = time, S = subcarriers;

    // Column means and centered data.
    std::vector<double> mean(static_cast<std::size_t>(S), 0.0);
    for (int t = 0; t < T; ++t)
        for (int s = 0; s < S; ++s) mean[static_cast<std::size_t>(s)] += data[static_cast<std::size_t>(t) * S + s];
    for (double& m : mean) m /= T;

    std::vector<double> centered(data.size());
    for (int t = 0; t < T; ++t)
        for (int s = 0; s < S; ++s)
            centered[static_cast<std::size_t>(t) * S + s] =
                data[static_cast<std::size_t>(t) * S + s] - mean[static_cast<std::size_t>(s)];

    // Sample covariance via the mean-centered Gram matrix.
    std::vector<double> cov(static_cast<std::size_t>(S) * S, 0.0);
    for (int t = 0; t < T; ++t) {
        const double* row = centered.data() + static_cast<std::size_t>(t) * S;
        for (int i = 0; i < S; ++i) {
            const double r = row[i];
            if (r == 0.0) continue;
            double* crow = cov.data() + static_cast<std::size_t>(i) * S;
            for (int j = i; j < S; ++j) crow[j] += r * row[j];
        }
    }
    const double denom = static_cast<double>(T - 1);
    for (int i = 0; i < S; ++i)
        for (int j = i; j < S; ++j) {
            cov[static_cast<std::size_t>(i) * S + j] /= denom;
            cov[static_cast<std::size_t>(j) * S + i] = cov[static_cast<std::size_t>(i) * S + j];
        }

    double trace = 0.0;
    for (int i = 0; i < S; ++i) trace += cov[static_cast<std::size_t>(i) * S + i];
    if (trace <= 0.0) throw Error("pca: degenerate window (zero total variance)");

    // Power iteration from a fixed start; restart from canonical basis
    // vectors if the start lies in the null space.
    std::vector<double> v(static_cast<std::size_t>(S), 1.0 / std::sqrt(static_cast<double>(S)));
    std::vector<double> w(static_cast<std::size_t>(S));
    PcaResult result;
    int restarts = 0;
    for (int it = 0; it < 1000; ++it) {
        result.iterations = it + 1;
        for (int i = 0; i < S; ++i) {
            double acc = 0.0;
            const double* crow = cov.data() + static_cast<std::size_t>(i) * S;
            for (int j = 0; j < S; ++j) acc += crow[j] * v[static_cast<std::size_t>(j)];
            w[static_cast<std::size_t>(i)] = acc;
        }
        double norm = 0.0;
        for (double x : w) norm += x * x;
        norm = std::sqrt(norm);
        if (norm == 0.0) {
            if (restarts >= S) throw Error("pca: power iteration found no signal direction");
            std::fill(v.begin(), v.end(), 0.0);
            v[static_cast<std::size_t>(restarts++)] = 1.0;
            continue;
        }
        double delta_plus = 0.0, delta_minus = 0.0;
        for (int i = 0; i < S; ++i) {
            const double nv = w[static_cast<std::size_t>(i)] / norm;
            const double ov = v[static_cast<std::size_t>(i)];
            delta_plus += (nv - ov) * (nv - ov);
            delta_minus += (nv + ov) * (nv + ov);
            v[static_cast<std::size_t>(i)] = nv;
        }
        if (std::min(std::sqrt(delta_plus), std::sqrt(delta_minus)) < 1e-10) break;
    }

    // Rayleigh quotient = top eigenvalue once converged.
    double lambda = 0.0;
    for (int i = 0; i < S; ++i) {
        double acc = 0.0;
        const double* crow = cov.data() + static_cast<std::size_t>(i) * S;
        for (int j = 0; j < S; ++j) acc += crow[j] * v[static_cast<std::size_t>(j)];
        lambda += v[static_cast<std::size_t>(i)] * acc;
    }
    result.top_eigenvalue = lambda;
    result.total_variance = trace;

    result.series.resize(static_cast<std::size_t>(T));
    for (int t = 0; t < T; ++t) {
        double acc = 0.0;
        const double* row = centered.data() + static_cast<std::size_t>(t) * S;
        for (int s = 0; s < S; ++s) acc += row[s] * v[static_cast<std::size_t>(s)];
        result.series[static_cast<std::size_t>(t)] = acc;
    }

    // Fixed sign: positive correlation with the subcarrier-mean series.
    double corr = 0.0;
    for (int t = 0; t < T; ++t) {
        double rowmean = 0.0;
        const double* row = centered.data() + static_cast<std::size_t>(t) * S;
        for (int s = 0; s < S; ++s) rowmean += row[s];
        corr += result.series[static_cast<std::size_t>(t)] * (rowmean / S);
    }
    if (corr < 0)
        for (double& x : result.series) x = -x;

    return result;
}

}  // namespace alesal::dsp
