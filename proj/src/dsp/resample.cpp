// SPDX-License-Identifier: Apache-2.0
#include "alesal/dsp/resample.hpp"

#include <algorithm>
#include <cmath>

namespace alesal::dsp {

namespace {

csi::UniformSeries resample_sorted(const std::vector<const csi::CsiRecord*>& recs, int pair,
                                   int subcarriers, double f_r, double t_begin, double t_end) {
    csi::UniformSeries out;
    out.pair = pair;
    out.subcarriers = subcarriers;
    out.rate = f_r;
    out.start = t_begin;
    const int n = static_cast<int>(std::floor((t_end - t_begin) * f_r + 1e-9)) + 1;
    out.samples = n;
    out.values.resize(static_cast<std::size_t>(n) * subcarriers);

    const double max_gap = 2.0 / f_r;
    for (std::size_t i = 0; i + 1 < recs.size(); ++i) {
        const double dt = recs[i + 1]->timestamp - recs[i]->timestamp;
        if (dt > max_gap) out.gaps.emplace_back(recs[i]->timestamp, recs[i + 1]->timestamp);
    }

    std::size_t seg = 0;
    for (int k = 0; k < n; ++k) {
        const double t = t_begin + k / f_r;
        while (seg + 2 < recs.size() && recs[seg + 1]->timestamp <= t) ++seg;
        const csi::CsiRecord& a = *recs[seg];
        const csi::CsiRecord& b = *recs[seg + 1];
        double alpha = (t - a.timestamp) / (b.timestamp - a.timestamp);
        alpha = std::clamp(alpha, 0.0, 1.0);
        for (int s = 0; s < subcarriers; ++s) {
            const auto va = a.values[static_cast<std::size_t>(s)];
            const auto vb = b.values[static_cast<std::size_t>(s)];
            out.at(k, s) = {va.real() + alpha * (vb.real() - va.real()),
                            va.imag() + alpha * (vb.imag() - va.imag())};
        }
    }
    return out;
}

std::vector<const csi::CsiRecord*> sorted_pair_view(const std::vector<csi::CsiRecord>& records,
                                                    int pair, int subcarriers) {
    std::vector<const csi::CsiRecord*> view;
    for (const auto& r : records) {
        if (pair >= 0 && r.pair != pair) continue;
        if (static_cast<int>(r.values.size()) != subcarriers)
            throw Error("resample: record with " + std::to_string(r.values.size()) +
                        " values, expected S=" + std::to_string(subcarriers));
        view.push_back(&r);
    }
    std::stable_sort(view.begin(), view.end(), [](const csi::CsiRecord* a, const csi::CsiRecord* b) {
        return a->timestamp < b->timestamp;
    });
    if (view.size() < 2) throw Error("resample: need at least 2 records per pair");
    for (std::size_t i = 0; i + 1 < view.size(); ++i)
        if (!(view[i]->timestamp < view[i + 1]->timestamp))
            throw Error("resample: duplicate timestamp " + std::to_string(view[i]->timestamp));
    return view;
}

}  // namespace

csi::UniformSeries resample(const std::vector<csi::CsiRecord>& pair_records, int subcarriers,
                            double f_r) {
    if (!(f_r > 0)) throw Error("resample: rate must be positive");
    if (pair_records.empty()) throw Error("resample: empty stream");
    auto view = sorted_pair_view(pair_records, -1, subcarriers);
    return resample_sorted(view, pair_records.front().pair, subcarriers, f_r,
                           view.front()->timestamp, view.back()->timestamp);
}

std::vector<csi::UniformSeries> resample_session(const csi::Session& session, double f_r) {
    csi::validate_meta(session.meta);
    if (!(f_r > 0)) throw Error("resample: rate must be positive");

    std::vector<std::vector<const csi::CsiRecord*>> views;
    views.reserve(static_cast<std::size_t>(session.meta.pairs));
    double t_begin = 0.0, t_end = 0.0;
    for (int p = 0; p < session.meta.pairs; ++p) {
        views.push_back(sorted_pair_view(session.records, p, session.meta.subcarriers));
        const double first = views.back().front()->timestamp;
        const double last = views.back().back()->timestamp;
        if (p == 0) {
            t_begin = first;
            t_end = last;
        } else {
            t_begin = std::max(t_begin, first);
            t_end = std::min(t_end, last);
        }
    }
    if (!(t_begin < t_end)) throw Error("resample: pair streams do not overlap in time");

    std::vector<csi::UniformSeries> out;
    out.reserve(views.size());
    for (int p = 0; p < session.meta.pairs; ++p)
        out.push_back(resample_sorted(views[static_cast<std::size_t>(p)], p,
                                      session.meta.subcarriers, f_r, t_begin, t_end));
    return out;
}

}  // namespace alesal::dsp
