#pragma once

// CSV output with a fixed float format so identical runs produce
// byte-identical files.  Data files carry no timestamps.

#include <cstdio>
#include <ostream>
#include <string>
#include <vector>

#include "hwrd/series.hpp"

namespace hwrd {

inline std::string csv_num(double x) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.12e", x);
    return buf;
}

// header: t,probe_id,v,w1..wd — rows ascending in t, probe_id within each t
inline void write_series_csv(std::ostream& os, const std::vector<ProbeSeries>& probes) {
    const std::size_t ng = probes.empty() ? 0 : probes[0].w.size();
    os << "t,probe_id,v";
    for (std::size_t g = 1; g <= ng; ++g) os << ",w" << g;
    os << "\n";
    if (probes.empty()) return;
    const std::size_t n_t = probes[0].t.size();
    for (std::size_t s = 0; s < n_t; ++s) {
        for (std::size_t p = 0; p < probes.size(); ++p) {
            os << csv_num(probes[p].t[s]) << ",p" << (p + 1) << ',' << csv_num(probes[p].v[s]);
            for (std::size_t g = 0; g < ng; ++g) os << ',' << csv_num(probes[p].w[g][s]);
            os << "\n";
        }
    }
}

// header: x[,y[,z]],v,w1..wd — row order matches the x-fastest flattening
inline void write_snapshot_csv(std::ostream& os, const Snapshot& snap) {
    const std::size_t ng = snap.w.size();
    os << "x";
    if (snap.dim > 1) os << ",y";
    if (snap.dim > 2) os << ",z";
    os << ",v";
    for (std::size_t g = 1; g <= ng; ++g) os << ",w" << g;
    os << "\n";
    const auto& n = snap.v.n;
    for (std::size_t k3 = 0, c = 0; k3 < n[2]; ++k3)
        for (std::size_t k2 = 0; k2 < n[1]; ++k2)
            for (std::size_t k1 = 0; k1 < n[0]; ++k1, ++c) {
                os << csv_num(snap.coords[0][k1]);
                if (snap.dim > 1) os << ',' << csv_num(snap.coords[1][k2]);
                if (snap.dim > 2) os << ',' << csv_num(snap.coords[2][k3]);
                os << ',' << csv_num(snap.v.v[c]);
                for (std::size_t g = 0; g < ng; ++g) os << ',' << csv_num(snap.w[g].v[c]);
                os << "\n";
            }
}

inline void write_comparison_csv(std::ostream& os,
                                 const std::vector<ProbeComparison>& cmp, int dim) {
    os << "probe_id,x";
    if (dim > 1) os << ",y";
    if (dim > 2) os << ",z";
    os << ",max_abs_diff,mean_abs_diff,t_at_max\n";
    for (std::size_t p = 0; p < cmp.size(); ++p) {
        os << 'p' << (p + 1) << ',' << csv_num(cmp[p].location[0]);
        if (dim > 1) os << ',' << csv_num(cmp[p].location[1]);
        if (dim > 2) os << ',' << csv_num(cmp[p].location[2]);
        os << ',' << csv_num(cmp[p].max_abs_diff) << ',' << csv_num(cmp[p].mean_abs_diff)
           << ',' << csv_num(cmp[p].t_at_max) << "\n";
    }
}

}  // namespace hwrd
