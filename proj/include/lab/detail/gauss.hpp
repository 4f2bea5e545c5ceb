#pragma once

// Shared fixed-order Gauss-Legendre data (32-point rule stored as the
// positive half; the rule is symmetric about the panel midpoint).

namespace lab::detail {

inline constexpr int kGL32Half = 16;
inline constexpr double kGL32x[kGL32Half] = {
    0.0483076656877383162, 0.1444719615827964934, 0.2392873622521370745,
    0.3318686022821276498, 0.4213512761306353454, 0.5068999089322293900,
    0.5877157572407623290, 0.6630442669302152009, 0.7321821187402896804,
    0.7944837959679424069, 0.8493676137325699701, 0.8963211557660521240,
    0.9349060759377396892, 0.9647622555875064308, 0.9856115115452683354,
    0.9972638618494815635};
inline constexpr double kGL32w[kGL32Half] = {
    0.0965400885147278006, 0.0956387200792748594, 0.0938443990808045654,
    0.0911738786957638847, 0.0876520930044038111, 0.0833119242269467552,
    0.0781938957870703065, 0.0723457941088485062, 0.0658222227763618468,
    0.0586840934785355471, 0.0509980592623761762, 0.0428358980222266807,
    0.0342738629130214331, 0.0253920653092620595, 0.0162743947309056706,
    0.0070186100094700966};

// Composite 32-point Gauss-Legendre sweep of [a, b] in `panels` equal panels.
template <typename F>
void gl32_sweep(double a, double b, int panels, F&& visit) {
    for (int p = 0; p < panels; ++p) {
        double lo = a + (b - a) * p / panels;
        double hi = a + (b - a) * (p + 1) / panels;
        double mid = 0.5 * (lo + hi), half = 0.5 * (hi - lo);
        for (int i = 0; i < kGL32Half; ++i)
            for (double sgn : {-1.0, 1.0})
                visit(mid + sgn * half * kGL32x[i], kGL32w[i] * half);
    }
}

}  // namespace lab::detail
