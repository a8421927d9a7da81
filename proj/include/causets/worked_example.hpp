#pragma once

#include <array>
#include <complex>
#include <string_view>

namespace causets::worked_example {

// Reference values for the three-level worked example of the quantum-action
// process. Data only; the producing code lives in amplitude.hpp.
//
// Sites x1..x8 are the causets of the first three levels, numbered as in the
// growth diagram: x1 the point; x2 the 2-chain, x3 the 2-antichain; x4..x8
// the five 3-element causets. gamma1..gamma6 are the six 3-paths.

inline constexpr std::array<std::string_view, 8> site_literals = {
    "1;",           // x1
    "2;0<1",        // x2
    "2;",           // x3
    "3;0<1,1<2",    // x4  chain
    "3;0<1,0<2",    // x5  one bottom, two tops
    "3;0<1",        // x6  2-chain plus a point
    "3;0<2,1<2",    // x7  two bottoms, one top
    "3;",           // x8  antichain
};

inline constexpr std::array<std::array<int, 3>, 6> path_sites = {{
    {1, 2, 4},  // gamma1 = x1 x2 x4
    {1, 2, 5},  // gamma2 = x1 x2 x5
    {1, 2, 6},  // gamma3 = x1 x2 x6
    {1, 3, 6},  // gamma4 = x1 x3 x6
    {1, 3, 7},  // gamma5 = x1 x3 x7
    {1, 3, 8},  // gamma6 = x1 x3 x8
}};

// Partition function over the first two levels, z(x1), z(x2), z(x3).
inline constexpr std::array<double, 3> z_values = {2.0, 1.0, 2.0};

// Path amplitudes a3(gamma1..gamma6); their sum is 1.
inline constexpr std::array<double, 6> path_amplitudes = {-0.5, 0.5, 0.5, 0.5, 0.25, -0.25};

// Per-path q-measures |a3|^2.
inline constexpr std::array<double, 6> path_measures = {0.25, 0.25, 0.25, 0.25,
                                                        1.0 / 16.0, 1.0 / 16.0};

// q-measures of the site events {x6}, {x4, x5}, {x5, x6}.
inline constexpr double mu_x6 = 1.0;
inline constexpr double mu_x4_x5 = 0.0;
inline constexpr double mu_x5_x6 = 9.0 / 4.0;

// Site amplitudes a(x1)..a(x8); a(x1) = 1 is the empty product.
inline constexpr std::array<double, 8> site_amplitudes = {1.0,  0.5, 0.5, -0.5,
                                                          0.5, 1.0, 0.25, -0.25};

// Named transition amplitudes used by the level-3 products.
inline constexpr std::complex<double> a_x1_x2{0.5, 0.0};
inline constexpr std::complex<double> a_x1_x3{0.5, 0.0};
inline constexpr std::complex<double> a_x2_x4{-1.0, 0.0};
inline constexpr std::complex<double> a_x2_x5{1.0, 0.0};
inline constexpr std::complex<double> a_x2_x6{1.0, 0.0};
inline constexpr std::complex<double> a_x3_x6{1.0, 0.0};
inline constexpr std::complex<double> a_x3_x7{0.5, 0.0};
inline constexpr std::complex<double> a_x3_x8{-0.5, 0.0};

// Offspring counts (including multiplicity) of x4..x8.
inline constexpr std::array<int, 5> offspring_counts = {4, 5, 6, 5, 8};

// Squared norm of the level-3 rank-1 operator: sum |a3|^2.
inline constexpr double rho3_norm = 9.0 / 8.0;

}  // namespace causets::worked_example
