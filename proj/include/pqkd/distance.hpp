// Trace distance between small Hermitian matrices and the bias-bound tables
// that constrain how much the click and error statistics of two intensity
// windows may differ at fixed photon number.
//
// For the yield bounds the relevant pair of states is the basis-averaged
// n-photon matrices of the two windows; for the error bounds it is the pair
// at a single azimuth label of that basis. Azimuthal symmetry makes both
// tables basis-independent, which the tests exploit by computing them along
// the Z and X paths separately and comparing.
#pragma once

#include <array>
#include <utility>
#include <vector>

#include "pqkd/fock.hpp"
#include "pqkd/linalg.hpp"
#include "pqkd/regions.hpp"

namespace pqkd {

// One half the sum of absolute eigenvalues of a - b.
double trace_distance(const HermMatrix& a, const HermMatrix& b);

// Unordered window pairs indexing the bias tables.
inline constexpr std::array<std::pair<Window, Window>, 3> kWindowPairs = {{
    {Window::signal, Window::decoy},
    {Window::signal, Window::vacuum},
    {Window::decoy, Window::vacuum},
}};
int pair_index(Window j, Window k);

// delta[pair][n] bounds |y_{j,n} - y_{k,n}|; deltat[pair][n] bounds
// |e_{j,n} - e_{k,n}|. Entries run over n = 0..n_cut.
struct BiasBounds {
  int n_cut = 0;
  std::array<std::vector<double>, 3> delta;
  std::array<std::vector<double>, 3> deltat;
};

// Builds both tables from the n-photon states of the three windows: delta
// from the basis-averaged states, deltat from the states at the basis' first
// azimuth label. The basis argument selects which pair of labels is used;
// the result is the same for both (checked in the tests).
BiasBounds bias_tables(const TransmitterParams& params, int n_cut, const QuadSpec& quad = {},
                       Basis basis = Basis::Z);

// Same tables assembled from precomputed moment tables (indexed by Window),
// for callers that already ran the per-window integration pass.
BiasBounds bias_tables_from_moments(const std::array<FockMoments, 3>& moments, double delta_phi,
                                    int n_cut, Basis basis = Basis::Z);

}  // namespace pqkd
