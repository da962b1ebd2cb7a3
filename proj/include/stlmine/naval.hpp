#pragma once

#include <cstdint>
#include <string>

#include "stlmine/dataset.hpp"

namespace stlmine {

// Synthetic two-variable vessel-trajectory dataset. Every trace starts in the
// upper-right region of the (x1, x2) plane and is sampled on a uniform grid.
//
//   normal traces keep x2 above 22.46 until x1 drops below 31.65 somewhere
//     inside the time window [49, 287];
//   "red" anomalies let x2 dip below 22.46 before x1 ever reaches 31.65;
//   "blue" anomalies keep x2 high but never bring x1 below 31.65.
//
// The geometry builds in a safety margin of at least three noise standard
// deviations around both thresholds so the two classes stay separable after
// Gaussian noise is added. Each trace is checked against the reference
// classifier
//     (x2 > 22.46) U[49,287] (x1 <= 31.65)
// immediately after sampling: normal traces must have strictly positive
// robustness and anomalous traces strictly negative. A trace that fails the
// check is resampled; generation aborts with an error if separation cannot
// be achieved.
struct NavalGenConfig {
    int n_normal = 1000;
    int n_anomalous_red = 500;
    int n_anomalous_blue = 500;
    int samples_per_trace = 61;
    double horizon = 300.0;
    double noise_std = 0.75;
    std::uint64_t seed = 0;

    void check() const;
};

// Generates the dataset in memory. Positive traces are the normal ones,
// negative traces are the red anomalies followed by the blue ones.
Dataset generate_naval(const NavalGenConfig& cfg);

// Writes a dataset to `<root>/positive/*.csv` and `<root>/negative/*.csv`
// (creating directories as needed). If `manifest_json` is non-empty it is
// written verbatim to `<root>/manifest.json`. Numbers are written in shortest
// round-trip form so a reload reproduces the dataset bit for bit.
void save_dataset(const Dataset& d, const std::string& root,
                  const std::string& manifest_json = "");

// Writes one trace as CSV with a `time,<var>,...` header.
void write_trace_csv(const Trace& trace, const std::string& path);

}  // namespace stlmine
