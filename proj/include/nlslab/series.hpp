#pragma once

// Sampled diagnostics of a run.  One row per sample; the CSV wire format
// is the canonical series representation (full double precision, '.'
// decimal, header row).  All L^p entries store the p-th power of the
// spatial norm so that windowed space-time norms are plain time
// quadratures of row values.

#include <string>
#include <vector>

namespace nlslab {

struct DiagnosticRow {
    double t = 0.0;
    double mass = 0.0;
    double energy = 0.0;
    double kinetic = 0.0;
    double l4 = 0.0;    // ||u||_4^4
    double linf = 0.0;  // ||u||_inf
    double action = 0.0;
    double term_bulk = 0.0;
    double term_boundary = 0.0;
    double term_quartic_err = 0.0;
    double term_gradient_err = 0.0;
    double flux = 0.0;
    double interaction = 0.0;
    double xi0 = 0.0;
    double virial = 0.0;
    double l3 = 0.0;        // ||u||_3^3
    double l5 = 0.0;        // ||u||_5^5
    double l10 = 0.0;       // ||u||_10^10
    double edge_amp = 0.0;  // max |u| over the sponge band / max |u|
};

enum class Termination { Completed, Blowup };

struct TimeSeries {
    std::vector<DiagnosticRow> rows;
    Termination termination = Termination::Completed;
    std::string reason;      // human-readable termination note
    int blowup_step = -1;    // step index at blowup, -1 otherwise

    // run metadata (not part of the CSV; carried for post-processing)
    double r0 = 0.0;
    double r_max = 0.0;
    int n = 0;
    double dt = 0.0;
    int sample_every = 1;
};

/// Header: t,mass,energy,kinetic,l4,linf,action,term_bulk,term_boundary,
/// term_quartic_err,term_gradient_err,flux,interaction,xi0,virial,
/// l3,l5,l10,edge_amp
void write_series_csv(const std::string& path, const TimeSeries& series);

/// Reads a series CSV.  Rows must carry at least the 15 leading columns;
/// a malformed row raises std::runtime_error naming the row number.
TimeSeries read_series_csv(const std::string& path);

}  // namespace nlslab
