#pragma once

#include <string>
#include <vector>

#include "optirec/lowerbound.hpp"
#include "optirec/noise_sim.hpp"
#include "optirec/spectral.hpp"

namespace optirec {

// All numbers are printed with %.17g: enough digits to round-trip a double,
// so equal inputs produce byte-equal files.
std::string format_double(double v);

// Spectrum files: header "omega,re,im", one row per bin, omega increasing.
// The reader rebuilds the grid from the rows and demands a power-of-two row
// count, uniform spacing, and a grid centered on zero; any malformed row is
// reported with its line number. The hermitian flag is set from the data.
void write_spectrum_csv(const Spectrum& s, const std::string& path);
Spectrum read_spectrum_csv(const std::string& path);

// Signal files: header "t,value", uniform centered time grid.
void write_signal_csv(const SignalSamples& x, const std::string& path);
SignalSamples read_signal_csv(const std::string& path);

// JSON fragments/documents, hand-assembled so identical runs serialize to
// identical bytes.
std::string problem_json(const AnyProblem& p);
std::string to_json(const SimulationReport& r);
std::string to_json(const std::vector<CertificateRow>& rows, const AnyProblem& p,
                    double A);

}  // namespace optirec
