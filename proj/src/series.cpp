#include "nlslab/series.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace nlslab {

namespace {

const char* kHeader =
    "t,mass,energy,kinetic,l4,linf,action,term_bulk,term_boundary,"
    "term_quartic_err,term_gradient_err,flux,interaction,xi0,virial,"
    "l3,l5,l10,edge_amp";

std::string fmt(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

}  // namespace

void write_series_csv(const std::string& path, const TimeSeries& series) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open series file for writing: " + path);
    out << kHeader << "\n";
    for (const auto& r : series.rows) {
        out << fmt(r.t) << ',' << fmt(r.mass) << ',' << fmt(r.energy) << ','
            << fmt(r.kinetic) << ',' << fmt(r.l4) << ',' << fmt(r.linf) << ','
            << fmt(r.action) << ',' << fmt(r.term_bulk) << ','
            << fmt(r.term_boundary) << ',' << fmt(r.term_quartic_err) << ','
            << fmt(r.term_gradient_err) << ',' << fmt(r.flux) << ','
            << fmt(r.interaction) << ',' << fmt(r.xi0) << ',' << fmt(r.virial) << ','
            << fmt(r.l3) << ',' << fmt(r.l5) << ',' << fmt(r.l10) << ','
            << fmt(r.edge_amp) << "\n";
    }
    if (!out) throw std::runtime_error("write failure on series file: " + path);
}

TimeSeries read_series_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open series file: " + path);
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error("empty series file: " + path);

    TimeSeries series;
    int rownum = 0;
    while (std::getline(in, line)) {
        ++rownum;
        if (line.empty()) continue;
        std::vector<double> vals;
        std::stringstream ss(line);
        std::string tok;
        while (std::getline(ss, tok, ',')) {
            try {
                std::size_t pos = 0;
                vals.push_back(std::stod(tok, &pos));
                if (pos != tok.size()) throw std::invalid_argument(tok);
            } catch (const std::exception&) {
                throw std::runtime_error("bad value in series row " +
                                         std::to_string(rownum) + ": '" + tok + "'");
            }
        }
        if (vals.size() < 15)
            throw std::runtime_error("series row " + std::to_string(rownum) +
                                     " has " + std::to_string(vals.size()) +
                                     " columns, expected >= 15");
        DiagnosticRow r;
        r.t = vals[0];
        r.mass = vals[1];
        r.energy = vals[2];
        r.kinetic = vals[3];
        r.l4 = vals[4];
        r.linf = vals[5];
        r.action = vals[6];
        r.term_bulk = vals[7];
        r.term_boundary = vals[8];
        r.term_quartic_err = vals[9];
        r.term_gradient_err = vals[10];
        r.flux = vals[11];
        r.interaction = vals[12];
        r.xi0 = vals[13];
        r.virial = vals[14];
        if (vals.size() > 15) r.l3 = vals[15];
        if (vals.size() > 16) r.l5 = vals[16];
        if (vals.size() > 17) r.l10 = vals[17];
        if (vals.size() > 18) r.edge_amp = vals[18];
        series.rows.push_back(r);
    }
    return series;
}

}  // namespace nlslab
