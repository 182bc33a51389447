#include "nsrenorm/field_io.hpp"

#include <cinttypes>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace nsrenorm {

namespace {

std::string fmt_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

} // namespace

std::string field_to_string(const VelocityField& f) {
    if (f.empty()) throw std::invalid_argument("save_field: uninitialized field");
    const Lattice& lat = f.lattice();
    std::string out;
    out.reserve(64 * f.mode_count() + 128);
    out += "nsrenorm-field 1\n";
    out += "grid_n " + std::to_string(lat.grid_n()) + "\n";
    out += "box_l " + fmt_double(lat.box_l()) + "\n";
    out += "modes " + std::to_string(f.mode_count()) + "\n";
    for (std::size_t i = 0; i < f.mode_count(); ++i) {
        const WaveVector& w = lat.modes()[i];
        const CVec3& v = f.coef(i);
        out += std::to_string(w.k[0]) + " " + std::to_string(w.k[1]) + " " +
               std::to_string(w.k[2]);
        for (int c = 0; c < 3; ++c) {
            out += " " + fmt_double(v[c].real()) + " " + fmt_double(v[c].imag());
        }
        out += "\n";
    }
    return out;
}

VelocityField field_from_string(const std::string& text) {
    std::istringstream in(text);
    std::string magic;
    int version = 0;
    in >> magic >> version;
    if (magic != "nsrenorm-field" || version != 1)
        throw std::runtime_error("load_field: not a version-1 field snapshot");
    std::string key;
    int grid_n = 0;
    double box_l = 0.0;
    std::size_t modes = 0;
    in >> key >> grid_n;
    if (key != "grid_n") throw std::runtime_error("load_field: missing grid_n");
    in >> key >> box_l;
    if (key != "box_l") throw std::runtime_error("load_field: missing box_l");
    in >> key >> modes;
    if (key != "modes") throw std::runtime_error("load_field: missing modes");

    auto lat = make_lattice(grid_n, box_l);
    if (modes != lat->mode_count())
        throw std::runtime_error("load_field: mode count does not match truncation");
    VelocityField f(lat);
    for (std::size_t i = 0; i < modes; ++i) {
        WaveVector w;
        in >> w.k[0] >> w.k[1] >> w.k[2];
        auto [idx, conj] = lat->lookup(w);
        if (idx == Lattice::npos || conj)
            throw std::runtime_error("load_field: row is not a canonical stored mode");
        CVec3 v;
        for (int c = 0; c < 3; ++c) {
            double re, im;
            in >> re >> im;
            v[c] = Complex(re, im);
        }
        if (!in) throw std::runtime_error("load_field: truncated snapshot");
        f.coef(idx) = v;
    }
    return f;
}

void save_field(const VelocityField& f, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("save_field: cannot open " + path);
    out << field_to_string(f);
}

VelocityField load_field(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("load_field: cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return field_from_string(ss.str());
}

} // namespace nsrenorm
