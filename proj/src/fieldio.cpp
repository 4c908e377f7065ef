#include "wg/fieldio.hpp"

#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "wg/config.hpp"
#include "wg/report.hpp"

namespace wg {

void writeField(std::ostream& out, const SpectralField& f) {
    const auto& lat = f.lattice;
    out << "lattice " << formatDouble(lat.lambda) << ' ' << formatDouble(lat.L) << ' ' << formatDouble(lat.N) << ' '
        << toString(lat.geometry) << '\n';
    for (std::size_t i = 0; i < lat.size(); ++i)
        out << lat.k1Of(i) << ' ' << lat.k2Of(i) << ' ' << formatDouble(f.coeffs[i].real()) << ' '
            << formatDouble(f.coeffs[i].imag()) << '\n';
}

SpectralField readField(std::istream& in) {
    std::string tag, lam, L, N, geo;
    if (!(in >> tag >> lam >> L >> N >> geo) || tag != "lattice")
        throw std::invalid_argument("field file: bad header");
    const auto lat = buildLattice(parseDouble(lam), parseDouble(L), parseDouble(N), geometryFromString(geo));
    auto f = SpectralField::zeros(lat);
    for (std::size_t i = 0; i < lat.size(); ++i) {
        int k1 = 0, k2 = 0;
        std::string re, im;
        if (!(in >> k1 >> k2 >> re >> im)) throw std::invalid_argument("field file: truncated at point " + std::to_string(i));
        if (k1 != lat.k1Of(i) || k2 != lat.k2Of(i))
            throw std::invalid_argument("field file: point " + std::to_string(i) + " out of order");
        f.coeffs[i] = cplx(parseDouble(re), parseDouble(im));
    }
    std::string rest;
    if (in >> rest) throw std::invalid_argument("field file: trailing data");
    if (!f.isFinite()) throw std::invalid_argument("field file: non-finite coefficient");
    return f;
}

std::string fieldToString(const SpectralField& f) {
    std::ostringstream o;
    writeField(o, f);
    return o.str();
}

SpectralField fieldFromString(const std::string& s) {
    std::istringstream in(s);
    return readField(in);
}

void saveField(const std::string& path, const SpectralField& f) { writeFileAtomic(path, fieldToString(f)); }

SpectralField loadField(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot read field file " + path);
    return readField(in);
}

}  // namespace wg
