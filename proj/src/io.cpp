#include "cylspec/io.hpp"

#include <array>
#include <cstring>
#include <fstream>
#include <numbers>

#include "cylspec/transform.hpp"

namespace cylspec {

uint32_t crc32_ieee(const uint8_t* data, size_t len) {
    static const auto table = [] {
        std::array<uint32_t, 256> t{};
        for (uint32_t i = 0; i < 256; ++i) {
            uint32_t c = i;
            for (int b = 0; b < 8; ++b) c = (c & 1) ? 0xEDB88320u ^ (c >> 1) : c >> 1;
            t[i] = c;
        }
        return t;
    }();
    uint32_t crc = 0xFFFFFFFFu;
    for (size_t i = 0; i < len; ++i) crc = table[(crc ^ data[i]) & 0xFFu] ^ (crc >> 8);
    return crc ^ 0xFFFFFFFFu;
}

namespace {

void put_u32(std::ostream& os, uint32_t v) {
    const uint8_t b[4] = {uint8_t(v), uint8_t(v >> 8), uint8_t(v >> 16), uint8_t(v >> 24)};
    os.write(reinterpret_cast<const char*>(b), 4);
}

uint32_t get_u32(std::istream& is) {
    uint8_t b[4];
    is.read(reinterpret_cast<char*>(b), 4);
    if (!is) throw FieldFileError("FieldFile: truncated header");
    return uint32_t(b[0]) | uint32_t(b[1]) << 8 | uint32_t(b[2]) << 16 |
           uint32_t(b[3]) << 24;
}

void write_common(const std::string& path, uint8_t kind, const GridSpec& spec,
                  const std::vector<double>& payload) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw FieldFileError("FieldFile: cannot open for writing: " + path);
    os.write("CCF1", 4);
    put_u32(os, kFieldFileVersion);
    os.put(char(kind));
    put_u32(os, uint32_t(spec.m));
    put_u32(os, uint32_t(spec.n));
    put_u32(os, uint32_t(spec.p));
    static_assert(sizeof(double) == 8);
    const auto* bytes = reinterpret_cast<const uint8_t*>(payload.data());
    const size_t nbytes = payload.size() * 8;
    os.write(reinterpret_cast<const char*>(bytes), std::streamsize(nbytes));
    put_u32(os, crc32_ieee(bytes, nbytes));
    if (!os) throw FieldFileError("FieldFile: write failed: " + path);
}

}  // namespace

void write_field(const std::string& path, const GridField& field) {
    write_common(path, 0, field.spec, field.values);
}

void write_field(const std::string& path, const CoeffTensor& coeffs) {
    std::vector<double> payload;
    payload.reserve(coeffs.data.size() * 2);
    for (const Complex& c : coeffs.data) {
        payload.push_back(c.real());
        payload.push_back(c.imag());
    }
    write_common(path, 1, coeffs.spec, payload);
}

FieldVariant read_field(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw FieldFileError("FieldFile: cannot open: " + path);
    char magic[4];
    is.read(magic, 4);
    if (!is || std::memcmp(magic, "CCF1", 4) != 0)
        throw FieldFileError("FieldFile: bad magic");
    const uint32_t version = get_u32(is);
    if (version != kFieldFileVersion)
        throw FieldFileError("FieldFile: unsupported version " + std::to_string(version));
    const int kind = is.get();
    if (kind != 0 && kind != 1) throw FieldFileError("FieldFile: unknown kind");
    const uint32_t m = get_u32(is), n = get_u32(is), p = get_u32(is);
    GridSpec spec{int(m), int(n), int(p)};
    spec.validate();
    const size_t count = size_t(spec.total_points()) * (kind == 1 ? 2 : 1);
    std::vector<double> payload(count);
    is.read(reinterpret_cast<char*>(payload.data()), std::streamsize(count * 8));
    if (!is) throw FieldFileError("FieldFile: truncated payload");
    const uint32_t crc = get_u32(is);
    const uint32_t actual =
        crc32_ieee(reinterpret_cast<const uint8_t*>(payload.data()), count * 8);
    if (crc != actual) throw FieldFileError("FieldFile: CRC mismatch");

    if (kind == 0) {
        GridField f(spec);
        f.values = std::move(payload);
        return f;
    }
    CoeffTensor t(spec);
    for (size_t i = 0; i < t.data.size(); ++i)
        t.data[i] = Complex(payload[2 * i], payload[2 * i + 1]);
    return t;
}

void export_slice_csv(const CoeffTensor& coeffs, SlicePlane plane, double value,
                      const std::string& path, int samples) {
    const bool angular_ok = value >= -std::numbers::pi && value < std::numbers::pi;
    const bool radial_ok = value >= -1.0 && value <= 1.0;
    if (plane == SlicePlane::theta_const ? !angular_ok : !radial_ok)
        throw DomainError("export_slice_csv: plane coordinate out of range");
    std::ofstream os(path);
    if (!os) throw FieldFileError("export_slice_csv: cannot open " + path);
    os.precision(17);
    const char* header =
        plane == SlicePlane::z_const     ? "r,theta,value\n"
        : plane == SlicePlane::theta_const ? "r,z,value\n"
                                           : "z,theta,value\n";
    os << header;
    for (int a = 0; a < samples; ++a)
        for (int b = 0; b < samples; ++b) {
            double r, z, th;
            double c1, c2;
            switch (plane) {
                case SlicePlane::z_const:
                    r = -1.0 + 2.0 * a / (samples - 1);
                    th = -std::numbers::pi + 2 * std::numbers::pi * b / samples;
                    z = value;
                    c1 = r;
                    c2 = th;
                    break;
                case SlicePlane::theta_const:
                    r = -1.0 + 2.0 * a / (samples - 1);
                    z = -1.0 + 2.0 * b / (samples - 1);
                    th = value;
                    c1 = r;
                    c2 = z;
                    break;
                default:
                    z = -1.0 + 2.0 * a / (samples - 1);
                    th = -std::numbers::pi + 2 * std::numbers::pi * b / samples;
                    r = value;
                    c1 = z;
                    c2 = th;
                    break;
            }
            os << c1 << ',' << c2 << ',' << evaluate_at(coeffs, r, z, th).real() << '\n';
        }
}

}  // namespace cylspec
