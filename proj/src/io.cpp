#include "wcc/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <string>
#include <vector>

namespace wcc {

namespace {

std::vector<std::uint8_t> read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path);
    std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                    std::istreambuf_iterator<char>());
    if (in.bad()) throw IoError("read failure on " + path);
    return bytes;
}

[[noreturn]] void parse_fail(const std::string& path, std::size_t offset,
                             const std::string& what) {
    throw ParseError(path + ": " + what + " at byte offset " +
                     std::to_string(offset));
}

// Cursor over a PGM header; '#' starts a comment running to end of line.
struct PgmCursor {
    const std::vector<std::uint8_t>& bytes;
    const std::string& path;
    std::size_t pos = 0;

    bool eof() const { return pos >= bytes.size(); }

    void skip_space_and_comments() {
        while (!eof()) {
            const char c = static_cast<char>(bytes[pos]);
            if (c == '#') {
                while (!eof() && bytes[pos] != '\n') ++pos;
            } else if (std::isspace(static_cast<unsigned char>(c))) {
                ++pos;
            } else {
                break;
            }
        }
    }

    long parse_uint(const char* field) {
        skip_space_and_comments();
        if (eof()) parse_fail(path, pos, std::string("missing ") + field);
        if (!std::isdigit(bytes[pos])) {
            parse_fail(path, pos, std::string("malformed ") + field);
        }
        long value = 0;
        while (!eof() && std::isdigit(bytes[pos])) {
            value = value * 10 + (bytes[pos] - '0');
            if (value > 1'000'000'000L) {
                parse_fail(path, pos, std::string("oversized ") + field);
            }
            ++pos;
        }
        return value;
    }
};

}  // namespace

Tensor3 load_pgm(const std::string& path) {
    const auto bytes = read_file(path);
    if (bytes.size() < 2) parse_fail(path, 0, "missing magic number");
    const char m0 = static_cast<char>(bytes[0]);
    const char m1 = static_cast<char>(bytes[1]);
    if (m0 != 'P' || (m1 != '2' && m1 != '5')) {
        parse_fail(path, 0, "unsupported magic number");
    }
    const bool binary = (m1 == '5');

    PgmCursor cur{bytes, path, 2};
    const long width = cur.parse_uint("width");
    const long height = cur.parse_uint("height");
    if (width < 1 || height < 1) {
        parse_fail(path, cur.pos, "invalid dimensions");
    }
    const std::size_t maxval_at = cur.pos;
    const long maxval = cur.parse_uint("maxval");
    if (maxval < 1 || maxval > 65535) {
        parse_fail(path, maxval_at, "invalid maxval");
    }

    Tensor3 t(1, static_cast<int>(height), static_cast<int>(width));
    const std::size_t count = t.size();
    const float scale = 1.0f / static_cast<float>(maxval);

    if (binary) {
        // exactly one whitespace byte separates maxval from the payload
        if (cur.eof() || !std::isspace(bytes[cur.pos])) {
            parse_fail(path, cur.pos, "missing payload separator");
        }
        ++cur.pos;
        const int sample_bytes = maxval > 255 ? 2 : 1;
        const std::size_t need = count * sample_bytes;
        if (bytes.size() - cur.pos < need) {
            parse_fail(path, bytes.size(),
                       "truncated payload: need " + std::to_string(need) +
                           " bytes, have " + std::to_string(bytes.size() - cur.pos));
        }
        for (std::size_t i = 0; i < count; ++i) {
            long raw;
            if (sample_bytes == 1) {
                raw = bytes[cur.pos + i];
            } else {  // big-endian per the format
                raw = (long(bytes[cur.pos + 2 * i]) << 8) | bytes[cur.pos + 2 * i + 1];
            }
            t.data()[i] = static_cast<float>(raw) * scale;
        }
    } else {
        for (std::size_t i = 0; i < count; ++i) {
            const std::size_t at = cur.pos;
            const long raw = cur.parse_uint("sample");
            if (raw > maxval) parse_fail(path, at, "sample exceeds maxval");
            t.data()[i] = static_cast<float>(raw) * scale;
        }
    }
    return t;
}

void save_pgm(const Tensor3& t, const std::string& path, int maxval) {
    if (t.channels() != 1) throw DimError("save_pgm expects a single channel");
    if (maxval != 255 && maxval != 65535) {
        throw DimError("save_pgm maxval must be 255 or 65535");
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open " + path + " for writing");
    out << "P5\n" << t.width() << " " << t.height() << "\n" << maxval << "\n";
    for (float v : t.data()) {
        const float clamped = std::clamp(v, 0.0f, 1.0f);
        const long raw = std::lround(clamped * static_cast<float>(maxval));
        if (maxval > 255) {
            out.put(static_cast<char>((raw >> 8) & 0xff));
            out.put(static_cast<char>(raw & 0xff));
        } else {
            out.put(static_cast<char>(raw & 0xff));
        }
    }
    if (!out) throw IoError("write failure on " + path);
}

Tensor3 load_raw(const std::string& path, int channels, int height, int width) {
    Tensor3 t(channels, height, width);
    const auto bytes = read_file(path);
    const std::size_t expected = t.size() * 4;
    if (bytes.size() != expected) {
        throw ParseError(path + ": size mismatch: expected " +
                         std::to_string(expected) + " bytes for " +
                         std::to_string(channels) + "x" + std::to_string(height) +
                         "x" + std::to_string(width) + ", file has " +
                         std::to_string(bytes.size()));
    }
    static_assert(sizeof(float) == 4);
    // files are little-endian; so are all supported targets
    std::memcpy(t.data().data(), bytes.data(), expected);
    return t;
}

void save_raw(const Tensor3& t, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open " + path + " for writing");
    out.write(reinterpret_cast<const char*>(t.data().data()),
              static_cast<std::streamsize>(t.size() * 4));
    if (!out) throw IoError("write failure on " + path);
}

}  // namespace wcc
