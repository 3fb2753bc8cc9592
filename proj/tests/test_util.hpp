#pragma once

#include <cmath>
#include <filesystem>
#include <fstream>
#include <string>
#include <unistd.h>
#include <vector>

#include "wcc/tensor.hpp"

namespace testutil {

// Unique scratch file removed on destruction.
class TempFile {
public:
    explicit TempFile(const std::string& tag) {
        static int counter = 0;
        path_ = (std::filesystem::temp_directory_path() /
                 ("wcc_test_" + tag + "_" + std::to_string(::getpid()) + "_" +
                  std::to_string(counter++)))
                    .string();
    }
    ~TempFile() {
        std::error_code ec;
        std::filesystem::remove(path_, ec);
    }
    const std::string& path() const { return path_; }

    void write_bytes(const std::vector<unsigned char>& bytes) const {
        std::ofstream out(path_, std::ios::binary);
        out.write(reinterpret_cast<const char*>(bytes.data()),
                  static_cast<std::streamsize>(bytes.size()));
    }
    void write_text(const std::string& text) const {
        std::ofstream out(path_, std::ios::binary);
        out << text;
    }
    std::vector<unsigned char> read_bytes() const {
        std::ifstream in(path_, std::ios::binary);
        return {std::istreambuf_iterator<char>(in),
                std::istreambuf_iterator<char>()};
    }

private:
    std::string path_;
};

inline double rel_error(const wcc::Tensor3& got, const wcc::Tensor3& want) {
    const double denom = wcc::l2_norm(want);
    if (denom == 0.0) return wcc::l2_norm(got);
    double acc = 0.0;
    for (std::size_t i = 0; i < got.size(); ++i) {
        const double d =
            static_cast<double>(got.data()[i]) - want.data()[i];
        acc += d * d;
    }
    return std::sqrt(acc) / denom;
}

}  // namespace testutil
