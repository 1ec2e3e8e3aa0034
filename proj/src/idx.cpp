#include "wavg/idx.hpp"

#include <array>
#include <fstream>
#include <stdexcept>
#include <string>

namespace wavg {

namespace {

std::uint32_t read_be32(std::istream& in, const std::string& what) {
    std::array<unsigned char, 4> b{};
    in.read(reinterpret_cast<char*>(b.data()), 4);
    if (!in)
        throw std::runtime_error("idx: truncated file while reading " + what);
    return (static_cast<std::uint32_t>(b[0]) << 24) | (static_cast<std::uint32_t>(b[1]) << 16) |
           (static_cast<std::uint32_t>(b[2]) << 8) | static_cast<std::uint32_t>(b[3]);
}

void write_be32(std::ostream& out, std::uint32_t v) {
    const std::array<char, 4> b{static_cast<char>(v >> 24), static_cast<char>(v >> 16),
                                static_cast<char>(v >> 8), static_cast<char>(v)};
    out.write(b.data(), 4);
}

std::ifstream open_input(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("idx: cannot open " + path.string());
    return in;
}

void read_payload(std::istream& in, std::vector<std::uint8_t>& out, std::uint64_t size,
                  const std::filesystem::path& path) {
    out.resize(size);
    in.read(reinterpret_cast<char*>(out.data()), static_cast<std::streamsize>(size));
    if (static_cast<std::uint64_t>(in.gcount()) != size)
        throw std::runtime_error("idx: truncated payload in " + path.string() + " (expected " +
                                 std::to_string(size) + " bytes, got " +
                                 std::to_string(in.gcount()) + ")");
}

}  // namespace

IdxImageSet load_idx_images(const std::filesystem::path& path) {
    auto in = open_input(path);
    const std::uint32_t magic = read_be32(in, "image magic");
    if (magic != kIdxImageMagic) {
        if (magic == kIdxLabelMagic)
            throw std::runtime_error("idx: label file passed where images expected: " +
                                     path.string());
        throw std::runtime_error("idx: bad image magic in " + path.string() + " (got 0x" +
                                 std::to_string(magic) + ")");
    }
    IdxImageSet set;
    set.count = read_be32(in, "image count");
    set.rows = read_be32(in, "image rows");
    set.cols = read_be32(in, "image cols");
    const std::uint64_t total = static_cast<std::uint64_t>(set.count) * set.rows * set.cols;
    constexpr std::uint64_t kMaxPayload = std::uint64_t{1} << 33;  // 8 GiB guard
    if (set.rows > 1u << 16 || set.cols > 1u << 16 || total > kMaxPayload)
        throw std::runtime_error("idx: image dimensions overflow in " + path.string());
    read_payload(in, set.pixels, total, path);
    return set;
}

IdxLabelSet load_idx_labels(const std::filesystem::path& path) {
    auto in = open_input(path);
    const std::uint32_t magic = read_be32(in, "label magic");
    if (magic != kIdxLabelMagic) {
        if (magic == kIdxImageMagic)
            throw std::runtime_error("idx: image file passed where labels expected: " +
                                     path.string());
        throw std::runtime_error("idx: bad label magic in " + path.string() + " (got 0x" +
                                 std::to_string(magic) + ")");
    }
    IdxLabelSet set;
    set.count = read_be32(in, "label count");
    read_payload(in, set.labels, set.count, path);
    for (const std::uint8_t l : set.labels)
        if (l > 9)
            throw std::runtime_error("idx: label value " + std::to_string(l) + " out of range in " +
                                     path.string());
    return set;
}

void write_idx_images(const std::filesystem::path& path, const IdxImageSet& images) {
    const std::uint64_t total =
        static_cast<std::uint64_t>(images.count) * images.rows * images.cols;
    if (images.pixels.size() != total)
        throw std::invalid_argument("idx: pixel buffer does not match header dimensions");
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("idx: cannot write " + path.string());
    write_be32(out, kIdxImageMagic);
    write_be32(out, images.count);
    write_be32(out, images.rows);
    write_be32(out, images.cols);
    out.write(reinterpret_cast<const char*>(images.pixels.data()),
              static_cast<std::streamsize>(images.pixels.size()));
}

void write_idx_labels(const std::filesystem::path& path, const IdxLabelSet& labels) {
    if (labels.labels.size() != labels.count)
        throw std::invalid_argument("idx: label buffer does not match header count");
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("idx: cannot write " + path.string());
    write_be32(out, kIdxLabelMagic);
    write_be32(out, labels.count);
    out.write(reinterpret_cast<const char*>(labels.labels.data()),
              static_cast<std::streamsize>(labels.labels.size()));
}

LogisticProblem build_logistic_problem(const IdxImageSet& images, const IdxLabelSet& labels,
                                       int target_digit) {
    if (images.count != labels.count)
        throw std::invalid_argument("build_logistic_problem: image count " +
                                    std::to_string(images.count) + " != label count " +
                                    std::to_string(labels.count));
    LogisticProblem prob;
    prob.n = static_cast<int>(images.rows * images.cols);
    prob.m = static_cast<int>(images.count);
    prob.features.resize(images.pixels.size());
    for (std::size_t i = 0; i < images.pixels.size(); ++i)
        prob.features[i] = static_cast<float>(images.pixels[i]) / 255.0f;
    prob.labels.resize(labels.labels.size());
    for (std::size_t i = 0; i < labels.labels.size(); ++i)
        prob.labels[i] = labels.labels[i] == target_digit ? 1 : -1;
    prob.validate();
    return prob;
}

}  // namespace wavg
