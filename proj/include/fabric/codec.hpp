/**
 * @file codec.hpp
 * @brief PNG and binary PGM/PPM (P5/P6, maxval 255) reading and writing.
 */
#pragma once

#include "fabric/image.hpp"

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace fabric {

/// Malformed or unsupported encoded image. `offset()` is the byte position at
/// which parsing failed.
class DecodeError : public std::runtime_error {
public:
    DecodeError(const std::string& what, std::size_t offset);
    std::size_t offset() const noexcept { return offset_; }

private:
    std::size_t offset_;
};

/// Decodes PNG or P5/P6 bytes. Grayscale payloads are promoted to RGB by
/// replicating the channel.
RgbImage decode_image(std::span<const std::uint8_t> bytes);

std::vector<std::uint8_t> encode_png(const RgbImage& img);
/// Single-channel 8-bit PNG.
std::vector<std::uint8_t> encode_png(const GrayImage& img);
std::vector<std::uint8_t> encode_png(const BinaryMask& mask);

std::vector<std::uint8_t> encode_ppm(const RgbImage& img);
std::vector<std::uint8_t> encode_pgm(const GrayImage& img);
/// 0/255 PGM.
std::vector<std::uint8_t> encode_pgm(const BinaryMask& mask);

std::vector<std::uint8_t> read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::span<const std::uint8_t> bytes);

/// Reads an image file and converts it to grayscale.
GrayImage load_gray(const std::filesystem::path& path);
/// Writes a grayscale image; `.pgm` selects PGM, anything else PNG.
void save_gray(const std::filesystem::path& path, const GrayImage& img);
void save_mask(const std::filesystem::path& path, const BinaryMask& mask);
/// Reads a mask image; any non-zero luma is "on".
BinaryMask load_mask(const std::filesystem::path& path);

} // namespace fabric
