// SPDX-License-Identifier: Apache-2.0
#include "vidaug/image.hpp"

#include "vidaug/error.hpp"

#include <algorithm>
#include <cmath>

#include <opencv2/core.hpp>
#include <opencv2/imgcodecs.hpp>

namespace vidaug {

namespace {

RgbImage from_bgr(const cv::Mat& bgr) {
    RgbImage out(bgr.cols, bgr.rows);
    for (int y = 0; y < bgr.rows; ++y) {
        const auto* row = bgr.ptr<cv::Vec3b>(y);
        for (int x = 0; x < bgr.cols; ++x) {
            auto* p = out.px(x, y);
            p[0] = row[x][2];
            p[1] = row[x][1];
            p[2] = row[x][0];
        }
    }
    return out;
}

cv::Mat to_bgr(const RgbImage& img) {
    cv::Mat bgr(img.height, img.width, CV_8UC3);
    for (int y = 0; y < img.height; ++y) {
        auto* row = bgr.ptr<cv::Vec3b>(y);
        for (int x = 0; x < img.width; ++x) {
            const auto* p = img.px(x, y);
            row[x] = cv::Vec3b(p[2], p[1], p[0]);
        }
    }
    return bgr;
}

void write_mat(const std::filesystem::path& path, const cv::Mat& mat) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    bool ok = false;
    try {
        ok = cv::imwrite(path.string(), mat);
    } catch (const cv::Exception& e) {
        throw ImageIoError("cannot write " + path.string() + ": " + e.what());
    }
    if (!ok) throw ImageIoError("cannot write " + path.string());
}

}  // namespace

std::size_t BinaryMask::popcount() const noexcept {
    return static_cast<std::size_t>(std::count_if(data.begin(), data.end(), [](std::uint8_t b) { return b != 0; }));
}

GrayImage to_luminance(const RgbImage& rgb) {
    GrayImage out(rgb.width, rgb.height);
    for (int y = 0; y < rgb.height; ++y) {
        for (int x = 0; x < rgb.width; ++x) {
            const auto* p = rgb.px(x, y);
            const double luma = 0.299 * p[0] + 0.587 * p[1] + 0.114 * p[2];
            out.at(x, y) = static_cast<float>(std::clamp(luma / 255.0, 0.0, 1.0));
        }
    }
    return out;
}

RgbImage load_rgb(const std::filesystem::path& path) {
    cv::Mat bgr;
    try {
        bgr = cv::imread(path.string(), cv::IMREAD_COLOR);
    } catch (const cv::Exception& e) {
        throw ImageIoError("cannot read image " + path.string() + ": " + e.what());
    }
    if (bgr.empty()) throw ImageIoError("cannot read image " + path.string());
    return from_bgr(bgr);
}

GrayImage load_gray(const std::filesystem::path& path) { return to_luminance(load_rgb(path)); }

std::vector<std::uint8_t> encode_png(const RgbImage& img) {
    std::vector<std::uint8_t> buf;
    if (!cv::imencode(".png", to_bgr(img), buf)) throw ImageIoError("PNG encoding failed");
    return buf;
}

RgbImage decode_image(std::span<const std::uint8_t> bytes) {
    if (bytes.empty()) throw ImageIoError("empty image payload");
    const cv::Mat raw(1, static_cast<int>(bytes.size()), CV_8UC1, const_cast<std::uint8_t*>(bytes.data()));
    cv::Mat bgr;
    try {
        bgr = cv::imdecode(raw, cv::IMREAD_COLOR);
    } catch (const cv::Exception& e) {
        throw ImageIoError(std::string("cannot decode image payload: ") + e.what());
    }
    if (bgr.empty()) throw ImageIoError("cannot decode image payload");
    return from_bgr(bgr);
}

void write_png(const std::filesystem::path& path, const RgbImage& img) { write_mat(path, to_bgr(img)); }

void write_png(const std::filesystem::path& path, const Plane<float>& img) {
    cv::Mat gray(img.height, img.width, CV_8UC1);
    for (int y = 0; y < img.height; ++y) {
        for (int x = 0; x < img.width; ++x) {
            const double v = std::clamp(static_cast<double>(img.at(x, y)), 0.0, 1.0);
            gray.at<std::uint8_t>(y, x) = static_cast<std::uint8_t>(std::lround(v * 255.0));
        }
    }
    write_mat(path, gray);
}

void write_png(const std::filesystem::path& path, const BinaryMask& mask) {
    cv::Mat gray(mask.height, mask.width, CV_8UC1);
    for (int y = 0; y < mask.height; ++y) {
        for (int x = 0; x < mask.width; ++x) gray.at<std::uint8_t>(y, x) = mask.at(x, y) ? 255 : 0;
    }
    write_mat(path, gray);
}

}  // namespace vidaug
