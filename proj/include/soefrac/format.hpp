#pragma once

/// \file format.hpp
/// Locale-independent real formatting and atomic file output.

#include <charconv>
#include <filesystem>
#include <fstream>
#include <functional>
#include <string>
#include <system_error>
#include <thread>

#include "soefrac/errors.hpp"

namespace soefrac
{

/// Shortest form of "%.17g", independent of the C locale.
inline std::string format_real(double v)
{
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
    return std::string(buf, res.ptr);
}

/// Writes `content` to a temporary sibling of `path`, then renames it over `path`.
inline void write_file_atomic(const std::filesystem::path& path, const std::string& content)
{
    // unique per thread so concurrent writers never share a temporary
    auto tmp = path;
    tmp += ".tmp" + std::to_string(std::hash<std::thread::id>{}(std::this_thread::get_id()));
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out)
        {
            throw error("cannot open " + tmp.string() + " for writing");
        }
        out << content;
        out.close();
        if (!out)
        {
            throw error("write to " + tmp.string() + " failed");
        }
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec)
    {
        std::filesystem::remove(tmp, ec);
        throw error("cannot rename onto " + path.string());
    }
}

} // namespace soefrac
