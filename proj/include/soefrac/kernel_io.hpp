#pragma once

/// \file kernel_io.hpp
/// JSON serialization of RationalKernel:
///
///     {"alpha": r, "h": r, "T": r, "tol": r, "c_inf": r,
///      "modes": [{"c": r, "d": r}, ...]}
///
/// Reals are written with 17 significant digits, so a round trip is lossless.

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <nlohmann/json.hpp>

#include "soefrac/errors.hpp"
#include "soefrac/format.hpp"
#include "soefrac/kernel.hpp"

namespace soefrac
{

inline std::string kernel_to_json(const RationalKernel& k)
{
    std::string out;
    out += "{\"alpha\": " + format_real(k.alpha);
    out += ", \"h\": " + format_real(k.h);
    out += ", \"T\": " + format_real(k.T);
    out += ", \"tol\": " + format_real(k.tol);
    out += ", \"c_inf\": " + format_real(k.c_inf);
    out += ", \"modes\": [";
    for (std::size_t j = 0; j < k.modes(); ++j)
    {
        out += j == 0 ? "\n  " : ",\n  ";
        out += "{\"c\": " + format_real(k.c[j]) + ", \"d\": " + format_real(k.d[j]) + "}";
    }
    out += k.modes() == 0 ? "]}\n" : "\n]}\n";
    return out;
}

namespace detail
{

inline double json_real(const nlohmann::json& obj, const char* key)
{
    const auto it = obj.find(key);
    if (it == obj.end())
    {
        throw schema_error(std::string("kernel file: missing key \"") + key + "\"");
    }
    if (!it->is_number())
    {
        throw schema_error(std::string("kernel file: \"") + key + "\" is not a number");
    }
    return it->get<double>();
}

} // namespace detail

/// Parses and validates a kernel; throws schema_error or invariant_error.
inline RationalKernel kernel_from_json(const std::string& text)
{
    nlohmann::json doc;
    try
    {
        doc = nlohmann::json::parse(text);
    }
    catch (const nlohmann::json::parse_error& e)
    {
        throw schema_error(std::string("kernel file: ") + e.what());
    }
    if (!doc.is_object())
    {
        throw schema_error("kernel file: top level is not an object");
    }

    RationalKernel k;
    k.alpha = detail::json_real(doc, "alpha");
    k.h     = detail::json_real(doc, "h");
    k.T     = detail::json_real(doc, "T");
    k.tol   = detail::json_real(doc, "tol");
    k.c_inf = detail::json_real(doc, "c_inf");

    const auto modes = doc.find("modes");
    if (modes == doc.end() || !modes->is_array())
    {
        throw schema_error("kernel file: \"modes\" missing or not an array");
    }
    for (const auto& mode : *modes)
    {
        if (!mode.is_object())
        {
            throw schema_error("kernel file: mode entry is not an object");
        }
        k.c.push_back(detail::json_real(mode, "c"));
        k.d.push_back(detail::json_real(mode, "d"));
    }
    k.validate();
    return k;
}

inline void save_kernel(const std::filesystem::path& path, const RationalKernel& k)
{
    write_file_atomic(path, kernel_to_json(k));
}

inline RationalKernel load_kernel(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
    {
        throw error("cannot open kernel file " + path.string());
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return kernel_from_json(buf.str());
}

} // namespace soefrac
