#pragma once

///
/// \file kernel_cache.hpp
///
/// On-disk cache of built kernels keyed on (alpha, h, T, tol, n_samples).
/// Entries that fail to parse, fail validation or carry different parameters
/// are rebuilt and overwritten.
///

#include <cstdlib>
#include <filesystem>
#include <optional>
#include <string>

#include "soefrac/errors.hpp"
#include "soefrac/format.hpp"
#include "soefrac/kernel.hpp"
#include "soefrac/kernel_io.hpp"

namespace soefrac
{

/// --kernel-cache value if given, else SOEFRAC_CACHE_DIR, else
/// $HOME/.cache/soefrac, else <temp>/soefrac.
inline std::filesystem::path default_cache_dir(const std::optional<std::filesystem::path>& flag)
{
    if (flag)
    {
        return *flag;
    }
    if (const char* env = std::getenv("SOEFRAC_CACHE_DIR"); env && *env)
    {
        return env;
    }
    if (const char* home = std::getenv("HOME"); home && *home)
    {
        return std::filesystem::path(home) / ".cache" / "soefrac";
    }
    return std::filesystem::temp_directory_path() / "soefrac";
}

class KernelCache
{
public:
    explicit KernelCache(std::filesystem::path dir) : dir_(std::move(dir)) {}

    const std::filesystem::path& dir() const { return dir_; }

    static std::string key(double alpha, double h, double T, double tol, int n_samples)
    {
        return "kernel_a" + format_real(alpha) + "_h" + format_real(h) + "_T" + format_real(T) +
               "_tol" + format_real(tol) + "_n" + std::to_string(n_samples) + ".json";
    }

    std::filesystem::path path(double alpha, double h, double T, double tol, int n_samples) const
    {
        return dir_ / key(alpha, h, T, tol, n_samples);
    }

    /// Returns the cached kernel if present and consistent, else builds and stores it.
    RationalKernel get(double alpha, double h, double T, double tol, int n_samples = 100)
    {
        const auto file = path(alpha, h, T, tol, n_samples);
        if (auto hit = try_load(file, alpha, h, T, tol))
        {
            ++hits_;
            return *hit;
        }
        auto k = build_kernel(alpha, h, T, tol, n_samples);
        std::error_code ec;
        std::filesystem::create_directories(dir_, ec);
        if (ec)
        {
            throw error("cannot create kernel cache directory " + dir_.string());
        }
        save_kernel(file, k);
        ++misses_;
        return k;
    }

    long hits() const { return hits_; }
    long misses() const { return misses_; }

private:
    static std::optional<RationalKernel> try_load(const std::filesystem::path& file, double alpha,
                                                  double h, double T, double tol)
    {
        std::error_code ec;
        if (!std::filesystem::is_regular_file(file, ec))
        {
            return std::nullopt;
        }
        try
        {
            auto k = load_kernel(file);
            if (k.alpha == alpha && k.h == h && k.T == T && k.tol == tol)
            {
                return k;
            }
        }
        catch (const error&)
        {
        }
        return std::nullopt;
    }

    std::filesystem::path dir_;
    long hits_   = 0;
    long misses_ = 0;
};

} // namespace soefrac
