#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace moliere {

// Library-wide error type. CLI maps these to exit code 1.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// FNV-1a, used for content hashes of files and config strings.
inline std::uint64_t fnv1a64(std::string_view data, std::uint64_t h = 0xcbf29ce484222325ULL) {
  for (unsigned char c : data) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Stable per-purpose seed derivation from the global seed.
inline std::uint64_t derive_seed(std::uint64_t seed, std::string_view label) {
  return splitmix64(seed ^ fnv1a64(label));
}

std::string hex64(std::uint64_t v);

// Uniform in [0,1) from the top 53 bits; avoids std::uniform_real_distribution
// so streams are identical across standard libraries.
inline double rng_unit(std::mt19937_64& g) {
  return static_cast<double>(g() >> 11) * 0x1.0p-53;
}

inline std::uint64_t rng_below(std::mt19937_64& g, std::uint64_t n) { return g() % n; }

double rng_normal(std::mt19937_64& g);

// Rounds a double through its 9-significant-digit decimal form. File formats
// store weights at 9 significant digits; quantizing at creation time makes
// write/read an exact identity.
double quantize9(double x);

std::string format_g9(double x);
std::string format_float(float x);   // shortest round-trip form
std::string format_double(double x); // shortest round-trip form

std::uint64_t hash_file(const std::string& path);
std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);

std::vector<std::string> split_ws(std::string_view line);
std::vector<std::string> split_char(std::string_view line, char sep);

std::string join(std::span<const std::string> parts, std::string_view sep);

}  // namespace moliere
